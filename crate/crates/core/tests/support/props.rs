//! Property bodies behind the fuzzed acceptance criterion. Each runs 1000
//! accepted cases from a fixed seed, on models with at most 6 generators.

use cdga_core::cdga::{ce_differential, Cdga, LieAlgebra};
use cdga_core::cohomology::CohomologyRing;
use cdga_core::exterior::{Form, Vector};
use cdga_core::lefschetz::{
    k_cosymplectic_lefschetz, symplectic_lefschetz, xi_invariant_cohomology,
};
use cdga_core::linalg::Matrix;
use cdga_core::massey::triple_massey_with;
use cdga_core::rational::{int, Rational};
use cdga_core::registry::{corpus_names, registry};
use cdga_core::structures::{validate_cosymplectic, validate_symplectic};
use cdga_core::topology::{kunneth_betti, mapping_torus_betti, AutomorphismAction, BettiVector};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed, TestCaseError, TestRng, TestRunner};

use super::gen;
use super::oracle::{in_span, jacobi_holds, nondegenerate, OForm, OModel};

pub const CASES: u32 = 1000;

type Outcome = Result<(), TestCaseError>;

/// Shared configuration for the `proptest!` blocks: fixed seed, no
/// regression files.
pub fn config(max_global_rejects: u32) -> Config {
    Config {
        cases: CASES,
        max_global_rejects,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(0x5eed),
        ..Config::default()
    }
}

/// Runs `test` on `CASES` accepted inputs from a deterministic seed.
pub fn check<S>(strategy: S, test: impl Fn(S::Value) -> Outcome) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases: CASES,
        max_global_rejects: 200_000,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn d_squared_iff_jacobi() -> Result<(), String> {
    check(gen::brackets(6), |(n, table)| {
        let jacobi = jacobi_holds(n, &table);
        let oracle = OModel::from_brackets(n, &table);
        let c = gen::engine(&oracle);
        prop_assert_eq!(c.check_d_squared().is_ok(), jacobi);
        let mut g = LieAlgebra::abelian(n);
        for ((i, j), v) in &table {
            g.set_bracket(*i, *j, &Vector::new(v.clone())).unwrap();
        }
        let ce = ce_differential(&g);
        prop_assert_eq!(ce.is_ok(), jacobi);
        if let Ok(ce) = ce {
            prop_assert_eq!(ce, c);
        }
        Ok(())
    })
}

pub fn wedge_associative_and_graded_commutative() -> Result<(), String> {
    check(gen::form_triple(6), |(n, a, b, c)| {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        for k in 0..=n {
            for l in 0..=n {
                let (x, y) = (a.homogeneous_part(k), b.homogeneous_part(l));
                let sign = if k * l % 2 == 0 { int(1) } else { int(-1) };
                prop_assert_eq!(x.wedge(&y), y.wedge(&x).scale(&sign));
            }
        }
        let oracle = OForm::from_engine(&a).wedge(&OForm::from_engine(&b));
        prop_assert_eq!(a.wedge(&b), oracle.to_engine());
        Ok(())
    })
}

pub fn contraction_squares_to_zero() -> Result<(), String> {
    let s = (1usize..=6).prop_flat_map(|n| (gen::form(n, 6), gen::vector(n)));
    check(s, |(a, x)| {
        prop_assert!(a.contract(&x).contract(&x).is_zero());
        Ok(())
    })
}

pub fn poincare_duality_on_nilpotent_models() -> Result<(), String> {
    check(gen::nilpotent(1, 6), |m| {
        let c = gen::engine(&m);
        prop_assert!(c.is_nilpotent());
        let betti = CohomologyRing::new(&c).unwrap().betti();
        prop_assert_eq!(&betti, &m.betti());
        let reversed: Vec<usize> = betti.iter().rev().copied().collect();
        prop_assert_eq!(&betti, &reversed);
        Ok(())
    })
}

fn closed(m: &OModel, k: usize, cs: &[i64]) -> Form {
    gen::closed_combination(m, k, cs).to_engine()
}

fn sign(p: usize) -> Rational {
    if p % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// Moves every representative by an exact form and every primitive by a
/// compatible correction plus a closed form; the verdict must not change
/// and the value may only move inside the indeterminacy.
pub fn massey_representative_independence() -> Result<(), String> {
    let s = gen::nilpotent(3, 5).prop_flat_map(|m| {
        let n = m.n;
        let degrees = vec(prop_oneof![3 => Just(1usize), 1 => Just(2usize)], 3);
        let picks = vec(0usize..64, 3);
        let betas = (
            gen::homogeneous(n, 0, 2),
            gen::homogeneous(n, 1, 3),
            gen::homogeneous(n, 1, 3),
        );
        let zs = (vec(-2i64..=2, 1..12), vec(-2i64..=2, 1..12));
        (
            Just(m),
            degrees,
            picks,
            betas,
            gen::homogeneous(n, 1, 3),
            zs,
        )
    });
    check(s, |(m, degrees, picks, (b0, b1a, b1b), b1c, (z1, z2))| {
        let c = gen::engine(&m);
        let r = CohomologyRing::new(&c).unwrap();
        let p = [degrees[0], degrees[1], degrees[2]];
        prop_assume!(p.iter().sum::<usize>() <= m.n + 1);
        prop_assume!(p.iter().all(|&k| r.betti_number(k) > 0));
        let alphas: Vec<Form> = (0..3)
            .map(|i| {
                r.class_form(&r.basis_class(p[i], picks[i] % r.betti_number(p[i])))
                    .unwrap()
            })
            .collect();
        let sigma = r.primitive(&alphas[0].wedge(&alphas[1])).unwrap();
        let tau = r.primitive(&alphas[1].wedge(&alphas[2])).unwrap();
        let (Some(sigma), Some(tau)) = (sigma, tau) else {
            return Err(TestCaseError::reject("a cup product is nonzero"));
        };
        let base =
            triple_massey_with(&r, [&alphas[0], &alphas[1], &alphas[2]], &sigma, &tau).unwrap();

        let beta_of = |k: usize, pick: usize| -> Form {
            let forms = [&b0, &b1a, &b1b, &b1c];
            if k == 1 {
                b0.homogeneous_part(0)
            } else {
                forms[1 + pick % 3].clone()
            }
        };
        let beta: Vec<Form> = (0..3).map(|i| beta_of(p[i], i)).collect();
        let dbeta: Vec<Form> = beta.iter().map(|b| c.differential(b)).collect();
        let moved: Vec<Form> = (0..3).map(|i| &alphas[i] + &dbeta[i]).collect();
        let sigma2 = &sigma
            + &(beta[0].wedge(&alphas[1])
                + alphas[0].wedge(&beta[1]).scale(&sign(p[0]))
                + beta[0].wedge(&dbeta[1])
                + closed(&m, p[0] + p[1] - 1, &z1));
        let tau2 = &tau
            + &(beta[1].wedge(&alphas[2])
                + alphas[1].wedge(&beta[2]).scale(&sign(p[1]))
                + beta[1].wedge(&dbeta[2])
                + closed(&m, p[1] + p[2] - 1, &z2));
        let other =
            triple_massey_with(&r, [&moved[0], &moved[1], &moved[2]], &sigma2, &tau2).unwrap();
        prop_assert_eq!(&other.classes, &base.classes);
        prop_assert_eq!(other.nonvanishing, base.nonvanishing);
        let diff: Vec<Rational> = other
            .value
            .coords()
            .iter()
            .zip(base.value.coords())
            .map(|(x, y)| x - y)
            .collect();
        let ind: Vec<Vec<Rational>> = base
            .indeterminacy
            .iter()
            .map(|a| a.coords().to_vec())
            .collect();
        prop_assert!(
            in_span(&ind, &diff),
            "value moved outside the indeterminacy"
        );
        Ok(())
    })
}

/// For `K × S¹`, the cosymplectic map in degree `k` is bijective exactly
/// when the maps of `K` in degrees `k` and `k - 1` both are.
fn product_matches(k: &Cdga, omega: &Form) -> Result<(), String> {
    let s = validate_symplectic(k, omega).map_err(|e| e.to_string())?;
    let sym = symplectic_lefschetz(&CohomologyRing::new(k).unwrap(), &s).unwrap();
    let p = k.circle_product();
    let n = p.dim();
    let cs = validate_cosymplectic(&p, &Form::generator(n, n), &omega.lifted(n))
        .map_err(|e| e.to_string())?;
    let sub = xi_invariant_cohomology(&p, &cs).unwrap();
    let cos = k_cosymplectic_lefschetz(&sub, &cs).unwrap();
    for d in 0..=s.n {
        let expected = sym.map(d).bijective() && (d == 0 || sym.map(d - 1).bijective());
        if cos.map(d).bijective() != expected {
            return Err(format!(
                "degree {d}: product map bijective = {}",
                cos.map(d).bijective()
            ));
        }
    }
    if cos.lefschetz_property() != sym.lefschetz_property() {
        return Err("Lefschetz property differs between K and K x S1".into());
    }
    if !sub.splitting_holds() {
        return Err(format!(
            "splitting fails: {:?} vs {:?}",
            sub.invariant_betti(),
            sub.basic_betti()
        ));
    }
    Ok(())
}

pub fn product_proposition() -> Result<(), String> {
    for name in corpus_names() {
        let spec = registry(name).unwrap();
        if spec.eta.is_none() && spec.dim % 2 == 0 {
            if let Some(w) = &spec.omega {
                let k = spec.cdga().unwrap();
                product_matches(&k, w).map_err(|e| format!("{name}: {e}"))?;
            }
        }
    }
    check(
        gen::model_with_two_form(2, 4).prop_filter("even", |(m, _)| m.n % 2 == 0),
        |(m, w)| {
            prop_assume!(nondegenerate(&w, m.n / 2));
            product_matches(&gen::engine(&m), &w.to_engine()).map_err(TestCaseError::fail)
        },
    )
}

/// `dim H^k_ξ = dim H^k(F_ξ) + dim H^{k-1}(F_ξ)`.
pub fn splitting_identity() -> Result<(), String> {
    for name in corpus_names() {
        let spec = registry(name).unwrap();
        let (Some(eta), Some(omega)) = (&spec.eta, &spec.omega) else {
            continue;
        };
        let c = spec.cdga().unwrap();
        let s = validate_cosymplectic(&c, eta, omega).map_err(|e| format!("{name}: {e}"))?;
        let sub = xi_invariant_cohomology(&c, &s).unwrap();
        if !sub.splitting_holds() {
            return Err(format!(
                "{name}: {:?} vs {:?}",
                sub.invariant_betti(),
                sub.basic_betti()
            ));
        }
    }
    let s = gen::nilpotent(3, 5)
        .prop_flat_map(|m| (Just(m), vec(-2i64..=2, 1..8), vec(-2i64..=2, 1..16)))
        .prop_filter("odd", |(m, _, _)| m.n % 2 == 1);
    check(s, |(m, e, w)| {
        let c = gen::engine(&m);
        let eta = gen::closed_combination(&m, 1, &e).to_engine();
        let omega = gen::closed_combination(&m, 2, &w).to_engine();
        let Ok(s) = validate_cosymplectic(&c, &eta, &omega) else {
            return Err(TestCaseError::reject("not cosymplectic"));
        };
        let sub = xi_invariant_cohomology(&c, &s).unwrap();
        prop_assert!(
            sub.splitting_holds(),
            "{:?} vs {:?}",
            sub.invariant_betti(),
            sub.basic_betti()
        );
        Ok(())
    })
}

pub fn mapping_torus_euler_characteristic() -> Result<(), String> {
    let s = gen::betti_vector(8).prop_flat_map(|b| {
        let mats: Vec<_> = b.iter().map(|&n| vec(vec(-2i64..=2, n), n)).collect();
        (Just(b), mats)
    });
    check(s, |(b, mats)| {
        let bv = BettiVector::new(b.clone());
        let act = AutomorphismAction::new(
            mats.into_iter()
                .zip(&b)
                .map(|(rows, &n)| {
                    if n == 0 {
                        Matrix::zeros(0, 0)
                    } else {
                        Matrix::from_rows(
                            rows.into_iter()
                                .map(|r| r.into_iter().map(int).collect())
                                .collect(),
                        )
                        .unwrap()
                    }
                })
                .collect(),
        );
        let out = mapping_torus_betti(&bv, &act).unwrap();
        prop_assert_eq!(out.euler_characteristic(), 0);
        let id = mapping_torus_betti(&bv, &AutomorphismAction::identity(&bv)).unwrap();
        prop_assert_eq!(id, kunneth_betti(&bv, &BettiVector::circle()));
        Ok(())
    })
}

/// Every fuzzed property, by name.
pub const ALL: &[(&str, fn() -> Result<(), String>)] = &[
    ("d^2 = 0 iff Jacobi", d_squared_iff_jacobi),
    (
        "wedge associative, graded commutative",
        wedge_associative_and_graded_commutative,
    ),
    ("contraction squares to zero", contraction_squares_to_zero),
    (
        "Poincare duality on nilpotent models",
        poincare_duality_on_nilpotent_models,
    ),
    (
        "Massey representative independence",
        massey_representative_independence,
    ),
    ("product proposition", product_proposition),
    ("splitting identity", splitting_identity),
    (
        "mapping torus Euler characteristic",
        mapping_torus_euler_characteristic,
    ),
];
