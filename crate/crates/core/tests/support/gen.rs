//! Strategies for random forms, bracket tables and nilpotent models.

use std::collections::BTreeMap;

use cdga_core::cdga::Cdga;
use cdga_core::exterior::{Form, Monomial, Vector};
use cdga_core::rational::{int, ratio, Rational};
use proptest::collection::vec;
use proptest::prelude::*;

use super::oracle::{q, OForm, OModel, Q};

pub fn coeff() -> impl Strategy<Value = Rational> {
    prop_oneof![
        4 => (-3i64..=3).prop_filter("nonzero", |c| *c != 0).prop_map(int),
        1 => (-3i64..=3, 2i64..=3).prop_filter("nonzero", |(p, _)| *p != 0).prop_map(|(p, r)| ratio(p, r)),
    ]
}

/// A random form on `n` generators with up to `terms` terms, mixed degree.
pub fn form(n: usize, terms: usize) -> impl Strategy<Value = Form> {
    vec((0u64..(1u64 << n), coeff()), 0..=terms).prop_map(move |ts| {
        Form::from_terms(n, ts.into_iter().map(|(b, c)| (Monomial::from_bits(b), c)))
    })
}

/// A random homogeneous `k`-form on `n` generators.
pub fn homogeneous(n: usize, k: usize, terms: usize) -> impl Strategy<Value = Form> {
    let monomials = Monomial::all_of_degree(n, k);
    let len = monomials.len();
    vec((0..len.max(1), coeff()), 0..=terms).prop_map(move |ts| {
        if monomials.is_empty() {
            return Form::zero(n);
        }
        Form::from_terms(n, ts.into_iter().map(|(i, c)| (monomials[i], c)))
    })
}

pub fn vector(n: usize) -> impl Strategy<Value = Vector> {
    vec(prop_oneof![2 => Just(int(0)), 3 => coeff()], n).prop_map(Vector::new)
}

/// `(n, form, form, form)` with `n ≤ max_n`.
pub fn form_triple(max_n: usize) -> impl Strategy<Value = (usize, Form, Form, Form)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), form(n, 4), form(n, 4), form(n, 4)))
}

/// Sparse antisymmetric structure constants: `(i, j) ↦ [e_i, e_j]` for `i < j`.
pub type Brackets = BTreeMap<(usize, usize), Vec<Q>>;

pub fn brackets(max_n: usize) -> impl Strategy<Value = (usize, Brackets)> {
    (2..=max_n).prop_flat_map(|n| {
        let entry = (
            1..=n,
            1..=n,
            1..=n,
            prop_oneof![Just(-1i64), Just(1), Just(2)],
        );
        (Just(n), vec(entry, 0..=5)).prop_map(|(n, es)| {
            let mut table: Brackets = BTreeMap::new();
            for (i, j, k, c) in es {
                if i == j {
                    continue;
                }
                let (a, b, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
                let v = table.entry((a, b)).or_insert_with(|| vec![q(0); n]);
                v[k - 1] += q(c * s);
            }
            table.retain(|_, v| v.iter().any(|x| *x != q(0)));
            (n, table)
        })
    })
}

/// Builds a nilpotent model by iterated extension: `d e^k` is a closed
/// 2-form in `e^1, ..., e^{k-1}`, drawn from `coeffs`.
pub fn nilpotent_from(n: usize, coeffs: &[i64]) -> OModel {
    let mut stream = coeffs.iter().copied().cycle();
    let mut dgen: Vec<OForm> = Vec::new();
    for k in 1..=n {
        let prev = OModel::new(
            k - 1,
            dgen.iter()
                .map(|f| OForm {
                    n: k - 1,
                    terms: f.terms.clone(),
                })
                .collect(),
        );
        let mut dk = OForm::zero(n);
        if k >= 3 {
            for z in prev.cocycles(2) {
                let c = stream.next().unwrap_or(0);
                if c != 0 {
                    dk = dk.plus(
                        &OForm {
                            n,
                            terms: z.terms.clone(),
                        }
                        .scale(&q(c)),
                    );
                }
            }
        }
        dgen.push(dk);
    }
    OModel::new(n, dgen)
}

/// Random nilpotent model with `min_n ≤ n ≤ max_n` generators.
pub fn nilpotent(min_n: usize, max_n: usize) -> impl Strategy<Value = OModel> {
    (min_n..=max_n).prop_flat_map(|n| {
        let weights = prop_oneof![5 => Just(0i64), 2 => Just(1), 2 => Just(-1), 1 => Just(2)];
        vec(weights, 64).prop_map(move |cs| nilpotent_from(n, &cs))
    })
}

pub fn engine(m: &OModel) -> Cdga {
    Cdga::new(m.n, m.dgen.iter().map(OForm::to_engine).collect())
        .expect("oracle models are quadratic")
}

/// A random closed form of degree `k`: an integer combination of the
/// oracle's cocycle basis.
pub fn closed_combination(m: &OModel, k: usize, coeffs: &[i64]) -> OForm {
    let mut out = OForm::zero(m.n);
    for (z, c) in m.cocycles(k).into_iter().zip(coeffs.iter().cycle()) {
        out = out.plus(&z.scale(&q(*c)));
    }
    out
}

/// Nilpotent model with a random closed 2-form.
pub fn model_with_two_form(min_n: usize, max_n: usize) -> impl Strategy<Value = (OModel, OForm)> {
    (nilpotent(min_n, max_n), vec(-2i64..=2, 1..16)).prop_map(|(m, cs)| {
        let w = closed_combination(&m, 2, &cs);
        (m, w)
    })
}

pub fn betti_vector(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    vec(0usize..6, 1..=max_len)
}
