//! Built-in models.
//!
//! Names: `torus_N`, `heisenberg`, `kt`, `e4`, `g6_78`, `nil5_cosymp`,
//! `solv5`, `h7`, `g7`, `kt_x_kt`, `g6_78_x_g6_78`; any of them followed by
//! `_x_s1` is its product with a circle (`η = e^{n+1}`, same `ω`).
//!
//! The Boothby-Wang type example `Γ\BG` is not included: its structure
//! constants are not available in closed form here.

use thiserror::Error;

use crate::cdga::Cdga;
use crate::exterior::Form;
use crate::spec_file::{AlgebraSpec, Flag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("unknown model `{0}`")]
    Unknown(String),
    #[error("`{0}` already carries eta; a circle product is only defined for symplectic entries")]
    NotSymplectic(String),
}

/// Base names, in a fixed order (tori listed for dimensions 2 to 7).
pub const BASE_NAMES: &[&str] = &[
    "torus_2",
    "torus_3",
    "torus_4",
    "torus_5",
    "torus_6",
    "torus_7",
    "heisenberg",
    "kt",
    "e4",
    "g6_78",
    "nil5_cosymp",
    "solv5",
    "h7",
    "g7",
    "kt_x_kt",
    "g6_78_x_g6_78",
];

/// Circle products shipped in the corpus.
pub const PRODUCT_NAMES: &[&str] = &[
    "kt_x_s1",
    "e4_x_s1",
    "g6_78_x_s1",
    "kt_x_kt_x_s1",
    "g6_78_x_g6_78_x_s1",
];

/// All names used by `corpus --all`.
pub fn corpus_names() -> Vec<&'static str> {
    BASE_NAMES.iter().chain(PRODUCT_NAMES).copied().collect()
}

pub const MODEL_LEVEL_CAVEAT: &str =
    "model-level: not completely solvable, so CE cohomology need not be the manifold's; use the mapping torus";

fn f(dim: usize, s: &str) -> Form {
    Form::parse(dim, s).expect("built-in form")
}

fn from_diffs(name: &str, dim: usize, ds: &[(usize, &str)]) -> AlgebraSpec {
    let mut diffs = vec![Form::zero(dim); dim];
    for (i, s) in ds {
        diffs[i - 1] = f(dim, s);
    }
    AlgebraSpec::from_cdga(name, &Cdga::new(dim, diffs).expect("built-in model"))
}

fn from_text(text: &str) -> AlgebraSpec {
    AlgebraSpec::parse(text).expect("built-in spec")
}

fn standard_omega(dim: usize, pairs: usize) -> Form {
    let mut w = Form::zero(dim);
    for p in 0..pairs {
        w += &Form::generator(dim, 2 * p + 1).wedge(&Form::generator(dim, 2 * p + 2));
    }
    w
}

fn torus(n: usize) -> AlgebraSpec {
    let mut s = AlgebraSpec::from_cdga(&format!("torus_{n}"), &Cdga::abelian(n));
    s.flags.insert(Flag::Nilpotent);
    if n >= 1 {
        s.omega = Some(standard_omega(n, n / 2)).filter(|w| !w.is_zero());
        if n % 2 == 1 {
            s.eta = Some(Form::generator(n, n));
        }
    }
    s
}

fn kt() -> AlgebraSpec {
    let mut s = from_diffs("kt", 4, &[(3, "e12")]);
    s.omega = Some(f(4, "e13 + e24"));
    s.flags.insert(Flag::Nilpotent);
    s
}

fn g6_78() -> AlgebraSpec {
    let mut s = from_diffs(
        "g6_78",
        6,
        &[
            (1, "e25 - e16"),
            (2, "e45"),
            (3, "e24 + e36 + e46"),
            (4, "e46"),
            (5, "-e56"),
        ],
    );
    s.omega = Some(f(6, "e14 + e26 + e35"));
    s.flags.insert(Flag::CompletelySolvable);
    s.flags.insert(Flag::Unimodular);
    s
}

/// Product of two symplectic entries, generators of `b` after those of `a`.
fn symplectic_product(name: &str, a: &AlgebraSpec, b: &AlgebraSpec) -> AlgebraSpec {
    let ca = a.cdga().expect("built-in model");
    let cb = b.cdga().expect("built-in model");
    let c = ca.direct_sum(&cb);
    let n = c.dim();
    let mut s = AlgebraSpec::from_cdga(name, &c);
    let (wa, wb) = (a.omega.as_ref().unwrap(), b.omega.as_ref().unwrap());
    s.omega = Some(wa.lifted(n) + wb.shifted(n, ca.dim()));
    s.flags = a.flags.intersection(&b.flags).copied().collect();
    s
}

fn base(name: &str) -> Option<AlgebraSpec> {
    if let Some(n) = name.strip_prefix("torus_") {
        return n
            .parse()
            .ok()
            .filter(|n| (1..=crate::exterior::MAX_GENERATORS).contains(n))
            .map(torus);
    }
    let spec = match name {
        "heisenberg" => {
            let mut s = from_diffs("heisenberg", 3, &[(3, "e12")]);
            s.flags.insert(Flag::Nilpotent);
            s
        }
        "kt" => kt(),
        "e4" => {
            let mut s = from_diffs("e4", 4, &[(3, "e12"), (4, "e13")]);
            s.omega = Some(f(4, "e14 + e23"));
            s.flags.insert(Flag::Nilpotent);
            s
        }
        "g6_78" => g6_78(),
        "nil5_cosymp" => from_text(
            "name nil5_cosymp\ndim 5\nflag nilpotent\n\
             bracket [e1,e2] = -e4\nbracket [e1,e5] = -e3\n\
             eta = e5\nomega = e13 - e24\n",
        ),
        "solv5" => {
            let mut s = from_diffs(
                "solv5",
                5,
                &[
                    (1, "-e15"),
                    (2, "e25"),
                    (3, "-e15 - e35"),
                    (4, "-e25 + e45"),
                ],
            );
            s.eta = Some(f(5, "e5"));
            s.omega = Some(f(5, "e14 + e23"));
            s.flags.insert(Flag::CompletelySolvable);
            s.flags.insert(Flag::Unimodular);
            s
        }
        "h7" => from_text(
            "name h7\ndim 6\nflag nilpotent\n\
             bracket [e1,e2] = -e4\nbracket [e1,e3] = -e5\nbracket [e2,e3] = -e6\n\
             omega = -e16 + e25 + 2 e34\n",
        ),
        "g7" => {
            let mut s = from_text(
                "name g7\ndim 7\nflag unimodular\n\
                 d e1 = e27\nd e2 = -e17\nd e4 = e12\nd e5 = e13 + e67\nd e6 = e23 - e57\n\
                 eta = e7\nomega = -e16 + e25 + 2 e34\n\
                 monodromy e1 = -e2\nmonodromy e2 = e1\nmonodromy e5 = -e6\nmonodromy e6 = e5\n",
            );
            s.caveats.push(MODEL_LEVEL_CAVEAT.to_string());
            s
        }
        "kt_x_kt" => symplectic_product("kt_x_kt", &kt(), &kt()),
        "g6_78_x_g6_78" => symplectic_product("g6_78_x_g6_78", &g6_78(), &g6_78()),
        _ => return None,
    };
    Some(spec)
}

/// `K × S¹` for a symplectic spec `K`.
pub fn circle_product(k: &AlgebraSpec) -> Result<AlgebraSpec, RegistryError> {
    let name = k.name.clone().unwrap_or_default();
    if k.eta.is_some() || k.dim % 2 == 1 {
        return Err(RegistryError::NotSymplectic(name));
    }
    let c = k.cdga().expect("built-in model").circle_product();
    let n = c.dim();
    let mut s = AlgebraSpec::from_cdga(&format!("{name}_x_s1"), &c);
    s.eta = Some(Form::generator(n, n));
    s.omega = k.omega.as_ref().map(|w| w.lifted(n));
    s.flags = k.flags.clone();
    s.caveats = k.caveats.clone();
    Ok(s)
}

pub fn registry(name: &str) -> Result<AlgebraSpec, RegistryError> {
    if let Some(spec) = base(name) {
        return Ok(spec);
    }
    if let Some(stem) = name.strip_suffix("_x_s1") {
        let k = registry(stem)?;
        return circle_product(&k);
    }
    Err(RegistryError::Unknown(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_is_a_cdga() {
        for name in corpus_names() {
            let s = registry(name).unwrap();
            assert_eq!(s.name.as_deref(), Some(name));
            let c = s.cdga().unwrap();
            c.check_d_squared()
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(AlgebraSpec::parse(&s.to_text()).unwrap(), s, "{name}");
        }
    }

    #[test]
    fn named_entries() {
        let g = registry("g6_78").unwrap().cdga().unwrap();
        assert_eq!(g.generator_differential(1), &f(6, "e25 - e16"));
        assert_eq!(g.generator_differential(5), &f(6, "-e56"));
        assert_eq!(
            registry("torus_5").unwrap().cdga().unwrap(),
            Cdga::abelian(5)
        );
        let s = registry("solv5").unwrap().cdga().unwrap();
        assert_eq!(s.generator_differential(1), &f(5, "-e15"));
        assert_eq!(s.generator_differential(4), &f(5, "-e25 + e45"));
        let h = registry("h7").unwrap().cdga().unwrap();
        assert_eq!(h.generator_differential(6), &f(6, "e23"));
        let g7 = registry("g7").unwrap().cdga().unwrap();
        assert_eq!(g7.drop_last_generator(), h);
        assert_eq!(registry("nope"), Err(RegistryError::Unknown("nope".into())));
        assert!(matches!(
            registry("solv5_x_s1"),
            Err(RegistryError::NotSymplectic(_))
        ));
    }

    #[test]
    fn products() {
        let s = registry("kt_x_s1").unwrap();
        assert_eq!(s.dim, 5);
        assert_eq!(s.eta, Some(f(5, "e5")));
        let kk = registry("kt_x_kt").unwrap();
        assert_eq!(kk.omega, Some(f(8, "e13 + e24 + e57 + e68")));
    }
}
