//! Symplectic and cosymplectic data on a CDGA model.

use thiserror::Error;

use crate::cdga::Cdga;
use crate::cohomology::GradedBasis;
use crate::exterior::{Form, Vector};
use crate::linalg::{kernel_and_image, solve_with_image, SparseVec};
use crate::rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a symplectic model needs even dimension, got {0}")]
    OddDimension(usize),
    #[error("a cosymplectic model needs odd dimension, got {0}")]
    EvenDimension(usize),
    #[error("{name} has dimension {found}, model has {expected}")]
    DimensionMismatch {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{name} must be a {expected}-form")]
    WrongDegree { name: &'static str, expected: usize },
    #[error("{name} is not closed: d{name} = {witness}")]
    NotClosed { name: &'static str, witness: Form },
    #[error("degenerate: {0} vanishes")]
    Degenerate(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticStructure {
    pub omega: Form,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosymplecticStructure {
    pub eta: Form,
    pub omega: Form,
    pub n: usize,
    /// Reeb vector: `ι_ξ η = 1`, `ι_ξ ω = 0`.
    pub xi: Vector,
    /// Algebraic Reeb vector: `ι_θ(η ∧ ω^n) = ω^n`.
    pub theta: Vector,
}

impl CosymplecticStructure {
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }
}

fn check_form(c: &Cdga, name: &'static str, f: &Form, degree: usize) -> Result<(), StructureError> {
    if f.dim() != c.dim() {
        return Err(StructureError::DimensionMismatch {
            name,
            expected: c.dim(),
            found: f.dim(),
        });
    }
    if f.is_zero() {
        return Err(StructureError::Degenerate(name));
    }
    if !f.is_homogeneous_of(degree) {
        return Err(StructureError::WrongDegree {
            name,
            expected: degree,
        });
    }
    let df = c.differential(f);
    if !df.is_zero() {
        return Err(StructureError::NotClosed { name, witness: df });
    }
    Ok(())
}

pub fn validate_symplectic(c: &Cdga, omega: &Form) -> Result<SymplecticStructure, StructureError> {
    if c.dim() % 2 == 1 {
        return Err(StructureError::OddDimension(c.dim()));
    }
    check_form(c, "omega", omega, 2)?;
    let n = c.dim() / 2;
    if omega.pow(n).is_zero() {
        return Err(StructureError::Degenerate("omega^n"));
    }
    Ok(SymplecticStructure {
        omega: omega.clone(),
        n,
    })
}

pub fn validate_cosymplectic(
    c: &Cdga,
    eta: &Form,
    omega: &Form,
) -> Result<CosymplecticStructure, StructureError> {
    if c.dim() % 2 == 0 {
        return Err(StructureError::EvenDimension(c.dim()));
    }
    check_form(c, "eta", eta, 1)?;
    check_form(c, "omega", omega, 2)?;
    let n = c.dim() / 2;
    let xi = reeb(eta, omega)?;
    let theta = algebraic_reeb(eta, omega)?;
    Ok(CosymplecticStructure {
        eta: eta.clone(),
        omega: omega.clone(),
        n,
        xi,
        theta,
    })
}

/// Solves the linear system whose `i`-th column is `column(e_i)` against `rhs`;
/// `None` when the solution is not unique or does not exist.
fn unique_solution(
    dim: usize,
    column: impl Fn(&Vector) -> SparseVec,
    rhs: &SparseVec,
) -> Option<Vector> {
    let columns: Vec<SparseVec> = (1..=dim).map(|i| column(&Vector::basis(dim, i))).collect();
    let (kernel, image) = kernel_and_image(&columns);
    if !kernel.is_empty() {
        return None;
    }
    solve_with_image(&image, rhs).map(|x| Vector::new(x.to_dense(dim)))
}

/// The unique `ξ` with `ι_ξ η = 1` and `ι_ξ ω = 0`.
pub fn reeb(eta: &Form, omega: &Form) -> Result<Vector, StructureError> {
    let dim = eta.dim();
    let basis = GradedBasis::new(dim);
    let column = |x: &Vector| {
        let mut v = SparseVec::new();
        v.axpy(&eta.contract(x).scalar_part(), &SparseVec::unit(0));
        let w = basis.coords(&omega.contract(x), 1);
        let shifted = SparseVec::from_pairs(w.entries().iter().map(|(i, c)| (i + 1, c.clone())));
        v.axpy(&rational::one(), &shifted);
        v
    };
    unique_solution(dim, column, &SparseVec::unit(0))
        .ok_or(StructureError::Degenerate("eta ^ omega^n"))
}

/// The unique `θ` with `ι_θ(v ∧ w^n) = w^n`, where `2n + 1` is the dimension.
pub fn algebraic_reeb(v: &Form, w: &Form) -> Result<Vector, StructureError> {
    let dim = v.dim();
    if dim % 2 == 0 {
        return Err(StructureError::EvenDimension(dim));
    }
    let n = dim / 2;
    let wn = w.pow(n);
    let top = v.wedge(&wn);
    if top.is_zero() {
        return Err(StructureError::Degenerate("v ^ w^n"));
    }
    let basis = GradedBasis::new(dim);
    let column = |x: &Vector| basis.coords(&top.contract(x), 2 * n);
    unique_solution(dim, column, &basis.coords(&wn, 2 * n))
        .ok_or(StructureError::Degenerate("v ^ w^n"))
}
