//! Lefschetz maps on cohomology: symplectic, K-cosymplectic (on the
//! Reeb-invariant subcomplex) and the algebraic 1-Lefschetz map.

use thiserror::Error;

use crate::cdga::Cdga;
use crate::cohomology::{CohomologyError, CohomologyRing, GradedBasis, Subcomplex};
use crate::exterior::{Form, Vector};
use crate::linalg::{kernel_and_image, Matrix, SparseVec};
use crate::structures::{
    algebraic_reeb, CosymplecticStructure, StructureError, SymplecticStructure,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("{name} is not invariant under the Reeb flow: L_xi {name} = {witness}")]
    NotInvariant { name: &'static str, witness: Form },
    #[error("degree {degree} exceeds the half dimension {n}")]
    DegreeTooLarge { degree: usize, n: usize },
    #[error("form is not closed: d = {0}")]
    NotClosed(Form),
}

/// The Lefschetz map in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMap {
    pub degree: usize,
    pub target_degree: usize,
    pub matrix: Matrix,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
}

impl DegreeMap {
    fn new(degree: usize, target_degree: usize, matrix: Matrix) -> Self {
        DegreeMap {
            degree,
            target_degree,
            rank: matrix.rank(),
            source_dim: matrix.ncols(),
            target_dim: matrix.nrows(),
            matrix,
        }
    }

    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }

    pub fn bijective(&self) -> bool {
        self.injective() && self.surjective()
    }
}

/// Lefschetz maps for `k = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzReport {
    pub n: usize,
    pub maps: Vec<DegreeMap>,
}

impl LefschetzReport {
    pub fn map(&self, k: usize) -> &DegreeMap {
        &self.maps[k]
    }

    /// Bijective in degree one (vacuous when `n = 0`).
    pub fn lefschetz_type(&self) -> bool {
        self.maps.get(1).map_or(true, DegreeMap::bijective)
    }

    pub fn lefschetz_property(&self) -> bool {
        self.maps.iter().all(DegreeMap::bijective)
    }
}

/// `[α] ↦ [ω^{n-k} ∧ α]` from `H^k` to `H^{2n-k}`.
pub fn symplectic_lefschetz(
    r: &CohomologyRing,
    s: &SymplecticStructure,
) -> Result<LefschetzReport, LefschetzError> {
    let n = s.n;
    let maps = (0..=n)
        .map(|k| {
            let wp = s.omega.pow(n - k);
            let m = r.matrix_of(k, 2 * n - k, |a| wp.wedge(a))?;
            Ok(DegreeMap::new(k, 2 * n - k, m))
        })
        .collect::<Result<Vec<_>, LefschetzError>>()?;
    Ok(LefschetzReport { n, maps })
}

/// `L_ξ = d ι_ξ + ι_ξ d`.
pub fn lie_derivative(c: &Cdga, xi: &Vector, a: &Form) -> Form {
    c.differential(&a.contract(xi)) + c.differential(a).contract(xi)
}

/// The cosymplectic Lefschetz map on forms of degree `k ≤ n`:
/// `α ↦ ω^{n-k+1} ∧ ι_ξ α + ω^{n-k} ∧ η ∧ α`.
pub fn cosymplectic_lefschetz_form(
    s: &CosymplecticStructure,
    a: &Form,
) -> Result<Form, LefschetzError> {
    let k = match a.degree() {
        Some(k) => k,
        None if a.is_zero() => return Ok(a.clone()),
        None => return Err(CohomologyError::NotHomogeneous(a.clone()).into()),
    };
    if k > s.n {
        return Err(LefschetzError::DegreeTooLarge { degree: k, n: s.n });
    }
    Ok(s.omega.pow(s.n - k + 1).wedge(&a.contract(&s.xi))
        + s.omega.pow(s.n - k).wedge(&s.eta).wedge(a))
}

/// `d` of the cosymplectic Lefschetz image of a closed form; zero exactly
/// when that image is closed.
pub fn cosymplectic_closedness(
    c: &Cdga,
    s: &CosymplecticStructure,
    a: &Form,
) -> Result<Form, LefschetzError> {
    let da = c.differential(a);
    if !da.is_zero() {
        return Err(LefschetzError::NotClosed(da));
    }
    Ok(c.differential(&cosymplectic_lefschetz_form(s, a)?))
}

/// Cohomology of the Reeb-invariant complex `{L_ξ α = 0}` and of the basic
/// complex `{ι_ξ α = 0 = ι_ξ dα}`.
#[derive(Clone, Debug)]
pub struct SubcomplexCohomology {
    pub xi: Vector,
    pub invariant: CohomologyRing,
    pub basic: CohomologyRing,
    /// `L_ξ η = 0` and `L_ξ ω = 0`.
    pub invariant_structure: bool,
}

impl SubcomplexCohomology {
    pub fn invariant_betti(&self) -> Vec<usize> {
        self.invariant.betti()
    }

    pub fn basic_betti(&self) -> Vec<usize> {
        self.basic.betti()
    }

    /// `dim H^k_ξ = dim H^k(F_ξ) + dim H^{k-1}(F_ξ)` in every degree.
    pub fn splitting_holds(&self) -> bool {
        let inv = self.invariant_betti();
        let basic = self.basic_betti();
        (0..inv.len()).all(|k| inv[k] == basic[k] + if k > 0 { basic[k - 1] } else { 0 })
    }

    /// Matrices of `H^k_ξ → H^k` induced by inclusion.
    pub fn inclusion(&self, full: &CohomologyRing) -> Result<Vec<Matrix>, CohomologyError> {
        (0..=full.top_degree())
            .map(|k| {
                let columns = self
                    .invariant
                    .representatives(k)
                    .iter()
                    .map(|rep| full.reduce_in_degree(k, rep).map(|c| c.coords().to_vec()))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_columns(full.betti_number(k), &columns))
            })
            .collect()
    }
}

/// Kernel, in each degree, of the linear map sending a monomial `m` to the
/// blocks `maps[i](m)` of degree `degree(k) + shift_i`.
fn kernel_spans(
    c: &Cdga,
    basis: &GradedBasis,
    maps: &[(i64, &dyn Fn(&Form) -> Form)],
) -> Vec<Vec<SparseVec>> {
    let n = c.dim();
    (0..=n)
        .map(|k| {
            let columns: Vec<SparseVec> = monomial_forms(c, k)
                .iter()
                .map(|m| {
                    let mut out = SparseVec::new();
                    let mut offset = 0;
                    for (shift, f) in maps {
                        let target = k as i64 + shift;
                        if target < 0 || target > n as i64 {
                            continue;
                        }
                        let t = target as usize;
                        let v = basis.coords(&f(m), t);
                        let shifted = SparseVec::from_pairs(
                            v.entries().iter().map(|(i, x)| (i + offset, x.clone())),
                        );
                        out.axpy(&crate::rational::one(), &shifted);
                        offset += basis.len(t);
                    }
                    out
                })
                .collect();
            kernel_and_image(&columns).0
        })
        .collect()
}

fn monomial_forms(c: &Cdga, k: usize) -> Vec<Form> {
    crate::exterior::Monomial::all_of_degree(c.dim(), k)
        .into_iter()
        .map(|m| Form::monomial(c.dim(), m, crate::rational::one()))
        .collect()
}

pub fn xi_invariant_cohomology(
    c: &Cdga,
    s: &CosymplecticStructure,
) -> Result<SubcomplexCohomology, LefschetzError> {
    let basis = GradedBasis::new(c.dim());
    let xi = &s.xi;
    let lie = |a: &Form| lie_derivative(c, xi, a);
    let contract = |a: &Form| a.contract(xi);
    let contract_d = |a: &Form| c.differential(a).contract(xi);
    let invariant_spans = kernel_spans(c, &basis, &[(0, &lie)]);
    let basic_spans = kernel_spans(c, &basis, &[(-1, &contract), (0, &contract_d)]);
    let invariant = CohomologyRing::of_subcomplex(c, Subcomplex::XiInvariant, invariant_spans)?;
    let basic = CohomologyRing::of_subcomplex(c, Subcomplex::Basic, basic_spans)?;
    let invariant_structure = lie(&s.eta).is_zero() && lie(&s.omega).is_zero();
    Ok(SubcomplexCohomology {
        xi: xi.clone(),
        invariant,
        basic,
        invariant_structure,
    })
}

/// The K-cosymplectic Lefschetz map `H^k_ξ → H^{2n+1-k}_ξ`, `k = 0..=n`.
pub fn k_cosymplectic_lefschetz(
    sub: &SubcomplexCohomology,
    s: &CosymplecticStructure,
) -> Result<LefschetzReport, LefschetzError> {
    let c = sub.invariant.cdga();
    for (name, f) in [("eta", &s.eta), ("omega", &s.omega)] {
        let witness = lie_derivative(c, &s.xi, f);
        if !witness.is_zero() {
            return Err(LefschetzError::NotInvariant { name, witness });
        }
    }
    let n = s.n;
    let maps = (0..=n)
        .map(|k| {
            let m = sub.invariant.matrix_of(k, 2 * n + 1 - k, |a| {
                cosymplectic_lefschetz_form(s, a).expect("degree checked")
            })?;
            Ok(DegreeMap::new(k, 2 * n + 1 - k, m))
        })
        .collect::<Result<Vec<_>, LefschetzError>>()?;
    Ok(LefschetzReport { n, maps })
}

/// Result of the algebraic 1-Lefschetz test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicLefschetz {
    pub theta: Vector,
    pub map: DegreeMap,
}

impl AlgebraicLefschetz {
    pub fn is_one_lefschetz(&self) -> bool {
        self.map.bijective()
    }
}

/// `[z] ↦ [w^{n-1} ∧ v ∧ z + w^n ∧ ι_θ z]` from `H^1` to `H^{2n}`.
pub fn algebraic_1_lefschetz(
    r: &CohomologyRing,
    v: &Form,
    w: &Form,
) -> Result<AlgebraicLefschetz, LefschetzError> {
    let c = r.cdga();
    for f in [v, w] {
        let df = c.differential(f);
        if !df.is_zero() {
            return Err(LefschetzError::NotClosed(df));
        }
    }
    let theta = algebraic_reeb(v, w)?;
    let n = c.dim() / 2;
    if n == 0 {
        return Err(LefschetzError::DegreeTooLarge { degree: 1, n });
    }
    let a = w.pow(n - 1).wedge(v);
    let b = w.pow(n);
    let m = r.matrix_of(1, 2 * n, |z| a.wedge(z) + b.wedge(&z.contract(&theta)))?;
    Ok(AlgebraicLefschetz {
        theta,
        map: DegreeMap::new(1, 2 * n, m),
    })
}
