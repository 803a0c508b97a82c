//! Cohomology of a degree-one generated CDGA, or of a subcomplex of it, by
//! exact sparse row reduction.
//!
//! Degree `k` works in the coordinates of a *chart*: either the monomial
//! basis of `Λ^k` (lexicographic order) or a fully reduced echelon basis of a
//! subspace of it. Representative cocycles are the fully reduced echelon rows
//! of `Z^k` that are complementary to `B^k`, ordered by leading monomial, so
//! they do not depend on the order in which anything was computed.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::cdga::{Cdga, CdgaError, Substitution};
use crate::exterior::{Form, Monomial};
use crate::linalg::{kernel_and_image, solve_with_image, Echelon, Matrix, SparseVec};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("form is not closed: d = {0}")]
    NotClosed(Form),
    #[error("form is not homogeneous: {0}")]
    NotHomogeneous(Form),
    #[error("form does not lie in the subcomplex: {0}")]
    NotInSubcomplex(Form),
    #[error("degree {degree} outside 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("class has {found} coordinates, degree {degree} has dimension {expected}")]
    BadClass {
        degree: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Cdga(#[from] CdgaError),
}

/// Monomial bases of every degree of `Λ(e^1..e^n)`, with reverse lookup.
#[derive(Clone, Debug)]
pub(crate) struct GradedBasis {
    monomials: Vec<Vec<Monomial>>,
    index: HashMap<Monomial, usize>,
}

impl GradedBasis {
    pub(crate) fn new(n: usize) -> Self {
        let monomials: Vec<Vec<Monomial>> =
            (0..=n).map(|k| Monomial::all_of_degree(n, k)).collect();
        let index = monomials
            .iter()
            .flat_map(|ms| ms.iter().enumerate().map(|(i, m)| (*m, i)))
            .collect();
        GradedBasis { monomials, index }
    }

    pub(crate) fn len(&self, k: usize) -> usize {
        self.monomials[k].len()
    }

    /// Coordinates of the degree-`k` part of `f`.
    pub(crate) fn coords(&self, f: &Form, k: usize) -> SparseVec {
        SparseVec::from_pairs(
            f.terms()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (self.index[m], c.clone())),
        )
    }

    pub(crate) fn form(&self, dim: usize, k: usize, v: &SparseVec) -> Form {
        Form::from_terms(
            dim,
            v.entries()
                .iter()
                .map(|(i, c)| (self.monomials[k][*i], c.clone())),
        )
    }
}

/// Which complex a [`CohomologyRing`] was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcomplex {
    Full,
    XiInvariant,
    Basic,
}

#[derive(Clone, Debug)]
struct DegreeData {
    /// Fully reduced basis of the subspace, in monomial coordinates.
    chart: Option<Echelon>,
    /// `B^k` in chart coordinates, tracking preimages in degree `k-1` chart coordinates.
    boundaries: Echelon,
    /// Rows of `boundaries` (spanning `B^k`) followed by the representatives,
    /// which are cleared at every other pivot column.
    classes: Echelon,
    /// Row of `classes` holding representative `i`.
    rep_rows: Vec<usize>,
    reps: Vec<Form>,
}

/// Per-degree cohomology with representatives and a class reduction map.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    cdga: Cdga,
    kind: Subcomplex,
    basis: GradedBasis,
    degrees: Vec<DegreeData>,
}

/// A class given by coordinates against the chosen representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohomologyClass {
    degree: usize,
    coords: Vec<Rational>,
}

impl CohomologyClass {
    pub fn new(degree: usize, coords: Vec<Rational>) -> Self {
        CohomologyClass { degree, coords }
    }

    pub fn zero(degree: usize, dim: usize) -> Self {
        CohomologyClass {
            degree,
            coords: vec![rational::zero(); dim],
        }
    }

    /// The class of representative `i` of degree `degree`.
    pub fn basis(degree: usize, dim: usize, i: usize) -> Self {
        let mut c = CohomologyClass::zero(degree, dim);
        c.coords[i] = rational::one();
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "H{}[{}]", self.degree, parts.join(", "))
    }
}

/// Matrices of an endomorphism on each `H^k`, columns being images of the
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    matrices: Vec<Matrix>,
}

impl InducedMap {
    pub fn new(matrices: Vec<Matrix>) -> Self {
        InducedMap { matrices }
    }

    pub fn matrix(&self, k: usize) -> &Matrix {
        &self.matrices[k]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }
}

impl CohomologyRing {
    /// Cohomology of the whole CDGA.
    pub fn new(cdga: &Cdga) -> Result<Self, CohomologyError> {
        cdga.check_d_squared()?;
        let n = cdga.dim();
        Ok(CohomologyRing::build(
            cdga,
            Subcomplex::Full,
            GradedBasis::new(n),
            vec![None; n + 1],
        ))
    }

    /// Cohomology of the subcomplex spanned, in each degree, by `spans[k]`
    /// (forms of degree `k`). The spans must be closed under `d`.
    pub(crate) fn of_subcomplex(
        cdga: &Cdga,
        kind: Subcomplex,
        spans: Vec<Vec<SparseVec>>,
    ) -> Result<Self, CohomologyError> {
        cdga.check_d_squared()?;
        let basis = GradedBasis::new(cdga.dim());
        let charts = spans
            .into_iter()
            .map(|vs| {
                let mut e = Echelon::new();
                for v in vs {
                    e.insert(v);
                }
                e.fully_reduce();
                Some(e)
            })
            .collect();
        Ok(CohomologyRing::build(cdga, kind, basis, charts))
    }

    fn build(
        cdga: &Cdga,
        kind: Subcomplex,
        basis: GradedBasis,
        charts: Vec<Option<Echelon>>,
    ) -> Self {
        let n = cdga.dim();
        let chart_vectors = |k: usize| -> Vec<SparseVec> {
            match &charts[k] {
                None => (0..basis.len(k)).map(SparseVec::unit).collect(),
                Some(e) => e.rows().to_vec(),
            }
        };
        let to_chart = |k: usize, v: &SparseVec| -> SparseVec {
            match &charts[k] {
                None => v.clone(),
                Some(e) => SparseVec::from_dense(
                    &e.coordinates(v).expect("subcomplex must be closed under d"),
                ),
            }
        };

        let mut kernels = Vec::with_capacity(n + 1);
        let mut images: Vec<Echelon> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let columns: Vec<SparseVec> = if k == n {
                vec![SparseVec::new(); chart_vectors(k).len()]
            } else {
                let dcols: Vec<SparseVec> = basis.monomials[k]
                    .iter()
                    .map(|m| basis.coords(&cdga.differential_monomial(*m), k + 1))
                    .collect();
                chart_vectors(k)
                    .iter()
                    .map(|s| {
                        let mut out = SparseVec::new();
                        for (i, c) in s.entries() {
                            out.axpy(c, &dcols[*i]);
                        }
                        to_chart(k + 1, &out)
                    })
                    .collect()
            };
            let (kernel, image) = kernel_and_image(&columns);
            kernels.push(kernel);
            images.push(image);
        }

        let mut degrees = Vec::with_capacity(n + 1);
        let mut prev_image = Echelon::tracking();
        for (k, (kernel, image)) in kernels.into_iter().zip(images).enumerate() {
            let boundaries = std::mem::replace(&mut prev_image, image);
            let mut classes = Echelon::new();
            for row in boundaries.rows() {
                classes.insert(row.clone());
            }
            let nb = classes.rank();
            for z in kernel {
                classes.insert(z);
            }
            // The first `nb` rows must keep spanning the coboundaries, so
            // only the representative rows are cleaned.
            classes.fully_reduce_from(nb);
            let mut rep_rows: Vec<usize> = (nb..classes.rank()).collect();
            rep_rows.sort_by_key(|&r| classes.pivot(r));
            let chart = charts[k].clone();
            let reps = rep_rows
                .iter()
                .map(|&r| {
                    let v = classes.row(r);
                    let mono = match &chart {
                        None => v.clone(),
                        Some(e) => {
                            let mut out = SparseVec::new();
                            for (i, c) in v.entries() {
                                out.axpy(c, e.row(*i));
                            }
                            out
                        }
                    };
                    basis.form(n, k, &mono)
                })
                .collect();
            degrees.push(DegreeData {
                chart,
                boundaries,
                classes,
                rep_rows,
                reps,
            });
        }
        CohomologyRing {
            cdga: cdga.clone(),
            kind,
            basis,
            degrees,
        }
    }

    pub fn cdga(&self) -> &Cdga {
        &self.cdga
    }

    pub fn kind(&self) -> Subcomplex {
        self.kind
    }

    /// Highest degree, the number of generators.
    pub fn top_degree(&self) -> usize {
        self.cdga.dim()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.reps.len()).collect()
    }

    pub fn betti_number(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.reps.len())
    }

    /// Dimension of the cochain space in degree `k` (of the subcomplex).
    pub fn cochain_dim(&self, k: usize) -> usize {
        match &self.degrees[k].chart {
            None => self.basis.len(k),
            Some(e) => e.rank(),
        }
    }

    pub fn representatives(&self, k: usize) -> &[Form] {
        &self.degrees[k].reps
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti()
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }

    fn check_degree(&self, k: usize) -> Result<(), CohomologyError> {
        if k > self.top_degree() {
            return Err(CohomologyError::DegreeOutOfRange {
                degree: k,
                top: self.top_degree(),
            });
        }
        Ok(())
    }

    fn chart_coords(&self, k: usize, z: &Form) -> Result<SparseVec, CohomologyError> {
        let v = self.basis.coords(z, k);
        match &self.degrees[k].chart {
            None => Ok(v),
            Some(e) => e
                .coordinates(&v)
                .map(|c| SparseVec::from_dense(&c))
                .ok_or_else(|| CohomologyError::NotInSubcomplex(z.clone())),
        }
    }

    fn chart_form(&self, k: usize, v: &SparseVec) -> Form {
        let mono = match &self.degrees[k].chart {
            None => v.clone(),
            Some(e) => {
                let mut out = SparseVec::new();
                for (i, c) in v.entries() {
                    out.axpy(c, e.row(*i));
                }
                out
            }
        };
        self.basis.form(self.cdga.dim(), k, &mono)
    }

    /// Class of a closed homogeneous form. The zero form has no degree of
    /// its own and reduces to the zero class of degree 0; use
    /// [`CohomologyRing::reduce_in_degree`] when the degree matters.
    pub fn reduce(&self, z: &Form) -> Result<CohomologyClass, CohomologyError> {
        if z.is_zero() {
            return self.reduce_in_degree(0, z);
        }
        match z.degree() {
            Some(k) => self.reduce_in_degree(k, z),
            None => Err(CohomologyError::NotHomogeneous(z.clone())),
        }
    }

    pub fn reduce_in_degree(&self, k: usize, z: &Form) -> Result<CohomologyClass, CohomologyError> {
        self.check_degree(k)?;
        if !z.is_homogeneous_of(k) {
            return Err(CohomologyError::NotHomogeneous(z.clone()));
        }
        let dz = self.cdga.differential(z);
        if !dz.is_zero() {
            return Err(CohomologyError::NotClosed(dz));
        }
        let v = self.chart_coords(k, z)?;
        let deg = &self.degrees[k];
        let red = deg.classes.reduce(&v);
        debug_assert!(red.residual.is_zero(), "closed forms lie in Z^k");
        let mut coords = vec![rational::zero(); deg.reps.len()];
        for (pos, &row) in deg.rep_rows.iter().enumerate() {
            if let Some(c) = red.coeffs.get(&row) {
                coords[pos] = c.clone();
            }
        }
        Ok(CohomologyClass { degree: k, coords })
    }

    /// True iff `z` is closed with zero class.
    pub fn is_exact(&self, z: &Form) -> Result<bool, CohomologyError> {
        Ok(self.reduce(z)?.is_zero())
    }

    fn check_class(&self, a: &CohomologyClass) -> Result<(), CohomologyError> {
        self.check_degree(a.degree)?;
        let expected = self.betti_number(a.degree);
        if a.coords.len() != expected {
            return Err(CohomologyError::BadClass {
                degree: a.degree,
                expected,
                found: a.coords.len(),
            });
        }
        Ok(())
    }

    /// The representative cocycle `Σ a_i rep_i`.
    pub fn class_form(&self, a: &CohomologyClass) -> Result<Form, CohomologyError> {
        self.check_class(a)?;
        let mut out = Form::zero(self.cdga.dim());
        for (c, rep) in a.coords.iter().zip(&self.degrees[a.degree].reps) {
            out += &rep.scale(c);
        }
        Ok(out)
    }

    pub fn zero_class(&self, k: usize) -> CohomologyClass {
        CohomologyClass::zero(k, self.betti_number(k))
    }

    pub fn basis_class(&self, k: usize, i: usize) -> CohomologyClass {
        CohomologyClass::basis(k, self.betti_number(k), i)
    }

    pub fn cup(
        &self,
        a: &CohomologyClass,
        b: &CohomologyClass,
    ) -> Result<CohomologyClass, CohomologyError> {
        let k = a.degree + b.degree;
        if k > self.top_degree() {
            self.check_class(a)?;
            self.check_class(b)?;
            return Ok(CohomologyClass {
                degree: k,
                coords: Vec::new(),
            });
        }
        let prod = self.class_form(a)?.wedge(&self.class_form(b)?);
        self.reduce_in_degree(k, &prod)
    }

    /// Some `β` with `dβ = z` (inside the subcomplex), or `None` when `z` is
    /// closed but not exact. The particular primitive is deterministic but
    /// otherwise unspecified.
    pub fn primitive(&self, z: &Form) -> Result<Option<Form>, CohomologyError> {
        let k = match z.degree() {
            Some(k) => k,
            None if z.is_zero() => return Ok(Some(Form::zero(self.cdga.dim()))),
            None => return Err(CohomologyError::NotHomogeneous(z.clone())),
        };
        self.check_degree(k)?;
        let dz = self.cdga.differential(z);
        if !dz.is_zero() {
            return Err(CohomologyError::NotClosed(dz));
        }
        if k == 0 {
            return Ok(None);
        }
        let v = self.chart_coords(k, z)?;
        Ok(solve_with_image(&self.degrees[k].boundaries, &v).map(|x| self.chart_form(k - 1, &x)))
    }

    /// Matrices of `φ^*` on every `H^k`, after checking `φ d = d φ`.
    pub fn induced_map(&self, phi: &Substitution) -> Result<InducedMap, CohomologyError> {
        phi.check_commutes(&self.cdga)?;
        let mut matrices = Vec::with_capacity(self.degrees.len());
        for (k, deg) in self.degrees.iter().enumerate() {
            let columns = deg
                .reps
                .iter()
                .map(|rep| self.reduce_in_degree(k, &phi.apply(rep)).map(|c| c.coords))
                .collect::<Result<Vec<_>, _>>()?;
            matrices.push(Matrix::from_columns(deg.reps.len(), &columns));
        }
        Ok(InducedMap { matrices })
    }

    /// Matrix, in the representative bases, of the linear map
    /// `H^k → H^{k'}` induced by `f` on cocycles. `f` must send cocycles to
    /// cocycles and coboundaries to coboundaries.
    pub fn matrix_of<F>(&self, from: usize, to: usize, f: F) -> Result<Matrix, CohomologyError>
    where
        F: Fn(&Form) -> Form,
    {
        self.check_degree(from)?;
        self.check_degree(to)?;
        let columns = self.degrees[from]
            .reps
            .iter()
            .map(|rep| self.reduce_in_degree(to, &f(rep)).map(|c| c.coords))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_columns(self.betti_number(to), &columns))
    }

    /// Basis of the closed forms of degree `k` in the (sub)complex.
    pub fn cocycle_basis(&self, k: usize) -> Vec<Form> {
        let deg = &self.degrees[k];
        deg.classes
            .rows()
            .iter()
            .map(|r| self.chart_form(k, r))
            .collect()
    }
}
