//! Commutative differential graded algebras generated in degree one, and the
//! Lie algebras they come from.
//!
//! The Chevalley–Eilenberg differential uses the convention
//! `de^k = -Σ_{i<j} c_{ij}^k e^i ∧ e^j` where `[e_i, e_j] = Σ_k c_{ij}^k e_k`.
//! Every quadratic differential on degree-one generators arises this way, so
//! the bracket can always be read back off a [`Cdga`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exterior::{Derivation, ExteriorError, Form, Monomial, Vector, MAX_GENERATORS};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdgaError {
    #[error("Jacobi identity fails on (e{0}, e{1}, e{2})")]
    Jacobi(usize, usize, usize),
    #[error("d² ≠ 0: d(d e{generator}) = {value}")]
    DSquared { generator: usize, value: Form },
    #[error("matrix is not a derivation of the bracket: fails on (e{0}, e{1})")]
    NotADerivation(usize, usize),
    #[error("matrix has size {found}, expected {expected}×{expected}")]
    MatrixSize { expected: usize, found: String },
    #[error("d e{generator} must be a 2-form, got {value}")]
    NotQuadratic { generator: usize, value: Form },
    #[error("image of e{generator} must be a 1-form, got {value}")]
    NotLinear { generator: usize, value: Form },
    #[error("endomorphism does not commute with d on e{generator}: φ(de) = {lhs}, d(φe) = {rhs}")]
    NotCommuting {
        generator: usize,
        lhs: Form,
        rhs: Form,
    },
    #[error("bracket [e{0}, e{0}] must vanish")]
    SelfBracket(usize),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// A finite-dimensional Lie algebra over the rationals, by structure
/// constants on a basis `e_1, ..., e_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    // (i, j) with i < j, 1-based, to coordinates of [e_i, e_j]
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `[e_i, e_j] = value` (and so `[e_j, e_i] = -value`).
    pub fn set_bracket(&mut self, i: usize, j: usize, value: &Vector) -> Result<(), CdgaError> {
        for idx in [i, j] {
            if idx == 0 || idx > self.dim {
                return Err(ExteriorError::IndexOutOfRange {
                    index: idx,
                    dim: self.dim,
                }
                .into());
            }
        }
        if value.dim() != self.dim {
            return Err(ExteriorError::DimensionMismatch {
                left: self.dim,
                right: value.dim(),
            }
            .into());
        }
        if i == j {
            if value.coords().iter().all(Zero::is_zero) {
                return Ok(());
            }
            return Err(CdgaError::SelfBracket(i));
        }
        let (key, coords) = if i < j {
            ((i, j), value.coords().to_vec())
        } else {
            ((j, i), value.coords().iter().map(|c| -c.clone()).collect())
        };
        if coords.iter().all(Zero::is_zero) {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, coords);
        }
        Ok(())
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let zero = || vec![rational::zero(); self.dim];
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => zero(),
            std::cmp::Ordering::Less => self.brackets.get(&(i, j)).cloned().unwrap_or_else(zero),
            std::cmp::Ordering::Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|c| -c.clone()).collect())
                .unwrap_or_else(zero),
        }
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![rational::zero(); self.dim];
        for (&(i, j), c) in &self.brackets {
            // [x, y] picks up (x_i y_j - x_j y_i) [e_i, e_j]
            let w = &x[i - 1] * &y[j - 1] - &x[j - 1] * &y[i - 1];
            if w.is_zero() {
                continue;
            }
            for (k, ck) in c.iter().enumerate() {
                out[k] += &w * ck;
            }
        }
        out
    }

    pub fn nonzero_brackets(&self) -> impl Iterator<Item = ((usize, usize), &[Rational])> {
        self.brackets.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        Vector::basis(self.dim, i).coords().to_vec()
    }

    /// First basis triple `i < j < k` on which the Jacobi identity fails.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    let t1 = self.bracket(&self.bracket(&a, &b), &c);
                    let t2 = self.bracket(&self.bracket(&b, &c), &a);
                    let t3 = self.bracket(&self.bracket(&c, &a), &b);
                    if t1
                        .iter()
                        .zip(&t2)
                        .zip(&t3)
                        .any(|((x, y), z)| !(x + y + z).is_zero())
                    {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Nilpotency via the lower central series `g ⊃ [g,g] ⊃ [g,[g,g]] ⊃ ...`.
    pub fn is_nilpotent(&self) -> bool {
        let mut current: Vec<Vec<Rational>> = (1..=self.dim).map(|i| self.unit(i)).collect();
        loop {
            let mut next = Echelon::new();
            for i in 1..=self.dim {
                for v in &current {
                    next.insert(SparseVec::from_dense(&self.bracket(&self.unit(i), v)));
                }
            }
            if next.rank() == 0 {
                return true;
            }
            if next.rank() == current.len() {
                return false;
            }
            current = next.rows().iter().map(|r| r.to_dense(self.dim)).collect();
        }
    }

    /// Checks `D[e_i, e_j] = [D e_i, e_j] + [e_i, D e_j]` on all basis pairs,
    /// where column `i` of `d` is `D e_i`.
    pub fn check_derivation(&self, d: &Matrix) -> Result<(), CdgaError> {
        let n = self.dim;
        if d.nrows() != n || d.ncols() != n {
            return Err(CdgaError::MatrixSize {
                expected: n,
                found: format!("{}×{}", d.nrows(), d.ncols()),
            });
        }
        let apply = |v: &[Rational]| -> Vec<Rational> {
            (0..n)
                .map(|r| (0..n).fold(rational::zero(), |acc, c| acc + d.get(r, c) * &v[c]))
                .collect()
        };
        for i in 1..=n {
            for j in i + 1..=n {
                let (a, b) = (self.unit(i), self.unit(j));
                let lhs = apply(&self.bracket(&a, &b));
                let r1 = self.bracket(&apply(&a), &b);
                let r2 = self.bracket(&a, &apply(&b));
                if lhs
                    .iter()
                    .zip(r1.iter().zip(&r2))
                    .any(|(l, (x, y))| l != &(x + y))
                {
                    return Err(CdgaError::NotADerivation(i, j));
                }
            }
        }
        Ok(())
    }
}

/// A CDGA `(Λ(e^1, ..., e^n), d)` with all generators in degree one.
#[derive(Clone, PartialEq, Eq)]
pub struct Cdga {
    d: Derivation,
}

impl fmt::Debug for Cdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for i in 1..=self.dim() {
            let v = self.d.value(i);
            if !v.is_zero() {
                list.entry(&format_args!("de{i}"), &format_args!("{v}"));
            }
        }
        list.finish()
    }
}

impl Cdga {
    /// The CDGA with `de^i = differentials[i-1]`. Each value must be a
    /// 2-form; `d² = 0` is not checked here (see [`Cdga::check_d_squared`]).
    pub fn new(dim: usize, differentials: Vec<Form>) -> Result<Self, CdgaError> {
        if dim > MAX_GENERATORS {
            return Err(ExteriorError::TooManyGenerators(dim).into());
        }
        for (i, v) in differentials.iter().enumerate() {
            if v.dim() != dim {
                return Err(ExteriorError::DimensionMismatch {
                    left: dim,
                    right: v.dim(),
                }
                .into());
            }
            if !v.is_homogeneous_of(2) {
                return Err(CdgaError::NotQuadratic {
                    generator: i + 1,
                    value: v.clone(),
                });
            }
        }
        Ok(Cdga {
            d: Derivation::new(dim, 1, differentials)?,
        })
    }

    /// Like [`Cdga::new`], additionally requiring `d² = 0`.
    pub fn validated(dim: usize, differentials: Vec<Form>) -> Result<Self, CdgaError> {
        let c = Cdga::new(dim, differentials)?;
        c.check_d_squared()?;
        Ok(c)
    }

    pub fn abelian(dim: usize) -> Self {
        Cdga::new(dim, vec![Form::zero(dim); dim]).expect("zero differential")
    }

    pub fn dim(&self) -> usize {
        self.d.dim()
    }

    /// `d e^i`, 1-based.
    pub fn generator_differential(&self, i: usize) -> &Form {
        self.d.value(i)
    }

    pub fn differentials(&self) -> &[Form] {
        self.d.values()
    }

    pub fn is_formal_trivially(&self) -> bool {
        self.differentials().iter().all(Form::is_zero)
    }

    pub fn differential(&self, a: &Form) -> Form {
        self.d.apply(a)
    }

    pub fn try_differential(&self, a: &Form) -> Result<Form, CdgaError> {
        Ok(self.d.try_apply(a)?)
    }

    pub fn differential_monomial(&self, m: Monomial) -> Form {
        self.d.apply_monomial(m)
    }

    /// `Ok` iff `d(d e^k) = 0` for every generator; otherwise the first
    /// offending generator with the nonzero 3-form.
    pub fn check_d_squared(&self) -> Result<(), CdgaError> {
        for i in 1..=self.dim() {
            let dd = self.differential(self.d.value(i));
            if !dd.is_zero() {
                return Err(CdgaError::DSquared {
                    generator: i,
                    value: dd,
                });
            }
        }
        Ok(())
    }

    /// The bracket dual to `d`: `c_{ij}^k = -(coefficient of e^{ij} in de^k)`.
    pub fn lie_algebra(&self) -> LieAlgebra {
        let n = self.dim();
        let mut g = LieAlgebra::abelian(n);
        let mut acc: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for k in 1..=n {
            for (m, c) in self.d.value(k).terms() {
                let idx = m.indices();
                let entry = acc
                    .entry((idx[0], idx[1]))
                    .or_insert_with(|| vec![rational::zero(); n]);
                entry[k - 1] = -c.clone();
            }
        }
        for ((i, j), v) in acc {
            g.set_bracket(i, j, &Vector::new(v))
                .expect("indices in range");
        }
        g
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lie_algebra().is_nilpotent()
    }

    /// Product with a circle: one extra closed generator `e^{n+1}`.
    pub fn circle_product(&self) -> Cdga {
        self.direct_sum(&Cdga::abelian(1))
    }

    /// Tensor product of CDGAs (the model of a product manifold): generators
    /// of `other` are renumbered after those of `self`.
    pub fn direct_sum(&self, other: &Cdga) -> Cdga {
        let n = self.dim() + other.dim();
        let mut diffs: Vec<Form> = self.differentials().iter().map(|f| f.lifted(n)).collect();
        diffs.extend(
            other
                .differentials()
                .iter()
                .map(|f| f.shifted(n, self.dim())),
        );
        Cdga::new(n, diffs).expect("direct sum of valid CDGAs")
    }

    /// Model of the semidirect product `g ⊕_D ℝ`, where `g` is the Lie
    /// algebra of `self` and `[e_{n+1}, e_i] = D e_i` (column `i` of `d`).
    pub fn semidirect_extend(&self, d: &Matrix) -> Result<Cdga, CdgaError> {
        let g = self.lie_algebra();
        g.check_derivation(d)?;
        let n = self.dim();
        let mut ext = LieAlgebra::abelian(n + 1);
        for ((i, j), v) in g.nonzero_brackets() {
            let mut coords = v.to_vec();
            coords.push(rational::zero());
            ext.set_bracket(i, j, &Vector::new(coords))?;
        }
        for i in 1..=n {
            let mut col: Vec<Rational> = (0..n).map(|r| d.get(r, i - 1).clone()).collect();
            col.push(rational::zero());
            ext.set_bracket(n + 1, i, &Vector::new(col))?;
        }
        ce_differential(&ext)
    }

    /// Drops the last generator and every term containing it: the fibre of
    /// a circle-bundle presentation such as `h ⊂ h ⊕_D ℝ`.
    pub fn drop_last_generator(&self) -> Cdga {
        let n = self.dim();
        let last = Monomial::generator(n);
        let diffs = self.differentials()[..n - 1]
            .iter()
            .map(|f| {
                Form::from_terms(
                    n - 1,
                    f.terms()
                        .filter(|(m, _)| m.bits() & last.bits() == 0)
                        .map(|(m, c)| (*m, c.clone())),
                )
            })
            .collect();
        Cdga::new(n - 1, diffs).expect("restriction keeps 2-forms")
    }
}

/// Chevalley–Eilenberg CDGA of a Lie algebra; fails on a Jacobi violation.
pub fn ce_differential(g: &LieAlgebra) -> Result<Cdga, CdgaError> {
    let n = g.dim();
    let mut diffs = vec![Form::zero(n); n];
    for ((i, j), coords) in g.nonzero_brackets() {
        let m = Monomial::from_indices(&[i, j]).expect("i < j").0;
        for (k, c) in coords.iter().enumerate() {
            diffs[k].add_term(m, -c.clone());
        }
    }
    let c = Cdga::new(n, diffs)?;
    if let Some((i, j, k)) = g.jacobi_violation() {
        return Err(CdgaError::Jacobi(i, j, k));
    }
    debug_assert!(c.check_d_squared().is_ok());
    Ok(c)
}

/// An algebra endomorphism determined by the images of the generators
/// (each a 1-form), extended multiplicatively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    images: Vec<Form>,
}

impl Substitution {
    pub fn new(dim: usize, images: Vec<Form>) -> Result<Self, CdgaError> {
        if images.len() != dim {
            return Err(ExteriorError::DimensionMismatch {
                left: dim,
                right: images.len(),
            }
            .into());
        }
        for (i, f) in images.iter().enumerate() {
            if f.dim() != dim {
                return Err(ExteriorError::DimensionMismatch {
                    left: dim,
                    right: f.dim(),
                }
                .into());
            }
            if !f.is_homogeneous_of(1) {
                return Err(CdgaError::NotLinear {
                    generator: i + 1,
                    value: f.clone(),
                });
            }
        }
        Ok(Substitution { images })
    }

    pub fn identity(dim: usize) -> Self {
        Substitution {
            images: (1..=dim).map(|i| Form::generator(dim, i)).collect(),
        }
    }

    /// `e^i ↦ scale · e^i`.
    pub fn scaling(dim: usize, scale: &Rational) -> Self {
        Substitution {
            images: (1..=dim)
                .map(|i| Form::generator(dim, i).scale(scale))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> &Form {
        &self.images[i - 1]
    }

    pub fn apply(&self, a: &Form) -> Form {
        let dim = self.dim();
        let mut out = Form::zero(dim);
        for (m, c) in a.terms() {
            let mut term = Form::scalar(dim, c.clone());
            for i in m.indices() {
                term = term.wedge(&self.images[i - 1]);
                if term.is_zero() {
                    break;
                }
            }
            out += &term;
        }
        out
    }

    /// Checks `φ(d e^i) = d(φ e^i)` for every generator.
    pub fn check_commutes(&self, c: &Cdga) -> Result<(), CdgaError> {
        if c.dim() != self.dim() {
            return Err(ExteriorError::DimensionMismatch {
                left: c.dim(),
                right: self.dim(),
            }
            .into());
        }
        for i in 1..=c.dim() {
            let lhs = self.apply(c.generator_differential(i));
            let rhs = c.differential(&self.images[i - 1]);
            if lhs != rhs {
                return Err(CdgaError::NotCommuting {
                    generator: i,
                    lhs,
                    rhs,
                });
            }
        }
        Ok(())
    }
}
