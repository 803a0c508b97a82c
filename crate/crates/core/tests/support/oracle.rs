//! Nothing here calls into the engine's arithmetic: forms are maps from
//! sorted index lists to rationals, signs come from counting inversions,
//! `d` is expanded term by term, and linear algebra is dense Gaussian
//! elimination. Conversions to and from engine forms only copy data.

use std::collections::BTreeMap;

use cdga_core::cdga::Cdga;
use cdga_core::exterior::Form;
use num_rational::BigRational;
use num_traits::Zero;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Sorts `v`, returning the sign of the permutation, or `None` on a repeat.
pub fn sort_sign(mut v: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OForm {
    pub n: usize,
    pub terms: BTreeMap<Vec<usize>, Q>,
}

impl OForm {
    pub fn zero(n: usize) -> Self {
        OForm {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        OForm::term(n, &[], q(1))
    }

    pub fn gen(n: usize, i: usize) -> Self {
        OForm::term(n, &[i], q(1))
    }

    pub fn term(n: usize, idx: &[usize], c: Q) -> Self {
        let mut f = OForm::zero(n);
        f.add(idx.to_vec(), c);
        f
    }

    fn add(&mut self, idx: Vec<usize>, c: Q) {
        if let Some((s, sign)) = sort_sign(idx) {
            let e = self.terms.entry(s).or_insert_with(Q::zero);
            *e += c * q(sign);
            let gone = e.is_zero();
            if gone {
                self.terms.retain(|_, v| !v.is_zero());
            }
        }
    }

    pub fn plus(&self, o: &OForm) -> OForm {
        let mut r = self.clone();
        for (k, v) in &o.terms {
            r.add(k.clone(), v.clone());
        }
        r
    }

    pub fn scale(&self, c: &Q) -> OForm {
        let mut r = OForm::zero(self.n);
        for (k, v) in &self.terms {
            r.add(k.clone(), v * c);
        }
        r
    }

    pub fn wedge(&self, o: &OForm) -> OForm {
        let mut r = OForm::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut idx = a.clone();
                idx.extend(b);
                r.add(idx, x * y);
            }
        }
        r
    }

    /// `ι_{e_i}`: removing the factor at position `p` costs `(-1)^p`.
    pub fn contract(&self, i: usize) -> OForm {
        let mut r = OForm::zero(self.n);
        for (a, x) in &self.terms {
            if let Some(p) = a.iter().position(|&j| j == i) {
                let mut rest = a.clone();
                rest.remove(p);
                r.add(rest, if p % 2 == 0 { x.clone() } else { -x.clone() });
            }
        }
        r
    }

    /// Contraction with a vector given by coordinates.
    pub fn contract_vec(&self, v: &[Q]) -> OForm {
        let mut r = OForm::zero(self.n);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                r = r.plus(&self.contract(i + 1).scale(c));
            }
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_engine(f: &Form) -> OForm {
        let mut r = OForm::zero(f.dim());
        for (m, c) in f.terms() {
            r.add(m.indices(), c.clone());
        }
        r
    }

    pub fn to_engine(&self) -> Form {
        let mut f = Form::zero(self.n);
        for (k, v) in &self.terms {
            f += &Form::from_indices(self.n, k, v.clone()).unwrap();
        }
        f
    }

    /// Dense coordinates in degree `k` against [`basis`].
    pub fn coords(&self, k: usize) -> Vec<Q> {
        basis(self.n, k)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(Q::zero))
            .collect()
    }

    pub fn from_coords(n: usize, k: usize, v: &[Q]) -> OForm {
        let mut r = OForm::zero(n);
        for (m, c) in basis(n, k).into_iter().zip(v) {
            r.add(m, c.clone());
        }
        r
    }
}

/// Increasing `k`-subsets of `1..=n`, in lexicographic order.
pub fn basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Differential determined by the images of the generators.
#[derive(Clone, Debug)]
pub struct OModel {
    pub n: usize,
    pub dgen: Vec<OForm>,
}

impl OModel {
    pub fn new(n: usize, dgen: Vec<OForm>) -> Self {
        OModel { n, dgen }
    }

    pub fn from_engine(c: &Cdga) -> Self {
        OModel {
            n: c.dim(),
            dgen: c.differentials().iter().map(OForm::from_engine).collect(),
        }
    }

    /// `d e^k = -Σ_{i<j} c_ij^k e^i e^j`, with `c[(i, j)]` the coordinates
    /// of `[e_i, e_j]`.
    pub fn from_brackets(n: usize, c: &BTreeMap<(usize, usize), Vec<Q>>) -> Self {
        let mut dgen = vec![OForm::zero(n); n];
        for (&(i, j), v) in c {
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    dgen[k] = dgen[k].plus(&OForm::term(n, &[i, j], -x.clone()));
                }
            }
        }
        OModel { n, dgen }
    }

    /// Leibniz expansion: `d(e^{i1} ... e^{ik}) = Σ_p (-1)^p e^{i1} .. d e^{ip} .. e^{ik}`.
    pub fn d(&self, f: &OForm) -> OForm {
        let mut r = OForm::zero(self.n);
        for (idx, c) in &f.terms {
            for p in 0..idx.len() {
                let mut t = OForm::one(self.n).scale(c);
                for (s, &i) in idx.iter().enumerate() {
                    let factor = if s == p {
                        self.dgen[i - 1].clone()
                    } else {
                        OForm::gen(self.n, i)
                    };
                    t = t.wedge(&factor);
                }
                r = r.plus(&if p % 2 == 0 { t } else { t.scale(&q(-1)) });
            }
        }
        r
    }

    /// Matrix of `d: C^k → C^{k+1}`, one column per basis form.
    pub fn d_matrix(&self, k: usize) -> Vec<Vec<Q>> {
        let cols: Vec<Vec<Q>> = basis(self.n, k)
            .iter()
            .map(|m| self.d(&OForm::term(self.n, m, q(1))).coords(k + 1))
            .collect();
        transpose(&cols, basis(self.n, k + 1).len())
    }

    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.n).map(|k| rank(&self.d_matrix(k))).collect();
        (0..=self.n)
            .map(|k| basis(self.n, k).len() - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
            .collect()
    }

    /// Closed `k`-forms, as a basis of the kernel.
    pub fn cocycles(&self, k: usize) -> Vec<OForm> {
        nullspace(&self.d_matrix(k), basis(self.n, k).len())
            .into_iter()
            .map(|v| OForm::from_coords(self.n, k, &v))
            .collect()
    }

    /// Exact `k`-forms, as a spanning set.
    pub fn coboundaries(&self, k: usize) -> Vec<OForm> {
        if k == 0 {
            return Vec::new();
        }
        basis(self.n, k - 1)
            .iter()
            .map(|m| self.d(&OForm::term(self.n, m, q(1))))
            .collect()
    }

    pub fn is_exact(&self, f: &OForm, k: usize) -> bool {
        let b: Vec<Vec<Q>> = self.coboundaries(k).iter().map(|x| x.coords(k)).collect();
        in_span(&b, &f.coords(k))
    }

    /// Some `x` with `d x = f`, by a dense solve over all of `C^{k-1}`.
    pub fn primitive(&self, f: &OForm, k: usize) -> Option<OForm> {
        let m = self.d_matrix(k - 1);
        solve(&m, &f.coords(k), basis(self.n, k - 1).len())
            .map(|v| OForm::from_coords(self.n, k - 1, &v))
    }
}

fn transpose(cols: &[Vec<Q>], nrows: usize) -> Vec<Vec<Q>> {
    (0..nrows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

/// Row echelon form in place; returns pivot columns.
fn echelon(m: &mut [Vec<Q>]) -> Vec<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut m = m.to_vec();
    echelon(&mut m).len()
}

/// Kernel of an `nrows × ncols` matrix.
pub fn nullspace(m: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = m.to_vec();
    let pivots = echelon(&mut m);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); ncols];
            v[free] = q(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

pub fn in_span(vs: &[Vec<Q>], v: &[Q]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let mut with = vs.to_vec();
    with.push(v.to_vec());
    rank(vs) == rank(&with)
}

/// Solves `m x = b` for an `nrows × ncols` matrix.
pub fn solve(m: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect())
        .collect();
    if aug.is_empty() {
        return Some(vec![Q::zero(); ncols]);
    }
    let pivots = echelon(&mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Jacobi identity on basis triples, straight from the bracket table.
pub fn jacobi_holds(n: usize, c: &BTreeMap<(usize, usize), Vec<Q>>) -> bool {
    let br = |x: &[Q], y: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            for j in 0..n {
                if x[i].is_zero() || y[j].is_zero() || i == j {
                    continue;
                }
                let (a, b, s) = if i < j {
                    (i + 1, j + 1, q(1))
                } else {
                    (j + 1, i + 1, q(-1))
                };
                if let Some(v) = c.get(&(a, b)) {
                    for k in 0..n {
                        out[k] += &x[i] * &y[j] * &s * &v[k];
                    }
                }
            }
        }
        out
    };
    let e = |i: usize| -> Vec<Q> {
        (0..n)
            .map(|k| if k == i { q(1) } else { Q::zero() })
            .collect()
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = br(&br(&e(i), &e(j)), &e(k));
                let b = br(&br(&e(j), &e(k)), &e(i));
                let cc = br(&br(&e(k), &e(i)), &e(j));
                if (0..n).any(|t| !(&a[t] + &b[t] + &cc[t]).is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Result of the exhaustive Massey computation.
#[derive(Debug)]
pub struct OMassey {
    pub value: OForm,
    pub nonvanishing: bool,
    pub indeterminacy_zero: bool,
}

/// `⟨α1, α2, α3⟩` over every choice of primitives.
///
/// The primitives `σ, τ` range over affine spaces `σ0 + Z`, `τ0 + Z`, with
/// `Z` all closed forms of the right degree. The set of values is
/// `v0 + α1 ∧ Z + Z ∧ α3`, taken modulo every exact form; it contains zero
/// exactly when the product vanishes.
pub fn massey_exhaustive(m: &OModel, a: [&OForm; 3], p: [usize; 3]) -> Option<OMassey> {
    let s = m.primitive(&a[0].wedge(a[1]), p[0] + p[1])?;
    let t = m.primitive(&a[1].wedge(a[2]), p[1] + p[2])?;
    let deg = p[0] + p[1] + p[2] - 1;
    let sign = if (p[0] + 1) % 2 == 0 { q(1) } else { q(-1) };
    let value = a[0].wedge(&t).plus(&s.wedge(a[2]).scale(&sign));
    let mut moves: Vec<Vec<Q>> = Vec::new();
    for z in m.cocycles(p[1] + p[2] - 1) {
        moves.push(a[0].wedge(&z).coords(deg));
    }
    for z in m.cocycles(p[0] + p[1] - 1) {
        moves.push(z.wedge(a[2]).coords(deg));
    }
    let exact: Vec<Vec<Q>> = m.coboundaries(deg).iter().map(|x| x.coords(deg)).collect();
    let mut all = moves.clone();
    all.extend(exact.iter().cloned());
    let nonvanishing = !in_span(&all, &value.coords(deg));
    let indeterminacy_zero = moves.iter().all(|v| in_span(&exact, v));
    Some(OMassey {
        value,
        nonvanishing,
        indeterminacy_zero,
    })
}

/// Top power of a 2-form is nonzero.
pub fn nondegenerate(w: &OForm, n: usize) -> bool {
    let mut p = OForm::one(w.n);
    for _ in 0..n {
        p = p.wedge(w);
    }
    !p.is_zero()
}
