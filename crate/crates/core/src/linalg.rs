//! Sparse exact linear algebra over the rationals.
//!
//! Everything is built on [`Echelon`], a set of sparse rows with pairwise
//! distinct pivots where each pivot is the row's lowest nonzero index and is
//! normalized to 1. Pivoting always takes the lowest available index, so
//! results are reproducible run to run.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::{self, Rational};

/// Sparse vector, entries sorted by index, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec {
            entries: Vec::new(),
        }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec {
            entries: vec![(index, rational::one())],
        }
    }

    /// From arbitrary `(index, value)` pairs; duplicates are summed.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Rational)>>(pairs: I) -> Self {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, v) in pairs {
            *map.entry(i).or_insert_with(rational::zero) += v;
        }
        SparseVec {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![rational::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Rational {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => rational::zero(),
        }
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: &Rational, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, _)), Some((ib, _))) if ia < ib => out.push(a.next().unwrap()),
                (Some((ia, _)), Some((ib, _))) if ia > ib => {
                    let (i, v) = b.next().unwrap();
                    out.push((*i, c * v));
                }
                (Some(_), Some(_)) => {
                    let (i, va) = a.next().unwrap();
                    let (_, vb) = b.next().unwrap();
                    let v = va + c * vb;
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (i, v) = b.next().unwrap();
                    out.push((*i, c * v));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let mut acc = rational::zero();
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() && q < other.entries.len() {
            let (i, a) = &self.entries[p];
            let (j, b) = &other.entries[q];
            match i.cmp(j) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    acc += a * b;
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }
}

/// What happened when a vector was offered to an [`Echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// Independent; stored as row `row`.
    Added { row: usize },
    /// Dependent; the recorded combination (when tracking) expresses it in
    /// terms of earlier inputs.
    Dependent { relation: SparseVec },
}

/// Rows in echelon form with lowest-index pivots normalized to 1.
///
/// When tracking is enabled, every row also records which linear
/// combination of the inserted inputs (numbered in insertion order) it is.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
    track: bool,
    inserted: usize,
}

/// Result of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// The part not in the span (zero iff the input was in the span).
    pub residual: SparseVec,
    /// Coefficient of each row: `input = Σ coeffs[r]·row_r + residual`.
    pub coeffs: BTreeMap<usize, Rational>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn tracking() -> Self {
        Echelon {
            track: true,
            ..Echelon::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.rows[r]
    }

    /// Combination of inputs producing row `r` (tracking mode only).
    pub fn combo(&self, r: usize) -> &SparseVec {
        &self.combos[r]
    }

    pub fn pivot(&self, r: usize) -> usize {
        self.rows[r].leading().expect("rows are nonzero")
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pivots.iter().map(|(p, r)| (*p, *r))
    }

    pub fn row_with_pivot(&self, pivot: usize) -> Option<usize> {
        self.pivots.get(&pivot).copied()
    }

    pub fn reduce(&self, v: &SparseVec) -> Reduction {
        let (residual, coeffs, _) = self.reduce_inner(v.clone(), None);
        Reduction { residual, coeffs }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).residual.is_zero()
    }

    fn reduce_inner(
        &self,
        mut v: SparseVec,
        mut combo: Option<SparseVec>,
    ) -> (SparseVec, BTreeMap<usize, Rational>, Option<SparseVec>) {
        let mut coeffs = BTreeMap::new();
        let mut start = 0;
        loop {
            let hit = v.entries[start..]
                .iter()
                .position(|(i, _)| self.pivots.contains_key(i))
                .map(|p| p + start);
            let Some(pos) = hit else { break };
            let (idx, c) = v.entries[pos].clone();
            let r = self.pivots[&idx];
            let neg = -c.clone();
            v.axpy(&neg, &self.rows[r]);
            if let Some(cb) = combo.as_mut() {
                cb.axpy(&neg, &self.combos[r]);
            }
            *coeffs.entry(r).or_insert_with(rational::zero) += c;
            // Entries below `idx` are untouched by the elimination.
            start = v.entries.partition_point(|(i, _)| *i <= idx);
        }
        (v, coeffs, combo)
    }

    /// Reduces `v` and stores the residual as a new row when nonzero.
    pub fn insert(&mut self, v: SparseVec) -> Insert {
        let id = self.inserted;
        self.inserted += 1;
        let combo = self.track.then(|| SparseVec::unit(id));
        let (residual, _, combo) = self.reduce_inner(v, combo);
        match residual.leading() {
            None => Insert::Dependent {
                relation: combo.unwrap_or_default(),
            },
            Some(p) => {
                let inv = rational::one() / residual.get(p);
                let row = residual.scale(&inv);
                let r = self.rows.len();
                self.rows.push(row);
                if let Some(cb) = combo {
                    self.combos.push(cb.scale(&inv));
                }
                self.pivots.insert(p, r);
                Insert::Added { row: r }
            }
        }
    }

    /// Clears every row's entries at the other rows' pivot columns, giving the
    /// reduced row echelon form. Row numbering is preserved.
    pub fn fully_reduce(&mut self) {
        self.fully_reduce_from(0);
    }

    /// Like [`Echelon::fully_reduce`], but only rows numbered `first` and
    /// later are rewritten; earlier rows keep their span. Each rewritten row
    /// is cleared at every pivot column but its own.
    pub fn fully_reduce_from(&mut self, first: usize) {
        let order: Vec<(usize, usize)> = self
            .pivots
            .iter()
            .rev()
            .filter(|(_, r)| **r >= first)
            .map(|(p, r)| (*p, *r))
            .collect();
        for &(pivot, r) in &order {
            let mut row = std::mem::take(&mut self.rows[r]);
            let mut combo = if self.track {
                Some(std::mem::take(&mut self.combos[r]))
            } else {
                None
            };
            loop {
                let hit = row
                    .entries
                    .iter()
                    .find(|(i, _)| *i != pivot && self.pivots.contains_key(i))
                    .cloned();
                let Some((idx, c)) = hit else { break };
                let other = self.pivots[&idx];
                let neg = -c;
                row.axpy(&neg, &self.rows[other]);
                if let Some(cb) = combo.as_mut() {
                    cb.axpy(&neg, &self.combos[other]);
                }
            }
            self.rows[r] = row;
            if let Some(cb) = combo {
                self.combos[r] = cb;
            }
        }
    }

    /// Coordinates of `v` in a fully reduced basis: the entries of `v` at the
    /// pivot columns, in row order. `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        let red = self.reduce(v);
        if !red.residual.is_zero() {
            return None;
        }
        let mut out = vec![rational::zero(); self.rows.len()];
        for (r, c) in red.coeffs {
            out[r] = c;
        }
        Some(out)
    }
}

/// Kernel and image of the linear map whose `j`-th column is `columns[j]`.
///
/// The kernel basis vectors are indexed by column; the image echelon tracks,
/// for each of its rows, the combination of columns producing it (so it can
/// solve `A x = b`).
pub fn kernel_and_image(columns: &[SparseVec]) -> (Vec<SparseVec>, Echelon) {
    let mut image = Echelon::tracking();
    let mut kernel = Vec::new();
    for col in columns {
        if let Insert::Dependent { relation } = image.insert(col.clone()) {
            kernel.push(relation);
        }
    }
    (kernel, image)
}

/// Solves `A x = b` given the tracked image echelon of `A` (from
/// [`kernel_and_image`]). Returns one solution, or `None` if `b ∉ im A`.
pub fn solve_with_image(image: &Echelon, b: &SparseVec) -> Option<SparseVec> {
    let red = image.reduce(b);
    if !red.residual.is_zero() {
        return None;
    }
    let mut x = SparseVec::new();
    for (r, c) in red.coeffs {
        x.axpy(&c, image.combo(r));
    }
    Some(x)
}

/// Rank of a dense matrix given as rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut e = Echelon::new();
    for row in rows {
        e.insert(SparseVec::from_dense(row));
    }
    e.rank()
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, rational::one());
        }
        m
    }

    /// From row vectors; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let n = rows.len();
        Some(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.row_vecs())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Solves the square system `self · x = b`; `None` if singular.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, b.len());
        if self.rows != self.cols {
            return None;
        }
        let columns: Vec<SparseVec> = (0..self.cols)
            .map(|j| SparseVec::from_pairs((0..self.rows).map(|i| (i, self.get(i, j).clone()))))
            .collect();
        let (kernel, image) = kernel_and_image(&columns);
        if !kernel.is_empty() {
            return None;
        }
        let x = solve_with_image(&image, &SparseVec::from_dense(b))?;
        Some(x.to_dense(self.cols))
    }
}
