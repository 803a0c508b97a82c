//! Exterior algebra over the rationals on `n` degree-one generators.
//!
//! A monomial `e^{i_1 ... i_k}` is stored as a bitmask with bit `i - 1` set
//! for every generator index `i` (indices are 1-based, as in the usual
//! `e^{ij}` shorthand). Products are reordered to strictly increasing indices,
//! picking up the parity of the sorting permutation; repeated indices vanish.
//!
//! The bitmask is a `u64`, so at most [`MAX_GENERATORS`] generators are
//! supported. Larger ambient dimensions are rejected with
//! [`ExteriorError::TooManyGenerators`]; the full exterior algebra on more than
//! 64 generators is far outside anything the dense-per-degree linear algebra
//! here could handle anyway.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{self, Rational};

pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{0} generators requested, at most {MAX_GENERATORS} are supported")]
    TooManyGenerators(usize),
    #[error("generator index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("derivation value on e{generator} has degree {found}, expected {expected}")]
    InconsistentDegree {
        generator: usize,
        expected: i64,
        found: String,
    },
    #[error("column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// An exterior monomial `e^{i_1} ∧ ... ∧ e^{i_k}` with `i_1 < ... < i_k`.
///
/// Ordered by degree first, then lexicographically on the index sequence, so
/// `1 < e1 < e2 < e12 < e13 < e23 < e123`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const UNIT: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The single generator `e^i` (1-based).
    pub fn generator(index: usize) -> Self {
        debug_assert!((1..=MAX_GENERATORS).contains(&index));
        Monomial(1u64 << (index - 1))
    }

    /// Builds `e^{i_1} ∧ ... ∧ e^{i_k}` from indices in any order, returning
    /// the sorted monomial and the sign of the reordering, or `None` when an
    /// index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(Monomial, i32)> {
        let mut acc = Monomial::UNIT;
        let mut sign = 1;
        for &i in indices {
            let (m, s) = acc.wedge(Monomial::generator(i))?;
            acc = m;
            sign *= s;
        }
        Some((acc, sign))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1u64 << (index - 1)) != 0
    }

    /// Generator indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut bits = self.0;
        while bits != 0 {
            let low = bits.trailing_zeros() as usize;
            out.push(low + 1);
            bits &= bits - 1;
        }
        out
    }

    /// Highest generator index, 0 for the unit.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// `self ∧ other` as a sorted monomial with sign, `None` if they share an index.
    pub fn wedge(self, other: Monomial) -> Option<(Monomial, i32)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Inversions: pairs (i in self, j in other) with i > j.
        let mut inversions = 0u32;
        let mut bits = other.0;
        while bits != 0 {
            let j = bits.trailing_zeros();
            inversions += (self.0.checked_shr(j + 1).unwrap_or(0)).count_ones();
            bits &= bits - 1;
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((Monomial(self.0 | other.0), sign))
    }

    /// All monomials of degree `k` over `n` generators, in lexicographic order.
    pub fn all_of_degree(n: usize, k: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        fn rec(
            start: usize,
            n: usize,
            k: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<Monomial>,
        ) {
            if current.len() == k {
                let bits = current.iter().fold(0u64, |acc, &i| acc | (1u64 << (i - 1)));
                out.push(Monomial(bits));
                return;
            }
            for i in start..=n {
                if n - i + 1 < k - current.len() {
                    break;
                }
                current.push(i);
                rec(i + 1, n, k, current, out);
                current.pop();
            }
        }
        rec(1, n, k, &mut current, &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // The monomial owning the lowest differing index comes first.
        if self.0 & (diff & diff.wrapping_neg()) != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = self.indices();
        if idx.is_empty() {
            return f.write_str("1");
        }
        if idx.iter().all(|&i| i <= 9) {
            f.write_str("e")?;
            for i in idx {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            write!(f, "e[{}]", parts.join(","))
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A linear combination of exterior monomials with exact rational
/// coefficients. Zero coefficients are never stored, so structural equality
/// is equality of forms. Mixed degrees are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Form {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators");
        Form {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: Rational) -> Self {
        Form::monomial(dim, Monomial::UNIT, c)
    }

    pub fn one(dim: usize) -> Self {
        Form::scalar(dim, rational::one())
    }

    pub fn monomial(dim: usize, m: Monomial, c: Rational) -> Self {
        let mut f = Form::zero(dim);
        assert!(m.max_index() <= dim, "monomial {m} outside dimension {dim}");
        if !c.is_zero() {
            f.terms.insert(m, c);
        }
        f
    }

    /// The generator `e^i`, 1-based.
    pub fn generator(dim: usize, index: usize) -> Self {
        assert!(
            (1..=dim).contains(&index),
            "generator e{index} outside 1..={dim}"
        );
        Form::monomial(dim, Monomial::generator(index), rational::one())
    }

    /// `c · e^{i_1} ∧ ... ∧ e^{i_k}` for indices in any order.
    pub fn from_indices(dim: usize, indices: &[usize], c: Rational) -> Result<Self, ExteriorError> {
        for &i in indices {
            if i == 0 || i > dim {
                return Err(ExteriorError::IndexOutOfRange { index: i, dim });
            }
        }
        Ok(match Monomial::from_indices(indices) {
            Some((m, s)) => Form::monomial(dim, m, c * rational::int(s as i64)),
            None => Form::zero(dim),
        })
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut f = Form::zero(dim);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(rational::zero)
    }

    /// The common degree of all terms; `None` for zero or mixed forms.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// True for zero and for forms whose terms all have degree `k`.
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    pub fn homogeneous_part(&self, k: usize) -> Form {
        Form {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Constant term.
    pub fn scalar_part(&self) -> Rational {
        self.coefficient(Monomial::UNIT)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        assert!(
            m.max_index() <= self.dim,
            "monomial {m} outside dimension {}",
            self.dim
        );
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        if c.is_zero() {
            return Form::zero(self.dim);
        }
        Form {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    /// Embeds into a larger ambient dimension, shifting every index by `offset`.
    pub fn shifted(&self, new_dim: usize, offset: usize) -> Form {
        assert!(self.dim + offset <= new_dim);
        Form {
            dim: new_dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.0 << offset), c.clone()))
                .collect(),
        }
    }

    /// Same form in a larger ambient dimension.
    pub fn lifted(&self, new_dim: usize) -> Form {
        self.shifted(new_dim, 0)
    }

    fn check_dim(&self, other_dim: usize) -> Result<(), ExteriorError> {
        if self.dim == other_dim {
            Ok(())
        } else {
            Err(ExteriorError::DimensionMismatch {
                left: self.dim,
                right: other_dim,
            })
        }
    }

    pub fn try_wedge(&self, other: &Form) -> Result<Form, ExteriorError> {
        self.check_dim(other.dim)?;
        let mut out = Form::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, s)) = ma.wedge(*mb) {
                    let c = ca * cb;
                    out.add_term(m, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior product.
    ///
    /// # Panics
    ///
    /// If the ambient dimensions differ; see [`Form::try_wedge`].
    pub fn wedge(&self, other: &Form) -> Form {
        self.try_wedge(other)
            .expect("wedge of forms over different ambient dimensions")
    }

    /// `self^k`, with `self^0 = 1`.
    pub fn pow(&self, k: usize) -> Form {
        let mut acc = Form::one(self.dim);
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    pub fn try_contract(&self, x: &Vector) -> Result<Form, ExteriorError> {
        self.check_dim(x.dim())?;
        let mut out = Form::zero(self.dim);
        for (m, c) in &self.terms {
            for (pos, i) in m.indices().into_iter().enumerate() {
                let xi = &x.coords[i - 1];
                if xi.is_zero() {
                    continue;
                }
                let rest = Monomial(m.0 & !(1u64 << (i - 1)));
                let v = c * xi;
                out.add_term(rest, if pos % 2 == 0 { v } else { -v });
            }
        }
        Ok(out)
    }

    /// Interior product `ι_x self`.
    ///
    /// # Panics
    ///
    /// If the ambient dimensions differ; see [`Form::try_contract`].
    pub fn contract(&self, x: &Vector) -> Form {
        self.try_contract(x)
            .expect("contraction over different ambient dimensions")
    }

    /// Parses the textual form syntax: terms `±p/q e{i}{j}...` joined by
    /// `+`/`-`, e.g. `e14 + e23`, `2 e1245`, `-1/2 e3`, `3`, `0`. Each digit
    /// after `e` is one generator index; `e[1,10,12]` spells out indices
    /// above 9. An optional `*` may separate coefficient and monomial.
    pub fn parse(dim: usize, text: &str) -> Result<Form, ExteriorError> {
        if dim > MAX_GENERATORS {
            return Err(ExteriorError::TooManyGenerators(dim));
        }
        FormParser {
            chars: text.char_indices().collect(),
            pos: 0,
            dim,
            len: text.len(),
        }
        .parse()
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *m == Monomial::UNIT {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs} {m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({self})", self.dim)
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        self.check_dim(rhs.dim)
            .expect("adding forms over different ambient dimensions");
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        self.check_dim(rhs.dim)
            .expect("subtracting forms over different ambient dimensions");
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Form {
    type Output = Form;
    fn add(mut self, rhs: Form) -> Form {
        self += &rhs;
        self
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(mut self, rhs: Form) -> Form {
        self -= &rhs;
        self
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

struct FormParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    dim: usize,
    len: usize,
}

impl FormParser {
    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or(self.len)
            + 1
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExteriorError> {
        Err(ExteriorError::Parse {
            column: self.column(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn parse(mut self) -> Result<Form, ExteriorError> {
        let mut out = Form::zero(self.dim);
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty form");
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let mut negative = false;
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    negative = true;
                    self.pos += 1;
                }
                None => break,
                Some(_) if first => {}
                Some(c) => return self.err(format!("expected '+' or '-', found '{c}'")),
            }
            first = false;
            self.skip_ws();
            let term = self.term()?;
            if negative {
                out -= &term;
            } else {
                out += &term;
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Form, ExteriorError> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            Some(self.coefficient()?)
        } else {
            None
        };
        self.skip_ws();
        if self.peek() == Some('*') {
            if coeff.is_none() {
                return self.err("'*' without a coefficient");
            }
            self.pos += 1;
            self.skip_ws();
            if self.peek() != Some('e') {
                return self.err("expected a monomial after '*'");
            }
        }
        match self.peek() {
            Some('e') => {
                let indices = self.monomial()?;
                let c = coeff.unwrap_or_else(rational::one);
                Form::from_indices(self.dim, &indices, c)
            }
            _ => match coeff {
                Some(c) => Ok(Form::scalar(self.dim, c)),
                None => match self.peek() {
                    Some(c) => self.err(format!("unexpected '{c}'")),
                    None => self.err("expected a term"),
                },
            },
        }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn coefficient(&mut self) -> Result<Rational, ExteriorError> {
        let num = self.digits();
        let mut text = num;
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.digits();
            if den.is_empty() {
                return self.err("expected a denominator after '/'");
            }
            text.push('/');
            text.push_str(&den);
        } else {
            self.pos = save;
        }
        match rational::parse_rational(&text) {
            Some(q) => Ok(q),
            None => self.err(format!("invalid rational '{text}'")),
        }
    }

    fn monomial(&mut self) -> Result<Vec<usize>, ExteriorError> {
        debug_assert_eq!(self.peek(), Some('e'));
        let start = self.pos;
        self.pos += 1;
        let mut indices = Vec::new();
        if self.peek() == Some('[') {
            self.pos += 1;
            loop {
                self.skip_ws();
                let d = self.digits();
                if d.is_empty() {
                    return self.err("expected a generator index");
                }
                indices.push(d.parse::<usize>().map_err(|_| ExteriorError::Parse {
                    column: self.column(),
                    message: format!("index '{d}' too large"),
                })?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(']') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or ']'"),
                }
            }
        } else {
            let d = self.digits();
            if d.is_empty() {
                return self.err("expected generator indices after 'e'");
            }
            for ch in d.chars() {
                let i = ch.to_digit(10).unwrap() as usize;
                if i == 0 {
                    return self.err("generator indices start at 1");
                }
                indices.push(i);
            }
        }
        for &i in &indices {
            if i == 0 || i > self.dim {
                self.pos = start;
                return self.err(format!("generator index {i} out of range 1..={}", self.dim));
            }
        }
        Ok(indices)
    }
}

/// A vector in the dual basis `e_1, ..., e_n`, e.g. a Reeb field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vector {
    coords: Vec<Rational>,
}

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Vector { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Vector {
            coords: vec![rational::zero(); dim],
        }
    }

    /// Basis vector `e_i`, 1-based.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Vector::zero(dim);
        v.coords[index - 1] = rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A graded derivation of degree `degree >= -1`, determined by its values on
/// the generators and extended by the graded Leibniz rule
/// `D(a ∧ b) = D(a) ∧ b + (-1)^{degree·|a|} a ∧ D(b)`.
///
/// Contractions (degree -1), Lie derivatives (degree 0) and differentials
/// (degree +1) are all instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    dim: usize,
    degree: i64,
    values: Vec<Form>,
}

impl Derivation {
    pub fn new(dim: usize, degree: i64, values: Vec<Form>) -> Result<Self, ExteriorError> {
        if dim > MAX_GENERATORS {
            return Err(ExteriorError::TooManyGenerators(dim));
        }
        if values.len() != dim {
            return Err(ExteriorError::DimensionMismatch {
                left: dim,
                right: values.len(),
            });
        }
        let expected = degree + 1;
        for (i, v) in values.iter().enumerate() {
            if v.dim() != dim {
                return Err(ExteriorError::DimensionMismatch {
                    left: dim,
                    right: v.dim(),
                });
            }
            let ok = expected >= 0 && v.is_homogeneous_of(expected as usize);
            if !ok {
                let found = match v.degree() {
                    Some(d) => d.to_string(),
                    None => "mixed".to_string(),
                };
                return Err(ExteriorError::InconsistentDegree {
                    generator: i + 1,
                    expected,
                    found,
                });
            }
        }
        Ok(Derivation {
            dim,
            degree,
            values,
        })
    }

    /// The contraction `ι_x`, the degree -1 derivation with `ι_x e^i = x_i`.
    pub fn contraction(x: &Vector) -> Self {
        let dim = x.dim();
        let values = x
            .coords()
            .iter()
            .map(|c| Form::scalar(dim, c.clone()))
            .collect();
        Derivation {
            dim,
            degree: -1,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Value on the generator `e^i`, 1-based.
    pub fn value(&self, index: usize) -> &Form {
        &self.values[index - 1]
    }

    pub fn values(&self) -> &[Form] {
        &self.values
    }

    pub fn apply_monomial(&self, m: Monomial) -> Form {
        let mut out = Form::zero(self.dim);
        for (pos, i) in m.indices().into_iter().enumerate() {
            let value = &self.values[i - 1];
            if value.is_zero() {
                continue;
            }
            let bit = 1u64 << (i - 1);
            let before = Monomial(m.0 & (bit - 1));
            let after = Monomial(m.0 & !(bit | (bit - 1)));
            let odd = (self.degree * pos as i64).rem_euclid(2) == 1;
            for (vm, vc) in &value.terms {
                let Some((left, s1)) = before.wedge(*vm) else {
                    continue;
                };
                let Some((full, s2)) = left.wedge(after) else {
                    continue;
                };
                let negative = (s1 * s2 < 0) != odd;
                out.add_term(full, if negative { -vc.clone() } else { vc.clone() });
            }
        }
        out
    }

    pub fn try_apply(&self, a: &Form) -> Result<Form, ExteriorError> {
        a.check_dim(self.dim)?;
        let mut out = Form::zero(self.dim);
        for (m, c) in &a.terms {
            out += &self.apply_monomial(*m).scale(c);
        }
        Ok(out)
    }

    /// # Panics
    ///
    /// If `a` lives in a different ambient dimension.
    pub fn apply(&self, a: &Form) -> Form {
        self.try_apply(a)
            .expect("derivation applied over a different ambient dimension")
    }
}
