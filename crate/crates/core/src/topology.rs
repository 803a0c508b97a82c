//! Betti-number constructions that need no model: blow-ups, mapping tori
//! and products.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("codimension {0} must be even and at least 2")]
    BadCodimension(usize),
    #[error(
        "ambient has dimension {ambient}, submanifold {sub}, codimension {codim}: inconsistent"
    )]
    InconsistentDimensions {
        ambient: usize,
        sub: usize,
        codim: usize,
    },
    #[error("a closed manifold of even dimension has an odd number of Betti numbers, got {0}")]
    OddDimensionalAmbient(usize),
    #[error("action in degree {degree} is {rows}x{cols}, expected {expected}x{expected}")]
    ActionSize {
        degree: usize,
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("action has {found} degrees, Betti vector has {expected}")]
    ActionLength { expected: usize, found: usize },
    #[error("empty Betti vector")]
    Empty,
    #[error("invalid Betti number {0:?}")]
    Parse(String),
    #[error("action file line {line}: {message}")]
    ActionSyntax { line: usize, message: String },
}

/// `b_0, ..., b_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn new(b: Vec<usize>) -> Self {
        BettiVector(b)
    }

    /// Dimension of the underlying manifold.
    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn get(&self, k: usize) -> usize {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }

    pub fn is_poincare_dual(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn point() -> Self {
        BettiVector(vec![1])
    }

    pub fn circle() -> Self {
        BettiVector(vec![1, 1])
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Accepts `1,2,2,1`, optionally bracketed and with spaces.
impl FromStr for BettiVector {
    type Err = TopologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .trim_start_matches(['[', '('])
            .trim_end_matches([']', ')']);
        if inner.trim().is_empty() {
            return Err(TopologyError::Empty);
        }
        inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| TopologyError::Parse(t.trim().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BettiVector)
    }
}

/// An automorphism acting on `H^0, ..., H^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismAction {
    pub matrices: Vec<Matrix>,
}

impl AutomorphismAction {
    pub fn new(matrices: Vec<Matrix>) -> Self {
        AutomorphismAction { matrices }
    }

    pub fn identity(b: &BettiVector) -> Self {
        AutomorphismAction {
            matrices: b.0.iter().map(|&n| Matrix::identity(n)).collect(),
        }
    }

    /// Reads an action file: a `degree k` header followed by the rows of the
    /// matrix in that degree, entries separated by spaces or commas. Degrees
    /// that never appear act as the identity. `#` starts a comment.
    pub fn parse(text: &str, b: &BettiVector) -> Result<Self, TopologyError> {
        let mut rows: Vec<Option<Vec<Vec<Rational>>>> = vec![None; b.0.len()];
        let mut current: Option<usize> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| TopologyError::ActionSyntax { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("degree") {
                let k: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad degree {:?}", rest.trim())))?;
                if k >= b.0.len() {
                    return Err(err(format!("degree {k} exceeds {}", b.dim())));
                }
                if rows[k].is_some() {
                    return Err(err(format!("degree {k} given twice")));
                }
                rows[k] = Some(Vec::new());
                current = Some(k);
                continue;
            }
            let k = current.ok_or_else(|| err("matrix row before any `degree` header".into()))?;
            let row = content
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| parse_rational(t).ok_or_else(|| err(format!("bad entry {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            rows[k].as_mut().expect("header seen").push(row);
        }
        let matrices = rows
            .into_iter()
            .zip(&b.0)
            .enumerate()
            .map(|(degree, (r, &n))| match r {
                None => Ok(Matrix::identity(n)),
                Some(r) => {
                    let nrows = r.len();
                    let ncols = r.first().map_or(0, Vec::len);
                    Matrix::from_rows(r).ok_or(TopologyError::ActionSize {
                        degree,
                        rows: nrows,
                        cols: ncols,
                        expected: n,
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let act = AutomorphismAction { matrices };
        act.check(b)?;
        Ok(act)
    }

    fn check(&self, b: &BettiVector) -> Result<(), TopologyError> {
        if self.matrices.len() != b.0.len() {
            return Err(TopologyError::ActionLength {
                expected: b.0.len(),
                found: self.matrices.len(),
            });
        }
        for (degree, (m, &expected)) in self.matrices.iter().zip(&b.0).enumerate() {
            if m.nrows() != expected || m.ncols() != expected {
                return Err(TopologyError::ActionSize {
                    degree,
                    rows: m.nrows(),
                    cols: m.ncols(),
                    expected,
                });
            }
        }
        Ok(())
    }
}

/// `b_m(X̃) = b_m(X) + Σ_{i=1}^{k-1} b_{m-2i}(Y)` for a blow-up along `Y` of
/// codimension `2k`.
pub fn blowup_betti(
    ambient: &BettiVector,
    sub: &BettiVector,
    codim: usize,
) -> Result<BettiVector, TopologyError> {
    if codim < 2 || codim % 2 == 1 {
        return Err(TopologyError::BadCodimension(codim));
    }
    if ambient.0.is_empty() || sub.0.is_empty() {
        return Err(TopologyError::Empty);
    }
    if ambient.dim() % 2 == 1 {
        return Err(TopologyError::OddDimensionalAmbient(ambient.0.len()));
    }
    if sub.dim() + codim != ambient.dim() {
        return Err(TopologyError::InconsistentDimensions {
            ambient: ambient.dim(),
            sub: sub.dim(),
            codim,
        });
    }
    let k = codim / 2;
    let out = (0..=ambient.dim())
        .map(|m| {
            ambient.get(m)
                + (1..k)
                    .filter(|i| m >= 2 * i)
                    .map(|i| sub.get(m - 2 * i))
                    .sum::<usize>()
        })
        .collect();
    Ok(BettiVector(out))
}

/// `b_k(M_φ) = dim ker(φ_k - 1) + dim coker(φ_{k-1} - 1)`.
pub fn mapping_torus_betti(
    b: &BettiVector,
    act: &AutomorphismAction,
) -> Result<BettiVector, TopologyError> {
    act.check(b)?;
    let fixed_rank: Vec<usize> = act
        .matrices
        .iter()
        .map(|m| m.sub(&Matrix::identity(m.nrows())).rank())
        .collect();
    let out = (0..=b.0.len())
        .map(|k| {
            let ker = if k < b.0.len() {
                b.0[k] - fixed_rank[k]
            } else {
                0
            };
            let coker = if k > 0 {
                b.0[k - 1] - fixed_rank[k - 1]
            } else {
                0
            };
            ker + coker
        })
        .collect();
    Ok(BettiVector(out))
}

/// Betti numbers of a product.
pub fn kunneth_betti(a: &BettiVector, b: &BettiVector) -> BettiVector {
    if a.0.is_empty() || b.0.is_empty() {
        return BettiVector(Vec::new());
    }
    let mut out = vec![0; a.0.len() + b.0.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        for (j, y) in b.0.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    BettiVector(out)
}
