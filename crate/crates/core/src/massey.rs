//! Triple Massey products and formality obstructions.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cdga::Cdga;
use crate::cohomology::{CohomologyClass, CohomologyError, CohomologyRing};
use crate::exterior::Form;
use crate::linalg::{Echelon, SparseVec};
use crate::rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasseyError {
    #[error("cup product of the {0} pair is nonzero")]
    NonzeroCup(&'static str),
    #[error("class of degree 0 in a Massey triple")]
    DegreeZero,
    #[error("{0} does not bound the required product")]
    BadPrimitive(&'static str),
    #[error("the model is not nilpotent; the nilmanifold criterion does not apply")]
    NotNilpotent,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// `⟨a1, a2, a3⟩` as a coset `value + indeterminacy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyValue {
    pub classes: [CohomologyClass; 3],
    pub value: CohomologyClass,
    /// Basis (echelon form, class coordinates) of `a1 ∪ H + H ∪ a3`.
    pub indeterminacy: Vec<CohomologyClass>,
    pub nonvanishing: bool,
}

impl MasseyValue {
    pub fn indeterminacy_dim(&self) -> usize {
        self.indeterminacy.len()
    }
}

fn sign(p: usize) -> rational::Rational {
    if p % 2 == 0 {
        rational::one()
    } else {
        rational::int(-1)
    }
}

fn indeterminacy(
    r: &CohomologyRing,
    a1: &CohomologyClass,
    a3: &CohomologyClass,
    p2: usize,
) -> Result<Echelon, MasseyError> {
    let (p1, p3) = (a1.degree(), a3.degree());
    let mut e = Echelon::new();
    let top = r.top_degree();
    if p2 + p3 - 1 <= top {
        for i in 0..r.betti_number(p2 + p3 - 1) {
            let c = r.cup(a1, &r.basis_class(p2 + p3 - 1, i))?;
            e.insert(SparseVec::from_dense(c.coords()));
        }
    }
    if p1 + p2 - 1 <= top {
        for i in 0..r.betti_number(p1 + p2 - 1) {
            let c = r.cup(&r.basis_class(p1 + p2 - 1, i), a3)?;
            e.insert(SparseVec::from_dense(c.coords()));
        }
    }
    e.fully_reduce();
    Ok(e)
}

/// Massey product from explicit cocycles `α_i` and primitives `dσ = α1∧α2`,
/// `dτ = α2∧α3`.
pub fn triple_massey_with(
    r: &CohomologyRing,
    alphas: [&Form; 3],
    sigma: &Form,
    tau: &Form,
) -> Result<MasseyValue, MasseyError> {
    let c = r.cdga();
    let classes = [
        r.reduce(alphas[0])?,
        r.reduce(alphas[1])?,
        r.reduce(alphas[2])?,
    ];
    let [p1, p2, p3] = [
        classes[0].degree(),
        classes[1].degree(),
        classes[2].degree(),
    ];
    if p1 == 0 || p2 == 0 || p3 == 0 {
        return Err(MasseyError::DegreeZero);
    }
    if c.differential(sigma) != alphas[0].wedge(alphas[1]) {
        return Err(MasseyError::BadPrimitive("sigma"));
    }
    if c.differential(tau) != alphas[1].wedge(alphas[2]) {
        return Err(MasseyError::BadPrimitive("tau"));
    }
    let form = alphas[0].wedge(tau) + sigma.wedge(alphas[2]).scale(&sign(p1 + 1));
    let degree = p1 + p2 + p3 - 1;
    let value = if degree > r.top_degree() {
        CohomologyClass::new(degree, Vec::new())
    } else {
        r.reduce_in_degree(degree, &form)?
    };
    let ind = indeterminacy(r, &classes[0], &classes[2], p2)?;
    let nonvanishing = !ind.contains(&SparseVec::from_dense(value.coords()));
    let indeterminacy = ind
        .rows()
        .iter()
        .map(|row| CohomologyClass::new(degree, row.to_dense(value.coords().len())))
        .collect();
    Ok(MasseyValue {
        classes,
        value,
        indeterminacy,
        nonvanishing,
    })
}

/// `⟨a1, a2, a3⟩` using the chosen representatives and the deterministic
/// primitives of [`CohomologyRing::primitive`].
pub fn triple_massey(
    r: &CohomologyRing,
    a1: &CohomologyClass,
    a2: &CohomologyClass,
    a3: &CohomologyClass,
) -> Result<MasseyValue, MasseyError> {
    let alphas = [r.class_form(a1)?, r.class_form(a2)?, r.class_form(a3)?];
    let sigma = primitive_of(r, &alphas[0], &alphas[1]).ok_or(MasseyError::NonzeroCup("first"))?;
    let tau = primitive_of(r, &alphas[1], &alphas[2]).ok_or(MasseyError::NonzeroCup("second"))?;
    triple_massey_with(r, [&alphas[0], &alphas[1], &alphas[2]], &sigma, &tau)
}

fn primitive_of(r: &CohomologyRing, x: &Form, y: &Form) -> Option<Form> {
    let p = x.wedge(y);
    if p.is_zero() {
        return Some(Form::zero(r.cdga().dim()));
    }
    r.primitive(&p).expect("products of cocycles are closed")
}

/// A nonvanishing triple found by [`massey_scan`], with the basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyHit {
    /// `(degree, index)` of each basis class.
    pub triple: [(usize, usize); 3],
    pub labels: [Form; 3],
    pub value: MasseyValue,
    pub value_form: Form,
}

impl fmt::Display for MasseyHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<[{}], [{}], [{}]> -> [{}], indeterminacy {}, NONVANISHING",
            self.labels[0],
            self.labels[1],
            self.labels[2],
            self.value_form,
            self.value.indeterminacy_dim()
        )
    }
}

/// Default degree cap of a scan: one less than the number of generators.
pub fn default_scan_degree(r: &CohomologyRing) -> usize {
    r.top_degree().saturating_sub(1)
}

/// All nonvanishing products of basis classes `⟨a, b, c⟩` (degrees ≥ 1) with
/// value degree `p1 + p2 + p3 - 1 ≤ max_degree`, in lexicographic order of
/// `(p1, i1, p2, i2, p3, i3)`.
pub fn massey_scan(r: &CohomologyRing, max_degree: usize) -> Result<Vec<MasseyHit>, MasseyError> {
    Scanner {
        r,
        primitives: HashMap::new(),
        cups: HashMap::new(),
    }
    .run(max_degree)
}

type Basis = (usize, usize);

struct Scanner<'a> {
    r: &'a CohomologyRing,
    primitives: HashMap<[Basis; 2], Option<Form>>,
    cups: HashMap<[Basis; 2], SparseVec>,
}

impl Scanner<'_> {
    fn rep(&self, x: Basis) -> &Form {
        &self.r.representatives(x.0)[x.1]
    }

    fn primitive(&mut self, x: Basis, y: Basis) -> Option<Form> {
        if let Some(p) = self.primitives.get(&[x, y]) {
            return p.clone();
        }
        let p = primitive_of(self.r, self.rep(x), self.rep(y));
        self.primitives.insert([x, y], p.clone());
        p
    }

    fn cup(&mut self, x: Basis, y: Basis) -> Result<SparseVec, MasseyError> {
        if let Some(c) = self.cups.get(&[x, y]) {
            return Ok(c.clone());
        }
        let k = x.0 + y.0;
        let c = if k > self.r.top_degree() {
            SparseVec::new()
        } else {
            SparseVec::from_dense(
                self.r
                    .reduce_in_degree(k, &self.rep(x).wedge(self.rep(y)))?
                    .coords(),
            )
        };
        self.cups.insert([x, y], c.clone());
        Ok(c)
    }

    fn run(mut self, max_degree: usize) -> Result<Vec<MasseyHit>, MasseyError> {
        let r = self.r;
        let top = r.top_degree().min(max_degree);
        let basis = |p: usize| (0..r.betti_number(p)).map(move |i| (p, i));
        let mut hits = Vec::new();
        for p1 in 1..=top {
            for p2 in 1..=top {
                for p3 in 1..=top {
                    let degree = p1 + p2 + p3 - 1;
                    if degree > top {
                        continue;
                    }
                    for x in basis(p1) {
                        for y in basis(p2) {
                            let Some(sigma) = self.primitive(x, y) else {
                                continue;
                            };
                            for z in basis(p3) {
                                let Some(tau) = self.primitive(y, z) else {
                                    continue;
                                };
                                let form = self.rep(x).wedge(&tau)
                                    + sigma.wedge(self.rep(z)).scale(&sign(p1 + 1));
                                if form.is_zero() {
                                    continue;
                                }
                                let value = r.reduce_in_degree(degree, &form)?;
                                if value.is_zero() {
                                    continue;
                                }
                                let mut ind = Echelon::new();
                                for w in basis(p2 + p3 - 1).collect::<Vec<_>>() {
                                    ind.insert(self.cup(x, w)?);
                                }
                                for w in basis(p1 + p2 - 1).collect::<Vec<_>>() {
                                    ind.insert(self.cup(w, z)?);
                                }
                                if ind.contains(&SparseVec::from_dense(value.coords())) {
                                    continue;
                                }
                                ind.fully_reduce();
                                let len = value.coords().len();
                                let indeterminacy = ind
                                    .rows()
                                    .iter()
                                    .map(|row| CohomologyClass::new(degree, row.to_dense(len)))
                                    .collect();
                                let classes = [x, y, z].map(|(p, i)| r.basis_class(p, i));
                                let value_form = r.class_form(&value)?;
                                hits.push(MasseyHit {
                                    triple: [x, y, z],
                                    labels: [
                                        self.rep(x).clone(),
                                        self.rep(y).clone(),
                                        self.rep(z).clone(),
                                    ],
                                    value: MasseyValue {
                                        classes,
                                        value,
                                        indeterminacy,
                                        nonvanishing: true,
                                    },
                                    value_form,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(hits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formality {
    Formal,
    NonFormal,
    Undetermined,
}

impl fmt::Display for Formality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formality::Formal => "formal",
            Formality::NonFormal => "non-formal",
            Formality::Undetermined => "undetermined",
        })
    }
}

/// For a nilpotent model: formal iff the differential vanishes.
pub fn hasegawa_verdict(c: &Cdga) -> Result<Formality, MasseyError> {
    if !c.is_nilpotent() {
        return Err(MasseyError::NotNilpotent);
    }
    Ok(if c.is_formal_trivially() {
        Formality::Formal
    } else {
        Formality::NonFormal
    })
}

/// How a formality verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Nilpotent,
    Massey(Box<MasseyHit>),
    /// Scan up to this degree found nothing; this is not a proof of formality.
    NoTripleObstruction(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalityVerdict {
    pub formality: Formality,
    pub evidence: Evidence,
}

impl fmt::Display for FormalityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.evidence {
            Evidence::Nilpotent => write!(f, "{} (nilpotent model)", self.formality),
            Evidence::Massey(hit) => write!(f, "{} (Massey {})", self.formality, hit),
            Evidence::NoTripleObstruction(k) => {
                write!(
                    f,
                    "{} (no triple obstruction found up to degree {k})",
                    self.formality
                )
            }
        }
    }
}

/// Nilpotent criterion when it applies, otherwise a Massey scan.
pub fn formality(r: &CohomologyRing, scan_degree: usize) -> Result<FormalityVerdict, MasseyError> {
    if let Ok(formality) = hasegawa_verdict(r.cdga()) {
        return Ok(FormalityVerdict {
            formality,
            evidence: Evidence::Nilpotent,
        });
    }
    let hits = massey_scan(r, scan_degree)?;
    Ok(match hits.into_iter().next() {
        Some(hit) => FormalityVerdict {
            formality: Formality::NonFormal,
            evidence: Evidence::Massey(Box::new(hit)),
        },
        None => FormalityVerdict {
            formality: Formality::Undetermined,
            evidence: Evidence::NoTripleObstruction(scan_degree),
        },
    })
}
