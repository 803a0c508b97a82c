//! Full analysis of a spec, rendered as stable `key = value` lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cdga::{Cdga, CdgaError};
use crate::cohomology::{CohomologyError, CohomologyRing};
use crate::exterior::Vector;
use crate::lefschetz::{
    algebraic_1_lefschetz, k_cosymplectic_lefschetz, symplectic_lefschetz, xi_invariant_cohomology,
    LefschetzError, LefschetzReport,
};
use crate::massey::{
    default_scan_degree, hasegawa_verdict, massey_scan, Evidence, Formality, FormalityVerdict,
    MasseyError, MasseyHit,
};
use crate::spec_file::{AlgebraSpec, Flag, SpecError};
use crate::structures::{validate_cosymplectic, validate_symplectic, StructureError};
use crate::topology::{mapping_torus_betti, AutomorphismAction, BettiVector, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("spec: {0}")]
    Spec(#[from] SpecError),
    #[error("model: {0}")]
    Model(#[from] CdgaError),
    #[error("cohomology: {0}")]
    Cohomology(#[from] CohomologyError),
    #[error("lefschetz: {0}")]
    Lefschetz(#[from] LefschetzError),
    #[error("massey: {0}")]
    Massey(#[from] MasseyError),
    #[error("topology: {0}")]
    Topology(#[from] TopologyError),
}

impl ReportError {
    /// Process exit code: 2 for input errors, 3 when `d² ≠ 0` (or the Jacobi
    /// identity fails), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Spec(SpecError::Model(_)) | ReportError::Model(_) => 3,
            ReportError::Cohomology(CohomologyError::Cdga(_)) => 3,
            ReportError::Spec(_) => 2,
            _ => 1,
        }
    }
}

/// Exit code for a report whose eta/omega data failed validation.
pub const EXIT_INVALID_STRUCTURE: i32 = 4;

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    /// Largest value degree of the Massey scan; defaults to `dim - 1`.
    pub massey_max_degree: Option<usize>,
    pub skip_massey: bool,
}

/// Which part of a report a line belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Section {
    Model,
    Cohomology,
    Structure,
    Lefschetz,
    Massey,
    Topology,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub name: String,
    pub dim: usize,
    pub betti: Vec<usize>,
    pub nilpotent: bool,
    pub structure_error: Option<StructureError>,
    pub lefschetz: Option<LefschetzReport>,
    pub odd_betti_even: bool,
    pub invariant_betti: Option<Vec<usize>>,
    pub one_lefschetz: Option<bool>,
    pub massey: Option<Vec<MasseyHit>>,
    pub formality: Option<FormalityVerdict>,
    pub mapping_torus: Option<BettiVector>,
    pub model_level: bool,
    lines: Vec<(Section, String)>,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!(
        "[{}]",
        xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
    )
}

fn vector(v: &Vector) -> String {
    list(v.coords())
}

struct Lines(Vec<(Section, String)>);

impl Lines {
    fn kv(&mut self, s: Section, key: &str, value: impl std::fmt::Display) {
        self.0.push((s, format!("{key} = {value}")));
    }

    fn raw(&mut self, s: Section, line: String) {
        self.0.push((s, line));
    }
}

fn lefschetz_lines(out: &mut Lines, tag: &str, rep: &LefschetzReport) {
    for m in &rep.maps {
        out.raw(
            Section::Lefschetz,
            format!(
                "{tag}[{}]: rank {}, src {}, tgt {}, iso {}",
                m.degree,
                m.rank,
                m.source_dim,
                m.target_dim,
                yes(m.bijective())
            ),
        );
    }
    out.kv(
        Section::Lefschetz,
        "lefschetz_type",
        yes(rep.lefschetz_type()),
    );
    out.kv(
        Section::Lefschetz,
        "lefschetz_property",
        yes(rep.lefschetz_property()),
    );
}

/// Runs every analysis that applies to `spec`.
pub fn analyze(spec: &AlgebraSpec, opts: &ReportOptions) -> Result<AnalysisReport, ReportError> {
    let c: Cdga = spec.cdga()?;
    c.check_d_squared()?;
    let name = spec.name.clone().unwrap_or_else(|| "unnamed".to_string());
    let n = c.dim();
    let mut out = Lines(Vec::new());

    let nilpotent = c.is_nilpotent();
    out.kv(Section::Model, "name", &name);
    out.kv(Section::Model, "dim", n);
    let flags: Vec<&str> = spec.flags.iter().map(|f| f.as_str()).collect();
    out.kv(Section::Model, "flags", list(&flags));
    out.kv(Section::Model, "d_squared", "ok");
    out.kv(Section::Model, "nilpotent", yes(nilpotent));
    if spec.has_flag(Flag::Nilpotent) && !nilpotent {
        out.kv(
            Section::Model,
            "warning",
            "declared nilpotent but the lower central series does not terminate",
        );
    }
    let model_level = spec.caveats.iter().any(|c| c.starts_with("model-level"));
    if model_level {
        out.raw(Section::Model, "provenance: model-level".to_string());
    }
    for cv in &spec.caveats {
        out.kv(Section::Model, "caveat", cv);
    }

    let ring = CohomologyRing::new(&c)?;
    let betti = ring.betti();
    out.kv(Section::Cohomology, "betti", list(&betti));
    out.kv(Section::Cohomology, "euler", ring.euler_characteristic());
    for k in 0..=n {
        out.kv(
            Section::Cohomology,
            &format!("H[{k}]"),
            list(ring.representatives(k)),
        );
    }
    let odd_betti_even = betti.iter().skip(1).step_by(2).all(|b| b % 2 == 0);
    out.kv(Section::Cohomology, "odd_betti_even", yes(odd_betti_even));

    let mut structure_error = None;
    let mut lefschetz = None;
    let mut invariant_betti = None;
    let mut one_lefschetz = None;
    match (&spec.eta, &spec.omega) {
        (None, Some(omega)) => match validate_symplectic(&c, omega) {
            Ok(s) => {
                out.kv(Section::Structure, "symplectic", "valid");
                out.kv(Section::Structure, "omega", omega);
                let rep = symplectic_lefschetz(&ring, &s)?;
                lefschetz_lines(&mut out, "L", &rep);
                lefschetz = Some(rep);
            }
            Err(e) => {
                out.kv(Section::Structure, "symplectic", format!("invalid: {e}"));
                structure_error = Some(e);
            }
        },
        (Some(eta), Some(omega)) => match validate_cosymplectic(&c, eta, omega) {
            Ok(s) => {
                out.kv(Section::Structure, "cosymplectic", "valid");
                out.kv(Section::Structure, "eta", eta);
                out.kv(Section::Structure, "omega", omega);
                out.kv(Section::Structure, "reeb", vector(&s.xi));
                out.kv(Section::Structure, "theta", vector(&s.theta));
                out.kv(
                    Section::Structure,
                    "theta_equals_reeb",
                    yes(s.xi == s.theta),
                );
                let sub = xi_invariant_cohomology(&c, &s)?;
                out.kv(
                    Section::Structure,
                    "invariant_betti",
                    list(&sub.invariant_betti()),
                );
                out.kv(Section::Structure, "basic_betti", list(&sub.basic_betti()));
                out.kv(Section::Structure, "splitting", yes(sub.splitting_holds()));
                let rep = k_cosymplectic_lefschetz(&sub, &s)?;
                lefschetz_lines(&mut out, "L", &rep);
                let alg = algebraic_1_lefschetz(&ring, eta, omega)?;
                out.kv(
                    Section::Lefschetz,
                    "one_lefschetz",
                    format!(
                        "{} (rank {}, src {}, tgt {})",
                        yes(alg.is_one_lefschetz()),
                        alg.map.rank,
                        alg.map.source_dim,
                        alg.map.target_dim
                    ),
                );
                invariant_betti = Some(sub.invariant_betti());
                one_lefschetz = Some(alg.is_one_lefschetz());
                lefschetz = Some(rep);
            }
            Err(e) => {
                out.kv(Section::Structure, "cosymplectic", format!("invalid: {e}"));
                structure_error = Some(e);
            }
        },
        (Some(_), None) => {
            out.kv(
                Section::Structure,
                "cosymplectic",
                "invalid: eta given without omega",
            );
            structure_error = Some(StructureError::Degenerate("omega"));
        }
        (None, None) => out.kv(Section::Structure, "structure", "none"),
    }

    let (massey, verdict) = if opts.skip_massey {
        (None, None)
    } else {
        let max = opts
            .massey_max_degree
            .unwrap_or_else(|| default_scan_degree(&ring));
        let hits = massey_scan(&ring, max)?;
        out.kv(Section::Massey, "massey_max_degree", max);
        if hits.is_empty() {
            out.kv(Section::Massey, "massey", "none");
        }
        for h in &hits {
            out.raw(Section::Massey, format!("massey: {h}"));
        }
        let verdict = match (hasegawa_verdict(&c), hits.first()) {
            (Ok(formality), _) => FormalityVerdict {
                formality,
                evidence: Evidence::Nilpotent,
            },
            (Err(_), Some(h)) => FormalityVerdict {
                formality: Formality::NonFormal,
                evidence: Evidence::Massey(Box::new(h.clone())),
            },
            (Err(_), None) => FormalityVerdict {
                formality: Formality::Undetermined,
                evidence: Evidence::NoTripleObstruction(max),
            },
        };
        out.kv(Section::Massey, "formality", &verdict);
        (Some(hits), Some(verdict))
    };

    let mut mapping_torus = None;
    if let Some(phi) = spec.monodromy_substitution()? {
        let fibre = c.drop_last_generator();
        let fr = CohomologyRing::new(&fibre)?;
        let act = AutomorphismAction::new(fr.induced_map(&phi)?.matrices().to_vec());
        let b = mapping_torus_betti(&BettiVector::new(fr.betti()), &act)?;
        out.kv(Section::Topology, "fibre_betti", list(&fr.betti()));
        out.kv(Section::Topology, "mapping_torus_betti", &b);
        mapping_torus = Some(b);
    }

    Ok(AnalysisReport {
        name,
        dim: n,
        betti,
        nilpotent,
        structure_error,
        lefschetz,
        odd_betti_even,
        invariant_betti,
        one_lefschetz,
        massey,
        formality: verdict,
        mapping_torus,
        model_level,
        lines: out.0,
    })
}

impl AnalysisReport {
    /// The machine-readable report, one `key = value` (or `L[k]: ...`) per line.
    pub fn machine(&self) -> String {
        let mut out = String::new();
        for (_, l) in &self.lines {
            out += l;
            out.push('\n');
        }
        out
    }

    /// Lines of the given sections, with the model name first.
    pub fn sections(&self, wanted: &[Section]) -> String {
        let mut out = format!("name = {}\n", self.name);
        for (s, l) in &self.lines {
            if wanted.contains(s) && !l.starts_with("name = ") {
                out += l;
                out.push('\n');
            }
        }
        out
    }

    /// Human-oriented rendering of the machine lines, grouped by section.
    pub fn human(&self) -> String {
        let mut out = String::new();
        let mut current = None;
        for (s, l) in &self.lines {
            if current != Some(*s) {
                let title = match s {
                    Section::Model => "Model",
                    Section::Cohomology => "Cohomology",
                    Section::Structure => "Structure",
                    Section::Lefschetz => "Lefschetz",
                    Section::Massey => "Massey products",
                    Section::Topology => "Mapping torus",
                };
                if current.is_some() {
                    out.push('\n');
                }
                let _ = writeln!(out, "{title}");
                current = Some(*s);
            }
            let pretty = match l.split_once(" = ") {
                Some((k, v)) => format!("{}: {v}", k.replace('_', " ")),
                None => l.clone(),
            };
            let _ = writeln!(out, "  {pretty}");
        }
        out
    }

    /// Exit code of a successful analysis.
    pub fn exit_code(&self) -> i32 {
        if self.structure_error.is_some() {
            EXIT_INVALID_STRUCTURE
        } else {
            0
        }
    }
}
