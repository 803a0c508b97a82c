//! Verdict tables over registry entries: formality, Lefschetz and a Betti
//! parity column, for symplectic entries, their circle products, and
//! `b1 = 1` examples known only through Betti numbers.

use std::thread;

use crate::registry::registry;
use crate::report::{analyze, AnalysisReport, ReportError, ReportOptions};
use crate::topology::{blowup_betti, kunneth_betti, BettiVector};

/// Rows of the even-dimensional table: (label, registry name).
pub const SYMPLECTIC_ROWS: &[(&str, &str)] = &[
    ("T^4", "torus_4"),
    ("G6.78 x G6.78", "g6_78_x_g6_78"),
    ("G6.78", "g6_78"),
    ("E4", "e4"),
    ("KT x KT", "kt_x_kt"),
    ("KT", "kt"),
];

/// Rows of the odd-dimensional table.
pub const COSYMPLECTIC_ROWS: &[(&str, &str)] = &[
    ("T^5", "torus_5"),
    ("G6.78 x G6.78 x S1", "g6_78_x_g6_78_x_s1"),
    ("G6.78 x S1", "g6_78_x_s1"),
    ("KT x KT x S1", "kt_x_kt_x_s1"),
    ("E4 x S1", "e4_x_s1"),
    ("KT x S1", "kt_x_s1"),
];

fn analyze_all(names: &[&str]) -> Result<Vec<AnalysisReport>, ReportError> {
    thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|name| {
                s.spawn(move || {
                    let spec = registry(name).expect("table rows name registry entries");
                    analyze(&spec, &ReportOptions::default())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn row(out: &mut String, label: &str, cells: &[&str]) {
    out.push_str(&format!("{label:<22}"));
    for c in cells {
        out.push_str(&format!(" {c:<14}"));
    }
    let trimmed = out.trim_end().len();
    out.truncate(trimmed);
    out.push('\n');
}

fn cp(n: usize) -> BettiVector {
    BettiVector::new((0..=2 * n).map(|k| usize::from(k % 2 == 0)).collect())
}

/// Renders the three tables. Formality is three-valued; Lefschetz means the
/// Lefschetz property in every degree.
pub fn render_tables() -> Result<String, ReportError> {
    let mut names: Vec<&str> = SYMPLECTIC_ROWS.iter().map(|r| r.1).collect();
    names.extend(COSYMPLECTIC_ROWS.iter().map(|r| r.1));
    let reports = analyze_all(&names)?;
    let (even, odd) = reports.split_at(SYMPLECTIC_ROWS.len());

    let mut out = String::new();
    out.push_str("table 1\n");
    row(
        &mut out,
        "manifold",
        &["formality", "lefschetz", "odd b even"],
    );
    for ((label, _), r) in SYMPLECTIC_ROWS.iter().zip(even) {
        let formality = r
            .formality
            .as_ref()
            .map(|v| v.formality.to_string())
            .unwrap_or_default();
        let lef = r.lefschetz.as_ref().is_some_and(|l| l.lefschetz_property());
        row(
            &mut out,
            label,
            &[&formality, yes(lef), yes(r.odd_betti_even)],
        );
    }

    out.push_str("\ntable 3\n");
    row(&mut out, "manifold", &["formality", "lefschetz", "b1 odd"]);
    for ((label, _), r) in COSYMPLECTIC_ROWS.iter().zip(odd) {
        let formality = r
            .formality
            .as_ref()
            .map(|v| v.formality.to_string())
            .unwrap_or_default();
        let lef = r.lefschetz.as_ref().is_some_and(|l| l.lefschetz_property());
        row(
            &mut out,
            label,
            &[&formality, yes(lef), yes(r.betti[1] % 2 == 1)],
        );
    }

    // Betti-level row: the blow-up of CP^5 along KT, times a circle. A factor
    // with an odd odd-degree Betti number cannot satisfy hard Lefschetz.
    out.push_str("\ntable 4\n");
    row(&mut out, "manifold", &["formality", "lefschetz", "b1"]);
    let kt = BettiVector::new(vec![1, 3, 4, 3, 1]);
    let blown = blowup_betti(&cp(5), &kt, 6).map_err(ReportError::Topology)?;
    let odd_even = blown
        .as_slice()
        .iter()
        .skip(1)
        .step_by(2)
        .all(|b| b % 2 == 0);
    let product = kunneth_betti(&blown, &BettiVector::circle());
    row(
        &mut out,
        "Bl_KT CP^5 x S1",
        &[
            "undetermined",
            if odd_even { "undetermined" } else { "no" },
            &product.get(1).to_string(),
        ],
    );
    Ok(out)
}
