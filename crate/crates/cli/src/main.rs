use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use anyhow::{bail, Context, Result};
use cdga_core::registry::{corpus_names, registry, RegistryError};
use cdga_core::report::{analyze, AnalysisReport, ReportError, ReportOptions, Section};
use cdga_core::spec_file::{AlgebraSpec, SpecError};
use cdga_core::tables::render_tables;
use cdga_core::topology::{blowup_betti, mapping_torus_betti, AutomorphismAction, BettiVector, TopologyError};
use clap::{Args, Parser, Subcommand};

/// Cohomology, Lefschetz and Massey analysis of Lie-algebra models.
#[derive(Parser)]
#[command(name = "cdga", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Target {
    /// Spec file, or `@name` for a built-in model (see `cdga corpus --list`).
    target: String,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis.
    Report {
        #[command(flatten)]
        target: Target,
        /// Emit `key = value` lines instead of the grouped layout.
        #[arg(long)]
        machine: bool,
        /// Largest degree of Massey values scanned.
        #[arg(long, value_name = "K")]
        max_degree: Option<usize>,
        #[arg(long)]
        no_massey: bool,
    },
    /// Betti numbers and class representatives.
    Betti(Target),
    /// Structure validation and Lefschetz maps.
    Lefschetz(Target),
    /// Triple Massey products and the formality verdict.
    Massey {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_name = "K")]
        max_degree: Option<usize>,
    },
    /// Print the normalized spec text.
    Show(Target),
    /// Betti numbers of a blow-up along a submanifold.
    Blowup {
        #[arg(long, value_name = "BETTI")]
        ambient: BettiVector,
        #[arg(long, value_name = "BETTI")]
        sub: BettiVector,
        #[arg(long, value_name = "2K")]
        codim: usize,
    },
    /// Betti numbers of a mapping torus from the action on cohomology.
    MappingTorus {
        betti: BettiVector,
        /// File with `degree k` headers followed by matrix rows.
        #[arg(long, value_name = "FILE")]
        action: Option<PathBuf>,
    },
    /// Analyze built-in models concurrently.
    Corpus {
        #[arg(long, conflicts_with_all = ["names", "list"])]
        all: bool,
        /// Print the available names.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        machine: bool,
        names: Vec<String>,
    },
    /// Verdict tables over the built-in models.
    Tables,
}

fn load(target: &str) -> Result<AlgebraSpec> {
    if let Some(name) = target.strip_prefix('@') {
        return Ok(registry(name)?);
    }
    let text = fs::read_to_string(target).with_context(|| format!("reading {target}"))?;
    AlgebraSpec::parse(&text).with_context(|| format!("parsing {target}"))
}

fn run_report(target: &str, opts: &ReportOptions) -> Result<AnalysisReport> {
    let spec = load(target)?;
    Ok(analyze(&spec, opts)?)
}

fn print_sections(report: &AnalysisReport, wanted: &[Section]) -> i32 {
    print!("{}", report.sections(wanted));
    report.exit_code()
}

fn summary(r: &AnalysisReport) -> String {
    let formality = r.formality.as_ref().map_or("-".to_string(), |f| f.formality.to_string());
    let lefschetz = match (&r.lefschetz, &r.structure_error) {
        (_, Some(_)) => "invalid",
        (Some(l), None) if l.lefschetz_property() => "yes",
        (Some(_), None) => "no",
        (None, None) => "-",
    };
    format!(
        "{:<20} dim {:<2}  betti {:<48} lefschetz {:<7}  formality {}",
        r.name,
        r.dim,
        BettiVector::new(r.betti.clone()).to_string(),
        lefschetz,
        formality
    )
}

fn corpus(names: Vec<String>, machine: bool) -> Result<i32> {
    let results: Vec<Result<AnalysisReport>> = thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| s.spawn(move || run_report(&format!("@{n}"), &ReportOptions::default())))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut code = 0;
    for (name, r) in names.iter().zip(results) {
        match r {
            Ok(r) => {
                if machine {
                    println!("{}", r.machine());
                } else {
                    println!("{}", summary(&r));
                }
                code = code.max(r.exit_code());
            }
            Err(e) => {
                eprintln!("{name}: {}", render(&e));
                code = code.max(exit_code(&e));
            }
        }
    }
    Ok(code)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Report { target, machine, max_degree, no_massey } => {
            let opts = ReportOptions { massey_max_degree: max_degree, skip_massey: no_massey };
            let r = run_report(&target.target, &opts)?;
            print!("{}", if machine { r.machine() } else { r.human() });
            Ok(r.exit_code())
        }
        Command::Betti(t) => {
            let r = run_report(&t.target, &ReportOptions { skip_massey: true, ..Default::default() })?;
            Ok(print_sections(&r, &[Section::Cohomology]))
        }
        Command::Lefschetz(t) => {
            let r = run_report(&t.target, &ReportOptions { skip_massey: true, ..Default::default() })?;
            Ok(print_sections(&r, &[Section::Structure, Section::Lefschetz]))
        }
        Command::Massey { target, max_degree } => {
            let r = run_report(&target.target, &ReportOptions { massey_max_degree: max_degree, skip_massey: false })?;
            Ok(print_sections(&r, &[Section::Massey]))
        }
        Command::Show(t) => {
            print!("{}", load(&t.target)?.to_text());
            Ok(0)
        }
        Command::Blowup { ambient, sub, codim } => {
            println!("{}", blowup_betti(&ambient, &sub, codim)?);
            Ok(0)
        }
        Command::MappingTorus { betti, action } => {
            let act = match action {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    AutomorphismAction::parse(&text, &betti)?
                }
                None => AutomorphismAction::identity(&betti),
            };
            let out = mapping_torus_betti(&betti, &act)?;
            println!("betti = {out}");
            println!("euler = {}", out.euler_characteristic());
            Ok(0)
        }
        Command::Corpus { all, list, machine, names } => {
            if list {
                for n in corpus_names() {
                    println!("{n}");
                }
                return Ok(0);
            }
            let names = if all { corpus_names().into_iter().map(String::from).collect() } else { names };
            if names.is_empty() {
                bail!("give model names or --all");
            }
            corpus(names, machine)
        }
        Command::Tables => {
            print!("{}", render_tables()?);
            Ok(0)
        }
    }
}

/// 2: unreadable input, 3: `d² ≠ 0`, 4: invalid structure, 1: anything else.
fn exit_code(e: &anyhow::Error) -> i32 {
    if let Some(r) = e.downcast_ref::<ReportError>() {
        return r.exit_code();
    }
    if let Some(s) = e.downcast_ref::<SpecError>() {
        return ReportError::Spec(s.clone()).exit_code();
    }
    if e.downcast_ref::<RegistryError>().is_some() || e.downcast_ref::<TopologyError>().is_some() {
        return 2;
    }
    1
}

/// The context chain, skipping causes whose text the parent already quotes.
fn render(e: &anyhow::Error) -> String {
    let mut out = String::new();
    let mut last = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !last.ends_with(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
        last = msg;
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", render(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
