//! The `hedonic` command-line tool.
//!
//! Exit codes: 0 on success, 1 when `verify` finds the partition unstable or
//! `survey` finds hierarchy violations, 2 on any error (including a solver
//! refusing a game that lacks its required property).

pub mod error;
pub mod gamefile;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hedonic::oracle::{survey, survey_cost};
use hedonic::restrictions::{
    is_bottom_responsive, is_mutual_bottom, is_mutual_top, is_strong_bottom_responsive, is_top_responsive,
};
use hedonic::solvers::{deviation_dynamics_capped, find_gdot_maximal_ir_capped, top_covering};
use hedonic::{fixtures, Caps, Checker, Concept, DynamicsMode, GameSpec, HedonicError, Partition, Property};
use serde::Serialize;
use serde_json::json;

pub use error::CliError;
pub use gamefile::GameFile;

#[derive(Debug, Parser)]
#[command(
    name = "hedonic",
    version,
    about = "Stability analysis for hedonic coalition formation games"
)]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the preference restrictions a game satisfies.
    Check { file: PathBuf },
    /// Run a constructive algorithm.
    Solve {
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        file: PathBuf,
    },
    /// Decide one stability concept for one partition.
    Verify {
        #[arg(long)]
        concept: String,
        #[arg(long)]
        partition: String,
        file: PathBuf,
    },
    /// Every stable partition for every concept, plus the lattice check.
    Survey {
        /// Lift the size caps on exhaustive scans.
        #[arg(long)]
        max_n_override: bool,
        file: PathBuf,
    },
    /// Write a bundled example game.
    Examples {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Tca,
    DynamicsIs,
    DynamicsSis,
    MaximalIr,
}

impl Algorithm {
    fn tag(self) -> &'static str {
        match self {
            Algorithm::Tca => "tca",
            Algorithm::DynamicsIs => "dynamics-is",
            Algorithm::DynamicsSis => "dynamics-sis",
            Algorithm::MaximalIr => "maximal-ir",
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let label = match e {
                CliError::Hedonic(HedonicError::Precondition { .. }) => "refused",
                _ => "error",
            };
            let _ = writeln!(err, "{label}: {e}");
            if matches!(e, CliError::Hedonic(HedonicError::Capacity { .. })) {
                let _ = writeln!(err, "hint: pass --max-n-override to survey larger games");
            }
            2
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    emit(out, &text)
}

fn display_name(file: &GameFile, path: &Path) -> String {
    file.name.clone().unwrap_or_else(|| path.display().to_string())
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check { file } => check(cli.json, file, out),
        Command::Solve { algorithm, file } => solve(cli.json, *algorithm, file, out),
        Command::Verify {
            concept,
            partition,
            file,
        } => verify(cli.json, concept, partition, file, out),
        Command::Survey { max_n_override, file } => run_survey(cli.json, *max_n_override, file, out, err),
        Command::Examples { name, out: path } => examples(name, path.as_deref(), out),
    }
}

#[derive(Serialize)]
struct RestrictionRow {
    property: Property,
    holds: Option<bool>,
    witness: Option<String>,
    note: Option<String>,
}

fn check(json: bool, path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = GameFile::load(path)?;
    let g = file.game.profile()?;
    type Check = fn(&hedonic::PreferenceProfile) -> hedonic::Result<hedonic::RestrictionVerdict>;
    let checks: [(Property, Check); 5] = [
        (Property::TopResponsive, is_top_responsive),
        (Property::TopMutual, is_mutual_top),
        (Property::BottomResponsive, is_bottom_responsive),
        (Property::StrongBottomResponsive, is_strong_bottom_responsive),
        (Property::BottomMutual, is_mutual_bottom),
    ];
    let mut rows = Vec::new();
    for (property, f) in checks {
        rows.push(match f(&g) {
            Ok(v) => RestrictionRow {
                property,
                holds: Some(v.holds()),
                witness: v.witness.map(|w| w.to_string()),
                note: None,
            },
            Err(HedonicError::Precondition { requirement, .. }) => RestrictionRow {
                property,
                holds: None,
                witness: None,
                note: Some(format!("requires {requirement}")),
            },
            Err(e) => return Err(e.into()),
        });
    }
    if json {
        emit_json(out, &json!({ "game": display_name(&file, path), "restrictions": rows }))?;
    } else {
        let mut text = String::new();
        for r in &rows {
            let status = match (r.holds, &r.witness, &r.note) {
                (Some(true), _, _) => "holds".to_string(),
                (Some(false), Some(w), _) => format!("fails: {w}"),
                (Some(false), None, _) => "fails".to_string(),
                (None, _, Some(note)) => format!("n/a ({note})"),
                (None, _, None) => "n/a".to_string(),
            };
            text.push_str(&format!("{}: {status}\n", r.property));
        }
        emit(out, &text)?;
    }
    Ok(0)
}

fn solve(json: bool, algorithm: Algorithm, path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = GameFile::load(path)?;
    let g = file.game.profile()?;
    let caps = Caps::default();
    let (partition, trace, trace_json) = match algorithm {
        Algorithm::Tca => {
            let (pi, t) = top_covering(&g)?;
            (pi, t.to_string(), serde_json::to_value(&t).expect("trace serializes"))
        }
        Algorithm::DynamicsIs | Algorithm::DynamicsSis => {
            let mode = if algorithm == Algorithm::DynamicsIs {
                DynamicsMode::Is
            } else {
                DynamicsMode::Sis
            };
            let (pi, t) = deviation_dynamics_capped(&g, mode, caps)?;
            (pi, t.to_string(), serde_json::to_value(&t).expect("trace serializes"))
        }
        Algorithm::MaximalIr => (
            find_gdot_maximal_ir_capped(&g, caps)?,
            String::new(),
            serde_json::Value::Null,
        ),
    };
    if json {
        emit_json(
            out,
            &json!({ "algorithm": algorithm.tag(), "partition": partition, "trace": trace_json }),
        )?;
    } else {
        emit(out, &format!("{partition}\n{trace}"))?;
    }
    Ok(0)
}

fn verify(json: bool, concept: &str, partition: &str, path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let concept: Concept = concept.parse()?;
    let file = GameFile::load(path)?;
    let g = file.game.profile()?;
    let pi = Partition::parse(g.n(), partition)?;
    let verdict = Checker::new(&g, Caps::default()).verdict(&pi, concept)?;
    if json {
        emit_json(out, &verdict)?;
    } else {
        emit(out, &format!("{verdict}\n"))?;
    }
    Ok(if verdict.stable { 0 } else { 1 })
}

fn run_survey(
    json: bool,
    max_n_override: bool,
    path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let file = GameFile::load(path)?;
    let g = file.game.profile()?;
    let caps = if max_n_override {
        let _ = writeln!(
            err,
            "note: caps lifted; about {} elementary checks for n = {}",
            survey_cost(g.n())?,
            g.n()
        );
        Caps::unlimited()
    } else {
        Caps::default()
    };
    let report = survey(&display_name(&file, path), &g, caps)?;
    if json {
        emit_json(out, &report)?;
    } else {
        emit(out, &report.to_string())?;
    }
    Ok(if report.hierarchy_violations.is_empty() { 0 } else { 1 })
}

/// The bundled example as a game file.
pub fn example_file(name: &str) -> Result<GameFile, CliError> {
    let listing = fixtures::by_name(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown example `{name}`; choose one of {}",
            fixtures::NAMES.join(", ")
        ))
    })?;
    Ok(GameFile {
        name: Some(name.to_string()),
        source: Some("bundled example".to_string()),
        game: GameSpec::Explicit(listing),
    })
}

fn examples(name: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = example_file(name)?.to_json();
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            source: e,
        })?,
        None => emit(out, &text)?,
    }
    Ok(0)
}
