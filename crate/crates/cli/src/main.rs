//! `dtrans`: configuration-driven experiments.
//!
//! Exit status: 0 on success, 2 when the configuration is rejected, 3 when
//! a numerical step stayed undecided, 1 on I/O failure.

mod config;
mod run;
mod svg;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dtrans_core::natset::{FamilyTest, GENERATOR_NAMES};
use dtrans_core::shiftlab::WEIGHT_FAMILIES;

use config::{parse_config, Format, ValidationError};

#[derive(Parser)]
#[command(name = "dtrans", version, about = "Finite-scale disjoint transitivity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file or a shipped preset.
    Run(RunArgs),
    /// List weight families, set generators, family tests and presets.
    Catalog,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["config", "preset"])))]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Overrides `output.formats`; repeatable.
    #[arg(long = "format", value_enum)]
    formats: Vec<Format>,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

const PRESETS: [(&str, &str); 5] = [
    ("families-knr", include_str!("../presets/families-knr.json")),
    ("qk-separation", include_str!("../presets/qk-separation.json")),
    ("rhc-multiples-of-three", include_str!("../presets/rhc-multiples-of-three.json")),
    ("shift-step", include_str!("../presets/shift-step.json")),
    ("sobolev-fknr", include_str!("../presets/sobolev-fknr.json")),
];

fn catalog() -> String {
    let mut out = String::new();
    let mut section = |title: &str, names: &mut dyn Iterator<Item = &str>| {
        out.push_str(title);
        out.push_str(":\n");
        let mut v: Vec<&str> = names.collect();
        v.sort_unstable();
        for n in v {
            out.push_str("  ");
            out.push_str(n);
            out.push('\n');
        }
    };
    section("experiment presets", &mut PRESETS.iter().map(|p| p.0));
    section("family tests", &mut FamilyTest::NAMES.iter().copied());
    section("set generators", &mut GENERATOR_NAMES.iter().copied());
    section("weight families", &mut WEIGHT_FAMILIES.iter().copied());
    out
}

enum Failure {
    Invalid(ValidationError),
    Io(String),
}

impl From<ValidationError> for Failure {
    fn from(e: ValidationError) -> Self {
        Failure::Invalid(e)
    }
}

fn execute(args: &RunArgs) -> Result<bool, Failure> {
    let text = match (&args.config, &args.preset) {
        (Some(path), _) => fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        (None, Some(name)) => PRESETS
            .iter()
            .find(|p| p.0 == name)
            .map(|p| p.1.to_string())
            .ok_or_else(|| ValidationError::new("preset", format!("unknown preset `{name}`")))?,
        (None, None) => unreachable!("clap requires a source"),
    };
    let mut cfg = parse_config(&text)?;
    if !args.formats.is_empty() {
        cfg.output.formats = args.formats.clone();
    }
    cfg.output.formats.sort_unstable();
    cfg.output.formats.dedup();
    let supported = run::supported_formats(cfg.kind);
    if let Some(f) = cfg.output.formats.iter().find(|f| !supported.contains(f)) {
        return Err(ValidationError::new(
            "output.formats",
            format!("`{}` reports are not available for kind `{}`", f.extension(), cfg.kind),
        )
        .into());
    }
    let report = run::run(&cfg)?;
    let dir = args.out.clone().or_else(|| cfg.output.dir.as_ref().map(PathBuf::from));
    match dir {
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            for &f in &cfg.output.formats {
                let path = dir.join(format!("report.{}", f.extension()));
                let body = report.render(f).expect("format checked above");
                fs::write(&path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                println!("{}", path.display());
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for &f in &cfg.output.formats {
                let body = report.render(f).expect("format checked above");
                stdout
                    .write_all(body.as_bytes())
                    .map_err(|e| Failure::Io(e.to_string()))?;
            }
        }
    }
    Ok(report.undecided)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Catalog => {
            print!("{}", catalog());
            ExitCode::SUCCESS
        }
        Command::Run(args) => match execute(&args) {
            Ok(false) => ExitCode::SUCCESS,
            Ok(true) => {
                eprintln!("some cases stayed undecided");
                ExitCode::from(3)
            }
            Err(Failure::Invalid(e)) => {
                let body = serde_json::json!({ "error": "validation", "fields": e.fields, "message": e.message });
                eprintln!("{body}");
                ExitCode::from(2)
            }
            Err(Failure::Io(msg)) => {
                eprintln!("{}", serde_json::json!({ "error": "io", "message": msg }));
                ExitCode::from(1)
            }
        },
    }
}
