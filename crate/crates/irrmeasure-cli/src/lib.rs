//! Command-line front end: configuration, commands and report rendering.

pub mod commands;
pub mod config;
pub mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

use commands::{BoundTarget, CommandError, Family, OracleArgs, OracleKind, Suite};
use config::{ConfigFile, Flags, Format, NRange, RunConfig, UsageError};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "irrmeasure", version, about = "Linear forms in logarithms and irrationality-measure bounds")]
pub struct Cli {
    /// Working precision in decimal digits (at least 20)
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Index or inclusive range, e.g. `5` or `1..8`
    #[arg(long, global = true)]
    pub n: Option<NRange>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Line-oriented `key = value` file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for the randomised verification suites
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble an irrationality-measure bound with its ledger
    Bound {
        #[arg(value_enum)]
        target: BoundTarget,
    },
    /// Exact coefficients of the linear forms of a family
    Forms {
        #[arg(value_enum)]
        family: Family,
    },
    /// Run an invariant suite; exit code 1 on any failure
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Exhaustive integer-polynomial search on [0, (sqrt 2 - 1)^2]
    Search {
        /// Largest degree searched (at most 8, default 7)
        #[arg(long)]
        degree: Option<u32>,
        /// Coefficient box |c| <= bound (default 10)
        #[arg(long)]
        coeff_bound: Option<u32>,
    },
    /// High-precision series evaluations
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        /// Ramanujan series id: 39 (4/pi) or 44 (1/(2 pi sqrt 2))
        #[arg(long)]
        series: Option<u32>,
        /// Number of terms of the partial sum
        #[arg(long)]
        terms: Option<u32>,
        /// Upper parameter, e.g. `1/2` or `-3`
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Upper parameter
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Lower parameter (not a non-positive integer)
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// `re` or `re,im`
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn run_config(cli: &Cli) -> Result<RunConfig, UsageError> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError::Io { path: path.display().to_string(), msg: e.to_string() })?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };
    let flags = Flags { precision: cli.precision, n: cli.n, format: cli.format, seed: cli.seed };
    RunConfig::resolve(flags, file)
}

pub fn execute(command: &Command, rc: &RunConfig) -> Result<Report, CommandError> {
    match command {
        Command::Bound { target } => commands::cmd_bound(*target, rc),
        Command::Forms { family } => commands::cmd_forms(*family, rc),
        Command::Verify { suite } => commands::cmd_verify(*suite, rc),
        Command::Search { degree, coeff_bound } => commands::cmd_search(rc, *degree, *coeff_bound),
        Command::Oracle { kind, series, terms, a, b, c, z } => {
            let args = OracleArgs { series: *series, terms: *terms, a: a.clone(), b: b.clone(), c: c.clone(), z: z.clone() };
            commands::cmd_oracle(*kind, args, rc)
        }
    }
}

/// Renders the outcome and returns the exit code.
pub fn run(cli: &Cli, stdout: &mut impl std::io::Write, stderr: &mut impl std::io::Write) -> i32 {
    let rc = match run_config(cli) {
        Ok(rc) => rc,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command, &rc) {
        Ok(report) => {
            let _ = stdout.write_all(report.render(rc.format).as_bytes());
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(CommandError::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILED
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invoke(args: &[&str]) -> (i32, String, String) {
        let cli = match Cli::try_parse_from(std::iter::once("irrmeasure").chain(args.iter().copied())) {
            Ok(cli) => cli,
            Err(e) => return (e.exit_code(), String::new(), e.to_string()),
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&cli, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn temp_file(name: &str, text: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("irrmeasure-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn json_is_deterministic_and_round_trips() {
        for args in [
            &["bound", "log2-simple", "--format", "json"][..],
            &["verify", "symmetry", "--seed", "7", "--format", "json"],
            &["search", "--degree", "4", "--coeff-bound", "6", "--format", "json"],
            &["forms", "hata", "--n", "1..2", "--format", "json"],
            &["oracle", "ramanujan", "--format", "json"],
        ] {
            let (code, first, _) = invoke(args);
            assert_eq!(code, EXIT_OK, "{args:?}");
            let (_, second, _) = invoke(args);
            assert_eq!(first, second, "{args:?}");
            let parsed: Report = serde_json::from_str(&first).unwrap();
            assert_eq!(parsed.render(Format::Json), first);
        }
    }

    #[test]
    fn bound_prints_ledger() {
        let (code, out, _) = invoke(&["bound", "log2-rukhadze", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let r: Report = serde_json::from_str(&out).unwrap();
        let mu: f64 = r.get("mu").unwrap().parse().unwrap();
        assert!((mu - 3.89139977).abs() < 1e-6);
        let ledger = r.table("ledger").unwrap();
        assert!(ledger.rows.iter().any(|row| row[1] == "phi-saving"));
    }

    #[test]
    fn quadratic_numerator_row_matches_unit_family() {
        let row = |family: &str| {
            let (_, out, _) = invoke(&["forms", family, "--n", "1", "--format", "json"]);
            let r: Report = serde_json::from_str(&out).unwrap();
            let t = r.table("forms").unwrap().rows[0].clone();
            (t[2].clone(), t[3].clone())
        };
        assert_eq!(row("rhin-simple"), row("simple"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(invoke(&["bound", "log5"]).0, EXIT_USAGE);
        assert_eq!(invoke(&["bound", "log2-simple", "--precision", "10"]).0, EXIT_USAGE);
        let path = temp_file("bad.conf", "precision = 30\nflavour = strange\n");
        let (code, _, err) = invoke(&["bound", "log2-simple", "--config", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("flavour"));
    }

    #[test]
    fn config_file_supplies_defaults() {
        let text = "# the (z-1)^n (z-2)^n numerator\nformat = json\nprecision = 25\npoints = 2\nd = 1\ndelta = 2\n\
                    factor = -1 1 @ 1\nfactor = -2 1 @ 1\n";
        let path = temp_file("simple.conf", text);
        let (code, out, _) = invoke(&["bound", "custom", "--config", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let r: Report = serde_json::from_str(&out).unwrap();
        assert!(r.get("mu").unwrap().starts_with("4.62210083"));
        assert_eq!(r.params[0].value, "25");
    }

    #[test]
    fn csv_has_header() {
        let (code, out, _) = invoke(&["verify", "profiles", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("section,key,value\n"));
        assert!(out.contains("row,profiles,\"(7,6,8)\""));
    }
}
