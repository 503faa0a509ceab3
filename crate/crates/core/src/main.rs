use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diagres::category::{bar_cobar, builtin_category, builtin_resolution, verify_resolution, CategoryResolution, FiniteCategory, BUILTIN_CATEGORIES};
use diagres::chi::{chi_construct, validated_barcobar_chi2, verify_c1_c6};
use diagres::resolver::{DInfinity, KoszulGeneratorGrid, ResolverConfig};
use diagres::Error;

#[derive(Parser)]
#[command(name = "diagres", version, about = "Resolutions of diagrams of algebras over exact rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bar-cobar resolution of a category with its homology check.
    Barcobar {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// The maps χ_n of a category resolution with the (C1)–(C6) report.
    Chi {
        #[command(flatten)]
        input: Input,
        /// Tensor power.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Largest generator degree given a value.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The resolution D∞ of the diagram operad and its verification.
    Resolve {
        #[command(flatten)]
        input: Input,
        /// Built-in operad name or path to a grid JSON file.
        #[arg(long, default_value = "ass")]
        operad: String,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Worker threads for the slice checks.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Solve for ω in the ideal generated by X_F(<n) first.
        #[arg(long)]
        strict_ideal: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Input {
    /// Built-in category name or path to a category JSON file.
    #[arg(long)]
    category: Option<String>,
    /// Built-in resolution name, `bar-cobar`, or path to a resolution JSON file.
    #[arg(long)]
    resolution: Option<String>,
    /// Bound on chain and word lengths for categories with cycles.
    #[arg(long)]
    max_chain_length: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{path}: {e}")))
}

fn category(name: &str) -> Result<FiniteCategory, Error> {
    if BUILTIN_CATEGORIES.contains(&name) {
        builtin_category(name)
    } else {
        FiniteCategory::from_json(&read(name)?)
    }
}

impl Input {
    fn category(&self) -> Result<FiniteCategory, Error> {
        let name = self.category.as_deref().ok_or_else(|| Error::Schema("--category is required".into()))?;
        category(name)
    }

    /// The resolution and whether it is the bar-cobar one.
    fn resolution(&self) -> Result<(CategoryResolution, bool), Error> {
        match (self.resolution.as_deref(), self.category.as_deref()) {
            (Some("bar-cobar"), _) => Ok((bar_cobar(&self.category()?, self.max_chain_length)?, true)),
            (Some(r), _) if Path::new(r).is_file() => Ok((CategoryResolution::from_json(&read(r)?)?, false)),
            (Some(r), _) => Ok((builtin_resolution(r)?, false)),
            (None, Some(c)) if BUILTIN_CATEGORIES.contains(&c) && c != "iso" => Ok((builtin_resolution(c)?, false)),
            (None, Some(_)) => Ok((bar_cobar(&self.category()?, self.max_chain_length)?, true)),
            (None, None) => Err(Error::Schema("--category or --resolution is required".into())),
        }
    }
}

fn emit(output: &Output, value: &serde_json::Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Schema(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(pass: bool, what: &str) -> Result<(), Error> {
    if pass {
        Ok(())
    } else {
        Err(Error::Verification {
            what: what.into(),
            witness: "see the report".into(),
        })
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Barcobar { input, output } => {
            let cat = input.category()?;
            let res = bar_cobar(&cat, input.max_chain_length)?;
            let report = verify_resolution(&res, input.max_chain_length);
            let pass = report.pass();
            emit(
                &output,
                &serde_json::json!({
                    "category": cat.to_json(),
                    "resolution": res.to_json(),
                    "report": serde_json::to_value(&report).expect("report serializes"),
                    "pass": pass,
                }),
            )?;
            verdict(pass, "bar-cobar resolution")
        }
        Command::Chi { input, n, max_degree, output } => {
            let (res, barcobar) = input.resolution()?;
            let (chi, convention) = if barcobar && n == 2 {
                let (chi, c) = validated_barcobar_chi2(&res)?;
                (chi, Some(format!("{c:?}")))
            } else {
                (chi_construct(&res, n, max_degree)?, None)
            };
            let report = verify_c1_c6(&res, &chi, 3);
            let pass = report.pass();
            emit(
                &output,
                &serde_json::json!({
                    "resolution": res.name,
                    "n": n,
                    "max_degree": max_degree,
                    "sign_convention": convention,
                    "values": chi.table(&res),
                    "report": serde_json::to_value(&report).expect("report serializes"),
                    "pass": pass,
                }),
            )?;
            verdict(pass, "(C1)-(C6)")
        }
        Command::Resolve {
            input,
            operad,
            max_arity,
            max_degree,
            jobs,
            strict_ideal,
            output,
        } => {
            let grid = if Path::new(&operad).is_file() {
                KoszulGeneratorGrid::from_json(&read(&operad)?)?
            } else {
                KoszulGeneratorGrid::builtin(&operad, max_arity)?
            };
            let (res, _) = input.resolution()?;
            let config = ResolverConfig {
                max_arity,
                max_degree,
                max_chain_length: input.max_chain_length,
                strict_ideal,
                jobs,
                ..ResolverConfig::default()
            };
            let d = DInfinity::build(grid, res, config)?;
            let report = d.verify()?;
            emit(&output, &d.to_json(&report))?;
            match report.failure() {
                None => Ok(()),
                Some((name, check)) => Err(Error::Verification {
                    what: name.into(),
                    witness: check.witness.clone().unwrap_or_default(),
                }),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Schema(_) | Error::Invalid(_) => 1,
                Error::Verification { .. } => 2,
                Error::NoSolution { .. } => 3,
            })
        }
    }
}
