//! `bracelab`: enumerate catalogs, classify braces, analyze solutions and
//! run verification campaigns.
//!
//! Exit codes: 0 when everything passes, 1 when a check fails, 2 for usage
//! or input errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use bracelab::campaign::{classify, run_suite, SuiteParams, CLASSIFY_HEADER};
use bracelab::enumeration::{
    enumerate_involutive_solutions, enumerate_skew_braces, enumerate_skew_braces_direct, groups_of_order,
    BraceEnumOptions, Catalog, CatalogKind, GroupJson, SolutionItem,
};
use bracelab::ybe::{equivalence_check, multipermutation_level, SolutionError, SolutionJson};
use bracelab::{BraceJson, SkewBrace};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bracelab", version, about = "Finite skew braces and Yang–Baxter solutions")]
struct Cli {
    /// Closure budget for permutation braces.
    #[arg(long, global = true, env = "BRACELAB_BUDGET", default_value_t = bracelab::DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Braces,
    Solutions,
    Groups,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Holomorph,
    Direct,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a catalog of one order and write it as JSON lines.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "holomorph")]
        method: Method,
        /// Output file (standard output when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Progress file for resumable brace enumeration.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Classify every brace of a catalog and write one CSV row per brace.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Operations on single solutions.
    Solution {
        #[command(subcommand)]
        command: SolutionCommand,
    },
    /// Run a verification suite and print its report as JSON.
    Verify {
        #[arg(long)]
        suite: String,
        /// Largest brace order (or solution size for `equivalence`).
        #[arg(long)]
        max_order: Option<usize>,
        /// Explicit comma-separated orders, overriding `--max-order`.
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Sampled size-5 solutions for `equivalence`.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Directory holding `braces-N.jsonl` catalogs; missing ones are built.
        #[arg(long)]
        catalog_dir: Option<PathBuf>,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the CSV summary here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SolutionCommand {
    /// Print level, permutation brace size and nilpotency verdicts.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// `Ok(passed)`; errors are usage or input errors.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Enumerate {
            kind,
            order,
            method,
            out,
            checkpoint,
        } => {
            let start = Instant::now();
            let mut buf = Vec::new();
            match (kind, method) {
                (Kind::Braces, method) => {
                    let (braces, name) = match method {
                        Method::Holomorph => {
                            let opts = BraceEnumOptions {
                                checkpoint,
                                ..Default::default()
                            };
                            (enumerate_skew_braces(order, &opts)?, "holomorph")
                        }
                        Method::Direct => (enumerate_skew_braces_direct(order)?, "direct"),
                    };
                    let items: Vec<BraceJson> = braces.iter().map(SkewBrace::to_json).collect();
                    Catalog::new(CatalogKind::Braces, order, name, start.elapsed().as_secs_f64(), items)
                        .write_jsonl(&mut buf)?;
                }
                (Kind::Solutions, Method::Holomorph) => {
                    let items: Vec<SolutionItem> = enumerate_involutive_solutions(order)?
                        .iter()
                        .map(|s| SolutionItem::from_solution(s, cli.budget))
                        .collect();
                    Catalog::new(
                        CatalogKind::Solutions,
                        order,
                        "cycle_sets",
                        start.elapsed().as_secs_f64(),
                        items,
                    )
                    .write_jsonl(&mut buf)?;
                }
                (Kind::Groups, Method::Holomorph) => {
                    let items: Vec<GroupJson> = groups_of_order(order)?.iter().map(GroupJson::from).collect();
                    Catalog::new(
                        CatalogKind::Groups,
                        order,
                        "cyclic_extensions",
                        start.elapsed().as_secs_f64(),
                        items,
                    )
                    .write_jsonl(&mut buf)?;
                }
                (_, Method::Direct) => bail!("--method direct applies to braces only"),
            }
            write_output(out.as_ref(), &String::from_utf8(buf)?)?;
            Ok(true)
        }
        Command::Classify { input, report } => {
            let cat: Catalog<BraceJson> =
                Catalog::load(&input).with_context(|| format!("reading {}", input.display()))?;
            let braces = cat
                .items
                .iter()
                .enumerate()
                .map(|(i, j)| {
                    j.validate()
                        .map(|r| r.value)
                        .with_context(|| format!("catalog item {i}"))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let rows = classify(&braces);
            let mut csv = String::from(CLASSIFY_HEADER);
            csv.push('\n');
            for r in &rows {
                csv.push_str(&r.csv());
                csv.push('\n');
            }
            write_output(Some(&report), &csv)?;
            let ann = rows.iter().filter(|r| r.annihilator).count();
            println!("{} braces, {} annihilator nilpotent", rows.len(), ann);
            Ok(true)
        }
        Command::Solution {
            command: SolutionCommand::Analyze { input },
        } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let json: SolutionJson = serde_json::from_str(&text).context("parsing solution")?;
            let sol = json.validate().context("invalid solution")?;
            let level = multipermutation_level(&sol).context("retraction")?;
            match equivalence_check(&sol, cli.budget) {
                Ok(report) => {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                    Ok(true)
                }
                Err(e @ SolutionError::EquivalenceViolated { .. }) => {
                    let out = serde_json::json!({ "level": level, "error": e.to_string() });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                    Ok(false)
                }
                Err(e) => Err(anyhow::Error::new(e).context("permutation brace")),
            }
        }
        Command::Verify {
            suite,
            max_order,
            orders,
            seed,
            samples,
            jobs,
            catalog_dir,
            report,
            csv,
        } => {
            if let Some(j) = jobs {
                if j == 0 {
                    bail!("--jobs must be positive");
                }
                rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
            }
            let mut params = SuiteParams::defaults(&suite, seed);
            if let Some(m) = max_order {
                params.orders = (1..=m).collect();
            }
            if let Some(o) = orders {
                params.orders = o;
            }
            if let Some(s) = samples {
                params.samples = s;
            }
            params.catalog_dir = catalog_dir;
            params.budget = cli.budget;
            if let Some(d) = &params.catalog_dir {
                fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
            }
            let result = run_suite(&suite, &params)?;
            let json = serde_json::to_string_pretty(&result)?;
            write_output(report.as_ref(), &(json + "\n"))?;
            if let Some(p) = csv {
                write_output(Some(&p), &result.csv())?;
            }
            for c in result.checks.iter().filter(|c| c.failures > 0 && !c.diagnostic) {
                eprintln!("FAILED {}: {} of {}", c.claim_id, c.failures, c.instances);
            }
            Ok(result.passed)
        }
    }
}
