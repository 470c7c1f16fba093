//! Command-line front end.
//!
//! Machine-readable payloads (JSON / CSV) go to stdout; human-readable
//! summaries and progress go to stderr. Exit codes: 0 success, 1 usage
//! error, 2 computational guard or input-domain error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lee_codes::codes::{construct_gw, verify, CodeSpec, GwKind};
use lee_codes::criterion::{check_n, scan_with_sink, ExponentA, ReportedA, ReportedB};
use lee_codes::lee::enumerate_sphere;
use lee_codes::symfun::{check_lemma_chain, check_master_identity, power_sums};
use lee_codes::witness::{search, SearchOptions, Witness};

#[derive(Parser)]
#[command(name = "leecodes", version, about = "Perfect 2-error-correcting Lee code toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the nonexistence criterion for one n.
    Check {
        n: u64,
        /// Emit the full JSON report instead of a summary line.
        #[arg(long)]
        json: bool,
    },
    /// Scan n = 1..=xmax and count prime-p and criterion-applicable n.
    Scan {
        xmax: u64,
        /// Emit CSV (threshold,prime_count,applicable_count).
        #[arg(long)]
        csv: bool,
        /// Comma-separated ascending thresholds; defaults to 10,100,1000,10000
        /// clipped to xmax.
        #[arg(long, value_delimiter = ',')]
        thresholds: Option<Vec<u64>>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Write one JSON report per n to this file (JSON lines).
        #[arg(long, value_name = "out.jsonl")]
        per_n: Option<String>,
    },
    /// Enumerate the Lee sphere S(n,e) or its mod-q image.
    Sphere {
        n: usize,
        e: u32,
        #[arg(long)]
        q: Option<u64>,
        /// Print only the cardinality.
        #[arg(long)]
        count_only: bool,
    },
    /// Emit a Golomb-Welch code as JSON.
    Construct {
        /// gw1 (dimension 1), gw2 (dimension 2) or gwn1 (radius 1).
        kind: String,
        /// e for gw1/gw2, n for gwn1.
        param: u64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Verify a code file (JSON) against the tiling definition.
    Verify { codefile: String },
    /// Search for homomorphism witnesses in dimension n.
    SearchWitness {
        n: usize,
        /// Keep searching after the first witness.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        node_limit: Option<u64>,
        /// Disable scaling/permutation/sign-flip reduction.
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Check the power-sum algebra on an explicit witness vector.
    VerifyWitness {
        n: usize,
        /// Comma-separated values x_1,...,x_n.
        x_list: String,
        #[arg(long)]
        kmax: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // usage problems (including --help/--version) go to stderr;
            // help and version requests still exit 0
            let code = if err.use_stderr() { 1 } else { 0 };
            eprint!("{err}");
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Check { n, json } => {
            let report = check_n(n)?;
            if json {
                println!("{}", report.to_json());
            } else {
                eprintln!("n={} p={} verdict={}", report.n, report.p, report.verdict.as_str());
            }
        }
        Command::Scan {
            xmax,
            csv,
            thresholds,
            threads,
            per_n,
        } => {
            if let Some(t) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()?;
            }
            let thresholds = thresholds.unwrap_or_else(|| {
                let mut defaults: Vec<u64> = [10, 100, 1000, 10000]
                    .into_iter()
                    .filter(|&t| t <= xmax)
                    .collect();
                if defaults.last() != Some(&xmax) {
                    defaults.push(xmax);
                }
                defaults
            });
            let mut per_n_out = match &per_n {
                Some(path) => Some(BufWriter::new(File::create(path)?)),
                None => None,
            };
            let table = scan_with_sink(xmax, &thresholds, |report| {
                if let Some(out) = per_n_out.as_mut() {
                    writeln!(out, "{}", report.to_json()).map_err(|e| {
                        lee_codes::Error::InvalidInput(format!("per-n write failed: {e}"))
                    })?;
                }
                Ok(())
            })?;
            if csv {
                print!("{}", table.to_csv());
            } else {
                eprintln!("threshold  primes  applicable");
                for i in 0..table.thresholds.len() {
                    eprintln!(
                        "{:>9}  {:>6}  {:>10}",
                        table.thresholds[i], table.prime_counts[i], table.applicable_counts[i]
                    );
                }
            }
        }
        Command::Sphere { n, e, q, count_only } => {
            let sphere = enumerate_sphere(n, e, q)?;
            if count_only {
                println!("{}", sphere.points.len());
            } else {
                print!("{}", sphere.dump());
            }
        }
        Command::Construct { kind, param, out } => {
            let code = match kind.as_str() {
                "gw1" => construct_gw(GwKind::Dim1 { e: param as u32 }),
                "gw2" => construct_gw(GwKind::Dim2 { e: param as u32 }),
                "gwn1" => construct_gw(GwKind::Radius1 { n: param as usize }),
                other => {
                    return Err(lee_codes::Error::InvalidInput(format!(
                        "unknown construction '{other}' (expected gw1, gw2 or gwn1)"
                    ))
                    .into())
                }
            };
            let payload = serde_json::to_string(&code)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, payload + "\n")?;
                    eprintln!("wrote {path}");
                }
                None => println!("{payload}"),
            }
        }
        Command::Verify { codefile } => {
            let text = std::fs::read_to_string(&codefile)?;
            let code: CodeSpec = serde_json::from_str(&text)?;
            let result = verify(&code)?;
            println!("{}", result.to_json());
        }
        Command::SearchWitness {
            n,
            all,
            node_limit,
            no_symmetry,
        } => {
            let outcome = search(
                n,
                &SearchOptions {
                    find_all: all,
                    node_limit,
                    use_symmetry: !no_symmetry,
                },
            )?;
            eprintln!("{}", outcome.symmetry_note);
            let witnesses: Vec<&[u64]> = outcome.witnesses.iter().map(|w| w.x.as_slice()).collect();
            println!(
                "{}",
                serde_json::json!({
                    "witnesses": witnesses,
                    "exhausted": outcome.exhausted,
                    "nodes": outcome.nodes_explored,
                })
            );
        }
        Command::VerifyWitness { n, x_list, kmax } => {
            let x: Vec<u64> = x_list
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<Result<_, _>>()?;
            let witness = Witness::new(n, x)?;
            let kmax = kmax.unwrap_or(2 * n + 4);

            let report = check_n(n as u64)?;
            let a = match report.a {
                Some(ReportedA::Finite(a)) => ExponentA::Finite(a),
                Some(ReportedA::Infinite) => ExponentA::Infinite,
                _ => unreachable!("check_n resolves exponents exactly"),
            };
            let Some(ReportedB::Finite(b)) = report.b else {
                unreachable!("b exists whenever p is prime")
            };

            let kmax = kmax.min(((witness.p - 3) / 2) as usize).max(n);
            let ps = power_sums(&witness.x, witness.p, kmax)?;
            let eq1 = check_master_identity(&ps, n, witness.p, kmax)?;
            let chain = check_lemma_chain(&witness, a, b, Some(kmax as u64))?;

            let mut payload = chain.to_json();
            payload["bijective"] = serde_json::json!(true); // Witness::new verified it
            payload["eq1"] = eq1
                .iter()
                .map(|&(k, ok)| (k.to_string(), serde_json::Value::Bool(ok)))
                .collect::<serde_json::Map<_, _>>()
                .into();
            println!("{payload}");
        }
    }
    Ok(())
}
