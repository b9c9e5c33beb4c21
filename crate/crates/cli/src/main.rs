//! `cinfty`: verification sweeps, tree listings, the interval table and
//! products on simplicial complexes.
//!
//! Exit status is 0 when every check passes, 1 on a verification failure
//! and 2 on a usage or input error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cinfty::complex::{check_whitney_conditions, load_complex, transferred_global_m, GlobalCochain, OrderedComplex};
use cinfty::dupont::check_contraction;
use cinfty::tensor::SignRule;
use cinfty::transfer::{
    check_a_infinity, check_c_infinity, check_morphism, check_tree_formula, check_unital,
    interval_product_table, p_polynomial_sequence, Transfer, WhitneyDupont,
};
use cinfty::tree::{count_trees, enumerate_trees};

/// Largest tail count for which `trees` prints a listing.
const MAX_LISTED_LEAVES: u32 = 10;
/// Order of the `p_n` rows printed by `interval`.
const P_ROWS: usize = 8;

#[derive(Parser)]
#[command(name = "cinfty", version, about = "Exact homotopy transfer along the Whitney-Dupont contraction")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the contraction identities on Ω_n.
    Contraction {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        dim: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        max_poly_degree: u32,
    },
    /// List or count planar trees.
    Trees {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        leaves: u32,
        #[arg(long)]
        count_only: bool,
    },
    /// Transferred products on the interval.
    Interval {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..))]
        max_arity: u32,
    },
    /// Run the A∞, morphism, C∞ and unital batteries on N_n.
    Verify {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        dim: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        max_arity: u32,
        /// Drop every Koszul sign; the batteries should then fail.
        #[arg(long)]
        break_signs: bool,
    },
    /// Operations on a simplicial complex.
    Complex {
        #[arg(long)]
        file: PathBuf,
        #[command(subcommand)]
        op: ComplexOp,
    },
}

#[derive(Subcommand)]
enum ComplexOp {
    /// a ⊔ b
    Cup {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// δa
    Coboundary {
        #[arg(long)]
        a: PathBuf,
    },
    /// Transferred m_n on the given cochains, in order.
    Product {
        #[arg(long, required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
    },
    /// Whitney's product conditions over all basis cochains.
    WhitneyCheck,
}

enum Failure {
    Usage(String),
}

struct Outcome {
    text: String,
    passed: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn input<T>(r: Result<T, cinfty::Error>, path: &Path) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Contraction {
            dim,
            max_poly_degree,
        } => {
            let report = check_contraction(dim as usize, max_poly_degree);
            let passed = report.all_passed();
            let text = if json {
                pretty(&json!({ "passed": passed, "report": report }))
            } else {
                report.to_string()
            };
            Ok(Outcome { text, passed })
        }
        Command::Trees { leaves, count_only } => {
            let count = count_trees(leaves as usize);
            if count_only {
                let text = if json {
                    pretty(&json!({ "leaves": leaves, "count": count.to_string() }))
                } else {
                    format!("{count}\n")
                };
                return Ok(Outcome { text, passed: true });
            }
            if leaves > MAX_LISTED_LEAVES {
                return Err(Failure::Usage(format!(
                    "listing is limited to {MAX_LISTED_LEAVES} leaves; use --count-only"
                )));
            }
            let trees: Vec<String> = enumerate_trees(leaves as usize)
                .iter()
                .map(|t| t.to_string())
                .collect();
            let text = if json {
                pretty(&json!({ "leaves": leaves, "count": count.to_string(), "trees": trees }))
            } else {
                let mut s = String::new();
                for t in &trees {
                    writeln!(s, "{t}").unwrap();
                }
                s
            };
            Ok(Outcome { text, passed: true })
        }
        Command::Interval { max_arity } => {
            let table = interval_product_table(max_arity as usize);
            let rows = p_polynomial_sequence(P_ROWS);
            let rows_ok = rows
                .iter()
                .all(|r| r.matches_closed_form && r.matches_series && r.b_matches);
            let passed = table.all_passed() && rows_ok;
            let text = if json {
                pretty(&json!({ "passed": passed, "table": table, "p_polynomials": rows }))
            } else {
                let mut s = table.to_string();
                writeln!(s, "p polynomials").unwrap();
                for r in &rows {
                    writeln!(
                        s,
                        "  p_{} = {}  b_{} = {}  {}",
                        r.n,
                        r.p,
                        r.n,
                        cinfty::scalar::format_rational(&r.b),
                        if r.matches_closed_form && r.matches_series && r.b_matches {
                            "ok"
                        } else {
                            "MISMATCH"
                        }
                    )
                    .unwrap();
                }
                s
            };
            Ok(Outcome { text, passed })
        }
        Command::Verify {
            dim,
            max_arity,
            break_signs,
        } => {
            let ctx = WhitneyDupont::new(dim as usize);
            let rule = if break_signs {
                SignRule::Ignore
            } else {
                SignRule::Koszul
            };
            let tr = Transfer::with_rule(&ctx, rule);
            let basis = ctx.basis();
            let name = format!("N_{dim}");
            let n = max_arity as usize;
            let reports = vec![
                check_a_infinity(&tr, n, &basis, &name),
                check_morphism(&tr, n, &basis, &name),
                check_c_infinity(&tr, n, &basis, &name),
                check_unital(&tr, n, &basis, &name),
                check_tree_formula(&tr, n, &basis, &name),
            ];
            let passed = reports.iter().all(|r| r.passed);
            let text = if json {
                pretty(&json!({
                    "dimension": dim,
                    "max_arity": max_arity,
                    "sign_rule": if break_signs { "ignore" } else { "koszul" },
                    "passed": passed,
                    "reports": reports,
                }))
            } else {
                let mut s = format!("verify n={dim} max-arity={max_arity}\n");
                for r in &reports {
                    writeln!(s, "{r}").unwrap();
                }
                s
            };
            Ok(Outcome { text, passed })
        }
        Command::Complex { file, op } => {
            let x = input(load_complex(&read(&file)?), &file)?;
            complex(&x, op, json)
        }
    }
}

fn cochain_output(c: &GlobalCochain, json: bool) -> String {
    if json {
        c.to_json()
    } else {
        format!("{c}\n")
    }
}

fn complex(x: &OrderedComplex, op: ComplexOp, json: bool) -> Result<Outcome, Failure> {
    let load = |path: &Path| -> Result<GlobalCochain, Failure> { input(x.load_cochain(&read(path)?), path) };
    match op {
        ComplexOp::Cup { a, b } => {
            let value = x.cup(&load(&a)?, &load(&b)?);
            Ok(Outcome {
                text: cochain_output(&value, json),
                passed: true,
            })
        }
        ComplexOp::Coboundary { a } => Ok(Outcome {
            text: cochain_output(&x.coboundary(&load(&a)?), json),
            passed: true,
        }),
        ComplexOp::Product { inputs } => {
            let word = inputs.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
            let tr = Transfer::new(x);
            let value = transferred_global_m(&tr, word.len(), &word)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Outcome {
                text: cochain_output(&value, json),
                passed: true,
            })
        }
        ComplexOp::WhitneyCheck => {
            let report = check_whitney_conditions(x);
            let passed = report.all_passed();
            let text = if json {
                pretty(&json!({ "passed": passed, "report": report }))
            } else {
                report.to_string()
            };
            Ok(Outcome { text, passed })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
