//! `nucad`: build, query, verify, summarize and plot open NuCAD trees.
//!
//! Exit status: 0 success, 1 failed verification or I/O error, 2 usage or
//! parse error (including point arity and plotting a tree that is not
//! 2-dimensional), 3 cell cap exceeded, 4 query point on a cell boundary.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nucad::oracle::{verify_bpolys_in_closure, verify_truth_invariance, verify_weak_decomposition};
use nucad::treefile::{self, parse_rational, ReadError};
use nucad::{build_parallel, render_svg, ParallelBuildError, PlotError, PlotSpec};
use nucad_core::formula::parse_formula;
use nucad_core::{locate, stats, BuildError, Label, Location, NuCadTree, QPolicy, Rational, SplitPolicy, TreeStats};

#[derive(Parser)]
#[command(name = "nucad", version, about = "Truth-invariant open NuCADs of Tarski formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Greedy,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tree from a formula file and print its statistics.
    Build {
        formula: PathBuf,
        /// Write the tree file here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "greedy")]
        policy: Policy,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Abort once the tree has more cells than this.
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Print the leaf containing a point and the formula's value there.
    Query {
        tree: PathBuf,
        /// Comma-separated rationals, e.g. `-3/2,2`.
        #[arg(short, long, allow_hyphen_values = true)]
        point: String,
    },
    /// Run the verification suites on a tree.
    Verify {
        tree: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Points drawn inside each cell for the per-cell checks.
        #[arg(long, default_value_t = 500)]
        per_cell: usize,
        /// Points drawn inside each leaf for the truth check.
        #[arg(long, default_value_t = 100)]
        per_leaf: usize,
        /// Print the full reports as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print cell, leaf and factor counts.
    Stats { tree: PathBuf },
    /// Draw a 2-variable tree as SVG.
    Plot {
        tree: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// `x0,x1,y0,y1`.
        #[arg(long, allow_hyphen_values = true, default_value = "-4,4,-4,4")]
        window: String,
        /// Grid points per side.
        #[arg(long, default_value_t = 400)]
        resolution: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Failure {
        let code = match e {
            ReadError::Io(..) => 1,
            ReadError::Parse(_) => 2,
        };
        Failure::new(code, e.to_string())
    }
}

fn label_text(l: &Label) -> String {
    if l.is_root() {
        "λ".into()
    } else {
        l.to_string()
    }
}

fn stats_line(s: &TreeStats) -> String {
    format!(
        "cells: {}, leaves: {}, factors: {}, x-cells: {}, depth: {}",
        s.cells, s.leaves, s.factors, s.x_cells, s.depth
    )
}

fn parse_rationals(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',')
        .map(|s| parse_rational(s).ok_or_else(|| Failure::new(2, format!("bad rational `{}`", s.trim()))))
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Build {
            formula,
            output,
            policy,
            workers,
            cap,
        } => {
            let text = std::fs::read_to_string(&formula)
                .map_err(|e| Failure::new(1, format!("{}: {e}", formula.display())))?;
            let f = parse_formula(&text).map_err(|e| Failure::new(2, format!("{}: {e}", formula.display())))?;
            let policy = SplitPolicy {
                q_policy: match policy {
                    Policy::Greedy => QPolicy::Greedy,
                    Policy::Full => QPolicy::Full,
                },
                workers,
                cell_cap: cap,
                ..SplitPolicy::default()
            };
            let tree = build_parallel(&f, &policy).map_err(|e| match e {
                ParallelBuildError::Build(BuildError::CellCap { .. }) => Failure::new(3, e.to_string()),
                _ => Failure::new(1, e.to_string()),
            })?;
            if let Some(out) = output {
                write_file(&out, &treefile::to_string(&tree))?;
            }
            println!("{}", stats_line(&stats(&tree)));
        }
        Command::Query { tree, point } => {
            let tree = treefile::read(&tree)?;
            let point = parse_rationals(&point)?;
            if point.len() != tree.dimension() {
                return Err(Failure::new(
                    2,
                    format!("point has {} coordinates, tree has {} variables", point.len(), tree.dimension()),
                ));
            }
            match locate(&tree, &point).map_err(|e| Failure::new(1, e.to_string()))? {
                Location::Leaf { label, truth } => println!("{} {truth}", label_text(&label)),
                Location::Boundary { parent, level } => {
                    println!(
                        "boundary: point lies on a level-{level} section of the X child of {}",
                        label_text(&parent)
                    );
                    return Err(Failure::new(4, String::new()));
                }
            }
        }
        Command::Verify {
            tree,
            samples,
            seed,
            per_cell,
            per_leaf,
            json,
        } => {
            let tree: NuCadTree = treefile::read(&tree)?;
            let f = tree.formula();
            let reports = [
                verify_truth_invariance(&tree, f, samples, per_leaf, seed),
                verify_weak_decomposition(&tree, samples, per_cell, seed),
                verify_bpolys_in_closure(&tree, f, 10_000),
            ];
            if json {
                println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
            } else {
                for r in &reports {
                    println!("{}", r.summary());
                    for v in r.violations.iter().take(5) {
                        println!("  {v}");
                    }
                }
            }
            if reports.iter().any(|r| !r.passed) {
                return Err(Failure::new(1, String::new()));
            }
        }
        Command::Stats { tree } => {
            let tree = treefile::read(&tree)?;
            println!("{}", stats_line(&stats(&tree)));
        }
        Command::Plot {
            tree,
            output,
            window,
            resolution,
        } => {
            let tree = treefile::read(&tree)?;
            let w = parse_rationals(&window)?;
            let [x0, x1, y0, y1]: [Rational; 4] = w
                .try_into()
                .map_err(|_| Failure::new(2, "window needs four values x0,x1,y0,y1"))?;
            let spec = PlotSpec {
                x: (x0, x1),
                y: (y0, y1),
                columns: resolution,
                rows: resolution,
            };
            let svg = render_svg(&tree, &spec).map_err(|e| {
                let code = match e {
                    PlotError::Dimension(_) | PlotError::Window => 2,
                    PlotError::Tree(_) => 1,
                };
                Failure::new(code, e.to_string())
            })?;
            write_file(&output, &svg)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("nucad: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
