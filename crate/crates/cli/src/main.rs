use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tractor_core::homology::RepKind;
use tractor_core::spec::{bgg_values, homology_tables, load_spec, run_suite, RunOptions, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact verification suites for compatible almost CR structures.
///
/// Exit status: 0 when every check passes, 1 when some check fails,
/// 2 for unusable input (bad arguments, unreadable or invalid spec files).
#[derive(Debug, Parser)]
#[command(name = "tractor-lab", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Overrides the jet order of the spec file.
    #[arg(long, global = true)]
    order: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions of H₀ and H₁ of p̃₊ with coefficients in a representation.
    Homology {
        #[arg(long)]
        n: usize,
        /// standard | adjoint
        #[arg(long)]
        rep: RepKind,
    },
    /// Runs a check suite on a manifold spec.
    Verify {
        /// Spec file, or the name of a built-in (flat-h2.spec, deformed-h2.spec).
        #[arg(long)]
        spec: PathBuf,
        /// homology | pseudoherm | crkilling | weyl | bgg | all
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Worker threads (defaults to the available parallelism).
        #[arg(long)]
        threads: Option<usize>,
        /// Adds per-group runtimes to the report.
        #[arg(long)]
        timings: bool,
    },
    /// Evaluates the first BGG operators on one named density and runs the BGG checks for it.
    Bgg {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        density: String,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tractor-lab: {}", e);
            ExitCode::from(2)
        }
    }
}

/// Prints the result; `Ok(passed)`.
fn run(cli: &Cli) -> tractor_core::Result<bool> {
    match &cli.command {
        Command::Homology { n, rep } => {
            let kind = *rep;
            let (checks, tables) = homology_tables(kind, *n)?;
            let passed = checks.iter().all(|c| c.passed);
            match cli.format {
                Format::Json => {
                    let v = json!({ "n": n, "rep": kind, "passed": passed, "tables": tables, "checks": checks });
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
                }
                Format::Text => {
                    for t in &tables {
                        println!(
                            "H_{}({}, n = {}): dim {}  (chains {}, kernel {}, image {})",
                            t.k, t.rep, t.n, t.homology_dim, t.chain_dim, t.kernel_dim, t.image_dim
                        );
                        println!("  homogeneity  kernel  image  homology");
                        for r in &t.by_homogeneity {
                            println!("  {:>11}  {:>6}  {:>5}  {:>8}", r.homogeneity, r.kernel, r.image, r.homology);
                        }
                        println!("  projection: {}", t.projection.join(", "));
                    }
                    for c in &checks {
                        println!("{} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.note.as_deref().unwrap_or(""));
                    }
                }
            }
            Ok(passed)
        }
        Command::Verify { spec, suite, threads, timings } => {
            let spec = load_spec(spec)?;
            let opts = RunOptions { order: cli.order, density: None, timings: *timings, threads: *threads };
            let report = run_suite(&spec, *suite, &opts)?;
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(report.passed)
        }
        Command::Bgg { spec, density, threads } => {
            let spec = load_spec(spec)?;
            let opts = RunOptions { order: cli.order, density: Some(density.clone()), timings: false, threads: *threads };
            let values = bgg_values(&spec, density, &opts)?;
            let report = run_suite(&spec, Suite::Bgg, &opts)?;
            match cli.format {
                Format::Json => {
                    let v = json!({ "operators": values, "report": report });
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
                }
                Format::Text => {
                    println!("density {} at jet order {}", values.density, values.jet_order);
                    for (name, m) in [
                        ("D (CR Killing)", &values.cr_killing),
                        ("D0 modified", &values.bgg_modified),
                        ("D0 normal", &values.bgg_adjoint),
                    ] {
                        for (a, row) in m.iter().enumerate() {
                            for (b, e) in row.iter().enumerate() {
                                println!("{}[{}{}] = {}", name, a + 1, b + 1, e);
                            }
                        }
                    }
                    print!("{}", report.to_text());
                }
            }
            Ok(report.passed)
        }
    }
}
