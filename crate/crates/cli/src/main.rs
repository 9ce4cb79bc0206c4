use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use nervepool::io::{export_dot, parse_complex, parse_features, parse_partition, serialize_complex, PooledOutput};
use nervepool::verify::{random_complex, run_batch, Check};
use nervepool::{betti, pool, pool_via_nerve, SimplicialComplex, VertexAssignment};

#[derive(Parser, Debug)]
#[command(name = "nervepool", version, about = "Pool simplicial complexes through vertex clusterings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pool a complex with the matrix formulation and write the result as JSON.
    Pool {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Feature tables, one per simplex dimension.
        #[arg(long, num_args = 1..)]
        features: Vec<PathBuf>,
        /// Also write the normalized upper adjacencies.
        #[arg(long)]
        normalize_adjacency: bool,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pool a complex by taking the nerve of the extended cover.
    Nerve {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Betti numbers over GF(2).
    Betti {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Run the seeded theorem checks.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print a line for every instance, not only failures.
        #[arg(long)]
        verbose: bool,
    },
    /// Write a random clique complex.
    Gen {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the 1-skeleton as a DOT graph.
    Dot {
        #[arg(long)]
        complex: PathBuf,
        /// Colour vertices by a hard partition.
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Export the pooled complex instead of the input.
        #[arg(long, requires = "partition")]
        pooled: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Equivalence,
    Identity,
    Permutation,
    /// Soft assignments, compared by upper adjacency.
    Soft,
    /// Equivalence, identity and permutation.
    All,
}

impl Suite {
    fn checks(self) -> Vec<Check> {
        match self {
            Suite::Equivalence => vec![Check::Equivalence],
            Suite::Identity => vec![Check::Identity],
            Suite::Permutation => vec![Check::Permutation],
            Suite::Soft => vec![Check::Soft],
            Suite::All => vec![Check::Equivalence, Check::Identity, Check::Permutation],
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load(complex: &Path, partition: &Path) -> Result<(SimplicialComplex, VertexAssignment)> {
    let k = parse_complex(&read(complex)?).with_context(|| format!("in {}", complex.display()))?;
    let s0 = parse_partition(&read(partition)?, &k).with_context(|| format!("in {}", partition.display()))?;
    Ok((k, s0))
}

enum Status {
    Done,
    VerificationFailed,
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Pool { complex, partition, features, normalize_adjacency, out } => {
            let (k, s0) = load(&complex, &partition)?;
            let xs = features
                .iter()
                .map(|f| parse_features(&read(f)?, &k).with_context(|| format!("in {}", f.display())))
                .collect::<Result<Vec<_>>>()?;
            let pooled = pool(&k, &s0, &xs)?;
            emit(out.as_deref(), &PooledOutput::new(&k, &pooled, normalize_adjacency).to_json())?;
        }
        Command::Nerve { complex, partition, out } => {
            let (k, s0) = load(&complex, &partition)?;
            let nrv = pool_via_nerve(&k, &s0.to_cover()?)?;
            emit(out.as_deref(), &serialize_complex(&nrv))?;
        }
        Command::Betti { complex } => {
            let k = parse_complex(&read(&complex)?).with_context(|| format!("in {}", complex.display()))?;
            println!("{}", betti(&k));
        }
        Command::Verify { suite, instances, seed, verbose } => {
            let mut failed = false;
            for check in suite.checks() {
                let reports = run_batch(check, instances, seed)?;
                let passed = reports.iter().filter(|r| r.passed()).count();
                for r in reports.iter().filter(|r| verbose || !r.passed()) {
                    println!("{r}");
                }
                println!("{check}: {passed}/{} passed", reports.len());
                failed |= passed != reports.len();
            }
            if failed {
                return Ok(Status::VerificationFailed);
            }
        }
        Command::Gen { vertices, max_dim, density, seed, out } => {
            let k = random_complex(seed, vertices, max_dim, density)?;
            emit(out.as_deref(), &serialize_complex(&k))?;
        }
        Command::Dot { complex, partition, pooled, out } => {
            let text = match partition {
                None => export_dot(&parse_complex(&read(&complex)?)?, None),
                Some(partition) => {
                    let (k, s0) = load(&complex, &partition)?;
                    if pooled {
                        export_dot(&pool(&k, &s0, &[])?.support_complex(), None)
                    } else {
                        export_dot(&k, Some(&s0))
                    }
                }
            };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(Status::Done)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
