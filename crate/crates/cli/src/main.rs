use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kkhecke::io::job::{exit_code, run, Command, JobSpec};

/// Hecke operators, K-group bookkeeping and boundary numerics.
#[derive(Parser, Debug)]
#[command(name = "kkhecke", version)]
struct Cli {
    #[command(subcommand)]
    command: Top,

    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Tolerance override for floating point checks.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Directory for cached coset tables, decompositions and presentations.
    #[arg(long, global = true, env = "WORKBENCH_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Search cap for double coset enumeration.
    #[arg(long, global = true, default_value_t = kkhecke::hecke::DEFAULT_CAP)]
    cap: usize,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Top {
    /// Subgroup invariants.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Hecke operator matrices.
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// K-group models and consistency checks.
    #[command(subcommand)]
    Kgroups(KgroupsCmd),
    /// Index pairing against the Fredholm oracle.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Boundary harmonic analysis experiments.
    #[command(subcommand)]
    Boundary(BoundaryCmd),
    /// Every exact check on one subgroup.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug)]
struct SubgroupArgs {
    /// Subgroup specification file.
    subgroup: PathBuf,
    /// Hecke element files; `T_2` and `T_3` when omitted for PSL_2(Z).
    hecke: Vec<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    Analyze { subgroup: PathBuf },
}

#[derive(Subcommand, Debug)]
enum HeckeCmd {
    Matrix(SubgroupArgs),
}

#[derive(Subcommand, Debug)]
enum KgroupsCmd {
    Assemble(SubgroupArgs),
}

#[derive(Subcommand, Debug)]
enum PairCmd {
    Index {
        subgroup: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum BoundaryCmd {
    Suite {
        /// Experiment configuration (JSON).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    All {
        #[command(flatten)]
        args: SubgroupArgs,
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn job_of(cli: Cli) -> JobSpec {
    let (command, subgroup, hecke, config, samples) = match cli.command {
        Top::Group(GroupCmd::Analyze { subgroup }) => (Command::GroupAnalyze, Some(subgroup), vec![], None, None),
        Top::Hecke(HeckeCmd::Matrix(a)) => (Command::HeckeMatrix, Some(a.subgroup), a.hecke, None, None),
        Top::Kgroups(KgroupsCmd::Assemble(a)) => (Command::KgroupsAssemble, Some(a.subgroup), a.hecke, None, None),
        Top::Pair(PairCmd::Index { subgroup, samples }) => (Command::PairIndex, Some(subgroup), vec![], None, samples),
        Top::Boundary(BoundaryCmd::Suite { config, samples }) => (Command::BoundarySuite, None, vec![], config, samples),
        Top::Verify(VerifyCmd::All { args, samples }) => (Command::VerifyAll, Some(args.subgroup), args.hecke, None, samples),
    };
    JobSpec {
        command,
        subgroup,
        hecke,
        config,
        output: cli.out,
        seed: cli.seed,
        tol: cli.tol,
        samples,
        cache_dir: cli.cache_dir,
        cap: cli.cap,
    }
}

fn main() -> ExitCode {
    let job = job_of(Cli::parse());
    let outcome = run(&job);
    match &outcome {
        Ok(report) => {
            let text = report.to_json();
            match &job.output {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {} {}", c.name, c.detail);
            }
            for f in &report.flags {
                eprintln!("flag: {}: {}", f.id, f.summary);
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&outcome) as u8)
}
