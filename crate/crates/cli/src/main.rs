//! `fsiegel`: census, orbit and verification reports for the finite Siegel space.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use finite_siegel::checks::{
    census_record, group_record, orbits_record, run_cell, run_grid, validate_cell, witness_record, CheckConfig,
    CheckId,
};
use finite_siegel::report::Report;
use finite_siegel::Group;

#[derive(Debug, Parser)]
#[command(name = "fsiegel", version)]
#[command(about = "Exact orbit and stratum verification for Lagrangians over finite fields")]
struct Cli {
    #[command(flatten)]
    grid: GridArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Odd primes q (comma separated).
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [3u32, 5, 7])]
    q: Vec<u32>,

    /// Half dimensions n (comma separated).
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [1usize, 2])]
    n: Vec<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Largest group enumerated element by element.
    #[arg(long, global = true, env = "FSIEGEL_CAP_GROUP", default_value_t = 100_000)]
    cap_group: usize,

    /// Largest point set enumerated.
    #[arg(long, global = true, env = "FSIEGEL_CAP_POINTS", default_value_t = 200_000)]
    cap_points: usize,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,

    /// Sample count for randomized checks.
    #[arg(long, global = true, default_value_t = 1_000)]
    samples: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Sp,
    Spf,
    Sp0,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Group {
        match g {
            GroupArg::Sp => Group::SpE,
            GroupArg::Spf => Group::SpF,
            GroupArg::Sp0 => Group::Sp0,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stratum counts |H_r|, |O_r| and their image splits.
    Census,

    /// Run named verification checks (all by default).
    Verify {
        /// Check ids, e.g. theorem1 cayley.
        names: Vec<CheckId>,

        /// Check ids (comma separated).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<CheckId>,
    },

    /// Orbit partition of all Lagrangians.
    Orbits {
        #[arg(long, value_enum, default_value_t = GroupArg::Spf)]
        group: GroupArg,
    },

    /// Order and generators of a group, optionally its enumerated closure.
    Group {
        #[arg(long, value_enum, default_value_t = GroupArg::Spf)]
        group: GroupArg,

        /// Enumerate every element.
        #[arg(long)]
        enumerate: bool,

        /// Enumeration cap (defaults to --cap-group).
        #[arg(long)]
        cap: Option<usize>,
    },

    /// Constructed stratum witnesses, re-verified.
    Witness,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.grid;
    for &q in &g.q {
        for &n in &g.n {
            if let Err(e) = validate_cell(q, n) {
                return usage_error(e);
            }
        }
    }
    let cfg = CheckConfig {
        cap_group: g.cap_group,
        cap_points: g.cap_points,
        seed: g.seed,
        random_samples: g.samples,
        ..CheckConfig::default()
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(g.jobs).build() {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };

    let mut config = json!({
        "q": g.q,
        "n": g.n,
        "format": format!("{:?}", g.format).to_lowercase(),
        "cap_group": cfg.cap_group,
        "cap_points": cfg.cap_points,
        "jobs": g.jobs,
        "seed": cfg.seed,
        "samples": cfg.random_samples,
        "exhaustive_vectors": cfg.exhaustive_vectors,
    });

    let (name, result) = pool.install(|| match &cli.command {
        Command::Census => ("census", run_grid(&g.q, &g.n, |q, n| Ok(vec![census_record(q, n, &cfg)?]))),
        Command::Verify { names, checks } => {
            let mut selected: Vec<CheckId> = names.iter().chain(checks).copied().collect();
            if selected.is_empty() {
                selected = CheckId::ALL.to_vec();
            }
            selected.dedup();
            config["checks"] = json!(selected.iter().map(|c| c.name()).collect::<Vec<_>>());
            ("verify", run_grid(&g.q, &g.n, |q, n| run_cell(q, n, &selected, &cfg)))
        }
        Command::Orbits { group } => {
            let group = Group::from(*group);
            config["group"] = json!(group.name());
            ("orbits", run_grid(&g.q, &g.n, |q, n| Ok(vec![orbits_record(q, n, group, &cfg)?])))
        }
        Command::Group { group, enumerate, cap } => {
            let group = Group::from(*group);
            let cap = cap.unwrap_or(cfg.cap_group);
            config["group"] = json!(group.name());
            config["enumerate"] = json!(enumerate);
            config["cap"] = json!(cap);
            (
                "group",
                run_grid(&g.q, &g.n, |q, n| Ok(vec![group_record(q, n, group, *enumerate, cap, &cfg)?])),
            )
        }
        Command::Witness => ("witness", run_grid(&g.q, &g.n, |q, n| Ok(vec![witness_record(q, n, &cfg)?]))),
    });
    let records = match result {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };

    let report = Report::new(name, config, records);
    let text = match g.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
        Format::Md => report.to_markdown(),
    };
    match &g.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
