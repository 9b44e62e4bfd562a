use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fermat_hh::cli::*;
use fermat_hh::group::DEFAULT_CAP;
use fermat_hh::verify::VerifyLevel;

#[derive(Parser)]
#[command(name = "hh", about = "Hochschild cohomology of Fermat polynomials with group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Job spec (JSON)
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Write JSON here instead of stdout (overrides options.output)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, value_enum)]
    verify_level: Option<VerifyLevel>,
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    max_group_order: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List the group generated by the spec
    Closure,
    /// Fixed-locus data and dim Jac(f^u) for every element
    Sectors,
    /// ξ_left ∪ ξ_right, e.g. --left 't1*t2*t3' --right 't1^2*t2^2*t3^2'
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// All nonzero products on monomial bases
    Table,
    /// The invariant algebra HH* with verification flags
    Invariants,
    /// Bidegrees of every monomial basis class
    Gradings,
    /// Run the property suites
    Verify,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let path = cli.spec.as_ref().ok_or_else(|| CliError::Spec("--spec is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
    let spec = JobSpec::from_json(&text)?;
    let g = spec.group(cli.max_group_order)?;
    let mut failures = 0;
    let (name, result) = match &cli.command {
        Command::Closure => ("closure", cmd_closure(&g)),
        Command::Sectors => ("sectors", cmd_sectors(&g)),
        Command::Product { left, right } => ("product", cmd_product(&g, left, right)?),
        Command::Table => ("table", cmd_table(&g)),
        Command::Invariants => ("invariants", cmd_invariants(&g)?),
        Command::Gradings => ("gradings", cmd_gradings(&g)),
        Command::Verify => {
            let level = cli.verify_level.unwrap_or(spec.options.verify_level);
            let (v, reports) = cmd_verify(&g, level);
            failures = reports.iter().filter(|r| !r.passed()).count();
            ("verify", v)
        }
    };
    let text = serde_json::to_string_pretty(&envelope(&spec, name, result)).expect("JSON output");
    let out = cli.out.clone().or_else(|| spec.options.output.as_ref().map(PathBuf::from));
    match out {
        Some(p) => std::fs::write(&p, text + "\n").map_err(|e| CliError::Spec(format!("{}: {e}", p.display())))?,
        None => println!("{text}"),
    }
    if failures > 0 {
        return Err(CliError::Verification(failures));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global().ok();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
