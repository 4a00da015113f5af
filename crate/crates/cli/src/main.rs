use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ncdr_cli::{cmd_deform_mc, cmd_gm, cmd_hc, cmd_hh, cmd_hp, cmd_verify, error_code, parse_window, RunConfig, SuiteKind};

#[derive(Parser)]
#[command(name = "ncdr", version, about = "Exact noncommutative de Rham and cyclic homology computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Algebra or family spec (JSON)
    spec: PathBuf,
    #[arg(long)]
    n_max: Option<usize>,
    /// Total-degree window, e.g. -2..4
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    /// Form-degree cap for windows; weight cap for families and slot words
    #[arg(long)]
    cap: Option<usize>,
    /// Matrix size for the rep suite
    #[arg(long)]
    dim: Option<usize>,
    /// t-order for deformations
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild homology both ways
    Hh(Common),
    /// Periodic cyclic homology on a window, both differentials
    Hp(Common),
    /// Cyclic and negative cyclic homology and their harmonic parts
    Hc(Common),
    /// Run a verification suite
    Verify {
        #[arg(value_parser = ["identities", "harmonic", "deform-dg", "rep", "gm"])]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Deformation checks
    Deform {
        #[arg(value_parser = ["mc"])]
        what: String,
        #[command(flatten)]
        common: Common,
    },
    /// Gauss-Manin connection of a one-parameter family
    Gm(Common),
}

fn config(name: &str, c: &Common) -> RunConfig {
    RunConfig {
        command: name.into(),
        spec: c.spec.clone(),
        n_max: c.n_max,
        window: c.window,
        cap: c.cap,
        dim: c.dim,
        order: c.order,
        seed: c.seed,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Hh(c) => (c, cmd_hh(&config("hh", c))),
        Command::Hp(c) => (c, cmd_hp(&config("hp", c))),
        Command::Hc(c) => (c, cmd_hc(&config("hc", c))),
        Command::Verify { suite, common } => {
            let kind = SuiteKind::parse(suite).expect("clap checked the name");
            (common, cmd_verify(kind, &config(&format!("verify {suite}"), common)))
        }
        Command::Deform { what, common } => (common, cmd_deform_mc(&config(&format!("deform {what}"), common))),
        Command::Gm(c) => (c, cmd_gm(&config("gm", c))),
    };
    let Format::Json = common.format;
    match result {
        Ok(report) => {
            let text = report.to_json();
            match &common.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e) as u8)
        }
    }
}
