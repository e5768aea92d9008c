use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dtloc::quiverdsl::{builtin, parse_quiver, validate_slope};
use dtloc::{Error, QuiverWithPotential, Slope, Strategy};

mod commands;
mod render;

#[derive(Parser, Debug)]
#[command(
    name = "dtloc",
    version,
    about = "Refined DT series of framed toric quivers by torus localization"
)]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "DTLOC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a model, report its slope lattice and check confluence.
    Validate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope: Option<Slope>,
        /// Depth up to which the relations are checked.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Count torus-fixed points by size.
    Fixedpoints {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        max_boxes: usize,
        #[arg(long)]
        json: bool,
    },
    /// Per-point index for one slope.
    Index {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope: Slope,
        #[arg(long)]
        max_boxes: usize,
        #[arg(long)]
        json: bool,
    },
    /// Localization series up to a given order in q.
    Series {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope: Slope,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SignConvention::Plain)]
        sign_convention: SignConvention,
        #[arg(long)]
        json: bool,
    },
    /// Signs of the slope on the elementary cycles.
    Walls {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope: Slope,
        #[arg(long, default_value_t = 4)]
        max_cycle_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare the series of two slopes.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope_a: Slope,
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope_b: Slope,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Cells of a linear action on a product of projective spaces.
    Bbcheck {
        /// Weights per factor, e.g. "0,1,2;0,1".
        #[arg(long, allow_hyphen_values = true)]
        factors: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ModelArgs {
    #[arg(long, value_parser = ["c3", "conifold", "loop"])]
    model: Option<String>,
    #[arg(long)]
    quiver: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SignConvention {
    Plain,
    /// Substitute q -> -q.
    Qneg,
}

fn parse_slope(text: &str) -> Result<Slope, String> {
    Slope::parse_csv(text).map_err(|e| e.to_string())
}

/// Failure of a run: usage errors exit 2, domain errors exit 1.
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SlopeArity { .. } => Failure::Usage(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

pub struct Model {
    pub name: String,
    pub quiver: QuiverWithPotential,
}

impl ModelArgs {
    fn load(&self) -> Result<Model, Failure> {
        if let Some(name) = &self.model {
            let quiver = builtin(name).ok_or_else(|| Failure::Usage(format!("unknown model `{name}`")))?;
            return Ok(Model {
                name: name.clone(),
                quiver,
            });
        }
        let path = self.quiver.as_ref().expect("clap enforces one model source");
        let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
        let quiver = parse_quiver(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
        Ok(Model {
            name: path.display().to_string(),
            quiver,
        })
    }
}

/// Slope arity must match the arrow count before anything else runs.
fn check_arity(m: &Model, s: &Slope) -> Result<(), Failure> {
    validate_slope(&m.quiver, s)?;
    Ok(())
}

fn run(cli: Cli) -> Result<String, Failure> {
    let strategy = Strategy::Parallel;
    match cli.command {
        Command::Validate { model, slope, depth } => {
            let m = model.load()?;
            commands::validate(&m, slope.as_ref(), depth)
        }
        Command::Fixedpoints { model, max_boxes, json } => {
            let m = model.load()?;
            commands::fixedpoints(&m, max_boxes, json, strategy)
        }
        Command::Index {
            model,
            slope,
            max_boxes,
            json,
        } => {
            let m = model.load()?;
            check_arity(&m, &slope)?;
            commands::index(&m, &slope, max_boxes, json, strategy)
        }
        Command::Series {
            model,
            slope,
            order,
            sign_convention,
            json,
        } => {
            let m = model.load()?;
            check_arity(&m, &slope)?;
            commands::series(
                &m,
                &slope,
                order,
                sign_convention == SignConvention::Qneg,
                json,
                strategy,
            )
        }
        Command::Walls {
            model,
            slope,
            max_cycle_len,
            json,
        } => {
            let m = model.load()?;
            check_arity(&m, &slope)?;
            commands::walls(&m, &slope, max_cycle_len, json)
        }
        Command::Compare {
            model,
            slope_a,
            slope_b,
            order,
            json,
        } => {
            let m = model.load()?;
            check_arity(&m, &slope_a)?;
            check_arity(&m, &slope_b)?;
            commands::compare(&m, &slope_a, &slope_b, order, json, strategy)
        }
        Command::Bbcheck { factors, json } => commands::bbcheck(&factors, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("dtloc: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("dtloc: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("dtloc: {msg}");
            ExitCode::from(1)
        }
    }
}
