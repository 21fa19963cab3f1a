use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use harmonic_ends::commands::{self, Output};
use harmonic_ends::config::threads_from_env;
use harmonic_ends::sample::SampleKind;
use harmonic_ends::{load_end, CliError, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "harmonic-ends", version)]
#[command(about = "Classify, normalize and measure the curvature of ends of harmonic immersions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// End definition (JSON)
    file: PathBuf,

    /// Run configuration (JSON)
    #[arg(long)]
    config: Option<PathBuf>,

    /// First ladder radius
    #[arg(long)]
    r0: Option<f64>,

    /// Ladder ratio
    #[arg(long)]
    ratio: Option<f64>,

    /// Number of ladder radii
    #[arg(long)]
    count: Option<usize>,

    /// Per-circle quadrature tolerance
    #[arg(long)]
    tol: Option<f64>,

    /// Truncation order of the normalization series
    #[arg(long)]
    order: Option<usize>,

    /// CSV output path
    #[arg(long)]
    csv: Option<PathBuf>,

    /// OBJ output path
    #[arg(long)]
    obj: Option<PathBuf>,

    /// Treat sampled degeneracies of the differential as validation failures
    #[arg(long)]
    strict: bool,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            r0: self.r0,
            ratio: self.ratio,
            count: self.count,
            tol: self.tol,
            order: self.order,
            csv: self.csv.clone(),
            obj: self.obj.clone(),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Smallest sampled radius
    #[arg(long)]
    r_min: Option<f64>,

    /// Largest sampled radius
    #[arg(long)]
    r_max: Option<f64>,

    /// Number of radii
    #[arg(long)]
    nr: Option<usize>,

    /// Number of angles
    #[arg(long)]
    nt: Option<usize>,

    /// Sample the single circle of this radius
    #[arg(long, conflicts_with_all = ["r_min", "r_max", "nr"])]
    radius: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check real residues and sample the immersion condition
    Validate(Common),
    /// Reduced type and case of the end
    Classify(Common),
    /// Affine reduction with its certificate
    Reduce(Common),
    /// Bring the top form to normal form
    Normalize(Common),
    /// Total geodesic curvature on the radius ladder and its limit
    Curvature(Common),
    /// Blow-up profiles at the singular angles
    Blowup(Common),
    /// Gauss-Bonnet residual on the annulus r1 < |z| < r2
    Gaussbonnet {
        #[command(flatten)]
        common: Common,
        /// Inner radius
        r1: Option<f64>,
        /// Outer radius
        r2: Option<f64>,
    },
    /// Surface mesh or sampled profiles on a polar grid
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(value_enum)]
        what: SampleKind,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn config(common: &Common) -> Result<RunConfig, CliError> {
    RunConfig::resolve(common.config.as_deref(), &common.overrides())
}

fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Validate(c) => commands::cmd_validate(&load_end(&c.file)?, &config(c)?),
        Command::Classify(c) => {
            config(c)?;
            commands::cmd_classify(&load_end(&c.file)?)
        }
        Command::Reduce(c) => {
            config(c)?;
            commands::cmd_reduce(&load_end(&c.file)?)
        }
        Command::Normalize(c) => commands::cmd_normalize(&load_end(&c.file)?, &config(c)?),
        Command::Curvature(c) => commands::cmd_curvature(&load_end(&c.file)?, &config(c)?, c.strict),
        Command::Blowup(c) => commands::cmd_blowup(&load_end(&c.file)?, &config(c)?, c.strict),
        Command::Gaussbonnet { common, r1, r2 } => {
            let cfg = config(common)?;
            let r1 = r1.unwrap_or(cfg.annulus.r_inner);
            let r2 = r2.unwrap_or(cfg.annulus.r_outer);
            commands::cmd_gaussbonnet(&load_end(&common.file)?, &cfg, r1, r2, common.strict)
        }
        Command::Sample { common, what, grid } => {
            let mut cfg = config(common)?;
            if let Some(r) = grid.radius {
                cfg.grid.r_min = r;
                cfg.grid.r_max = r;
                cfg.grid.nr = 1;
            }
            cfg.grid.r_min = grid.r_min.unwrap_or(cfg.grid.r_min);
            cfg.grid.r_max = grid.r_max.unwrap_or(cfg.grid.r_max);
            cfg.grid.nr = grid.nr.unwrap_or(cfg.grid.nr);
            cfg.grid.nt = grid.nt.unwrap_or(cfg.grid.nt);
            cfg.check()?;
            commands::cmd_sample(&load_end(&common.file)?, &cfg, *what, common.strict)
        }
    }
}

fn file_of(command: &Command) -> &Path {
    match command {
        Command::Validate(c)
        | Command::Classify(c)
        | Command::Reduce(c)
        | Command::Normalize(c)
        | Command::Curvature(c)
        | Command::Blowup(c) => &c.file,
        Command::Gaussbonnet { common, .. } | Command::Sample { common, .. } => &common.file,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = threads_from_env().and_then(|threads| {
        if let Some(n) = threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        run(&cli.command)
    });
    let mut stdout = std::io::stdout().lock();
    match result {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Invalid(report) = &e {
                if let Ok(text) = commands::to_json(report.as_ref()) {
                    let _ = stdout.write_all(text.as_bytes());
                }
            }
            eprintln!("error: {}: {e}", file_of(&cli.command).display());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
