use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use weno_prm_cli::commands::{self, MappingChoice};
use weno_prm_cli::suites::SuiteName;

#[derive(Parser)]
#[command(name = "weno-prm", version, about = "Mapped WENO experiments")]
struct Cli {
    /// Directory for outputs with relative paths.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads for parallel cases (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized property suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MappingArgs {
    /// Named preset (prm, r322, mimic_pm, mimic_rm, gm, pm6, im, rm260, aim, aim_m).
    #[arg(long)]
    preset: Option<String>,
    /// Inline TOML table, e.g. '{ family = "pm", n = 6 }'.
    #[arg(long)]
    mapping: Option<String>,
    #[arg(long, default_value_t = 3)]
    r: usize,
    /// Sub-stencil index selecting the linear weight.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Explicit linear weight for --mapping.
    #[arg(long)]
    dk: Option<f64>,
}

impl MappingArgs {
    fn choice(&self) -> MappingChoice {
        MappingChoice { preset: self.preset.clone(), mapping: self.mapping.clone(), r: self.r, k: self.k, dk: self.dk }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML configuration.
    Run { config: PathBuf },
    /// Sample a mapping on [0, 1] and write (omega, g) as CSV.
    MapProfile {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        /// Preset to compare against (adds column h and reports max |g - h|).
        #[arg(long)]
        compare_preset: Option<String>,
        /// Inline TOML family to compare against, at the same dk.
        #[arg(long)]
        compare: Option<String>,
        #[arg(long, default_value = "profile.csv")]
        out: PathBuf,
    },
    /// Verify C_{n,m,k} and singularity freedom; exit 0 iff verified.
    CheckCnm {
        #[command(flatten)]
        mapping: MappingArgs,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// Order at omega = 1 (defaults to the claim or to m).
        #[arg(long = "k1")]
        k1: Option<u32>,
        #[arg(long, default_value = "cnm_report.json")]
        out: PathBuf,
    },
    /// Run a named experiment bundle.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
    },
}

fn dispatch(cli: &Cli) -> anyhow::Result<bool> {
    let rel = |p: &PathBuf| if p.is_absolute() { p.clone() } else { cli.out_dir.join(p) };
    match &cli.command {
        Command::Run { config } => commands::run(config, &cli.out_dir),
        Command::MapProfile { mapping, samples, compare_preset, compare, out } => {
            let spec = mapping.choice().build()?;
            let other = match (compare_preset, compare) {
                (None, None) => None,
                (p, c) => Some(
                    MappingChoice { preset: p.clone(), mapping: c.clone(), dk: c.as_ref().map(|_| spec.dk()), ..mapping.choice() }
                        .build()?,
                ),
            };
            let path = rel(out);
            if let Some(sup) = commands::map_profile(&spec, *samples, other.as_ref(), &path)? {
                println!("max |g - h| = {sup:.6e}");
            }
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::CheckCnm { mapping, n, m, k1, out } => {
            let spec = mapping.choice().build()?;
            let o = commands::check_cnm(&spec, *n, *m, *k1)?;
            let path = rel(out);
            commands::write_check(&o, &path)?;
            let r = &o.report;
            println!(
                "{} dk={} C_{{{},{},{}}}: {} (singularity-free: {})",
                spec.family().name(),
                spec.dk(),
                r.n,
                r.m,
                r.k,
                if o.verified { "verified" } else { "not verified" },
                o.singularity_free
            );
            for f in &r.failures {
                println!("  {f}");
            }
            println!("wrote {}", path.display());
            Ok(o.verified)
        }
        Command::Suite { name } => commands::suite(*name, &cli.out_dir, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
