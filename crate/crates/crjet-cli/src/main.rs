//! `crjet` — exact CR-geometry toolkit over Gaussian rationals.
//!
//! Every invocation prints exactly one JSON object on stdout. Exit
//! codes: 0 success, 1 negative verdict, 2 input error, 3 internal
//! rank/retry exhaustion.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::Value;

use crjet_cli::commands;
use crjet_cli::input::{self, ManifoldFile, MapFile};
use crjet_cli::report::{self, Fail};

#[derive(Parser)]
#[command(
    name = "crjet",
    about = "Exact symbolic CR geometry: Segre varieties, Levi forms, jet reflection",
    version
)]
struct Cli {
    /// Include wall-clock timing in the report (breaks byte-identical
    /// output across runs).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension, Levi-form, nondegeneracy, and minimality battery.
    Analyze {
        /// Manifold file (.cr).
        manifold: PathBuf,
        /// Largest nondegeneracy order to search.
        #[arg(long, default_value_t = commands::DEFAULT_KMAX)]
        kmax: u32,
        /// Largest Segre-chain length to try for minimality
        /// (default: codimension + 1).
        #[arg(long)]
        smax: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Segre graph and jet-map rank transcript at a center pair.
    Segre {
        /// Manifold file (.cr).
        manifold: PathBuf,
        /// Largest jet order in the transcript.
        #[arg(long)]
        order: u32,
        /// Center pair `(z1, …)` or `(z1, …);(chi1, …)`
        /// (default: the base point and its conjugate).
        #[arg(long)]
        center: Option<String>,
    },
    /// Transport a map jet along a sampled Segre chain.
    Reflect {
        /// Source manifold file (.cr).
        manifold: PathBuf,
        /// Target manifold file (.cr).
        target: PathBuf,
        /// Map file (.map) sending source into target.
        #[arg(long)]
        map: PathBuf,
        /// Number of chain links.
        #[arg(long)]
        steps: u32,
        /// Jet order at the terminal point.
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recover the map's exact value at a point from its determining jet.
    Reconstruct {
        /// Source manifold file (.cr).
        manifold: PathBuf,
        /// Target manifold file (.cr).
        target: PathBuf,
        /// Map file (.map) sending source into target.
        #[arg(long)]
        map: PathBuf,
        /// Evaluation point, e.g. "(1/3, 1/5)".
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Admissibility check, optionally comparing two germs to the
    /// determining order.
    Verify {
        /// Source manifold file (.cr).
        manifold: PathBuf,
        /// Target manifold file (.cr).
        target: PathBuf,
        /// Map file (.map) sending source into target.
        #[arg(long)]
        map: PathBuf,
        /// Second map file to compare against the first.
        #[arg(long)]
        map2: Option<PathBuf>,
        /// Sampled comparison points when --map2 is given.
        #[arg(long, default_value_t = 5)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Input files in reading order, with content hashes for the report.
struct Inputs {
    entries: Vec<(String, String)>,
}

impl Inputs {
    fn new() -> Inputs {
        Inputs {
            entries: Vec::new(),
        }
    }

    fn read(&mut self, path: &Path) -> Result<String, Fail> {
        let name = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|e| Fail::io(&name, e))?;
        self.entries
            .push((name.clone(), report::sha256_hex(&bytes)));
        String::from_utf8(bytes).map_err(|e| Fail::io(&name, std::io::Error::other(e)))
    }

    fn manifold(&mut self, path: &Path) -> Result<ManifoldFile, Fail> {
        let name = path.display().to_string();
        let text = self.read(path)?;
        input::parse_manifold(&text).map_err(|e| Fail::parse(&name, e))
    }

    fn map(&mut self, path: &Path) -> Result<MapFile, Fail> {
        let name = path.display().to_string();
        let text = self.read(path)?;
        input::parse_map(&text).map_err(|e| Fail::parse(&name, e))
    }
}

fn run(cmd: &Cmd, inputs: &mut Inputs) -> Result<(Value, Value, u64, i32), Fail> {
    match cmd {
        Cmd::Analyze {
            manifold,
            kmax,
            smax,
            seed,
        } => {
            let mf = inputs.manifold(manifold)?;
            let options = serde_json::json!({
                "kmax": kmax,
                "smax": smax.unwrap_or(mf.spec.d() as u32 + 1),
                "retries": commands::DEFAULT_RETRIES,
            });
            let (result, exit) = commands::analyze(&mf, *kmax, *smax, *seed)?;
            Ok((options, result, *seed, exit))
        }
        Cmd::Segre {
            manifold,
            order,
            center,
        } => {
            let mf = inputs.manifold(manifold)?;
            let options = serde_json::json!({
                "order": order,
                "center": center,
            });
            let (result, exit) = commands::segre(&mf, *order, center.as_deref())?;
            Ok((options, result, 0, exit))
        }
        Cmd::Reflect {
            manifold,
            target,
            map,
            steps,
            order,
            seed,
        } => {
            let m = inputs.manifold(manifold)?;
            let mp = inputs.manifold(target)?;
            let f = inputs.map(map)?;
            let options = serde_json::json!({
                "steps": steps,
                "order": order,
                "kmax": commands::DEFAULT_KMAX,
                "retries": commands::DEFAULT_RETRIES,
            });
            let (result, exit) = commands::reflect(&m, &mp, &f, *steps, *order, *seed)?;
            Ok((options, result, *seed, exit))
        }
        Cmd::Reconstruct {
            manifold,
            target,
            map,
            at,
            seed,
        } => {
            let m = inputs.manifold(manifold)?;
            let mp = inputs.manifold(target)?;
            let f = inputs.map(map)?;
            let options = serde_json::json!({
                "at": at,
                "kmax": commands::DEFAULT_KMAX,
                "retries": commands::DEFAULT_RETRIES,
            });
            let (result, exit) = commands::reconstruct(&m, &mp, &f, at, *seed)?;
            Ok((options, result, *seed, exit))
        }
        Cmd::Verify {
            manifold,
            target,
            map,
            map2,
            samples,
            seed,
        } => {
            let m = inputs.manifold(manifold)?;
            let mp = inputs.manifold(target)?;
            let f = inputs.map(map)?;
            let g = match map2 {
                Some(p) => Some(inputs.map(p)?),
                None => None,
            };
            let options = serde_json::json!({
                "samples": samples,
                "kmax": commands::DEFAULT_KMAX,
                "retries": commands::DEFAULT_RETRIES,
            });
            let (result, exit) =
                commands::verify(&m, &mp, &f, g.as_ref(), *samples, *seed)?;
            Ok((options, result, *seed, exit))
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Analyze { .. } => "analyze",
        Cmd::Segre { .. } => "segre",
        Cmd::Reflect { .. } => "reflect",
        Cmd::Reconstruct { .. } => "reconstruct",
        Cmd::Verify { .. } => "verify",
    }
}

fn main() {
    let cli = Cli::parse();
    let name = command_name(&cli.cmd);
    let started = Instant::now();
    let mut inputs = Inputs::new();
    match run(&cli.cmd, &mut inputs) {
        Ok((options, result, seed, exit)) => {
            let timing = cli.timing.then(|| started.elapsed().as_millis());
            let envelope =
                report::envelope(name, &inputs.entries, seed, options, result, timing);
            print!("{}", report::render(&envelope));
            std::process::exit(exit);
        }
        Err(fail) => {
            eprintln!("crjet {name}: {}", fail.message);
            print!("{}", report::render(&fail.to_json(name)));
            std::process::exit(fail.exit);
        }
    }
}
