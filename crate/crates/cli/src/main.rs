//! `sgsim`: writes the CSV series and phase-space grids of the Stern-Gerlach
//! coarse-measurement model.

mod commands;
mod header;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sterngerlach::config::params_from_file;
use sterngerlach::phase_space::CoarsePixelSpec;
use sterngerlach::{derive_scales, PhysicalParams};

use commands::{density_range, execute, Outcome};
use header::{fmt_f64, fmt_list, Header};

#[derive(Parser)]
#[command(name = "sgsim", version, about = "Stern-Gerlach wavepacket, Wigner matrix and information series as CSV")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` parameter file (defaults to the silver-atom setup)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct Sweep {
    /// Explicit comma-separated times in s (overrides the sweep)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t: Option<Vec<f64>>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntropyModel {
    /// Nominal closed-form overlap factor exp(−t²(t²+τ2²)/τ1⁴)
    Nominal,
    /// Overlap factor from the exact packet overlap
    Exact,
    /// Eigenvalues of the reduced spin matrix (any c±)
    State,
}

#[derive(Clone, Copy, ValueEnum)]
enum InfoModeArg {
    Continuum,
    Pixelated,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement entropy: t,A,S_ent
    Entropy {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: Sweep,
        /// Defaults to `nominal` for equal weights and `state` otherwise
        #[arg(long, value_enum)]
        model: Option<EntropyModel>,
    },
    /// Position densities: x,rho_plus,rho_minus,rho_total
    Density {
        #[command(flatten)]
        common: Common,
        /// Time in s
        #[arg(long, default_value_t = 22.5e-6)]
        t: f64,
        /// Field exit time in s; free flight afterwards
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        /// x range in m as `lo,hi`
        #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
        x_range: Option<Vec<f64>>,
    },
    /// Wigner matrix grids, raw and optionally coarse-grained
    Wigner {
        #[command(flatten)]
        common: Common,
        /// Comma-separated times in s
        #[arg(long, value_delimiter = ',', default_value = "1e-6,3e-5")]
        t: Vec<f64>,
        /// Grid size as NqxNp
        #[arg(long, default_value = "512x512")]
        grid: String,
        /// Pixel size `Δ,δ` in m and kg·m/s
        #[arg(long)]
        pixels: Option<String>,
        /// Also write the pixel-averaged grid
        #[arg(long)]
        coarse: bool,
        /// Spin direction n for the W_n column, `nx,ny,nz`
        #[arg(long, default_value = "1,0,0", allow_hyphen_values = true)]
        direction: String,
    },
    /// Mean information per event: t,H,S_ent, plus screen.csv
    Info {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long, value_enum, default_value = "continuum")]
        mode: InfoModeArg,
        /// Pixel size `Δ,δ`; Δ sets the screen pixels
        #[arg(long)]
        pixels: Option<String>,
        /// Time of the screen.csv snapshot in s
        #[arg(long, default_value_t = 3e-5)]
        screen_t: f64,
    },
    /// Grid evolution against the closed forms; exit 3 on any breach
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated times in s (default 0.1τ3, τ3, 0.01τ2)
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
        #[arg(long, default_value_t = 4096)]
        points: usize,
        /// Use a deliberately coarse time step
        #[arg(long)]
        coarse_dt: bool,
    },
    /// Repeat a run from the header of one of its output files
    Rerun {
        #[arg(long)]
        from: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn load_params(common: &Common) -> Result<PhysicalParams> {
    match &common.config {
        Some(path) => params_from_file(path).with_context(|| format!("loading {}", path.display())),
        None => Ok(PhysicalParams::silver()),
    }
}

fn parse_pixels(s: Option<&str>) -> Result<CoarsePixelSpec> {
    let Some(s) = s else { return Ok(CoarsePixelSpec::default_screen()) };
    let v = header::parse_list(s)?;
    let [dx, dp] = v.as_slice() else { bail!("--pixels expects `Δ,δ`, got `{s}`") };
    Ok(CoarsePixelSpec::new(*dx, *dp)?)
}

fn set_pixels(h: &mut Header, pix: &CoarsePixelSpec) {
    h.set("delta_x", fmt_f64(pix.delta_x));
    h.set("delta_p", fmt_f64(pix.delta_p));
}

fn set_sweep(h: &mut Header, sweep: &Sweep, defaults: (f64, f64, usize)) {
    match &sweep.t {
        Some(t) => h.set("times", fmt_list(t)),
        None => {
            h.set("t_start", fmt_f64(sweep.t_start.unwrap_or(defaults.0)));
            h.set("t_end", fmt_f64(sweep.t_end.unwrap_or(defaults.1)));
            h.set("points", sweep.points.unwrap_or(defaults.2));
        }
    }
}

/// Resolve arguments into a header and the output directory.
fn resolve(command: Command) -> Result<(Header, PathBuf)> {
    Ok(match command {
        Command::Entropy { common, sweep, model } => {
            let p = load_params(&common)?;
            let mut h = Header::new("entropy", &p);
            let model =
                model.unwrap_or(if p.has_equal_weights() { EntropyModel::Nominal } else { EntropyModel::State });
            h.set(
                "model",
                match model {
                    EntropyModel::Nominal => "nominal",
                    EntropyModel::Exact => "exact",
                    EntropyModel::State => "state",
                },
            );
            set_sweep(&mut h, &sweep, (0.0, 2e-6, 400));
            (h, common.out)
        }
        Command::Density { common, t, t1, points, x_range } => {
            let p = load_params(&common)?;
            let mut h = Header::new("density", &p);
            let (lo, hi) = match x_range {
                Some(r) => (r[0], r[1]),
                None => density_range(&p, t, t1)?,
            };
            if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) || points == 0 {
                bail!("empty x range [{lo}, {hi}] or zero points");
            }
            h.set("t", fmt_f64(t));
            if let Some(t1) = t1 {
                h.set("t1", fmt_f64(t1));
            }
            h.set("x_lo", fmt_f64(lo));
            h.set("x_hi", fmt_f64(hi));
            h.set("points", points);
            (h, common.out)
        }
        Command::Wigner { common, t, grid, pixels, coarse, direction } => {
            let p = load_params(&common)?;
            let mut h = Header::new("wigner", &p);
            let (nq, np) = grid
                .split_once(['x', 'X'])
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .filter(|&(a, b)| a > 0 && b > 0)
                .with_context(|| format!("--grid expects NqxNp, got `{grid}`"))?;
            let n = header::parse_list(&direction)?;
            if n.len() != 3 || n.iter().all(|&x| x == 0.0) {
                bail!("--direction expects three components, not all zero");
            }
            h.set("times", fmt_list(&t));
            h.set("nq", nq);
            h.set("np", np);
            set_pixels(&mut h, &parse_pixels(pixels.as_deref())?);
            h.set("coarse", coarse);
            h.set("direction", fmt_list(&n));
            (h, common.out)
        }
        Command::Info { common, sweep, mode, pixels, screen_t } => {
            let p = load_params(&common)?;
            let mut h = Header::new("info", &p);
            set_sweep(&mut h, &sweep, (0.0, 5e-5, 200));
            h.set(
                "mode",
                match mode {
                    InfoModeArg::Continuum => "continuum",
                    InfoModeArg::Pixelated => "pixelated",
                },
            );
            set_pixels(&mut h, &parse_pixels(pixels.as_deref())?);
            h.set("screen_t", fmt_f64(screen_t));
            (h, common.out)
        }
        Command::Verify { common, t, points, coarse_dt } => {
            let p = load_params(&common)?;
            let mut h = Header::new("verify", &p);
            let times = match t {
                Some(t) => t,
                None => {
                    let s = derive_scales(&p)?;
                    vec![0.1 * s.tau3, s.tau3, 0.01 * s.tau2]
                }
            };
            let mut opts = sterngerlach::oracle::VerifyOptions { points, ..Default::default() };
            if coarse_dt {
                opts.base_dt = 2e-3;
                opts.max_levels = 2;
            }
            h.set("times", fmt_list(&times));
            h.set("points", opts.points);
            h.set("base_dt", fmt_f64(opts.base_dt));
            h.set("min_levels", opts.min_levels);
            h.set("max_levels", opts.max_levels);
            h.set("target", fmt_f64(opts.target));
            h.set("padding", fmt_f64(opts.padding));
            (h, common.out)
        }
        Command::Rerun { from, out } => (Header::from_file(&from)?, out),
    })
}

fn is_io(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<std::io::Error>() || matches!(c.downcast_ref::<sterngerlach::Error>(), Some(sterngerlach::Error::Io(_)))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = resolve(cli.command).and_then(|(h, out)| execute(&h, &out));
    match run {
        Ok(Outcome::Done(files)) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::VerificationFailed { files, failures }) => {
            for f in files {
                println!("{}", f.display());
            }
            for f in failures {
                eprintln!("verification failed: {f}");
            }
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_io(&e) { 2 } else { 1 })
        }
    }
}
