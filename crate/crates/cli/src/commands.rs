//! Subcommand execution. Every run is driven by a resolved [`Header`], so a
//! fresh run and a rerun from a file header take the same path.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sterngerlach::dynamics::{evolve_free_after_field, AmplitudeMode};
use sterngerlach::information::{screen_distribution, spin_entropy, InfoMode, OverlapModel, ScreenExtent};
use sterngerlach::oracle::{verify_closed_forms, VerifyOptions};
use sterngerlach::phase_space::{coarse_grain, wigner_field, CoarsePixelSpec, PhaseGrid};
use sterngerlach::{derive_scales, evolve_in_field, information, Spin};

use crate::header::{fmt_f64, Header};

pub enum Outcome {
    Done(Vec<PathBuf>),
    VerificationFailed { files: Vec<PathBuf>, failures: Vec<String> },
}

pub fn execute(h: &Header, out: &Path) -> Result<Outcome> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    match h.command.as_str() {
        "entropy" => entropy(h, out),
        "density" => density(h, out),
        "wigner" => wigner(h, out),
        "info" => info(h, out),
        "verify" => verify(h, out),
        other => bail!("unknown command `{other}` in header"),
    }
}

fn create(out: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = out.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((path, BufWriter::new(f)))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<()> {
    w.flush().with_context(|| format!("writing {}", path.display()))
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// Explicit `times`, or the sweep `t_start`, `t_end`, `points`.
fn times(h: &Header) -> Result<Vec<f64>> {
    if h.get("times").is_some() {
        return h.list("times");
    }
    Ok(linspace(h.f64("t_start")?, h.f64("t_end")?, h.usize("points")?))
}

fn pixels(h: &Header) -> Result<CoarsePixelSpec> {
    Ok(CoarsePixelSpec::new(h.f64("delta_x")?, h.f64("delta_p")?)?)
}

fn entropy(h: &Header, out: &Path) -> Result<Outcome> {
    let params = h.physical_params()?;
    let scales = derive_scales(&params)?;
    let model = h.get("model").unwrap_or("nominal");
    let (path, mut w) = create(out, "entropy.csv")?;
    write!(w, "{}", h.render("t [s], A [1], S_ent [nats]"))?;
    writeln!(w, "t,A,S_ent")?;
    for t in times(h)? {
        let (a, s) = match model {
            "nominal" | "exact" => {
                let m = if model == "exact" { OverlapModel::Exact } else { OverlapModel::Nominal };
                let p = information::entanglement_entropy_with(t, &scales, m)?;
                (p.a, p.s_ent)
            }
            "state" => {
                let st = evolve_in_field(&params, t)?;
                (st.overlap().norm(), spin_entropy(&st))
            }
            _ => bail!("unknown entropy model `{model}` (nominal, exact, state)"),
        };
        writeln!(w, "{t:.16e},{a:.16e},{s:.16e}")?;
    }
    finish(&path, w)?;
    Ok(Outcome::Done(vec![path]))
}

fn density(h: &Header, out: &Path) -> Result<Outcome> {
    let params = h.physical_params()?;
    let t = h.f64("t")?;
    let state = match h.opt_f64("t1")? {
        Some(t1) => evolve_free_after_field(&params, t1, t)?,
        None => evolve_in_field(&params, t)?,
    };
    let xs = linspace(h.f64("x_lo")?, h.f64("x_hi")?, h.usize("points")?);
    let (path, mut w) = create(out, "density.csv")?;
    write!(w, "{}", h.render("x [m], rho_plus [1/m], rho_minus [1/m], rho_total [1/m]"))?;
    writeln!(w, "x,rho_plus,rho_minus,rho_total")?;
    for x in xs {
        let rp = state.density(Spin::Plus, x, AmplitudeMode::Weighted);
        let rm = state.density(Spin::Minus, x, AmplitudeMode::Weighted);
        writeln!(w, "{x:.16e},{rp:.16e},{rm:.16e},{:.16e}", rp + rm)?;
    }
    finish(&path, w)?;
    Ok(Outcome::Done(vec![path]))
}

/// Default x-range for `density`: both packets plus ten widths.
pub fn density_range(params: &sterngerlach::PhysicalParams, t: f64, t1: Option<f64>) -> Result<(f64, f64)> {
    let state = match t1 {
        Some(t1) => evolve_free_after_field(params, t1, t)?,
        None => evolve_in_field(params, t)?,
    };
    let e = ScreenExtent::covering(&state, 10.0);
    Ok((e.lo, e.hi))
}

pub fn wigner_file_name(t: f64, coarse: bool) -> String {
    if coarse {
        format!("wigner_coarse_{}.csv", fmt_f64(t))
    } else {
        format!("wigner_{}.csv", fmt_f64(t))
    }
}

fn wigner(h: &Header, out: &Path) -> Result<Outcome> {
    let params = h.physical_params()?;
    let (nq, np) = (h.usize("nq")?, h.usize("np")?);
    let pix = pixels(h)?;
    let coarse = h.get("coarse") == Some("true");
    let dir = h.list("direction")?;
    let n: [f64; 3] = dir.as_slice().try_into().context("direction needs three components")?;
    let columns = "q [m], p [kg m/s], W_pp W_mm Re_W_pm Im_W_pm W_n [1/(J s)]";
    let mut files = Vec::new();
    for t in h.list("times")? {
        let state = evolve_in_field(&params, t)?;
        let field = wigner_field(&state, PhaseGrid::default_for(&state, nq, np)?)?;
        let mut outputs = vec![(wigner_file_name(t, false), field)];
        if coarse {
            let c = coarse_grain(&outputs[0].1, &pix)?;
            outputs.push((wigner_file_name(t, true), c));
        }
        for (name, f) in outputs {
            let (path, mut w) = create(out, &name)?;
            write!(w, "{}", h.render(columns))?;
            writeln!(w, "# file_t = {}", fmt_f64(t))?;
            f.write_csv(&mut w, Some(n))?;
            finish(&path, w)?;
            files.push(path);
        }
    }
    Ok(Outcome::Done(files))
}

fn info(h: &Header, out: &Path) -> Result<Outcome> {
    let params = h.physical_params()?;
    let pix = pixels(h)?;
    let mode = match h.get("mode").unwrap_or("continuum") {
        "continuum" => InfoMode::Continuum,
        "pixelated" => InfoMode::Pixelated { pixels: pix, extent: None },
        m => bail!("unknown info mode `{m}` (continuum, pixelated)"),
    };
    let series = information::info_series(&params, &times(h)?, mode)?;
    let (path, mut w) = create(out, "info.csv")?;
    write!(w, "{}", h.render("t [s], H [nats], S_ent [nats]"))?;
    writeln!(w, "t,H,S_ent")?;
    for i in 0..series.times.len() {
        writeln!(w, "{:.16e},{:.16e},{:.16e}", series.times[i], series.h[i], series.s_ent[i])?;
    }
    finish(&path, w)?;

    let state = evolve_in_field(&params, h.f64("screen_t")?)?;
    let screen = screen_distribution(&state, &pix, ScreenExtent::covering(&state, 12.0))?;
    let (spath, mut w) = create(out, "screen.csv")?;
    write!(w, "{}", h.render("X [m], P_plus [1], P_minus [1], I [nats]"))?;
    writeln!(w, "X,P_plus,P_minus,I")?;
    for k in 0..screen.x.len() {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            screen.x[k], screen.p_plus[k], screen.p_minus[k], screen.info[k]
        )?;
    }
    finish(&spath, w)?;
    Ok(Outcome::Done(vec![path, spath]))
}

fn verify(h: &Header, out: &Path) -> Result<Outcome> {
    let params = h.physical_params()?;
    let opts = VerifyOptions {
        points: h.usize("points")?,
        base_dt: h.f64("base_dt")?,
        min_levels: h.usize("min_levels")?,
        max_levels: h.usize("max_levels")?,
        target: h.f64("target")?,
        padding: h.f64("padding")?,
    };
    let report = verify_closed_forms(&params, &h.list("times")?, opts)?;
    let (path, mut w) = create(out, "verify.csv")?;
    write!(w, "{}", h.render("t [s], l2_err_plus [1], l2_err_minus [1], overlap_dev [1], norm_drift [1 per step]"))?;
    report.write_csv(&mut w)?;
    finish(&path, w)?;
    for r in &report.rows {
        for warn in &r.warnings {
            eprintln!("warning: t = {:e} s: {warn}", r.t);
        }
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(Outcome::Done(vec![path]))
    } else {
        Ok(Outcome::VerificationFailed { files: vec![path], failures })
    }
}
