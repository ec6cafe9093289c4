//! wasm-bindgen surface for the browser page in `www/`.
//!
//! Every export takes SI inputs with the silver-atom setup, optionally with
//! the force rescaled, and returns flat `f64` arrays that the page draws.

use sterngerlach::information::{entanglement_entropy, mean_information, InfoMode};
use sterngerlach::phase_space::{coarse_grain, wigner_field, CoarsePixelSpec, PhaseGrid};
use sterngerlach::{derive_scales, evolve_in_field, AmplitudeMode, PhysicalParams, Spin};
use wasm_bindgen::prelude::*;

fn params(force_scale: f64) -> Result<PhysicalParams, JsError> {
    let p = PhysicalParams::silver();
    Ok(p.with_force(p.force * force_scale)?)
}

/// `[τ1, τ2, τ3]` in seconds.
#[wasm_bindgen]
pub fn timescales(force_scale: f64) -> Result<Vec<f64>, JsError> {
    let s = derive_scales(&params(force_scale)?)?;
    Ok(vec![s.tau1, s.tau2, s.tau3])
}

/// Rows `t, S_ent, H` over `[0, t_max]`, flattened.
#[wasm_bindgen]
pub fn entropy_curve(force_scale: f64, t_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let p = params(force_scale)?;
    let s = derive_scales(&p)?;
    let n = points.max(2);
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let t = t_max * i as f64 / (n - 1) as f64;
        let e = entanglement_entropy(t, &s)?;
        let h = mean_information(&evolve_in_field(&p, t)?, InfoMode::Continuum)?;
        out.extend([t, e.s_ent, h]);
    }
    Ok(out)
}

/// Rows `x, ρ₊, ρ₋` at time `t` over `[-x_max, x_max]`, flattened.
#[wasm_bindgen]
pub fn density_profile(force_scale: f64, t: f64, x_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let state = evolve_in_field(&params(force_scale)?, t)?;
    let n = points.max(2);
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let x = -x_max + 2.0 * x_max * i as f64 / (n - 1) as f64;
        out.extend([
            x,
            state.density(Spin::Plus, x, AmplitudeMode::Weighted),
            state.density(Spin::Minus, x, AmplitudeMode::Weighted),
        ]);
    }
    Ok(out)
}

/// One Wigner entry on an `nq × np` grid, q outer, in scaled units.
///
/// `entry`: 0 = W₊₊, 1 = W₋₋, 2 = Re W₊₋, 3 = Tr/2 + Re W₊₋ (spin along x).
/// The first four values are the grid bounds `q_lo, q_hi, p_lo, p_hi`.
/// With `pixel_um > 0` the map is averaged over Δ = `pixel_um` µm,
/// δ = 100h/Δ.
#[wasm_bindgen]
pub fn wigner_map(
    force_scale: f64,
    t: f64,
    nq: usize,
    np: usize,
    entry: u8,
    pixel_um: f64,
) -> Result<Vec<f64>, JsError> {
    let state = evolve_in_field(&params(force_scale)?, t)?;
    let grid = PhaseGrid::default_for(&state, nq.max(2), np.max(2))?;
    let bounds = [grid.q[0], grid.q[grid.q.len() - 1], grid.p[0], grid.p[grid.p.len() - 1]];
    let mut field = wigner_field(&state, grid)?;
    if pixel_um > 0.0 {
        let dx = pixel_um * 1e-6;
        let pix = CoarsePixelSpec::new(dx, 100.0 * sterngerlach::params::PLANCK / dx)?;
        field = coarse_grain(&field, &pix)?;
    }
    let mut out = bounds.to_vec();
    out.extend(field.values.iter().map(|w| match entry {
        0 => w.pp(),
        1 => w.mm(),
        2 => w.pm().re,
        _ => 0.5 * w.trace() + w.pm().re,
    }));
    Ok(out)
}
