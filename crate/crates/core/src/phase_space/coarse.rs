use num_complex::Complex64;

use super::{check_uniform, FieldSource, WignerMatrix, WignerMatrixField};
use crate::error::{Error, Result};
use crate::gaussian::WignerGaussian;
use crate::params::{PhysicalParams, UnitSystem, PLANCK};
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::special::gaussian_segment_integral;

/// Pixels below e^{-SUPPORT_K} of an entry's peak are treated as zero.
const SUPPORT_K: f64 = 40.0;

/// Phase-space pixel Δ × δ (SI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoarsePixelSpec {
    /// Position width, m.
    pub delta_x: f64,
    /// Momentum width, kg·m/s.
    pub delta_p: f64,
}

impl CoarsePixelSpec {
    pub fn new(delta_x: f64, delta_p: f64) -> Result<Self> {
        for (name, v) in [("delta_x", delta_x), ("delta_p", delta_p)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter { name, reason: format!("{v} must be finite and > 0") });
            }
        }
        Ok(Self { delta_x, delta_p })
    }

    /// Δ = 1 µm and δ = 100·h/Δ.
    pub fn default_screen() -> Self {
        let delta_x = 1e-6;
        Self { delta_x, delta_p: 100.0 * PLANCK / delta_x }
    }

    /// Δ·δ/h.
    pub fn cell_ratio(&self) -> f64 {
        self.delta_x * self.delta_p / PLANCK
    }

    /// Scaled (Δ, δ).
    pub fn scaled(&self, units: &UnitSystem) -> (f64, f64) {
        (units.length_to_scaled(self.delta_x), units.momentum_to_scaled(self.delta_p))
    }

    /// Same as [`Self::scaled`] for the unit system of `params`.
    pub fn scaled_for(&self, params: &PhysicalParams) -> (f64, f64) {
        self.scaled(&params.units())
    }
}

/// Window average (1/Δδ)∬ W(q+u, p+v) du dv of one Gaussian entry, scaled units.
///
/// The u-integral is done in closed form with error functions; the v-integral
/// adaptively over the part of the window where the entry is not negligible.
pub fn coarse_grain_point(w: &WignerGaussian, q: f64, p: f64, dq: f64, dp: f64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if w.weight == zero {
        return zero;
    }
    let sup = w.support(SUPPORT_K);
    let (q_lo, q_hi) = (q - 0.5 * dq, q + 0.5 * dq);
    let p_lo = (p - 0.5 * dp).max(sup.p.0);
    let p_hi = (p + 0.5 * dp).min(sup.p.1);
    if q_hi < sup.q.0 || q_lo > sup.q.1 || p_lo >= p_hi {
        return zero;
    }
    let inner = |v: f64| gaussian_segment_integral(w.qq, w.qp * v + w.ql, w.pp * v * v + w.pl * v + w.c, q_lo, q_hi);
    // Tolerance relative to the peak so tails cost nothing.
    let scale = sup.ln_peak.exp() / w.weight.norm();
    let opts = QuadOptions { abs_tol: 1e-13 * scale * dq.min(1.0), rel_tol: 1e-12, max_segments: 2000 };
    let centre = 0.5 * (sup.p.0 + sup.p.1);
    let r = integrate_with_breaks(inner, p_lo, p_hi, &[centre], opts);
    w.weight * r.value / (dq * dp)
}

/// Averages every entry over a Δ × δ window centered on each grid point.
///
/// Fields with Gaussian closed forms are averaged exactly; sampled fields get
/// a separable box filter whose weights are the overlaps of each grid cell
/// with the window, which conserves Σ W exactly away from the grid edges.
pub fn coarse_grain(field: &WignerMatrixField, pix: &CoarsePixelSpec) -> Result<WignerMatrixField> {
    let pix = CoarsePixelSpec::new(pix.delta_x, pix.delta_p)?;
    let (dq, dp) = pix.scaled(&field.units);
    let values = match &field.source {
        FieldSource::Analytic(forms) => analytic(field, forms, dq, dp),
        FieldSource::Sampled => sampled(field, dq, dp)?,
    };
    Ok(WignerMatrixField { values, pixels: Some(pix), ..field.clone() })
}

fn analytic(field: &WignerMatrixField, forms: &[[WignerGaussian; 2]; 2], dq: f64, dp: f64) -> Vec<WignerMatrix> {
    let eval = |(q, p): (f64, f64)| {
        WignerMatrix::from_upper(
            coarse_grain_point(&forms[0][0], q, p, dq, dp).re,
            coarse_grain_point(&forms[1][1], q, p, dq, dp).re,
            coarse_grain_point(&forms[0][1], q, p, dq, dp),
        )
    };
    let pts: Vec<(f64, f64)> = field.grid.points().collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pts.par_iter().map(|&x| eval(x)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        pts.iter().map(|&x| eval(x)).collect()
    }
}

/// Box-filter weights: overlap of cell k (width h) with a window of width
/// `width` centered on the target point, divided by `width`, per offset k.
fn box_weights(h: f64, width: f64) -> Vec<f64> {
    let half = 0.5 * width;
    let reach = ((half + 0.5 * h) / h).ceil() as usize;
    (0..=reach)
        .map(|k| {
            let (a, b) = (k as f64 * h - 0.5 * h, k as f64 * h + 0.5 * h);
            ((b.min(half) - a.max(-half)).max(0.0)) / width
        })
        .collect()
}

fn filter_axis(values: &mut [Complex64], n: usize, stride: usize, count: usize, outer_stride: usize, w: &[f64]) {
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..count {
        let base = o * outer_stride;
        for (i, x) in line.iter_mut().enumerate() {
            let mut acc = values[base + i * stride] * w[0];
            for (k, &wk) in w.iter().enumerate().skip(1) {
                if i >= k {
                    acc += values[base + (i - k) * stride] * wk;
                }
                if i + k < n {
                    acc += values[base + (i + k) * stride] * wk;
                }
            }
            *x = acc;
        }
        for (i, x) in line.iter().enumerate() {
            values[base + i * stride] = *x;
        }
    }
}

fn sampled(field: &WignerMatrixField, dq: f64, dp: f64) -> Result<Vec<WignerMatrix>> {
    let (nq, np) = (field.grid.q.len(), field.grid.p.len());
    let hq = check_uniform(&field.grid.q, "q")?;
    let hp = check_uniform(&field.grid.p, "p")?;
    let (wq, wp) = (box_weights(hq, dq), box_weights(hp, dp));
    let mut out = field.values.clone();
    for a in 0..2 {
        for b in 0..2 {
            let mut plane: Vec<Complex64> = field.values.iter().map(|v| v.entries[a][b]).collect();
            // along p (contiguous), then along q
            if np > 1 {
                filter_axis(&mut plane, np, 1, nq, np, &wp);
            }
            if nq > 1 {
                filter_axis(&mut plane, nq, np, np, 1, &wq);
            }
            for (v, x) in out.iter_mut().zip(plane) {
                v.entries[a][b] = x;
            }
        }
    }
    Ok(out)
}
