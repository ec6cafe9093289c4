//! Spin entanglement entropy and what a pixelated screen learns about the spin.
//!
//! All entropies are in nats; [`EntanglementSeries::bits`] converts.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::dynamics::{Spin, SpinorWavepacket};
use crate::error::{domain, Error, Result};
use crate::params::DerivedScales;
use crate::phase_space::CoarsePixelSpec;
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::special::ln_gaussian_interval_mass;

/// Which overlap factor feeds the closed-form entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverlapModel {
    /// A(t) = exp[−t²(t² + τ2²)/τ1⁴], the commonly quoted form.
    #[default]
    Nominal,
    /// |⟨φ₋|φ₊⟩| = exp[−t²(t² + 4τ2²)/τ1⁴], the exact overlap of the two packets.
    Exact,
}

fn overlap_exponent(t: f64, scales: &DerivedScales, model: OverlapModel) -> f64 {
    let k = match model {
        OverlapModel::Nominal => 1.0,
        OverlapModel::Exact => 4.0,
    };
    t * t * (t * t + k * scales.tau2 * scales.tau2) / scales.tau1.powi(4)
}

pub fn overlap_factor(t: f64, scales: &DerivedScales, model: OverlapModel) -> f64 {
    (-overlap_exponent(t, scales, model)).exp()
}

/// x ln x with 0 ln 0 = 0.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// ln 2 − S for eigenvalues (1 ± a)/2, given a and 1 − a.
///
/// Summed as a power series for small a so that S approaches ln 2 monotonically
/// instead of jittering in the last bit.
fn entropy_deficit(a: f64, one_minus: f64) -> f64 {
    if a < 0.5 {
        let a2 = a * a;
        let mut term = a2;
        let mut sum = 0.0;
        for k in 1..200 {
            let kf = k as f64;
            sum += term / (2.0 * kf * (2.0 * kf - 1.0));
            term *= a2;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum
    } else {
        0.5 * (1.0 + a) * a.ln_1p() + 0.5 * xlnx(one_minus)
    }
}

/// Entropy for A = e^{−e}; 1 − A is formed without cancellation.
fn entropy_from_exponent(e: f64) -> f64 {
    let a = (-e).exp();
    (LN_2 - entropy_deficit(a, -(-e).exp_m1())).max(0.0)
}

/// Entropy of the eigenvalues (1 ± A)/2.
pub fn entropy_from_overlap(a: f64) -> f64 {
    let a = a.clamp(0.0, 1.0);
    (LN_2 - entropy_deficit(a, 1.0 - a)).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementPoint {
    pub t: f64,
    pub a: f64,
    pub s_ent: f64,
}

/// A(t) and S_ent(t) for equal spin weights, nominal overlap form.
pub fn entanglement_entropy(t: f64, scales: &DerivedScales) -> Result<EntanglementPoint> {
    entanglement_entropy_with(t, scales, OverlapModel::Nominal)
}

pub fn entanglement_entropy_with(t: f64, scales: &DerivedScales, model: OverlapModel) -> Result<EntanglementPoint> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(domain(format!("t = {t} must be finite and >= 0")));
    }
    let e = overlap_exponent(t, scales, model);
    Ok(EntanglementPoint { t, a: (-e).exp(), s_ent: entropy_from_exponent(e) })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntanglementSeries {
    pub times: Vec<f64>,
    pub a_values: Vec<f64>,
    pub s_ent: Vec<f64>,
}

impl EntanglementSeries {
    pub fn new(times: &[f64], scales: &DerivedScales, model: OverlapModel) -> Result<Self> {
        let mut out = Self::default();
        for &t in times {
            let e = entanglement_entropy_with(t, scales, model)?;
            out.times.push(t);
            out.a_values.push(e.a);
            out.s_ent.push(e.s_ent);
        }
        Ok(out)
    }

    pub fn bits(&self) -> Vec<f64> {
        self.s_ent.iter().map(|s| s / LN_2).collect()
    }
}

/// Reduced 2×2 spin density matrix, indexed by [`Spin::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDensity {
    pub rho: [[Complex64; 2]; 2],
}

impl SpinDensity {
    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (a, d) = (self.rho[0][0].re, self.rho[1][1].re);
        let b = self.rho[0][1].norm();
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d).powi(2) + b * b).sqrt();
        [mean - r, mean + r]
    }

    pub fn von_neumann_entropy(&self) -> f64 {
        -self.eigenvalues().iter().map(|&l| xlnx(l.max(0.0))).sum::<f64>()
    }
}

fn component_range(state: &SpinorWavepacket, widths: f64) -> (f64, f64, [f64; 2]) {
    let c = Spin::BOTH.map(|s| state.component(s).center());
    let w = Spin::BOTH.map(|s| state.component(s).width()).into_iter().fold(0.0, f64::max);
    (c[0].min(c[1]) - widths * w, c[0].max(c[1]) + widths * w, c)
}

/// ρ_spin = Tr_x |ψ⟩⟨ψ|, the coherence ⟨φ₋|φ₊⟩ obtained by quadrature.
pub fn reduced_spin_density(state: &SpinorWavepacket) -> SpinDensity {
    let (lo, hi, centers) = component_range(state, 12.0);
    let (f, g) = (state.component(Spin::Plus), state.component(Spin::Minus));
    let overlap = integrate_with_breaks(
        |x| g.eval(x).conj() * f.eval(x),
        lo,
        hi,
        &[centers[0], centers[1], 0.5 * (centers[0] + centers[1])],
        QuadOptions { abs_tol: 1e-13, rel_tol: 0.0, max_segments: 20_000 },
    )
    .value;
    let p = &state.params;
    let (cp, cm) = (p.c_plus, p.c_minus);
    let off = cp * cm.conj() * overlap;
    SpinDensity { rho: [[Complex64::new(cp.norm_sqr(), 0.0), off], [off.conj(), Complex64::new(cm.norm_sqr(), 0.0)]] }
}

/// Von Neumann entropy of the spin for any amplitudes.
pub fn spin_entropy(state: &SpinorWavepacket) -> f64 {
    reduced_spin_density(state).von_neumann_entropy()
}

/// Given ln P₊ and ln P₋, returns (q₊, q₋, ln q₊, ln q₋).
fn conditional(lp: f64, lm: f64) -> (f64, f64, f64, f64) {
    let softplus = |d: f64| if d > 0.0 { d + (-d).exp().ln_1p() } else { d.exp().ln_1p() };
    let (ln_qp, ln_qm) = if lp == f64::NEG_INFINITY {
        (f64::NEG_INFINITY, 0.0)
    } else if lm == f64::NEG_INFINITY {
        (0.0, f64::NEG_INFINITY)
    } else {
        (-softplus(lm - lp), -softplus(lp - lm))
    };
    (ln_qp.exp(), ln_qm.exp(), ln_qp, ln_qm)
}

/// ln 2 − S with S the binary entropy of (q₊, q₋).
fn information(qp: f64, qm: f64, ln_qp: f64, ln_qm: f64) -> f64 {
    let term = |q: f64, lq: f64| if q == 0.0 { 0.0 } else { q * lq };
    let s = -(term(qp, ln_qp) + term(qm, ln_qm));
    (LN_2 - s).max(0.0)
}

/// Region of the screen and where pixel centers sit: origin + kΔ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenExtent {
    /// m
    pub lo: f64,
    /// m
    pub hi: f64,
    /// m
    pub origin: f64,
}

impl ScreenExtent {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi, origin: 0.0 }
    }

    pub fn with_origin(self, origin: f64) -> Self {
        Self { origin, ..self }
    }

    /// Symmetric extent reaching `widths` packet widths beyond both packets.
    pub fn covering(state: &SpinorWavepacket, widths: f64) -> Self {
        let (lo, hi, _) = component_range(state, widths);
        let u = state.params.units();
        let r = u.length_to_si(lo.abs().max(hi.abs()));
        Self::new(-r, r)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScreenDistribution {
    /// Pixel width, m.
    pub delta: f64,
    /// Pixel centers, m.
    pub x: Vec<f64>,
    pub p_plus: Vec<f64>,
    pub p_minus: Vec<f64>,
    pub q_plus: Vec<f64>,
    pub q_minus: Vec<f64>,
    /// Conditional spin entropy, nats.
    pub s: Vec<f64>,
    /// ln 2 − S, nats.
    pub info: Vec<f64>,
}

impl ScreenDistribution {
    pub fn total(&self) -> f64 {
        self.p_plus.iter().zip(&self.p_minus).map(|(a, b)| a + b).sum()
    }

    /// Σ P(X)·I(X).
    pub fn mean_information(&self) -> f64 {
        (0..self.x.len()).map(|k| (self.p_plus[k] + self.p_minus[k]) * self.info[k]).sum()
    }
}

/// Detection probabilities P±(X) = |c±|²∫_pixel |φ±|² and the information
/// carried by a hit in each pixel. Only the position width of `pixels` is used.
pub fn screen_distribution(
    state: &SpinorWavepacket,
    pixels: &CoarsePixelSpec,
    extent: ScreenExtent,
) -> Result<ScreenDistribution> {
    let delta = pixels.delta_x;
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter { name: "delta_x", reason: format!("{delta} must be > 0") });
    }
    if !(extent.hi > extent.lo) {
        return Err(domain(format!("empty screen extent [{}, {}]", extent.lo, extent.hi)));
    }
    let u = state.params.units();
    let k_lo = ((extent.lo - extent.origin) / delta).round() as i64;
    let k_hi = ((extent.hi - extent.origin) / delta).round() as i64;
    let n = usize::try_from(k_hi - k_lo + 1).map_err(|_| domain("screen extent too large"))?;
    let weights = Spin::BOTH.map(|s| state.params.weight(s).norm_sqr().ln());
    let mut out = ScreenDistribution { delta, ..Default::default() };
    for k in k_lo..=k_hi {
        let x = extent.origin + k as f64 * delta;
        let (a, b) = (u.length_to_scaled(x - 0.5 * delta), u.length_to_scaled(x + 0.5 * delta));
        let ln_p = Spin::BOTH.map(|s| {
            let g = state.component(s);
            weights[s.index()] + ln_gaussian_interval_mass(g.center(), g.width(), a, b)
        });
        let (qp, qm, lqp, lqm) = conditional(ln_p[0], ln_p[1]);
        let i = information(qp, qm, lqp, lqm);
        out.x.push(x);
        out.p_plus.push(ln_p[0].exp());
        out.p_minus.push(ln_p[1].exp());
        out.q_plus.push(qp);
        out.q_minus.push(qm);
        out.s.push(LN_2 - i);
        out.info.push(i);
    }
    debug_assert_eq!(out.x.len(), n);
    let captured = out.total();
    if captured < 1.0 - 1e-8 {
        return Err(Error::Coverage { captured });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InfoMode {
    /// Integrals over the screen without pixels.
    Continuum,
    /// Σ P(X) I(X) over pixels tiling `extent` (or a default covering extent).
    Pixelated { pixels: CoarsePixelSpec, extent: Option<ScreenExtent> },
}

/// Mean information per detection event, nats.
pub fn mean_information(state: &SpinorWavepacket, mode: InfoMode) -> Result<f64> {
    match mode {
        InfoMode::Continuum => Ok(continuum_information(state)),
        InfoMode::Pixelated { pixels, extent } => {
            let extent = extent.unwrap_or_else(|| ScreenExtent::covering(state, 12.0));
            Ok(screen_distribution(state, &pixels, extent)?.mean_information())
        }
    }
}

fn continuum_information(state: &SpinorWavepacket) -> f64 {
    let (lo, hi, centers) = component_range(state, 12.0);
    let weights = Spin::BOTH.map(|s| state.params.weight(s).norm_sqr().ln());
    let (f, g) = (state.component(Spin::Plus), state.component(Spin::Minus));
    let integrand = |x: f64| {
        let lp = weights[0] + f.ln_density(x);
        let lm = weights[1] + g.ln_density(x);
        let (qp, qm, lqp, lqm) = conditional(lp, lm);
        let total = lp.max(lm) + (-(lp - lm).abs()).exp().ln_1p();
        if total == f64::NEG_INFINITY {
            return 0.0;
        }
        total.exp() * information(qp, qm, lqp, lqm)
    };
    integrate_with_breaks(
        integrand,
        lo,
        hi,
        &[centers[0], centers[1], 0.5 * (centers[0] + centers[1])],
        QuadOptions { abs_tol: 1e-10, rel_tol: 0.0, max_segments: 20_000 },
    )
    .value
}

/// 𝓗(t) and S_ent(t) over a time sweep.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InfoSeries {
    pub times: Vec<f64>,
    pub h: Vec<f64>,
    pub s_ent: Vec<f64>,
}

pub fn info_series(params: &crate::PhysicalParams, times: &[f64], mode: InfoMode) -> Result<InfoSeries> {
    let scales = crate::derive_scales(params)?;
    let mut out = InfoSeries::default();
    for &t in times {
        let state = crate::evolve_in_field(params, t)?;
        out.times.push(t);
        out.h.push(mean_information(&state, mode)?);
        out.s_ent.push(entanglement_entropy(t, &scales)?.s_ent);
    }
    Ok(out)
}
