//! Exact evolution of the two spin branches.
//!
//! Sign convention: branch [`Spin::Plus`] is the σ_y = +1 component, which
//! sees the potential +F·x and therefore accelerates with −F/m. For F > 0 its
//! packet moves toward negative x. [`Spin::Minus`] is the mirror image.
//!
//! Inputs and outputs of the public functions are SI. Internally states are
//! held as [`GaussianAmplitude`]s in scaled units.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::gaussian::GaussianAmplitude;
use crate::params::PhysicalParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Plus, Spin::Minus];

    /// σ_y eigenvalue.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Plus => 1.0,
            Spin::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Spin {
        match self {
            Spin::Plus => Spin::Minus,
            Spin::Minus => Spin::Plus,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Spin::Plus => 0,
            Spin::Minus => 1,
        }
    }

    /// Acceleration of this branch in scaled units for scaled force `f`.
    pub fn acceleration(self, f: f64) -> f64 {
        -self.sign() * f
    }
}

/// Spin-block entry of the propagator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelBranch {
    PlusPlus,
    MinusMinus,
    PlusMinus,
    MinusPlus,
}

impl KernelBranch {
    fn diagonal(self) -> Option<Spin> {
        match self {
            KernelBranch::PlusPlus => Some(Spin::Plus),
            KernelBranch::MinusMinus => Some(Spin::Minus),
            _ => None,
        }
    }
}

fn check_time(name: &str, t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} = {t} must be finite and >= 0")))
    }
}

/// Free-particle kernel in scaled units.
pub fn free_kernel_scaled(x: f64, xi: f64, t: f64) -> Complex64 {
    (1.0 / (2.0 * PI * I * t)).sqrt() * Complex64::from_polar(1.0, (x - xi).powi(2) / (2.0 * t))
}

/// Diagonal kernel for branch `spin` in scaled units, `f` the scaled force.
pub fn kernel_scaled(spin: Spin, x: f64, xi: f64, t: f64, f: f64) -> Complex64 {
    let s = spin.sign();
    let phase = (x - xi).powi(2) / (2.0 * t) - s * f * t * (x + xi) / 2.0 - f * f * t.powi(3) / 24.0;
    (1.0 / (2.0 * PI * I * t)).sqrt() * Complex64::from_polar(1.0, phase)
}

/// Propagator entry K(x, xᵢ; t) in 1/m. Spin-flip entries are exactly zero.
pub fn kernel(branch: KernelBranch, x: f64, x_i: f64, t: f64, params: &PhysicalParams) -> Result<Complex64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(domain(format!("kernel needs t > 0, got {t}")));
    }
    let Some(spin) = branch.diagonal() else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let u = params.units();
    let k =
        kernel_scaled(spin, u.length_to_scaled(x), u.length_to_scaled(x_i), u.time_to_scaled(t), params.scaled_force());
    Ok(k / u.length)
}

/// Change to the frame falling with acceleration `accel` (scaled units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FallingFrameTransform {
    /// Comoving coordinate x − ½·accel·T².
    pub xi: f64,
    pub t: f64,
    /// Phase accel·T·(ξ + accel·T²/3).
    pub f: f64,
    pub accel: f64,
}

impl FallingFrameTransform {
    pub fn new(x: f64, t: f64, accel: f64) -> Self {
        let xi = x - 0.5 * accel * t * t;
        Self { xi, t, f: accel * t * (xi + accel * t * t / 3.0), accel }
    }

    pub fn phase_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.f)
    }

    /// e^{if} times the free kernel evaluated in the comoving coordinate.
    pub fn kernel(&self, x_i: f64) -> Complex64 {
        self.phase_factor() * free_kernel_scaled(self.xi, x_i, self.t)
    }

    /// e^{if} times a freely spread packet evaluated at ξ.
    pub fn transform_free_packet(&self) -> Complex64 {
        self.phase_factor() * GaussianAmplitude::in_field(0.0, self.t).eval(self.xi)
    }
}

/// The in-field wavepacket written out directly (scaled units), for the
/// packet whose center moves as ½·accel·t².
pub fn in_field_closed_form(x: f64, t: f64, accel: f64) -> Complex64 {
    let d = Complex64::new(1.0, t);
    let pre = (1.0 / (d * PI.sqrt())).sqrt();
    let a = accel;
    let num = 12.0 * x * x + a * a * Complex64::new(-t, 4.0) * t.powi(3) + 12.0 * a * x * t * Complex64::new(t, -2.0);
    pre * (-num / (24.0 * d)).exp()
}

/// Analytic two-component state c₊φ₊|+⟩ + c₋φ₋|−⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorWavepacket {
    pub params: PhysicalParams,
    /// Total elapsed time, s.
    pub t: f64,
    /// Field-exit time, s; `None` while still in the field.
    pub t1: Option<f64>,
    components: [GaussianAmplitude; 2],
}

/// Whether amplitudes include the spin weights c±.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeMode {
    /// Bare φ±(x,t), each normalized to 1.
    Component,
    /// c±·φ±(x,t), jointly normalized to 1.
    Weighted,
}

impl SpinorWavepacket {
    /// Scaled-unit component for a branch.
    pub fn component(&self, spin: Spin) -> &GaussianAmplitude {
        &self.components[spin.index()]
    }

    /// True for states of the in-field closed-form family.
    pub fn is_in_field(&self) -> bool {
        self.t1.is_none()
    }

    pub fn amplitude(&self, spin: Spin, x: f64, mode: AmplitudeMode) -> Complex64 {
        let u = self.params.units();
        let bare = self.component(spin).eval(u.length_to_scaled(x)) / u.length.sqrt();
        match mode {
            AmplitudeMode::Component => bare,
            AmplitudeMode::Weighted => self.params.weight(spin) * bare,
        }
    }

    /// |φ±(x)|² in 1/m, optionally weighted by |c±|².
    pub fn density(&self, spin: Spin, x: f64, mode: AmplitudeMode) -> f64 {
        let u = self.params.units();
        let d = self.component(spin).density(u.length_to_scaled(x)) / u.length;
        match mode {
            AmplitudeMode::Component => d,
            AmplitudeMode::Weighted => self.params.weight(spin).norm_sqr() * d,
        }
    }

    /// Center of |φ±|², m.
    pub fn center(&self, spin: Spin) -> f64 {
        self.params.units().length_to_si(self.component(spin).center())
    }

    /// Variance of |φ±|², m².
    pub fn variance(&self, spin: Spin) -> f64 {
        let w = self.params.units().length_to_si(self.component(spin).width());
        0.5 * w * w
    }

    /// ⟨φ₋|φ₊⟩ (dimensionless).
    pub fn overlap(&self) -> Complex64 {
        self.component(Spin::Plus).overlap(self.component(Spin::Minus))
    }
}

/// State after time `t` (s) inside the field, starting from exp(−x²/2σ²).
pub fn evolve_in_field(params: &PhysicalParams, t: f64) -> Result<SpinorWavepacket> {
    params.validate()?;
    check_time("t", t)?;
    let ts = params.units().time_to_scaled(t);
    let f = params.scaled_force();
    let components = Spin::BOTH.map(|s| GaussianAmplitude::in_field(s.acceleration(f), ts));
    Ok(SpinorWavepacket { params: *params, t, t1: None, components })
}

/// Field on for `t1`, then free flight until total time `t`.
///
/// Phases are kept (the free kernel is applied to the exit state), so the
/// result also carries the coherences between branches.
pub fn evolve_free_after_field(params: &PhysicalParams, t1: f64, t: f64) -> Result<SpinorWavepacket> {
    check_time("t1", t1)?;
    check_time("t", t)?;
    if t1 > t {
        return Err(domain(format!("field exit t1 = {t1} is after t = {t}")));
    }
    let exit = evolve_in_field(params, t1)?;
    let u = params.units();
    let tau = u.time_to_scaled(t) - u.time_to_scaled(t1);
    let components = exit.components.map(|g| g.free_evolve(tau));
    Ok(SpinorWavepacket { params: *params, t, t1: Some(t1), components })
}

/// Amplitude of one branch at `x` (SI), with or without the weight c±.
pub fn state_amplitude(state: &SpinorWavepacket, spin: Spin, x: f64, mode: AmplitudeMode) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(domain(format!("x = {x} is not finite")));
    }
    Ok(state.amplitude(spin, x, mode))
}

/// Post-field density |φ±(x,t)|² (1/m) written directly as a Gaussian with
/// width² = σ² + (ħt/mσ)² and center following the ballistic exit drift.
pub fn post_field_density(params: &PhysicalParams, spin: Spin, t1: f64, t: f64, x: f64) -> f64 {
    let a = spin.acceleration(params.force / params.mass);
    let center = a * (0.5 * t1 * t1 + t1 * (t - t1));
    let (m, s, h) = (params.mass, params.sigma, params.hbar);
    let w2 = (m * m * s.powi(4) + h * h * t * t) / (m * m * s * s);
    (-(x - center).powi(2) / w2).exp() / (PI * w2).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadOptions};

    fn silver() -> PhysicalParams {
        PhysicalParams::silver()
    }

    fn integrate_density(state: &SpinorWavepacket, spin: Spin, mode: AmplitudeMode) -> f64 {
        let c = state.center(spin);
        let w = state.variance(spin).sqrt();
        integrate(|x| state.density(spin, x, mode) * w, c - 17.0 * w, c + 17.0 * w, QuadOptions::abs(1e-13)).value / w
    }

    #[test]
    fn spin_flip_entries_vanish() {
        let p = silver();
        for (x, xi, t) in [(0.0, 0.0, 1e-6), (3e-6, -1e-6, 2e-5)] {
            assert_eq!(kernel(KernelBranch::PlusMinus, x, xi, t, &p).unwrap(), Complex64::new(0.0, 0.0));
            assert_eq!(kernel(KernelBranch::MinusPlus, x, xi, t, &p).unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn kernel_rejects_nonpositive_time() {
        let p = silver();
        assert!(kernel(KernelBranch::PlusPlus, 0.0, 0.0, 0.0, &p).is_err());
        assert!(kernel(KernelBranch::PlusPlus, 0.0, 0.0, -1.0, &p).is_err());
    }

    #[test]
    fn kernel_modulus_is_constant() {
        let p = silver();
        let t = 1e-5;
        let expect = (p.mass / (2.0 * PI * p.hbar * t)).sqrt();
        for (x, xi) in [(0.0, 0.0), (2e-6, -1e-6), (-5e-6, 4e-6)] {
            let k = kernel(KernelBranch::PlusPlus, x, xi, t, &p).unwrap();
            assert!((k.norm() - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn zero_force_kernel_is_free() {
        for (x, xi, t) in [(0.3, -0.2, 0.5), (2.0, 1.0, 0.01)] {
            let k = kernel_scaled(Spin::Plus, x, xi, t, 0.0);
            assert!((k - free_kernel_scaled(x, xi, t)).norm() < 1e-14);
        }
    }

    #[test]
    fn falling_frame_reproduces_field_kernel() {
        let f = 40.0;
        for spin in Spin::BOTH {
            for (x, xi, t) in [(0.3, -0.2, 0.5), (-1.0, 0.7, 0.05), (4.0, 2.0, 1.3)] {
                let frame = FallingFrameTransform::new(x, t, spin.acceleration(f));
                let direct = kernel_scaled(spin, x, xi, t, f);
                let via = frame.kernel(xi);
                assert!((via - direct).norm() < 1e-12 * direct.norm(), "{spin:?} {x} {xi} {t}");
            }
        }
    }

    #[test]
    fn falling_frame_reproduces_closed_form_packet() {
        let accel = -25.0;
        for (x, t) in [(0.0, 0.1), (-0.2, 0.3), (1.1, 0.7), (-3.0, 0.4)] {
            let frame = FallingFrameTransform::new(x, t, accel);
            let closed = in_field_closed_form(x, t, accel);
            assert!((frame.transform_free_packet() - closed).norm() < 1e-10 * closed.norm().max(1e-300));
        }
    }

    #[test]
    fn closed_form_matches_coefficients() {
        for (a, t) in [(-14.9, 0.01), (30.0, 0.5), (0.0, 2.0)] {
            let g = GaussianAmplitude::in_field(a, t);
            for x in [-1.0, 0.0, 0.4, 2.0] {
                let c = in_field_closed_form(x, t, a);
                assert!((g.eval(x) - c).norm() < 1e-13 * c.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn closed_form_equals_kernel_fold() {
        // ∫ K(x, xᵢ; t) φ(xᵢ, 0) dxᵢ, done by quadrature.
        let (f, t) = (12.0, 0.4);
        let phi0 = GaussianAmplitude::initial();
        for spin in Spin::BOTH {
            let g = GaussianAmplitude::in_field(spin.acceleration(f), t);
            for x in [-1.5, -0.3, 0.0, 0.8] {
                let folded = integrate(
                    |xi| kernel_scaled(spin, x, xi, t, f) * phi0.eval(xi),
                    -14.0,
                    14.0,
                    QuadOptions::abs(1e-13),
                )
                .value;
                assert!((folded - g.eval(x)).norm() < 1e-10, "{spin:?} x={x}: {folded} vs {}", g.eval(x));
            }
        }
    }

    #[test]
    fn initial_state() {
        let s = evolve_in_field(&silver(), 0.0).unwrap();
        let sigma = silver().sigma;
        for spin in Spin::BOTH {
            assert_eq!(s.center(spin), 0.0);
            assert!((s.variance(spin) - sigma * sigma / 2.0).abs() < 1e-12 * sigma * sigma);
            let x = 0.7e-6;
            let expect = (-(x / sigma).powi(2)).exp() / (sigma * PI.sqrt());
            assert!((s.density(spin, x, AmplitudeMode::Component) - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn rejects_negative_times() {
        let p = silver();
        assert!(evolve_in_field(&p, -1e-9).is_err());
        assert!(evolve_free_after_field(&p, 2e-5, 1e-5).is_err());
        assert!(evolve_free_after_field(&p, -1e-6, 1e-5).is_err());
    }

    #[test]
    fn normalization_centers_and_widths() {
        let p = silver();
        let a = p.force / p.mass;
        for t in [1e-7, 5e-6, 22.5e-6, 6e-5] {
            let s = evolve_in_field(&p, t).unwrap();
            let mut total = 0.0;
            for spin in Spin::BOTH {
                let n = integrate_density(&s, spin, AmplitudeMode::Component);
                assert!((n - 1.0).abs() < 1e-9, "t={t} {spin:?} norm {n}");
                total += integrate_density(&s, spin, AmplitudeMode::Weighted);
                let c = -spin.sign() * 0.5 * a * t * t;
                assert!((s.center(spin) - c).abs() < 1e-9 * p.sigma);
                let v = (p.sigma.powi(2) + (p.hbar * t / (p.mass * p.sigma)).powi(2)) / 2.0;
                assert!((s.variance(spin) - v).abs() < 1e-9 * v);
            }
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn branch_peaks_at_22_5_us() {
        let s = evolve_in_field(&silver(), 22.5e-6).unwrap();
        assert!((s.center(Spin::Plus) + 1.31e-6).abs() < 0.01e-6);
        assert!((s.center(Spin::Minus) - 1.31e-6).abs() < 0.01e-6);
    }

    #[test]
    fn parity_swaps_branches() {
        let s = evolve_in_field(&silver(), 1e-5).unwrap();
        for x in [-2e-6, -1e-7, 0.0, 3e-7, 1.5e-6] {
            let a = s.amplitude(Spin::Plus, x, AmplitudeMode::Component);
            let b = s.amplitude(Spin::Minus, -x, AmplitudeMode::Component);
            assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn weighted_mode_applies_amplitudes() {
        let p = silver().with_amplitudes(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let s = evolve_in_field(&p, 1e-5).unwrap();
        for x in [-1e-6, 0.0, 2e-6] {
            assert_eq!(state_amplitude(&s, Spin::Minus, x, AmplitudeMode::Weighted).unwrap(), Complex64::new(0.0, 0.0));
            assert!(state_amplitude(&s, Spin::Minus, x, AmplitudeMode::Component).unwrap().norm() > 0.0);
        }
        assert!(state_amplitude(&s, Spin::Plus, f64::NAN, AmplitudeMode::Weighted).is_err());
    }

    #[test]
    fn post_field_continuity_and_closed_density() {
        let p = silver();
        let t1 = 3e-5;
        let a = evolve_in_field(&p, t1).unwrap();
        let b = evolve_free_after_field(&p, t1, t1).unwrap();
        for spin in Spin::BOTH {
            for x in [-3e-6, -2.3e-6, 0.0, 2.3e-6] {
                let (da, db) =
                    (a.density(spin, x, AmplitudeMode::Component), b.density(spin, x, AmplitudeMode::Component));
                assert!((da - db).abs() < 1e-9 * da.max(1.0));
            }
        }
        for t in [3e-5, 4e-5, 6e-5, 2e-4] {
            let s = evolve_free_after_field(&p, t1, t).unwrap();
            for spin in Spin::BOTH {
                let c = s.center(spin);
                let w = s.variance(spin).sqrt();
                for k in [-2.0, -0.5, 0.0, 1.0, 3.0] {
                    let x = c + k * w;
                    let got = s.density(spin, x, AmplitudeMode::Component);
                    let want = post_field_density(&p, spin, t1, t, x);
                    assert!((got - want).abs() < 1e-9 * want, "t={t} {spin:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn post_field_ballistic_drift() {
        let p = silver();
        let (t1, t) = (3e-5, 6e-5);
        let s = evolve_free_after_field(&p, t1, t).unwrap();
        assert!((s.center(Spin::Minus) - 6.99e-6).abs() < 0.01e-6);
        assert!((s.center(Spin::Plus) + 6.99e-6).abs() < 0.01e-6);
        // velocity a·t1 after exit
        let v = p.force / p.mass * t1;
        let s2 = evolve_free_after_field(&p, t1, t + 1e-6).unwrap();
        assert!(((s2.center(Spin::Minus) - s.center(Spin::Minus)) / 1e-6 - v).abs() < 1e-9 * v);
    }
}
