//! Physical parameters, derived timescales and the scaled unit system.
//!
//! Everything downstream computes in scaled units where the packet width σ,
//! the spreading time τ2 = mσ²/ħ and the momentum ħ/σ are all 1 (so m = ħ = 1
//! as well). SI values only appear at the API boundary.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduced Planck constant (CODATA 2018), J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Planck constant, J·s.
pub const PLANCK: f64 = 2.0 * std::f64::consts::PI * HBAR;

/// Bohr magneton (CODATA 2018), J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;

const NORM_TOL: f64 = 1e-12;

/// Zeeman inputs from which the transverse force can be derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeemanCoupling {
    pub g: f64,
    /// J/T
    pub mu_b: f64,
    /// Field gradient, T/m.
    pub b0: f64,
}

impl ZeemanCoupling {
    /// Force on the σ_y = +1 component, F = −g·μB·B0/2.
    ///
    /// The spin-½ factor ħ/2 is taken in units of ħ, so F is in newtons.
    pub fn force(&self) -> f64 {
        -self.g * self.mu_b * self.b0 / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// kg
    pub mass: f64,
    /// N; the σ_y = +1 component feels the potential +F·x.
    pub force: f64,
    /// Initial packet width, m. The initial amplitude is exp(−x²/2σ²).
    pub sigma: f64,
    /// J·s
    pub hbar: f64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub zeeman: Option<ZeemanCoupling>,
}

impl PhysicalParams {
    /// Silver-atom values used throughout: m = 1.79e-25 kg, F = 9.27e-22 N, σ = 1 µm.
    pub fn silver() -> Self {
        Self::new(1.79e-25, 9.27e-22, 1e-6).expect("reference parameters are valid")
    }

    /// Equal real amplitudes c± = 1/√2 and CODATA ħ.
    pub fn new(mass: f64, force: f64, sigma: f64) -> Result<Self> {
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let p = Self { mass, force, sigma, hbar: HBAR, c_plus: c, c_minus: c, zeeman: None };
        p.validate()?;
        Ok(p)
    }

    /// Derive F from the Zeeman coupling.
    pub fn from_zeeman(mass: f64, sigma: f64, zeeman: ZeemanCoupling) -> Result<Self> {
        let mut p = Self::new(mass, zeeman.force(), sigma)?;
        p.zeeman = Some(zeeman);
        p.validate()?;
        Ok(p)
    }

    pub fn with_amplitudes(mut self, c_plus: Complex64, c_minus: Complex64) -> Result<Self> {
        self.c_plus = c_plus;
        self.c_minus = c_minus;
        self.validate()?;
        Ok(self)
    }

    pub fn with_force(mut self, force: f64) -> Result<Self> {
        self.force = force;
        self.zeeman = None;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        self.sigma = sigma;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("sigma", self.sigma)?;
        positive("hbar", self.hbar)?;
        if !self.force.is_finite() {
            return Err(Error::InvalidParameter { name: "force", reason: format!("{} is not finite", self.force) });
        }
        let norm = self.c_plus.norm_sqr() + self.c_minus.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        if let Some(z) = self.zeeman {
            let derived = z.force();
            let scale = derived.abs().max(self.force.abs());
            if (derived - self.force).abs() > 1e-12 * scale {
                return Err(Error::InvalidParameter {
                    name: "force",
                    reason: format!("{:e} N disagrees with −g·μB·B0/2 = {:e} N", self.force, derived),
                });
            }
        }
        Ok(())
    }

    /// Spin weight c± of the given branch.
    pub fn weight(&self, spin: crate::Spin) -> Complex64 {
        match spin {
            crate::Spin::Plus => self.c_plus,
            crate::Spin::Minus => self.c_minus,
        }
    }

    pub fn units(&self) -> UnitSystem {
        UnitSystem::new(self)
    }

    /// Force in units of ħ²/(mσ³).
    pub fn scaled_force(&self) -> f64 {
        self.units().force_to_scaled(self.force)
    }

    pub fn has_equal_weights(&self) -> bool {
        (self.c_plus.norm_sqr() - 0.5).abs() < NORM_TOL && (self.c_minus.norm_sqr() - 0.5).abs() < NORM_TOL
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("{v} must be finite and > 0") })
    }
}

/// Acceleration and the three characteristic times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// F/m, m/s² (signed).
    pub a: f64,
    /// Separation time √(2σ/|a|), s.
    pub tau1: f64,
    /// Spreading time mσ²/ħ, s.
    pub tau2: f64,
    /// Entanglement time τ1²/τ2, s.
    pub tau3: f64,
}

pub fn derive_scales(params: &PhysicalParams) -> Result<DerivedScales> {
    params.validate()?;
    if params.force == 0.0 {
        return Err(Error::NoSeparation);
    }
    let a = params.force / params.mass;
    let tau1 = (2.0 * params.sigma / a.abs()).sqrt();
    let tau2 = params.mass * params.sigma * params.sigma / params.hbar;
    Ok(DerivedScales { a, tau1, tau2, tau3: tau1 * tau1 / tau2 })
}

/// σ / τ2 / ħ/σ / ħ unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    /// m
    pub length: f64,
    /// s
    pub time: f64,
    /// kg·m/s
    pub momentum: f64,
    /// J·s
    pub action: f64,
    /// kg
    pub mass: f64,
}

impl UnitSystem {
    pub fn new(params: &PhysicalParams) -> Self {
        let length = params.sigma;
        Self {
            length,
            time: params.mass * length * length / params.hbar,
            momentum: params.hbar / length,
            action: params.hbar,
            mass: params.mass,
        }
    }

    pub fn length_to_scaled(&self, x: f64) -> f64 {
        x / self.length
    }
    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.length
    }
    pub fn time_to_scaled(&self, t: f64) -> f64 {
        t / self.time
    }
    pub fn time_to_si(&self, t: f64) -> f64 {
        t * self.time
    }
    pub fn momentum_to_scaled(&self, p: f64) -> f64 {
        p / self.momentum
    }
    pub fn momentum_to_si(&self, p: f64) -> f64 {
        p * self.momentum
    }
    /// N = kg·m/s².
    pub fn force_unit(&self) -> f64 {
        self.mass * self.length / (self.time * self.time)
    }
    pub fn force_to_scaled(&self, f: f64) -> f64 {
        f / self.force_unit()
    }
    pub fn force_to_si(&self, f: f64) -> f64 {
        f * self.force_unit()
    }
    /// Wigner values are stored as ħ·W; this restores 1/(J·s).
    pub fn wigner_to_si(&self, w: f64) -> f64 {
        w / self.action
    }
}

/// Paraxial map: longitudinal distance z behaves as time t = z·m/(k·ħ).
pub fn map_z_to_t(z: f64, k: f64, params: &PhysicalParams) -> Result<f64> {
    check_wavenumber(k)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(crate::error::domain(format!("z = {z} must be finite and >= 0")));
    }
    Ok(z * params.mass / (k * params.hbar))
}

pub fn map_t_to_z(t: f64, k: f64, params: &PhysicalParams) -> Result<f64> {
    check_wavenumber(k)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(crate::error::domain(format!("t = {t} must be finite and >= 0")));
    }
    Ok(t * k * params.hbar / params.mass)
}

/// Beam energy E = k²ħ²/(2m) matching the wavenumber of the paraxial map.
pub fn beam_energy(k: f64, params: &PhysicalParams) -> Result<f64> {
    check_wavenumber(k)?;
    Ok(k * k * params.hbar * params.hbar / (2.0 * params.mass))
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWavenumber(k))
    }
}
