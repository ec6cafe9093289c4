//! Complex Gaussians exp(q x² + l x + c) in scaled units (m = ħ = σ = 1).
//!
//! Every state this crate produces (in field, and after the field by free
//! flight) is of this form, so overlaps and Wigner transforms are closed-form.

use std::f64::consts::PI;

use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianAmplitude {
    pub quadratic: Complex64,
    pub linear: Complex64,
    pub constant: Complex64,
}

impl GaussianAmplitude {
    /// Normalized exp(−x²/2) initial packet.
    pub fn initial() -> Self {
        Self {
            quadratic: Complex64::new(-0.5, 0.0),
            linear: Complex64::new(0.0, 0.0),
            constant: Complex64::new(-0.25 * PI.ln(), 0.0),
        }
    }

    /// Initial packet after time `t` under the potential −a·x, i.e. with
    /// uniform acceleration `a`; coefficients of the closed-form solution.
    pub fn in_field(a: f64, t: f64) -> Self {
        let d = Complex64::new(1.0, t);
        let quadratic = -0.5 / d;
        let linear = -a * t * Complex64::new(t, -2.0) / (2.0 * d);
        let constant = -0.5 * d.ln() - 0.25 * PI.ln() - a * a * Complex64::new(-t, 4.0) * t.powi(3) / (24.0 * d);
        Self { quadratic, linear, constant }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.quadratic * x * x + self.linear * x + self.constant).exp()
    }

    pub fn ln_density(&self, x: f64) -> f64 {
        2.0 * (self.quadratic * x * x + self.linear * x + self.constant).re
    }

    pub fn density(&self, x: f64) -> f64 {
        self.ln_density(x).exp()
    }

    /// Center of |ψ|².
    pub fn center(&self) -> f64 {
        -self.linear.re / (2.0 * self.quadratic.re)
    }

    /// w such that |ψ|² ∝ exp(−(x−center)²/w²); the variance is w²/2.
    pub fn width(&self) -> f64 {
        (-0.5 / self.quadratic.re).sqrt()
    }

    /// Mean momentum ⟨−i d/dx⟩.
    pub fn mean_momentum(&self) -> f64 {
        (2.0 * self.quadratic * self.center() + self.linear).im
    }

    /// ∫|ψ|² dx.
    pub fn norm_sqr(&self) -> f64 {
        self.overlap(self).re
    }

    /// ⟨other|self⟩ = ∫ conj(other) self dx.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        let a = self.quadratic + other.quadratic.conj();
        let b = self.linear + other.linear.conj();
        let c = self.constant + other.constant.conj();
        (PI / -a).sqrt() * (c - b * b / (4.0 * a)).exp()
    }

    /// Free flight for time `tau` (free-particle kernel applied analytically).
    pub fn free_evolve(&self, tau: f64) -> Self {
        let den = 1.0 - 2.0 * I * tau * self.quadratic;
        Self {
            quadratic: self.quadratic / den,
            linear: self.linear / den,
            constant: self.constant + I * tau * self.linear * self.linear / (2.0 * den) - 0.5 * den.ln(),
        }
    }
}

/// exp(qq q² + qp q p + pp p² + ql q + pl p + c), scaled by a complex weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerGaussian {
    pub qq: Complex64,
    pub qp: Complex64,
    pub pp: Complex64,
    pub ql: Complex64,
    pub pl: Complex64,
    pub c: Complex64,
    pub weight: Complex64,
}

/// Axis-aligned box outside of which |W| < e^{-K}·max|W|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBox {
    pub q: (f64, f64),
    pub p: (f64, f64),
    /// ln max|W| including the weight.
    pub ln_peak: f64,
}

impl WignerGaussian {
    /// Cross-Wigner function (1/2π)∫ f(q+y/2) conj(g(q−y/2)) e^{−ipy} dy.
    pub fn cross(f: &GaussianAmplitude, g: &GaussianAmplitude, weight: Complex64) -> Self {
        let s = f.quadratic + g.quadratic.conj();
        let d = f.quadratic - g.quadratic.conj();
        let e1 = 0.5 * (f.linear - g.linear.conj());
        let t = f.linear + g.linear.conj();
        let u = f.constant + g.constant.conj();
        let norm = ((4.0 * PI / -s).sqrt() / (2.0 * PI)).ln();
        Self {
            qq: s - d * d / s,
            qp: 2.0 * I * d / s,
            pp: 1.0 / s,
            ql: t - 2.0 * d * e1 / s,
            pl: 2.0 * I * e1 / s,
            c: u - e1 * e1 / s + norm,
            weight,
        }
    }

    pub fn exponent(&self, q: f64, p: f64) -> Complex64 {
        self.qq * q * q + self.qp * q * p + self.pp * p * p + self.ql * q + self.pl * p + self.c
    }

    pub fn eval(&self, q: f64, p: f64) -> Complex64 {
        if self.weight == Complex64::new(0.0, 0.0) {
            return self.weight;
        }
        self.weight * self.exponent(q, p).exp()
    }

    /// Bounding box of the region where the magnitude is within e^{-k} of its peak.
    pub fn support(&self, k: f64) -> SupportBox {
        let (a, b, c) = (self.qq.re, self.qp.re, self.pp.re);
        // R(v) = −½ (v−μ)ᵀ M (v−μ) + R_max
        let m11 = -2.0 * a;
        let m12 = -b;
        let m22 = -2.0 * c;
        let det = m11 * m22 - m12 * m12;
        debug_assert!(m11 > 0.0 && det > 0.0, "Wigner Gaussian must decay: {self:?}");
        let (gq, gp) = (self.ql.re, self.pl.re);
        let mu_q = (m22 * gq - m12 * gp) / det;
        let mu_p = (m11 * gp - m12 * gq) / det;
        let hq = (2.0 * k * m22 / det).sqrt();
        let hp = (2.0 * k * m11 / det).sqrt();
        SupportBox {
            q: (mu_q - hq, mu_q + hq),
            p: (mu_p - hp, mu_p + hp),
            ln_peak: self.exponent(mu_q, mu_p).re + self.weight.norm().ln(),
        }
    }
}
