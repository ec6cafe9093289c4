use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_uniform, DensityMatrixField, FieldSource, PhaseGrid, WignerMatrix, WignerMatrixField};
use crate::dynamics::{Spin, SpinorWavepacket};
use crate::error::{Error, Result};
use crate::gaussian::WignerGaussian;

/// Cross-Wigner forms of all four entries, weights included (scaled units).
///
/// Valid for every state this crate produces, including post-field states.
pub fn wigner_gaussian(state: &SpinorWavepacket) -> [[WignerGaussian; 2]; 2] {
    let p = &state.params;
    Spin::BOTH.map(|a| {
        Spin::BOTH
            .map(|b| WignerGaussian::cross(state.component(a), state.component(b), p.weight(a) * p.weight(b).conj()))
    })
}

/// Diagonal closed form at scaled (q, p) for a packet accelerating with `a`,
/// carrying a factor ½ (the equal-weight |c|²).
fn diagonal_closed(q: f64, p: f64, a: f64, t: f64) -> f64 {
    let s = a * t * t + 2.0 * q;
    let e = 4.0 * p * p * t * t - 4.0 * p * t * s + s * s + 4.0 * p * p - 8.0 * a * p * t + 4.0 * a * a * t * t;
    (-e / 4.0).exp() / (2.0 * PI)
}

/// Off-diagonal closed form, also carrying ½.
fn off_diagonal_closed(q: f64, p: f64, a: f64, t: f64) -> Complex64 {
    let re = -((p * t - q).powi(2) + p * p);
    let im = -a * t * (p * t - 2.0 * q);
    Complex64::new(re, im).exp() / (2.0 * PI)
}

/// Wigner matrix ħ·W at SI point (q, p) from the in-field closed forms.
pub fn wigner_analytic(state: &SpinorWavepacket, q: f64, p: f64) -> Result<WignerMatrix> {
    if !state.is_in_field() {
        return Err(Error::NotInFieldFamily);
    }
    let pr = &state.params;
    let u = pr.units();
    let (qs, ps, t) = (u.length_to_scaled(q), u.momentum_to_scaled(p), u.time_to_scaled(state.t));
    let a = Spin::Plus.acceleration(pr.scaled_force());
    let pp = 2.0 * pr.c_plus.norm_sqr() * diagonal_closed(qs, ps, a, t);
    let mm = 2.0 * pr.c_minus.norm_sqr() * diagonal_closed(-qs, -ps, a, t);
    let pm = 2.0 * pr.c_plus * pr.c_minus.conj() * off_diagonal_closed(qs, ps, a, t);
    Ok(WignerMatrix::from_upper(pp, mm, pm))
}

/// Wigner matrix of a whole state on `grid` (scaled coordinates).
pub fn wigner_field(state: &SpinorWavepacket, grid: PhaseGrid) -> Result<WignerMatrixField> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let forms = wigner_gaussian(state);
    let eval = |(q, p): (f64, f64)| {
        WignerMatrix::from_upper(forms[0][0].eval(q, p).re, forms[1][1].eval(q, p).re, forms[0][1].eval(q, p))
    };
    let pts: Vec<(f64, f64)> = grid.points().collect();
    #[cfg(feature = "parallel")]
    let values = {
        use rayon::prelude::*;
        pts.par_iter().map(|&x| eval(x)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values = pts.iter().map(|&x| eval(x)).collect();
    Ok(WignerMatrixField {
        t: state.t,
        units: state.params.units(),
        grid,
        values,
        source: FieldSource::Analytic(Box::new(forms)),
        pixels: None,
    })
}

/// Wigner matrix ħ·W at SI point (q, p) by a discrete Fourier transform of
/// the sampled density matrix over y = x − x′.
///
/// The position grid must be uniform with spacing h, and q must lie on the
/// half-lattice x₀ + n·h/2 so that both q ± y/2 are grid points. The y-step
/// is then 2h, which resolves |p| only while |p|·h ≤ π/8 (scaled).
pub fn wigner_numeric(rho: &DensityMatrixField, q: f64, p: f64) -> Result<WignerMatrix> {
    let h = check_uniform(&rho.x, "x")?;
    let u = &rho.units;
    let (qs, ps) = (u.length_to_scaled(q), u.momentum_to_scaled(p));
    let max_h = PI / (8.0 * ps.abs());
    if h > max_h {
        return Err(Error::Undersampled { p, spacing: u.length_to_si(h), max_spacing: u.length_to_si(max_h) });
    }
    let n2 = 2.0 * (qs - rho.x[0]) / h;
    let n = n2.round();
    let last = 2 * (rho.len() - 1);
    if (n2 - n).abs() > 1e-6 || n < 0.0 || n as usize > last {
        return Err(Error::OffLattice { q });
    }
    let n = n as usize;
    // pairs (i, j) with x_i + x_j = 2q, y = x_i − x_j
    let (mut i, mut j) = (n.div_ceil(2), n / 2);
    let len = rho.len();
    let dy = 2.0 * h;
    let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
    while i < len {
        let y = rho.x[i] - rho.x[j];
        let phase = Complex64::from_polar(dy, -ps * y);
        for a in Spin::BOTH {
            for b in Spin::BOTH {
                acc[a.index()][b.index()] += rho.rho(a, b, i, j) * phase;
                if i != j {
                    // the mirrored term (j, i) has −y
                    acc[a.index()][b.index()] += rho.rho(a, b, j, i) * phase.conj();
                }
            }
        }
        if j == 0 {
            break;
        }
        i += 1;
        j -= 1;
    }
    let entries = acc.map(|row| row.map(|v| v / (2.0 * PI)));
    Ok(WignerMatrix { entries })
}

/// [`wigner_numeric`] over a whole grid given in SI (q on the half-lattice).
pub fn wigner_numeric_field(rho: &DensityMatrixField, q: &[f64], p: &[f64]) -> Result<WignerMatrixField> {
    let u = rho.units;
    let grid = PhaseGrid {
        q: q.iter().map(|&x| u.length_to_scaled(x)).collect(),
        p: p.iter().map(|&x| u.momentum_to_scaled(x)).collect(),
    };
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut values = Vec::with_capacity(grid.len());
    for &qq in q {
        for &pp in p {
            values.push(wigner_numeric(rho, qq, pp)?);
        }
    }
    Ok(WignerMatrixField { t: rho.t, units: u, grid, values, source: FieldSource::Sampled, pixels: None })
}
