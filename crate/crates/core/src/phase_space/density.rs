use num_complex::Complex64;

use crate::dynamics::{AmplitudeMode, Spin, SpinorWavepacket};
use crate::error::{domain, Error, Result};
use crate::params::UnitSystem;

/// ρ_αβ(x, x′) = c_α φ_α(x) (c_β φ_β(x′))* on a position grid.
///
/// The state is pure, so only the weighted amplitudes are stored; entries are
/// formed on demand. Positions and amplitudes are in scaled units.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixField {
    /// s
    pub t: f64,
    pub units: UnitSystem,
    pub x: Vec<f64>,
    amplitudes: [Vec<Complex64>; 2],
}

/// Sample the density matrix of `state` on the SI grid `grid` (strictly increasing).
pub fn density_matrix(state: &SpinorWavepacket, grid: &[f64]) -> Result<DensityMatrixField> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("grid must be finite and strictly increasing"));
    }
    let units = state.params.units();
    let amplitudes = Spin::BOTH
        .map(|s| grid.iter().map(|&x| state.amplitude(s, x, AmplitudeMode::Weighted) * units.length.sqrt()).collect());
    Ok(DensityMatrixField {
        t: state.t,
        units,
        x: grid.iter().map(|&x| units.length_to_scaled(x)).collect(),
        amplitudes,
    })
}

impl DensityMatrixField {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// c_α φ_α(x_i) in scaled units.
    pub fn amplitude(&self, a: Spin, i: usize) -> Complex64 {
        self.amplitudes[a.index()][i]
    }

    /// ρ_αβ(x_i, x_j) in scaled units (1/σ).
    pub fn rho(&self, a: Spin, b: Spin, i: usize, j: usize) -> Complex64 {
        self.amplitude(a, i) * self.amplitude(b, j).conj()
    }

    /// Trapezoid weights of the (possibly non-uniform) grid.
    fn weights(&self) -> Vec<f64> {
        let n = self.x.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.x[i] - self.x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { self.x[i + 1] - self.x[i] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect()
    }

    /// Σ_α ∫ρ_αα(x,x)dx.
    pub fn trace(&self) -> f64 {
        let w = self.weights();
        Spin::BOTH.iter().map(|&s| (0..self.len()).map(|i| w[i] * self.rho(s, s, i, i).re).sum::<f64>()).sum()
    }

    /// Tr ρ² = Σ_αβ ∬ ρ_αβ(x,x′) ρ_βα(x′,x) dx dx′ over the grid.
    pub fn purity(&self) -> f64 {
        let w = self.weights();
        let n = self.len();
        let mut total = 0.0;
        for a in Spin::BOTH {
            for b in Spin::BOTH {
                for i in 0..n {
                    let mut row = Complex64::new(0.0, 0.0);
                    for (j, wj) in w.iter().enumerate() {
                        row += wj * self.rho(a, b, i, j) * self.rho(b, a, j, i);
                    }
                    total += w[i] * row.re;
                }
            }
        }
        total
    }

    /// Largest |ρ_αβ(x_i,x_j) − ρ_βα(x_j,x_i)*|.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for a in Spin::BOTH {
            for b in Spin::BOTH {
                for i in 0..n {
                    for j in 0..n {
                        worst = worst.max((self.rho(a, b, i, j) - self.rho(b, a, j, i).conj()).norm());
                    }
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_in_field;
    use crate::params::PhysicalParams;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn rejects_bad_grids() {
        let s = evolve_in_field(&PhysicalParams::silver(), 1e-6).unwrap();
        assert!(matches!(density_matrix(&s, &[]), Err(Error::EmptyGrid)));
        assert!(density_matrix(&s, &[0.0, 0.0]).is_err());
        assert!(density_matrix(&s, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn single_branch_state() {
        let p = PhysicalParams::silver().with_amplitudes(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let s = evolve_in_field(&p, 0.0).unwrap();
        let rho = density_matrix(&s, &grid(-3e-6, 3e-6, 41)).unwrap();
        for i in 0..41 {
            for j in 0..41 {
                assert_eq!(rho.rho(Spin::Minus, Spin::Minus, i, j), Complex64::new(0.0, 0.0));
                assert_eq!(rho.rho(Spin::Plus, Spin::Minus, i, j), Complex64::new(0.0, 0.0));
                let (x, y) = (rho.x[i], rho.x[j]);
                let want = (-(x * x + y * y) / 2.0).exp() / std::f64::consts::PI.sqrt();
                assert!((rho.rho(Spin::Plus, Spin::Plus, i, j).re - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hermitian_trace_one_and_pure() {
        let s = evolve_in_field(&PhysicalParams::silver(), 1e-5).unwrap();
        // irregular grid
        let mut g: Vec<f64> = grid(-7e-6, 7e-6, 301);
        for (i, x) in g.iter_mut().enumerate() {
            *x += 1e-8 * ((i * 7919 % 13) as f64 / 13.0 - 0.5);
        }
        let rho = density_matrix(&s, &g).unwrap();
        assert!(rho.hermiticity_error() < 1e-12);
        assert!((rho.trace() - 1.0).abs() < 1e-6);
        assert!((rho.purity() - 1.0).abs() < 1e-6);
    }
}
