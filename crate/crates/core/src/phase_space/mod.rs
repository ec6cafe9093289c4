//! Spin-resolved density matrices, Wigner matrices and their coarse graining.
//!
//! Wigner values are stored in scaled form ħ·W (dimensionless), with phase
//! space coordinates in units of σ and ħ/σ. [`WignerMatrixField::write_csv`]
//! converts back to SI.

mod coarse;
mod density;
mod wigner;

use std::io::Write;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::gaussian::WignerGaussian;
use crate::params::UnitSystem;
use crate::Spin;

pub use coarse::{coarse_grain, coarse_grain_point, CoarsePixelSpec};
pub use density::{density_matrix, DensityMatrixField};
pub use wigner::{wigner_analytic, wigner_field, wigner_gaussian, wigner_numeric, wigner_numeric_field};

/// 2×2 Wigner matrix at one phase-space point, indexed by [`Spin::index`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WignerMatrix {
    pub entries: [[Complex64; 2]; 2],
}

/// What to do with a direction vector that is not of unit length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormPolicy {
    #[default]
    Strict,
    Normalize,
}

impl WignerMatrix {
    pub fn from_upper(pp: f64, mm: f64, pm: Complex64) -> Self {
        Self { entries: [[Complex64::new(pp, 0.0), pm], [pm.conj(), Complex64::new(mm, 0.0)]] }
    }

    pub fn get(&self, a: Spin, b: Spin) -> Complex64 {
        self.entries[a.index()][b.index()]
    }

    pub fn pp(&self) -> f64 {
        self.entries[0][0].re
    }

    pub fn mm(&self) -> f64 {
        self.entries[1][1].re
    }

    pub fn pm(&self) -> Complex64 {
        self.entries[0][1]
    }

    pub fn trace(&self) -> f64 {
        self.pp() + self.mm()
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let e = &self.entries;
        (e[0][1] - e[1][0].conj()).norm().max(e[0][0].im.abs()).max(e[1][1].im.abs())
    }

    /// Tr[W(𝟙 + n·σ)/2] with Pauli matrices written in the σ_y eigenbasis:
    /// σx = [[0,1],[1,0]], σy = diag(1,−1), σz = [[0,i],[−i,0]].
    pub fn project(&self, n: [f64; 3], policy: NormPolicy) -> Result<f64> {
        let len = n.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(len > 0.0) || !len.is_finite() {
            return Err(domain(format!("direction {n:?} has no length")));
        }
        let n = if (len - 1.0).abs() <= 1e-12 {
            n
        } else {
            match policy {
                NormPolicy::Strict => {
                    return Err(Error::InvalidParameter { name: "n", reason: format!("|n| = {len}, expected 1") })
                }
                NormPolicy::Normalize => n.map(|c| c / len),
            }
        };
        let pm = self.pm();
        Ok(0.5 * self.trace() + 0.5 * n[1] * (self.pp() - self.mm()) + n[0] * pm.re + n[2] * pm.im)
    }
}

/// Tr[W(𝟙 + n·σ)/2]; see [`WignerMatrix::project`].
pub fn project_spin_direction(w: &WignerMatrix, n: [f64; 3], policy: NormPolicy) -> Result<f64> {
    w.project(n, policy)
}

/// Rectangular (q, p) grid in scaled units.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl PhaseGrid {
    pub fn uniform(q: (f64, f64), p: (f64, f64), nq: usize, np: usize) -> Result<Self> {
        if nq == 0 || np == 0 {
            return Err(Error::EmptyGrid);
        }
        Ok(Self { q: linspace(q.0, q.1, nq), p: linspace(p.0, p.1, np) })
    }

    /// Covers both packets and both kicked momenta: q within 10σ beyond the
    /// drift ½|a|t², p within 10(ħ/σ + |F|t).
    pub fn default_for(state: &crate::SpinorWavepacket, nq: usize, np: usize) -> Result<Self> {
        let reach_q = Spin::BOTH.map(|s| state.component(s).center().abs()).into_iter().fold(0.0, f64::max);
        let reach_p = Spin::BOTH.map(|s| state.component(s).mean_momentum().abs()).into_iter().fold(0.0, f64::max);
        let qm = 10.0 + reach_q;
        let pm = 10.0 * (1.0 + reach_p);
        Self::uniform((-qm, qm), (-pm, pm), nq, np)
    }

    pub fn len(&self) -> usize {
        self.q.len() * self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index, q outer.
    pub fn index(&self, iq: usize, ip: usize) -> usize {
        iq * self.p.len() + ip
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.q.iter().flat_map(move |&q| self.p.iter().map(move |&p| (q, p)))
    }
}

/// How a field's values were produced.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSource {
    /// Gaussian closed forms for each entry; coarse graining can be exact.
    Analytic(Box<[[WignerGaussian; 2]; 2]>),
    /// Samples only.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerMatrixField {
    /// s
    pub t: f64,
    pub units: UnitSystem,
    pub grid: PhaseGrid,
    pub values: Vec<WignerMatrix>,
    pub source: FieldSource,
    /// Set once the field has been coarse grained.
    pub pixels: Option<CoarsePixelSpec>,
}

impl WignerMatrixField {
    pub fn at(&self, iq: usize, ip: usize) -> &WignerMatrix {
        &self.values[self.grid.index(iq, ip)]
    }

    /// Σ W·dq·dp per entry (rectangle rule; scaled units).
    pub fn grid_integral(&self) -> [[Complex64; 2]; 2] {
        let cell = step(&self.grid.q) * step(&self.grid.p);
        let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
        for v in &self.values {
            for (a, row) in acc.iter_mut().enumerate() {
                for (b, x) in row.iter_mut().enumerate() {
                    *x += v.entries[a][b] * cell;
                }
            }
        }
        acc
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        self.values.iter().map(WignerMatrix::hermiticity_error).fold(0.0, f64::max)
    }

    /// Write `q,p,W_pp,W_mm,Re_W_pm,Im_W_pm` rows in SI units, q outer.
    ///
    /// With `projection`, a trailing `W_n` column holds Tr[W(𝟙+n·σ)/2].
    pub fn write_csv(&self, mut out: impl Write, projection: Option<[f64; 3]>) -> Result<()> {
        let u = &self.units;
        write!(out, "q,p,W_pp,W_mm,Re_W_pm,Im_W_pm")?;
        if projection.is_some() {
            write!(out, ",W_n")?;
        }
        writeln!(out)?;
        for (iq, &q) in self.grid.q.iter().enumerate() {
            for (ip, &p) in self.grid.p.iter().enumerate() {
                let w = self.at(iq, ip);
                write!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    u.length_to_si(q),
                    u.momentum_to_si(p),
                    u.wigner_to_si(w.pp()),
                    u.wigner_to_si(w.mm()),
                    u.wigner_to_si(w.pm().re),
                    u.wigner_to_si(w.pm().im),
                )?;
                if let Some(n) = projection {
                    write!(out, ",{:.16e}", u.wigner_to_si(w.project(n, NormPolicy::Normalize)?))?;
                }
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Spacing of a uniform axis (1 for a single point).
pub(crate) fn step(axis: &[f64]) -> f64 {
    if axis.len() < 2 {
        1.0
    } else {
        (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64
    }
}

pub(crate) fn check_uniform(axis: &[f64], name: &str) -> Result<f64> {
    if axis.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let h = step(axis);
    if axis.len() > 1 && !(h > 0.0) {
        return Err(domain(format!("{name} axis must be increasing")));
    }
    for (i, x) in axis.iter().enumerate() {
        if (x - (axis[0] + i as f64 * h)).abs() > 1e-9 * h.max(axis[0].abs()) {
            return Err(domain(format!("{name} axis is not uniform at index {i}")));
        }
    }
    Ok(h)
}
