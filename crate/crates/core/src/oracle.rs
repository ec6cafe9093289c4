//! Brute-force check of the closed forms: both spin components are stepped on
//! a periodic grid with Strang splitting (half kick, spectral drift, half kick).
//!
//! Everything here is in scaled units. Nothing in the main simulation path
//! depends on this module.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::dynamics::Spin;
use crate::error::{domain, Error, Result};
use crate::gaussian::GaussianAmplitude;
use crate::information::{overlap_factor, OverlapModel};
use crate::params::{derive_scales, PhysicalParams};

/// Points per shortest wavelength the grid must resolve.
const POINTS_PER_WAVELENGTH: f64 = 8.0;
/// Momentum margin (in ħ/σ) on top of the kick |F|t.
const MOMENTUM_MARGIN: f64 = 8.0;

/// Both spin components on x_j = −L + j·dx, j < N.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub x: Vec<f64>,
    pub dx: f64,
    pub half_width: f64,
    pub t: f64,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl GridState {
    /// Both components set to the normalized initial packet.
    pub fn initial(n: usize, half_width: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::EmptyGrid);
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(domain(format!("half width {half_width} must be > 0")));
        }
        let dx = 2.0 * half_width / n as f64;
        let x: Vec<f64> = (0..n).map(|j| -half_width + j as f64 * dx).collect();
        let g = GaussianAmplitude::initial();
        let psi: Vec<Complex64> = x.iter().map(|&x| g.eval(x)).collect();
        Ok(Self { x, dx, half_width, t: 0.0, plus: psi.clone(), minus: psi })
    }

    pub fn component(&self, spin: Spin) -> &[Complex64] {
        match spin {
            Spin::Plus => &self.plus,
            Spin::Minus => &self.minus,
        }
    }

    fn component_mut(&mut self, spin: Spin) -> &mut Vec<Complex64> {
        match spin {
            Spin::Plus => &mut self.plus,
            Spin::Minus => &mut self.minus,
        }
    }

    /// Σ|φ|²·dx.
    pub fn norm(&self, spin: Spin) -> f64 {
        self.component(spin).iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx
    }

    /// Probability within `width` of either edge of the periodic box.
    pub fn boundary_mass(&self, spin: Spin, width: f64) -> f64 {
        self.x
            .iter()
            .zip(self.component(spin))
            .filter(|(x, _)| x.abs() > self.half_width - width)
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            * self.dx
    }

    /// ⟨φ₋|φ₊⟩ by the rectangle rule.
    pub fn overlap(&self) -> Complex64 {
        self.minus.iter().zip(&self.plus).map(|(m, p)| m.conj() * p).sum::<Complex64>() * self.dx
    }

    pub fn mean_position(&self, spin: Spin) -> f64 {
        let c = self.component(spin);
        self.x.iter().zip(c).map(|(x, z)| x * z.norm_sqr()).sum::<f64>() * self.dx / self.norm(spin)
    }

    pub fn position_variance(&self, spin: Spin) -> f64 {
        let m = self.mean_position(spin);
        let c = self.component(spin);
        self.x.iter().zip(c).map(|(x, z)| (x - m).powi(2) * z.norm_sqr()).sum::<f64>() * self.dx / self.norm(spin)
    }

    /// ⟨−i d/dx⟩ evaluated spectrally.
    pub fn mean_momentum(&self, spin: Spin) -> f64 {
        let n = self.x.len();
        let mut buf = self.component(spin).to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let k = wavenumbers(n, self.dx);
        let (num, den) = buf.iter().zip(&k).fold((0.0, 0.0), |(a, b), (z, k)| (a + k * z.norm_sqr(), b + z.norm_sqr()));
        num / den
    }
}

fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * PI / (n as f64 * dx);
    (0..n).map(|j| if j < n.div_ceil(2) { j as f64 * dk } else { (j as f64 - n as f64) * dk }).collect()
}

/// Largest grid spacing that resolves momenta up to |F|·t_end plus a margin.
pub fn required_dx(force: f64, t_end: f64) -> f64 {
    2.0 * PI / (POINTS_PER_WAVELENGTH * (force.abs() * t_end + MOMENTUM_MARGIN))
}

/// Precomputed Strang step for a fixed grid, dt and scaled force.
pub struct SplitOperator {
    dt: f64,
    half_kick: [Vec<Complex64>; 2],
    drift: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl SplitOperator {
    pub fn new(grid: &GridState, dt: f64, force: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(domain(format!("dt = {dt} must be > 0")));
        }
        let n = grid.x.len();
        let half_kick = Spin::BOTH.map(|s| {
            // potential +F·x on the + branch
            grid.x.iter().map(|&x| Complex64::from_polar(1.0, -s.sign() * force * x * dt / 2.0)).collect()
        });
        let scale = 1.0 / n as f64;
        let drift =
            wavenumbers(n, grid.dx).into_iter().map(|k| Complex64::from_polar(scale, -k * k * dt / 2.0)).collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Ok(Self { dt, half_kick, drift, forward, inverse, scratch: vec![Complex64::new(0.0, 0.0); len] })
    }

    pub fn step_component(&mut self, spin: Spin, psi: &mut [Complex64]) {
        let kick = &self.half_kick[spin.index()];
        psi.iter_mut().zip(kick).for_each(|(z, k)| *z *= k);
        self.forward.process_with_scratch(psi, &mut self.scratch);
        psi.iter_mut().zip(&self.drift).for_each(|(z, d)| *z *= d);
        self.inverse.process_with_scratch(psi, &mut self.scratch);
        psi.iter_mut().zip(kick).for_each(|(z, k)| *z *= k);
    }

    pub fn step(&mut self, gs: &mut GridState) {
        for s in Spin::BOTH {
            let mut psi = std::mem::take(gs.component_mut(s));
            self.step_component(s, &mut psi);
            *gs.component_mut(s) = psi;
        }
        gs.t += self.dt;
    }
}

/// One Strang step of length `dt` (scaled) under the force of `params`.
pub fn step_split_operator(gs: &GridState, dt: f64, params: &PhysicalParams) -> Result<GridState> {
    let f = params.scaled_force();
    let need = required_dx(f, gs.t + dt);
    if gs.dx > need {
        return Err(Error::Resolution { dx: gs.dx, required_dx: need });
    }
    let mut op = SplitOperator::new(gs, dt, f)?;
    let mut next = gs.clone();
    op.step(&mut next);
    Ok(next)
}

/// Norm bookkeeping of a run, relative to the starting norm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormDrift {
    /// Largest change over a single step.
    pub per_step: f64,
    /// Change between the first and last state.
    pub total: f64,
}

/// Evolve from the initial packet to `t` in `steps` equal steps.
pub fn run(params: &PhysicalParams, n: usize, half_width: f64, t: f64, steps: usize) -> Result<(GridState, NormDrift)> {
    let mut gs = GridState::initial(n, half_width)?;
    if steps == 0 || t == 0.0 {
        return Ok((gs, NormDrift::default()));
    }
    let f = params.scaled_force();
    let need = required_dx(f, t);
    if gs.dx > need {
        return Err(Error::Resolution { dx: gs.dx, required_dx: need });
    }
    let dt = t / steps as f64;
    let mut op = SplitOperator::new(&gs, dt, f)?;
    let n0 = Spin::BOTH.map(|s| gs.norm(s));
    let mut prev = n0;
    let mut drift = NormDrift::default();
    for _ in 0..steps {
        op.step(&mut gs);
        for s in Spin::BOTH {
            let (i, now) = (s.index(), gs.norm(s));
            drift.per_step = drift.per_step.max((now - prev[i]).abs() / n0[i]);
            prev[i] = now;
        }
    }
    for s in Spin::BOTH {
        drift.total = drift.total.max((prev[s.index()] - n0[s.index()]).abs() / n0[s.index()]);
    }
    gs.t = t;
    Ok((gs, drift))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub points: usize,
    /// Coarsest step (scaled); step counts start at ⌈t/dt⌉ and double.
    pub base_dt: f64,
    pub min_levels: usize,
    pub max_levels: usize,
    /// Stop refining once the L2 error is below this.
    pub target: f64,
    /// Packet standard deviations of padding beyond the drift.
    pub padding: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { points: 4096, base_dt: 1e-5, min_levels: 2, max_levels: 6, target: 1e-6, padding: 12.0 }
    }
}

/// Pass thresholds of a verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub l2: f64,
    pub overlap: f64,
    pub norm_drift: f64,
    pub boundary_mass: f64,
    /// Accepted range of the observed convergence order.
    pub order: (f64, f64),
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { l2: 1e-6, overlap: 1e-5, norm_drift: 1e-12, boundary_mass: 1e-10, order: (1.5, 2.5) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    /// s
    pub t: f64,
    pub l2_err: [f64; 2],
    pub linf_err: [f64; 2],
    /// Largest |Δ|φ|²|.
    pub density_linf: [f64; 2],
    pub overlap_grid: f64,
    pub overlap_exact: f64,
    pub overlap_dev: f64,
    /// Largest relative norm change in one step.
    pub norm_drift: f64,
    /// Relative norm change over the whole run.
    pub norm_drift_total: f64,
    pub boundary_mass: f64,
    /// (steps, max L2 error) per refinement level.
    pub levels: Vec<(usize, f64)>,
    pub order: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub tolerances: Tolerances,
}

impl VerifyReport {
    /// Named failing checks; empty when everything passed.
    pub fn failures(&self) -> Vec<String> {
        let tol = &self.tolerances;
        let mut out = Vec::new();
        for r in &self.rows {
            let l2 = r.l2_err[0].max(r.l2_err[1]);
            if !(l2 < tol.l2) {
                out.push(format!("t={:e}: l2_err {l2:e} >= {:e}", r.t, tol.l2));
            }
            if !(r.overlap_dev < tol.overlap) {
                out.push(format!("t={:e}: overlap_dev {:e} >= {:e}", r.t, r.overlap_dev, tol.overlap));
            }
            if !(r.norm_drift <= tol.norm_drift) {
                out.push(format!("t={:e}: norm_drift {:e} > {:e}", r.t, r.norm_drift, tol.norm_drift));
            }
            if !(r.boundary_mass < tol.boundary_mass) {
                out.push(format!("t={:e}: boundary_mass {:e}", r.t, r.boundary_mass));
            }
            if let Some(p) = r.order {
                if !(p >= tol.order.0 && p <= tol.order.1) {
                    out.push(format!(
                        "t={:e}: convergence order {p:.3} outside [{}, {}]",
                        r.t, tol.order.0, tol.order.1
                    ));
                }
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// `t,l2_err_plus,l2_err_minus,overlap_dev,norm_drift` with t in seconds.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "t,l2_err_plus,l2_err_minus,overlap_dev,norm_drift")?;
        for r in &self.rows {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.t, r.l2_err[0], r.l2_err[1], r.overlap_dev, r.norm_drift
            )?;
        }
        Ok(())
    }
}

struct Compared {
    l2: [f64; 2],
    linf: [f64; 2],
    dens: [f64; 2],
}

fn compare(gs: &GridState, f: f64) -> Compared {
    let mut c = Compared { l2: [0.0; 2], linf: [0.0; 2], dens: [0.0; 2] };
    for s in Spin::BOTH {
        let g = GaussianAmplitude::in_field(s.acceleration(f), gs.t);
        let (mut num, mut den) = (0.0, 0.0);
        for (&x, &z) in gs.x.iter().zip(gs.component(s)) {
            let e = g.eval(x);
            let d = (z - e).norm();
            num += d * d;
            den += e.norm_sqr();
            let i = s.index();
            c.linf[i] = c.linf[i].max(d);
            c.dens[i] = c.dens[i].max((z.norm_sqr() - e.norm_sqr()).abs());
        }
        c.l2[s.index()] = (num / den).sqrt();
    }
    c
}

/// Compare grid evolution with the closed forms at each time in `times` (s).
pub fn verify_closed_forms(params: &PhysicalParams, times: &[f64], opts: VerifyOptions) -> Result<VerifyReport> {
    let scales = derive_scales(params)?;
    let u = params.units();
    let f = params.scaled_force();
    let mut rows = Vec::with_capacity(times.len());
    for &t_si in times {
        if !(t_si.is_finite() && t_si >= 0.0) {
            return Err(domain(format!("t = {t_si} must be finite and >= 0")));
        }
        let t = u.time_to_scaled(t_si);
        let exact = overlap_factor(t_si, &scales, OverlapModel::Exact);
        let spread = (1.0 + t * t).sqrt() / std::f64::consts::SQRT_2;
        let half_width = 0.5 * f.abs() * t * t + opts.padding * spread;
        let mut warnings = Vec::new();
        if t == 0.0 {
            let gs = GridState::initial(opts.points, half_width)?;
            let c = compare(&gs, f);
            rows.push(VerifyRow {
                t: t_si,
                l2_err: c.l2,
                linf_err: c.linf,
                density_linf: c.dens,
                overlap_grid: gs.overlap().norm(),
                overlap_exact: exact,
                overlap_dev: (gs.overlap().norm() - exact).abs(),
                norm_drift: 0.0,
                norm_drift_total: 0.0,
                boundary_mass: Spin::BOTH.map(|s| gs.boundary_mass(s, 2.0 * spread)).into_iter().fold(0.0, f64::max),
                levels: vec![(0, c.l2[0].max(c.l2[1]))],
                order: None,
                warnings,
            });
            continue;
        }
        let need = required_dx(f, t);
        let dx = 2.0 * half_width / opts.points as f64;
        if dx > need {
            return Err(Error::Resolution { dx: u.length_to_si(dx), required_dx: u.length_to_si(need) });
        }
        let n0 = ((t / opts.base_dt).ceil() as usize).max(1);
        let mut levels = Vec::new();
        let mut last = None;
        for k in 0..opts.max_levels.max(1) {
            let steps = n0 << k;
            let (gs, drift) = run(params, opts.points, half_width, t, steps)?;
            let c = compare(&gs, f);
            let err = c.l2[0].max(c.l2[1]);
            levels.push((steps, err));
            last = Some((gs, drift, c));
            if levels.len() >= opts.min_levels && err < opts.target {
                break;
            }
        }
        let (gs, drift, c) = last.expect("at least one level");
        let order = match levels.as_slice() {
            [.., (_, a), (_, b)] if *b > 0.0 => Some((a / b).log2()),
            _ => None,
        };
        if levels.last().map(|l| l.1).unwrap_or(0.0) >= opts.target {
            warnings.push(format!(
                "not converged after {} levels (last error {:e})",
                levels.len(),
                levels.last().unwrap().1
            ));
        }
        let boundary = Spin::BOTH.map(|s| gs.boundary_mass(s, 2.0 * spread)).into_iter().fold(0.0, f64::max);
        let ov = gs.overlap().norm();
        rows.push(VerifyRow {
            t: t_si,
            l2_err: c.l2,
            linf_err: c.linf,
            density_linf: c.dens,
            overlap_grid: ov,
            overlap_exact: exact,
            overlap_dev: (ov - exact).abs(),
            norm_drift: drift.per_step,
            norm_drift_total: drift.total,
            boundary_mass: boundary,
            levels,
            order,
            warnings,
        });
    }
    Ok(VerifyReport { rows, tolerances: Tolerances::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_spreading_law() {
        let p = PhysicalParams::silver().with_force(1e-40).unwrap();
        let t = 0.8;
        let (gs, drift) = run(&p, 1024, 30.0, t, 200).unwrap();
        for s in Spin::BOTH {
            assert!((gs.position_variance(s) - (1.0 + t * t) / 2.0).abs() < 1e-8);
        }
        assert!(drift.per_step < 1e-14 && drift.total < 1e-13);
    }

    #[test]
    fn tiny_step_barely_changes_state() {
        let p = PhysicalParams::silver();
        let gs = GridState::initial(1024, 12.0).unwrap();
        let next = step_split_operator(&gs, 1e-9, &p).unwrap();
        let d: f64 = (gs.plus.iter().zip(&next.plus).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * gs.dx).sqrt();
        // O(dt): ‖Hφ‖ is dominated by |F|·‖xφ‖ ≈ 0.7|F|
        assert!(d < 1e-9 * p.scaled_force(), "{d}");
        assert_eq!(next.t, 1e-9);
    }

    #[test]
    fn resolution_is_enforced() {
        let p = PhysicalParams::silver();
        let gs = GridState::initial(256, 20.0).unwrap();
        assert!(matches!(step_split_operator(&gs, 1e-3, &p), Err(Error::Resolution { .. })));
        assert!(step_split_operator(&gs, 0.0, &p).is_err());
    }

    #[test]
    fn spin_blocks_evolve_independently() {
        let p = PhysicalParams::silver();
        let mut joint = GridState::initial(512, 10.0).unwrap();
        let mut alone = joint.clone();
        alone.minus.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let mut op = SplitOperator::new(&joint, 1e-5, p.scaled_force()).unwrap();
        for _ in 0..50 {
            op.step(&mut joint);
            op.step(&mut alone);
        }
        assert_eq!(joint.plus, alone.plus);
        assert!(alone.minus.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn ehrenfest_kick() {
        let p = PhysicalParams::silver();
        let f = p.scaled_force();
        let t = 2e-3;
        let (gs, _) = run(&p, 4096, 14.0, t, 400).unwrap();
        for s in Spin::BOTH {
            let want = -s.sign() * f * t;
            assert!((gs.mean_momentum(s) - want).abs() < 1e-8 * want.abs(), "{s:?}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let p = PhysicalParams::silver();
        let scales = derive_scales(&p).unwrap();
        let opts = VerifyOptions { points: 2048, max_levels: 3, min_levels: 3, target: 0.0, ..Default::default() };
        let r = verify_closed_forms(&p, &[2.0 * scales.tau3], opts).unwrap();
        let row = &r.rows[0];
        let p_obs = row.order.unwrap();
        assert!((p_obs - 2.0).abs() < 0.5, "{:?}", row.levels);
        assert!(row.norm_drift <= 1e-12);
    }

    #[test]
    fn zero_time_row_is_exact() {
        let p = PhysicalParams::silver();
        let r = verify_closed_forms(&p, &[0.0], VerifyOptions::default()).unwrap();
        assert_eq!(r.rows[0].l2_err, [0.0, 0.0]);
        assert!(r.rows[0].overlap_dev < 1e-12);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("t,l2_err_plus,l2_err_minus,overlap_dev,norm_drift\n"));
    }
}
