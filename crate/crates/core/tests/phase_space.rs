use num_complex::Complex64;
use sterngerlach::phase_space::{
    coarse_grain, density_matrix, project_spin_direction, wigner_analytic, wigner_field, wigner_numeric_field,
    CoarsePixelSpec, NormPolicy, PhaseGrid,
};
use sterngerlach::{evolve_free_after_field, evolve_in_field, PhysicalParams, Spin};

#[test]
fn numeric_field_matches_analytic_on_a_small_grid() {
    let params = PhysicalParams::silver();
    let u = params.units();
    let state = evolve_in_field(&params, 5e-6).unwrap();
    let h = 0.01;
    let x: Vec<f64> = (0..=2400).map(|i| u.length_to_si(-12.0 + h * i as f64)).collect();
    let rho = density_matrix(&state, &x).unwrap();
    assert!((rho.trace() - 1.0).abs() < 1e-10);
    assert!((rho.purity() - 1.0).abs() < 1e-8);
    let q: Vec<f64> = (0..9).map(|j| u.length_to_si(-2.0 + 0.5 * j as f64)).collect();
    let p: Vec<f64> = (0..9).map(|j| u.momentum_to_si(-36.0 + 9.0 * j as f64)).collect();
    let field = wigner_numeric_field(&rho, &q, &p).unwrap();
    for (iq, &qq) in q.iter().enumerate() {
        for (ip, &pp) in p.iter().enumerate() {
            let a = wigner_analytic(&state, qq, pp).unwrap();
            let n = field.at(iq, ip);
            for s in Spin::BOTH {
                for t in Spin::BOTH {
                    assert!((a.get(s, t) - n.get(s, t)).norm() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn coarse_field_is_diagonal_and_nonnegative_late() {
    let params = PhysicalParams::silver();
    let state = evolve_in_field(&params, 3e-5).unwrap();
    let pix = CoarsePixelSpec::default_screen();
    let (_, dp) = pix.scaled_for(&params);
    let grid = PhaseGrid::uniform((-6.0, 6.0), (-2.0 * dp, 2.0 * dp), 49, 21).unwrap();
    let raw = wigner_field(&state, grid).unwrap();
    let coarse = coarse_grain(&raw, &pix).unwrap();
    let max_pp = coarse.values.iter().map(|w| w.pp()).fold(0.0, f64::max);
    let max_pm = coarse.values.iter().map(|w| w.pm().norm()).fold(0.0, f64::max);
    assert!(max_pm < 1e-3 * max_pp, "{max_pm} vs {max_pp}");
    for w in &coarse.values {
        assert!(w.pp() >= -1e-12 && w.mm() >= -1e-12);
        assert_eq!(w.hermiticity_error(), 0.0);
    }
}

#[test]
fn coarse_field_keeps_interference_early() {
    let params = PhysicalParams::silver();
    let state = evolve_in_field(&params, 1e-7).unwrap();
    // pixels well below the oscillation scale leave the coherence intact
    let pix = CoarsePixelSpec::new(1e-9, 1e-30).unwrap();
    let grid = PhaseGrid { q: vec![0.0], p: vec![0.0] };
    let coarse = coarse_grain(&wigner_field(&state, grid).unwrap(), &pix).unwrap();
    let w = coarse.values[0];
    assert!(w.pm().norm() > 0.9 * w.pp());
}

#[test]
fn projection_along_x_at_origin() {
    let params = PhysicalParams::silver();
    let state = evolve_in_field(&params, 1e-6).unwrap();
    let w = wigner_analytic(&state, 0.0, 0.0).unwrap();
    let wx = project_spin_direction(&w, [1.0, 0.0, 0.0], NormPolicy::Strict).unwrap();
    assert!((wx - (0.5 * w.trace() + w.pm().re)).abs() < 1e-15);
    let wy = project_spin_direction(&w, [0.0, 2.0, 0.0], NormPolicy::Normalize).unwrap();
    assert!((wy - w.pp()).abs() < 1e-15);
    assert!(project_spin_direction(&w, [0.0, 2.0, 0.0], NormPolicy::Strict).is_err());
}

#[test]
fn post_field_field_stays_hermitian_and_normalized() {
    let params = PhysicalParams::silver().with_amplitudes(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
    let state = evolve_free_after_field(&params, 1e-5, 2e-5).unwrap();
    let pm = Spin::BOTH.map(|s| state.component(s).mean_momentum().abs()).iter().fold(0.0f64, |a, b| a.max(*b)) + 8.0;
    let qm = Spin::BOTH.map(|s| state.component(s).center().abs()).iter().fold(0.0f64, |a, b| a.max(*b)) + 9.0;
    let grid = PhaseGrid::uniform((-qm, qm), (-pm, pm), 361, 961).unwrap();
    let field = wigner_field(&state, grid).unwrap();
    assert!(field.max_hermiticity_error() < 1e-15);
    let total = field.grid_integral();
    assert!((total[0][0].re - 0.36).abs() < 1e-6, "{}", total[0][0]);
    assert!((total[1][1].re - 0.64).abs() < 1e-6, "{}", total[1][1]);
}
