use sterngerlach::oracle::{verify_closed_forms, VerifyOptions};
use sterngerlach::{derive_scales, PhysicalParams};

#[test]
fn grid_evolution_matches_closed_forms() {
    let params = PhysicalParams::silver();
    let s = derive_scales(&params).unwrap();
    let times = [0.1 * s.tau3, s.tau3, 0.01 * s.tau2];
    let report = verify_closed_forms(&params, &times, VerifyOptions::default()).unwrap();
    for r in &report.rows {
        eprintln!(
            "t={:.4e} levels={:?} order={:?} overlap grid {:.8} exact {:.8} drift {:e} boundary {:e}",
            r.t, r.levels, r.order, r.overlap_grid, r.overlap_exact, r.norm_drift, r.boundary_mass
        );
    }
    assert!(report.passed(), "{:?}", report.failures());
}

#[test]
fn overlap_at_tau3_is_e_to_minus_four() {
    let params = PhysicalParams::silver();
    let s = derive_scales(&params).unwrap();
    let report = verify_closed_forms(&params, &[s.tau3], VerifyOptions::default()).unwrap();
    let r = &report.rows[0];
    // A(τ3) = e^{-1} would need the packets to overlap four times more in the exponent
    assert!((r.overlap_grid - (-4.0f64).exp()).abs() < 1e-3, "{}", r.overlap_grid);
    assert!((r.overlap_grid - (-1.0f64).exp()).abs() > 0.3);
}

#[test]
fn coarse_step_fails_verification() {
    let params = PhysicalParams::silver();
    let s = derive_scales(&params).unwrap();
    let opts = VerifyOptions { base_dt: 2e-3, max_levels: 2, ..Default::default() };
    let report = verify_closed_forms(&params, &[0.01 * s.tau2], opts).unwrap();
    assert!(!report.passed());
    assert!(!report.rows[0].warnings.is_empty());
}
