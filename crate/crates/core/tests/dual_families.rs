//! Cross-family duality checks: every dual construction for every generator
//! must certify against the a = 1 duality condition, and the algebraic
//! identities behind the shift-combination constructions must hold
//! numerically.

use gaborkit::windows::exp_bspline_by_convolution;
use gaborkit::{
    bspline, canonical_dual, certify, duality_residual, frame_operator_apply,
    normalize_exp_bspline_centered, BenchConfig, DualKind, ExpSplineParams, GeneratorKind, Grid,
    Lattice, SampledSignal, Window,
};

const STEP: f64 = 1.0 / 8192.0;

fn lat() -> Lattice {
    Lattice { a: 1.0, b: 0.2 }
}

fn generators() -> Vec<Window> {
    vec![
        bspline(2).unwrap(),
        bspline(3).unwrap(),
        normalize_exp_bspline_centered(1.0).unwrap(),
    ]
}

#[test]
fn every_dual_family_certifies_for_every_generator() {
    let config = BenchConfig::default();
    for g in generators() {
        for dk in DualKind::ALL {
            let (dual, meta) =
                gaborkit::bench::build_certified_dual(&g, dk, &config).unwrap_or_else(|e| {
                    panic!("building {dk} for {} failed: {e}", g.label());
                });
            let residual = meta.duality_residual.unwrap();
            assert!(
                residual < 1e-5,
                "{} / {dk}: residual {residual}",
                g.label()
            );
            // closed-form pairs certify at roundoff level
            if matches!(dk, DualKind::K | DualKind::H) {
                assert!(
                    residual < 1e-10,
                    "{} / {dk}: closed-form residual {residual}",
                    g.label()
                );
            }
            assert!(dual.support_len() > 0.0);
        }
    }
}

#[test]
fn duality_residual_is_symmetric_in_its_arguments() {
    let g = bspline(2).unwrap();
    let k = gaborkit::symmetric_dual(&g, 2, 0.2, None).unwrap();
    let forward = certify(&g, &k, lat(), 1e-3).unwrap();
    let backward = certify(&k, &g, lat(), 1e-3).unwrap();
    assert!(forward < 1e-10 && backward < 1e-10, "{forward} vs {backward}");
}

#[test]
fn frame_operator_inverts_the_canonical_dual() {
    // S applied to S^{-1} g returns g.
    for g in generators() {
        let dual = canonical_dual(&g, lat(), STEP).unwrap();
        let (lo, hi) = dual.support();
        let grid = Grid::aligned_cover(lo, hi, STEP).unwrap();
        let as_signal =
            SampledSignal::new(grid, grid.points().map(|x| dual.eval(x)).collect()).unwrap();
        let back = frame_operator_apply(&as_signal, &g, lat()).unwrap();
        let mut sup: f64 = 0.0;
        for (x, v) in grid.points().zip(&back.values) {
            sup = sup.max((v - g.eval(x)).abs());
        }
        assert!(sup < 1e-10, "{}: S S^-1 g deviates by {sup}", g.label());
    }
}

#[test]
fn translate_correlations_are_symmetric_and_partition_unity() {
    // g_n(x) = sum_m g(x+m) g(x+m+n) satisfies g_{-n} = g_n and sum_n g_n = 1.
    for g in generators() {
        let order = g.support_len().round() as i64;
        let m_range = -(order - 1)..=(order - 1);
        let g_n = |n: i64, x: f64| -> f64 {
            m_range
                .clone()
                .map(|m| g.eval(x + m as f64) * g.eval(x + (m + n) as f64))
                .sum()
        };
        let grid = Grid::over(0.0, 1.0, 1001).unwrap();
        for x in grid.points() {
            for n in 1..order {
                let diff = (g_n(-n, x) - g_n(n, x)).abs();
                assert!(diff < 1e-12, "{}: correlation asymmetry {diff} at ({n}, {x})", g.label());
            }
            let total: f64 = (-(order - 1)..=(order - 1)).map(|n| g_n(n, x)).sum();
            assert!(
                (total - 1.0).abs() < 1e-10,
                "{}: correlation sum {total} at {x}",
                g.label()
            );
        }
    }
}

#[test]
fn residuals_are_stable_under_grid_refinement() {
    // halving the quadrature step must not move certified residuals by more
    // than an order of magnitude around the tolerance
    let g = bspline(2).unwrap();
    let coarse = canonical_dual(&g, lat(), STEP * 2.0).unwrap();
    let fine = canonical_dual(&g, lat(), STEP).unwrap();
    let r_coarse = duality_residual(&g, &coarse, lat(), STEP * 2.0, 2).unwrap();
    let r_fine = duality_residual(&g, &fine, lat(), STEP, 2).unwrap();
    assert!(r_coarse < 1e-5 && r_fine < 1e-5, "{r_coarse} vs {r_fine}");
}

#[test]
fn explicit_formula_tracks_the_convolution_construction_for_odd_tuples() {
    // one more independent cross-check on an asymmetric rate tuple
    let rates = vec![-1.3, -0.2, 0.4, 1.7];
    let params = ExpSplineParams::new(rates.clone()).unwrap();
    let conv = exp_bspline_by_convolution(&rates).unwrap();
    let grid = Grid::over(-0.5, 4.5, 2001).unwrap();
    for x in grid.points() {
        let explicit = gaborkit::eval_exp_bspline_general(&params, x);
        assert!((explicit - conv.eval(x)).abs() < 1e-12, "mismatch at {x}");
    }
}

#[test]
fn generator_windows_expose_expected_supports() {
    let config = BenchConfig::default();
    for gk in GeneratorKind::ALL {
        let w = gk.window(config.p).unwrap();
        let (lo, hi) = w.support();
        assert!((lo + hi).abs() < 1e-12, "{gk}: support not centered");
        assert!(w.support_len() <= 1.0 / config.lattice.b + 1e-12);
    }
}
