use cr_umbilic::ambient::Point4;
use cr_umbilic::ellipsoid::{beltrami_coefficient, gamma_curve, Branch, EllipsoidParams};
use cr_umbilic::invariants::invariants_at;
use cr_umbilic::tracer::{hausdorff, polyline_distance, trace_variety, trace_variety_on, TraceConfig, TraceSurface, TracedVariety};
use cr_umbilic::verify::{ba_limit_distance, check_trace_invariants, Stat};

fn trace(a: f64, b: f64) -> TracedVariety {
    trace_variety(&EllipsoidParams::new(a, b).unwrap(), &TraceConfig::default()).unwrap()
}

fn curves(v: &TracedVariety) -> Vec<(Vec<Point4>, bool)> {
    v.components.iter().map(|c| (c.points(), c.closed)).collect()
}

#[test]
fn generic_variety_is_two_conjugate_loops() {
    let v = trace(0.5, 0.2);
    assert_eq!(v.components.len(), 2);
    assert!(v.components.iter().all(|c| c.closed));
    let (c0, c1) = (v.components[0].points(), v.components[1].points());
    for p in &c0 {
        assert!(polyline_distance(&p.conj(), &c1, true) < 1e-3);
        assert!(polyline_distance(&-*p, &c0, true) < 1e-3);
    }
}

#[test]
fn vertices_satisfy_the_system() {
    let cfg = TraceConfig::default();
    for (a, b) in [(0.5, 0.2), (0.7, 0.3), (0.4, 0.1)] {
        let v = trace(a, b);
        let mut st = Stat::default();
        check_trace_invariants(&mut st, &v, &cfg);
        assert!(st.passed(), "({a}, {b}): worst {}", st.worst);
        assert!(v.max_residual() <= 1e-8);
    }
}

#[test]
fn vertices_are_umbilical_and_not_spherical() {
    let v = trace(0.4, 0.1);
    let pr = v.params;
    for x in v.vertices().step_by(7) {
        assert!(invariants_at(&pr.poly(), &x.point).unwrap().q11.norm() <= 1e-9);
        assert!(beltrami_coefficient(&x.point, &pr).unwrap().norm() >= 1e-3);
    }
}

#[test]
fn distance_to_gamma() {
    assert!(trace(0.5, 0.2).min_dist_gamma() > 1e-2);
    assert!(trace(0.4, 0.1).min_dist_gamma() > 1e-2);
    // on the seed plane the nearest γ point and the variety are 0.0083491606
    // apart; the minimum over all of 𝒱 can only be smaller
    let v = trace(0.7, 0.3);
    let pr = v.params;
    let d = (0..2880)
        .flat_map(|k| [Branch::Plus, Branch::Minus].map(|br| gamma_curve(&pr, br, k as f64 * std::f64::consts::TAU / 2880.0).unwrap()))
        .map(|g| v.refined_distance(&g))
        .fold(f64::INFINITY, f64::min);
    assert!(d <= 0.008349160642166596 + 1e-9 && d > 0.008, "{d}");
    assert!((v.min_dist_gamma() - d).abs() < 1e-4);
}

#[test]
fn deterministic() {
    assert_eq!(trace(0.5, 0.2), trace(0.5, 0.2));
}

#[test]
fn sphere_trace_matches_ellipsoid_trace() {
    let pr = EllipsoidParams::new(0.5, 0.2).unwrap();
    let cfg = TraceConfig::default();
    let s = trace_variety_on(&pr, &cfg, TraceSurface::UnitSphere).unwrap().scaled_to_ellipsoid().unwrap();
    let e = trace_variety(&pr, &cfg).unwrap();
    assert!(hausdorff(&curves(&s), &curves(&e)) < cfg.step_len);
}

#[test]
fn approaches_ba_locus() {
    let cfg = TraceConfig::default();
    for a in [0.3, 0.5, 0.8] {
        let d = ba_limit_distance(a, 1e-4, &cfg).unwrap();
        assert!(d <= 1e-3, "a = {a}: {d}");
    }
}

#[test]
fn nearly_degenerate_pair_traces() {
    let v = trace(0.5, 0.499);
    assert!(!v.components.is_empty());
    assert!(v.max_residual() <= 1e-8);
}

#[test]
fn rejects_special_and_bad_input() {
    let cfg = TraceConfig::default();
    for (a, b) in [(0.0, 0.0), (0.5, 0.0), (0.5, 0.5)] {
        assert!(trace_variety(&EllipsoidParams::new(a, b).unwrap(), &cfg).is_err());
    }
    let bad = TraceConfig { step_len: -1.0, ..cfg };
    assert!(bad.validate().is_err());
}
