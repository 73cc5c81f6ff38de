use cr_umbilic::ambient::Point4;
use cr_umbilic::ellipsoid::{
    b0_cubic, ba_cubic, case43_cubic_root, cubic_unique_positive_root, gamma_curve, locus_curves, special_locus_b0,
    special_locus_ba, torus_chart, Branch, CurveKind, EllipsoidParams, DEFAULT_CURVE_SAMPLES,
};
use cr_umbilic::invariants::invariants_at;
use cr_umbilic::verify::umbilic_sweep;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn root(c: [f64; 4]) -> f64 {
    cubic_unique_positive_root(c[0], c[1], c[2], c[3]).unwrap()
}

#[test]
fn b0_roots_match_numpy() {
    // numpy.roots, positive real root
    for (a, s0) in [(0.1, 0.03993746067619825), (0.5, 0.10470816899251055), (0.9, 0.11769086103293254)] {
        let s = root(b0_cubic(a));
        assert!((s - s0).abs() <= 1e-14, "a = {a}: {s} vs {s0}");
        assert!(s > 0.0 && s < a / 2.0);
    }
}

#[test]
fn ba_roots_match_numpy() {
    for (a, s0) in [(0.3, 2.7523677859211784), (0.5, 4.160645070942443), (0.8, 6.173688412326138)] {
        let s = root(ba_cubic(a));
        assert!((s - s0).abs() <= 1e-13 * s0, "a = {a}: {s} vs {s0}");
    }
    assert!((root(ba_cubic(0.0)) - 1.0).abs() <= 1e-14);
}

#[test]
fn torus_chart_lands_on_ellipsoid() {
    let pr = EllipsoidParams::new(0.6, 0.25).unwrap();
    for k in 0..50 {
        let (s, t) = (0.13 * k as f64, 0.71 * k as f64);
        assert!(pr.rho(&torus_chart(&pr, s, t)).abs() < 1e-14);
    }
    let p = torus_chart(&pr, std::f64::consts::FRAC_PI_2, 0.0);
    assert!((p.w.re - 1.0 / 1.25f64.sqrt()).abs() < 1e-15 && p.z.norm() < 1e-16);
}

#[test]
fn gamma_is_umbilical() {
    for (a, b) in [(0.3, 0.1), (0.6, 0.45), (0.9, 0.2)] {
        let pr = EllipsoidParams::new(a, b).unwrap();
        for br in [Branch::Plus, Branch::Minus] {
            for k in 0..90 {
                let p = gamma_curve(&pr, br, 0.07 * k as f64).unwrap();
                assert!(pr.rho(&p).abs() <= 1e-12);
                assert!(pr.contractions(&p).unwrap().rzz_ll.norm() <= 1e-12);
                assert!(invariants_at(&pr.poly(), &p).unwrap().q11.norm() <= 1e-9);
            }
        }
    }
}

#[test]
fn special_curves_are_umbilical() {
    for a in [0.2, 0.5, 0.8] {
        for curves in [special_locus_b0(a).unwrap(), special_locus_ba(a).unwrap()] {
            for c in &curves {
                for p in c.sample(DEFAULT_CURVE_SAMPLES) {
                    assert!(c.params.rho(&p).abs() <= 1e-12);
                    assert!(c.defining_residual(&p).unwrap() <= 1e-10, "{:?} a = {a}", c.kind);
                    assert!(invariants_at(&c.params.poly(), &p).unwrap().q11.norm() <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn locus_families() {
    let kinds = |a: f64, b: f64| -> Vec<CurveKind> {
        locus_curves(&EllipsoidParams::new(a, b).unwrap()).unwrap().iter().map(|c| c.kind).collect()
    };
    assert_eq!(kinds(0.5, 0.0), [CurveKind::SpecialB0, CurveKind::SpecialB0, CurveKind::AxisCircle]);
    assert_eq!(kinds(0.5, 0.5), [CurveKind::SpecialBA; 4]);
    assert_eq!(kinds(0.5, 0.2), [CurveKind::GammaPlus, CurveKind::GammaMinus]);
    assert!(locus_curves(&EllipsoidParams::new(0.0, 0.0).unwrap()).is_err());
    assert!(EllipsoidParams::new(0.3, 0.5).is_err());
    assert!(EllipsoidParams::new(1.0, 0.5).is_err());
    assert!(EllipsoidParams::new(f64::NAN, 0.0).is_err());
}

#[test]
fn ba_gamma_curves_coincide() {
    let a = 0.4;
    let curves = special_locus_ba(a).unwrap();
    assert_eq!(curves.iter().filter(|c| c.coincides_with_gamma()).count(), 2);
    for c in curves.iter().filter(|c| !c.coincides_with_gamma()) {
        let tau = c.tau.unwrap();
        assert!((tau * tau - c.s0.unwrap()).abs() < 1e-14);
    }
}

#[test]
fn seed_root_tends_to_ba_root() {
    // the seed-plane root approaches −s₀ linearly in the gap a − b
    for a in [0.3, 0.5, 0.8] {
        let s0 = root(ba_cubic(a));
        for d in [1e-4, 1e-6] {
            let tau = case43_cubic_root(&EllipsoidParams::new(a, a - d).unwrap()).unwrap();
            assert!((tau + s0).abs() <= 10.0 * d, "a = {a}, d = {d}: {tau} vs {}", -s0);
        }
    }
}

#[test]
fn sweep_finds_only_known_curves() {
    let mut rng = StdRng::seed_from_u64(7);
    for (a, b) in [(0.5, 0.0), (0.3, 0.3)] {
        let pr = EllipsoidParams::new(a, b).unwrap();
        let curves = locus_curves(&pr).unwrap();
        let rep = umbilic_sweep(&pr, &curves, 300, &mut rng);
        assert!(rep.found >= 10, "({a}, {b}): {} found", rep.found);
        assert!(rep.max_distance <= 1e-3, "({a}, {b}): {}", rep.max_distance);
    }
}

#[test]
fn umbilical_points_are_symmetric() {
    let pr = EllipsoidParams::new(0.5, 0.0).unwrap();
    for c in special_locus_b0(0.5).unwrap() {
        for p in c.sample(36) {
            let q: Point4 = -p;
            assert!(invariants_at(&pr.poly(), &q).unwrap().q11.norm() <= 1e-9);
        }
    }
}
