use kkhecke::boundary::suite::identity_suite;
use kkhecke::boundary::{
    harmonic_measure_density, hyperbolic_distance, poisson_kernel, random_ball_point, sample_harmonic_measure,
    u_functions, visual_metric, BallPoint, BoundaryPoint, MoebiusMap,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[test]
fn hand_evaluations() {
    let x = BallPoint::<f64>::new(vec![0.5, 0.0, 0.0]).unwrap();
    let xi = BoundaryPoint::<f64>::new(vec![1.0, 0.0, 0.0]).unwrap();
    assert!((poisson_kernel(&x, &xi) - 3.0).abs() < 1e-14);
    assert!((hyperbolic_distance(&x, &BallPoint::origin(2)) - 3f64.ln()).abs() < 1e-14);
    assert_eq!(BallPoint::<f64>::origin(2).rho(), 0.0);
    let o = BallPoint::<f64>::origin(2);
    let u = u_functions(&o, &xi);
    assert_eq!(u, xi.coords().to_vec());
    assert_eq!(visual_metric(&x, &xi, &xi), 0.0);
    assert_eq!(harmonic_measure_density(&o, &xi), 1.0);
}

#[test]
fn guard_band_rejects_boundary_inputs() {
    assert!(BallPoint::<f64>::new(vec![1.0 - 1e-13, 0.0]).is_err());
    assert!(BallPoint::<f64>::new(vec![1.0 - 1e-9, 0.0]).is_ok());
    assert!(BoundaryPoint::<f64>::new(vec![1.0 + 1e-9, 0.0]).is_err());
}

#[test]
fn moebius_scaling_rule_and_sphere_preservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let g = MoebiusMap::<f64>::random(2, 0.8, &mut rng);
        let x: BallPoint = random_ball_point(2, 0.9, &mut rng);
        let y: BallPoint = random_ball_point(2, 0.9, &mut rng);
        let (gx, gy) = (g.apply_raw(x.coords()), g.apply_raw(y.coords()));
        let lhs = dist(&gx, &gy);
        let rhs = (g.conformal_factor(x.coords()) * g.conformal_factor(y.coords())).sqrt() * dist(x.coords(), y.coords());
        assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0));
        assert!(gx.iter().map(|c| c * c).sum::<f64>() < 1.0);
        let xi = BoundaryPoint::<f64>::random(2, &mut rng);
        let gxi = g.apply_raw(xi.coords());
        assert!((gxi.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs() < 1e-10);
        let d0 = hyperbolic_distance(&x, &y);
        let d1 = hyperbolic_distance(&g.apply(&x).unwrap(), &g.apply(&y).unwrap());
        assert!((d0 - d1).abs() <= 1e-9 * d0.max(1.0));
    }
}

#[test]
fn distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..2000 {
        let p: Vec<BallPoint> = (0..3).map(|_| random_ball_point(2, 0.95, &mut rng)).collect();
        let (ab, bc, ac) = (
            hyperbolic_distance(&p[0], &p[1]),
            hyperbolic_distance(&p[1], &p[2]),
            hyperbolic_distance(&p[0], &p[2]),
        );
        assert!((ab - hyperbolic_distance(&p[1], &p[0])).abs() < 1e-9 * ab.max(1.0));
        assert!(ac <= ab + bc + 1e-9);
    }
}

#[test]
fn identities_on_many_samples() {
    let r = identity_suite(2, 100_000, 7).unwrap();
    assert!(r.poisson_origin_exact);
    assert!(r.poisson_transform_max < 1e-9, "{}", r.poisson_transform_max);
    assert!(r.visual_invariance_max < 1e-9, "{}", r.visual_invariance_max);
    assert!(r.u_norm_max < 1e-10, "{}", r.u_norm_max);
    assert!(r.u_metric_max < 1e-9, "{}", r.u_metric_max);
    assert_eq!(r.triangle_violations, 0);
    assert!((r.harmonic_mass.value - 1.0).abs() < 3.0 * r.harmonic_mass.stderr);
    let c = identity_suite(1, 20_000, 8).unwrap();
    assert!(c.passes(1e-9, 1e-10));
}

#[test]
fn harmonic_measure_pushforward() {
    // int f(g xi) d nu_{gx}(g xi) = int f d nu_x, both sides by sampling nu_0
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let g = MoebiusMap::<f64>::random(2, 0.6, &mut rng);
    let x: BallPoint = random_ball_point(2, 0.5, &mut rng);
    let gx = g.apply(&x).unwrap();
    let f = |p: &[f64]| p[0] * p[0] + 0.5 * p[2];
    let gi = g.inverse();
    let n = 100_000;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        let (xi, w) = sample_harmonic_measure(&x, &mut rng);
        a.push(w * f(xi.coords()));
        // integrand on the image side, pulled back through g
        let (eta, w2) = sample_harmonic_measure(&gx, &mut rng);
        b.push(w2 * f(gi.apply_boundary(&eta).coords()));
    }
    let ea = kkhecke::boundary::MonteCarloEstimate::from_draws(&a, 13);
    let eb = kkhecke::boundary::MonteCarloEstimate::from_draws(&b, 13);
    assert!(ea.z_score(&eb) < 3.0, "{ea:?} {eb:?}");
}

#[test]
fn narrow_float_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let g = MoebiusMap::<f32>::random(2, 0.5, &mut rng);
        let x: BallPoint<f32> = random_ball_point(2, 0.5, &mut rng);
        let y = g.inverse().apply(&g.apply(&x).unwrap()).unwrap();
        assert!(x.coords().iter().zip(y.coords()).all(|(a, b)| (a - b).abs() < 1e-4));
    }
}

proptest! {
    #[test]
    fn visual_metric_invariance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = MoebiusMap::<f64>::random(2, 0.8, &mut rng);
        let x: BallPoint = random_ball_point(2, 0.9, &mut rng);
        let xi = BoundaryPoint::<f64>::random(2, &mut rng);
        let eta = BoundaryPoint::<f64>::random(2, &mut rng);
        let d = visual_metric(&x, &xi, &eta);
        let dg = visual_metric(&g.apply(&x).unwrap(), &g.apply_boundary(&xi), &g.apply_boundary(&eta));
        prop_assert!((d - dg).abs() <= 1e-9 * d.max(1.0));
        prop_assert!((visual_metric(&x, &eta, &xi) - d).abs() <= 1e-12 * d.max(1.0));
    }

    #[test]
    fn u_vector_is_unit(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: BallPoint = random_ball_point(3, 0.9, &mut rng);
        let xi = BoundaryPoint::<f64>::random(3, &mut rng);
        let s: f64 = u_functions(&x, &xi).iter().map(|c| c * c).sum();
        prop_assert!((s - 1.0).abs() < 1e-10);
    }
}
