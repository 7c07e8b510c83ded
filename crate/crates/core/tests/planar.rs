mod common;

use std::f64::consts::PI;

use dubnet_core::planar::construct_best;
use dubnet_core::{
    angles_from_weights, planar_oracle_best, solve_planar, solve_planar_report, DirectedPoint, DubinsNetwork, Point2,
    SolveConfig, Weights,
};
use proptest::prelude::*;

fn parallel(a: Point2, b: Point2) -> f64 {
    a.normalized().cross(b.normalized()).abs()
}

#[test]
fn construction_points_are_consistent() {
    let mut rng = common::rng(21);
    let mut checked = 0;
    for _ in 0..200 {
        let t = common::planar_instance(&mut rng);
        let w = common::weights(&mut rng);
        let report = solve_planar_report(&t, w, &SolveConfig::default()).unwrap();
        for cand in &report.candidates {
            let Ok((net, cons)) = &cand.outcome else { continue };
            for i in 0..2 {
                let centre = net.edges[i].circle.centre;
                let seg = net.junction - net.edges[i].tangent_point;
                if seg.norm() < 1e-6 || cons.s.distance(centre) < 1e-6 {
                    continue;
                }
                let err = parallel(cons.s - centre, seg);
                assert!(err < 1e-9, "edge {i}: cross {err:.3e}");
            }
            assert!((cons.melzak_point.distance(cons.auxiliary.centre) - cons.auxiliary.radius).abs() < 1e-9);
            assert!((cons.s.distance(net.junction) - cons.junction_radius).abs() < 1e-8);
            checked += 1;
        }
    }
    assert!(checked > 500, "only {checked} candidates checked");
}

#[test]
fn winner_is_a_local_minimum() {
    let mut rng = common::rng(22);
    for _ in 0..200 {
        let t = common::planar_instance(&mut rng);
        let w = common::weights(&mut rng);
        let net = solve_planar(&t, w, &SolveConfig::default()).unwrap();
        for k in 0..16 {
            let dir = Point2::unit(k as f64 * PI / 8.0);
            let Ok(moved) = DubinsNetwork::from_junction(&t, net.choices, w, net.junction + dir * 1e-3) else {
                continue;
            };
            assert!(moved.weighted_length >= net.weighted_length - 1e-9);
        }
    }
}

#[test]
fn winner_is_minimum_over_candidates() {
    let mut rng = common::rng(23);
    for _ in 0..100 {
        let t = common::planar_instance(&mut rng);
        let w = common::weights(&mut rng);
        let report = solve_planar_report(&t, w, &SolveConfig::default()).unwrap();
        let (best, _) = report.winner().unwrap();
        let min = report
            .candidates
            .iter()
            .filter_map(|c| c.outcome.as_ref().ok())
            .map(|(n, _)| n.weighted_length)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best.weighted_length, min);
        assert_eq!(report.candidates.len(), 8);
    }
}

#[test]
fn symmetric_instance_matches_oracle() {
    let t = [90.0f64, 210.0, 330.0].map(|b| {
        let b = b.to_radians();
        DirectedPoint::new(Point2::unit(b) * 12.0, b + PI - 0.4)
    });
    let net = solve_planar(&t, Weights::EQUAL, &SolveConfig::default()).unwrap();
    let oracle = planar_oracle_best(&t, Weights::EQUAL).unwrap();
    assert!(oracle.converged);
    assert!((net.weighted_length - oracle.length).abs() < 1e-8, "{} vs {}", net.weighted_length, oracle.length);
    assert!(net.junction.norm() < 1e-8);
}

#[test]
fn forced_topology_reproduces_its_candidate() {
    let mut rng = common::rng(24);
    for _ in 0..50 {
        let t = common::planar_instance(&mut rng);
        let w = common::weights(&mut rng);
        let angles = angles_from_weights(&w).unwrap();
        let full = solve_planar_report(&t, w, &SolveConfig::default()).unwrap();
        for cand in &full.candidates {
            let cfg = SolveConfig { topology: Some(cand.choices), ..Default::default() };
            let forced = solve_planar(&t, w, &cfg);
            match (&cand.outcome, forced) {
                (Ok((a, _)), Ok(b)) => assert_eq!(a.weighted_length, b.weighted_length),
                (Err(_), Err(_)) => {}
                (a, b) => panic!("mismatch {:?} vs {:?}", a.as_ref().map(|x| x.0.weighted_length), b.map(|n| n.weighted_length)),
            }
            let direct = construct_best(&t, cand.choices, w, &angles).ok().map(|(n, _)| n.weighted_length);
            assert_eq!(direct, cand.outcome.as_ref().ok().map(|(n, _)| n.weighted_length));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scale_invariance(seed in any::<u64>(), rho in 0.1..10.0f64) {
        let mut rng = common::rng(seed);
        let t = common::planar_instance(&mut rng);
        let w = common::weights(&mut rng);
        let big = t.map(|d| DirectedPoint::new(d.position * rho, d.heading));
        let unit = solve_planar(&t, w, &SolveConfig::default()).unwrap();
        let scaled = solve_planar(&big, w, &SolveConfig { rho, ..Default::default() }).unwrap();
        let rel = (scaled.weighted_length - rho * unit.weighted_length).abs() / scaled.weighted_length;
        prop_assert!(rel < 1e-9, "relative error {rel:.3e}");
        prop_assert!(scaled.junction.distance(unit.junction * rho) < 1e-8 * rho);
        prop_assert_eq!(scaled.choices, unit.choices);
    }

    #[test]
    fn rotation_invariance(seed in any::<u64>(), angle in -PI..PI) {
        let mut rng = common::rng(seed);
        let t = common::planar_instance(&mut rng);
        let w = common::weights(&mut rng);
        let turned = t.map(|d| DirectedPoint::new(d.position.rotated(angle), d.heading + angle));
        let a = solve_planar(&t, w, &SolveConfig::default()).unwrap();
        let b = solve_planar(&turned, w, &SolveConfig::default()).unwrap();
        prop_assert!((a.weighted_length - b.weighted_length).abs() < 1e-8 * a.weighted_length);
    }
}
