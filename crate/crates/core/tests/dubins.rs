mod common;

use std::f64::consts::{PI, TAU};

use dubnet_core::geom::normalize_angle;
use dubnet_core::{cs_edge, dubins_csc, CircleChoice, DirectedPoint, Error, Point2};
use proptest::prelude::*;

fn dp(x: f64, y: f64, heading: f64) -> DirectedPoint {
    DirectedPoint::new(Point2::new(x, y), heading)
}

/// Drives a unit-radius car: turn at full lock until the target is dead
/// ahead, then go straight.
fn simulated_cs_length(start: &DirectedPoint, side: CircleChoice, target: Point2, h: f64) -> f64 {
    let turn = side.sign();
    let (mut p, mut heading, mut travelled) = (start.position, start.heading, 0.0);
    let aligned = |p: Point2, heading: f64| {
        let to = target - p;
        Point2::unit(heading).cross(to) * turn <= 0.0 && Point2::unit(heading).dot(to) > 0.0
    };
    while !aligned(p, heading) && travelled < TAU {
        // Exact motion along a unit circle for one step.
        let next = heading + turn * h;
        p += (Point2::unit(next).perp() - Point2::unit(heading).perp()) * (-turn);
        heading = next;
        travelled += h;
    }
    travelled + p.distance(target)
}

#[test]
fn cs_edge_examples() {
    let e = cs_edge(&dp(0.0, 0.0, 0.0), CircleChoice::Left, Point2::new(5.0, 0.0)).unwrap();
    assert!(e.arc_sweep.abs() < 1e-12 && (e.length() - 5.0).abs() < 1e-12);

    let e = cs_edge(&dp(0.0, 0.0, 0.0), CircleChoice::Left, Point2::new(0.0, 2.0)).unwrap();
    assert!((e.arc_sweep - PI).abs() < 1e-10);
    assert!(e.segment_length < 1e-6);
    assert!((e.length() - PI).abs() < 1e-6);

    let start = dp(0.0, 0.0, 0.0);
    let e = cs_edge(&start, CircleChoice::Right, Point2::new(4.0, -3.0)).unwrap();
    let sim = simulated_cs_length(&start, CircleChoice::Right, Point2::new(4.0, -3.0), 1e-6);
    assert!((e.length() - sim).abs() < 1e-5, "{} vs {sim}", e.length());

    assert!(matches!(
        cs_edge(&start, CircleChoice::Left, Point2::new(0.0, 1.5)),
        Err(Error::TargetInsideCircle)
    ));
}

#[test]
fn cs_edge_integrated_length() {
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let start = DirectedPoint::new(common::random_point(&mut rng, 3.0), common::random_heading(&mut rng));
        let target = common::random_point(&mut rng, 8.0);
        for side in CircleChoice::BOTH {
            let Ok(e) = cs_edge(&start, side, target) else { continue };
            let n = (e.length() / 1e-4).ceil() as usize;
            let mut total = 0.0;
            let mut prev = e.point_at(0.0);
            for k in 1..=n {
                let p = e.point_at(e.length() * k as f64 / n as f64);
                total += p.distance(prev);
                prev = p;
            }
            assert!((total - e.length()).abs() < 1e-6, "{total} vs {}", e.length());
            assert!(e.point_at(e.length()).distance(target) < 1e-10);
        }
    }
}

/// A CSC path by brute force: walk the departure point around the first
/// circle in 0.001 steps, find where the departing tangent ray touches the
/// second circle with the right orientation, and refine by bisection.
fn brute_force_csc(a: &DirectedPoint, b: &DirectedPoint) -> Option<f64> {
    let arrive = b.reversed();
    let mut best: Option<f64> = None;
    for sa in CircleChoice::BOTH {
        for sb in CircleChoice::BOTH {
            let ca = a.dubins_circle(sa).centre;
            let cb = arrive.dubins_circle(sb).centre;
            let (ta, tb) = (sa.sign(), sb.sign());
            // Departure point after turning through `phi` and its heading.
            let depart = |phi: f64| {
                let heading = a.heading + ta * phi;
                let p = ca - Point2::unit(heading).perp() * ta;
                (p, heading)
            };
            // Zero when the ray is tangent to the arrival circle on the
            // side matching its orientation.
            let g = |phi: f64| {
                let (p, heading) = depart(phi);
                Point2::unit(heading).cross(cb - p) - tb
            };
            let mut prev = g(0.0);
            let steps = (TAU / 1e-3).ceil() as usize;
            for k in 1..=steps {
                let phi = (k as f64 * 1e-3).min(TAU);
                let cur = g(phi);
                if prev == 0.0 || prev.signum() != cur.signum() {
                    let (mut lo, mut hi) = (phi - 1e-3, phi);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        if g(mid).signum() == g(lo).signum() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    let phi = 0.5 * (lo + hi);
                    let (p, heading) = depart(phi);
                    let dir = Point2::unit(heading);
                    let along = dir.dot(cb - p);
                    if along >= -1e-9 {
                        let end_turn = normalize_angle(tb * (arrive.heading - heading));
                        let end_turn = if TAU - end_turn < 1e-9 { 0.0 } else { end_turn };
                        let start_turn = if TAU - phi < 1e-9 { 0.0 } else { phi };
                        let len = start_turn + along + end_turn;
                        best = Some(best.map_or(len, |b: f64| b.min(len)));
                    }
                }
                prev = cur;
            }
        }
    }
    best
}

#[test]
fn csc_matches_brute_force() {
    let a = dp(0.0, 0.0, 0.0);
    let b = dp(10.0, 5.0, 0.0);
    let exact = dubins_csc(&a, &b).unwrap().length;
    let brute = brute_force_csc(&a, &b).unwrap();
    assert!((exact - brute).abs() < 1e-8, "{exact} vs {brute}");

    let mut rng = common::rng(12);
    for _ in 0..20 {
        let a = DirectedPoint::new(common::random_point(&mut rng, 10.0), common::random_heading(&mut rng));
        let b = DirectedPoint::new(common::random_point(&mut rng, 10.0), common::random_heading(&mut rng));
        if a.position.distance(b.position) < 4.0 {
            continue;
        }
        let exact = dubins_csc(&a, &b).unwrap().length;
        let brute = brute_force_csc(&a, &b).unwrap();
        assert!((exact - brute).abs() < 1e-8, "{exact} vs {brute}");
    }
}

#[test]
fn csc_examples() {
    let straight = dubins_csc(&dp(0.0, 0.0, 0.0), &dp(10.0, 0.0, PI)).unwrap();
    assert!((straight.length - 10.0).abs() < 1e-12);
    let same = dp(2.0, 3.0, 1.0);
    let identity = dubins_csc(&same, &same.reversed()).unwrap();
    assert!(identity.length.abs() < 1e-12);
}

fn arb_dp(range: f64) -> impl Strategy<Value = DirectedPoint> {
    (-range..range, -range..range, -PI..PI).prop_map(|(x, y, h)| dp(x, y, h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn separated_pairs_have_all_four_candidates(a in arb_dp(20.0), b in arb_dp(20.0)) {
        prop_assume!(a.position.distance(b.position) >= 4.0);
        prop_assert_eq!(dubnet_core::dubins::csc_candidates(&a, &b).len(), 4);
        prop_assert!(dubins_csc(&a, &b).is_ok());
    }

    #[test]
    fn reversal_symmetry(a in arb_dp(20.0), b in arb_dp(20.0)) {
        if let (Ok(ab), Ok(ba)) = (dubins_csc(&a, &b), dubins_csc(&b, &a)) {
            prop_assert!((ab.length - ba.length).abs() < 1e-10);
        }
    }

    #[test]
    fn rigid_motion_invariance(a in arb_dp(20.0), b in arb_dp(20.0), angle in -PI..PI, dx in -50.0..50.0, dy in -50.0..50.0) {
        let shift = Point2::new(dx, dy);
        let m = |p: &DirectedPoint| DirectedPoint::new(p.position.rotated(angle) + shift, p.heading + angle);
        if let Ok(ab) = dubins_csc(&a, &b) {
            let moved = dubins_csc(&m(&a), &m(&b)).unwrap();
            prop_assert!((ab.length - moved.length).abs() < 1e-9);
        }
    }

    #[test]
    fn never_shorter_than_euclidean(a in arb_dp(20.0), b in arb_dp(20.0)) {
        if let Ok(ab) = dubins_csc(&a, &b) {
            prop_assert!(ab.length >= a.position.distance(b.position) - 1e-12);
        }
    }

    #[test]
    fn edge_is_c1_at_tangent_point(start in arb_dp(3.0), tx in -8.0..8.0, ty in -8.0..8.0, left in any::<bool>()) {
        let side = if left { CircleChoice::Left } else { CircleChoice::Right };
        if let Ok(e) = cs_edge(&start, side, Point2::new(tx, ty)) {
            let r = e.tangent_point - e.circle.centre;
            let arc_dir = r.perp() * side.sign();
            prop_assert!((r.norm() - 1.0).abs() < 1e-10);
            prop_assert!(arc_dir.distance(e.segment_direction()) < 1e-9);
        }
    }
}
