mod common;

use std::f64::consts::PI;

use dubnet_core::spatial::{edge_gradients, fit_plane, junction_height, lift_point, weights_from_gradients};
use dubnet_core::{
    solve_planar, solve_spatial, spatial_oracle_best, Point2, Point3, SolveConfig, SpatialNetwork, Terminal3,
};

fn solved(seed: u64, count: usize) -> Vec<([Terminal3; 3], SpatialNetwork)> {
    let mut rng = common::rng(seed);
    let cfg = SolveConfig::default();
    (0..count)
        .map(|_| {
            let t = common::spatial_instance(&mut rng);
            let net = solve_spatial(&t, &cfg).unwrap();
            (t, net)
        })
        .collect()
}

/// One more planar solve and lift starting from the converged weights.
fn extra_iteration(t: &[Terminal3; 3], net: &SpatialNetwork) -> (f64, Point2) {
    let projected = t.map(|x| x.projected());
    let cfg = SolveConfig { topology: Some(net.planar_network.choices), ..Default::default() };
    let planar = solve_planar(&projected, net.weights, &cfg).unwrap();
    let j = planar.junction;
    let lifted = [0, 1, 2].map(|i| lift_point(&planar.edges[i], &t[i], j).unwrap());
    let q = lifted.map(|l| Point3::new(l.planar.x, l.planar.y, l.height));
    let plane = fit_plane(q[0], q[1], q[2]).unwrap();
    let h = junction_height(&plane, j).unwrap();
    let g = edge_gradients(&lifted, j, h).unwrap();
    let length = (0..3).map(|i| planar.edges[i].length() * (1.0 + g[i] * g[i]).sqrt()).sum();
    (length, j)
}

#[test]
fn converged_network_is_a_fixed_point() {
    let eps = SolveConfig::default().epsilon;
    for (t, net) in solved(31, 100) {
        let (length, j) = extra_iteration(&t, &net);
        assert!((length - net.total_3d_length).abs() < eps, "length moved {:.3e}", length - net.total_3d_length);
        assert!(j.distance(net.planar_network.junction) < eps.sqrt());
    }
}

#[test]
fn projected_gradient_vanishes() {
    for (_, net) in solved(32, 100) {
        let u = net.planar_network.outward_directions();
        let w = net.weights.0;
        let sum = (0..3).fold(Point2::ORIGIN, |acc, i| acc + u[i] * w[i]);
        assert!(sum.norm() <= 1e-6, "residual {:.3e}", sum.norm());
    }
}

#[test]
fn length_accounting() {
    for (_, net) in solved(33, 100) {
        let edges = net.planar_network.edges;
        let by_gradient: f64 = (0..3).map(|i| edges[i].length() * (1.0 + net.gradients[i].powi(2)).sqrt()).sum();
        let by_weight: f64 = (0..3).map(|i| edges[i].length() / net.weights.0[i]).sum();
        assert!((by_gradient - net.total_3d_length).abs() < 1e-9);
        assert!((by_weight - net.total_3d_length).abs() < 1e-9);
        assert_eq!(weights_from_gradients(&net.gradients), net.weights);
    }
}

#[test]
fn tail_is_monotone() {
    for (_, net) in solved(34, 100) {
        assert_eq!(net.history.len(), net.iterations);
        let tail = &net.history[net.history.len().saturating_sub(5)..];
        for pair in tail.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-9, "{:?}", net.history);
        }
        assert_eq!(*net.history.last().unwrap(), net.total_3d_length);
    }
}

#[test]
fn lifted_points_unroll_the_arcs() {
    for (t, net) in solved(35, 100) {
        let j = net.planar_network.junction;
        for i in 0..3 {
            let e = &net.planar_network.edges[i];
            let l = &net.lifted[i];
            let along = l.planar - e.tangent_point;
            assert!((along.norm() - l.arc_angle).abs() < 1e-9);
            if along.norm() > 1e-9 {
                assert!(along.normalized().distance((e.tangent_point - j).normalized()) < 1e-9);
            }
            assert_eq!(l.height, t[i].position.z);
            if !l.arc_exceeds_half_turn {
                assert!((l.arc_angle - e.arc_length).abs() < 1e-9);
            }
            assert!(net.plane.residual(Point3::new(l.planar.x, l.planar.y, l.height)).abs() < 1e-9 * net.plane.normal.norm());
        }
        assert!(net.plane.residual(net.junction()).abs() < 1e-9 * net.plane.normal.norm());
    }
}

#[test]
fn tilted_symmetric_instance_matches_oracle() {
    let t = [90.0f64, 210.0, 330.0].map(|b| {
        let b = b.to_radians();
        let p = Point2::unit(b) * 12.0;
        Terminal3::new(Point3::new(p.x, p.y, 0.15 * p.x + 0.1 * p.y), b + PI - 0.4)
    });
    let net = solve_spatial(&t, &SolveConfig::default()).unwrap();
    let oracle = spatial_oracle_best(&t).unwrap();
    assert!(oracle.converged);
    assert!(
        (net.total_3d_length - oracle.length).abs() < 1e-5,
        "{} vs {}",
        net.total_3d_length,
        oracle.length
    );
}

#[test]
fn coplanar_terminals_reduce_to_planar() {
    let mut rng = common::rng(36);
    for _ in 0..50 {
        let t = common::planar_instance(&mut rng);
        let lifted = t.map(|d| Terminal3::new(Point3::new(d.position.x, d.position.y, 3.0), d.heading));
        let net = solve_spatial(&lifted, &SolveConfig::default()).unwrap();
        let planar = solve_planar(&t, dubnet_core::Weights::EQUAL, &SolveConfig::default()).unwrap();
        assert!((net.total_3d_length - planar.weighted_length).abs() < 1e-9);
        assert!(net.gradients.iter().all(|g| *g < 1e-12));
    }
}

#[test]
fn scale_invariance() {
    let mut rng = common::rng(37);
    for _ in 0..30 {
        let t = common::spatial_instance(&mut rng);
        let rho = 3.5;
        let big = t.map(|x| {
            let p = x.position;
            Terminal3::new(Point3::new(p.x * rho, p.y * rho, p.z * rho), x.heading)
        });
        let a = solve_spatial(&t, &SolveConfig::default()).unwrap();
        let b = solve_spatial(&big, &SolveConfig { rho, ..Default::default() }).unwrap();
        assert!((b.total_3d_length - rho * a.total_3d_length).abs() < 1e-9 * b.total_3d_length);
        assert_eq!(a.iterations, b.iterations);
    }
}
