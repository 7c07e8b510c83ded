#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use dubnet_core::{DirectedPoint, Point2, Point3, Terminal3, Weights};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weights in `[0.6, 1]` satisfying the strict triangle condition.
pub fn weights(rng: &mut ChaCha8Rng) -> Weights {
    loop {
        let w = [0; 3].map(|_| rng.gen_range(0.6..=1.0));
        if let Ok(w) = Weights::new(w) {
            return w;
        }
    }
}

/// Bearings around the origin with consecutive gaps of `90..150` degrees.
fn spread_bearings(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let g1 = rng.gen_range(90.0..150.0f64).to_radians();
        let g2 = rng.gen_range(90.0..150.0f64).to_radians();
        let g3 = TAU - g1 - g2;
        if (90f64.to_radians()..150f64.to_radians()).contains(&g3) {
            let b0 = rng.gen_range(0.0..TAU);
            return [b0, b0 + g1, b0 + g1 + g2];
        }
    }
}

/// Three terminals at distance 8 to 15 from the origin, well spread in
/// bearing, with uniform random headings. Pairwise separation is at least 8.
pub fn planar_instance(rng: &mut ChaCha8Rng) -> [DirectedPoint; 3] {
    loop {
        let b = spread_bearings(rng);
        let t = b.map(|b| {
            let r = rng.gen_range(8.0..15.0);
            DirectedPoint::new(Point2::unit(b) * r, rng.gen_range(0.0..TAU))
        });
        if separation(&t) >= 8.0 {
            return t;
        }
    }
}

pub fn separation(t: &[DirectedPoint; 3]) -> f64 {
    let d = |i: usize, j: usize| t[i].position.distance(t[j].position);
    d(0, 1).min(d(0, 2)).min(d(1, 2))
}

/// A planar instance lifted to random heights whose spread is at most
/// `0.3` of the horizontal spread.
pub fn spatial_instance(rng: &mut ChaCha8Rng) -> [Terminal3; 3] {
    let t = planar_instance(rng);
    let horizontal = horizontal_spread(&t);
    let spread = rng.gen_range(0.0..0.3) * horizontal;
    let base = rng.gen_range(-5.0..5.0);
    let mut z = [0; 3].map(|_| rng.gen_range(0.0..1.0f64));
    let (lo, hi) = (z.iter().cloned().fold(f64::INFINITY, f64::min), z.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    for v in &mut z {
        *v = base + if hi > lo { (*v - lo) / (hi - lo) * spread } else { 0.0 };
    }
    [0, 1, 2].map(|i| Terminal3::new(Point3::new(t[i].position.x, t[i].position.y, z[i]), t[i].heading))
}

pub fn horizontal_spread(t: &[DirectedPoint; 3]) -> f64 {
    let d = |i: usize, j: usize| t[i].position.distance(t[j].position);
    d(0, 1).max(d(0, 2)).max(d(1, 2))
}

pub fn random_direction(rng: &mut ChaCha8Rng) -> Point2 {
    Point2::unit(rng.gen_range(0.0..TAU))
}

pub fn random_point(rng: &mut ChaCha8Rng, half_width: f64) -> Point2 {
    Point2::new(rng.gen_range(-half_width..half_width), rng.gen_range(-half_width..half_width))
}

pub fn random_heading(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}
