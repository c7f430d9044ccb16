//! Seeded inputs shared by the benchmarks.

use helly_core::constructions::random::{random_h_family, random_lattice_family, random_point, random_polytope, RandomShape};
use helly_core::{Family, HPolytope};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random polytope in dimension `d` with `cuts` extra facets.
pub fn polytope(seed: u64, d: usize, cuts: usize) -> HPolytope {
    let mut r = rng(seed);
    let center = random_point(&mut r, d, -1.0, 1.0, 6);
    random_polytope(&mut r, &center, &RandomShape { cuts, ..RandomShape::default() }).expect("valid shape")
}

pub fn family(seed: u64, d: usize, n: usize) -> Family {
    let shape = RandomShape { min_radius: 0.35, max_radius: 1.5, cuts: 1, ..RandomShape::default() };
    random_h_family(&mut rng(seed), d, n, &shape).expect("valid shape")
}

pub fn lattice_family(seed: u64, d: usize, n: usize) -> Family {
    random_lattice_family(&mut rng(seed), d, n, &RandomShape::lattice()).expect("valid shape")
}
