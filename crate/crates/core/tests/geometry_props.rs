use helly_core::constructions::random::{random_point, random_polytope, random_radon_points, RandomShape};
use helly_core::geometry::rational::{int, ratio};
use helly_core::geometry::{
    lp_solve, member, radon_partition, vertices, ConvexBody, HPolytope, LpStatus, Rational, RationalVector, Sense,
    VBody,
};
use helly_core::norms::{l2_diameter_exact, rho, rho_diameter, Extent, PolytopeNorm};
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn polytope(seed: u64, d: usize) -> HPolytope {
    let mut r = rng(seed);
    let center = random_point(&mut r, d, -1.0, 1.0, 5);
    random_polytope(&mut r, &center, &RandomShape::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vertex_maximum_equals_lp_optimum(seed in any::<u64>(), d in 1usize..=4, obj in prop::collection::vec(-5i64..=5, 4)) {
        let body = polytope(seed, d);
        let c = RationalVector::from_ints(&obj[..d]);
        let vs = vertices(&body).unwrap();
        let best = vs.iter().map(|p| c.dot(p)).max().unwrap();
        let lp = lp_solve(&c, Sense::Max, &body).unwrap();
        prop_assert_eq!(lp.status, LpStatus::Optimal);
        prop_assert_eq!(lp.optimum.unwrap(), best);
    }

    #[test]
    fn radon_witness_lies_in_both_hulls(seed in any::<u64>(), d in 1usize..=4, extra in 0usize..2) {
        let pts = random_radon_points(&mut rng(seed), d, d + 2 + extra, 4, 3);
        let part = radon_partition(&pts).unwrap();
        let a = ConvexBody::V(VBody::new(part.part_a.clone()).unwrap());
        let b = ConvexBody::V(VBody::new(part.part_b.clone()).unwrap());
        prop_assert!(member(&part.witness, &a).unwrap());
        prop_assert!(member(&part.witness, &b).unwrap());
        let mut all: Vec<usize> = part.indices_a.iter().chain(&part.indices_b).copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..pts.len()).collect::<Vec<_>>());
    }

    #[test]
    fn rho_is_a_norm(seed in any::<u64>(), d in 1usize..=4, p in -6i64..=6, q in 1i64..=5) {
        let mut r = rng(seed);
        let norm = if seed % 2 == 0 { PolytopeNorm::linf(d) } else { PolytopeNorm::l1(d) };
        let x = random_point(&mut r, d, -3.0, 3.0, 7);
        let y = random_point(&mut r, d, -3.0, 3.0, 7);
        let t = ratio(p, q);
        prop_assert_eq!(rho(&norm, &x.scale(&t)).unwrap(), t.abs() * rho(&norm, &x).unwrap());
        prop_assert!(rho(&norm, &(&x + &y)).unwrap() <= rho(&norm, &x).unwrap() + rho(&norm, &y).unwrap());
    }

    #[test]
    fn box_diameters(sides in prop::collection::vec((-4i64..=4, 1i64..=6, 1i64..=4), 1..=4)) {
        let lower = RationalVector::new(sides.iter().map(|&(a, _, q)| ratio(a, q)).collect());
        let upper = RationalVector::new(sides.iter().map(|&(a, w, q)| ratio(a + w, q)).collect());
        let body = HPolytope::bounding_box(&lower, &upper).unwrap();
        let widths: Vec<Rational> = sides.iter().map(|&(_, w, q)| ratio(w, q)).collect();
        let sq: Rational = widths.iter().map(|w| w * w).sum();
        match l2_diameter_exact(&body).unwrap() {
            Extent::Finite(c) => prop_assert_eq!(c.squared, sq),
            other => prop_assert!(false, "{:?}", other),
        }
        let linf = widths.iter().max().unwrap().clone();
        match rho_diameter(&body, &PolytopeNorm::linf(sides.len())).unwrap() {
            Extent::Finite(c) => prop_assert_eq!(c.value, linf),
            other => prop_assert!(false, "{:?}", other),
        }
        let l1: Rational = widths.iter().sum();
        match rho_diameter(&body, &PolytopeNorm::l1(sides.len())).unwrap() {
            Extent::Finite(c) => prop_assert_eq!(c.value, l1),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn scaling_scales_diameter(seed in any::<u64>(), p in 1i64..=5, q in 1i64..=5) {
        let body = polytope(seed, 2);
        let norm = PolytopeNorm::linf(2);
        let t = ratio(p, q);
        let base = rho_diameter(&body, &norm).unwrap().finite().unwrap().value.clone();
        let scaled = rho_diameter(&body.scaled(&t), &norm).unwrap().finite().unwrap().value.clone();
        prop_assert_eq!(scaled, base * t);
    }
}

#[test]
fn cube_has_corner_vertices() {
    let cube = HPolytope::cube(3, 0, 1);
    assert_eq!(vertices(&cube).unwrap().len(), 8);
    assert_eq!(l2_diameter_exact(&cube).unwrap().finite().unwrap().squared, int(3));
}
