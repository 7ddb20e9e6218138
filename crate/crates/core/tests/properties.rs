use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use polynorm::counting::reciprocity_check;
use polynorm::normality::{is_normal, sumset_levels, verify_witness};
use polynorm::{Containment, LatticePoint, Polytope};

/// Random full-dimensional polytopes in dimension 2 or 3 with small
/// coordinates.
fn polytope() -> impl Strategy<Value = Polytope> {
    (2usize..=3)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0i64..=3, n), n + 1..=n + 4))
        .prop_filter_map("not full-dimensional", |pts| {
            Polytope::from_coords(&pts).ok()
        })
}

fn point_set(p: &Polytope) -> BTreeSet<LatticePoint> {
    p.lattice_points(Containment::Closed).into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rebuilding_from_vertices_is_identity(p in polytope()) {
        let again = Polytope::from_points(p.vertices()).unwrap();
        prop_assert_eq!(p.id(), again.id());
        prop_assert_eq!(again, p);
    }

    #[test]
    fn dilation_composes(p in polytope(), a in 1i64..=3, b in 1i64..=3) {
        let twice = p.dilate(a).unwrap().dilate(b).unwrap();
        prop_assert_eq!(twice, p.dilate(a * b).unwrap());
    }

    #[test]
    fn dilation_scales_vertices(p in polytope(), k in 1i64..=4) {
        let q = p.dilate(k).unwrap();
        prop_assert_eq!(q.vertices().len(), p.vertices().len());
        let scaled: Vec<LatticePoint> = p.vertices().iter().map(|v| v.scale(k)).collect();
        prop_assert_eq!(q.vertices(), &scaled[..]);
    }

    #[test]
    fn interior_points_are_points(p in polytope(), k in 1i64..=3) {
        let q = p.dilate(k).unwrap();
        let closed = point_set(&q);
        let interior = q.lattice_points(Containment::RelativeInterior);
        prop_assert!(interior.len() <= closed.len());
        for x in &interior {
            prop_assert!(closed.contains(x));
        }
    }

    #[test]
    fn lattice_points_have_convex_certificates(p in polytope()) {
        for x in p.lattice_points(Containment::Closed) {
            let (idx, weights) = p.convex_combination(&x).expect("certificate");
            let total: BigRational = weights.iter().sum();
            prop_assert!(total.is_one());
            prop_assert!(weights.iter().all(|w| *w >= BigRational::zero()));
            for i in 0..p.dim() {
                let coord: BigRational = idx
                    .iter()
                    .zip(&weights)
                    .map(|(&v, w)| w * BigRational::from_integer(BigInt::from(p.vertices()[v].coords()[i])))
                    .sum();
                prop_assert_eq!(coord, BigRational::from_integer(BigInt::from(x.coords()[i])));
            }
        }
    }

    #[test]
    fn points_outside_the_box_are_rejected(p in polytope()) {
        let (_, hi) = p.bounding_box();
        let outside = LatticePoint::new(hi.iter().map(|c| c + 1).collect());
        prop_assert!(!p.contains(&outside, Containment::Closed).unwrap());
        prop_assert!(p.convex_combination(&outside).is_none());
    }

    #[test]
    fn sumset_level_one_is_the_point_set(p in polytope()) {
        let pts = point_set(&p);
        prop_assert_eq!(sumset_levels(&pts, 1).unwrap(), pts);
    }

    #[test]
    fn sumsets_lie_in_dilates(p in polytope(), m in 2u32..=3) {
        let sums = sumset_levels(&point_set(&p), m).unwrap();
        let dilate = point_set(&p.dilate(i64::from(m)).unwrap());
        prop_assert!(sums.is_subset(&dilate));
    }

    #[test]
    fn reported_witnesses_are_sound(p in polytope()) {
        let report = is_normal(&p, Some(3)).unwrap();
        match &report.witness {
            Some(w) => prop_assert!(verify_witness(&p, w).unwrap()),
            None => {
                for m in 2..=3u32 {
                    let sums = sumset_levels(&point_set(&p), m).unwrap();
                    prop_assert_eq!(sums, point_set(&p.dilate(i64::from(m)).unwrap()));
                }
            }
        }
    }

    #[test]
    fn reciprocity_holds(p in polytope()) {
        prop_assert!(reciprocity_check(&p, p.dim() as i64 + 1).unwrap());
    }
}
