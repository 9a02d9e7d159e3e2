//! Property tests for the passage machinery: order-type randomization for
//! the combinatorial laws, seeded Poisson samples for the coupled ones.

use lpp::equilibrium::{comparison_audit, exit_points, resolve_exit_points};
use lpp::lattice::{lattice_last_passage, lattice_path_oracle, LatticeField, LatticeSite};
use lpp::passage::{geodesic, last_passage, lis_oracle, passage_profile, suffix_profile};
use lpp::process::{BoundaryProcess, PlanarPoint, PointSet, Rect};
use lpp::rng::{SeedSpec, Substream};
use proptest::prelude::*;

/// Build a point set on (0,1]^2 whose order type is the ranking of `vals`;
/// coordinates are distinct by construction.
fn points_from_ranks(vals: &[u32]) -> PointSet {
    let k = vals.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (vals[i], i));
    let mut rank = vec![0usize; k];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let pts: Vec<PlanarPoint> = (0..k)
        .map(|i| {
            PlanarPoint::new(
                (i + 1) as f64 / (k + 1) as f64,
                (rank[i] + 1) as f64 / (k + 1) as f64,
            )
        })
        .collect();
    PointSet::from_points(pts, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), 1.0).unwrap()
}

fn corner(x: f64, t: f64) -> PlanarPoint {
    PlanarPoint::new(x, t)
}

proptest! {
    #[test]
    fn patience_matches_exhaustive_oracle(vals in proptest::collection::vec(0u32..1000, 0..13)) {
        let set = points_from_ranks(&vals);
        let p = corner(0.0, 0.0);
        let q = corner(1.0, 1.0);
        prop_assert_eq!(last_passage(&set, p, q).unwrap(), lis_oracle(&set, p, q).unwrap());
    }

    #[test]
    fn rectangle_monotonicity(vals in proptest::collection::vec(0u32..1000, 0..30),
                              fx in 0.1f64..1.0, ft in 0.1f64..1.0) {
        let set = points_from_ranks(&vals);
        let p = corner(0.0, 0.0);
        let small = last_passage(&set, p, corner(fx, ft)).unwrap();
        let tall = last_passage(&set, p, corner(fx, 1.0)).unwrap();
        let full = last_passage(&set, p, corner(1.0, 1.0)).unwrap();
        prop_assert!(small <= tall);
        prop_assert!(tall <= full);
    }

    #[test]
    fn superadditivity_at_interior_corner(vals in proptest::collection::vec(0u32..1000, 0..30),
                                          cx in 0.05f64..0.95, ct in 0.05f64..0.95) {
        let set = points_from_ranks(&vals);
        let p = corner(0.0, 0.0);
        let q = corner(1.0, 1.0);
        let c = corner(cx, ct);
        let through = last_passage(&set, p, c).unwrap() + last_passage(&set, c, q).unwrap();
        prop_assert!(through <= last_passage(&set, p, q).unwrap());
    }

    #[test]
    fn geodesic_attains_and_decomposes(vals in proptest::collection::vec(0u32..1000, 0..13)) {
        let set = points_from_ranks(&vals);
        let p = corner(0.0, 0.0);
        let q = corner(1.0, 1.0);
        let g = geodesic(&set, p, q).unwrap();
        let total = last_passage(&set, p, q).unwrap();
        prop_assert_eq!(g.path.len() as i64, total);
        prop_assert!(g.path.windows(2).all(|w| w[0].strictly_below(&w[1])));
        for c in &g.path {
            prop_assert_eq!(
                last_passage(&set, p, *c).unwrap() + last_passage(&set, *c, q).unwrap(),
                total
            );
        }
    }

    #[test]
    fn profiles_agree_with_direct_values(vals in proptest::collection::vec(0u32..1000, 0..40),
                                         probe in 0.0f64..1.0) {
        let set = points_from_ranks(&vals);
        let forward = passage_profile(&set, 0.0, 1.0, 1.0).unwrap();
        prop_assert_eq!(
            forward.value_at(probe),
            last_passage(&set, corner(0.0, 0.0), corner(probe, 1.0)).unwrap()
        );
        // unit jumps exactly at bulk x coordinates
        let xs: Vec<f64> = set.points().iter().map(|p| p.x).collect();
        let mut prev = 0;
        for (i, &b) in forward.breakpoints().iter().enumerate() {
            prop_assert!(xs.contains(&b));
            prop_assert_eq!(forward.values()[i], prev + 1);
            prev = forward.values()[i];
        }

        let target = corner(1.0, 1.0);
        let suffix = suffix_profile(&set, target, 0.0).unwrap();
        prop_assert_eq!(
            suffix.value_at(probe),
            last_passage(&set, corner(probe, 0.0), target).unwrap()
        );
        prop_assert_eq!(suffix.value_at(1.0), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exit_points_ordered_and_monotone(master in 0u64..1_000_000, lambda in 0.7f64..1.4) {
        let region = Rect::new(-40.0, 25.0, 0.0, 20.0).unwrap();
        let bulk = PointSet::sample(region, 1.0, SeedSpec::new(master, 0, Substream::Bulk)).unwrap();
        let boundary =
            BoundaryProcess::sample(-40.0, 25.0, lambda, SeedSpec::new(master, 0, Substream::Boundary))
                .unwrap();
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..4 {
            let x = 12.0 + 3.0 * k as f64;
            let ep = exit_points(&bulk, &boundary, corner(x, 20.0)).unwrap();
            prop_assert!(ep.z_left <= ep.z_right);
            prop_assert!(ep.z_right <= x);
            if let Some((zl, zr)) = prev {
                prop_assert!(zl <= ep.z_left);
                prop_assert!(zr <= ep.z_right);
            }
            prev = Some((ep.z_left, ep.z_right));
        }
    }

    #[test]
    fn local_comparison_never_violated(master in 0u64..1_000_000, lambda in 0.7f64..1.4) {
        let region = Rect::new(-64.0, 40.0, 0.0, 30.0).unwrap();
        let mut bulk =
            PointSet::sample(region, 1.0, SeedSpec::new(master, 1, Substream::Bulk)).unwrap();
        let mut boundary =
            BoundaryProcess::sample(-64.0, 40.0, lambda, SeedSpec::new(master, 1, Substream::Boundary))
                .unwrap();
        let grid = [18.0, 22.0, 26.0, 30.0];
        let report = comparison_audit(&mut bulk, &mut boundary, 30.0, &grid, 6).unwrap();
        prop_assert_eq!(report.violations, 0);
    }

    #[test]
    fn resolution_certifies_left_edge(master in 0u64..1_000_000) {
        let region = Rect::new(-8.0, 12.0, 0.0, 10.0).unwrap();
        let mut bulk =
            PointSet::sample(region, 1.0, SeedSpec::new(master, 2, Substream::Bulk)).unwrap();
        let mut boundary =
            BoundaryProcess::sample(-8.0, 12.0, 0.9, SeedSpec::new(master, 2, Substream::Boundary))
                .unwrap();
        let ep = resolve_exit_points(&mut bulk, &mut boundary, corner(10.0, 10.0), 8).unwrap();
        prop_assert!(!ep.left_edge_indeterminate);
        prop_assert!(ep.z_left > boundary.window().0);
    }

    #[test]
    fn lattice_dp_matches_enumeration(master in 0u64..1_000_000,
                                      w in 2usize..7, h in 2usize..7) {
        let field = LatticeField::sample_exp(h, w, SeedSpec::new(master, 3, Substream::Lattice)).unwrap();
        let from = LatticeSite::new(0, 0);
        let to = LatticeSite::new(w - 1, h - 1);
        let dp = lattice_last_passage(&field, from, to).unwrap();
        let oracle = lattice_path_oracle(&field, from, to).unwrap();
        prop_assert!((dp - oracle).abs() < 1e-9);
    }
}
