use proptest::prelude::*;

use mmdim_core::covering::{exact_covering_number, greedy_separated, greedy_spanning, Enumeration, PointSet};
use mmdim_core::systems::lookup;
use mmdim_core::tiling::{b_r, q, qr, r_boundary, r_interior, vitali_select, AxisBox, Cube, CubeFamily, Region, Q};
use mmdim_core::Window;

fn coord() -> impl Strategy<Value = Q> {
    (-8i128..=8, 1i128..=2).prop_map(|(n, d)| qr(n, d))
}

fn axis_box(dim: usize) -> impl Strategy<Value = AxisBox> {
    proptest::collection::vec((coord(), 1i128..=8), dim).prop_map(|v| {
        let lo: Vec<Q> = v.iter().map(|(a, _)| *a).collect();
        let hi: Vec<Q> = v.iter().map(|(a, w)| *a + qr(*w, 2)).collect();
        AxisBox::new(lo, hi).unwrap()
    })
}

fn region() -> impl Strategy<Value = Region> {
    (1usize..=2)
        .prop_flat_map(|d| proptest::collection::vec(axis_box(d), 1..=3).prop_map(move |b| Region::from_boxes(d, b)))
}

fn radius() -> impl Strategy<Value = Q> {
    prop_oneof![Just(qr(1, 2)), Just(q(1)), Just(qr(3, 2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dilation_splits_into_interior_and_collar(omega in region(), r in radius()) {
        let whole = b_r(&omega, r);
        let parts = r_interior(&omega, r).union(&r_boundary(&omega, r));
        prop_assert!(whole.same_as(&parts));
        prop_assert!(r_interior(&omega, r).is_subset(&omega));
        prop_assert!(omega.is_subset(&whole));
    }

    #[test]
    fn collar_is_subadditive((a, b) in (1usize..=2).prop_flat_map(|d| (
            proptest::collection::vec(axis_box(d), 1..=2).prop_map(move |v| Region::from_boxes(d, v)),
            proptest::collection::vec(axis_box(d), 1..=2).prop_map(move |v| Region::from_boxes(d, v)))),
        r in radius()) {
        let joint = r_boundary(&a.union(&b), r);
        prop_assert!(joint.is_subset(&r_boundary(&a, r).union(&r_boundary(&b, r))));
        prop_assert!(joint.volume() <= r_boundary(&a, r).volume() + r_boundary(&b, r).volume());
    }

    #[test]
    fn region_volumes_are_inclusion_exclusion((a, b) in (1usize..=2).prop_flat_map(|d| (
            proptest::collection::vec(axis_box(d), 1..=3).prop_map(move |v| Region::from_boxes(d, v)),
            proptest::collection::vec(axis_box(d), 1..=3).prop_map(move |v| Region::from_boxes(d, v))))) {
        prop_assert_eq!(a.union(&b).volume() + a.intersection(&b).volume(), a.volume() + b.volume());
        prop_assert_eq!(a.difference(&b).volume(), a.volume() - a.intersection(&b).volume());
    }

    #[test]
    fn vitali_properties_hold(d in 1usize..=3, cubes in proptest::collection::vec(
            (proptest::collection::vec(coord(), 3), 1i128..=6), 1..=6)) {
        let family = CubeFamily::new(cubes.into_iter()
            .map(|(c, s)| Cube::new(c[..d].to_vec(), qr(s, 2)).unwrap())
            .collect()).unwrap();
        let r = vitali_select(&family).unwrap();
        prop_assert!(r.all_hold());
    }

    #[test]
    fn covering_numbers_shrink_with_scale_and_grow_with_window(
            id in prop::sample::select(vec!["full-shift-2", "golden-mean", "hilbert-cube"]),
            m in 1i32..=5, n in 1i64..=6) {
        let s = lookup(id).unwrap().spec;
        let x = PointSet::whole(&s);
        let w = Window::cube(1, n).unwrap();
        let fine = exact_covering_number(&s, &x, &w, 0.5f64.powi(m + 1)).unwrap().cardinality;
        let coarse = exact_covering_number(&s, &x, &w, 0.5f64.powi(m)).unwrap().cardinality;
        prop_assert!(coarse <= fine);
        let longer = exact_covering_number(&s, &x, &Window::cube(1, n + 1).unwrap(), 0.5f64.powi(m)).unwrap().cardinality;
        prop_assert!(coarse <= longer);
    }

    #[test]
    fn greedy_nets_bracket_the_exact_count(m in 1i32..=3, n in 1i64..=4,
            id in prop::sample::select(vec!["full-shift-2", "golden-mean"])) {
        let s = lookup(id).unwrap().spec;
        let x = PointSet::whole(&s);
        let w = Window::cube(1, n).unwrap();
        let eps = 0.5f64.powi(m);
        let exact = exact_covering_number(&s, &x, &w, eps).unwrap().cardinality;
        let span = greedy_spanning(&s, &x, &w, eps, &Enumeration::default()).unwrap();
        let sep = greedy_separated(&s, &x, &w, eps, &Enumeration::default()).unwrap();
        prop_assert!(span.lower_bound <= exact.clone() && exact <= span.upper_bound);
        prop_assert!(sep.lower_bound <= exact);
    }
}
