use lee_tiling::ring::GroupRingElement;
use lee_tiling::{AbelianGroup, GroupElement};
use proptest::prelude::*;

fn groups() -> Vec<AbelianGroup> {
    let mut out: Vec<AbelianGroup> = [1u64, 2, 3, 5, 7, 12, 13, 25, 41]
        .iter()
        .map(|&m| AbelianGroup::cyclic(m).unwrap())
        .collect();
    for f in [
        vec![2, 2],
        vec![3, 3],
        vec![2, 4],
        vec![5, 5],
        vec![2, 2, 6],
    ] {
        out.push(AbelianGroup::new(f).unwrap());
    }
    out
}

/// A group together with up to three random elements of its group ring.
fn instance() -> impl Strategy<Value = (AbelianGroup, Vec<GroupRingElement>)> {
    (0..groups().len()).prop_flat_map(|gi| {
        let g = groups()[gi].clone();
        let order = g.order();
        let element = prop::collection::vec((0..order, -4i128..=4), 0..8);
        prop::collection::vec(element, 3).prop_map(move |raw| {
            let elems = raw
                .into_iter()
                .map(|terms| {
                    let terms: Vec<(GroupElement, i128)> = terms
                        .into_iter()
                        .map(|(i, c)| (g.element_at(i), c))
                        .collect();
                    GroupRingElement::from_terms(&g, terms).unwrap()
                })
                .collect();
            (g.clone(), elems)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms((g, xs) in instance()) {
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        let zero = GroupRingElement::zero(&g);
        let one = GroupRingElement::one(&g);
        prop_assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
        prop_assert_eq!(a.add(&b.add(c).unwrap()).unwrap(), a.add(b).unwrap().add(c).unwrap());
        prop_assert_eq!(a.add(&zero).unwrap(), a.clone());
        prop_assert!(a.sub(a).unwrap().is_zero());
        prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        prop_assert_eq!(a.mul(&b.mul(c).unwrap()).unwrap(), a.mul(b).unwrap().mul(c).unwrap());
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(
            a.mul(&b.add(c).unwrap()).unwrap(),
            a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap()
        );
    }

    #[test]
    fn coefficient_sum_is_multiplicative((_g, xs) in instance()) {
        let (a, b) = (&xs[0], &xs[1]);
        prop_assert_eq!(a.mul(b).unwrap().coefficient_sum(), a.coefficient_sum() * b.coefficient_sum());
    }

    #[test]
    fn cube_is_frobenius_mod_3((_g, xs) in instance()) {
        let a = &xs[0];
        let cube = a.mul(a).unwrap().mul(a).unwrap();
        prop_assert!(cube.congruent_mod(&a.power_map(3), 3).unwrap());
    }

    #[test]
    fn power_map_is_a_ring_endomorphism((_g, xs) in instance(), s in -6i64..=6, t in -6i64..=6) {
        let (a, b) = (&xs[0], &xs[1]);
        prop_assert_eq!(a.power_map(s).power_map(t), a.power_map(s * t));
        prop_assert_eq!(a.mul(b).unwrap().power_map(t), a.power_map(t).mul(&b.power_map(t)).unwrap());
        prop_assert_eq!(a.add(b).unwrap().power_map(t), a.power_map(t).add(&b.power_map(t)).unwrap());
    }
}

#[test]
fn power_map_by_unit_is_invertible() {
    let g = AbelianGroup::cyclic(13).unwrap();
    let t =
        GroupRingElement::from_set(&g, &GroupElement::parse_list("0;1;12;5;8").unwrap()).unwrap();
    // 5 * 8 = 40 = 1 (mod 13)
    assert_eq!(t.power_map(5).power_map(8), t);
    assert_eq!(t.power_map(-1), t);
}
