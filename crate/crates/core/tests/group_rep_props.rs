use proptest::prelude::*;
use simploc_core::group_rep::{
    augment, elementary_symmetric_class, representation_ring, Character, GroupDatum, RepRingElement,
};

type E = RepRingElement<i64>;

fn group() -> impl Strategy<Value = GroupDatum> {
    (0usize..3, prop::collection::vec(2i64..5, 0..2)).prop_map(|(r, f)| GroupDatum::new(r, f).unwrap())
}

fn character(g: &GroupDatum) -> impl Strategy<Value = Character> {
    let g = g.clone();
    prop::collection::vec(-3i64..4, g.lattice_dim()).prop_map(move |c| g.character(&c).unwrap())
}

fn element(g: &GroupDatum) -> impl Strategy<Value = E> {
    prop::collection::vec((character(g), -5i64..6), 0..=8)
        .prop_map(|terms| terms.into_iter().fold(E::zero(), |acc, (ch, c)| acc + E::monomial(ch, c)))
}

fn group_and<T: std::fmt::Debug + Clone + 'static, S: Strategy<Value = T> + 'static>(
    f: impl Fn(&GroupDatum) -> S + 'static,
) -> impl Strategy<Value = (GroupDatum, T)> {
    group().prop_flat_map(move |g| (Just(g.clone()), f(&g)))
}

proptest! {
    #[test]
    fn ring_axioms((_g, (a, b, c)) in group_and(|g| (element(g), element(g), element(g)))) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert!(a.terms().all(|(_, v)| *v != 0));
    }

    #[test]
    fn augmentation_is_multiplicative((_g, (a, b)) in group_and(|g| (element(g), element(g)))) {
        prop_assert_eq!(augment(&(&a * &b)), augment(&a) * augment(&b));
        prop_assert_eq!(augment(&(&a + &b)), augment(&a) + augment(&b));
    }

    #[test]
    fn elementary_symmetric_generating_function(
        (g, chars) in group_and(|g| prop::collection::vec(character(g), 0..=5))
    ) {
        // ∏_j (1 + [L_j] x) expanded directly as a list of coefficients.
        let ring = representation_ring(&g).unwrap();
        let mut prod: Vec<E> = vec![ring.one()];
        for ch in &chars {
            let l = E::character_class(ch.clone());
            let mut next = vec![E::zero(); prod.len() + 1];
            for (k, c) in prod.iter().enumerate() {
                next[k] += c;
                next[k + 1] += &(c * &l);
            }
            prod = next;
        }
        for (i, expected) in prod.iter().enumerate() {
            let e: E = elementary_symmetric_class(&g, &chars, i).unwrap();
            prop_assert_eq!(&e, expected);
        }
        prop_assert!(elementary_symmetric_class::<i64>(&g, &chars, chars.len() + 1).is_err());
    }
}

#[test]
fn cyclic_group_algebra_of_order_three() {
    // Brute-force multiplication table of the three basis characters.
    let g = GroupDatum::new(0, vec![3]).unwrap();
    let ring = representation_ring(&g).unwrap();
    assert_eq!(ring.describe(), "Z[s1]/(s1^3 - 1)");
    let basis = ring.finite_basis().unwrap();
    assert_eq!(basis.len(), 3);
    for (a, x) in basis.iter().enumerate() {
        for (b, y) in basis.iter().enumerate() {
            let prod = E::character_class(x.clone()) * E::character_class(y.clone());
            let expect = E::character_class(basis[(a + b) % 3].clone());
            assert_eq!(prod, expect);
        }
    }
}

#[test]
fn augmentation_examples() {
    let g = GroupDatum::torus(2);
    let t1 = E::character_class(g.basis_character(0).unwrap());
    let t2_inv = E::character_class(g.basis_character(1).unwrap().negate());
    assert_eq!(augment(&E::zero()), 0);
    assert_eq!(augment(&(&t1 + &t2_inv.scale(&2))), 3);
    let one: E = representation_ring(&g).unwrap().one();
    let d = &(&t1 - &one) * &(&t1 + &one);
    assert_eq!(d.num_terms(), 2);
    assert_eq!(augment(&d), 0);
}
