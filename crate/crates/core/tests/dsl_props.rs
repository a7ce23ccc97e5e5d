use simploc_core::dsl::library::*;
use simploc_core::dsl::{classify, validate, ClassTag, ConstructionTree, LibraryArg};
use simploc_core::group_rep::GroupDatum;
use simploc_core::Error;

fn library_calls(g: &GroupDatum) -> Vec<(&'static str, Vec<LibraryArg>)> {
    use LibraryArg::*;
    vec![
        ("projective_space", vec![Int(1)]),
        ("projective_space", vec![Int(4)]),
        ("grassmannian", vec![Int(4), Int(2)]),
        ("grassmannian", vec![Int(5), Int(3)]),
        ("flag", vec![Int(4), Ints(vec![1, 2])]),
        ("hirzebruch", vec![Int(0)]),
        ("hirzebruch", vec![Int(3)]),
        ("cusp", vec![]),
        ("node", vec![]),
        ("cone_of_P1", vec![]),
        ("projective_cone", vec![Tree(projective_space(2, g)), Int(1)]),
        ("projective_cone", vec![Tree(cusp(g)), Int(2)]),
    ]
}

#[test]
fn library_validates_for_every_torus_rank() {
    for r in 0..=5 {
        let g = GroupDatum::torus(r);
        for (name, args) in library_calls(&g) {
            let t = example_library(name, &args, &g).unwrap();
            assert_eq!(validate(&t, &g), Ok(()), "{name} with torus rank {r}");
        }
    }
}

#[test]
fn library_classes() {
    let g = GroupDatum::trivial();
    for (name, args) in library_calls(&g) {
        let t = example_library(name, &args, &g).unwrap();
        let expect = if name == "node" { ClassTag::C } else { ClassTag::B };
        assert_eq!(classify(&t).tag, expect, "{name}");
    }
}

#[test]
fn validation_examples() {
    let g = GroupDatum::trivial();
    assert_eq!(validate(&ConstructionTree::Point, &g), Ok(()));
    let bad = ConstructionTree::flag_bundle(ConstructionTree::Point, simploc_core::dsl::BundleDatum::plain(2), vec![3]);
    let v = validate(&bad, &g).unwrap_err();
    assert_eq!(v[0].rule, "d exceeds rank");
    // Characters need the right lattice.
    let t = projective_space(1, &GroupDatum::torus(2));
    assert!(validate(&t, &GroupDatum::torus(1)).is_err());
    assert!(validate(&t, &GroupDatum::opaque("SL2")).is_err());
}

#[test]
fn unknown_library_entry() {
    let err = example_library("klein_quartic", &[], &GroupDatum::trivial()).unwrap_err();
    assert_eq!(err, Error::Lookup { kind: "library entry", name: "klein_quartic".into() });
}
