//! Generalized dihedral groups: the involution class satisfies the
//! non-splitting condition and its component counts agree with the
//! exhaustive oracle.

use nbl::dsl::parse_group_spec;
use nbl::monoid;
use nbl::nielsen::{Base, Budget, ClassConstraint, Cover, Equivalence, EnumerationSpec};
use nbl::oracle;
use nbl::orbit::decompose_components;
use nbl::perm::Perm;

#[test]
fn gdih33_involutions_are_nonsplitting() {
    let g = parse_group_spec("GDih(3,3)").unwrap();
    assert_eq!(g.order(), 18);
    let table = g.class_table();
    let involutions: Vec<u32> = (0..table.class_count() as u32)
        .filter(|&c| g.perm(table.class(c).rep()).order() == 2)
        .collect();
    // Inversion acts with all nine reflections conjugate.
    assert_eq!(involutions.len(), 1);
    assert_eq!(table.class(involutions[0]).size(), 9);
    let report = monoid::is_nonsplitting(&g, &involutions).unwrap();
    assert!(report.holds, "witness: {:?}", report.witness);
}

#[test]
fn gdih33_counts_match_oracle() {
    let g = parse_group_spec("GDih(3,3)").unwrap();
    let table = g.class_table();
    let inv = (0..table.class_count() as u32)
        .find(|&c| g.perm(table.class(c).rep()).order() == 2)
        .unwrap();
    let spec = EnumerationSpec::new(
        Base::Projective,
        Equivalence::Unmarked,
        Cover::Galois,
        ClassConstraint::Set(vec![inv]),
    );
    for r in 4..=6 {
        let comps = decompose_components(&g, r, &spec, Budget::default()).unwrap();
        let slow = oracle::orbit_partition_exhaustive(&g, r, &spec);
        let fast: Vec<(Vec<u32>, u64)> = comps
            .iter()
            .map(|c| (c.rep().entries().to_vec(), c.orbit_size()))
            .collect();
        assert_eq!(fast, slow, "r = {r}");
    }
}

#[test]
fn gdih_families_realize_dihedral_relations() {
    // GDih(n) and D_n share the abstract structure for odd n.
    let gd = parse_group_spec("GDih(5)").unwrap();
    let d5 = parse_group_spec("D5").unwrap();
    assert_eq!(gd.order(), d5.order());
    assert_eq!(gd.class_table().class_count(), d5.class_table().class_count());
    // Reflection times rotation conjugation: s t s^-1 = t^-1.
    let t = gd.generators()[0].clone();
    let s = gd.generators().last().unwrap().clone();
    assert_eq!(t.conjugate_by(&s), t.inverse());
    assert_eq!(Perm::identity(gd.degree()), s.compose(&s));
}
