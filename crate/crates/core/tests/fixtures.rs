use std::path::Path;

use ldcell::{
    construct_imac, dualize, search_best, upper_bound_sum, verify, verify_exhaustive, CellParams, LinearScheme, Model,
    RegimeTag, SearchConfig,
};

fn load(name: &str) -> LinearScheme {
    LinearScheme::read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap()
}

#[test]
fn fig2_fixture_is_the_construction() {
    let s = load("fig2_imac.json");
    let p = CellParams::new(8, 7, 9, 7, 2, 4).unwrap();
    assert_eq!(s, construct_imac(&p).unwrap());
    assert!(verify_exhaustive(&s).unwrap().pass);
    assert_eq!(verify(&s).rate, upper_bound_sum(&p).unwrap());
}

#[test]
fn fig3_fixture_is_the_dual() {
    let d = load("fig3_ibc.json");
    assert_eq!(d.model, Model::Ibc);
    assert_eq!(d, dualize(&load("fig2_imac.json")).unwrap());
    assert_eq!(d.params, load("fig2_imac.json").params);
    let c = verify(&d);
    assert!(c.pass && verify_exhaustive(&d).unwrap().pass);
    assert_eq!(c.rate, 14);
}

#[test]
fn fig4_fixture_uses_copy_bits() {
    let s = load("fig4_imac.json");
    assert_eq!(ldcell::classify_regime(&s.params).tag, RegimeTag::OutOfVeryWeak);
    let c = verify(&s);
    assert!(c.pass && verify_exhaustive(&s).unwrap().pass);
    assert_eq!(c.rate, 5);
    let copies = s
        .messages
        .iter()
        .flat_map(|m| m.level_columns())
        .filter(|col| col.len() == 2)
        .count();
    assert!(copies > 0);
    // unit-weight columns cannot reach 5 here
    assert_eq!(search_best(&s.params, &SearchConfig::with_weight(1)).unwrap().rate, 4);
    assert_eq!(search_best(&s.params, &SearchConfig::with_weight(2)).unwrap().scheme, s);
}

#[test]
fn equal_gains_cap_at_four() {
    // every shift is the identity, so both receivers see the same 4-level sum
    let p = CellParams::new(4, 4, 4, 4, 4, 4).unwrap();
    for w in [1, 2] {
        assert_eq!(search_best(&p, &SearchConfig::with_weight(w)).unwrap().rate, 4);
    }
}

#[test]
fn dual_preserves_rate_across_sub_a() {
    for (n1, n2, n3, n4, nm, nd) in [(5, 4, 6, 3, 1, 2), (16, 14, 16, 14, 4, 4), (12, 9, 10, 8, 3, 5), (6, 6, 6, 6, 2, 1)] {
        let p = CellParams::new(n1, n2, n3, n4, nm, nd).unwrap();
        let s = construct_imac(&p).unwrap();
        let d = dualize(&s).unwrap();
        let (a, b) = (verify(&s), verify(&d));
        assert!(a.pass && b.pass, "{p}");
        assert_eq!(a.rate, b.rate, "{p}");
    }
}
