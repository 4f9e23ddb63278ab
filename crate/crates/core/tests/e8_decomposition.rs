use coset_fusion::characters::{verify_e8_decomposition_with, SumRoute, E8_TUPLE_COUNT};
use coset_fusion::threec::ThreeCDataset;

#[test]
fn both_routes_agree_at_low_order() {
    let data = ThreeCDataset::bundled().unwrap();
    let specs = data.u_character_specs().unwrap();
    let c = data.u_central_charge();
    let chain = verify_e8_decomposition_with(&specs, &c, 3, SumRoute::Chain).unwrap();
    let tuples = verify_e8_decomposition_with(&specs, &c, 3, SumRoute::Tuples).unwrap();
    assert_eq!(chain.rhs, tuples.rhs);
    assert_eq!(chain.tuple_count, E8_TUPLE_COUNT);
    assert!(chain.central_charge_balanced);
    assert_eq!(chain.first_mismatch, None, "lhs {} rhs {}", chain.lhs, chain.rhs);
}

#[test]
fn swapped_u_characters_break_the_identity() {
    let data = ThreeCDataset::bundled().unwrap();
    let mut specs = data.u_character_specs().unwrap();
    specs.swap(1, 3);
    let report = verify_e8_decomposition_with(&specs, &data.u_central_charge(), 3, SumRoute::Chain).unwrap();
    assert!(!report.passed());
    assert!(report.first_mismatch.is_some());
}
