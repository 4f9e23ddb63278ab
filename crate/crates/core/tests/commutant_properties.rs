use coset_fusion::commutant::{
    check_product_structure, check_restrictions, derive_commutant_ring, derived_dimensions,
    dimension_homomorphism_error, validate, BranchingTable, DIMENSION_TOL,
};
use coset_fusion::fusion::{check_axioms, minimal_model_fusion};
use coset_fusion::modular::s_matrix;
use coset_fusion::MinimalModel;
use proptest::prelude::*;

fn full_table(big: &[String], sub: &[String]) -> BranchingTable {
    let rows = big
        .iter()
        .map(|i| sub.iter().map(|a| (a.clone(), format!("({i},{a})"))).collect())
        .collect();
    BranchingTable::new(big.to_vec(), sub.to_vec(), rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn product_of_minimal_model_rings(mb in 1u32..=4, ms in 1u32..=3) {
        let big_model = MinimalModel::new(mb).unwrap();
        let sub_model = MinimalModel::new(ms).unwrap();
        let big = minimal_model_fusion(big_model);
        let sub = minimal_model_fusion(sub_model);
        let sub_data = s_matrix(sub_model).unwrap();
        let table = full_table(big.labels(), sub.labels());

        let report = validate(&table, &big, &sub_data);
        prop_assert!(report.passes(), "{:?}", report.findings());
        let ring = derive_commutant_ring(&table, &big, &sub).unwrap();
        prop_assert_eq!(ring.rank(), big.rank() * sub.rank());
        prop_assert!(check_axioms(&ring).is_empty());
        prop_assert!(check_product_structure(&table, &ring).passes());
        prop_assert!(check_restrictions(&table, &ring, &big, &sub).passes());

        let big_dims = s_matrix(big_model).unwrap().qdims();
        let dims = derived_dimensions(&table, &ring, &big, &big_dims, sub_data.labels(), &sub_data.qdims()).unwrap();
        prop_assert!(dimension_homomorphism_error(&ring, &dims) < DIMENSION_TOL);
    }

    #[test]
    fn dropping_any_entry_is_reported(mb in 1u32..=3, row in 0usize..10, col in 0usize..6) {
        let big = minimal_model_fusion(MinimalModel::new(mb).unwrap());
        let sub_model = MinimalModel::new(2).unwrap();
        let sub = minimal_model_fusion(sub_model);
        let table = full_table(big.labels(), sub.labels());
        let i = &big.labels()[row % big.rank()];
        let a = &sub.labels()[col % sub.rank()];
        let broken = table.without_entry(i, a).unwrap();
        let report = validate(&broken, &big, &s_matrix(sub_model).unwrap());
        prop_assert!(!report.passes());
        prop_assert!(derive_commutant_ring(&broken, &big, &sub).is_err());
    }
}
