mod common;

use ncdr_core::findim::standard::{comm_xy, dual_numbers, free_xy, ground_field, truncated_poly};
use ncdr_core::forms::Calculus;
use ncdr_core::homology::{hh_kernel_iota, hochschild};
use ncdr_core::spec::parse_algebra;
use ncdr_core::window::cyclic_and_negative;

#[test]
fn bar_oracle_known_values() {
    assert_eq!(common::bar_hh(&ground_field(), 3), vec![1, 0, 0, 0]);
    // k[e]: HH_0 = A, then one class per degree
    assert_eq!(common::bar_hh(&dual_numbers(), 3), vec![2, 1, 1, 1]);
    assert_eq!(common::bar_hh(&truncated_poly(3), 3), vec![3, 2, 2, 2]);
}

#[test]
fn hochschild_matches_bar_complex() {
    for a in [dual_numbers(), truncated_poly(3), comm_xy(2), free_xy(2)] {
        let c = Calculus::new(&a);
        let oracle = common::bar_hh(&a, 3);
        assert_eq!(hochschild(&c, 3).dims, oracle, "{:?}", a.labels);
        let ker: Vec<usize> = (0..=3).map(|n| hh_kernel_iota(&c, n).dim).collect();
        assert_eq!(ker, oracle, "{:?}", a.labels);
    }
}

#[test]
fn structure_constant_spec_uses_single_block() {
    // k[e] given by structure constants has no words; the oracle works unblocked
    let s = parse_algebra(r#"{"basis": ["1", "e"], "structure_constants": [[0,0,0,1],[0,1,1,1],[1,0,1,1]]}"#).unwrap();
    assert_eq!(common::bar_hh(&s.algebra, 3), vec![2, 1, 1, 1]);
    let c = Calculus::new(&s.algebra);
    assert_eq!(hochschild(&c, 3).dims, vec![2, 1, 1, 1]);
}

#[test]
fn connes_oracle_known_values() {
    // HC(k) = k in even degrees
    assert_eq!(common::connes_hc(&ground_field(), 4), vec![1, 0, 1, 0, 1]);
    // reduced HC(k[e]) = k in even degrees
    assert_eq!(common::connes_hc_reduced(&dual_numbers(), 4), vec![1, 0, 1, 0, 1]);
}

#[test]
fn cyclic_windows_match_connes_complex() {
    for a in [dual_numbers(), truncated_poly(3)] {
        let c = Calculus::new(&a);
        let r = cyclic_and_negative(&c, -4, 0, 6).unwrap();
        // degree -n holds HC_n
        let lib: Vec<usize> = (0..=4).map(|n| r.hc[(4 - n) as usize]).collect();
        assert_eq!(lib, common::connes_hc_reduced(&a, 4), "{:?}", a.labels);
    }
}
