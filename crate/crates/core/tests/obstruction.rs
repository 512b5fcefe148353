use gct_core::kronecker::{kron_rect, obstruction_search, ObstructionSearch};
use gct_core::symfun::pleth;
use gct_core::Partition;
use num_traits::Zero;

fn flagship() -> Partition {
    Partition::new(vec![13, 13, 2, 2, 2, 2, 2]).unwrap()
}

fn relaxed() -> ObstructionSearch {
    let mut params = ObstructionSearch::new(3, 12, 2);
    params.enforce_shape = true;
    params.max_length = Some(7);
    params
}

#[test]
fn relaxed_candidates_contain_the_cubic_obstruction() {
    let candidates = relaxed().candidates().unwrap();
    assert_eq!(candidates.len(), 2918);
    assert!(candidates.contains(&flagship()));
    assert!(candidates.iter().all(|l| l.length() <= 7 && l.first() >= 12));
    assert!(kron_rect(3, &flagship()).unwrap().is_zero());
    assert!(!pleth(3, 12, &flagship(), 9).unwrap().is_zero());
}

#[test]
fn strict_filters_exclude_seven_rows() {
    let mut params = relaxed();
    params.max_length = None;
    let candidates = params.candidates().unwrap();
    assert!(candidates.iter().all(|l| l.length() <= 5));
    assert!(!candidates.contains(&flagship()));
}

/// Several minutes on one core.
#[test]
#[ignore]
fn relaxed_search_finds_exactly_the_cubic_obstruction() {
    let found = obstruction_search(&relaxed()).unwrap();
    let lambdas: Vec<&Partition> = found.iter().map(|r| &r.lambda).collect();
    assert_eq!(lambdas, vec![&flagship()]);
    let r = &found[0];
    assert!(r.is_obstruction());
    assert!(!r.shape_ok.length && r.shape_ok.first_row);
}
