mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracles::{integer_solve_disagreement, integrally_solvable};

#[test]
fn random_systems_agree_with_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut solvable = 0;
    let mut disagreements = Vec::new();
    for _ in 0..1000 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let b: Vec<i64> = if rng.gen_bool(0.5) {
            // in the integral span half of the time
            let x: Vec<i64> = (0..cols).map(|_| rng.gen_range(-3..=3)).collect();
            a.iter().map(|r| r.iter().zip(&x).map(|(c, v)| c * v).sum()).collect()
        } else {
            (0..rows).map(|_| rng.gen_range(-6..=6)).collect()
        };
        solvable += usize::from(integrally_solvable(&a, &b));
        disagreements.extend(integer_solve_disagreement(&a, &b));
    }
    assert!(disagreements.is_empty(), "{} disagreements, first: {}", disagreements.len(), disagreements[0]);
    assert!(solvable > 300 && solvable < 1000, "unbalanced sample: {solvable} solvable");
}

#[test]
fn oracle_on_hand_cases() {
    assert!(integrally_solvable(&[vec![2]], &[4]));
    assert!(!integrally_solvable(&[vec![2]], &[3]));
    assert!(!integrally_solvable(&[vec![2, 4], vec![1, 2]], &[1, 1]));
    assert!(integrally_solvable(&[vec![2, 3]], &[1]));
    assert!(!integrally_solvable(&[vec![1, 1], vec![1, -1]], &[1, 0]));
    assert!(integer_solve_disagreement(&[vec![6, 10, 15]], &[1]).is_none());
}
