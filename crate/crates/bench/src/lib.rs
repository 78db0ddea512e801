//! Inputs shared by the benchmarks.

use dgcalc_core::{fixtures, DgCategory, Field, SparseMatrix};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// Square random matrix of side `n` with about `per_col` nonzeros per column.
pub fn rank_input(field: Field, n: usize, per_col: usize, seed: u64) -> SparseMatrix {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let density = (per_col as f64 / n as f64).min(1.0);
    dgcalc_core::random::matrix(&mut rng, field, n, n, density)
}

/// Categories whose Hochschild complexes are benchmarked, by name.
pub fn hochschild_inputs(field: Field) -> Vec<(&'static str, DgCategory)> {
    vec![
        ("dual", fixtures::dual(field)),
        ("exterior", fixtures::exterior(field)),
        ("a2", fixtures::a2(field)),
    ]
}
