//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use qcets::io::{parse_exponent_matrix, parse_raw, RawMatrix};
use qcets::matrix::ExponentMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn table_path(which: &str, n: usize) -> PathBuf {
    fixtures_dir().join("tables").join(format!("table{which}_n{n}.txt"))
}

pub fn raw_table(which: &str, n: usize) -> RawMatrix {
    parse_raw(&std::fs::read_to_string(table_path(which, n)).unwrap()).unwrap()
}

pub fn table(which: &str, n: usize) -> ExponentMatrix {
    raw_table(which, n).into_matrix(false).unwrap()
}

pub fn derived(name: &str) -> ExponentMatrix {
    let path = fixtures_dir().join("derived").join(name);
    parse_exponent_matrix(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Uniform entries in `[0, N)`.
pub fn random_matrix(rng: &mut impl Rng, n: usize, lifting: u32) -> ExponentMatrix {
    let mut row = || (0..n).map(|_| rng.gen_range(0..lifting)).collect::<Vec<u32>>();
    let rows = [row(), row(), row()];
    ExponentMatrix::new(lifting, rows).unwrap()
}

/// Uniform entries with zero first row and column.
pub fn random_normalized(rng: &mut impl Rng, n: usize, lifting: u32) -> ExponentMatrix {
    random_matrix(rng, n, lifting).normalized()
}

/// Every `(n, N)` with `n*N <= 24`, as the zero matrix plus three random ones.
pub fn tiny_corpus() -> Vec<ExponentMatrix> {
    let mut rng = rng(0x7e7);
    let mut out = Vec::new();
    for n in 2..=4usize {
        for lifting in 2..=(24 / n) as u32 {
            out.push(ExponentMatrix::zeros(n, lifting).unwrap());
            for _ in 0..3 {
                out.push(random_matrix(&mut rng, n, lifting));
            }
        }
    }
    out
}
