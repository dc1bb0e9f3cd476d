//! Fixtures shared by the benchmarks.

use polyext_core::linalg::{rat, QMatrix};

/// Deterministic dense `n x n` rational matrix of full rank.
pub fn hilbert_like(n: usize) -> QMatrix {
    let entries = (0..n * n)
        .map(|k| {
            let (i, j) = ((k / n) as i64, (k % n) as i64);
            rat(1 + (i * 7 + j * 3) % 5, i + j + 1)
        })
        .collect();
    QMatrix::new(n, n, entries).expect("n * n entries")
}
