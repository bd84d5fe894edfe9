//! Shared workloads for the benchmarks.

use dimerlab::{enumerate_triangulations, fan_triangulation, Triangulation};

/// Fan triangulations at the sizes used by the benchmarks, as `(m, triangulation)`.
pub fn fan_cases() -> Vec<(u32, Triangulation)> {
    [(2, 8), (3, 6), (4, 5), (5, 4), (6, 6)]
        .into_iter()
        .map(|(m, n)| (m, fan_triangulation(n, 1).expect("valid fan")))
        .collect()
}

/// Every triangulation of the `n`-gon.
pub fn all_triangulations(n: u32) -> Vec<Triangulation> {
    enumerate_triangulations(n).expect("n >= 3")
}
