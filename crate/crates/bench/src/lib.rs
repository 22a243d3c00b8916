//! Criterion benchmarks for reebmult live under `benches/`.
