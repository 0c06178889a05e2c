//! Criterion benchmarks for the exact checks and the sampled geometry; see `benches/`.
