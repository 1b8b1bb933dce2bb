//! Criterion benchmarks for entrywise-core live in `benches/`.
