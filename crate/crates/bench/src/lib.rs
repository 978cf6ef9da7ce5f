//! Criterion benchmarks for code generation and decoding; see `benches/`.
