//! Benchmarks for the solver and the real-number engine live in `benches/`.
