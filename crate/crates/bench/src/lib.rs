//! Benchmarks for the `bivdom` crate live in `benches/`.
