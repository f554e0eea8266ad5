//! Benchmarks for the `pmoments` crate; see `benches/`.
