//! Benchmarks for `coxwall`; see `benches/`.
