//! Benchmarks for the evendecomp library; see `benches/`.
