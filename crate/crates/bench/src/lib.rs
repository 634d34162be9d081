//! Benchmark-only crate; see `benches/counts.rs`.
