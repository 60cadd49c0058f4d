//! Benchmark-only crate; see `benches/lab.rs` for the criterion targets.
