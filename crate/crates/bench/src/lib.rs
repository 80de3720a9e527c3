//! Benchmarks live in `benches/`; run with `cargo bench -p casimir-thermo-bench`.
