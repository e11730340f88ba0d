//! Criterion benchmarks for the piercers; run with `cargo bench -p pierce-lab-bench`.
