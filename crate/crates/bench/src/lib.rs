//! Criterion benchmarks only; see benches/hotpaths.rs.
