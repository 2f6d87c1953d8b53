//! Benchmark harness for the construction toolkit; see `benches/pipeline.rs`.
