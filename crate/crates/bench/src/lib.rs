//! Benchmarks for blowent-core live in `benches/`; this crate has no API.
