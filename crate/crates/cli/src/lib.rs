//! Report types emitted by the `circle-pursuit` binary, importable so that
//! consumers (and the round-trip tests) can parse its JSON output.

pub mod output;
