//! File formats, synthetic test imagery and the benchmark harness behind the
//! `flic` command-line tool.

pub mod bench;
pub mod cli;
pub mod labels;
pub mod overlay;
pub mod pnm;
pub mod synth;
