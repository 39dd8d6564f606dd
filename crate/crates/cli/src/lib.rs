//! Library side of the `unruh` command line tool: sweeps, maximum finding,
//! Hawking-temperature conversions, protocol runs and the validation suite.

pub mod hawking;
pub mod maxfind;
pub mod protocol;
pub mod sweep;
pub mod validate;
