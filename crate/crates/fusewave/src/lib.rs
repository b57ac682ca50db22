//! File formats, parallel evaluation and the command-line interface on top
//! of `fusewave-core`.

pub mod cli;
pub mod container;
pub mod io;
pub mod parallel;
pub mod report;
pub mod testpair;
