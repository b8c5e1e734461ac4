//! Report types shared by the `polyescape` binary and its tests.

pub mod report;
