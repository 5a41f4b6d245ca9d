//! JSON formats, property suites and the command surface of `elegant`.

pub mod commands;
pub mod corpus;
pub mod format;
pub mod report;
pub mod suites;
