//! Serialization, model generators and reporting.

pub mod format;
pub mod generate;
pub mod report;
pub mod syncword;
