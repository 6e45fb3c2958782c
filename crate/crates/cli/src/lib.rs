//! Pipeline, reports and result cache behind the `vkg` command.

pub mod cache;
pub mod pipeline;
pub mod report;
