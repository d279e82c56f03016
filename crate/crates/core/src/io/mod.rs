//! File formats, the artifact cache, reports and job orchestration.

pub mod cache;
pub mod format;
pub mod job;
pub mod report;
