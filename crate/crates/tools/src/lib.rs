//! File formats, bundled data, parallel drivers and the acceptance suite for
//! `nambu-core`.

pub mod data;
pub mod format;
pub mod manifest;
pub mod parallel;
pub mod suite;
