//! Multioperations on small finite universes.

pub mod algebra;
pub mod classify;
pub mod compose;
pub mod error;
pub mod five_type;
pub mod group;
pub mod opfile;
pub mod projection;
pub mod report;
