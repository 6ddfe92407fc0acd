//! Library side of the `gruss` binary: the seeded verification campaign and
//! its report types, shared with the acceptance suite.

pub mod campaign;
