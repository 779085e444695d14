//! Integer Chow rings of projective bundles and towers, with decision
//! procedures for isomorphism of their graded rings.

pub mod chern;
pub mod cli;
pub mod decide;
pub mod graded_ring;
pub mod intpoly;
pub mod oracle;
