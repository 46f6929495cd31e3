//! Computational kernel for truncated simplicial homotopy theory.
//!
//! The crate works with finite simplicial sets in Eilenberg-Zilber normal
//! form and builds on them: horn filling and lifting, coskeleta and
//! Postnikov sections, the combinatorial criterion for `n`-fibrations,
//! edge-path groups, the loop groupoid `G` with its adjoint `W̄`, and
//! presheaves over finite categories with their generating cofibrations.
//! Infinite constructions are always cut off by an explicit [`Budget`].
mod budget;
mod error;
mod witness;

pub mod cli;
pub mod corpus;
pub mod kan;
pub mod pi;
pub mod scomplex;
pub mod sgpd;
pub mod site;
pub mod truncate;

pub use budget::Budget;
pub use error::{Error, Result};
pub use witness::{KanCertificate, Verdict, Witness};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/simplicial-sets.md")]
    mod simplicial_sets {}
    #[doc = include_str!("../../../book/src/kan.md")]
    mod kan {}
    #[doc = include_str!("../../../book/src/truncation.md")]
    mod truncation {}
    #[doc = include_str!("../../../book/src/homotopy-groups.md")]
    mod homotopy_groups {}
    #[doc = include_str!("../../../book/src/groupoids.md")]
    mod groupoids {}
    #[doc = include_str!("../../../book/src/presheaves.md")]
    mod presheaves {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
