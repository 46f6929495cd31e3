//! Groupoids, their nerves, and simplicial groupoids with discrete object sets.
mod adjoint;
mod format;
mod groupoid;
mod simplicial;

pub use groupoid::{nerve, nerve_map, nerve_sset, Chain, FiniteGroupoid, Functor, GArrow};
pub use simplicial::{
    diag_nerve, diag_nerve_map, hom_space, wbar, wbar_map, Arrow, Body, DiagChain, HomSpace, SGpd, SGpdMap, WString,
};
pub use adjoint::{
    adjunction_bijection, hom_pi0_group, loop_functors, postnikov_gpd, unit_map, AdjunctionReport,
    LoopFunctor, ShiftReport, Unit, shift_check,
};
pub use format::{from_presentation, load_sgpd, parse_sgpd};
