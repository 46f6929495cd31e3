//! Components, fundamental groupoids, presented fundamental groups and
//! bounded group comparison.
mod fundamental;
mod group;

pub use fundamental::{
    component_of, fiber_exactness_check, fundamental_groupoid, pi0, pi1, pi1_at, pi_n_classes, vertex_group,
    ExactnessReport, GroupoidPresentation, PiClasses,
};
pub(crate) use fundamental::spherical_classes;
pub use group::{
    compare_groups, dihedral, invert, quaternion, reduce, small_groups, Abelianization,
    CompareVerdict, CosetTable, GroupPresentation, Word,
};
