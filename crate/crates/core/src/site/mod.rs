//! Presheaves of simplicial sets and of simplicial groupoids over a finite
//! category with the trivial topology.
mod cat;
mod enrich;
pub(crate) mod gpd;
mod model;
mod presheaf;

pub use cat::{build_site, load_site, parse_site, ArrowSpec, CatArrow, FiniteCat, SiteSpec};
pub use presheaf::{
    build_presheaf, free_adjunction, free_map, free_presheaf, load_presheaf, presheaf_homs, FreeAdjunctionReport, FreePresheaf, Presheaf, PresheafMap,
    PresheafSpec,
};
pub use model::{
    generating_sets, is_local_weq, is_n_equivalence, is_n_fibration_presheaf, is_projective_fibration, rlp_against,
    section_weq, Equivalence, Generator, GeneratingSets, PresheafCertificate, RlpCertificate, Sampling, WeqReport,
};
pub use enrich::{cotensor, mapping_space, tensor};
pub use gpd::{
    diag_nerve_presheaf, loop_groupoid_presheaf, postnikov_gpd_presheaf, roundtrip_check, sectionwise, unit_check,
    wbar_presheaf, GpdPresheaf, RoundtripReport, RoundtripSection, SectionwiseOp,
};
