//! Finite simplicial sets in Eilenberg-Zilber normal form, simplicial maps,
//! and the basic constructions on them.
mod constructions;
pub mod format;
mod realize;
mod search;
mod simplex;
mod smap;
mod sset;

pub use constructions::{
    boundary, circle, coproduct, disjoint_union, horn, product, pushout, simplex_inclusion,
    pullback, simplex_of_vertices, standard, Product,
};
pub use format::{build_sset, load_smap, load_sset, parse_smap, parse_sset, sset_to_json};
pub use realize::{realize, realize_map, Closure, Realized, SimplicialObject};
pub use search::{find_isomorphism, hom_enumerate, MapSearch};
pub use simplex::{CellId, Simplex};
pub(crate) use simplex::{codegeneracy, coface, full_mask, mask_vertices, Compact};
pub use smap::SMap;
pub use sset::{SSet, SSetBuilder};
pub(crate) use constructions::vertex_name;

/// Id of the facet of `Δ^n` opposite vertex `i`.
pub(crate) fn facet_name(n: usize, i: usize) -> String {
    vertex_name(full_mask(n) & !(1 << i), n)
}

/// `simplices(X, n)`: every element of `X_n`, degenerate ones included.
pub fn simplices(x: &SSet, n: usize) -> Vec<Simplex> {
    x.simplices(n)
}
