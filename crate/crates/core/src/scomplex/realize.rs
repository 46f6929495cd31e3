use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use super::simplex::{CellId, Simplex};
use super::smap::SMap;
use super::sset::{SSet, SSetBuilder};
use crate::{Budget, Error, Result};

/// A simplicial object described elementwise: candidate elements per
/// dimension plus face and degeneracy operators.
///
/// [`realize`] turns such a description into an [`SSet`] by detecting which
/// elements are degenerate.
pub trait SimplicialObject {
    type Elem: Clone + Eq + Hash;

    /// Candidate `dim`-simplices. Degenerate elements may be omitted; the
    /// realizer adds all degeneracies of accepted lower elements itself.
    fn elements(&self, dim: usize, budget: &Budget) -> Result<Vec<Self::Elem>>;

    fn face(&self, dim: usize, i: usize, e: &Self::Elem) -> Self::Elem;

    fn degeneracy(&self, dim: usize, j: usize, e: &Self::Elem) -> Self::Elem;

    /// Cell name; must be unique among nondegenerate elements of one dimension.
    fn label(&self, dim: usize, e: &Self::Elem) -> String;
}

/// How to treat candidates whose faces were not accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Any missing face is an error.
    Strict,
    /// Drop the candidate. Used for truncated enumerations; the result is
    /// the largest subcomplex spanned by accepted candidates.
    Filter,
}

/// A simplicial set together with the element each of its simplices came from.
#[derive(Clone, Debug)]
pub struct Realized<E> {
    pub sset: Arc<SSet>,
    lookup: Vec<HashMap<E, Simplex>>,
    cells: Vec<Vec<E>>,
    /// Set when [`Closure::Filter`] dropped at least one candidate.
    pub truncated: bool,
}

impl<E: Clone + Eq + Hash> Realized<E> {
    pub fn simplex(&self, dim: usize, e: &E) -> Option<&Simplex> {
        self.lookup.get(dim)?.get(e)
    }

    pub fn element(&self, cell: CellId) -> &E {
        &self.cells[cell.dim][cell.index]
    }

    /// Number of accepted `dim`-simplices, degenerate ones included.
    pub fn simplex_count(&self, dim: usize) -> usize {
        self.lookup.get(dim).map_or(0, |m| m.len())
    }

    pub fn max_dim(&self) -> usize {
        self.lookup.len().saturating_sub(1)
    }
}

pub fn realize<O: SimplicialObject>(
    name: &str,
    obj: &O,
    max_dim: usize,
    closure: Closure,
    budget: &Budget,
) -> Result<Realized<O::Elem>> {
    let mut builder = SSetBuilder::new(name);
    let mut lookup: Vec<HashMap<O::Elem, Simplex>> = Vec::new();
    let mut cells: Vec<Vec<O::Elem>> = Vec::new();
    let mut truncated = false;
    for dim in 0..=max_dim {
        let mut level: HashMap<O::Elem, Simplex> = HashMap::new();
        let mut level_cells = Vec::new();
        if dim > 0 {
            let below: Vec<(O::Elem, Simplex)> = lookup[dim - 1]
                .iter()
                .map(|(e, s)| (e.clone(), s.clone()))
                .collect();
            for (e, s) in below {
                for j in 0..dim {
                    let up = obj.degeneracy(dim - 1, j, &e);
                    let nf = builder.current().degen(&s, j);
                    if let Some(prev) = level.get(&up) {
                        if prev != &nf {
                            return Err(Error::malformed(format!(
                                "{name}: degeneracies are inconsistent in dimension {dim}"
                            )));
                        }
                    } else {
                        level.insert(up, nf);
                    }
                }
            }
        }
        let candidates = obj.elements(dim, budget)?;
        if candidates.len() > budget.elements {
            return Err(Error::EnumerationImpossible(format!(
                "{name}: {} candidates in dimension {dim} exceed the budget of {}",
                candidates.len(),
                budget.elements
            )));
        }
        for e in candidates {
            if level.contains_key(&e) {
                continue;
            }
            let faces = if dim == 0 {
                Some(Vec::new())
            } else {
                (0..=dim)
                    .map(|i| lookup[dim - 1].get(&obj.face(dim, i, &e)).cloned())
                    .collect::<Option<Vec<_>>>()
            };
            let faces = match faces {
                Some(f) => f,
                None if closure == Closure::Filter => {
                    truncated = true;
                    continue;
                }
                None => {
                    return Err(Error::EnumerationImpossible(format!(
                        "{name}: a face of `{}` lies outside the enumerated range",
                        obj.label(dim, &e)
                    )))
                }
            };
            let mut label = obj.label(dim, &e);
            while builder.has_id(&label) {
                label.push('\'');
            }
            let cell = builder.add_cell(dim, &label, faces)?;
            level.insert(e.clone(), Simplex::nondegenerate(cell));
            level_cells.push(e);
        }
        lookup.push(level);
        cells.push(level_cells);
    }
    Ok(Realized {
        sset: Arc::new(builder.finish()),
        lookup,
        cells,
        truncated,
    })
}

/// Builds the map induced by an elementwise function between realizations.
pub fn realize_map<E1, E2>(
    source: &Realized<E1>,
    target: &Realized<E2>,
    f: impl Fn(usize, &E1) -> E2,
) -> Result<SMap>
where
    E1: Clone + Eq + Hash,
    E2: Clone + Eq + Hash,
{
    SMap::from_fn(source.sset.clone(), target.sset.clone(), |cell| {
        let img = f(cell.dim, source.element(cell));
        target.simplex(cell.dim, &img).cloned().ok_or_else(|| {
            Error::EnumerationImpossible(format!(
                "image of `{}` lies outside the enumerated target",
                source.sset.cell_name(cell)
            ))
        })
    })
}
