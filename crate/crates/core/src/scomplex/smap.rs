use std::sync::Arc;

use super::simplex::{CellId, Simplex};
use super::sset::SSet;
use crate::{Error, Result};

/// A simplicial map, determined by where it sends each nondegenerate cell.
#[derive(Clone, Debug)]
pub struct SMap {
    source: Arc<SSet>,
    target: Arc<SSet>,
    assign: Vec<Vec<Simplex>>,
}

impl PartialEq for SMap {
    fn eq(&self, other: &Self) -> bool {
        self.assign == other.assign
    }
}

impl Eq for SMap {}

impl SMap {
    /// Validates dimensions and compatibility with every face map.
    pub fn new(source: Arc<SSet>, target: Arc<SSet>, assign: Vec<Vec<Simplex>>) -> Result<Self> {
        let map = SMap::new_unchecked(source, target, assign);
        map.validate()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(
        source: Arc<SSet>,
        target: Arc<SSet>,
        mut assign: Vec<Vec<Simplex>>,
    ) -> Self {
        assign.resize(source.cell_counts().len(), Vec::new());
        SMap {
            source,
            target,
            assign,
        }
    }

    /// Builds a map from a function on nondegenerate cells.
    pub fn from_fn(
        source: Arc<SSet>,
        target: Arc<SSet>,
        mut f: impl FnMut(CellId) -> Result<Simplex>,
    ) -> Result<Self> {
        let mut assign = Vec::new();
        for d in 0..source.cell_counts().len() {
            assign.push(source.cells(d).map(&mut f).collect::<Result<Vec<_>>>()?);
        }
        SMap::new(source, target, assign)
    }

    fn validate(&self) -> Result<()> {
        for cell in self.source.all_cells() {
            let img = self.assign.get(cell.dim).and_then(|a| a.get(cell.index));
            let img = img.ok_or_else(|| {
                Error::NotSimplicial(format!(
                    "cell `{}` is unassigned",
                    self.source.cell_name(cell)
                ))
            })?;
            if img.dim() != cell.dim || img.cell.index >= self.target.cell_count(img.cell.dim) {
                return Err(Error::NotSimplicial(format!(
                    "image of `{}` has the wrong dimension",
                    self.source.cell_name(cell)
                )));
            }
            if cell.dim == 0 {
                continue;
            }
            for (i, face) in self.source.cell_faces(cell).iter().enumerate() {
                if self.apply(face) != self.target.face(img, i) {
                    return Err(Error::NotSimplicial(format!(
                        "face {i} of `{}` is not preserved",
                        self.source.cell_name(cell)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: Arc<SSet>) -> Self {
        let assign = (0..x.cell_counts().len())
            .map(|d| x.cells(d).map(Simplex::nondegenerate).collect())
            .collect();
        SMap {
            source: x.clone(),
            target: x,
            assign,
        }
    }

    /// The unique map to a one-vertex target.
    pub fn to_point(x: Arc<SSet>, point: Arc<SSet>) -> Result<Self> {
        let v = point
            .cells(0)
            .next()
            .ok_or_else(|| Error::PreconditionFailed("target has no vertex".into()))?;
        SMap::from_fn(x, point, |c| Ok(Simplex::constant(v, c.dim)))
    }

    pub fn source(&self) -> &Arc<SSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SSet> {
        &self.target
    }

    pub fn image_of_cell(&self, cell: CellId) -> &Simplex {
        &self.assign[cell.dim][cell.index]
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        let img = &self.assign[s.cell.dim][s.cell.index];
        let theta: Vec<usize> = s.surj.iter().map(|&v| v as usize).collect();
        self.target.apply(img, &theta)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SMap) -> SMap {
        let assign = self
            .assign
            .iter()
            .map(|row| row.iter().map(|s| other.apply(s)).collect())
            .collect();
        SMap {
            source: self.source.clone(),
            target: other.target.clone(),
            assign,
        }
    }

    /// Injective as a map of simplicial sets: nondegenerate cells go to
    /// pairwise distinct nondegenerate cells.
    pub fn is_mono(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.assign
            .iter()
            .flatten()
            .all(|s| !s.is_degenerate() && seen.insert(s.cell))
    }

    /// Injective on nondegenerate cells and onto every nondegenerate cell.
    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.source.cell_counts() == self.target.cell_counts()
    }

    /// Assignment rendered in face-ref syntax, keyed by source cell id.
    pub fn labelled(&self) -> Vec<(String, String)> {
        self.source
            .all_cells()
            .map(|c| {
                (
                    self.source.cell_name(c).to_string(),
                    self.target.label(self.image_of_cell(c)),
                )
            })
            .collect()
    }

}
