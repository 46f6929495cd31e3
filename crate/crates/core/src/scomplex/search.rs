use std::collections::HashMap;
use std::sync::Arc;

use super::simplex::{CellId, Simplex};
use super::smap::SMap;
use super::sset::SSet;
use crate::{Budget, Error, Result};

/// Backtracking search for simplicial maps `source → target`.
///
/// Cells are assigned in order of dimension and position; candidates for a
/// cell are the target simplices whose boundary matches the images already
/// chosen for its faces, tried in `Simplex` order. The first solution found
/// is therefore the lexicographically least assignment. A branch is cut as
/// soon as some later cell has all faces assigned but no possible image. Optional
/// constraints pin individual cells (`fix`) or require the map to lie over
/// a base (`over`: `p ∘ h = q`).
pub struct MapSearch<'a> {
    source: &'a Arc<SSet>,
    target: &'a Arc<SSet>,
    fixed: HashMap<CellId, Simplex>,
    over: Option<(&'a SMap, &'a SMap)>,
    injective: bool,
    used: std::collections::HashSet<CellId>,
    nodes: u64,
    limit: u64,
}

impl<'a> MapSearch<'a> {
    pub fn new(source: &'a Arc<SSet>, target: &'a Arc<SSet>, budget: &Budget) -> Self {
        MapSearch {
            source,
            target,
            fixed: HashMap::new(),
            over: None,
            injective: false,
            used: Default::default(),
            nodes: 0,
            limit: budget.search_nodes,
        }
    }

    pub fn fix(mut self, cell: CellId, image: Simplex) -> Self {
        self.fixed.insert(cell, image);
        self
    }

    /// Requires `p ∘ h = q` for the map `h` being searched.
    pub fn over(mut self, p: &'a SMap, q: &'a SMap) -> Self {
        self.over = Some((p, q));
        self
    }

    /// Restricts to maps sending nondegenerate cells to distinct nondegenerate cells.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes
    }

    /// Calls `visit` on each solution in order until it returns `false`.
    pub fn for_each(&mut self, mut visit: impl FnMut(SMap) -> bool) -> Result<()> {
        let cells: Vec<CellId> = self.source.all_cells().collect();
        let mut assign: Vec<Vec<Option<Simplex>>> = self
            .source
            .cell_counts()
            .iter()
            .map(|&n| vec![None; n])
            .collect();
        if cells.is_empty() {
            visit(self.finish(&assign));
            return Ok(());
        }
        let checks = self.forward_checks(&cells);
        // one frame per assigned cell: its candidates and the next one to try
        let mut stack: Vec<(Vec<Simplex>, usize)> = Vec::with_capacity(cells.len());
        stack.push((self.candidates(cells[0], &assign)?, 0));
        while !stack.is_empty() {
            let pos = stack.len() - 1;
            let frame = &mut stack[pos];
            let cell = cells[pos];
            if let Some(prev) = assign[cell.dim][cell.index].take() {
                self.used.remove(&prev.cell);
            }
            let mut chosen = None;
            while frame.1 < frame.0.len() {
                let cand = &frame.0[frame.1];
                frame.1 += 1;
                if self.injective && (cand.is_degenerate() || self.used.contains(&cand.cell)) {
                    continue;
                }
                chosen = Some(cand.clone());
                break;
            }
            let Some(cand) = chosen else {
                stack.pop();
                continue;
            };
            if self.injective {
                self.used.insert(cand.cell);
            }
            assign[cell.dim][cell.index] = Some(cand);
            if checks[pos].iter().any(|&later| !self.has_image(later, &assign)) {
                continue;
            }
            if pos + 1 == cells.len() {
                if !visit(self.finish(&assign)) {
                    return Ok(());
                }
            } else {
                let next = self.candidates(cells[pos + 1], &assign)?;
                stack.push((next, 0));
            }
        }
        Ok(())
    }

    pub fn first(&mut self) -> Result<Option<SMap>> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m);
            false
        })?;
        Ok(found)
    }

    pub fn all(&mut self) -> Result<Vec<SMap>> {
        let mut out = Vec::new();
        self.for_each(|m| {
            out.push(m);
            true
        })?;
        Ok(out)
    }

    pub fn count(&mut self) -> Result<usize> {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            true
        })?;
        Ok(n)
    }

    /// For each position, the cells after the next one whose faces are all
    /// assigned once that position is.
    fn forward_checks(&self, cells: &[CellId]) -> Vec<Vec<CellId>> {
        let pos: HashMap<CellId, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut checks = vec![Vec::new(); cells.len()];
        for (i, &c) in cells.iter().enumerate() {
            if c.dim == 0 {
                continue;
            }
            let last = self.source.cell_faces(c).iter().map(|f| pos[&f.cell]).max().unwrap_or(0);
            if i > last + 1 {
                checks[last].push(c);
            }
        }
        checks
    }

    fn has_image(&self, cell: CellId, assign: &[Vec<Option<Simplex>>]) -> bool {
        let boundary: Vec<Simplex> = self
            .source
            .cell_faces(cell)
            .iter()
            .map(|f| self.image(assign, f))
            .collect();
        self.target.has_boundary(cell.dim, &boundary)
    }

    fn image(&self, assign: &[Vec<Option<Simplex>>], s: &Simplex) -> Simplex {
        let img = assign[s.cell.dim][s.cell.index]
            .as_ref()
            .expect("faces are assigned before their cell");
        let theta: Vec<usize> = s.surj.iter().map(|&v| v as usize).collect();
        self.target.apply(img, &theta)
    }

    fn finish(&self, assign: &[Vec<Option<Simplex>>]) -> SMap {
        let full = assign
            .iter()
            .map(|row| row.iter().map(|s| s.clone().unwrap()).collect())
            .collect();
        SMap::new_unchecked(self.source.clone(), self.target.clone(), full)
    }

    /// Images for `cell` compatible with its already assigned faces and the
    /// `fix`/`over` constraints.
    fn candidates(&mut self, cell: CellId, assign: &[Vec<Option<Simplex>>]) -> Result<Vec<Simplex>> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::SearchBudgetExceeded(self.limit));
        }
        let boundary: Vec<Simplex> = self
            .source
            .cell_faces(cell)
            .iter()
            .map(|f| self.image(assign, f))
            .collect();
        let mut candidates = match self.fixed.get(&cell) {
            Some(img) => {
                if img.dim() != cell.dim || (cell.dim > 0 && self.target.boundary(img) != boundary)
                {
                    return Ok(Vec::new());
                }
                vec![img.clone()]
            }
            None if cell.dim == 0 => self.target.cells(0).map(Simplex::nondegenerate).collect(),
            None => self.target.with_boundary(cell.dim, &boundary),
        };
        if let Some((p, q)) = self.over {
            let want = q.apply(&Simplex::nondegenerate(cell));
            candidates.retain(|c| p.apply(c) == want);
        }
        Ok(candidates)
    }
}

/// Every simplicial map `x → y`, in lexicographic order of assignments.
pub fn hom_enumerate(x: &Arc<SSet>, y: &Arc<SSet>, budget: &Budget) -> Result<Vec<SMap>> {
    MapSearch::new(x, y, budget).all()
}

/// Searches for an isomorphism `x → y`.
pub fn find_isomorphism(x: &Arc<SSet>, y: &Arc<SSet>, budget: &Budget) -> Result<Option<SMap>> {
    if x.cell_counts() != y.cell_counts() {
        return Ok(None);
    }
    // with equal cell counts an injective map on nondegenerate cells is bijective
    MapSearch::new(x, y, budget).injective().first()
}
