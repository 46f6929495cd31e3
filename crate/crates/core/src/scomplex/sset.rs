use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::simplex::{codegeneracy, coface, full_mask, mask_vertices, CellId, Simplex};
use crate::{Error, Result};

/// Simplices of one dimension grouped by their boundary tuple.
pub(crate) type BoundaryIndex = HashMap<Vec<Simplex>, Vec<Simplex>>;

#[derive(Clone, Debug)]
struct Cell {
    id: String,
    faces: Vec<Simplex>,
    /// `sub[mask]` is the face spanned by the vertices in `mask`, in normal form.
    sub: Vec<Simplex>,
}

/// A finite simplicial set given by its nondegenerate cells and their faces.
///
/// Every simplex of every dimension is reachable as a [`Simplex`] in normal
/// form; the face and degeneracy operators act on those. Values are
/// immutable once built.
pub struct SSet {
    name: String,
    cells: Vec<Vec<Cell>>,
    index: HashMap<String, CellId>,
    boundary_cache: Mutex<HashMap<usize, Arc<BoundaryIndex>>>,
}

impl Clone for SSet {
    fn clone(&self) -> Self {
        SSet {
            name: self.name.clone(),
            cells: self.cells.clone(),
            index: self.index.clone(),
            boundary_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for SSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SSet")
            .field("name", &self.name)
            .field("cells", &self.cell_counts())
            .finish()
    }
}

impl SSet {
    pub fn empty(name: &str) -> Self {
        SSetBuilder::new(name).finish()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.is_empty())
    }

    /// Highest dimension carrying a nondegenerate cell (0 for the empty set).
    pub fn top_dim(&self) -> usize {
        self.cells.iter().rposition(|c| !c.is_empty()).unwrap_or(0)
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, |c| c.len())
    }

    /// Number of nondegenerate cells per dimension, `0..=top_dim`.
    pub fn cell_counts(&self) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        (0..=self.top_dim()).map(|d| self.cell_count(d)).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(|c| c.len()).sum()
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cell_count(dim)).map(move |index| CellId { dim, index })
    }

    /// All nondegenerate cells ordered by dimension, then position.
    pub fn all_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).flat_map(move |d| self.cells(d))
    }

    pub fn cell_name(&self, cell: CellId) -> &str {
        &self.cells[cell.dim][cell.index].id
    }

    pub fn lookup(&self, id: &str) -> Option<CellId> {
        self.index.get(id).copied()
    }

    pub fn vertex(&self, id: &str) -> Result<CellId> {
        match self.lookup(id) {
            Some(c) if c.dim == 0 => Ok(c),
            _ => Err(Error::VertexNotFound(id.to_string())),
        }
    }

    pub fn cell_faces(&self, cell: CellId) -> &[Simplex] {
        &self.cells[cell.dim][cell.index].faces
    }

    /// Applies the simplicial operator with value table `theta : [m] → [n]`.
    pub fn apply(&self, s: &Simplex, theta: &[usize]) -> Simplex {
        let values: Vec<usize> = theta.iter().map(|&k| s.surj[k] as usize).collect();
        let mut mask = 0u32;
        for &v in &values {
            mask |= 1 << v;
        }
        let image = mask_vertices(mask);
        let base = &self.cells[s.cell.dim][s.cell.index].sub[mask as usize];
        let surj = values
            .iter()
            .map(|v| {
                let pos = image.binary_search(v).expect("value lies in image");
                base.surj[pos]
            })
            .collect();
        Simplex {
            cell: base.cell,
            surj,
        }
    }

    pub fn face(&self, s: &Simplex, i: usize) -> Simplex {
        self.apply(s, &coface(s.dim(), i))
    }

    pub fn degen(&self, s: &Simplex, j: usize) -> Simplex {
        self.apply(s, &codegeneracy(s.dim(), j))
    }

    pub fn vertex_of(&self, s: &Simplex, k: usize) -> CellId {
        self.apply(s, &[k]).cell
    }

    pub fn vertices_of(&self, s: &Simplex) -> Vec<CellId> {
        (0..=s.dim()).map(|k| self.vertex_of(s, k)).collect()
    }

    pub fn boundary(&self, s: &Simplex) -> Vec<Simplex> {
        if s.dim() == 0 {
            return Vec::new();
        }
        (0..=s.dim()).map(|i| self.face(s, i)).collect()
    }

    /// Totally degenerate `dim`-simplex on a vertex.
    pub fn point(&self, vertex: CellId, dim: usize) -> Simplex {
        Simplex::constant(vertex, dim)
    }

    /// Every element of `X_n`, degenerate ones included, sorted.
    pub fn simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for p in 0..=n.min(self.top_dim()) {
            if self.cell_count(p) == 0 {
                continue;
            }
            let surjections = surjections(n, p);
            for cell in self.cells(p) {
                for surj in &surjections {
                    out.push(Simplex {
                        cell,
                        surj: surj.clone(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    pub(crate) fn boundary_index(&self, dim: usize) -> Arc<BoundaryIndex> {
        if let Some(idx) = self.boundary_cache.lock().unwrap().get(&dim) {
            return idx.clone();
        }
        let mut idx: BoundaryIndex = HashMap::new();
        for s in self.simplices(dim) {
            idx.entry(self.boundary(&s)).or_default().push(s);
        }
        let idx = Arc::new(idx);
        self.boundary_cache
            .lock()
            .unwrap()
            .insert(dim, idx.clone());
        idx
    }

    /// Simplices of dimension `dim` whose boundary is exactly `faces`.
    pub fn with_boundary(&self, dim: usize, faces: &[Simplex]) -> Vec<Simplex> {
        self.boundary_index(dim)
            .get(faces)
            .cloned()
            .unwrap_or_default()
    }

    pub fn has_boundary(&self, dim: usize, faces: &[Simplex]) -> bool {
        self.boundary_index(dim).contains_key(faces)
    }

    /// Face-ref rendering, e.g. `s[3,1] e2` or `e2`.
    pub fn label(&self, s: &Simplex) -> String {
        let word = s.word();
        let id = self.cell_name(s.cell);
        if word.is_empty() {
            id.to_string()
        } else {
            let w: Vec<String> = word.iter().map(|j| j.to_string()).collect();
            format!("s[{}] {}", w.join(","), id)
        }
    }

    pub fn parse_ref(&self, text: &str) -> Result<Simplex> {
        let text = text.trim();
        let (word, id) = match text.strip_prefix("s[") {
            Some(rest) => {
                let close = rest
                    .find(']')
                    .ok_or_else(|| Error::malformed(format!("unterminated word in `{text}`")))?;
                let word = rest[..close]
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        t.trim().parse::<usize>().map_err(|_| {
                            Error::malformed(format!("bad degeneracy index in `{text}`"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                (word, rest[close + 1..].trim())
            }
            None => (Vec::new(), text),
        };
        let cell = self
            .lookup(id)
            .ok_or_else(|| Error::malformed(format!("unknown cell `{id}`")))?;
        Simplex::from_word(cell, &word).ok_or_else(|| {
            Error::malformed(format!("degeneracy word of `{text}` is not in normal form"))
        })
    }

    /// Sub-simplicial set of cells of dimension at most `dim`.
    pub fn skeleton(&self, dim: usize) -> SSet {
        let mut b = SSetBuilder::new(&format!("sk{dim}({})", self.name));
        for d in 0..=dim.min(self.cells.len().saturating_sub(1)) {
            for c in &self.cells[d] {
                b.add_cell(d, &c.id, c.faces.clone())
                    .expect("faces of a valid set stay valid");
            }
        }
        b.finish()
    }

    /// Same cell names in the same order with the same faces.
    pub fn structurally_equal(&self, other: &SSet) -> bool {
        self.cell_counts() == other.cell_counts()
            && self.cells.iter().zip(&other.cells).all(|(a, b)| {
                a.iter()
                    .zip(b)
                    .all(|(x, y)| x.id == y.id && x.faces == y.faces)
            })
    }
}

/// All monotone surjections `[n] → [p]` as value tables, in lexicographic order.
pub(crate) fn surjections(n: usize, p: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    // choose which of the n steps k → k+1 are increments
    let mut steps = vec![false; n];
    fn rec(k: usize, left: usize, steps: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if k == steps.len() {
            if left == 0 {
                let mut v = vec![0u8];
                for &s in steps.iter() {
                    let last = *v.last().unwrap();
                    v.push(if s { last + 1 } else { last });
                }
                out.push(v);
            }
            return;
        }
        if steps.len() - k > left {
            steps[k] = false;
            rec(k + 1, left, steps, out);
        }
        if left > 0 {
            steps[k] = true;
            rec(k + 1, left - 1, steps, out);
        }
    }
    rec(0, p, &mut steps, &mut out);
    out.sort();
    out
}

/// Incremental constructor; cells must be added in nondecreasing dimension.
///
/// Each cell is validated on insertion: face dimensions, the simplicial
/// identities `d_i d_j = d_{j-1} d_i` (i < j) against the cells already
/// present, and name uniqueness.
pub struct SSetBuilder {
    sset: SSet,
}

impl SSetBuilder {
    pub fn new(name: &str) -> Self {
        SSetBuilder {
            sset: SSet {
                name: name.to_string(),
                cells: Vec::new(),
                index: HashMap::new(),
                boundary_cache: Mutex::new(HashMap::new()),
            },
        }
    }

    pub fn current(&self) -> &SSet {
        &self.sset
    }

    pub fn has_id(&self, id: &str) -> bool {
        self.sset.index.contains_key(id)
    }

    pub fn add_cell(&mut self, dim: usize, id: &str, faces: Vec<Simplex>) -> Result<CellId> {
        let x = &mut self.sset;
        if dim < x.top_dim() && !x.is_empty() {
            return Err(Error::malformed(format!(
                "cell `{id}` of dimension {dim} added after dimension {}",
                x.top_dim()
            )));
        }
        if dim >= 31 {
            return Err(Error::DimBudgetExceeded {
                requested: dim,
                bound: 30,
            });
        }
        if x.index.contains_key(id) {
            return Err(Error::malformed(format!("duplicate cell id `{id}`")));
        }
        let expected = if dim == 0 { 0 } else { dim + 1 };
        if faces.len() != expected {
            return Err(Error::malformed(format!(
                "cell `{id}` of dimension {dim} needs {expected} faces, got {}",
                faces.len()
            )));
        }
        for f in &faces {
            let ok = f.dim() + 1 == dim
                && f.cell.dim <= f.dim()
                && f.cell.index < x.cell_count(f.cell.dim)
                && f.surj.first() == Some(&0)
                && f.surj.last().map(|&v| v as usize) == Some(f.cell.dim)
                && f.surj.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
            if !ok {
                return Err(Error::malformed(format!(
                    "face of `{id}` is not a valid {}-simplex",
                    dim.saturating_sub(1)
                )));
            }
        }
        for j in 0..if dim >= 2 { faces.len() } else { 0 } {
            for i in 0..j {
                if x.face(&faces[j], i) != x.face(&faces[i], j - 1) {
                    return Err(Error::SimplicialIdentityViolation {
                        cell: id.to_string(),
                        i,
                        j,
                    });
                }
            }
        }
        let cell = CellId {
            dim,
            index: x.cell_count(dim),
        };
        let full = full_mask(dim);
        let mut sub = vec![Simplex::nondegenerate(cell); full as usize + 1];
        for mask in 1..full {
            let missing = (0..=dim).rev().find(|b| mask & (1 << b) == 0).unwrap();
            let low = mask & ((1 << missing) - 1);
            let high = (mask >> (missing + 1)) << missing;
            let theta = mask_vertices(low | high);
            sub[mask as usize] = x.apply(&faces[missing], &theta);
        }
        while x.cells.len() <= dim {
            x.cells.push(Vec::new());
        }
        x.cells[dim].push(Cell {
            id: id.to_string(),
            faces,
            sub,
        });
        x.index.insert(id.to_string(), cell);
        Ok(cell)
    }

    pub fn finish(self) -> SSet {
        self.sset
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(3, 1).len(), 3);
        assert_eq!(surjections(4, 4).len(), 1);
        assert_eq!(surjections(2, 0), vec![vec![0, 0, 0]]);
    }

    fn triangle() -> SSet {
        let mut b = SSetBuilder::new("t");
        let v: Vec<CellId> = (0..3)
            .map(|i| b.add_cell(0, &format!("v{i}"), vec![]).unwrap())
            .collect();
        let nd = Simplex::nondegenerate;
        let e01 = b.add_cell(1, "e01", vec![nd(v[1]), nd(v[0])]).unwrap();
        let e02 = b.add_cell(1, "e02", vec![nd(v[2]), nd(v[0])]).unwrap();
        let e12 = b.add_cell(1, "e12", vec![nd(v[2]), nd(v[1])]).unwrap();
        b.add_cell(2, "t", vec![nd(e12), nd(e02), nd(e01)]).unwrap();
        b.finish()
    }

    #[test]
    fn faces_of_degenerate_simplices() {
        let x = triangle();
        let t = Simplex::nondegenerate(x.lookup("t").unwrap());
        let s1t = x.degen(&t, 1);
        assert_eq!(s1t.word(), vec![1]);
        assert_eq!(x.face(&s1t, 1), t);
        assert_eq!(x.face(&s1t, 2), t);
        let d0 = x.face(&s1t, 0);
        assert_eq!(x.label(&d0), "s[0] e12");
        assert_eq!(x.label(&x.face(&s1t, 3)), "s[1] e01");
    }

    #[test]
    fn identity_violation_is_reported() {
        let mut b = SSetBuilder::new("bad");
        let v0 = b.add_cell(0, "a", vec![]).unwrap();
        let v1 = b.add_cell(0, "b", vec![]).unwrap();
        let nd = Simplex::nondegenerate;
        let e = b.add_cell(1, "e", vec![nd(v1), nd(v0)]).unwrap();
        let f = b.add_cell(1, "f", vec![nd(v0), nd(v0)]).unwrap();
        let err = b.add_cell(2, "t", vec![nd(e), nd(f), nd(f)]).unwrap_err();
        assert!(matches!(err, Error::SimplicialIdentityViolation { .. }));
    }

    #[test]
    fn parse_and_label_agree() {
        let x = triangle();
        let s = x.parse_ref("s[2,0] e02").unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(x.label(&s), "s[2,0] e02");
        assert!(x.parse_ref("s[0,2] e02").is_err());
        assert!(x.parse_ref("nope").is_err());
    }
}
