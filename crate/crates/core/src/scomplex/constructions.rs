use std::collections::HashMap;
use std::sync::Arc;

use super::realize::{realize, Closure, Realized, SimplicialObject};
use super::simplex::{mask_vertices, CellId, Compact, Simplex};
use super::smap::SMap;
use super::sset::{SSet, SSetBuilder};
use crate::{Budget, Error, Result};

pub(crate) fn vertex_name(mask: u32, n: usize) -> String {
    let vs = mask_vertices(mask);
    if n < 10 {
        vs.iter().map(|v| v.to_string()).collect()
    } else {
        let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        parts.join(".")
    }
}

/// Sub-simplicial set of `Δ^n` on the faces (vertex masks) accepted by `keep`.
/// `keep` must be closed under taking faces.
fn simplex_subcomplex(name: &str, n: usize, keep: impl Fn(u32) -> bool) -> SSet {
    let mut b = SSetBuilder::new(name);
    let mut ids: HashMap<u32, CellId> = HashMap::new();
    let full = (1u32 << (n + 1)) - 1;
    for d in 0..=n {
        let mut masks: Vec<u32> = (1..=full)
            .filter(|m| m.count_ones() as usize == d + 1 && keep(*m))
            .collect();
        masks.sort_by_key(|m| mask_vertices(*m));
        for m in masks {
            let vs = mask_vertices(m);
            let faces = if d == 0 {
                Vec::new()
            } else {
                vs.iter()
                    .map(|v| Simplex::nondegenerate(ids[&(m & !(1 << v))]))
                    .collect()
            };
            let cell = b
                .add_cell(d, &vertex_name(m, n), faces)
                .expect("faces of a simplex satisfy the identities");
            ids.insert(m, cell);
        }
    }
    b.finish()
}

/// The standard simplex `Δ^n`: one nondegenerate cell per nonempty vertex subset.
pub fn standard(n: usize) -> SSet {
    simplex_subcomplex(&format!("Δ{n}"), n, |_| true)
}

/// `∂Δ^n`, the standard simplex without its top cell.
pub fn boundary(n: usize) -> SSet {
    let full = (1u32 << (n + 1)) - 1;
    simplex_subcomplex(&format!("∂Δ{n}"), n, |m| m != full)
}

/// The horn `Λ^n_k`: `∂Δ^n` without the face opposite vertex `k`.
pub fn horn(n: usize, k: usize) -> Result<SSet> {
    if n == 0 || k > n {
        return Err(Error::malformed(format!("no horn Λ{n}_{k}")));
    }
    let full = (1u32 << (n + 1)) - 1;
    let opposite = full & !(1 << k);
    Ok(simplex_subcomplex(&format!("Λ{n}_{k}"), n, |m| {
        m != full && m != opposite
    }))
}

/// Inclusion of a subcomplex of `Δ^n` built by this module into `Δ^n`,
/// matching cells by name.
pub fn simplex_inclusion(sub: &Arc<SSet>, n: usize) -> Result<SMap> {
    let delta = Arc::new(standard(n));
    SMap::from_fn(sub.clone(), delta.clone(), |c| {
        let id = sub.cell_name(c);
        delta
            .lookup(id)
            .map(Simplex::nondegenerate)
            .ok_or_else(|| Error::malformed(format!("`{id}` is not a face of Δ{n}")))
    })
}

/// The simplex of `Δ^n` with the given (weakly increasing) vertex list.
pub fn simplex_of_vertices(delta: &SSet, vertices: &[usize], n: usize) -> Simplex {
    let mut mask = 0u32;
    for &v in vertices {
        mask |= 1 << v;
    }
    let image = mask_vertices(mask);
    let cell = delta
        .lookup(&vertex_name(mask, n))
        .expect("every vertex subset is a cell of Δ^n");
    let surj = vertices
        .iter()
        .map(|v| image.binary_search(v).unwrap() as u8)
        .collect();
    Simplex { cell, surj }
}

/// The minimal circle: one vertex `v`, one edge `e` with both faces `v`.
pub fn circle() -> SSet {
    let mut b = SSetBuilder::new("S1");
    let v = b.add_cell(0, "v", vec![]).unwrap();
    let p = Simplex::nondegenerate(v);
    b.add_cell(1, "e", vec![p.clone(), p]).unwrap();
    b.finish()
}

/// Coproduct of the parts; the cells of part `i` are renamed `prefix.id`.
///
/// Returns the coproduct and the inclusion of each part.
pub fn coproduct(name: &str, parts: &[(&str, &Arc<SSet>)]) -> (Arc<SSet>, Vec<SMap>) {
    let mut b = SSetBuilder::new(name);
    let mut maps: Vec<Vec<Vec<Simplex>>> = vec![Vec::new(); parts.len()];
    let top = parts.iter().map(|(_, x)| x.cell_counts().len()).max().unwrap_or(0);
    for d in 0..top {
        for (k, (prefix, x)) in parts.iter().enumerate() {
            let mut row = Vec::new();
            for c in x.cells(d) {
                let faces = x
                    .cell_faces(c)
                    .iter()
                    .map(|f| {
                        let img: &Simplex = &maps[k][f.cell.dim][f.cell.index];
                        Simplex {
                            cell: img.cell,
                            surj: f.surj.clone(),
                        }
                    })
                    .collect();
                let id = format!("{prefix}.{}", x.cell_name(c));
                let cell = b.add_cell(d, &id, faces).expect("coproduct of valid sets");
                row.push(Simplex::nondegenerate(cell));
            }
            if d < x.cell_counts().len() {
                maps[k].push(row);
            }
        }
    }
    let sum = Arc::new(b.finish());
    let inclusions = parts
        .iter()
        .zip(maps)
        .map(|((_, x), assign)| SMap::new_unchecked((*x).clone(), sum.clone(), assign))
        .collect();
    (sum, inclusions)
}

pub fn disjoint_union(x: &Arc<SSet>, y: &Arc<SSet>) -> Arc<SSet> {
    let name = format!("{}⊔{}", x.name(), y.name());
    coproduct(&name, &[("0", x), ("1", y)]).0
}

/// Pushout of `x ← a → y` where at least one leg is a monomorphism.
///
/// Returns the pushout and the two structure maps `x → P`, `y → P`.
pub fn pushout(f: &SMap, g: &SMap) -> Result<(Arc<SSet>, SMap, SMap)> {
    if !(Arc::ptr_eq(f.source(), g.source()) || f.source().structurally_equal(g.source())) {
        return Err(Error::PreconditionFailed(
            "pushout legs must share their source".into(),
        ));
    }
    if f.is_mono() {
        glue(f, g)
    } else if g.is_mono() {
        let (p, gy, fx) = glue(g, f)?;
        Ok((p, fx, gy))
    } else {
        Err(Error::NonInjectiveGlue)
    }
}

/// `mono: A ↪ X`, `other: A → Y`. Cells of `Y` come first, then the cells of
/// `X` outside the image of `A`.
fn glue(mono: &SMap, other: &SMap) -> Result<(Arc<SSet>, SMap, SMap)> {
    let a = mono.source();
    let x = mono.target();
    let y = other.target();
    let mut preimage: HashMap<CellId, CellId> = HashMap::new();
    for c in a.all_cells() {
        preimage.insert(mono.image_of_cell(c).cell, c);
    }
    let mut b = SSetBuilder::new(&format!("{}⊔_{}{}", x.name(), a.name(), y.name()));
    let top = x.cell_counts().len().max(y.cell_counts().len());
    let mut y_in: Vec<Vec<Simplex>> = Vec::new();
    let mut x_in: Vec<Vec<Simplex>> = Vec::new();
    for d in 0..top {
        let mut row = Vec::new();
        for c in y.cells(d) {
            let faces = y
                .cell_faces(c)
                .iter()
                .map(|f| Simplex {
                    cell: y_in[f.cell.dim][f.cell.index].cell,
                    surj: f.surj.clone(),
                })
                .collect();
            let cell = b.add_cell(d, y.cell_name(c), faces)?;
            row.push(Simplex::nondegenerate(cell));
        }
        if d < y.cell_counts().len() {
            y_in.push(row);
        }
        let mut row = Vec::new();
        for c in x.cells(d) {
            if let Some(&ac) = preimage.get(&c) {
                // image of A: glued onto Y through `other`
                let s = other.image_of_cell(ac);
                let img = &y_in[s.cell.dim][s.cell.index];
                let theta: Vec<usize> = s.surj.iter().map(|&v| v as usize).collect();
                row.push(b.current().apply(img, &theta));
                continue;
            }
            let faces = x
                .cell_faces(c)
                .iter()
                .map(|f| {
                    let img: &Simplex = &x_in[f.cell.dim][f.cell.index];
                    let theta: Vec<usize> = f.surj.iter().map(|&v| v as usize).collect();
                    b.current().apply(img, &theta)
                })
                .collect();
            let mut id = x.cell_name(c).to_string();
            while b.has_id(&id) {
                id.push('\'');
            }
            let cell = b.add_cell(d, &id, faces)?;
            row.push(Simplex::nondegenerate(cell));
        }
        if d < x.cell_counts().len() {
            x_in.push(row);
        }
    }
    let p = Arc::new(b.finish());
    let from_x = SMap::new(x.clone(), p.clone(), x_in)?;
    let from_y = SMap::new(y.clone(), p.clone(), y_in)?;
    Ok((p, from_x, from_y))
}

struct Pair<'a> {
    x: &'a SSet,
    y: &'a SSet,
}

impl SimplicialObject for Pair<'_> {
    type Elem = (Simplex, Simplex);

    fn elements(&self, dim: usize, _budget: &Budget) -> Result<Vec<Self::Elem>> {
        let ys = self.y.simplices(dim);
        let mut out = Vec::new();
        for a in self.x.simplices(dim) {
            for b in &ys {
                // pairs sharing a degeneracy direction are degenerate
                let shared = a.degenerate_directions().any(|j| b.surj[j] == b.surj[j + 1]);
                if !shared {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        Ok(out)
    }

    fn face(&self, _dim: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        (self.x.face(&e.0, i), self.y.face(&e.1, i))
    }

    fn degeneracy(&self, _dim: usize, j: usize, e: &Self::Elem) -> Self::Elem {
        (self.x.degen(&e.0, j), self.y.degen(&e.1, j))
    }

    fn label(&self, _dim: usize, e: &Self::Elem) -> String {
        format!(
            "({},{})",
            Compact(&e.0, self.x.cell_name(e.0.cell)),
            Compact(&e.1, self.y.cell_name(e.1.cell))
        )
    }
}

/// `X × Y` up to dimension `max_dim`, with both projections.
pub struct Product {
    pub realized: Realized<(Simplex, Simplex)>,
    pub first: SMap,
    pub second: SMap,
}

impl Product {
    pub fn sset(&self) -> &Arc<SSet> {
        &self.realized.sset
    }
}

pub fn product(x: &Arc<SSet>, y: &Arc<SSet>, max_dim: usize, budget: &Budget) -> Result<Product> {
    budget.check_dim(max_dim)?;
    let name = format!("{}×{}", x.name(), y.name());
    let realized = realize(&name, &Pair { x, y }, max_dim, Closure::Strict, budget)?;
    let first = SMap::from_fn(realized.sset.clone(), x.clone(), |c| {
        Ok(realized.element(c).0.clone())
    })?;
    let second = SMap::from_fn(realized.sset.clone(), y.clone(), |c| {
        Ok(realized.element(c).1.clone())
    })?;
    Ok(Product {
        realized,
        first,
        second,
    })
}

struct Fibered<'a> {
    f: &'a SMap,
    g: &'a SMap,
}

impl SimplicialObject for Fibered<'_> {
    type Elem = (Simplex, Simplex);

    fn elements(&self, dim: usize, _budget: &Budget) -> Result<Vec<Self::Elem>> {
        let mut over: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
        for b in self.g.source().simplices(dim) {
            over.entry(self.g.apply(&b)).or_default().push(b);
        }
        let mut out = Vec::new();
        for a in self.f.source().simplices(dim) {
            for b in over.get(&self.f.apply(&a)).into_iter().flatten() {
                let shared = a.degenerate_directions().any(|j| b.surj[j] == b.surj[j + 1]);
                if !shared {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        Ok(out)
    }

    fn face(&self, _dim: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        (self.f.source().face(&e.0, i), self.g.source().face(&e.1, i))
    }

    fn degeneracy(&self, _dim: usize, j: usize, e: &Self::Elem) -> Self::Elem {
        (self.f.source().degen(&e.0, j), self.g.source().degen(&e.1, j))
    }

    fn label(&self, _dim: usize, e: &Self::Elem) -> String {
        Pair {
            x: self.f.source(),
            y: self.g.source(),
        }
        .label(0, e)
    }
}

/// The strict pullback `X ×_Z Y` of `f : X → Z` and `g : Y → Z`, with both projections.
pub fn pullback(f: &SMap, g: &SMap, max_dim: usize, budget: &Budget) -> Result<Product> {
    budget.check_dim(max_dim)?;
    if !(Arc::ptr_eq(f.target(), g.target()) || f.target().structurally_equal(g.target())) {
        return Err(Error::PreconditionFailed("pullback legs have different targets".into()));
    }
    let (x, y) = (f.source(), g.source());
    let name = format!("{}×_{}{}", x.name(), f.target().name(), y.name());
    let realized = realize(&name, &Fibered { f, g }, max_dim, Closure::Strict, budget)?;
    let first = SMap::from_fn(realized.sset.clone(), x.clone(), |c| {
        Ok(realized.element(c).0.clone())
    })?;
    let second = SMap::from_fn(realized.sset.clone(), y.clone(), |c| {
        Ok(realized.element(c).1.clone())
    })?;
    Ok(Product {
        realized,
        first,
        second,
    })
}
