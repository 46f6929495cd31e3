//! Horn filling, lifting problems, fibrancy certificates and the `sd`/`Ex` pair.
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::scomplex::{
    facet_name, horn, mask_vertices, realize, simplex_inclusion, simplex_of_vertices, standard, CellId,
    realize_map, Closure, MapSearch, Realized, SMap, SSet, SSetBuilder, Simplex, SimplicialObject,
};
use crate::{Budget, Error, KanCertificate, Result, Verdict, Witness};

/// A commutative square
///
/// ```text
///   A --top--> X
///   |          |
///   i          f
///   v          v
///   B -bottom> Y
/// ```
/// with `i` a monomorphism.
#[derive(Clone, Debug)]
pub struct LiftProblem {
    pub i: SMap,
    pub f: SMap,
    pub top: SMap,
    pub bottom: SMap,
}

fn same_object(a: &Arc<SSet>, b: &Arc<SSet>) -> bool {
    Arc::ptr_eq(a, b) || a.structurally_equal(b)
}

impl LiftProblem {
    pub fn new(i: SMap, f: SMap, top: SMap, bottom: SMap) -> Result<Self> {
        if !(same_object(i.source(), top.source())
            && same_object(i.target(), bottom.source())
            && same_object(top.target(), f.source())
            && same_object(bottom.target(), f.target()))
        {
            return Err(Error::PreconditionFailed(
                "lifting square has mismatched corners".into(),
            ));
        }
        if !i.is_mono() {
            return Err(Error::PreconditionFailed(
                "left map of a lifting square must be a monomorphism".into(),
            ));
        }
        if i.then(&bottom) != top.then(&f) {
            return Err(Error::PreconditionFailed(
                "lifting square does not commute".into(),
            ));
        }
        Ok(LiftProblem { i, f, top, bottom })
    }
}

/// Lexicographically least diagonal `h : B → X` with `h ∘ i = top` and
/// `f ∘ h = bottom`, if one exists.
pub fn solve_lift(p: &LiftProblem, budget: &Budget) -> Result<Option<SMap>> {
    let mut search = MapSearch::new(p.i.target(), p.f.source(), budget).over(&p.f, &p.bottom);
    for a in p.i.source().all_cells() {
        search = search.fix(p.i.image_of_cell(a).cell(), p.top.image_of_cell(a).clone());
    }
    search.first()
}

struct HornShape {
    horn: Arc<SSet>,
    delta: Arc<SSet>,
    /// horn cell → cell of Δ^n
    into: Vec<(CellId, CellId)>,
    /// facet i of Δ^n as a horn cell, `None` at the missing face
    facets: Vec<Option<CellId>>,
}

fn horn_shape(n: usize, k: usize) -> Result<HornShape> {
    let horn = Arc::new(horn(n, k)?);
    let inc = simplex_inclusion(&horn, n)?;
    let delta = inc.target().clone();
    let into = horn
        .all_cells()
        .map(|c| (c, inc.image_of_cell(c).cell()))
        .collect();
    let facets = (0..=n)
        .map(|i| horn.lookup(&facet_name(n, i)))
        .collect();
    Ok(HornShape {
        horn,
        delta,
        into,
        facets,
    })
}

fn horn_witness(shape: &HornShape, n: usize, k: usize, x: &SSet, a: &SMap, over: Option<String>) -> Witness {
    Witness::Horn {
        dim: n,
        missing: k,
        faces: shape
            .facets
            .iter()
            .map(|f| match f {
                Some(c) => x.label(a.image_of_cell(*c)),
                None => "-".to_string(),
            })
            .collect(),
        over,
    }
}

fn budget_to_unknown(subject: &str, checked_dim: usize, err: Error) -> Result<KanCertificate> {
    if err.is_budget() {
        Ok(KanCertificate {
            subject: subject.to_string(),
            checked_dim,
            verdict: Verdict::Unknown(err.to_string()),
        })
    } else {
        Err(err)
    }
}

/// Checks that every horn `Λ^n_k → X` with `1 ≤ n ≤ up_to_dim` has a filler.
pub fn is_kan(x: &Arc<SSet>, up_to_dim: usize, budget: &Budget) -> Result<KanCertificate> {
    if up_to_dim == 0 {
        return Err(Error::PreconditionFailed("is_kan needs up_to_dim ≥ 1".into()));
    }
    match kan_search(x, up_to_dim, budget) {
        Ok(verdict) => Ok(KanCertificate {
            subject: x.name().to_string(),
            checked_dim: up_to_dim,
            verdict,
        }),
        Err(e) => budget_to_unknown(x.name(), up_to_dim, e),
    }
}

fn kan_search(x: &Arc<SSet>, up_to_dim: usize, budget: &Budget) -> Result<Verdict> {
    for n in 1..=up_to_dim {
        for k in 0..=n {
            let shape = horn_shape(n, k)?;
            let horns = MapSearch::new(&shape.horn, x, budget).all()?;
            for a in &horns {
                let mut ext = MapSearch::new(&shape.delta, x, budget);
                for &(hc, dc) in &shape.into {
                    ext = ext.fix(dc, a.image_of_cell(hc).clone());
                }
                if ext.first()?.is_none() {
                    return Ok(Verdict::Refuted(horn_witness(&shape, n, k, x, a, None)));
                }
            }
        }
    }
    Ok(Verdict::Certified)
}

/// Right lifting property of `f` against `Λ^n_k → Δ^n` for `n ≤ up_to_dim`.
pub fn is_fibration(f: &SMap, up_to_dim: usize, budget: &Budget) -> Result<KanCertificate> {
    if up_to_dim == 0 {
        return Err(Error::PreconditionFailed(
            "is_fibration needs up_to_dim ≥ 1".into(),
        ));
    }
    let subject = format!("{} → {}", f.source().name(), f.target().name());
    match fibration_search(f, up_to_dim, budget) {
        Ok(verdict) => Ok(KanCertificate {
            subject,
            checked_dim: up_to_dim,
            verdict,
        }),
        Err(e) => budget_to_unknown(&subject, up_to_dim, e),
    }
}

fn fibration_search(f: &SMap, up_to_dim: usize, budget: &Budget) -> Result<Verdict> {
    let x = f.source();
    let y = f.target();
    for n in 1..=up_to_dim {
        for k in 0..=n {
            let shape = horn_shape(n, k)?;
            let top_cell = shape.delta.cells(n).next().unwrap();
            for a in MapSearch::new(&shape.horn, x, budget).all()? {
                let fa = a.then(f);
                let mut bottoms = MapSearch::new(&shape.delta, y, budget);
                for &(hc, dc) in &shape.into {
                    bottoms = bottoms.fix(dc, fa.image_of_cell(hc).clone());
                }
                for b in bottoms.all()? {
                    let mut lift = MapSearch::new(&shape.delta, x, budget).over(f, &b);
                    for &(hc, dc) in &shape.into {
                        lift = lift.fix(dc, a.image_of_cell(hc).clone());
                    }
                    if lift.first()?.is_none() {
                        let over = Some(y.label(b.image_of_cell(top_cell)));
                        return Ok(Verdict::Refuted(horn_witness(&shape, n, k, x, &a, over)));
                    }
                }
            }
        }
    }
    Ok(Verdict::Certified)
}

/// Re-runs the filler search for a horn witness against `x`.
/// Returns `true` when the horn indeed has no filler.
pub fn horn_is_unfillable(x: &Arc<SSet>, witness: &Witness, budget: &Budget) -> Result<bool> {
    let Witness::Horn {
        dim, missing, faces, ..
    } = witness
    else {
        return Err(Error::PreconditionFailed("not a horn witness".into()));
    };
    let shape = horn_shape(*dim, *missing)?;
    let mut ext = MapSearch::new(&shape.delta, x, budget);
    for (i, facet) in shape.facets.iter().enumerate() {
        if let Some(hc) = facet {
            let dc = shape.into.iter().find(|(h, _)| h == hc).unwrap().1;
            ext = ext.fix(dc, x.parse_ref(&faces[i])?);
        }
    }
    Ok(ext.first()?.is_none())
}

/// Barycentric subdivision together with its last-vertex map.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub sset: Arc<SSet>,
    /// cell of `sd X` → (cell of `X`, strict chain of vertex masks ending in the full mask)
    flags: Vec<Vec<(CellId, Vec<u32>)>>,
    lookup: HashMap<(CellId, Vec<u32>), CellId>,
    pub last_vertex: SMap,
}

impl Subdivision {
    pub fn flag(&self, cell: CellId) -> (CellId, &[u32]) {
        let (c, chain) = &self.flags[cell.dim][cell.index];
        (*c, chain)
    }

    /// Normal form of the simplex given by a weakly increasing chain of
    /// faces of `cell`.
    fn normalize(&self, x: &SSet, cell: CellId, chain: &[u32]) -> Simplex {
        let last = *chain.last().unwrap();
        let full = ((1u64 << (cell.dim + 1)) - 1) as u32;
        let (cell, chain): (CellId, Vec<u32>) = if last == full {
            (cell, chain.to_vec())
        } else {
            let verts = mask_vertices(last);
            let face = x.apply(&Simplex::nondegenerate(cell), &verts);
            let mapped = chain
                .iter()
                .map(|&m| {
                    verts
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| m & (1 << **v) != 0)
                        .fold(0u32, |acc, (pos, _)| acc | (1 << face.surj[pos]))
                })
                .collect();
            (face.cell, mapped)
        };
        let mut strict: Vec<u32> = Vec::new();
        let mut surj = Vec::with_capacity(chain.len());
        for m in chain {
            if strict.last() != Some(&m) {
                strict.push(m);
            }
            surj.push((strict.len() - 1) as u8);
        }
        Simplex {
            cell: self.lookup[&(cell, strict)],
            surj,
        }
    }
}

fn strict_chains(full: u32, len: usize) -> Vec<Vec<u32>> {
    // chains F_0 ⊊ … ⊊ F_{len-1} = full of nonempty subsets
    if len == 1 {
        return vec![vec![full]];
    }
    let mut out = Vec::new();
    for shorter in strict_chains(full, len - 1) {
        let first = shorter[0];
        let mut sub = (first - 1) & first;
        while sub != 0 {
            let mut c = vec![sub];
            c.extend_from_slice(&shorter);
            out.push(c);
            sub = (sub - 1) & first;
        }
    }
    out.sort();
    out
}

fn chain_name(id: &str, chain: &[u32]) -> String {
    let parts: Vec<String> = chain
        .iter()
        .map(|m| mask_vertices(*m).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    format!("{id}<{}>", parts.join("/"))
}

/// Barycentric subdivision: nondegenerate `k`-cells are the strict flags of
/// faces `F_0 ⊊ … ⊊ F_k` of a nondegenerate cell `x` with `F_k = x`.
pub fn sd(x: &Arc<SSet>) -> Result<Subdivision> {
    let mut b = SSetBuilder::new(&format!("sd({})", x.name()));
    let mut sub = Subdivision {
        sset: Arc::new(SSet::empty("")),
        flags: Vec::new(),
        lookup: HashMap::new(),
        last_vertex: SMap::identity(Arc::new(SSet::empty(""))),
    };
    let top = if x.is_empty() { 0 } else { x.top_dim() };
    for k in 0..=top {
        let mut row = Vec::new();
        for m in k..=top {
            for cell in x.cells(m) {
                let full = ((1u64 << (m + 1)) - 1) as u32;
                for chain in strict_chains(full, k + 1) {
                    let faces = if k == 0 {
                        Vec::new()
                    } else {
                        (0..=k)
                            .map(|i| {
                                let mut c = chain.clone();
                                c.remove(i);
                                sub.normalize(x, cell, &c)
                            })
                            .collect()
                    };
                    let id = chain_name(x.cell_name(cell), &chain);
                    let new = b.add_cell(k, &id, faces)?;
                    sub.lookup.insert((cell, chain.clone()), new);
                    row.push((cell, chain));
                }
            }
        }
        sub.flags.push(row);
    }
    let sset = Arc::new(b.finish());
    let flags = sub.flags.clone();
    let last_vertex = SMap::from_fn(sset.clone(), x.clone(), |c| {
        let (cell, chain) = &flags[c.dim][c.index];
        let theta: Vec<usize> = chain.iter().map(|m| 31 - m.leading_zeros() as usize).collect();
        Ok(x.apply(&Simplex::nondegenerate(*cell), &theta))
    })?;
    sub.sset = sset;
    sub.last_vertex = last_vertex;
    Ok(sub)
}

/// `sd(θ) : sd Δ^m → sd Δ^n` for a monotone `θ : [m] → [n]`, as an assignment
/// indexed like the cells of `sd Δ^m`.
fn sd_operator(
    src: &Subdivision,
    src_delta: &SSet,
    dst: &Subdivision,
    dst_delta: &SSet,
    n: usize,
    theta: &[usize],
) -> Vec<Simplex> {
    src.sset
        .all_cells()
        .map(|c| {
            let (cell, chain) = src.flag(c);
            let verts = src_delta.vertices_of(&Simplex::nondegenerate(cell));
            let abs: Vec<u32> = chain
                .iter()
                .map(|m| {
                    mask_vertices(*m)
                        .iter()
                        .fold(0u32, |acc, p| acc | (1 << theta[verts[*p].index]))
                })
                .collect();
            let top = *abs.last().unwrap();
            let target = simplex_of_vertices(dst_delta, &mask_vertices(top), n).cell();
            let tverts: Vec<usize> = dst_delta
                .vertices_of(&Simplex::nondegenerate(target))
                .iter()
                .map(|v| v.index)
                .collect();
            let rel: Vec<u32> = abs
                .iter()
                .map(|m| {
                    tverts
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| m & (1 << **v) != 0)
                        .fold(0u32, |acc, (pos, _)| acc | (1 << pos))
                })
                .collect();
            dst.normalize(dst_delta, target, &rel)
        })
        .collect()
}

/// Subdivided standard simplices and the subdivided structure maps between them.
struct ExTables {
    deltas: Vec<Arc<SSet>>,
    subdivisions: Vec<Subdivision>,
    /// `faces[n][i]`: sd(δ^i) : sd Δ^{n-1} → sd Δ^n
    faces: Vec<Vec<Vec<Simplex>>>,
    /// `degens[n][j]`: sd(σ^j) : sd Δ^{n+1} → sd Δ^n
    degens: Vec<Vec<Vec<Simplex>>>,
    flat: Vec<HashMap<CellId, usize>>,
}

impl ExTables {
    fn build(max_dim: usize) -> Result<Self> {
        let deltas: Vec<Arc<SSet>> = (0..=max_dim).map(|n| Arc::new(standard(n))).collect();
        let subdivisions = deltas.iter().map(sd).collect::<Result<Vec<_>>>()?;
        let flat = subdivisions
            .iter()
            .map(|s| s.sset.all_cells().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        let mut faces = vec![Vec::new()];
        for n in 1..=max_dim {
            faces.push(
                (0..=n)
                    .map(|i| {
                        let theta = crate::scomplex::coface(n, i);
                        sd_operator(&subdivisions[n - 1], &deltas[n - 1], &subdivisions[n], &deltas[n], n, &theta)
                    })
                    .collect(),
            );
        }
        let degens = (0..max_dim)
            .map(|n| {
                (0..=n)
                    .map(|j| {
                        let theta = crate::scomplex::codegeneracy(n, j);
                        sd_operator(&subdivisions[n + 1], &deltas[n + 1], &subdivisions[n], &deltas[n], n, &theta)
                    })
                    .collect()
            })
            .collect();
        Ok(ExTables {
            deltas,
            subdivisions,
            faces,
            degens,
            flat,
        })
    }

    fn cached(max_dim: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ExTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&max_dim) {
            return Ok(t.clone());
        }
        let t = Arc::new(Self::build(max_dim)?);
        cache.lock().unwrap().insert(max_dim, t.clone());
        Ok(t)
    }
}

struct ExObject<'a> {
    x: &'a Arc<SSet>,
    t: Arc<ExTables>,
}

impl<'a> ExObject<'a> {
    fn new(x: &'a Arc<SSet>, max_dim: usize) -> Result<Self> {
        Ok(ExObject {
            x,
            t: ExTables::cached(max_dim)?,
        })
    }

    fn precompose(&self, n: usize, e: &[Simplex], op: &[Simplex]) -> Vec<Simplex> {
        op.iter()
            .map(|s| {
                let img = &e[self.t.flat[n][&s.cell()]];
                let theta: Vec<usize> = s.surj.iter().map(|&v| v as usize).collect();
                self.x.apply(img, &theta)
            })
            .collect()
    }

    /// The image of `x ∈ X_n` in `Ex(X)_n`: `x` composed with the last-vertex map.
    fn coaugment(&self, s: &Simplex) -> Vec<Simplex> {
        let n = s.dim();
        let sub = &self.t.subdivisions[n];
        sub.sset
            .all_cells()
            .map(|c| {
                let lv = sub.last_vertex.image_of_cell(c);
                let verts: Vec<usize> = self.t.deltas[n].vertices_of(lv).iter().map(|v| v.index).collect();
                self.x.apply(s, &verts)
            })
            .collect()
    }
}

impl SimplicialObject for ExObject<'_> {
    type Elem = Vec<Simplex>;

    fn elements(&self, dim: usize, budget: &Budget) -> Result<Vec<Self::Elem>> {
        let maps = MapSearch::new(&self.t.subdivisions[dim].sset, self.x, budget).all()?;
        Ok(maps
            .into_iter()
            .map(|m| {
                self.t.subdivisions[dim]
                    .sset
                    .all_cells()
                    .map(|c| m.image_of_cell(c).clone())
                    .collect()
            })
            .collect())
    }

    fn face(&self, dim: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        self.precompose(dim, e, &self.t.faces[dim][i])
    }

    fn degeneracy(&self, dim: usize, j: usize, e: &Self::Elem) -> Self::Elem {
        self.precompose(dim, e, &self.t.degens[dim][j])
    }

    fn label(&self, dim: usize, e: &Self::Elem) -> String {
        let sub = &self.t.subdivisions[dim];
        let tops: Vec<String> = sub
            .sset
            .cells(dim)
            .map(|c| {
                let s = &e[self.t.flat[dim][&c]];
                crate::scomplex::Compact(s, self.x.cell_name(s.cell())).to_string()
            })
            .collect();
        format!("ex[{}]", tops.join(";"))
    }
}

/// `Ex(X)` up to `max_dim` with its coaugmentation `sk_{max_dim} X → Ex(X)`.
#[derive(Clone, Debug)]
pub struct ExResult {
    pub realized: Realized<Vec<Simplex>>,
    pub coaugmentation: SMap,
}

impl ExResult {
    pub fn sset(&self) -> &Arc<SSet> {
        &self.realized.sset
    }
}

pub fn ex(x: &Arc<SSet>, max_dim: usize, budget: &Budget) -> Result<ExResult> {
    budget.check_dim(max_dim)?;
    let obj = ExObject::new(x, max_dim)?;
    let realized = realize(&format!("Ex({})", x.name()), &obj, max_dim, Closure::Strict, budget)?;
    let source = Arc::new(x.skeleton(max_dim).with_name(x.name()));
    let coaugmentation = SMap::from_fn(source.clone(), realized.sset.clone(), |c| {
        let e = obj.coaugment(&Simplex::nondegenerate(c));
        realized.simplex(c.dim, &e).cloned().ok_or_else(|| {
            Error::EnumerationImpossible("coaugmentation leaves Ex".into())
        })
    })?;
    Ok(ExResult {
        realized,
        coaugmentation,
    })
}

/// `Ex(f) : Ex(X) → Ex(Y)` by postcomposition, for realizations of equal range.
pub fn ex_map(f: &SMap, ex_x: &ExResult, ex_y: &ExResult) -> Result<SMap> {
    realize_map(&ex_x.realized, &ex_y.realized, |_, e| e.iter().map(|s| f.apply(s)).collect())
}

/// `Ex^k(X)` up to `max_dim` with the composed coaugmentation.
pub fn ex_iterate(x: &Arc<SSet>, k: usize, max_dim: usize, budget: &Budget) -> Result<(Arc<SSet>, SMap)> {
    budget.check_dim(max_dim)?;
    let start = Arc::new(x.skeleton(max_dim).with_name(x.name()));
    let mut current = start.clone();
    let mut coaug = SMap::identity(start);
    for _ in 0..k {
        let step = ex(&current, max_dim, budget)?;
        coaug = coaug.then(&step.coaugmentation);
        current = step.realized.sset.clone();
    }
    Ok((current, coaug))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_of_a_triangle() {
        assert_eq!(strict_chains(0b111, 1).len(), 1);
        assert_eq!(strict_chains(0b111, 2).len(), 6);
        assert_eq!(strict_chains(0b111, 3).len(), 6);
    }
}
