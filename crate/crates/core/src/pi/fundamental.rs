use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::group::{GroupPresentation, Word};
use crate::kan::is_kan;
use crate::scomplex::{pullback, standard, CellId, SMap, SSet, Simplex};
use crate::{Budget, Error, Result, Verdict};

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    /// Classes as sorted index lists, ordered by least member.
    fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.0.len() {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

/// Connected components of the vertex set, ordered by least vertex.
pub fn pi0(x: &SSet) -> Vec<Vec<CellId>> {
    let n = x.cell_counts().first().copied().unwrap_or(0);
    let mut uf = UnionFind::new(n);
    for e in x.cells(1) {
        let f = x.cell_faces(e);
        uf.union(f[0].cell().index, f[1].cell().index);
    }
    uf.classes()
        .into_iter()
        .map(|c| c.into_iter().map(|i| CellId { dim: 0, index: i }).collect())
        .collect()
}

/// Index of the component containing `v` in [`pi0`].
pub fn component_of(components: &[Vec<CellId>], v: CellId) -> usize {
    components.iter().position(|c| c.contains(&v)).expect("every vertex lies in a component")
}

/// Generators are the nondegenerate edges `d_1 e → d_0 e`; each
/// nondegenerate 2-cell `σ` gives the relation `d_1σ = d_0σ ∘ d_2σ`.
#[derive(Clone, Debug, Serialize)]
pub struct GroupoidPresentation {
    pub objects: Vec<String>,
    /// (name, source vertex, target vertex)
    pub generators: Vec<(String, usize, usize)>,
    /// Each relation as a closed path: `d_2σ`, then `d_0σ`, then `d_1σ⁻¹`,
    /// with degenerate edges dropped. Letters are `±(edge index + 1)`.
    pub relations: Vec<Word>,
}

impl GroupoidPresentation {
    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.objects.len());
        for (_, s, t) in &self.generators {
            uf.union(*s, *t);
        }
        uf.classes().len() <= 1
    }
}

fn edge_letter(s: &Simplex, sign: i32) -> Option<i32> {
    if s.is_degenerate() {
        None
    } else {
        Some(sign * (s.cell().index as i32 + 1))
    }
}

pub fn fundamental_groupoid(x: &SSet) -> GroupoidPresentation {
    let objects = x.cells(0).map(|v| x.cell_name(v).to_string()).collect();
    let generators = x
        .cells(1)
        .map(|e| {
            let f = x.cell_faces(e);
            (x.cell_name(e).to_string(), f[1].cell().index, f[0].cell().index)
        })
        .collect();
    let relations = x
        .cells(2)
        .map(|s| {
            let f = x.cell_faces(s);
            [edge_letter(&f[2], 1), edge_letter(&f[0], 1), edge_letter(&f[1], -1)]
                .into_iter()
                .flatten()
                .collect()
        })
        .collect();
    GroupoidPresentation {
        objects,
        generators,
        relations,
    }
}

/// Edge-path presentation of `π_1(X, x)`: a breadth-first spanning tree of
/// the component of `x` (neighbours in edge order) is contracted; the
/// remaining edges of the component generate.
pub fn pi1(x: &SSet, basepoint: &str) -> Result<GroupPresentation> {
    let v = x
        .lookup(basepoint)
        .filter(|c| c.dim == 0)
        .ok_or_else(|| Error::VertexNotFound(basepoint.to_string()))?;
    Ok(pi1_at(x, v))
}

pub fn pi1_at(x: &SSet, v: CellId) -> GroupPresentation {
    vertex_group(&fundamental_groupoid(x), v.index)
}

/// The group of loops at object `v` of a presented groupoid: a breadth-first
/// spanning tree of its component is contracted and the remaining generators
/// of the component generate.
pub fn vertex_group(gpd: &GroupoidPresentation, v: usize) -> GroupPresentation {
    let nv = gpd.objects.len();
    let mut adjacent: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (e, (_, s, t)) in gpd.generators.iter().enumerate() {
        adjacent[*s].push((e, *t));
        adjacent[*t].push((e, *s));
    }
    let mut seen = vec![false; nv];
    let mut tree = vec![false; gpd.generators.len()];
    let mut in_component = vec![false; gpd.generators.len()];
    seen[v] = true;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &(e, w) in &adjacent[u] {
            in_component[e] = true;
            if !seen[w] {
                seen[w] = true;
                tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    let mut renumber = HashMap::new();
    let mut names = Vec::new();
    for (e, (name, _, _)) in gpd.generators.iter().enumerate() {
        if in_component[e] && !tree[e] {
            renumber.insert(e as i32 + 1, names.len() as i32 + 1);
            names.push(name.clone());
        }
    }
    let relators = gpd
        .relations
        .iter()
        .filter(|r| r.iter().all(|l| in_component[(l.unsigned_abs() - 1) as usize]))
        .map(|r| {
            r.iter()
                .filter_map(|l| renumber.get(&l.abs()).map(|g| g * l.signum()))
                .collect()
        })
        .collect();
    GroupPresentation::new(names, relators).with_basepoint(&gpd.objects[v])
}

/// Homotopy classes of `n`-simplices with every face at the basepoint.
#[derive(Clone, Debug, Serialize)]
pub struct PiClasses {
    pub n: usize,
    pub basepoint: String,
    /// representatives in face-ref syntax, one list per class
    pub classes: Vec<Vec<String>>,
    /// order of the presented `π_1` when `n = 1` and coset enumeration finished
    pub pi1_order: Option<usize>,
}

impl PiClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

/// Homotopy classes of spherical `n`-simplices of a Kan complex at `x`
/// (`n = 0`: path components). Two such simplices `a, b` are identified
/// when an `(n+1)`-simplex has faces `(*, …, *, a, b)`.
pub fn pi_n_classes(x: &Arc<SSet>, basepoint: &str, n: usize, budget: &Budget) -> Result<PiClasses> {
    let v = x
        .lookup(basepoint)
        .filter(|c| c.dim == 0)
        .ok_or_else(|| Error::VertexNotFound(basepoint.to_string()))?;
    let cert = is_kan(x, n + 1, budget)?;
    match cert.verdict {
        Verdict::Certified => {}
        Verdict::Refuted(w) => {
            return Err(Error::NotFibrant {
                reason: format!("{} is not Kan up to dimension {}", x.name(), n + 1),
                witness: Some(w),
            })
        }
        Verdict::Unknown(why) => {
            return Err(Error::NotFibrant {
                reason: why,
                witness: None,
            })
        }
    }
    let classes = spherical_classes(x, v, n)
        .into_iter()
        .map(|c| c.iter().map(|s| x.label(s)).collect())
        .collect();
    let pi1_order = if n == 1 {
        pi1_at(x, v).simplify().enumerate_cosets(budget.cosets).map(|t| t.order())
    } else {
        None
    };
    Ok(PiClasses {
        n,
        basepoint: basepoint.to_string(),
        classes,
        pi1_order,
    })
}

/// The classes themselves, without fibrancy checks.
pub(crate) fn spherical_classes(x: &SSet, v: CellId, n: usize) -> Vec<Vec<Simplex>> {
    let point = |d: usize| x.apply(&Simplex::nondegenerate(v), &vec![0; d + 1]);
    if n == 0 {
        return pi0(x)
            .into_iter()
            .map(|c| c.into_iter().map(Simplex::nondegenerate).collect())
            .collect();
    }
    let star = point(n - 1);
    let spherical: Vec<Simplex> = x
        .simplices(n)
        .into_iter()
        .filter(|s| x.boundary(s).iter().all(|f| f == &star))
        .collect();
    let index: HashMap<&Simplex, usize> = spherical.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut uf = UnionFind::new(spherical.len());
    let star_n = point(n);
    for w in x.simplices(n + 1) {
        let f = x.boundary(&w);
        if f[..n].iter().all(|s| s == &star_n) {
            if let (Some(&a), Some(&b)) = (index.get(&f[n]), index.get(&f[n + 1])) {
                uf.union(a, b);
            }
        }
    }
    uf.classes()
        .into_iter()
        .map(|c| c.into_iter().map(|i| spherical[i].clone()).collect())
        .collect()
}

/// Exactness of `π_1 X → π_1 Y → π_0 F → π_0 X → π_0 Y` at the basepoint.
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub basepoint: String,
    pub fiber_components: usize,
    pub pi1_base_classes: usize,
    /// `∂[e]` for each class of loops at `f(x)`, as an index into `π_0 F`
    pub boundary: Vec<usize>,
    pub exact_at_pi1_base: bool,
    pub exact_at_pi0_fiber: bool,
    pub exact_at_pi0_total: bool,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.exact_at_pi1_base && self.exact_at_pi0_fiber && self.exact_at_pi0_total
    }
}

/// Builds the strict fiber over `f(x)` and checks exactness of the
/// low-degree segment of the long exact sequence. `∂` lifts a loop at
/// `f(x)` to an edge starting at `x` and takes the component of its end.
pub fn fiber_exactness_check(f: &SMap, x: &str, budget: &Budget) -> Result<ExactnessReport> {
    let (src, tgt) = (f.source(), f.target());
    let v = src
        .lookup(x)
        .filter(|c| c.dim == 0)
        .ok_or_else(|| Error::VertexNotFound(x.to_string()))?;
    let cert = crate::kan::is_fibration(f, 2, budget)?;
    if !cert.verdict.is_certified() {
        return Err(Error::PreconditionFailed(format!(
            "{} is not a certified fibration up to dimension 2",
            cert.subject
        )));
    }
    for obj in [src, tgt] {
        if !is_kan(obj, 2, budget)?.verdict.is_certified() {
            return Err(Error::PreconditionFailed(format!("{} is not Kan up to dimension 2", obj.name())));
        }
    }
    let fx = f.image_of_cell(v).cell();
    let point = Arc::new(standard(0));
    let pick = SMap::from_fn(point.clone(), tgt.clone(), |_| Ok(Simplex::nondegenerate(fx)))?;
    let top = src.top_dim().max(1);
    let fiber = pullback(f, &pick, top, budget)?;
    let fsset = fiber.sset().clone();
    let fiber_pi0 = pi0(&fsset);
    // fiber vertex ↦ total-space vertex
    let incl = &fiber.first;
    let fiber_vertex_of = |w: CellId| -> Option<usize> {
        fsset
            .cells(0)
            .find(|&c| incl.image_of_cell(c).cell() == w)
            .map(|c| component_of(&fiber_pi0, c))
    };

    let total_pi0 = pi0(src);
    let base_pi0 = pi0(tgt);
    let base_loops = spherical_classes(tgt, fx, 1);
    let mut boundary = Vec::new();
    for class in &base_loops {
        let e = &class[0];
        let lift = src
            .simplices(1)
            .into_iter()
            .find(|l| &f.apply(l) == e && src.face(l, 1).cell() == v)
            .ok_or_else(|| Error::PreconditionFailed("a loop at f(x) has no lift from x".into()))?;
        let end = src.face(&lift, 0).cell();
        boundary.push(fiber_vertex_of(end).expect("lift ends in the fiber"));
    }
    let x_fiber_class = fiber_vertex_of(v).expect("x lies in its fiber");
    // π_1 X → π_1 Y: image classes of loops at x
    let total_loops = spherical_classes(src, v, 1);
    let class_of_base = |s: &Simplex| base_loops.iter().position(|c| c.contains(s));
    let image: Vec<usize> = total_loops
        .iter()
        .filter_map(|c| class_of_base(&f.apply(&c[0])))
        .collect();
    let kernel: Vec<usize> = (0..base_loops.len()).filter(|&i| boundary[i] == x_fiber_class).collect();
    let exact_at_pi1_base = kernel.iter().all(|k| image.contains(k)) && image.iter().all(|i| kernel.contains(i));

    // π_0 F → π_0 X: preimage of [x] equals the image of ∂
    let comp_x = component_of(&total_pi0, v);
    let to_total = |fc: usize| component_of(&total_pi0, incl.image_of_cell(fiber_pi0[fc][0]).cell());
    let preimage: Vec<usize> = (0..fiber_pi0.len()).filter(|&c| to_total(c) == comp_x).collect();
    let exact_at_pi0_fiber = preimage.iter().all(|c| boundary.contains(c)) && boundary.iter().all(|c| preimage.contains(c));

    // π_0 X → π_0 Y: components over [f(x)] are those meeting the fiber
    let comp_fx = component_of(&base_pi0, fx);
    let over: Vec<usize> = (0..total_pi0.len())
        .filter(|&c| component_of(&base_pi0, f.image_of_cell(total_pi0[c][0]).cell()) == comp_fx)
        .collect();
    let hit: Vec<usize> = (0..fiber_pi0.len()).map(to_total).collect();
    let exact_at_pi0_total = over.iter().all(|c| hit.contains(c)) && hit.iter().all(|c| over.contains(c));

    Ok(ExactnessReport {
        basepoint: x.to_string(),
        fiber_components: fiber_pi0.len(),
        pi1_base_classes: base_loops.len(),
        boundary,
        exact_at_pi1_base,
        exact_at_pi0_fiber,
        exact_at_pi0_total,
    })
}
