use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use super::groupoid::FiniteGroupoid;
use super::simplicial::{diag_nerve, hom_space, wbar, Arrow, Body, Kind, SGpd, WString};
use crate::pi::{compare_groups, pi1, pi_n_classes, vertex_group, CompareVerdict, GroupPresentation, GroupoidPresentation};
use crate::scomplex::{hom_enumerate, Realized, SMap, SSet, Simplex};
use crate::{Budget, Error, Result, Witness};

/// `P_n H`: every hom-space replaced by its `(n+1)`-coskeleton, objects unchanged.
///
/// Hom-spaces of simplicial groupoids are simplicial groups or torsors over
/// them, hence Kan, so no fibrant replacement is needed first.
pub fn postnikov_gpd(h: &SGpd, n: usize) -> SGpd {
    let name = format!("P{n}{}", h.name());
    SGpd::hom_wise_cosk(h.clone(), n + 1).with_name(&name)
}

/// The unit `X → W̄GX` together with the realized target.
#[derive(Clone, Debug)]
pub struct Unit {
    pub loops: SGpd,
    pub wbar: Realized<WString>,
    pub map: SMap,
}

/// `η(x) = ([x], [d_0 x], …, [d_0^{n-1} x])`, level `n-1` first.
pub fn unit_map(x: &Arc<SSet>, max_dim: usize, budget: &Budget) -> Result<Unit> {
    let g = SGpd::loop_groupoid(x);
    let w = wbar(&g, max_dim, &budget.clone().with_word_length(budget.word_length.max(1)))?;
    let map = SMap::from_fn(x.clone(), w.sset.clone(), |cell| {
        let e = unit_string(x, &g, &Simplex::nondegenerate(cell));
        w.simplex(cell.dim, &e).cloned().ok_or_else(|| {
            Error::EnumerationImpossible(format!("unit image of `{}` was not enumerated", x.cell_name(cell)))
        })
    })?;
    Ok(Unit { loops: g, wbar: w, map })
}

fn unit_string(x: &SSet, g: &SGpd, s: &Simplex) -> WString {
    let n = s.dim();
    if n == 0 {
        return WString {
            object: s.cell().index,
            arrows: Vec::new(),
        };
    }
    let mut arrows = vec![g.identity(0, 0); n];
    let mut y = s.clone();
    for k in (0..n).rev() {
        arrows[k] = generator_arrow(x, &y);
        y = x.face(&y, 0);
    }
    WString {
        object: arrows[n - 1].tgt,
        arrows,
    }
}

fn generator_arrow(x: &SSet, y: &Simplex) -> Arrow {
    let src = x.vertex_of(y, 1).index;
    let tgt = x.vertex_of(y, 0).index;
    let word = if y.surj[0] == y.surj[1] {
        Vec::new()
    } else {
        vec![(y.clone(), false)]
    };
    Arrow {
        src,
        tgt,
        body: Body::Word(word),
    }
}

/// A functor `GX → H` into a constant groupoid: it is determined by an
/// object map and the images of the nondegenerate edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopFunctor {
    pub on_vertices: Vec<usize>,
    pub on_edges: Vec<usize>,
}

/// Both sides of `Hom(GX, H) ≅ Hom(X, W̄H)` for a constant `H`.
#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    pub functors: usize,
    pub maps: usize,
    /// transposing every functor gives a valid map, distinct functors give
    /// distinct maps, and transposing back recovers the functor
    pub mutually_inverse: bool,
}

impl AdjunctionReport {
    pub fn is_bijection(&self) -> bool {
        self.mutually_inverse && self.functors == self.maps
    }
}

/// Enumerates `Hom(GX, H)` and `Hom(X, W̄H)` exhaustively and checks the
/// transposition in both directions.
pub fn adjunction_bijection(x: &Arc<SSet>, h: &FiniteGroupoid, budget: &Budget) -> Result<AdjunctionReport> {
    let dim = x.cell_counts().len().saturating_sub(1);
    let hh = SGpd::constant(h.clone());
    let w = wbar(&hh, dim.max(1), budget)?;
    let functors = loop_functors(x, h, budget)?;
    let maps = hom_enumerate(x, &w.sset, budget)?;
    let mut images = HashSet::new();
    let mut ok = true;
    for phi in &functors {
        let m = transpose_functor(x, h, &w, phi)?;
        ok &= transpose_map(x, h, &w, &m) == *phi;
        images.insert(m.labelled());
    }
    ok &= images.len() == functors.len();
    ok &= maps.iter().all(|m| images.contains(&m.labelled()));
    Ok(AdjunctionReport {
        functors: functors.len(),
        maps: maps.len(),
        mutually_inverse: ok,
    })
}

fn edge_image(x: &SSet, h: &FiniteGroupoid, phi: &LoopFunctor, e: &Simplex) -> usize {
    if e.is_degenerate() {
        h.identity(phi.on_vertices[x.vertex_of(e, 0).index])
    } else {
        phi.on_edges[e.cell().index]
    }
}

/// Functors `GX → H`: vertex images, then an arrow `φ(v_1) → φ(v_0)` per
/// nondegenerate edge, subject to `[d_0σ]⁻¹[d_1σ] = [d_2σ]` for every 2-cell.
pub fn loop_functors(x: &SSet, h: &FiniteGroupoid, budget: &Budget) -> Result<Vec<LoopFunctor>> {
    let nv = x.cell_count(0);
    let ne = x.cell_count(1);
    let no = h.objects().len();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut vert = vec![0usize; nv];
    loop {
        let mut edges = vec![0usize; ne];
        let mut stack: Vec<(Vec<usize>, usize)> = Vec::new();
        let options = |vert: &[usize], e: usize| -> Vec<usize> {
            let f = x.cell_faces(crate::scomplex::CellId { dim: 1, index: e });
            let src = vert[f[0].cell().index];
            let tgt = vert[f[1].cell().index];
            h.hom(src, tgt)
        };
        if ne == 0 {
            out.push(LoopFunctor {
                on_vertices: vert.clone(),
                on_edges: Vec::new(),
            });
        } else {
            stack.push((options(&vert, 0), 0));
            while let Some(pos) = stack.len().checked_sub(1) {
                nodes += 1;
                if nodes > budget.search_nodes {
                    return Err(Error::SearchBudgetExceeded(budget.search_nodes));
                }
                let frame = &mut stack[pos];
                if frame.1 >= frame.0.len() {
                    stack.pop();
                    continue;
                }
                edges[pos] = frame.0[frame.1];
                frame.1 += 1;
                if pos + 1 < ne {
                    stack.push((options(&vert, pos + 1), 0));
                    continue;
                }
                let phi = LoopFunctor {
                    on_vertices: vert.clone(),
                    on_edges: edges.clone(),
                };
                if respects_2_cells(x, h, &phi) {
                    out.push(phi);
                }
            }
        }
        // next object map
        let mut i = 0;
        while i < nv {
            vert[i] += 1;
            if vert[i] < no {
                break;
            }
            vert[i] = 0;
            i += 1;
        }
        if i == nv || no == 0 {
            break;
        }
    }
    Ok(out)
}

fn respects_2_cells(x: &SSet, h: &FiniteGroupoid, phi: &LoopFunctor) -> bool {
    x.cells(2).all(|s| {
        let f = x.cell_faces(s);
        let a = edge_image(x, h, phi, &f[0]);
        let b = edge_image(x, h, phi, &f[1]);
        let c = edge_image(x, h, phi, &f[2]);
        h.compose(h.inverse(a), b) == Some(c)
    })
}

/// `x ↦ (φ[x], φ[d_0 x], …)`; for constant `H` a level-`k` generator `[y]`
/// goes to the image of the edge spanned by vertices 0 and 1 of `y`.
fn transpose_functor(x: &Arc<SSet>, h: &FiniteGroupoid, w: &Realized<WString>, phi: &LoopFunctor) -> Result<SMap> {
    SMap::from_fn(x.clone(), w.sset.clone(), |cell| {
        let s = Simplex::nondegenerate(cell);
        let n = cell.dim;
        let string = if n == 0 {
            WString {
                object: phi.on_vertices[cell.index],
                arrows: Vec::new(),
            }
        } else {
            let mut arrows = Vec::with_capacity(n);
            let mut y = s.clone();
            let mut top = Vec::with_capacity(n);
            for _ in 0..n {
                top.push(y.clone());
                y = x.face(&y, 0);
            }
            for y in top.iter().rev() {
                let mut e = y.clone();
                while e.dim() > 1 {
                    e = x.face(&e, 2);
                }
                let a = edge_image(x, h, phi, &e);
                arrows.push(Arrow {
                    src: h.arrow(a).src,
                    tgt: h.arrow(a).tgt,
                    body: Body::Elem(a),
                });
            }
            WString {
                object: arrows[n - 1].tgt,
                arrows,
            }
        };
        w.simplex(n, &string)
            .cloned()
            .ok_or_else(|| Error::EnumerationImpossible("transpose leaves W̄H".into()))
    })
}

fn transpose_map(x: &SSet, h: &FiniteGroupoid, w: &Realized<WString>, m: &SMap) -> LoopFunctor {
    let on_vertices = x
        .cells(0)
        .map(|v| w.element(m.apply(&Simplex::nondegenerate(v)).cell()).object)
        .collect();
    let on_edges = x
        .cells(1)
        .map(|e| {
            let img = m.apply(&Simplex::nondegenerate(e));
            let base = w.element(img.cell());
            if img.is_degenerate() {
                return h.identity(base.object);
            }
            match &base.arrows[0].body {
                Body::Elem(a) => *a,
                _ => unreachable!("constant groupoid arrows"),
            }
        })
        .collect();
    LoopFunctor { on_vertices, on_edges }
}

/// `π_0 H(x, x)` as a group: generated by level-0 arrows modulo the
/// relations coming from level 1.
pub fn hom_pi0_group(h: &SGpd, x: &str) -> Result<GroupPresentation> {
    let xi = h.object_index(x)?;
    match &h.kind {
        Kind::Loop(xs) => Ok(vertex_group(&crate::pi::fundamental_groupoid(xs), xi).with_basepoint(x)),
        Kind::Constant(g) => Ok(vertex_group(&table_presentation(g), xi).with_basepoint(x)),
        Kind::Coskeletal { base, .. } => hom_pi0_group(base, x),
    }
}

fn table_presentation(g: &FiniteGroupoid) -> GroupoidPresentation {
    let n = g.arrows().len();
    let letter = |a: usize| (a as i32) + 1;
    let mut relations = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if let Some(c) = g.compose(a, b) {
                let w: Vec<i32> = [(a, 1), (b, 1), (c, -1)]
                    .into_iter()
                    .filter(|(e, _)| !g.is_identity(*e))
                    .map(|(e, s)| s * letter(e))
                    .collect();
                relations.push(w);
            }
        }
    }
    for a in 0..n {
        if g.is_identity(a) {
            relations.push(vec![letter(a)]);
        }
    }
    GroupoidPresentation {
        objects: g.objects().to_vec(),
        generators: g.arrows().iter().map(|a| (a.name.clone(), a.src, a.tgt)).collect(),
        relations,
    }
}

/// Comparison of `π_s(dBH, x)` with `π_{s-1} H(x, x)`.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub s: usize,
    pub object: String,
    pub nerve_side: String,
    pub hom_side: String,
    pub verdict: CompareVerdict,
}

/// For `s = 1` the presented groups are compared; above that the numbers
/// of homotopy classes are, so only "both trivial" and "different sizes"
/// are definite.
pub fn shift_check(h: &SGpd, x: &str, s: usize, budget: &Budget) -> Result<ShiftReport> {
    if s == 0 {
        return Err(Error::malformed("shift_check needs s ≥ 1"));
    }
    let xi = h.object_index(x)?;
    let report = |nerve_side: String, hom_side: String, verdict| ShiftReport {
        s,
        object: x.to_string(),
        nerve_side,
        hom_side,
        verdict,
    };
    if s == 1 {
        let d = diag_nerve(h, 2, budget)?;
        let left = pi1(&d.sset, x)?.simplify();
        let right = hom_pi0_group(h, x)?.simplify();
        let mut verdict = compare_groups(&left, &right, budget);
        if d.truncated {
            if let CompareVerdict::Isomorphic(why) = verdict {
                verdict = CompareVerdict::Isomorphic(format!("{why} (nerve cut at word length {})", budget.word_length));
            }
        }
        return Ok(report(left.to_string(), right.to_string(), verdict));
    }
    let d = diag_nerve(h, s + 1, budget)?;
    let hom = hom_space(h, x, x, s, budget)?;
    if d.truncated || hom.truncated() {
        return Ok(report(
            "?".into(),
            "?".into(),
            CompareVerdict::Unknown(format!("levels of {} are cut at word length {}", h.name(), budget.word_length)),
        ));
    }
    let id = h.arrow_label(&h.identity(0, xi));
    let left = pi_n_classes(&d.sset, x, s, budget);
    let right = pi_n_classes(hom.sset(), &id, s - 1, budget);
    let (left, right) = match (left, right) {
        (Ok(l), Ok(r)) => (l.count(), r.count()),
        (Err(e), _) | (_, Err(e)) if !e.is_budget() && !matches!(e, Error::NotFibrant { .. }) => return Err(e),
        _ => {
            return Ok(report(
                "?".into(),
                "?".into(),
                CompareVerdict::Unknown("homotopy classes not computable within budget".into()),
            ))
        }
    };
    let verdict = if left == 1 && right == 1 {
        CompareVerdict::Isomorphic("both trivial".into())
    } else if left != right {
        CompareVerdict::NotIsomorphic(Witness::Invariant {
            name: "number of classes".into(),
            left: left.to_string(),
            right: right.to_string(),
        })
    } else {
        CompareVerdict::Unknown(format!("both sides have {left} classes"))
    };
    Ok(report(format!("{left} classes"), format!("{right} classes"), verdict))
}
