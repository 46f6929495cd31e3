use std::sync::Arc;

use super::groupoid::FiniteGroupoid;
use crate::scomplex::{realize, Closure, Compact, Realized, SSet, Simplex, SimplicialObject};
use crate::{Budget, Error, Result};

/// The data of an arrow beyond its ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Body {
    /// An arrow of a finite groupoid, by index.
    Elem(usize),
    /// A reduced word in loop-groupoid generators, in path order; the flag
    /// marks an inverse letter.
    Word(Vec<(Simplex, bool)>),
    /// A coskeletal arrow: its compatible tuple of faces.
    Sphere(Vec<Arrow>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
    pub body: Body,
}

#[derive(Clone, Debug)]
pub(crate) enum Kind {
    /// The same groupoid in every level, all structure maps identities.
    Constant(FiniteGroupoid),
    /// The loop groupoid of a simplicial set.
    Loop(Arc<SSet>),
    /// Hom-wise `cosk_level` of a base groupoid.
    Coskeletal { base: Box<SGpd>, level: usize },
}

/// A simplicial groupoid whose object set is the same discrete set in
/// every level.
#[derive(Clone, Debug)]
pub struct SGpd {
    name: String,
    objects: Vec<String>,
    pub(crate) kind: Kind,
}

impl SGpd {
    pub fn constant(g: FiniteGroupoid) -> Self {
        SGpd {
            name: g.name().to_string(),
            objects: g.objects().to_vec(),
            kind: Kind::Constant(g),
        }
    }

    /// The loop groupoid: level `n` is free on the `(n+1)`-simplices of `X`,
    /// with `s_0`-degenerate ones set to identities. A generator `[x]` runs
    /// from vertex 1 of `x` to vertex 0; `d_0[x] = [d_0 x]⁻¹` then `[d_1 x]`,
    /// `d_i[x] = [d_{i+1} x]` for `i ≥ 1`, `s_j[x] = [s_{j+1} x]`.
    pub fn loop_groupoid(x: &Arc<SSet>) -> Self {
        SGpd {
            name: format!("G({})", x.name()),
            objects: x.cells(0).map(|v| x.cell_name(v).to_string()).collect(),
            kind: Kind::Loop(x.clone()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    /// The finite groupoid of a constant simplicial groupoid.
    pub fn as_constant(&self) -> Option<&FiniteGroupoid> {
        match &self.kind {
            Kind::Constant(g) => Some(g),
            _ => None,
        }
    }

    /// `Some(level)` for a hom-wise coskeleton.
    pub fn coskeletal_level(&self) -> Option<usize> {
        match &self.kind {
            Kind::Coskeletal { level, .. } => Some(*level),
            _ => None,
        }
    }

    /// Whether some level is infinite, so enumerations are cut by word length.
    pub fn is_presented(&self) -> bool {
        match &self.kind {
            Kind::Constant(_) => false,
            Kind::Loop(_) => true,
            Kind::Coskeletal { base, .. } => base.is_presented(),
        }
    }

    pub(crate) fn hom_wise_cosk(base: SGpd, level: usize) -> Self {
        SGpd {
            name: format!("cosk{level}({})", base.name),
            objects: base.objects.clone(),
            kind: Kind::Coskeletal {
                base: Box::new(base),
                level,
            },
        }
    }

    pub fn identity(&self, n: usize, x: usize) -> Arrow {
        match &self.kind {
            Kind::Constant(g) => Arrow {
                src: x,
                tgt: x,
                body: Body::Elem(g.identity(x)),
            },
            Kind::Loop(_) => Arrow {
                src: x,
                tgt: x,
                body: Body::Word(Vec::new()),
            },
            Kind::Coskeletal { base, level } => {
                if n <= *level {
                    base.identity(n, x)
                } else {
                    Arrow {
                        src: x,
                        tgt: x,
                        body: Body::Sphere(vec![self.identity(n - 1, x); n + 1]),
                    }
                }
            }
        }
    }

    pub fn is_identity(&self, n: usize, f: &Arrow) -> bool {
        f.src == f.tgt && *f == self.identity(n, f.src)
    }

    /// `f` then `g`; `None` when the ends do not match.
    pub fn compose(&self, n: usize, f: &Arrow, g: &Arrow) -> Option<Arrow> {
        if f.tgt != g.src {
            return None;
        }
        let body = match (&self.kind, &f.body, &g.body) {
            (Kind::Constant(gd), Body::Elem(a), Body::Elem(b)) => Body::Elem(gd.compose(*a, *b)?),
            (Kind::Loop(_), Body::Word(a), Body::Word(b)) => {
                let mut w = a.clone();
                for l in b {
                    push_letter(&mut w, l.clone());
                }
                Body::Word(w)
            }
            (Kind::Coskeletal { base, level }, _, _) if n <= *level => {
                return base.compose(n, f, g);
            }
            (Kind::Coskeletal { .. }, Body::Sphere(a), Body::Sphere(b)) => Body::Sphere(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| self.compose(n - 1, x, y))
                    .collect::<Option<Vec<_>>>()?,
            ),
            _ => return None,
        };
        Some(Arrow {
            src: f.src,
            tgt: g.tgt,
            body,
        })
    }

    pub fn inverse(&self, n: usize, f: &Arrow) -> Arrow {
        let body = match (&self.kind, &f.body) {
            (Kind::Constant(g), Body::Elem(a)) => Body::Elem(g.inverse(*a)),
            (Kind::Loop(_), Body::Word(w)) => {
                Body::Word(w.iter().rev().map(|(s, inv)| (s.clone(), !inv)).collect())
            }
            (Kind::Coskeletal { base, level }, _) if n <= *level => return base.inverse(n, f),
            (Kind::Coskeletal { .. }, Body::Sphere(fs)) => {
                Body::Sphere(fs.iter().map(|a| self.inverse(n - 1, a)).collect())
            }
            _ => panic!("arrow does not belong to {}", self.name),
        };
        Arrow {
            src: f.tgt,
            tgt: f.src,
            body,
        }
    }

    /// `d_i : level n → level n-1`.
    pub fn face(&self, n: usize, i: usize, f: &Arrow) -> Arrow {
        match (&self.kind, &f.body) {
            (Kind::Constant(_), _) => f.clone(),
            (Kind::Loop(x), Body::Word(w)) => {
                let mut out = Vec::new();
                for (s, inv) in w {
                    let mut img = if i == 0 {
                        let mut v = Vec::new();
                        v.extend(generator(x, x.face(s, 0), true));
                        v.extend(generator(x, x.face(s, 1), false));
                        v
                    } else {
                        generator(x, x.face(s, i + 1), false)
                    };
                    if *inv {
                        img = img.into_iter().rev().map(|(s, b)| (s, !b)).collect();
                    }
                    for l in img {
                        push_letter(&mut out, l);
                    }
                }
                Arrow {
                    src: f.src,
                    tgt: f.tgt,
                    body: Body::Word(out),
                }
            }
            (Kind::Coskeletal { base, level }, _) if n <= *level => base.face(n, i, f),
            (Kind::Coskeletal { .. }, Body::Sphere(fs)) => fs[i].clone(),
            _ => panic!("arrow does not belong to {}", self.name),
        }
    }

    /// `s_j : level n → level n+1`.
    pub fn degen(&self, n: usize, j: usize, f: &Arrow) -> Arrow {
        match (&self.kind, &f.body) {
            (Kind::Constant(_), _) => f.clone(),
            (Kind::Loop(x), Body::Word(w)) => {
                let mut out = Vec::new();
                for (s, inv) in w {
                    for (t, b) in generator(x, x.degen(s, j + 1), false) {
                        push_letter(&mut out, (t, b ^ inv));
                    }
                }
                Arrow {
                    src: f.src,
                    tgt: f.tgt,
                    body: Body::Word(out),
                }
            }
            (Kind::Coskeletal { base, level }, _) if n < *level => base.degen(n, j, f),
            (Kind::Coskeletal { .. }, _) => {
                // faces of s_j f from the simplicial identities
                let faces = (0..=n + 1)
                    .map(|i| {
                        if i == j || i == j + 1 {
                            f.clone()
                        } else if i < j {
                            self.degen(n - 1, j - 1, &self.face(n, i, f))
                        } else {
                            self.degen(n - 1, j, &self.face(n, i - 1, f))
                        }
                    })
                    .collect();
                Arrow {
                    src: f.src,
                    tgt: f.tgt,
                    body: Body::Sphere(faces),
                }
            }
            _ => panic!("arrow does not belong to {}", self.name),
        }
    }

    /// Level-`n` arrows `x → y`. The flag reports that the level is infinite
    /// and the list was cut at `budget.word_length`.
    pub fn arrows(&self, n: usize, x: usize, y: usize, budget: &Budget) -> Result<(Vec<Arrow>, bool)> {
        match &self.kind {
            Kind::Constant(g) => Ok((
                g.hom(x, y)
                    .into_iter()
                    .map(|a| Arrow {
                        src: x,
                        tgt: y,
                        body: Body::Elem(a),
                    })
                    .collect(),
                false,
            )),
            Kind::Loop(xs) => Ok(loop_words(xs, n, x, y, budget)),
            Kind::Coskeletal { base, level } => {
                if n <= *level {
                    return base.arrows(n, x, y, budget);
                }
                let (lower, truncated) = self.arrows(n - 1, x, y, budget)?;
                let mut out = Vec::new();
                let mut tuple = Vec::with_capacity(n + 1);
                self.spheres(n, &lower, &mut tuple, &mut out, budget)?;
                Ok((
                    out.into_iter()
                        .map(|fs| Arrow {
                            src: x,
                            tgt: y,
                            body: Body::Sphere(fs),
                        })
                        .collect(),
                    truncated,
                ))
            }
        }
    }

    fn spheres(
        &self,
        n: usize,
        lower: &[Arrow],
        tuple: &mut Vec<Arrow>,
        out: &mut Vec<Vec<Arrow>>,
        budget: &Budget,
    ) -> Result<()> {
        if tuple.len() == n + 1 {
            out.push(tuple.clone());
            if out.len() > budget.elements {
                return Err(Error::EnumerationImpossible(format!(
                    "{}: more than {} arrows in level {n}",
                    self.name, budget.elements
                )));
            }
            return Ok(());
        }
        let j = tuple.len();
        for cand in lower {
            // d_i x_j = d_{j-1} x_i for i < j
            let ok = n < 2
                || (0..j).all(|i| self.face(n - 1, i, cand) == self.face(n - 1, j - 1, &tuple[i]));
            if ok {
                tuple.push(cand.clone());
                self.spheres(n, lower, tuple, out, budget)?;
                tuple.pop();
            }
        }
        Ok(())
    }

    /// All level-`n` arrows.
    pub fn all_arrows(&self, n: usize, budget: &Budget) -> Result<(Vec<Arrow>, bool)> {
        let mut out = Vec::new();
        let mut truncated = false;
        for x in 0..self.objects.len() {
            for y in 0..self.objects.len() {
                let (a, t) = self.arrows(n, x, y, budget)?;
                out.extend(a);
                truncated |= t;
            }
        }
        Ok((out, truncated))
    }

    pub fn arrow_label(&self, f: &Arrow) -> String {
        match (&self.kind, &f.body) {
            (Kind::Constant(g), Body::Elem(a)) => g.arrow(*a).name.clone(),
            (Kind::Loop(x), Body::Word(w)) => {
                if w.is_empty() {
                    format!("1{}", self.objects[f.src])
                } else {
                    let parts: Vec<String> = w
                        .iter()
                        .map(|(s, inv)| {
                            let c = Compact(s, x.cell_name(s.cell())).to_string();
                            if *inv {
                                format!("[{c}]^-1")
                            } else {
                                format!("[{c}]")
                            }
                        })
                        .collect();
                    parts.join("")
                }
            }
            (Kind::Coskeletal { base, .. }, Body::Sphere(fs)) => {
                let parts: Vec<String> = fs.iter().map(|a| self.arrow_label(a)).collect();
                let _ = base;
                format!("<{}>", parts.join(","))
            }
            (Kind::Coskeletal { base, .. }, _) => base.arrow_label(f),
            _ => "?".into(),
        }
    }
}

fn push_letter(w: &mut Vec<(Simplex, bool)>, l: (Simplex, bool)) {
    if let Some(last) = w.last() {
        if last.0 == l.0 && last.1 != l.1 {
            w.pop();
            return;
        }
    }
    w.push(l);
}

fn is_s0_degenerate(s: &Simplex) -> bool {
    s.dim() >= 1 && s.surj[0] == s.surj[1]
}

/// `[s]` as a word: empty when `s` is `s_0`-degenerate.
fn generator(_x: &SSet, s: Simplex, inverse: bool) -> Vec<(Simplex, bool)> {
    if is_s0_degenerate(&s) {
        Vec::new()
    } else {
        vec![(s, inverse)]
    }
}

/// Loop-groupoid generators of level `n` as `(simplex, source, target)`.
pub(crate) fn loop_generators(x: &SSet, n: usize) -> Vec<(Simplex, usize, usize)> {
    x.simplices(n + 1)
        .into_iter()
        .filter(|s| !is_s0_degenerate(s))
        .map(|s| {
            let src = x.vertex_of(&s, 1).index;
            let tgt = x.vertex_of(&s, 0).index;
            (s, src, tgt)
        })
        .collect()
}

/// Reduced words `x → y` of length ≤ `budget.word_length`; the flag is set
/// when longer reduced words exist.
fn loop_words(xs: &SSet, n: usize, x: usize, y: usize, budget: &Budget) -> (Vec<Arrow>, bool) {
    let gens = loop_generators(xs, n);
    let mut frontier: Vec<(usize, Vec<(Simplex, bool)>)> = vec![(x, Vec::new())];
    let mut out = Vec::new();
    let mut truncated = false;
    for len in 0..=budget.word_length + 1 {
        if len == budget.word_length + 1 {
            truncated = !frontier.is_empty() && frontier.iter().any(|(at, w)| extends(&gens, *at, w));
            break;
        }
        let mut next = Vec::new();
        for (at, w) in &frontier {
            if *at == y {
                out.push(Arrow {
                    src: x,
                    tgt: y,
                    body: Body::Word(w.clone()),
                });
            }
            if len < budget.word_length {
                for (g, s, t) in &gens {
                    for inv in [false, true] {
                        let (from, to) = if inv { (*t, *s) } else { (*s, *t) };
                        if from != *at {
                            continue;
                        }
                        if let Some(last) = w.last() {
                            if last.0 == *g && last.1 != inv {
                                continue;
                            }
                        }
                        let mut v = w.clone();
                        v.push((g.clone(), inv));
                        next.push((to, v));
                    }
                }
            }
        }
        if len < budget.word_length {
            frontier = next;
        } else {
            frontier.retain(|_| true);
        }
    }
    out.sort();
    (out, truncated)
}

fn extends(gens: &[(Simplex, usize, usize)], at: usize, w: &[(Simplex, bool)]) -> bool {
    gens.iter().any(|(g, s, t)| {
        [(false, *s), (true, *t)]
            .iter()
            .any(|&(inv, from)| from == at && w.last().is_none_or(|l| !(l.0 == *g && l.1 != inv)))
    })
}

/// Element of `W̄H`: the object for dimension 0, otherwise the string
/// `(g_{m-1}, …, g_0)` stored as `arrows[k] = g_k` (level `k`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WString {
    pub object: usize,
    pub arrows: Vec<Arrow>,
}

struct WBar<'a> {
    h: &'a SGpd,
}

impl WBar<'_> {
    fn make(&self, arrows: Vec<Arrow>, object: usize) -> WString {
        let object = arrows.last().map_or(object, |g| g.tgt);
        WString { object, arrows }
    }
}

impl SimplicialObject for WBar<'_> {
    type Elem = WString;

    fn elements(&self, dim: usize, budget: &Budget) -> Result<Vec<WString>> {
        if dim == 0 {
            return Ok((0..self.h.objects.len())
                .map(|o| WString {
                    object: o,
                    arrows: Vec::new(),
                })
                .collect());
        }
        let levels: Vec<Vec<Arrow>> = (0..dim)
            .map(|k| Ok(self.h.all_arrows(k, budget)?.0))
            .collect::<Result<_>>()?;
        let mut out: Vec<Vec<Arrow>> = levels[0].iter().map(|g| vec![g.clone()]).collect();
        for level in levels.iter().skip(1) {
            let mut next = Vec::new();
            for s in &out {
                let end = s.last().unwrap().tgt;
                for g in level.iter().filter(|g| g.src == end) {
                    let mut t = s.clone();
                    t.push(g.clone());
                    next.push(t);
                }
            }
            if next.len() > budget.elements {
                return Err(Error::EnumerationImpossible(format!(
                    "W̄{} has more than {} strings in dimension {dim}",
                    self.h.name, budget.elements
                )));
            }
            out = next;
        }
        Ok(out.into_iter().map(|a| self.make(a, 0)).collect())
    }

    fn face(&self, m: usize, i: usize, e: &WString) -> WString {
        let g = &e.arrows;
        if m == 1 {
            let o = if i == 0 { g[0].src } else { g[0].tgt };
            return WString {
                object: o,
                arrows: Vec::new(),
            };
        }
        if i == 0 {
            return self.make(g[..m - 1].to_vec(), 0);
        }
        let mut out: Vec<Option<Arrow>> = vec![None; m - 1];
        for k in (m - i + 1)..m {
            out[k - 1] = Some(self.h.face(k, i - (m - k), &g[k]));
        }
        if i < m {
            let top = self.h.face(m - i, 0, &g[m - i]);
            out[m - i - 1] = self.h.compose(m - i - 1, &g[m - i - 1], &top);
        }
        for k in 0..(m - i).saturating_sub(1) {
            out[k] = Some(g[k].clone());
        }
        let arrows = out
            .into_iter()
            .map(|a| a.expect("W̄ faces stay composable"))
            .collect();
        self.make(arrows, 0)
    }

    fn degeneracy(&self, m: usize, i: usize, e: &WString) -> WString {
        if m == 0 {
            return self.make(vec![self.h.identity(0, e.object)], 0);
        }
        let g = &e.arrows;
        let mut out: Vec<Option<Arrow>> = vec![None; m + 1];
        for k in (m - i)..m {
            out[k + 1] = Some(self.h.degen(k, i - (m - k), &g[k]));
        }
        let at = if i < m { g[m - i - 1].tgt } else { g[0].src };
        out[m - i] = Some(self.h.identity(m - i, at));
        for k in 0..(m - i) {
            out[k] = Some(g[k].clone());
        }
        self.make(out.into_iter().map(Option::unwrap).collect(), 0)
    }

    fn label(&self, _dim: usize, e: &WString) -> String {
        if e.arrows.is_empty() {
            return self.h.objects[e.object].clone();
        }
        let parts: Vec<String> = e.arrows.iter().rev().map(|a| self.h.arrow_label(a)).collect();
        format!("({})", parts.join(","))
    }
}

fn closure_for(h: &SGpd) -> Closure {
    if h.is_presented() {
        Closure::Filter
    } else {
        Closure::Strict
    }
}

/// The classifying complex `W̄H` up to `max_dim`.
pub fn wbar(h: &SGpd, max_dim: usize, budget: &Budget) -> Result<Realized<WString>> {
    budget.check_dim(max_dim)?;
    realize(&format!("W̄{}", h.name), &WBar { h }, max_dim, closure_for(h), budget)
}

/// Element of the diagonal nerve: start object and `m` composable level-`m` arrows.
pub type DiagChain = (usize, Vec<Arrow>);

struct Diagonal<'a> {
    h: &'a SGpd,
}

impl SimplicialObject for Diagonal<'_> {
    type Elem = DiagChain;

    fn elements(&self, dim: usize, budget: &Budget) -> Result<Vec<DiagChain>> {
        let objs = self.h.objects.len();
        if dim == 0 {
            return Ok((0..objs).map(|o| (o, Vec::new())).collect());
        }
        let (level, _) = self.h.all_arrows(dim, budget)?;
        let mut out: Vec<DiagChain> = level.iter().map(|a| (a.src, vec![a.clone()])).collect();
        for _ in 1..dim {
            let mut next = Vec::new();
            for (o, path) in &out {
                let end = path.last().unwrap().tgt;
                for a in level.iter().filter(|a| a.src == end) {
                    let mut p = path.clone();
                    p.push(a.clone());
                    next.push((*o, p));
                }
            }
            if next.len() > budget.elements {
                return Err(Error::EnumerationImpossible(format!(
                    "d B{} has more than {} simplices in dimension {dim}",
                    self.h.name, budget.elements
                )));
            }
            out = next;
        }
        Ok(out)
    }

    fn face(&self, m: usize, i: usize, e: &DiagChain) -> DiagChain {
        let path: Vec<Arrow> = e.1.iter().map(|a| self.h.face(m, i, a)).collect();
        let mut p = path;
        if i == 0 {
            let first = p.remove(0);
            (first.tgt, p)
        } else if i == m {
            p.pop();
            (e.0, p)
        } else {
            let c = self
                .h
                .compose(m - 1, &p[i - 1], &p[i])
                .expect("nerve faces compose adjacent arrows");
            p.splice(i - 1..=i, [c]);
            (e.0, p)
        }
    }

    fn degeneracy(&self, m: usize, j: usize, e: &DiagChain) -> DiagChain {
        let mut p: Vec<Arrow> = e.1.iter().map(|a| self.h.degen(m, j, a)).collect();
        let at = if j == 0 { e.0 } else { p[j - 1].tgt };
        p.insert(j, self.h.identity(m + 1, at));
        (e.0, p)
    }

    fn label(&self, _dim: usize, e: &DiagChain) -> String {
        if e.1.is_empty() {
            self.h.objects[e.0].clone()
        } else {
            let parts: Vec<String> = e.1.iter().map(|a| self.h.arrow_label(a)).collect();
            parts.join("|")
        }
    }
}

/// The diagonal of the levelwise nerve, up to `max_dim`.
pub fn diag_nerve(h: &SGpd, max_dim: usize, budget: &Budget) -> Result<Realized<DiagChain>> {
    budget.check_dim(max_dim)?;
    realize(&format!("dB{}", h.name), &Diagonal { h }, max_dim, closure_for(h), budget)
}

/// The simplicial set of arrows `x → y`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: usize,
    pub target: usize,
    pub realized: Realized<Arrow>,
}

impl HomSpace {
    pub fn sset(&self) -> &Arc<SSet> {
        &self.realized.sset
    }

    pub fn truncated(&self) -> bool {
        self.realized.truncated
    }
}

struct Hom<'a> {
    h: &'a SGpd,
    x: usize,
    y: usize,
}

impl SimplicialObject for Hom<'_> {
    type Elem = Arrow;

    fn elements(&self, dim: usize, budget: &Budget) -> Result<Vec<Arrow>> {
        Ok(self.h.arrows(dim, self.x, self.y, budget)?.0)
    }

    fn face(&self, dim: usize, i: usize, e: &Arrow) -> Arrow {
        self.h.face(dim, i, e)
    }

    fn degeneracy(&self, dim: usize, j: usize, e: &Arrow) -> Arrow {
        self.h.degen(dim, j, e)
    }

    fn label(&self, _dim: usize, e: &Arrow) -> String {
        self.h.arrow_label(e)
    }
}

pub fn hom_space(h: &SGpd, x: &str, y: &str, max_dim: usize, budget: &Budget) -> Result<HomSpace> {
    budget.check_dim(max_dim)?;
    let (xi, yi) = (h.object_index(x)?, h.object_index(y)?);
    let name = format!("{}({x},{y})", h.name);
    let realized = realize(&name, &Hom { h, x: xi, y: yi }, max_dim, closure_for(h), budget)?;
    let mut realized = realized;
    if h.is_presented() {
        // levels cut by word length are reported even when no face was dropped
        let cut = (0..=max_dim).any(|n| h.arrows(n, xi, yi, budget).map(|a| a.1).unwrap_or(true));
        realized.truncated |= cut;
    }
    Ok(HomSpace {
        source: xi,
        target: yi,
        realized,
    })
}

/// A simplicial functor between simplicial groupoids of matching kinds.
#[derive(Clone, Debug)]
pub enum SGpdMap {
    /// `G(f)` for a simplicial map `f`.
    Loop(crate::scomplex::SMap),
    /// A constant functor between constant groupoids.
    Constant(super::groupoid::Functor),
    /// The hom-wise coskeleton of a map, at the given level.
    Coskeletal(Box<SGpdMap>, usize),
}

impl SGpdMap {
    pub fn on_object(&self, x: usize) -> usize {
        match self {
            SGpdMap::Loop(f) => f.image_of_cell(crate::scomplex::CellId { dim: 0, index: x }).cell().index,
            SGpdMap::Constant(f) => f.on_objects[x],
            SGpdMap::Coskeletal(inner, _) => inner.on_object(x),
        }
    }

    /// Image of a level-`n` arrow.
    pub fn apply(&self, n: usize, a: &Arrow) -> Arrow {
        let (src, tgt) = (self.on_object(a.src), self.on_object(a.tgt));
        let body = match (self, &a.body) {
            (SGpdMap::Loop(f), Body::Word(w)) => {
                let mut out = Vec::new();
                for (s, inv) in w {
                    for (t, b) in generator(f.target(), f.apply(s), *inv) {
                        push_letter(&mut out, (t, b));
                    }
                }
                Body::Word(out)
            }
            (SGpdMap::Constant(f), Body::Elem(e)) => Body::Elem(f.on_arrows[*e]),
            (SGpdMap::Coskeletal(inner, level), _) if n <= *level => return inner.apply(n, a),
            (SGpdMap::Coskeletal(..), Body::Sphere(fs)) => {
                Body::Sphere(fs.iter().map(|x| self.apply(n - 1, x)).collect())
            }
            _ => panic!("map does not match the groupoid kind"),
        };
        Arrow { src, tgt, body }
    }
}

/// `W̄F` between realizations.
pub fn wbar_map(f: &SGpdMap, a: &Realized<WString>, b: &Realized<WString>) -> Result<crate::scomplex::SMap> {
    crate::scomplex::realize_map(a, b, |_, e| WString {
        object: f.on_object(e.object),
        arrows: e.arrows.iter().enumerate().map(|(k, g)| f.apply(k, g)).collect(),
    })
}

/// `dB F` between realizations.
pub fn diag_nerve_map(
    f: &SGpdMap,
    a: &Realized<DiagChain>,
    b: &Realized<DiagChain>,
) -> Result<crate::scomplex::SMap> {
    crate::scomplex::realize_map(a, b, |dim, (x, path)| {
        (f.on_object(*x), path.iter().map(|g| f.apply(dim, g)).collect())
    })
}
