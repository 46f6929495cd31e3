use std::collections::HashMap;
use std::sync::Arc;

use crate::scomplex::{realize, Closure, Realized, SMap, SSet, SimplicialObject};
use crate::{Budget, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GArrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A groupoid with finitely many objects and arrows, given by its
/// composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    name: String,
    objects: Vec<String>,
    arrows: Vec<GArrow>,
    /// `comp[(f, g)]` is `g ∘ f` (first `f`, then `g`)
    comp: HashMap<(usize, usize), usize>,
    identities: Vec<usize>,
    inverses: Vec<usize>,
}

impl FiniteGroupoid {
    /// Builds and validates a groupoid. `compose(f, g)` is `g ∘ f` and is
    /// only asked for composable pairs.
    pub fn new(
        name: &str,
        objects: Vec<String>,
        arrows: Vec<GArrow>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::malformed(format!("{name}: {m}")));
        let mut comp = HashMap::new();
        for (f, af) in arrows.iter().enumerate() {
            if af.src >= objects.len() || af.tgt >= objects.len() {
                return bad(format!("arrow `{}` has an unknown end", af.name));
            }
            for (g, ag) in arrows.iter().enumerate() {
                if af.tgt == ag.src {
                    let h = compose(f, g);
                    if h >= arrows.len() || arrows[h].src != af.src || arrows[h].tgt != ag.tgt {
                        return bad(format!("`{}` then `{}` is ill-typed", af.name, ag.name));
                    }
                    comp.insert((f, g), h);
                }
            }
        }
        let mut identities = Vec::with_capacity(objects.len());
        for x in 0..objects.len() {
            let id = (0..arrows.len()).find(|&e| {
                arrows[e].src == x
                    && arrows[e].tgt == x
                    && arrows
                        .iter()
                        .enumerate()
                        .all(|(f, a)| (a.src != x || comp[&(e, f)] == f) && (a.tgt != x || comp[&(f, e)] == f))
            });
            match id {
                Some(e) => identities.push(e),
                None => return bad(format!("object `{}` has no identity", objects[x])),
            }
        }
        let mut inverses = Vec::with_capacity(arrows.len());
        for (f, a) in arrows.iter().enumerate() {
            let inv = (0..arrows.len()).find(|&g| {
                arrows[g].src == a.tgt
                    && comp[&(f, g)] == identities[a.src]
                    && comp[&(g, f)] == identities[a.tgt]
            });
            match inv {
                Some(g) => inverses.push(g),
                None => return bad(format!("arrow `{}` has no inverse", a.name)),
            }
        }
        for (&(f, g), &fg) in &comp {
            for h in 0..arrows.len() {
                if arrows[g].tgt == arrows[h].src && comp[&(fg, h)] != comp[&(f, comp[&(g, h)])] {
                    return bad("composition is not associative".into());
                }
            }
        }
        let mut names = std::collections::HashSet::new();
        if !arrows.iter().all(|a| names.insert(a.name.clone())) {
            return bad("arrow names repeat".into());
        }
        Ok(FiniteGroupoid {
            name: name.to_string(),
            objects,
            arrows,
            comp,
            identities,
            inverses,
        })
    }

    /// One-object groupoid from a multiplication table `table[a][b] = a·b`,
    /// composed as `b ∘ a = a·b`, i.e. `a` first.
    pub fn group(name: &str, elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != elements.len() || table.iter().any(|r| r.len() != elements.len()) {
            return Err(Error::malformed(format!("{name}: table is not square")));
        }
        let arrows = elements
            .into_iter()
            .map(|n| GArrow {
                name: n,
                src: 0,
                tgt: 0,
            })
            .collect();
        FiniteGroupoid::new(name, vec!["*".into()], arrows, |a, b| table[a][b])
    }

    /// `ℤ/n` with elements `e, g, g2, …`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                k => format!("g{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::group(&format!("Z/{n}"), names, table).expect("cyclic groups are groups")
    }

    /// The symmetric group on three letters, elements named by images of `123`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let names = perms
            .iter()
            .map(|p| {
                if p == &[0, 1, 2] {
                    "e".to_string()
                } else {
                    p.iter().map(|v| (v + 1).to_string()).collect()
                }
            })
            .collect();
        // a then b: i ↦ b[a[i]]
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let c = [b[a[0]], b[a[1]], b[a[2]]];
                        perms.iter().position(|p| p == &c).unwrap()
                    })
                    .collect()
            })
            .collect();
        Self::group("S3", names, table).expect("S3 is a group")
    }

    /// Product of two groupoids.
    pub fn product(a: &Self, b: &Self) -> Self {
        let objects = a
            .objects
            .iter()
            .flat_map(|x| b.objects.iter().map(move |y| pair_name(x, y, a.objects.len() * b.objects.len())))
            .collect();
        let nb = b.objects.len();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for (i, f) in a.arrows.iter().enumerate() {
            for (j, g) in b.arrows.iter().enumerate() {
                index.insert((i, j), arrows.len());
                arrows.push(GArrow {
                    name: format!("({},{})", f.name, g.name),
                    src: f.src * nb + g.src,
                    tgt: f.tgt * nb + g.tgt,
                });
            }
        }
        let nba = b.arrows.len();
        FiniteGroupoid::new(&format!("{}×{}", a.name, b.name), objects, arrows, |p, q| {
            let (pi, pj) = (p / nba, p % nba);
            let (qi, qj) = (q / nba, q % nba);
            index[&(a.comp[&(pi, qi)], b.comp[&(pj, qj)])]
        })
        .expect("products of groupoids are groupoids")
    }

    /// Objects with identity arrows only; arrows are named `1x`.
    pub fn discrete(name: &str, objects: &[&str]) -> Self {
        let arrows = objects
            .iter()
            .enumerate()
            .map(|(i, o)| GArrow {
                name: format!("1{o}"),
                src: i,
                tgt: i,
            })
            .collect();
        FiniteGroupoid::new(name, objects.iter().map(|s| s.to_string()).collect(), arrows, |f, _| f)
            .expect("discrete groupoids are groupoids")
    }

    pub fn trivial() -> Self {
        let mut g = Self::discrete("1", &["*"]);
        g.arrows[0].name = "e".into();
        g
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

    pub fn arrows(&self) -> &[GArrow] {
        &self.arrows
    }

    pub fn arrow(&self, f: usize) -> &GArrow {
        &self.arrows[f]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// `g ∘ f`; `None` when not composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.comp.get(&(f, g)).copied()
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.arrows[f].src] == f
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverses[f]
    }

    /// Arrows `x → y`.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&f| self.arrows[f].src == x && self.arrows[f].tgt == y)
            .collect()
    }

    pub fn is_group(&self) -> bool {
        self.objects.len() == 1
    }
}

fn pair_name(x: &str, y: &str, count: usize) -> String {
    if count == 1 {
        "*".to_string()
    } else {
        format!("({x},{y})")
    }
}

/// A `n`-simplex of the nerve: start object and a path `a_1, …, a_n`.
pub type Chain = (usize, Vec<usize>);

struct NerveObject<'a> {
    g: &'a FiniteGroupoid,
}

impl NerveObject<'_> {
    fn chains(&self, n: usize) -> Vec<Chain> {
        let mut out: Vec<Chain> = (0..self.g.objects.len()).map(|x| (x, Vec::new())).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for (x, path) in out {
                let end = path.last().map_or(x, |&a| self.g.arrows[a].tgt);
                for (a, arrow) in self.g.arrows.iter().enumerate() {
                    if arrow.src == end && !self.g.is_identity(a) {
                        let mut p = path.clone();
                        p.push(a);
                        next.push((x, p));
                    }
                }
            }
            out = next;
        }
        out
    }
}

impl SimplicialObject for NerveObject<'_> {
    type Elem = Chain;

    fn elements(&self, dim: usize, budget: &Budget) -> Result<Vec<Chain>> {
        let estimate = (self.g.arrows.len() as f64).powi(dim as i32);
        if estimate > budget.elements as f64 * 4.0 {
            return Err(Error::EnumerationImpossible(format!(
                "nerve of {} in dimension {dim}",
                self.g.name
            )));
        }
        Ok(self.chains(dim))
    }

    fn face(&self, dim: usize, i: usize, e: &Chain) -> Chain {
        let (x, path) = e;
        let mut p = path.clone();
        if i == 0 {
            let first = p.remove(0);
            (self.g.arrows[first].tgt, p)
        } else if i == dim {
            p.pop();
            (*x, p)
        } else {
            let c = self.g.comp[&(p[i - 1], p[i])];
            p.splice(i - 1..=i, [c]);
            (*x, p)
        }
    }

    fn degeneracy(&self, _dim: usize, j: usize, e: &Chain) -> Chain {
        let (x, path) = e;
        let at = if j == 0 { *x } else { self.g.arrows[path[j - 1]].tgt };
        let mut p = path.clone();
        p.insert(j, self.g.identities[at]);
        (*x, p)
    }

    fn label(&self, _dim: usize, e: &Chain) -> String {
        if e.1.is_empty() {
            self.g.objects[e.0].clone()
        } else {
            let names: Vec<&str> = e.1.iter().map(|&a| self.g.arrows[a].name.as_str()).collect();
            names.join("|")
        }
    }
}

/// The nerve of a finite groupoid up to `max_dim`. Edges run from `d_1` to `d_0`.
pub fn nerve(g: &FiniteGroupoid, max_dim: usize, budget: &Budget) -> Result<Realized<Chain>> {
    budget.check_dim(max_dim)?;
    realize(&format!("N({})", g.name), &NerveObject { g }, max_dim, Closure::Strict, budget)
}

/// The nerve as a plain simplicial set.
pub fn nerve_sset(g: &FiniteGroupoid, max_dim: usize, budget: &Budget) -> Result<Arc<SSet>> {
    Ok(nerve(g, max_dim, budget)?.sset)
}

/// A functor between finite groupoids, given on arrows.
#[derive(Clone, Debug)]
pub struct Functor {
    pub on_objects: Vec<usize>,
    pub on_arrows: Vec<usize>,
}

impl Functor {
    /// Checks functoriality of an arrow assignment; objects follow from it.
    pub fn new(a: &FiniteGroupoid, b: &FiniteGroupoid, on_arrows: Vec<usize>) -> Result<Self> {
        if on_arrows.len() != a.arrows.len() {
            return Err(Error::malformed("functor must assign every arrow"));
        }
        let on_objects: Vec<usize> = (0..a.objects.len())
            .map(|x| b.arrows[on_arrows[a.identities[x]]].src)
            .collect();
        for (f, af) in a.arrows.iter().enumerate() {
            let bf = &b.arrows[on_arrows[f]];
            if bf.src != on_objects[af.src] || bf.tgt != on_objects[af.tgt] {
                return Err(Error::malformed(format!("functor breaks the ends of `{}`", af.name)));
            }
        }
        for (&(f, g), &h) in &a.comp {
            if b.comp.get(&(on_arrows[f], on_arrows[g])) != Some(&on_arrows[h]) {
                return Err(Error::malformed("functor does not preserve composition"));
            }
        }
        Ok(Functor {
            on_objects,
            on_arrows,
        })
    }

    /// A group homomorphism given by element names, `from ↦ to`.
    pub fn by_names(a: &FiniteGroupoid, b: &FiniteGroupoid, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut on = vec![usize::MAX; a.arrows.len()];
        for (x, y) in pairs {
            let i = a.arrow_index(x).ok_or_else(|| Error::malformed(format!("no arrow `{x}`")))?;
            let j = b.arrow_index(y).ok_or_else(|| Error::malformed(format!("no arrow `{y}`")))?;
            on[i] = j;
        }
        Self::new(a, b, on)
    }

    pub fn is_surjective_on_homs(&self, a: &FiniteGroupoid, b: &FiniteGroupoid) -> bool {
        (0..a.objects.len()).all(|x| {
            (0..a.objects.len()).all(|y| {
                let img: std::collections::HashSet<usize> =
                    a.hom(x, y).iter().map(|&f| self.on_arrows[f]).collect();
                img.len() == b.hom(self.on_objects[x], self.on_objects[y]).len()
            })
        })
    }
}

/// The map of nerves induced by a functor.
pub fn nerve_map(
    f: &Functor,
    na: &Realized<Chain>,
    nb: &Realized<Chain>,
) -> Result<SMap> {
    crate::scomplex::realize_map(na, nb, |_, (x, path)| {
        (f.on_objects[*x], path.iter().map(|&a| f.on_arrows[a]).collect())
    })
}
