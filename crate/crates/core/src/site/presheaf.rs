use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cat::FiniteCat;
use crate::scomplex::{coproduct, load_smap, load_sset, CellId, MapSearch, SMap, SSet};
use crate::{Budget, Error, Result};

/// A presheaf of simplicial sets: `sections[u] = X(u)` and, for every arrow
/// `a : v → u`, `restrictions[a] : X(u) → X(v)`.
#[derive(Clone, Debug)]
pub struct Presheaf {
    name: String,
    site: Arc<FiniteCat>,
    sections: Vec<Arc<SSet>>,
    restrictions: Vec<SMap>,
}

impl Presheaf {
    /// `restrict` gives `X(a)` for every non-identity arrow `a`; identities
    /// are filled in and functoriality is checked on the full table.
    pub fn new(
        name: &str,
        site: Arc<FiniteCat>,
        sections: Vec<Arc<SSet>>,
        mut restrict: impl FnMut(usize) -> Result<SMap>,
    ) -> Result<Self> {
        if sections.len() != site.objects().len() {
            return Err(Error::malformed(format!("{name}: one section per object is required")));
        }
        let mut restrictions = Vec::with_capacity(site.arrows().len());
        for (a, arr) in site.arrows().iter().enumerate() {
            let r = if site.is_identity(a) {
                SMap::identity(sections[arr.src].clone())
            } else {
                restrict(a)?
            };
            if !same(r.source(), &sections[arr.tgt]) || !same(r.target(), &sections[arr.src]) {
                return Err(Error::malformed(format!(
                    "{name}: restriction along `{}` has the wrong ends",
                    arr.name
                )));
            }
            restrictions.push(r);
        }
        let x = Presheaf {
            name: name.to_string(),
            site,
            sections,
            restrictions,
        };
        x.check_functorial()?;
        Ok(x)
    }

    fn check_functorial(&self) -> Result<()> {
        let arrows = self.site.arrows();
        for f in 0..arrows.len() {
            for g in 0..arrows.len() {
                if let Some(h) = self.site.compose(f, g) {
                    // X(g∘f) = X(f) ∘ X(g)
                    let lhs = &self.restrictions[h];
                    let rhs = self.restrictions[g].then(&self.restrictions[f]);
                    if *lhs != rhs {
                        return Err(Error::malformed(format!(
                            "{}: restriction is not functorial at `{}` then `{}`",
                            self.name, arrows[f].name, arrows[g].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant presheaf with every restriction the identity.
    pub fn constant(site: &Arc<FiniteCat>, k: &Arc<SSet>) -> Self {
        let sections = vec![k.clone(); site.objects().len()];
        Presheaf::new(&format!("c{}", k.name()), site.clone(), sections, |_| Ok(SMap::identity(k.clone())))
            .expect("constant presheaves are functorial")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn site(&self) -> &Arc<FiniteCat> {
        &self.site
    }

    pub fn at(&self, u: usize) -> &Arc<SSet> {
        &self.sections[u]
    }

    pub fn sections(&self) -> &[Arc<SSet>] {
        &self.sections
    }

    pub fn restriction(&self, a: usize) -> &SMap {
        &self.restrictions[a]
    }
}

fn same(a: &Arc<SSet>, b: &Arc<SSet>) -> bool {
    Arc::ptr_eq(a, b) || a.structurally_equal(b)
}

/// A natural transformation, one simplicial map per object.
#[derive(Clone, Debug)]
pub struct PresheafMap {
    pub source: Arc<Presheaf>,
    pub target: Arc<Presheaf>,
    pub components: Vec<SMap>,
}

impl PartialEq for PresheafMap {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl PresheafMap {
    pub fn new(source: Arc<Presheaf>, target: Arc<Presheaf>, components: Vec<SMap>) -> Result<Self> {
        if !Arc::ptr_eq(source.site(), target.site()) && source.site() != target.site() {
            return Err(Error::malformed("presheaf map between different sites"));
        }
        let site = source.site().clone();
        if components.len() != site.objects().len() {
            return Err(Error::malformed("one component per object is required"));
        }
        for (u, c) in components.iter().enumerate() {
            if !same(c.source(), source.at(u)) || !same(c.target(), target.at(u)) {
                return Err(Error::malformed(format!(
                    "component at `{}` has the wrong ends",
                    site.objects()[u]
                )));
            }
        }
        let m = PresheafMap {
            source,
            target,
            components,
        };
        for (a, arr) in site.arrows().iter().enumerate() {
            if !natural_at(&m.source, &m.target, &m.components[arr.tgt], &m.components[arr.src], a) {
                return Err(Error::malformed(format!("map is not natural: square of `{}` does not commute", arr.name)));
            }
        }
        Ok(m)
    }

    pub fn identity(x: &Arc<Presheaf>) -> Self {
        let components = x.sections().iter().map(|s| SMap::identity(s.clone())).collect();
        PresheafMap {
            source: x.clone(),
            target: x.clone(),
            components,
        }
    }

    /// Every section the same map, between constant presheaves.
    pub fn constant(site: &Arc<FiniteCat>, f: &SMap) -> Self {
        let source = Arc::new(Presheaf::constant(site, f.source()));
        let target = Arc::new(Presheaf::constant(site, f.target()));
        PresheafMap {
            source,
            target,
            components: vec![f.clone(); site.objects().len()],
        }
    }

    pub fn site(&self) -> &Arc<FiniteCat> {
        self.source.site()
    }

    pub fn then(&self, g: &PresheafMap) -> PresheafMap {
        PresheafMap {
            source: self.source.clone(),
            target: g.target.clone(),
            components: self.components.iter().zip(&g.components).map(|(a, b)| a.then(b)).collect(),
        }
    }
}

/// `X(a)` then `f_v` equals `f_u` then `Y(a)` for `a : v → u`.
fn natural_at(x: &Presheaf, y: &Presheaf, fu: &SMap, fv: &SMap, a: usize) -> bool {
    x.restriction(a).then(fv) == fu.then(y.restriction(a))
}

/// `L_U K`: at `V`, one copy of `K` per arrow `V → U`, named `a.cell`.
#[derive(Clone, Debug)]
pub struct FreePresheaf {
    pub object: usize,
    pub presheaf: Arc<Presheaf>,
    /// `inclusions[v][i]` includes the copy of the `i`-th arrow `v → U`
    pub inclusions: Vec<Vec<SMap>>,
}

impl FreePresheaf {
    /// The copy of `K` at `U` indexed by the identity.
    pub fn unit(&self) -> &SMap {
        let site = self.presheaf.site();
        let i = site
            .hom(self.object, self.object)
            .iter()
            .position(|&a| a == site.identity(self.object))
            .expect("identity arrow");
        &self.inclusions[self.object][i]
    }
}

pub fn free_presheaf(site: &Arc<FiniteCat>, u: &str, k: &Arc<SSet>) -> Result<FreePresheaf> {
    let ui = site.object_index(u)?;
    let mut sections = Vec::new();
    let mut inclusions = Vec::new();
    // (v, cell of the section) ↦ (arrow, cell of K)
    let mut origin: Vec<HashMap<CellId, (usize, CellId)>> = Vec::new();
    for v in 0..site.objects().len() {
        let hom = site.hom(v, ui);
        let parts: Vec<(&str, &Arc<SSet>)> = hom.iter().map(|&a| (site.arrows()[a].name.as_str(), k)).collect();
        let name = format!("L{u}{}({})", k.name(), site.objects()[v]);
        let (sum, incl) = coproduct(&name, &parts);
        let mut o = HashMap::new();
        for (i, m) in incl.iter().enumerate() {
            for c in k.all_cells() {
                o.insert(m.image_of_cell(c).cell(), (hom[i], c));
            }
        }
        origin.push(o);
        sections.push(sum);
        inclusions.push(incl);
    }
    let name = format!("L_{u}{}", k.name());
    let presheaf = Presheaf::new(&name, site.clone(), sections.clone(), |b| {
        // b : w → v sends copy `a : v → U` to copy `a ∘ b`
        let (w, v) = (site.arrows()[b].src, site.arrows()[b].tgt);
        let hom_w = site.hom(w, ui);
        SMap::from_fn(sections[v].clone(), sections[w].clone(), |c| {
            let (a, kc) = origin[v][&c];
            let ab = site.compose(b, a).expect("composable");
            let i = hom_w.iter().position(|&x| x == ab).expect("composite lands in hom");
            Ok(inclusions[w][i].image_of_cell(kc).clone())
        })
    })?;
    Ok(FreePresheaf {
        object: ui,
        presheaf: Arc::new(presheaf),
        inclusions,
    })
}

/// `L_U i : L_U K → L_U K'`, copywise.
pub fn free_map(site: &Arc<FiniteCat>, u: &str, i: &SMap) -> Result<(FreePresheaf, FreePresheaf, PresheafMap)> {
    let a = free_presheaf(site, u, i.source())?;
    let b = free_presheaf(site, u, i.target())?;
    let components = (0..site.objects().len())
        .map(|v| {
            let mut origin = HashMap::new();
            for (j, m) in a.inclusions[v].iter().enumerate() {
                for c in i.source().all_cells() {
                    origin.insert(m.image_of_cell(c).cell(), (j, c));
                }
            }
            SMap::from_fn(a.presheaf.at(v).clone(), b.presheaf.at(v).clone(), |c| {
                let (j, kc) = origin[&c];
                Ok(b.inclusions[v][j].apply(i.image_of_cell(kc)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = PresheafMap::new(a.presheaf.clone(), b.presheaf.clone(), components)?;
    Ok((a, b, m))
}

/// Constraints for a presheaf map search: pinned cells through a mono
/// `i : A → B` with `h ∘ i = top`, and `f ∘ h = bottom`.
pub(crate) struct Constraints<'a> {
    pub under: Option<(&'a PresheafMap, &'a PresheafMap)>,
    pub over: Option<(&'a PresheafMap, &'a PresheafMap)>,
}

/// Natural transformations `source → target` meeting the constraints, in
/// lexicographic order of components; stops after `limit` solutions.
pub(crate) fn search_maps(
    source: &Arc<Presheaf>,
    target: &Arc<Presheaf>,
    c: &Constraints,
    limit: usize,
    budget: &Budget,
) -> Result<Vec<PresheafMap>> {
    let site = source.site().clone();
    let k = site.objects().len();
    let mut options: Vec<Vec<SMap>> = Vec::with_capacity(k);
    for u in 0..k {
        let mut search = MapSearch::new(source.at(u), target.at(u), budget);
        if let Some((i, top)) = c.under {
            let iu = &i.components[u];
            for cell in iu.source().all_cells() {
                let img = iu.image_of_cell(cell);
                if img.is_degenerate() {
                    return Err(Error::PreconditionFailed("the left map is not a monomorphism".into()));
                }
                search = search.fix(img.cell(), top.components[u].image_of_cell(cell).clone());
            }
        }
        let found = match c.over {
            Some((f, bottom)) => search.over(&f.components[u], &bottom.components[u]).all()?,
            None => search.all()?,
        };
        options.push(found);
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut next = vec![0usize; k];
    let arrows = site.arrows();
    loop {
        let u = chosen.len();
        if u == k {
            out.push(PresheafMap {
                source: source.clone(),
                target: target.clone(),
                components: chosen.iter().enumerate().map(|(v, &j)| options[v][j].clone()).collect(),
            });
            if out.len() >= limit {
                return Ok(out);
            }
            match chosen.pop() {
                Some(_) => continue,
                None => return Ok(out),
            }
        }
        let mut placed = false;
        while next[u] < options[u].len() {
            let j = next[u];
            next[u] += 1;
            let ok = arrows.iter().enumerate().all(|(a, arr)| {
                let (v, w) = (arr.tgt, arr.src);
                if v.max(w) != u || site.is_identity(a) {
                    return true;
                }
                let pick = |x: usize| if x == u { &options[u][j] } else { &options[x][chosen[x]] };
                natural_at(source, target, pick(v), pick(w), a)
            });
            if ok {
                chosen.push(j);
                placed = true;
                break;
            }
        }
        if !placed {
            next[u] = 0;
            if chosen.pop().is_none() {
                return Ok(out);
            }
        }
    }
}

/// All natural transformations `source → target`.
pub fn presheaf_homs(source: &Arc<Presheaf>, target: &Arc<Presheaf>, budget: &Budget) -> Result<Vec<PresheafMap>> {
    search_maps(source, target, &Constraints { under: None, over: None }, usize::MAX, budget)
}

impl FreePresheaf {
    /// The transpose `L_U K → X` of `g : K → X(U)`: copy `a` goes through `X(a) ∘ g`.
    pub fn extend(&self, g: &SMap, x: &Arc<Presheaf>) -> Result<PresheafMap> {
        let site = x.site().clone();
        let k = g.source();
        let components = (0..site.objects().len())
            .map(|v| {
                let hom = site.hom(v, self.object);
                let mut origin = HashMap::new();
                for (i, m) in self.inclusions[v].iter().enumerate() {
                    for c in k.all_cells() {
                        origin.insert(m.image_of_cell(c).cell(), (hom[i], c));
                    }
                }
                SMap::from_fn(self.presheaf.at(v).clone(), x.at(v).clone(), |c| {
                    let (a, kc) = origin[&c];
                    Ok(x.restriction(a).apply(g.image_of_cell(kc)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PresheafMap::new(self.presheaf.clone(), x.clone(), components)
    }

    /// The transpose `K → X(U)` of `φ : L_U K → X`.
    pub fn restrict(&self, phi: &PresheafMap) -> SMap {
        self.unit().then(&phi.components[self.object])
    }
}

/// Both sides of `Hom(L_U K, X) ≅ Hom(K, X(U))`, enumerated, with the
/// round trips checked in both directions.
#[derive(Clone, Debug, Serialize)]
pub struct FreeAdjunctionReport {
    pub object: String,
    pub presheaf_side: usize,
    pub section_side: usize,
    pub round_trip: bool,
}

impl FreeAdjunctionReport {
    pub fn is_bijection(&self) -> bool {
        self.presheaf_side == self.section_side && self.round_trip
    }
}

pub fn free_adjunction(site: &Arc<FiniteCat>, u: &str, k: &Arc<SSet>, x: &Arc<Presheaf>, budget: &Budget) -> Result<FreeAdjunctionReport> {
    let free = free_presheaf(site, u, k)?;
    let left = presheaf_homs(&free.presheaf, x, budget)?;
    let right = MapSearch::new(k, x.at(free.object), budget).all()?;
    let mut round_trip = true;
    for phi in &left {
        round_trip &= &free.extend(&free.restrict(phi), x)? == phi;
    }
    for g in &right {
        round_trip &= &free.restrict(&free.extend(g, x)?) == g;
    }
    Ok(FreeAdjunctionReport {
        object: u.to_string(),
        presheaf_side: left.len(),
        section_side: right.len(),
        round_trip,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafSpec {
    pub name: String,
    pub site: String,
    /// object ↦ simplicial set file
    pub sections: BTreeMap<String, String>,
    /// non-identity arrow ↦ map file `X(target) → X(source)`
    #[serde(default)]
    pub restrictions: BTreeMap<String, String>,
}

/// Reads a presheaf; file names are relative to `base`.
pub fn build_presheaf(spec: &PresheafSpec, base: Option<&Path>) -> Result<Presheaf> {
    let path = |p: &str| -> PathBuf {
        match base {
            Some(d) => d.join(p),
            None => PathBuf::from(p),
        }
    };
    let site = Arc::new(super::cat::load_site(&path(&spec.site))?);
    let sections = site
        .objects()
        .iter()
        .map(|o| {
            let f = spec
                .sections
                .get(o)
                .ok_or_else(|| Error::malformed(format!("{}: no section for `{o}`", spec.name)))?;
            Ok(Arc::new(load_sset(&path(f))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let s2 = site.clone();
    Presheaf::new(&spec.name, site, sections.clone(), |a| {
        let arr = &s2.arrows()[a];
        let f = spec
            .restrictions
            .get(&arr.name)
            .ok_or_else(|| Error::malformed(format!("{}: no restriction along `{}`", spec.name, arr.name)))?;
        let m = load_smap(&path(f))?;
        // rebase on the section objects so identity of ends is exact
        SMap::from_fn(sections[arr.tgt].clone(), sections[arr.src].clone(), |c| {
            let id = m.source().cell_name(c).to_string();
            let img = m.image_of_cell(m.source().lookup(&id).unwrap()).clone();
            let label = m.target().label(&img);
            sections[arr.src].parse_ref(&label)
        })
    })
}

pub fn load_presheaf(path: &Path) -> Result<Presheaf> {
    let spec: PresheafSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    build_presheaf(&spec, path.parent())
}
