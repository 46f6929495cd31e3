use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatArrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category; every site here carries the trivial topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCat {
    name: String,
    objects: Vec<String>,
    arrows: Vec<CatArrow>,
    /// `comp[(f, g)]` is `g ∘ f`
    comp: HashMap<(usize, usize), usize>,
    identities: Vec<usize>,
}

impl FiniteCat {
    /// `arrows` lists the non-identity arrows; `table` gives `g ∘ f` for
    /// every composable pair of them as `(f, g) ↦ h`, with `None` meaning the
    /// identity. Identities named `1U` are added in front.
    pub fn new(
        name: &str,
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        table: &HashMap<(usize, usize), Option<usize>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::malformed(format!("site {name}: {m}")));
        let k = objects.len();
        let mut all: Vec<CatArrow> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| CatArrow {
                name: format!("1{o}"),
                src: i,
                tgt: i,
            })
            .collect();
        for (n, s, t) in &arrows {
            if *s >= k || *t >= k {
                return bad(format!("arrow `{n}` has an unknown end"));
            }
            all.push(CatArrow {
                name: n.clone(),
                src: *s,
                tgt: *t,
            });
        }
        let mut comp = HashMap::new();
        for f in 0..all.len() {
            for g in 0..all.len() {
                if all[f].tgt != all[g].src {
                    continue;
                }
                let h = if f < k {
                    g
                } else if g < k {
                    f
                } else {
                    match table.get(&(f - k, g - k)) {
                        Some(Some(h)) => h + k,
                        Some(None) => all[f].src,
                        None => {
                            return bad(format!("no composite for `{}` then `{}`", all[f].name, all[g].name))
                        }
                    }
                };
                if h >= all.len() || all[h].src != all[f].src || all[h].tgt != all[g].tgt {
                    return bad(format!("`{}` then `{}` is ill-typed", all[f].name, all[g].name));
                }
                comp.insert((f, g), h);
            }
        }
        for (&(f, g), &fg) in &comp {
            for h in (0..all.len()).filter(|&h| all[h].src == all[g].tgt) {
                if comp[&(fg, h)] != comp[&(f, comp[&(g, h)])] {
                    return bad(format!(
                        "composition is not associative at `{}`, `{}`, `{}`",
                        all[f].name, all[g].name, all[h].name
                    ));
                }
            }
        }
        Ok(FiniteCat {
            name: name.to_string(),
            objects,
            arrows: all,
            comp,
            identities: (0..k).collect(),
        })
    }

    /// One object, identity only.
    pub fn point() -> Self {
        FiniteCat::new("pt", vec!["U".into()], Vec::new(), &HashMap::new()).expect("valid")
    }

    /// Two objects and one arrow `a : V → U`.
    pub fn arrow() -> Self {
        FiniteCat::new(
            "V→U",
            vec!["U".into(), "V".into()],
            vec![("a".into(), 1, 0)],
            &HashMap::new(),
        )
        .expect("valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[CatArrow] {
        &self.arrows
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn identity(&self, u: usize) -> usize {
        self.identities[u]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        f < self.objects.len()
    }

    /// `g ∘ f` for `f : A → B`, `g : B → C`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.comp.get(&(f, g)).copied()
    }

    /// Arrows `v → u`.
    pub fn hom(&self, v: usize, u: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].src == v && self.arrows[a].tgt == u)
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    pub name: String,
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    /// `"f;g": "h"` for `g ∘ f = h`; an identity composite is written `"1U"`.
    #[serde(default)]
    pub compose: BTreeMap<String, String>,
    /// Covering families. Only the trivial topology is supported, so any
    /// nonempty entry is rejected.
    #[serde(default)]
    pub covers: Vec<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

pub fn build_site(spec: &SiteSpec) -> Result<FiniteCat> {
    if !spec.covers.is_empty() {
        return Err(Error::malformed(format!(
            "site {}: only the trivial topology is supported",
            spec.name
        )));
    }
    let obj = |n: &str| {
        spec.objects
            .iter()
            .position(|o| o == n)
            .ok_or_else(|| Error::UnknownObject(n.to_string()))
    };
    let arrows = spec
        .arrows
        .iter()
        .map(|a| Ok((a.name.clone(), obj(&a.src)?, obj(&a.tgt)?)))
        .collect::<Result<Vec<_>>>()?;
    let arrow = |n: &str| {
        spec.arrows
            .iter()
            .position(|a| a.name == n)
            .ok_or_else(|| Error::malformed(format!("unknown arrow `{n}`")))
    };
    let mut table = HashMap::new();
    for (pair, h) in &spec.compose {
        let (f, g) = pair
            .split_once(';')
            .ok_or_else(|| Error::malformed(format!("composition key `{pair}` is not `f;g`")))?;
        let h = if spec.objects.iter().any(|o| format!("1{o}") == *h) {
            None
        } else {
            Some(arrow(h)?)
        };
        table.insert((arrow(f.trim())?, arrow(g.trim())?), h);
    }
    FiniteCat::new(&spec.name, spec.objects.clone(), arrows, &table)
}

pub fn parse_site(text: &str) -> Result<FiniteCat> {
    build_site(&serde_json::from_str(text)?)
}

pub fn load_site(path: &Path) -> Result<FiniteCat> {
    parse_site(&std::fs::read_to_string(path)?)
}
