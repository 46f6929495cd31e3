//! Text formats for simplicial sets and maps (UTF-8 JSON records).
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::smap::SMap;
use super::sset::{SSet, SSetBuilder};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SSetSpec {
    pub name: String,
    pub cells: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub faces: BTreeMap<String, Vec<String>>,
}

/// A simplicial set either inline or by path (relative to the referring file).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SSetRef {
    Path(String),
    Inline(SSetSpec),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SMapSpec {
    pub source: SSetRef,
    pub target: SSetRef,
    pub assignment: BTreeMap<String, String>,
}

pub fn build_sset(spec: &SSetSpec) -> Result<SSet> {
    let mut dims: Vec<(usize, &Vec<String>)> = spec
        .cells
        .iter()
        .map(|(d, ids)| {
            d.trim()
                .parse::<usize>()
                .map(|d| (d, ids))
                .map_err(|_| Error::malformed(format!("dimension key `{d}` is not a number")))
        })
        .collect::<Result<_>>()?;
    dims.sort_by_key(|(d, _)| *d);
    let mut b = SSetBuilder::new(&spec.name);
    let mut used = 0;
    for (d, ids) in dims {
        for id in ids {
            let faces = match spec.faces.get(id) {
                Some(refs) => {
                    used += 1;
                    refs.iter()
                        .map(|r| b.current().parse_ref(r))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| Error::malformed(format!("faces of `{id}`: {e}")))?
                }
                None if d == 0 => Vec::new(),
                None => return Err(Error::malformed(format!("cell `{id}` has no faces"))),
            };
            b.add_cell(d, id, faces)?;
        }
    }
    if used != spec.faces.len() {
        let stray = spec
            .faces
            .keys()
            .find(|k| b.current().lookup(k).is_none())
            .cloned()
            .unwrap_or_default();
        return Err(Error::malformed(format!("faces given for unknown cell `{stray}`")));
    }
    Ok(b.finish())
}

pub fn to_spec(x: &SSet) -> SSetSpec {
    let mut cells = BTreeMap::new();
    let mut faces = BTreeMap::new();
    for (d, _) in x.cell_counts().iter().enumerate() {
        let ids: Vec<String> = x.cells(d).map(|c| x.cell_name(c).to_string()).collect();
        if ids.is_empty() {
            continue;
        }
        for c in x.cells(d) {
            if d > 0 {
                faces.insert(
                    x.cell_name(c).to_string(),
                    x.cell_faces(c).iter().map(|f| x.label(f)).collect(),
                );
            }
        }
        cells.insert(d.to_string(), ids);
    }
    SSetSpec {
        name: x.name().to_string(),
        cells,
        faces,
    }
}

pub fn parse_sset(text: &str) -> Result<SSet> {
    let spec: SSetSpec = serde_json::from_str(text)?;
    build_sset(&spec)
}

pub fn sset_to_json(x: &SSet) -> String {
    serde_json::to_string_pretty(&to_spec(x)).expect("specs serialize")
}

pub fn load_sset(path: &Path) -> Result<SSet> {
    parse_sset(&std::fs::read_to_string(path)?)
}

fn resolve(base: Option<&Path>, r: &SSetRef) -> Result<Arc<SSet>> {
    match r {
        SSetRef::Inline(spec) => Ok(Arc::new(build_sset(spec)?)),
        SSetRef::Path(p) => {
            let path: PathBuf = match base {
                Some(dir) => dir.join(p),
                None => PathBuf::from(p),
            };
            Ok(Arc::new(load_sset(&path)?))
        }
    }
}

pub fn build_smap(spec: &SMapSpec, base: Option<&Path>) -> Result<SMap> {
    let source = resolve(base, &spec.source)?;
    let target = resolve(base, &spec.target)?;
    build_smap_between(source, target, &spec.assignment)
}

pub fn build_smap_between(
    source: Arc<SSet>,
    target: Arc<SSet>,
    assignment: &BTreeMap<String, String>,
) -> Result<SMap> {
    for id in assignment.keys() {
        if source.lookup(id).is_none() {
            return Err(Error::malformed(format!("assignment for unknown cell `{id}`")));
        }
    }
    let t = target.clone();
    let src = source.clone();
    SMap::from_fn(source, target, |c| {
        let id = src.cell_name(c);
        let r = assignment
            .get(id)
            .ok_or_else(|| Error::malformed(format!("cell `{id}` is unassigned")))?;
        t.parse_ref(r)
    })
}

pub fn parse_smap(text: &str, base: Option<&Path>) -> Result<SMap> {
    let spec: SMapSpec = serde_json::from_str(text)?;
    build_smap(&spec, base)
}

pub fn load_smap(path: &Path) -> Result<SMap> {
    parse_smap(&std::fs::read_to_string(path)?, path.parent())
}

pub fn smap_to_spec(f: &SMap) -> SMapSpec {
    SMapSpec {
        source: SSetRef::Inline(to_spec(f.source())),
        target: SSetRef::Inline(to_spec(f.target())),
        assignment: f.labelled().into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_and_boundary() {
        let pt = parse_sset(r#"{"name":"pt","cells":{"0":["*"]}}"#).unwrap();
        assert_eq!(pt.cell_counts(), vec![1]);
        let b = parse_sset(
            r#"{"name":"b","cells":{"0":["a","b","c"],"1":["ab","ac","bc"]},
                "faces":{"ab":["b","a"],"ac":["c","a"],"bc":["c","b"]}}"#,
        )
        .unwrap();
        assert_eq!(b.cell_counts(), vec![3, 3]);
    }

    #[test]
    fn rejects_unknown_fields_and_arity() {
        assert!(parse_sset(r#"{"name":"x","cells":{},"extra":1}"#).is_err());
        let err = parse_sset(
            r#"{"name":"x","cells":{"0":["a"],"1":["e"]},"faces":{"e":["a"]}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MalformedSpec(_)));
        assert!(parse_sset(r#"{"name":"x","cells":{"1":["e"]},"faces":{"e":["a","a"]}}"#).is_err());
    }

    #[test]
    fn identity_violation_from_text() {
        let err = parse_sset(
            r#"{"name":"x","cells":{"0":["a","b"],"1":["e","f"],"2":["t"]},
                "faces":{"e":["b","a"],"f":["a","a"],"t":["e","f","f"]}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SimplicialIdentityViolation { .. }));
    }

    #[test]
    fn spec_roundtrip() {
        let x = crate::scomplex::standard(2);
        let y = parse_sset(&sset_to_json(&x)).unwrap();
        assert!(x.structurally_equal(&y));
    }
}
