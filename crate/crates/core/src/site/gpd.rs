use std::sync::Arc;

use serde::Serialize;

use super::cat::FiniteCat;
use super::model::{section_weq, Equivalence};
use super::presheaf::Presheaf;
use crate::kan::{ex, ex_map, is_kan};
use crate::pi::{compare_groups, pi0, pi1_at, CompareVerdict};
use crate::scomplex::SSet;
use crate::sgpd::{diag_nerve, diag_nerve_map, postnikov_gpd, wbar, wbar_map, SGpd, SGpdMap};
use crate::truncate::{cosk, cosk_map, postnikov, Fibrancy};
use crate::{Budget, Error, Result, Witness};

/// A presheaf of simplicial groupoids; `restrictions[a]` runs from the
/// section at the target of `a` to the section at its source.
#[derive(Clone, Debug)]
pub struct GpdPresheaf {
    pub name: String,
    pub site: Arc<FiniteCat>,
    pub sections: Vec<SGpd>,
    pub restrictions: Vec<SGpdMap>,
}

impl GpdPresheaf {
    /// Checks functoriality on objects and on level-0 and level-1 arrows
    /// (word-truncated levels are checked on the enumerated part).
    pub fn validate(&self, budget: &Budget) -> Result<()> {
        let arrows = self.site.arrows();
        for f in 0..arrows.len() {
            for g in 0..arrows.len() {
                let Some(h) = self.site.compose(f, g) else { continue };
                let c = arrows[g].tgt;
                let sec = &self.sections[c];
                for n in 0..2 {
                    for a in sec.all_arrows(n, budget)?.0 {
                        let lhs = self.restrictions[h].apply(n, &a);
                        let rhs = self.restrictions[f].apply(n, &self.restrictions[g].apply(n, &a));
                        if lhs != rhs {
                            return Err(Error::malformed(format!(
                                "{}: restriction is not functorial at `{}` then `{}`",
                                self.name, arrows[f].name, arrows[g].name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sectionwise simplicial-set functors.
#[derive(Clone, Debug)]
pub enum SectionwiseOp {
    Cosk(usize),
    /// `P_n`, each section certified Kan up to `n + 2` first
    Postnikov(usize),
    Ex(usize),
}

pub fn sectionwise(op: &SectionwiseOp, x: &Presheaf, max_dim: usize, budget: &Budget) -> Result<Presheaf> {
    let site = x.site().clone();
    let in_section = |u: usize, e: Error| if e.is_budget() { e } else { Error::in_section(&site.objects()[u], e) };
    match op {
        SectionwiseOp::Cosk(n) | SectionwiseOp::Postnikov(n) => {
            let level = match op {
                SectionwiseOp::Cosk(n) => *n,
                _ => n + 1,
            };
            let stages = (0..site.objects().len())
                .map(|u| {
                    let s = x.at(u);
                    if let SectionwiseOp::Postnikov(n) = op {
                        postnikov(s, *n, max_dim, &Fibrancy::Certify { dim: n + 2 }, budget)
                            .map_err(|e| in_section(u, e))?;
                    }
                    cosk(s, level, max_dim, budget).map_err(|e| in_section(u, e))
                })
                .collect::<Result<Vec<_>>>()?;
            let name = match op {
                SectionwiseOp::Cosk(n) => format!("cosk{n}{}", x.name()),
                _ => format!("P{n}{}", x.name()),
            };
            Presheaf::new(&name, site.clone(), stages.iter().map(|c| c.sset.clone()).collect(), |a| {
                let arr = &site.arrows()[a];
                cosk_map(x.restriction(a), &stages[arr.tgt], &stages[arr.src])
            })
        }
        SectionwiseOp::Ex(k) => {
            let mut current = x.clone();
            for _ in 0..*k {
                let stages = (0..site.objects().len())
                    .map(|u| ex(current.at(u), max_dim, budget).map_err(|e| in_section(u, e)))
                    .collect::<Result<Vec<_>>>()?;
                let cur = current.clone();
                current = Presheaf::new(
                    &format!("Ex{}", cur.name()),
                    site.clone(),
                    stages.iter().map(|s| s.sset().clone()).collect(),
                    |a| {
                        let arr = &site.arrows()[a];
                        ex_map(cur.restriction(a), &stages[arr.tgt], &stages[arr.src])
                    },
                )?;
            }
            Ok(current)
        }
    }
}

/// `G` sectionwise.
pub fn loop_groupoid_presheaf(x: &Presheaf, budget: &Budget) -> Result<GpdPresheaf> {
    let g = GpdPresheaf {
        name: format!("G{}", x.name()),
        site: x.site().clone(),
        sections: x.sections().iter().map(SGpd::loop_groupoid).collect(),
        restrictions: (0..x.site().arrows().len())
            .map(|a| SGpdMap::Loop(x.restriction(a).clone()))
            .collect(),
    };
    g.validate(budget)?;
    Ok(g)
}

/// `P_n` hom-wise, sectionwise.
pub fn postnikov_gpd_presheaf(h: &GpdPresheaf, n: usize) -> GpdPresheaf {
    GpdPresheaf {
        name: format!("P{n}{}", h.name),
        site: h.site.clone(),
        sections: h.sections.iter().map(|s| postnikov_gpd(s, n)).collect(),
        restrictions: h
            .restrictions
            .iter()
            .map(|r| SGpdMap::Coskeletal(Box::new(r.clone()), n + 1))
            .collect(),
    }
}

/// `W̄` sectionwise.
pub fn wbar_presheaf(h: &GpdPresheaf, max_dim: usize, budget: &Budget) -> Result<Presheaf> {
    let stages = h
        .sections
        .iter()
        .map(|s| wbar(s, max_dim, budget))
        .collect::<Result<Vec<_>>>()?;
    let site = h.site.clone();
    Presheaf::new(&format!("W̄{}", h.name), site.clone(), stages.iter().map(|s| s.sset.clone()).collect(), |a| {
        let arr = &site.arrows()[a];
        wbar_map(&h.restrictions[a], &stages[arr.tgt], &stages[arr.src])
    })
}

/// `dB` sectionwise.
pub fn diag_nerve_presheaf(h: &GpdPresheaf, max_dim: usize, budget: &Budget) -> Result<Presheaf> {
    let stages = h
        .sections
        .iter()
        .map(|s| diag_nerve(s, max_dim, budget))
        .collect::<Result<Vec<_>>>()?;
    let site = h.site.clone();
    Presheaf::new(&format!("dB{}", h.name), site.clone(), stages.iter().map(|s| s.sset.clone()).collect(), |a| {
        let arr = &site.arrows()[a];
        diag_nerve_map(&h.restrictions[a], &stages[arr.tgt], &stages[arr.src])
    })
}

/// Invariants of one section on both sides of the roundtrip.
#[derive(Clone, Debug, Serialize)]
pub struct RoundtripSection {
    pub object: String,
    pub left_components: usize,
    pub right_components: usize,
    pub pi1: Vec<(String, String, String)>,
    pub verdict: Equivalence,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub n: usize,
    pub left: String,
    pub right: String,
    pub sections: Vec<RoundtripSection>,
    pub verdict: Equivalence,
}

/// Compares `W̄ P_{n-1} G X` with `P_n X` section by section: `π_0` sizes
/// and `π_1` at one vertex per component. `P_n X` needs Kan sections;
/// `structural` lists objects whose sections are fibrant by construction
/// (such as word-truncated `W̄` of a simplicial groupoid) and skips the
/// horn check there.
pub fn roundtrip_check(x: &Presheaf, n: usize, structural: &[&str], budget: &Budget) -> Result<RoundtripReport> {
    if n == 0 {
        return Err(Error::malformed("roundtrip_check needs n ≥ 1"));
    }
    let site = x.site().clone();
    let g = loop_groupoid_presheaf(x, budget)?;
    let p = postnikov_gpd_presheaf(&g, n - 1);
    let left = wbar_presheaf(&p, n + 1, budget)?;
    let mut right_sections = Vec::new();
    for (u, s) in x.sections().iter().enumerate() {
        let name = &site.objects()[u];
        if !structural.contains(&name.as_str()) {
            let cert = is_kan(s, n + 2, budget)?;
            if let crate::Verdict::Refuted(w) = cert.verdict {
                let err = Error::NotFibrant {
                    reason: format!("{} is not Kan", s.name()),
                    witness: Some(w),
                };
                return Err(Error::in_section(name, err));
            }
        }
        right_sections.push(cosk(s, n + 1, n + 1, budget)?);
    }
    let right = Presheaf::new(
        &format!("P{n}{}", x.name()),
        site.clone(),
        right_sections.iter().map(|c| c.sset.clone()).collect(),
        |a| {
            let arr = &site.arrows()[a];
            cosk_map(x.restriction(a), &right_sections[arr.tgt], &right_sections[arr.src])
        },
    )?;
    let mut sections = Vec::new();
    for u in 0..site.objects().len() {
        sections.push(compare_sections(&site.objects()[u], left.at(u), right.at(u), budget));
    }
    let verdict = sections
        .iter()
        .map(|s| s.verdict.clone())
        .find(|v| !v.is_positive())
        .unwrap_or(Equivalence::Positive { through_degree: n.min(1) });
    Ok(RoundtripReport {
        n,
        left: left.name().to_string(),
        right: right.name().to_string(),
        sections,
        verdict,
    })
}

pub(crate) fn compare_sections(object: &str, l: &Arc<SSet>, r: &Arc<SSet>, budget: &Budget) -> RoundtripSection {
    let (cl, cr) = (pi0(l), pi0(r));
    let mut out = RoundtripSection {
        object: object.to_string(),
        left_components: cl.len(),
        right_components: cr.len(),
        pi1: Vec::new(),
        verdict: Equivalence::Positive { through_degree: 1 },
    };
    if cl.len() != cr.len() {
        out.verdict = Equivalence::Negative {
            witness: Witness::Invariant {
                name: "π0".into(),
                left: cl.len().to_string(),
                right: cr.len().to_string(),
            },
        };
        return out;
    }
    // components are matched by their π1, greedily
    let mut used = vec![false; cr.len()];
    for c in &cl {
        let p = pi1_at(l, c[0]).simplify();
        let mut matched = None;
        let mut unknown = None;
        for (j, d) in cr.iter().enumerate().filter(|(j, _)| !used[*j]) {
            let q = pi1_at(r, d[0]).simplify();
            match compare_groups(&p, &q, budget) {
                CompareVerdict::Isomorphic(why) => {
                    matched = Some((j, q.to_string(), why));
                    break;
                }
                CompareVerdict::Unknown(why) => unknown = Some(why),
                CompareVerdict::NotIsomorphic(_) => {}
            }
        }
        match matched {
            Some((j, q, why)) => {
                used[j] = true;
                out.pi1.push((p.to_string(), q, why));
            }
            None => {
                out.verdict = match unknown {
                    Some(reason) => Equivalence::Unknown { reason },
                    None => Equivalence::Negative {
                        witness: Witness::Invariant {
                            name: format!("π1 at {}", l.cell_name(c[0])),
                            left: p.to_string(),
                            right: "no matching component".into(),
                        },
                    },
                };
                return out;
            }
        }
    }
    out
}

/// The unit `X → W̄GX` sectionwise on 2-skeleta, tested with [`section_weq`]
/// through degree 1.
pub fn unit_check(x: &Presheaf, budget: &Budget) -> Result<Vec<(String, Equivalence)>> {
    x.sections()
        .iter()
        .enumerate()
        .map(|(u, s)| {
            let sk = Arc::new(s.skeleton(2));
            let unit = crate::sgpd::unit_map(&sk, 2, budget)?;
            Ok((x.site().objects()[u].clone(), section_weq(&unit.map, 1, budget)))
        })
        .collect()
}

