use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

use super::cat::FiniteCat;
use super::presheaf::{free_map, search_maps, Constraints, Presheaf, PresheafMap};
use crate::kan::{is_fibration, is_kan};
use crate::pi::{compare_groups, pi0, pi1_at, pi_n_classes, CompareVerdict};
use crate::scomplex::{boundary, horn, simplex_inclusion, standard, SMap, SSet};
use crate::truncate::{cosk, cosk_map, is_n_fibration};
use crate::{Budget, Error, KanCertificate, Result, Verdict, Witness};

/// A sectionwise certificate: the aggregate verdict and one entry per object.
#[derive(Clone, Debug, Serialize)]
pub struct PresheafCertificate {
    pub subject: String,
    pub verdict: Verdict,
    pub sections: Vec<(String, KanCertificate)>,
}

impl PresheafCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict.is_certified()
    }
}

fn aggregate(subject: String, site: &FiniteCat, sections: Vec<KanCertificate>) -> PresheafCertificate {
    let mut verdict = Verdict::Certified;
    for (u, c) in sections.iter().enumerate() {
        match &c.verdict {
            Verdict::Refuted(w) => {
                verdict = Verdict::Refuted(Witness::Section {
                    object: site.objects()[u].clone(),
                    inner: Box::new(w.clone()),
                });
                break;
            }
            Verdict::Unknown(why) if verdict.is_certified() => {
                verdict = Verdict::Unknown(format!("section {}: {why}", site.objects()[u]));
            }
            _ => {}
        }
    }
    PresheafCertificate {
        subject,
        verdict,
        sections: site.objects().iter().cloned().zip(sections).collect(),
    }
}

fn map_name(f: &PresheafMap) -> String {
    format!("{} → {}", f.source.name(), f.target.name())
}

/// Kan fibration in every section.
pub fn is_projective_fibration(f: &PresheafMap, up_to_dim: usize, budget: &Budget) -> Result<PresheafCertificate> {
    let certs = f
        .components
        .iter()
        .enumerate()
        .map(|(u, c)| is_fibration(c, up_to_dim, budget).map_err(|e| section_error(f.site(), u, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(map_name(f), f.site(), certs))
}

/// `n`-fibration in every section.
pub fn is_n_fibration_presheaf(f: &PresheafMap, n: usize, up_to_dim: usize, budget: &Budget) -> Result<PresheafCertificate> {
    let certs = f
        .components
        .iter()
        .enumerate()
        .map(|(u, c)| is_n_fibration(c, n, up_to_dim, budget).map_err(|e| section_error(f.site(), u, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(map_name(f), f.site(), certs))
}

fn section_error(site: &FiniteCat, u: usize, e: Error) -> Error {
    match e {
        // budget and fibrancy errors keep their kind for callers that absorb them
        e if e.is_budget() => e,
        e => Error::Section {
            object: site.objects()[u].clone(),
            source: Box::new(e),
        },
    }
}

/// Three-valued outcome of an equivalence test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Equivalence {
    /// `π_k` agrees for every `k ≤ through_degree` at every section and basepoint.
    Positive { through_degree: usize },
    Negative { witness: Witness },
    Unknown { reason: String },
}

impl Equivalence {
    pub fn is_positive(&self) -> bool {
        matches!(self, Equivalence::Positive { .. })
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Equivalence::Negative { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeqReport {
    pub subject: String,
    pub verdict: Equivalence,
    pub sections: Vec<(String, Equivalence)>,
}

/// Sectionwise weak-equivalence test up to `max_degree`.
///
/// `π_0` must be a bijection and `π_1` is compared by presentation at one
/// vertex per component. For `2 ≤ k ≤ max_degree` both sections must be
/// Kan up to `k + 1`; the degree counts as settled only when both sides
/// have a single class (trivial groups) or different numbers of classes.
pub fn section_weq(f: &SMap, max_degree: usize, budget: &Budget) -> Equivalence {
    let (x, y) = (f.source(), f.target());
    let cx = pi0(x);
    let cy = pi0(y);
    let images: Vec<usize> = cx
        .iter()
        .map(|c| {
            let v = f.image_of_cell(c[0]).cell();
            cy.iter().position(|d| d.contains(&v)).expect("vertex lies in a component")
        })
        .collect();
    let mut hit = vec![false; cy.len()];
    for (i, &j) in images.iter().enumerate() {
        if hit[j] {
            return Equivalence::Negative {
                witness: Witness::Invariant {
                    name: "π0".into(),
                    left: format!("{} and another component meet", x.cell_name(cx[i][0])),
                    right: y.cell_name(cy[j][0]).to_string(),
                },
            };
        }
        hit[j] = true;
    }
    if let Some(j) = hit.iter().position(|h| !h) {
        return Equivalence::Negative {
            witness: Witness::Invariant {
                name: "π0".into(),
                left: format!("{} components", cx.len()),
                right: format!("component of {} is not hit", y.cell_name(cy[j][0])),
            },
        };
    }
    if max_degree == 0 {
        return Equivalence::Positive { through_degree: 0 };
    }
    for c in &cx {
        let v = c[0];
        let w = f.image_of_cell(v).cell();
        let p = pi1_at(x, v).simplify();
        let q = pi1_at(y, w).simplify();
        match compare_groups(&p, &q, budget) {
            CompareVerdict::Isomorphic(_) => {}
            CompareVerdict::NotIsomorphic(witness) => return Equivalence::Negative { witness },
            CompareVerdict::Unknown(reason) => {
                return Equivalence::Unknown {
                    reason: format!("π1 at {}: {reason}", x.cell_name(v)),
                }
            }
        }
    }
    let mut through = 1;
    for k in 2..=max_degree {
        let kan = |z: &Arc<SSet>| is_kan(z, k + 1, budget).map(|c| c.is_certified()).unwrap_or(false);
        if !kan(x) || !kan(y) {
            break;
        }
        let mut settled = true;
        for c in &cx {
            let v = c[0];
            let w = f.image_of_cell(v).cell();
            let a = pi_n_classes(x, x.cell_name(v), k, budget).map(|p| p.count());
            let b = pi_n_classes(y, y.cell_name(w), k, budget).map(|p| p.count());
            match (a, b) {
                (Ok(a), Ok(b)) if a != b => {
                    return Equivalence::Negative {
                        witness: Witness::Invariant {
                            name: format!("π{k} classes at {}", x.cell_name(v)),
                            left: a.to_string(),
                            right: b.to_string(),
                        },
                    }
                }
                (Ok(1), Ok(1)) => {}
                _ => settled = false,
            }
        }
        if !settled {
            break;
        }
        through = k;
    }
    Equivalence::Positive { through_degree: through }
}

/// Under the trivial topology a local weak equivalence is a sectionwise one.
pub fn is_local_weq(f: &PresheafMap, max_degree: usize, budget: &Budget) -> WeqReport {
    let sections: Vec<(String, Equivalence)> = f
        .components
        .iter()
        .enumerate()
        .map(|(u, c)| (f.site().objects()[u].clone(), section_weq(c, max_degree, budget)))
        .collect();
    let mut verdict = Equivalence::Positive {
        through_degree: max_degree,
    };
    for (u, e) in &sections {
        match e {
            Equivalence::Negative { witness } => {
                verdict = Equivalence::Negative {
                    witness: Witness::Section {
                        object: u.clone(),
                        inner: Box::new(witness.clone()),
                    },
                };
                break;
            }
            Equivalence::Unknown { reason } if !verdict.is_negative() => {
                if let Equivalence::Positive { .. } = verdict {
                    verdict = Equivalence::Unknown {
                        reason: format!("section {u}: {reason}"),
                    };
                }
            }
            Equivalence::Positive { through_degree } => {
                if let Equivalence::Positive { through_degree: t } = &mut verdict {
                    *t = (*t).min(*through_degree);
                }
            }
            _ => {}
        }
    }
    WeqReport {
        subject: map_name(f),
        verdict,
        sections,
    }
}

/// `P_n f` sectionwise (`cosk_{n+1}` of Kan-certified sections) followed by
/// [`is_local_weq`] through degree `n`; higher homotopy of `P_n` vanishes.
pub fn is_n_equivalence(f: &PresheafMap, n: usize, budget: &Budget) -> Result<WeqReport> {
    let max_dim = n + 3;
    let stage = |x: &Arc<SSet>| -> Result<crate::truncate::Coskeleton> {
        let cert = is_kan(x, n + 2, budget)?;
        if let Verdict::Refuted(w) = cert.verdict {
            return Err(Error::NotFibrant {
                reason: format!("{} is not Kan", x.name()),
                witness: Some(w),
            });
        }
        cosk(x, n + 1, max_dim, budget)
    };
    let site = f.site().clone();
    let px: Vec<_> = (0..site.objects().len())
        .map(|u| stage(f.source.at(u)))
        .collect::<Result<_>>()?;
    let py: Vec<_> = (0..site.objects().len())
        .map(|u| stage(f.target.at(u)))
        .collect::<Result<_>>()?;
    let lift = |x: &Presheaf, p: &[crate::truncate::Coskeleton], name: String| {
        Presheaf::new(&name, site.clone(), p.iter().map(|c| c.sset.clone()).collect(), |a| {
            let arr = &site.arrows()[a];
            cosk_map(x.restriction(a), &p[arr.tgt], &p[arr.src])
        })
    };
    let sx = Arc::new(lift(&f.source, &px, format!("P{n}{}", f.source.name()))?);
    let sy = Arc::new(lift(&f.target, &py, format!("P{n}{}", f.target.name()))?);
    let components = (0..site.objects().len())
        .map(|u| cosk_map(&f.components[u], &px[u], &py[u]))
        .collect::<Result<Vec<_>>>()?;
    let pf = PresheafMap::new(sx, sy, components)?;
    Ok(is_local_weq(&pf, n, budget))
}

/// A generating map with a readable name such as `L_U(∂Δ2 → Δ2)`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub map: PresheafMap,
}

#[derive(Clone, Debug)]
pub struct GeneratingSets {
    pub i_proj: Vec<Generator>,
    pub j_proj: Vec<Generator>,
    /// `{L_U∂Δ^s → L_UΔ^s | n+2 ≤ s ≤ dim_bound} ∪ {* → L_U∂Δ^{n+2}}`
    pub j_extension: Vec<Generator>,
}

impl GeneratingSets {
    /// `J_proj ∪ J_extension`.
    pub fn j_n(&self) -> Vec<Generator> {
        self.j_proj.iter().chain(&self.j_extension).cloned().collect()
    }
}

fn free_generator(site: &Arc<FiniteCat>, u: &str, i: &SMap) -> Result<Generator> {
    let (_, _, map) = free_map(site, u, i)?;
    Ok(Generator {
        label: format!("L_{u}({} → {})", i.source().name(), i.target().name()),
        map,
    })
}

/// Finite slices of the generating families, simplices up to `dim_bound`.
/// The basepoint `*` is `L_UΔ0` included at vertex `0`.
pub fn generating_sets(n: usize, site: &Arc<FiniteCat>, dim_bound: usize) -> Result<GeneratingSets> {
    let mut i_proj = Vec::new();
    let mut j_proj = Vec::new();
    let mut j_extension = Vec::new();
    for u in site.objects() {
        for m in 0..=dim_bound {
            let i = simplex_inclusion(&Arc::new(boundary(m)), m)?;
            i_proj.push(free_generator(site, u, &i)?);
        }
        for m in 1..=dim_bound {
            for k in 0..=m {
                let i = simplex_inclusion(&Arc::new(horn(m, k)?), m)?;
                j_proj.push(free_generator(site, u, &i)?);
            }
        }
        for s in (n + 2)..=dim_bound {
            let i = simplex_inclusion(&Arc::new(boundary(s)), s)?;
            j_extension.push(free_generator(site, u, &i)?);
        }
        let sphere = Arc::new(boundary(n + 2));
        let point = Arc::new(standard(0));
        let v0 = sphere.vertex("0")?;
        let i = SMap::from_fn(point, sphere, |_| Ok(crate::scomplex::Simplex::nondegenerate(v0)))?;
        let mut g = free_generator(site, u, &i)?;
        g.label = format!("* → L_{u}∂Δ{}", n + 2);
        j_extension.push(g);
    }
    Ok(GeneratingSets {
        i_proj,
        j_proj,
        j_extension,
    })
}

/// Optional random subsampling of lifting squares.
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    pub seed: u64,
    pub squares_per_generator: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RlpCertificate {
    pub subject: String,
    pub verdict: Verdict,
    /// labels of the generators tested
    pub slice: Vec<String>,
    pub squares: usize,
    pub sampled: bool,
}

/// Right lifting property of `f` against every map in `set`, over every
/// commuting square (or a seeded sample of them).
pub fn rlp_against(
    f: &PresheafMap,
    set: &[Generator],
    sampling: Option<Sampling>,
    budget: &Budget,
) -> Result<RlpCertificate> {
    let mut squares = 0;
    let mut rng = sampling.map(|s| StdRng::seed_from_u64(s.seed));
    let slice = set.iter().map(|g| g.label.clone()).collect();
    let none = Constraints { under: None, over: None };
    for g in set {
        let j = &g.map;
        let tops = search_maps(&j.source, &f.source, &none, usize::MAX, budget)?;
        let bottoms = search_maps(&j.target, &f.target, &none, usize::MAX, budget)?;
        let mut pairs: Vec<(&PresheafMap, &PresheafMap)> = Vec::new();
        for t in &tops {
            let tf = t.then(f);
            for b in &bottoms {
                if j.then(b) == tf {
                    pairs.push((t, b));
                }
            }
        }
        if let (Some(rng), Some(s)) = (rng.as_mut(), sampling) {
            pairs.shuffle(rng);
            pairs.truncate(s.squares_per_generator);
        }
        for (t, b) in pairs {
            squares += 1;
            let c = Constraints {
                under: Some((j, t)),
                over: Some((f, b)),
            };
            let lifts = match search_maps(&j.target, &f.source, &c, 1, budget) {
                Ok(l) => l,
                Err(e) if e.is_budget() => {
                    return Ok(RlpCertificate {
                        subject: map_name(f),
                        verdict: Verdict::Unknown(format!("{e} at {}", g.label)),
                        slice,
                        squares,
                        sampled: sampling.is_some(),
                    })
                }
                Err(e) => return Err(e),
            };
            if lifts.is_empty() {
                let labels = |m: &PresheafMap| -> Vec<String> {
                    m.components
                        .iter()
                        .enumerate()
                        .flat_map(|(u, c)| {
                            let obj = m.site().objects()[u].clone();
                            c.labelled().into_iter().map(move |(a, b)| format!("{obj}:{a}↦{b}"))
                        })
                        .collect()
                };
                return Ok(RlpCertificate {
                    subject: map_name(f),
                    verdict: Verdict::Refuted(Witness::Square {
                        generator: g.label.clone(),
                        top: labels(t),
                        bottom: labels(b),
                    }),
                    slice,
                    squares,
                    sampled: sampling.is_some(),
                });
            }
        }
    }
    Ok(RlpCertificate {
        subject: map_name(f),
        verdict: Verdict::Certified,
        slice,
        squares,
        sampled: sampling.is_some(),
    })
}
