//! The small objects and maps used by the test suite, the guide and the
//! shipped example files.
use std::sync::Arc;

use crate::scomplex::{boundary, circle, coproduct, disjoint_union, horn, product, standard, SMap, SSet};
use crate::sgpd::{nerve, nerve_map, FiniteGroupoid, Functor};
use crate::{Budget, Result};

/// A named object with its known fibrancy.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub sset: Arc<SSet>,
    pub kan: bool,
}

fn named(x: SSet, name: &str) -> Arc<SSet> {
    Arc::new(x.with_name(name))
}

pub fn nerve_of(g: &FiniteGroupoid, dim: usize) -> Arc<SSet> {
    nerve(g, dim, &Budget::default()).expect("small nerve").sset
}

/// The objects, nerves truncated at `nerve_dim`.
pub fn objects(nerve_dim: usize) -> Vec<Entry> {
    let pt = Arc::new(standard(0));
    let e = |name, sset, kan| Entry { name, sset, kan };
    vec![
        e("point", pt.clone(), true),
        e("two_points", named(disjoint_union(&pt, &pt).as_ref().clone(), "Δ0⊔Δ0"), true),
        e("interval", Arc::new(standard(1)), false),
        e("triangle", Arc::new(standard(2)), false),
        e("boundary2", Arc::new(boundary(2)), false),
        e("horn21", Arc::new(horn(2, 1).expect("horn")), false),
        e("circle", Arc::new(circle()), false),
        e("nerve_z2", nerve_of(&FiniteGroupoid::cyclic(2), nerve_dim), true),
        e("nerve_z3", nerve_of(&FiniteGroupoid::cyclic(3), nerve_dim), true),
    ]
}

pub fn get(name: &str, nerve_dim: usize) -> Option<Entry> {
    objects(nerve_dim).into_iter().find(|e| e.name == name)
}

/// A surjective functor `a → b`, found by search; `a`, `b` groups.
fn surjection(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Functor {
    let (m, k) = (a.arrows().len(), b.arrows().len());
    let mut on = vec![0; m];
    loop {
        if let Ok(f) = Functor::new(a, b, on.clone()) {
            if f.is_surjective_on_homs(a, b) {
                return f;
            }
        }
        let mut i = 0;
        while i < m && on[i] + 1 == k {
            on[i] = 0;
            i += 1;
        }
        assert!(i < m, "no surjection {} → {}", a.name(), b.name());
        on[i] += 1;
    }
}

fn group_map(a: &FiniteGroupoid, b: &FiniteGroupoid, dim: usize) -> Result<SMap> {
    let budget = Budget::default();
    let (na, nb) = (nerve(a, dim, &budget)?, nerve(b, dim, &budget)?);
    nerve_map(&surjection(a, b), &na, &nb)
}

/// Kan fibrations between Kan complexes, nerves truncated at `dim`.
pub fn fibrations(dim: usize) -> Result<Vec<(String, SMap)>> {
    let budget = Budget::default();
    let pt = Arc::new(standard(0));
    let z2 = FiniteGroupoid::cyclic(2);
    let z3 = FiniteGroupoid::cyclic(3);
    let z4 = FiniteGroupoid::cyclic(4);
    let v4 = FiniteGroupoid::product(&z2, &z2);
    let s3 = FiniteGroupoid::symmetric3();
    let (n2, n3) = (nerve_of(&z2, dim), nerve_of(&z3, dim));
    let to_point = |x: &Arc<SSet>| SMap::to_point(x.clone(), pt.clone());
    let two = disjoint_union(&pt, &pt);
    let (n2_pt, _) = coproduct("N(Z/2)⊔Δ0", &[("a", &n2), ("b", &pt)]);
    let n2n3 = product(&n2, &n3, dim, &budget)?;
    Ok(vec![
        ("id N(Z/2)".into(), SMap::identity(n2.clone())),
        ("N(Z/2) → Δ0".into(), to_point(&n2)?),
        ("N(Z/3) → Δ0".into(), to_point(&n3)?),
        ("N(Z/4) → N(Z/2)".into(), group_map(&z4, &z2, dim)?),
        ("N(Z/4) → Δ0".into(), to_point(&nerve_of(&z4, dim))?),
        ("N(V4) → N(Z/2)".into(), group_map(&v4, &z2, dim)?),
        ("N(S3) → N(Z/2)".into(), group_map(&s3, &z2, dim)?),
        ("N(Z/2)×N(Z/3) → N(Z/2)".into(), n2n3.first.clone()),
        ("N(Z/2)×N(Z/3) → N(Z/3)".into(), n2n3.second.clone()),
        ("Δ0⊔Δ0 → Δ0".into(), to_point(&two)?),
        ("N(Z/2)⊔Δ0 → Δ0".into(), to_point(&n2_pt)?),
        ("id Δ0".into(), SMap::identity(pt.clone())),
    ])
}
