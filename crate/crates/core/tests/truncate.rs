use std::sync::Arc;

use ntype::kan::is_kan;
use ntype::scomplex::*;
use ntype::sgpd::{nerve_sset, FiniteGroupoid};
use ntype::truncate::*;
use ntype::{Budget, Error, Verdict, Witness};

fn arc(x: SSet) -> Arc<SSet> {
    Arc::new(x)
}

fn z(n: usize, dim: usize) -> Arc<SSet> {
    nerve_sset(&FiniteGroupoid::cyclic(n), dim, &Budget::default()).unwrap()
}

/// Compatible face tuples, by brute force over all `(s-1)`-simplices.
fn brute_matching(x: &SSet, s: usize) -> usize {
    let pool = simplices(x, s - 1);
    let mut tuples: Vec<Vec<Simplex>> = vec![vec![]];
    for _ in 0..=s {
        let mut next = Vec::new();
        for t in &tuples {
            for p in &pool {
                let mut u = t.clone();
                u.push(p.clone());
                next.push(u);
            }
        }
        tuples = next;
    }
    tuples
        .iter()
        .filter(|t| {
            (0..=s).all(|j| (0..j).all(|i| s < 2 || x.face(&t[j], i) == x.face(&t[i], j - 1)))
        })
        .count()
}

#[test]
fn matching_sets() {
    let b = Budget::default();
    let pt = arc(standard(0));
    for s in 1..=4 {
        assert_eq!(matching_set(&pt, s, &b).unwrap().len(), 1);
    }
    let bd = arc(boundary(2));
    for s in 1..=3 {
        assert_eq!(matching_set(&bd, s, &b).unwrap().len(), brute_matching(&bd, s), "s = {s}");
    }
    let m2 = matching_set(&bd, 2, &b).unwrap();
    let sphere: Vec<Simplex> = ["12", "02", "01"]
        .iter()
        .map(|e| Simplex::nondegenerate(bd.lookup(e).unwrap()))
        .collect();
    assert!(m2.iter().any(|m| m.faces == sphere));
    let d2 = arc(standard(2));
    let top = Simplex::nondegenerate(d2.lookup("012").unwrap());
    let mm = matching_map(&d2, 2).unwrap();
    let (_, m) = mm.iter().find(|(s, _)| s == &top).unwrap();
    assert_eq!(m.labels(&d2), vec!["12", "02", "01"]);
    assert!(matching_set(&bd, 0, &b).is_err());
}

#[test]
fn coskeleta() {
    let b = Budget::default();
    let two = disjoint_union(&arc(standard(0)), &arc(standard(0)));
    let c = cosk(&two, 0, 3, &b).unwrap();
    for d in 0..=3 {
        assert_eq!(simplices(&c.sset, d).len(), 1 << (d + 1));
    }
    assert_eq!(c.sset.cell_counts()[1], 2);

    let bd = arc(boundary(2));
    let c1 = cosk(&bd, 1, 2, &b).unwrap();
    assert_eq!(c1.sset.cell_counts(), vec![3, 3, 1]);

    for x in [bd.clone(), arc(standard(2)), arc(circle()), z(2, 3)] {
        for n in 0..=2 {
            let once = cosk(&x, n, 3, &b).unwrap();
            let twice = cosk(&once.sset, n, 3, &b).unwrap();
            assert!(twice.sset.structurally_equal(&once.sset), "{} n={n}", x.name());
            assert!(twice.coaugmentation.is_iso());
        }
    }
}

#[test]
fn nerve_is_two_coskeletal() {
    let b = Budget::default();
    let n = z(2, 4);
    let c = cosk(&n, 2, 4, &b).unwrap();
    assert!(c.coaugmentation.is_iso());
    let p = postnikov(&n, 1, 4, &Fibrancy::Certify { dim: 3 }, &b).unwrap();
    assert!(p.coaugmentation.is_iso());
    assert_eq!(p.stage.cell_counts(), n.cell_counts());
}

#[test]
fn postnikov_of_point_and_low_dims() {
    let b = Budget::default();
    let pt = arc(standard(0));
    for n in 0..=2 {
        let p = postnikov(&pt, n, 4, &Fibrancy::Certify { dim: 2 }, &b).unwrap();
        assert_eq!(p.stage.cell_counts(), vec![1]);
    }
    let n3 = z(3, 3);
    let p = postnikov(&n3, 0, 3, &Fibrancy::Certify { dim: 2 }, &b).unwrap();
    for d in 0..=1 {
        assert_eq!(p.stage.cell_counts()[d], n3.cell_counts()[d]);
    }
    let err = postnikov(&arc(boundary(2)), 0, 3, &Fibrancy::Certify { dim: 2 }, &b).unwrap_err();
    assert!(matches!(err, Error::NotFibrant { witness: Some(_), .. }));
}

#[test]
fn truncation_and_right_extension() {
    let b = Budget::default();
    let d2 = arc(standard(2));
    let t = truncate_at(&d2, 1);
    assert_eq!(t.sset.cell_counts(), vec![3, 3]);
    let r = right_extend(&t, 2, &b).unwrap();
    let c = cosk(&d2, 1, 2, &b).unwrap();
    assert!(find_isomorphism(&r, &c.sset, &b).unwrap().is_some());
    let r3 = right_extend(&t, 3, &b).unwrap();
    let c3 = cosk(&d2, 1, 3, &b).unwrap();
    assert!(find_isomorphism(&r3, &c3.sset, &b).unwrap().is_some());
    let (l, rr) = adjunction_counts(&arc(standard(1)), &t, &b).unwrap();
    assert_eq!(l, rr);
    assert_eq!(l, 6);
    let (l, rr) = adjunction_counts(&arc(boundary(2)), &truncate_at(&arc(circle()), 1), &b).unwrap();
    assert_eq!(l, rr);
}

#[test]
fn n_types() {
    let b = Budget::default();
    let n2 = z(2, 4);
    assert!(is_n_type(&n2, 1, 3, &b).unwrap().verdict.is_certified());
    let cert = is_n_type(&n2, 0, 3, &b).unwrap();
    match cert.verdict {
        Verdict::Refuted(Witness::Sphere { dim: 2, faces, .. }) => {
            // a triangle of edges violating d_1 = d_0 ∘ d_2
            assert_eq!(faces.len(), 3);
            let g = |s: &str| if s == "g" { 1 } else { 0 };
            assert_ne!(g(&faces[1]), (g(&faces[0]) + g(&faces[2])) % 2);
        }
        other => panic!("{other:?}"),
    }
    assert!(is_n_type(&arc(standard(0)), 0, 2, &b).unwrap().verdict.is_certified());
    for n in 0..=1 {
        let id = SMap::identity(n2.clone());
        assert!(is_n_fibration(&id, n, 3, &b).unwrap().verdict.is_certified());
    }
    assert!(is_n_type(&n2, 1, 2, &b).is_err());
}

#[test]
fn postnikov_stage_is_n_type() {
    let b = Budget::default();
    let n2 = z(2, 4);
    let p = postnikov(&n2, 0, 4, &Fibrancy::Certify { dim: 3 }, &b).unwrap();
    assert!(is_kan(&p.stage, 3, &b).unwrap().verdict.is_certified());
    assert!(is_n_type(&p.stage, 0, 3, &b).unwrap().verdict.is_certified());
}


#[test]
fn homotopy_pullback_square() {
    let b = Budget::default();
    let n2 = z(2, 4);
    let pt = arc(standard(0));
    let id = SMap::identity(n2.clone());
    assert!(q_fibration_square_check(&id, 1, 3, &b).unwrap().verdict.is_certified());
    let f = SMap::to_point(n2.clone(), pt).unwrap();
    let r1 = q_fibration_square_check(&f, 1, 3, &b).unwrap();
    assert!(r1.verdict.is_certified(), "{r1:?}");
    let r0 = q_fibration_square_check(&f, 0, 3, &b).unwrap();
    assert!(r0.verdict.is_refuted(), "{r0:?}");
    for n in 0..=1 {
        assert_eq!(
            is_n_fibration(&f, n, 3, &b).unwrap().verdict.is_certified(),
            q_fibration_square_check(&f, n, 3, &b).unwrap().verdict.is_certified()
        );
    }
    assert!(q_fibration_square_check(&SMap::identity(arc(boundary(2))), 0, 2, &b).is_err());
}
