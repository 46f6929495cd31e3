use std::sync::Arc;

use ntype::kan::*;
use ntype::scomplex::*;
use ntype::{Budget, Verdict, Witness};
use proptest::prelude::*;

fn arc(x: SSet) -> Arc<SSet> {
    Arc::new(x)
}

/// All lifts of a square, by exhaustive enumeration of cellwise assignments.
fn brute_force_lifts(p: &LiftProblem) -> Vec<SMap> {
    let b = p.i.target().clone();
    let x = p.f.source().clone();
    let cells: Vec<CellId> = b.all_cells().collect();
    let mut choices: Vec<Vec<Simplex>> = vec![vec![]];
    for c in &cells {
        let cands = simplices(&x, c.dim);
        let mut next = Vec::new();
        for partial in &choices {
            for s in &cands {
                let mut v = partial.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        choices = next;
    }
    let top_dim = b.top_dim();
    let mut out = Vec::new();
    for flat in choices {
        let mut assign = vec![Vec::new(); top_dim + 1];
        for (c, s) in cells.iter().zip(flat) {
            assign[c.dim].push(s);
        }
        let Ok(h) = SMap::new(b.clone(), x.clone(), assign) else {
            continue;
        };
        if p.i.then(&h) == p.top && h.then(&p.f) == p.bottom {
            out.push(h);
        }
    }
    out.sort_by_key(|h| cells.iter().map(|c| h.image_of_cell(*c).clone()).collect::<Vec<_>>());
    out
}

fn horn_square(n: usize, k: usize, x: &Arc<SSet>, top_fn: impl Fn(CellId) -> Simplex) -> LiftProblem {
    let h = arc(horn(n, k).unwrap());
    let i = simplex_inclusion(&h, n).unwrap();
    let point = arc(standard(0));
    let top = SMap::from_fn(h.clone(), x.clone(), |c| Ok(top_fn(c))).unwrap();
    let f = SMap::to_point(x.clone(), point.clone()).unwrap();
    let bottom = SMap::to_point(i.target().clone(), point).unwrap();
    LiftProblem::new(i, f, top, bottom).unwrap()
}

#[test]
fn lift_into_simplex_exists() {
    let d2 = arc(standard(2));
    let p = horn_square(2, 1, &d2, |c| Simplex::nondegenerate(d2.lookup(&name_of(c)).unwrap()));
    let h = solve_lift(&p, &Budget::default()).unwrap().expect("lift");
    assert_eq!(p.i.then(&h), p.top);
    assert_eq!(brute_force_lifts(&p).first(), Some(&h));
}

fn name_of(c: CellId) -> String {
    let h = horn(2, 1).unwrap();
    h.cell_name(c).to_string()
}

#[test]
fn lift_into_boundary_fails() {
    let bd = arc(boundary(2));
    let p = horn_square(2, 1, &bd, |c| Simplex::nondegenerate(bd.lookup(&name_of(c)).unwrap()));
    assert!(solve_lift(&p, &Budget::default()).unwrap().is_none());
    assert!(brute_force_lifts(&p).is_empty());
}

#[test]
fn lift_along_identity_is_top() {
    let x = arc(boundary(2));
    let i = SMap::identity(x.clone());
    let f = SMap::identity(x.clone());
    let p = LiftProblem::new(i.clone(), f, i.clone(), i.clone()).unwrap();
    assert_eq!(solve_lift(&p, &Budget::default()).unwrap(), Some(i));
}

#[test]
fn non_commuting_square_rejected() {
    let d1 = arc(standard(1));
    let i = simplex_inclusion(&arc(horn(1, 0).unwrap()), 1).unwrap();
    let top = SMap::from_fn(i.source().clone(), d1.clone(), |_| Ok(Simplex::nondegenerate(d1.vertex("1").unwrap()))).unwrap();
    let bottom = SMap::from_fn(i.target().clone(), d1.clone(), |c| {
        Ok(d1.apply(&Simplex::nondegenerate(d1.lookup("0").unwrap()), &vec![0; c.dim + 1]))
    })
    .unwrap();
    assert!(LiftProblem::new(i, SMap::identity(d1.clone()), top, bottom).is_err());
}

#[test]
fn kan_certificates() {
    let b = Budget::default();
    assert!(is_kan(&arc(standard(0)), 4, &b).unwrap().verdict.is_certified());
    let bd = arc(boundary(2));
    let cert = is_kan(&bd, 2, &b).unwrap();
    let w = cert.verdict.witness().expect("refuted").clone();
    match &w {
        Witness::Horn { dim, faces, .. } => {
            assert_eq!(*dim, 2);
            assert_eq!(faces.iter().filter(|f| *f == "-").count(), 1);
        }
        other => panic!("unexpected witness {other:?}"),
    }
    assert!(horn_is_unfillable(&bd, &w, &b).unwrap());
    assert!(is_kan(&bd, 0, &b).is_err());
}

#[test]
fn fibration_certificates() {
    let b = Budget::default();
    let point = arc(standard(0));
    let bd = arc(boundary(2));
    let f = SMap::to_point(bd.clone(), point.clone()).unwrap();
    let cert = is_fibration(&f, 2, &b).unwrap();
    assert!(matches!(cert.verdict, Verdict::Refuted(Witness::Horn { dim: 2, .. })));
    assert!(is_fibration(&SMap::identity(bd.clone()), 3, &b).unwrap().verdict.is_certified());
    let f = SMap::to_point(point.clone(), point).unwrap();
    assert!(is_fibration(&f, 3, &b).unwrap().verdict.is_certified());
}

#[test]
fn tiny_budget_gives_unknown() {
    let b = Budget::default().with_search_nodes(3);
    let cert = is_kan(&arc(boundary(2)), 2, &b).unwrap();
    assert!(matches!(cert.verdict, Verdict::Unknown(_)));
}

#[test]
fn subdivision_counts() {
    let s1 = sd(&arc(standard(1))).unwrap();
    assert_eq!(s1.sset.cell_counts(), vec![3, 2]);
    let s2 = sd(&arc(standard(2))).unwrap();
    assert_eq!(s2.sset.cell_counts(), vec![7, 12, 6]);
    let s3 = sd(&arc(standard(3))).unwrap();
    assert_eq!(s3.sset.cell_counts(), vec![15, 50, 60, 24]);
    let sc = sd(&arc(circle())).unwrap();
    assert_eq!(sc.sset.cell_counts(), vec![2, 2]);
    assert_eq!(sc.last_vertex.target().name(), circle().name());
}

#[test]
fn ex_of_point_is_point() {
    let b = Budget::default();
    let e = ex(&arc(standard(0)), 3, &b).unwrap();
    assert_eq!(e.sset().cell_counts(), vec![1]);
    let (x, c) = ex_iterate(&arc(standard(0)), 5, 5, &b).unwrap();
    assert_eq!(x.cell_counts(), vec![1]);
    assert!(c.is_iso());
}

#[test]
fn ex_iterate_zero_is_identity() {
    let s1 = arc(circle());
    let (x, c) = ex_iterate(&s1, 0, 2, &Budget::default()).unwrap();
    assert!(x.structurally_equal(&s1));
    assert!(c.is_iso());
}

#[test]
fn ex_of_circle_grows() {
    let s1 = arc(circle());
    let (x, c) = ex_iterate(&s1, 1, 2, &Budget::default()).unwrap();
    // maps sdΔ¹ → S¹: pairs of edges (each e or s0 v) glued at the middle vertex
    let nondeg_edges = x.cell_counts()[1];
    assert!(nondeg_edges > s1.cell_counts()[1]);
    assert!(c.is_mono());
}

#[test]
fn ex_coaugmentation_injective_on_small_corpus() {
    let b = Budget::default();
    for x in [standard(1), standard(2), boundary(2), horn(2, 0).unwrap(), circle()] {
        let x = arc(x);
        let e = ex(&x, 2, &b).unwrap();
        assert!(e.coaugmentation.is_mono(), "{}", x.name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solve_lift_agrees_with_brute_force(n in 1usize..=2, k in 0usize..=2, tgt in 0usize..3, seed in 0u64..64) {
        prop_assume!(k <= n);
        let x = arc(match tgt { 0 => standard(1), 1 => boundary(2), _ => horn(2, 1).unwrap() });
        let h = arc(horn(n, k).unwrap());
        let maps = MapSearch::new(&h, &x, &Budget::default()).all().unwrap();
        prop_assume!(!maps.is_empty());
        let top = maps[(seed as usize) % maps.len()].clone();
        let i = simplex_inclusion(&h, n).unwrap();
        let point = arc(standard(0));
        let f = SMap::to_point(x.clone(), point.clone()).unwrap();
        let bottom = SMap::to_point(i.target().clone(), point).unwrap();
        let p = LiftProblem::new(i, f, top, bottom).unwrap();
        let got = solve_lift(&p, &Budget::default()).unwrap();
        let all = brute_force_lifts(&p);
        prop_assert_eq!(got.as_ref(), all.first());
        if let Some(h) = got {
            prop_assert!(p.i.then(&h) == p.top);
            prop_assert!(h.then(&p.f) == p.bottom);
        }
    }
}

#[test]
fn kan_corpus_entries_are_kan() {
    let b = Budget::default();
    for e in ntype::corpus::objects(4) {
        assert_eq!(is_kan(&e.sset, 3, &b).unwrap().is_certified(), e.kan, "{}", e.name);
    }
}
