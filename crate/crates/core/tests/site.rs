use std::sync::Arc;

use ntype::scomplex::*;
use ntype::sgpd::{nerve, nerve_map, nerve_sset, FiniteGroupoid, Functor};
use ntype::site::*;
use ntype::{Budget, Verdict, Witness};
use proptest::prelude::*;

fn arc(x: SSet) -> Arc<SSet> {
    Arc::new(x)
}

fn z(n: usize, dim: usize) -> Arc<SSet> {
    nerve_sset(&FiniteGroupoid::cyclic(n), dim, &Budget::default()).unwrap()
}

fn sites() -> Vec<Arc<FiniteCat>> {
    vec![Arc::new(FiniteCat::point()), Arc::new(FiniteCat::arrow())]
}

/// `U ↦ N(ℤ/4)`, `V ↦ N(ℤ/2)`, restricting along the quotient.
fn quotient_presheaf(dim: usize) -> Arc<Presheaf> {
    let b = Budget::default();
    let (z4, z2) = (FiniteGroupoid::cyclic(4), FiniteGroupoid::cyclic(2));
    let (n4, n2) = (nerve(&z4, dim, &b).unwrap(), nerve(&z2, dim, &b).unwrap());
    let q = Functor::by_names(&z4, &z2, &[("e", "e"), ("g", "g"), ("g2", "e"), ("g3", "g")]).unwrap();
    let f = nerve_map(&q, &n4, &n2).unwrap();
    let site = Arc::new(FiniteCat::arrow());
    Arc::new(Presheaf::new("Q", site, vec![n4.sset.clone(), n2.sset.clone()], |_| Ok(f.clone())).unwrap())
}

#[test]
fn finite_categories() {
    let c = FiniteCat::arrow();
    assert_eq!(c.objects(), ["U", "V"]);
    assert_eq!(c.arrows().len(), 3);
    let (u, v) = (0, 1);
    assert_eq!(c.hom(v, u).len(), 1);
    assert_eq!(c.hom(u, v).len(), 0);
    assert_eq!(c.hom(u, u), vec![c.identity(u)]);
    let a = c.hom(v, u)[0];
    assert!(!c.is_identity(a));
    assert_eq!(c.compose(c.identity(v), a), Some(a));
    assert_eq!(c.compose(a, c.identity(u)), Some(a));
    assert_eq!(c.compose(a, a), None);

    let text = r#"{"name": "walk", "objects": ["A", "B"],
        "arrows": [{"name": "f", "src": "A", "tgt": "B"}, {"name": "g", "src": "B", "tgt": "A"}],
        "compose": {"f;g": "1A", "g;f": "1B"}}"#;
    let w = parse_site(text).unwrap();
    assert_eq!(w.hom(0, 0).len(), 1);
    let bad = r#"{"name": "x", "objects": ["A"], "arrows": [{"name": "f", "src": "A", "tgt": "A"}], "compose": {}}"#;
    assert!(parse_site(bad).is_err());
    let covered = r#"{"name": "x", "objects": ["A"], "arrows": [], "compose": {}, "covers": {"A": [["1A"]]}}"#;
    assert!(parse_site(covered).is_err());
}

#[test]
fn presheaves_and_maps() {
    let q = quotient_presheaf(3);
    assert_eq!(q.at(0).cell_counts()[1], 3);
    assert_eq!(q.at(1).cell_counts()[1], 1);
    let id = PresheafMap::identity(&q);
    assert_eq!(id.then(&id), id);

    // not functorial: the restriction must land in X(V)
    let site = Arc::new(FiniteCat::arrow());
    let bad = Presheaf::new("bad", site.clone(), vec![z(2, 3), z(4, 3)], |_| {
        Ok(SMap::identity(z(2, 3)))
    });
    assert!(bad.is_err());

    // constant presheaves and their maps
    let pt = arc(standard(0));
    let c = Arc::new(Presheaf::constant(&site, &z(2, 3)));
    let t = Arc::new(Presheaf::constant(&site, &pt));
    let homs = presheaf_homs(&c, &t, &Budget::default()).unwrap();
    assert_eq!(homs.len(), 1);
    // maps Q → const N(ℤ/2): a compatible pair of homomorphisms ℤ/4 → ℤ/2, ℤ/2 → ℤ/2
    let c2 = Arc::new(Presheaf::constant(&site, &z(2, 3)));
    assert_eq!(presheaf_homs(&q, &c2, &Budget::default()).unwrap().len(), 2);
    // a non-natural family is rejected
    let zero = SMap::to_point(q.at(0).clone(), pt.clone()).unwrap();
    let p2 = Arc::new(Presheaf::constant(&site, &pt));
    assert!(PresheafMap::new(q.clone(), p2, vec![zero.clone(), zero]).is_err());
}

#[test]
fn free_presheaves() {
    let b = Budget::default();
    let site = Arc::new(FiniteCat::arrow());
    let k = arc(standard(1));
    let lu = free_presheaf(&site, "U", &k).unwrap();
    // one copy per arrow into U
    assert_eq!(lu.presheaf.at(0).cell_counts(), vec![2, 1]);
    assert_eq!(lu.presheaf.at(1).cell_counts(), vec![2, 1]);
    let lv = free_presheaf(&site, "V", &k).unwrap();
    assert_eq!(lv.presheaf.at(0).cell_counts(), Vec::<usize>::new());
    assert_eq!(lv.presheaf.at(1).cell_counts(), vec![2, 1]);
    assert_eq!(lu.unit().source().cell_counts(), vec![2, 1]);

    let q = quotient_presheaf(3);
    for u in ["U", "V"] {
        for k in [standard(0), standard(1), boundary(2)] {
            let r = free_adjunction(&site, u, &arc(k), &q, &b).unwrap();
            assert!(r.is_bijection(), "{r:?}");
        }
    }
    // Hom(Δ1, N(ℤ/4)) is the set of 1-simplices
    let r = free_adjunction(&site, "U", &arc(standard(1)), &q, &b).unwrap();
    assert_eq!((r.presheaf_side, r.section_side), (4, 4));
}

#[test]
fn projective_fibrations() {
    let b = Budget::default();
    for site in sites() {
        let pt = arc(standard(0));
        let n2 = Arc::new(Presheaf::constant(&site, &z(2, 4)));
        let t = Arc::new(Presheaf::constant(&site, &pt));
        let f = presheaf_homs(&n2, &t, &b).unwrap().remove(0);
        assert!(is_projective_fibration(&f, 3, &b).unwrap().is_certified());
        assert!(is_n_fibration_presheaf(&f, 1, 3, &b).unwrap().is_certified());
        let r = is_n_fibration_presheaf(&f, 0, 3, &b).unwrap();
        assert!(matches!(r.verdict, Verdict::Refuted(Witness::Section { .. })), "{r:?}");

        let s1 = Arc::new(Presheaf::constant(&site, &arc(circle())));
        let g = presheaf_homs(&s1, &t, &b).unwrap().remove(0);
        let r = is_projective_fibration(&g, 2, &b).unwrap();
        assert!(matches!(r.verdict, Verdict::Refuted(_)), "{r:?}");
    }
}

#[test]
fn local_weak_equivalences() {
    let b = Budget::default();
    for site in sites() {
        let pt = arc(standard(0));
        let n2 = Arc::new(Presheaf::constant(&site, &z(2, 4)));
        let t = Arc::new(Presheaf::constant(&site, &pt));
        assert!(is_local_weq(&PresheafMap::identity(&n2), 2, &b).verdict.is_positive());
        let f = presheaf_homs(&n2, &t, &b).unwrap().remove(0);
        let r = is_local_weq(&f, 2, &b);
        assert!(r.verdict.is_negative(), "{r:?}");
        // an n-equivalence for n = 0 but not for n = 1
        assert!(is_n_equivalence(&f, 0, &b).unwrap().verdict.is_positive());
        assert!(is_n_equivalence(&f, 1, &b).unwrap().verdict.is_negative());

        let two = disjoint_union(&pt, &pt);
        let d = Arc::new(Presheaf::constant(&site, &two));
        let g = presheaf_homs(&d, &t, &b).unwrap().remove(0);
        assert!(is_local_weq(&g, 1, &b).verdict.is_negative());
        assert!(is_n_equivalence(&g, 0, &b).unwrap().verdict.is_negative());
    }
}

#[test]
fn generating_set_sizes() {
    for site in sites() {
        let k = site.objects().len();
        for n in 0..=1 {
            let d = n + 3;
            let g = generating_sets(n, &site, d).unwrap();
            // per object: ∂Δm → Δm for m ≤ d, horns Λm_k for 1 ≤ m ≤ d, spheres n+2..d and `*`
            let horns: usize = (1..=d).map(|m| m + 1).sum();
            assert_eq!(g.i_proj.len(), k * (d + 1));
            assert_eq!(g.j_proj.len(), k * horns);
            assert_eq!(g.j_extension.len(), k * (d - n - 1 + 1));
            assert_eq!(g.j_n().len(), g.j_proj.len() + g.j_extension.len());
        }
    }
}

#[test]
fn lifting_against_generators() {
    let b = Budget::default();
    let site = Arc::new(FiniteCat::point());
    let pt = arc(standard(0));
    let n2 = Arc::new(Presheaf::constant(&site, &z(2, 4)));
    let t = Arc::new(Presheaf::constant(&site, &pt));
    let f = presheaf_homs(&n2, &t, &b).unwrap().remove(0);
    let g0 = generating_sets(0, &site, 3).unwrap();
    // `* → L∂Δ2` lifts against any map to a point; ∂Δ2 → Δ2 does not
    let star: Vec<_> = g0.j_extension.iter().filter(|g| g.label.starts_with('*')).cloned().collect();
    assert!(rlp_against(&f, &star, None, &b).unwrap().verdict.is_certified());
    let r = rlp_against(&f, &g0.j_n(), None, &b).unwrap();
    match &r.verdict {
        Verdict::Refuted(Witness::Square { generator, .. }) => assert_eq!(generator, "L_U(∂Δ2 → Δ2)"),
        v => panic!("{v:?}"),
    }
    let g1 = generating_sets(1, &site, 4).unwrap();
    let r = rlp_against(&f, &g1.j_extension, None, &b).unwrap();
    assert!(r.verdict.is_certified(), "{r:?}");
    // seeded sampling is reproducible
    let s = Sampling { seed: 7, squares_per_generator: 2 };
    let a = rlp_against(&f, &g1.j_proj[..3], Some(s), &b).unwrap();
    let c = rlp_against(&f, &g1.j_proj[..3], Some(s), &b).unwrap();
    assert_eq!((a.squares, a.sampled), (c.squares, true));
}

#[test]
fn simplicial_enrichment() {
    let b = Budget::default();
    let site = Arc::new(FiniteCat::arrow());
    let q = quotient_presheaf(3);
    let k = arc(standard(1));
    let t = tensor(&q, &k, &b).unwrap();
    // (X ⊗ Δ1)(U) = X(U) × Δ1: nondegenerate vertices and edges
    assert_eq!(t.at(0).cell_counts()[0], 2);
    // all pairs of 1-simplices minus the degenerate pairs
    assert_eq!(t.at(0).cell_counts()[1], 4 * 3 - 2);
    let pt = Arc::new(Presheaf::constant(&site, &arc(standard(0))));
    // Map(*, X) is the global sections: here π0 = 1
    let m = mapping_space(&pt, &q, 2, &b).unwrap();
    assert_eq!(m.cell_counts()[0], 1);
    let c = cotensor(&arc(standard(0)), &q, 2, &b).unwrap();
    assert_eq!(c.at(0).cell_counts(), q.at(0).skeleton(2).cell_counts());
    let c2 = cotensor(&arc(boundary(1)), &Presheaf::constant(&site, &arc(standard(1))), 1, &b).unwrap();
    // X^{∂Δ1} = X × X
    assert_eq!(c2.at(1).cell_counts()[0], 4);
}

#[test]
fn sectionwise_functors() {
    let b = Budget::default();
    let q = quotient_presheaf(4);
    let c = sectionwise(&SectionwiseOp::Cosk(2), &q, 4, &b).unwrap();
    assert_eq!(c.at(0).cell_counts(), q.at(0).cell_counts());
    let p = sectionwise(&SectionwiseOp::Postnikov(0), &q, 3, &b).unwrap();
    assert_eq!(p.at(0).cell_counts()[..2], [1, 3]);
    // (Ex S1)_1: pairs of edges with a common last vertex, less the degenerate pair
    let s1 = Presheaf::constant(q.site(), &arc(circle()));
    let e = sectionwise(&SectionwiseOp::Ex(1), &s1, 2, &b).unwrap();
    assert_eq!(e.at(1).cell_counts()[..2], [1, 3]);
}

#[test]
fn groupoid_presheaves_and_roundtrip() {
    let b = Budget::default().with_word_length(1);
    for site in sites() {
        let x = Presheaf::constant(&site, &z(2, 3));
        let g = loop_groupoid_presheaf(&x, &b).unwrap();
        assert_eq!(g.sections.len(), site.objects().len());
        let w = wbar_presheaf(&g, 2, &b).unwrap();
        assert_eq!(w.at(0).cell_counts()[0], 1);
        let d = diag_nerve_presheaf(&g, 2, &b).unwrap();
        assert_eq!(d.at(0).cell_counts()[0], 1);
        let r = roundtrip_check(&x, 1, &[], &b).unwrap();
        assert!(r.verdict.is_positive(), "{r:?}");
        for (_, v) in unit_check(&x, &b).unwrap() {
            assert!(v.is_positive());
        }
    }
    // a non-Kan section is refused on the right-hand side
    let x = Presheaf::constant(&Arc::new(FiniteCat::point()), &arc(circle()));
    assert!(roundtrip_check(&x, 1, &[], &b).is_err());
}

fn small_ssets() -> Vec<SSet> {
    vec![standard(0), standard(1), boundary(2), horn(2, 0).unwrap(), horn(2, 1).unwrap(), circle()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_adjunction_is_a_bijection(k in 0usize..6, u in 0usize..2, constant in any::<bool>()) {
        let b = Budget::default();
        let site = Arc::new(FiniteCat::arrow());
        let x = if constant {
            Arc::new(Presheaf::constant(&site, &z(3, 2)))
        } else {
            quotient_presheaf(2)
        };
        let k = arc(small_ssets().swap_remove(k));
        let r = free_adjunction(&site, &site.objects()[u], &k, &x, &b).unwrap();
        prop_assert!(r.is_bijection(), "{:?}", r);
    }

    #[test]
    fn composites_of_natural_maps_are_natural(k in 0usize..6) {
        let b = Budget::default();
        let site = Arc::new(FiniteCat::arrow());
        let k = arc(small_ssets().swap_remove(k));
        let lk = free_presheaf(&site, "U", &k).unwrap().presheaf;
        let q = quotient_presheaf(2);
        let t = Arc::new(Presheaf::constant(&site, &z(2, 2)));
        let to_q = presheaf_homs(&lk, &q, &b).unwrap();
        let q_to_t = presheaf_homs(&q, &t, &b).unwrap();
        let direct = presheaf_homs(&lk, &t, &b).unwrap();
        for f in &to_q {
            for g in &q_to_t {
                let h = f.then(g);
                prop_assert!(PresheafMap::new(lk.clone(), t.clone(), h.components.clone()).is_ok());
                prop_assert!(direct.contains(&h));
            }
        }
    }
}
