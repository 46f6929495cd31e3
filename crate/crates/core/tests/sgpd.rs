use std::sync::Arc;

use ntype::pi::*;
use ntype::scomplex::*;
use ntype::sgpd::*;
use ntype::truncate::cosk;
use ntype::Budget;
use proptest::prelude::*;

fn arc(x: SSet) -> Arc<SSet> {
    Arc::new(x)
}

fn constant(g: FiniteGroupoid) -> SGpd {
    SGpd::constant(g)
}

/// Composable strings of length `n` by brute force over the arrow list.
fn string_count(g: &FiniteGroupoid, n: usize) -> usize {
    if n == 0 {
        return g.objects().len();
    }
    let arrows = g.arrows();
    let mut ends: Vec<usize> = arrows.iter().map(|a| a.tgt).collect();
    for _ in 1..n {
        ends = ends
            .iter()
            .flat_map(|&y| arrows.iter().filter(move |a| a.src == y).map(|a| a.tgt))
            .collect();
    }
    ends.len()
}

fn simplex_counts(x: &SSet, top: usize) -> Vec<usize> {
    (0..=top).map(|n| x.simplices(n).len()).collect()
}

fn cell_counts(x: &SSet, top: usize) -> Vec<usize> {
    (0..=top).map(|n| x.cell_count(n)).collect()
}

#[test]
fn loop_groupoid_levels() {
    let b = Budget::default();
    let point = arc(standard(0));
    let g = SGpd::loop_groupoid(&point);
    for n in 0..3 {
        let (a, cut) = g.arrows(n, 0, 0, &b).unwrap();
        assert_eq!(a.len(), 1);
        assert!(!cut);
        assert!(g.is_identity(n, &a[0]));
    }
    let s1 = arc(circle());
    let g = SGpd::loop_groupoid(&s1);
    assert_eq!(g.objects().len(), 1);
    let (a, cut) = g.arrows(0, 0, 0, &b).unwrap();
    // reduced words of length ≤ 2 in one letter
    assert_eq!(a.len(), 2 * b.word_length + 1);
    assert!(cut);
    let two = disjoint_union(&point, &point);
    let g = SGpd::loop_groupoid(&two);
    assert_eq!(g.objects().len(), 2);
    let (a, _) = g.all_arrows(0, &b).unwrap();
    assert!(a.iter().all(|f| g.is_identity(0, f)));
}

#[test]
fn loop_groupoid_identities_on_generators() {
    let b = Budget::default().with_word_length(1);
    for x in [arc(circle()), arc(boundary(2)), arc(standard(2)), nerve_sset(&FiniteGroupoid::cyclic(2), 3, &b).unwrap()] {
        let g = SGpd::loop_groupoid(&x);
        for n in 1..4 {
            let (level, _) = g.all_arrows(n, &b).unwrap();
            for f in &level {
                for i in 0..=n {
                    for j in 0..=n {
                        // d_i s_j
                        let s = g.degen(n, j, f);
                        let d = g.face(n + 1, i, &s);
                        let want = if i < j {
                            g.degen(n - 1, j - 1, &g.face(n, i, f))
                        } else if i == j || i == j + 1 {
                            f.clone()
                        } else {
                            g.degen(n - 1, j, &g.face(n, i - 1, f))
                        };
                        assert_eq!(d, want, "{}: d{i}s{j} of {}", x.name(), g.arrow_label(f));
                    }
                }
                if n >= 2 {
                    for j in 0..n {
                        for i in j + 1..=n {
                            // d_j d_i = d_{i-1} d_j
                            let l = g.face(n - 1, j, &g.face(n, i, f));
                            let r = g.face(n - 1, i - 1, &g.face(n, j, f));
                            assert_eq!(l, r, "{}: faces of {}", x.name(), g.arrow_label(f));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn wbar_of_constant_groupoids() {
    let b = Budget::default();
    let z2 = FiniteGroupoid::cyclic(2);
    let w = wbar(&constant(z2.clone()), 3, &b).unwrap();
    assert_eq!(simplex_counts(&w.sset, 3), vec![1, 2, 4, 8]);
    let n = nerve_sset(&z2, 3, &b).unwrap();
    assert!(find_isomorphism(&w.sset, &n, &b).unwrap().is_some());
    let trivial = wbar(&constant(FiniteGroupoid::trivial()), 3, &b).unwrap();
    assert_eq!(simplex_counts(&trivial.sset, 3), vec![1, 1, 1, 1]);
    let discrete = wbar(&constant(FiniteGroupoid::discrete("D", &["a", "b"])), 2, &b).unwrap();
    assert_eq!(cell_counts(&discrete.sset, 2), vec![2, 0, 0]);
    for g in [FiniteGroupoid::cyclic(3), FiniteGroupoid::symmetric3(), FiniteGroupoid::product(&z2, &z2)] {
        let w = wbar(&constant(g.clone()), 3, &b).unwrap();
        let counts: Vec<usize> = (0..=3).map(|n| string_count(&g, n)).collect();
        assert_eq!(simplex_counts(&w.sset, 3), counts, "{}", g.name());
        let d = diag_nerve(&constant(g.clone()), 3, &b).unwrap();
        assert_eq!(simplex_counts(&d.sset, 3), counts, "{}", g.name());
        assert!(find_isomorphism(&w.sset, &d.sset, &b).unwrap().is_some());
    }
}

#[test]
fn diagonal_nerve_fundamental_group() {
    let b = Budget::default();
    let d = diag_nerve(&constant(FiniteGroupoid::cyclic(2)), 2, &b).unwrap();
    let p = pi1(&d.sset, "*").unwrap();
    assert!(compare_groups(&p, &GroupPresentation::cyclic(2), &b).is_isomorphic());
    let t = diag_nerve(&constant(FiniteGroupoid::trivial()), 3, &b).unwrap();
    assert_eq!(cell_counts(&t.sset, 3), vec![1, 0, 0, 0]);
}

#[test]
fn wbar_of_loop_groupoid_of_circle_is_a_circle() {
    let b = Budget::default();
    let g = SGpd::loop_groupoid(&arc(circle()));
    let w = wbar(&g, 2, &b).unwrap();
    assert!(w.truncated);
    let p = pi1(&w.sset, "v").unwrap().simplify();
    assert!(compare_groups(&p, &GroupPresentation::free(1), &b).is_isomorphic(), "{p}");
}

#[test]
fn hom_spaces() {
    let b = Budget::default();
    let h = hom_space(&constant(FiniteGroupoid::cyclic(2)), "*", "*", 3, &b).unwrap();
    assert_eq!(cell_counts(h.sset(), 3), vec![2, 0, 0, 0]);
    let g = SGpd::loop_groupoid(&arc(circle()));
    let h = hom_space(&g, "v", "v", 0, &b).unwrap();
    assert_eq!(h.sset().cell_count(0), 2 * b.word_length + 1);
    assert!(h.truncated());
    let d = constant(FiniteGroupoid::discrete("D", &["x", "y"]));
    let h = hom_space(&d, "x", "y", 2, &b).unwrap();
    assert_eq!(cell_counts(h.sset(), 2), vec![0, 0, 0]);
}

#[test]
fn postnikov_of_groupoids() {
    let b = Budget::default();
    let z2 = constant(FiniteGroupoid::cyclic(2));
    let p = postnikov_gpd(&z2, 0);
    assert_eq!(p.objects(), z2.objects());
    let hp = hom_space(&p, "*", "*", 3, &b).unwrap();
    let hz = hom_space(&z2, "*", "*", 3, &b).unwrap();
    assert!(find_isomorphism(hp.sset(), hz.sset(), &b).unwrap().is_some());
    let wp = wbar(&p, 3, &b).unwrap();
    assert_eq!(simplex_counts(&wp.sset, 3), vec![1, 2, 4, 8]);

    // hom-wise coskeleton agrees with the coskeleton of the hom-space
    let g = SGpd::loop_groupoid(&arc(circle()));
    let b1 = Budget::default().with_word_length(1);
    let p0 = postnikov_gpd(&g, 0);
    let hp = hom_space(&p0, "v", "v", 3, &b1).unwrap();
    let hg = hom_space(&g, "v", "v", 1, &b1).unwrap();
    let c = cosk(hg.sset(), 1, 3, &b1).unwrap();
    assert!(find_isomorphism(hp.sset(), &c.sset, &b1).unwrap().is_some());
    assert_eq!(pi0(hp.sset()).len(), pi0(hg.sset()).len());
}

#[test]
fn unit_map_is_simplicial() {
    let b = Budget::default();
    let z2 = nerve_sset(&FiniteGroupoid::cyclic(2), 2, &b).unwrap();
    for x in [arc(standard(0)), arc(circle()), arc(boundary(2)), arc(standard(2)), z2] {
        let u = unit_map(&x, 2, &b).unwrap();
        assert_eq!(u.map.source().name(), x.name());
        assert_eq!(pi0(&x).len(), pi0(&u.wbar.sset).len(), "{}", x.name());
    }
}

#[test]
fn adjunction_examples() {
    let b = Budget::default();
    let z2 = FiniteGroupoid::cyclic(2);
    let r = adjunction_bijection(&arc(standard(0)), &z2, &b).unwrap();
    assert_eq!((r.functors, r.maps), (1, 1));
    assert!(r.is_bijection());
    let r = adjunction_bijection(&arc(circle()), &z2, &b).unwrap();
    assert_eq!((r.functors, r.maps), (2, 2));
    assert!(r.is_bijection());
    let r = adjunction_bijection(&arc(boundary(2)), &FiniteGroupoid::cyclic(3), &b).unwrap();
    assert_eq!((r.functors, r.maps), (27, 27));
    let r = adjunction_bijection(&arc(standard(2)), &FiniteGroupoid::cyclic(3), &b).unwrap();
    assert_eq!((r.functors, r.maps), (9, 9));
    assert!(r.is_bijection());
}

#[test]
fn shift_isomorphisms() {
    let b = Budget::default();
    let z2 = constant(FiniteGroupoid::cyclic(2));
    assert!(shift_check(&z2, "*", 1, &b).unwrap().verdict.is_isomorphic());
    assert!(shift_check(&z2, "*", 2, &b).unwrap().verdict.is_isomorphic());
    let t = constant(FiniteGroupoid::trivial());
    for s in 1..=3 {
        assert!(shift_check(&t, "*", s, &b).unwrap().verdict.is_isomorphic());
    }
    let g = SGpd::loop_groupoid(&arc(circle()));
    let r = shift_check(&g, "v", 1, &b).unwrap();
    assert!(r.verdict.is_isomorphic(), "{:?}", r);
    assert!(hom_pi0_group(&z2, "*").unwrap().enumerate_cosets(100).unwrap().order() == 2);
}

fn small_groupoid() -> impl Strategy<Value = FiniteGroupoid> {
    prop_oneof![
        Just(FiniteGroupoid::trivial()),
        Just(FiniteGroupoid::cyclic(2)),
        Just(FiniteGroupoid::cyclic(3)),
        Just(FiniteGroupoid::discrete("D", &["a", "b"])),
        Just(FiniteGroupoid::product(&FiniteGroupoid::cyclic(2), &FiniteGroupoid::cyclic(2))),
    ]
}

fn small_sset() -> impl Strategy<Value = Arc<SSet>> {
    prop_oneof![
        Just(arc(standard(0))),
        Just(arc(standard(1))),
        Just(arc(circle())),
        Just(arc(boundary(2))),
        Just(arc(horn(2, 1).unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjunction_is_a_bijection(x in small_sset(), g in small_groupoid()) {
        let r = adjunction_bijection(&x, &g, &Budget::default()).unwrap();
        prop_assert!(r.is_bijection(), "{:?}", r);
    }

    #[test]
    fn wbar_counts_strings(g in small_groupoid()) {
        let w = wbar(&SGpd::constant(g.clone()), 3, &Budget::default()).unwrap();
        let counts: Vec<usize> = (0..=3).map(|n| string_count(&g, n)).collect();
        prop_assert_eq!(simplex_counts(&w.sset, 3), counts);
    }
}

#[test]
fn text_format() {
    let b = Budget::default();
    let z4 = parse_sgpd("name Z/4\nobjects: x\narrow g: x -> x\nrel g g g g\n", None, &b).unwrap();
    let g = z4.as_constant().unwrap();
    assert_eq!(g.arrows().len(), 4);
    let p = hom_pi0_group(&z4, "x").unwrap();
    assert!(compare_groups(&p, &GroupPresentation::cyclic(4), &b).is_isomorphic());

    // two objects joined by one arrow, with ℤ/2 loops
    let text = "objects: x y\narrow h: x -> y\narrow t: x -> x\nrel t t\n";
    let g = parse_sgpd(text, None, &b).unwrap();
    let fg = g.as_constant().unwrap().clone();
    assert_eq!(fg.arrows().len(), 8);
    assert!(fg.arrow_index("h").is_some() && fg.arrow_index("t").is_some());
    let w = wbar(&g, 2, &b).unwrap();
    assert_eq!(pi0(&w.sset).len(), 1);

    let table = "name Z/3\nconstant\ne a b\na b e\nb e a\n";
    let g = parse_sgpd(table, None, &b).unwrap();
    assert_eq!(g.as_constant().unwrap().arrows().len(), 3);
    assert!(parse_sgpd("objects: x\narrow g: x -> z\n", None, &b).is_err());
    assert!(parse_sgpd("objects: x y\narrow g: x -> y\nrel g\n", None, &b).is_err());
    assert!(parse_sgpd("level 1\n", None, &b).is_err());

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s1.json"), sset_to_json(&circle())).unwrap();
    std::fs::write(dir.path().join("g.txt"), "loop s1.json\n").unwrap();
    let g = load_sgpd(&dir.path().join("g.txt"), &b).unwrap();
    assert_eq!(g.objects(), &["v".to_string()]);
}
