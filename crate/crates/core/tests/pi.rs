use std::sync::Arc;

use ntype::pi::*;
use ntype::scomplex::*;
use ntype::sgpd::{nerve, nerve_map, nerve_sset, FiniteGroupoid, Functor};
use ntype::{Budget, Error, Witness};
use proptest::prelude::*;

fn arc(x: SSet) -> Arc<SSet> {
    Arc::new(x)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Homomorphisms into ℤ/n by brute force over exponent sums.
fn homs_into_cyclic(p: &GroupPresentation, n: usize) -> usize {
    let k = p.rank();
    let mut count = 0;
    let total = n.pow(k as u32);
    for code in 0..total {
        let img: Vec<usize> = (0..k).map(|i| (code / n.pow(i as u32)) % n).collect();
        let ok = p.relators.iter().all(|r| {
            let s: i64 = r
                .iter()
                .map(|&l| l.signum() as i64 * img[(l.unsigned_abs() - 1) as usize] as i64)
                .sum();
            s.rem_euclid(n as i64) == 0
        });
        if ok {
            count += 1;
        }
    }
    count
}

#[test]
fn components() {
    let pt = arc(standard(0));
    assert_eq!(pi0(&disjoint_union(&pt, &pt)).len(), 2);
    assert_eq!(pi0(&boundary(2)).len(), 1);
    assert_eq!(pi0(&circle()).len(), 1);
    assert_eq!(pi0(&SSet::empty("∅")).len(), 0);
}

#[test]
fn fundamental_groupoids() {
    let g = fundamental_groupoid(&standard(2));
    assert!(g.is_connected());
    assert_eq!(g.relations.len(), 1);
    let c = fundamental_groupoid(&circle());
    assert_eq!((c.objects.len(), c.generators.len(), c.relations.len()), (1, 1, 0));
    let b = fundamental_groupoid(&boundary(2));
    assert_eq!((b.generators.len(), b.relations.len()), (3, 0));
}

#[test]
fn fundamental_groups() {
    let budget = Budget::default();
    for n in 0..=3 {
        let p = pi1(&standard(n), "0").unwrap();
        assert!(compare_groups(&p, &GroupPresentation::trivial(), &budget).is_isomorphic());
    }
    let s1 = pi1(&circle(), "v").unwrap();
    assert_eq!((s1.rank(), s1.relators.len()), (1, 0));
    let bd = pi1(&boundary(2), "0").unwrap();
    assert_eq!((bd.rank(), bd.relators.len()), (1, 0));
    let z2 = nerve_sset(&FiniteGroupoid::cyclic(2), 3, &budget).unwrap();
    let p = pi1(&z2, "*").unwrap();
    assert_eq!(p.generators, vec!["g"]);
    assert_eq!(p.relators, vec![vec![1, 1]]);
    assert!(matches!(pi1(&circle(), "w"), Err(Error::VertexNotFound(_))));
}

#[test]
fn pi1_of_nerves_recovers_groups() {
    let budget = Budget::default();
    for (g, order) in [
        (FiniteGroupoid::cyclic(3), 3),
        (FiniteGroupoid::cyclic(4), 4),
        (FiniteGroupoid::symmetric3(), 6),
        (FiniteGroupoid::product(&FiniteGroupoid::cyclic(2), &FiniteGroupoid::cyclic(2)), 4),
    ] {
        let n = nerve_sset(&g, 2, &budget).unwrap();
        let p = pi1(&n, "*").unwrap().simplify();
        assert_eq!(p.enumerate_cosets(1000).unwrap().order(), order, "{}", g.name());
    }
    let p = pi1(&nerve_sset(&FiniteGroupoid::symmetric3(), 2, &budget).unwrap(), "*").unwrap();
    let s3 = GroupPresentation::parse("gens: a b; rels: a a, b b b, a b a b;").unwrap();
    assert!(compare_groups(&p, &s3, &budget).is_isomorphic());
    let z6 = GroupPresentation::cyclic(6);
    assert!(compare_groups(&p, &z6, &budget).is_not_isomorphic());
}

#[test]
fn comparisons() {
    let b = Budget::default();
    let g2 = GroupPresentation::parse("gens: g; rels: g g;").unwrap();
    let h2 = GroupPresentation::parse("gens: h; rels: h h;").unwrap();
    assert!(compare_groups(&g2, &h2, &b).is_isomorphic());
    let free = GroupPresentation::parse("gens: g; rels: ;").unwrap();
    match compare_groups(&free, &g2, &b) {
        CompareVerdict::NotIsomorphic(Witness::Invariant { name, left, right }) => {
            assert_eq!(name, "abelianization");
            assert_eq!((left.as_str(), right.as_str()), ("Z", "Z/2"));
        }
        other => panic!("{other:?}"),
    }
    // ℤ/6 ≅ ℤ/2 × ℤ/3
    let z6 = GroupPresentation::cyclic(6);
    let z2z3 = GroupPresentation::parse("gens: a b; rels: a a, b b b, a b A B;").unwrap();
    assert!(compare_groups(&z6, &z2z3, &b).is_isomorphic());
    // same abelianization, different hom counts: S3 vs ℤ/2 … abelianizations match
    let s3 = GroupPresentation::parse("gens: a b; rels: a a, b b b, a b a b;").unwrap();
    assert!(compare_groups(&s3, &g2, &b).is_not_isomorphic());
    // Q8 vs D4: same order, same abelianization, different hom counts into ℤ/4
    let q8 = GroupPresentation::parse("gens: i j; rels: i i i i, i i J J, i j i J;").unwrap();
    let d4 = GroupPresentation::parse("gens: r s; rels: r r r r, s s, s r s r;").unwrap();
    assert!(compare_groups(&q8, &d4, &b).is_not_isomorphic());
    // infinite, non-free: invariants agree, nothing certifies
    let inf = GroupPresentation::parse("gens: a b; rels: a a, b b b;").unwrap();
    assert!(compare_groups(&inf, &inf, &b).is_unknown());
    let tight = Budget {
        cosets: 2,
        group_order: 1,
        ..Budget::default()
    };
    let s3b = GroupPresentation::parse("gens: x y; rels: x x, y y, x y x y x y;").unwrap();
    assert!(compare_groups(&s3, &s3b, &tight).is_unknown());
    assert!(compare_groups(&s3, &s3b, &b).is_isomorphic());
}

#[test]
fn homotopy_classes() {
    let b = Budget::default();
    let pt = arc(standard(0));
    for n in 0..=3 {
        assert_eq!(pi_n_classes(&pt, "0", n, &b).unwrap().count(), 1);
    }
    let z2 = nerve_sset(&FiniteGroupoid::cyclic(2), 4, &b).unwrap();
    let c1 = pi_n_classes(&z2, "*", 1, &b).unwrap();
    assert_eq!(c1.count(), 2);
    assert_eq!(c1.pi1_order, Some(2));
    assert_eq!(pi_n_classes(&z2, "*", 2, &b).unwrap().count(), 1);
    let s3 = nerve_sset(&FiniteGroupoid::symmetric3(), 3, &b).unwrap();
    let c = pi_n_classes(&s3, "*", 1, &b).unwrap();
    assert_eq!(Some(c.count()), c.pi1_order);
    assert!(matches!(
        pi_n_classes(&arc(boundary(2)), "0", 1, &b),
        Err(Error::NotFibrant { .. })
    ));
}

#[test]
fn exactness() {
    let b = Budget::default();
    let z2 = FiniteGroupoid::cyclic(2);
    let z4 = FiniteGroupoid::cyclic(4);
    let n2 = nerve(&z2, 3, &b).unwrap();
    let n4 = nerve(&z4, 3, &b).unwrap();

    let id = SMap::identity(n2.sset.clone());
    let r = fiber_exactness_check(&id, "*", &b).unwrap();
    assert!(r.is_exact());
    assert_eq!(r.fiber_components, 1);

    let q = Functor::by_names(&z4, &z2, &[("e", "e"), ("g", "g"), ("g2", "e"), ("g3", "g")]).unwrap();
    let f = nerve_map(&q, &n4, &n2).unwrap();
    let r = fiber_exactness_check(&f, "*", &b).unwrap();
    assert!(r.is_exact());
    assert_eq!((r.fiber_components, r.pi1_base_classes), (1, 2));

    let z3 = FiniteGroupoid::cyclic(3);
    let n3 = nerve_sset(&z3, 3, &b).unwrap();
    let prod = product(&n2.sset, &n3, 3, &b).unwrap();
    let r = fiber_exactness_check(&prod.second, "(*,*)", &b).unwrap();
    assert!(r.is_exact());
    assert_eq!(r.fiber_components, 1);

    // fibre with two components: Δ⁰ ⊔ Δ⁰ → Δ⁰
    let pt = arc(standard(0));
    let two = disjoint_union(&pt, &pt);
    let f = SMap::to_point(two.clone(), pt).unwrap();
    let r = fiber_exactness_check(&f, two.cell_name(two.cells(0).next().unwrap()), &b).unwrap();
    assert!(r.is_exact());
    assert_eq!(r.fiber_components, 2);
}

fn relators() -> impl Strategy<Value = Vec<Vec<i32>>> {
    prop::collection::vec(prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 1..6), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn abelianization_predicts_cyclic_hom_counts(rels in relators(), n in 2usize..6) {
        let p = GroupPresentation::new(vec!["a".into(), "b".into()], rels);
        let ab = p.abelianization();
        let mut predicted = (n as i64).pow(ab.rank as u32);
        for t in &ab.torsion {
            predicted *= gcd(*t, n as i64);
        }
        prop_assert_eq!(predicted as usize, homs_into_cyclic(&p, n));
        let g = FiniteGroupoid::cyclic(n);
        prop_assert_eq!(p.count_homs_into(&g, 1 << 20).unwrap(), homs_into_cyclic(&p, n));
    }

    #[test]
    fn simplification_preserves_invariants(rels in relators()) {
        let p = GroupPresentation::new(vec!["a".into(), "b".into()], rels);
        let s = p.simplify();
        prop_assert_eq!(p.abelianization(), s.abelianization());
        for g in small_groups(6) {
            prop_assert_eq!(p.count_homs_into(&g, 1 << 20).unwrap(), s.count_homs_into(&g, 1 << 20).unwrap());
        }
    }

    #[test]
    fn coset_enumeration_matches_known_orders(n in 1usize..9, m in 2usize..6) {
        let c = GroupPresentation::cyclic(n);
        prop_assert_eq!(c.enumerate_cosets(1000).unwrap().order(), n);
        let d = GroupPresentation::new(
            vec!["r".into(), "s".into()],
            vec![vec![1; m], vec![2, 2], vec![2, 1, 2, 1]],
        );
        prop_assert_eq!(d.enumerate_cosets(1000).unwrap().order(), 2 * m);
    }
}
