//! The acceptance criteria, one line each (`cargo test --test acceptance`).
use std::sync::Arc;
use std::time::{Duration, Instant};

use ntype::cli::kanified;
use ntype::corpus;
use ntype::pi::{compare_groups, fiber_exactness_check, pi1, GroupPresentation};
use ntype::scomplex::*;
use ntype::sgpd::{adjunction_bijection, diag_nerve, shift_check, unit_map, FiniteGroupoid, SGpd};
use ntype::site::*;
use ntype::truncate::*;
use ntype::{Budget, Error, Result, Verdict};

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed: true,
        detail: detail.into(),
    })
}

fn fail(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed: false,
        detail: detail.into(),
    })
}

fn arc(x: SSet) -> Arc<SSet> {
    Arc::new(x)
}

fn sites() -> Vec<Arc<FiniteCat>> {
    vec![Arc::new(FiniteCat::point()), Arc::new(FiniteCat::arrow())]
}

/// Coskeleton laws on every corpus object for `n ≤ 3`. The dimension is the
/// largest `d ≤ 5` whose coskeleton has at most 20 000 elements per level.
fn coskeleton_laws() -> Result<Outcome> {
    let b = Budget {
        elements: 20_000,
        ..Budget::default()
    };
    let mut checked = 0;
    let mut reduced = Vec::new();
    for e in corpus::objects(5) {
        for n in 0..=3 {
            let mut d = 5;
            let c = loop {
                match cosk(&e.sset, n, d, &b) {
                    Ok(c) => break c,
                    Err(err) if err.is_budget() && d > n + 1 => d -= 1,
                    Err(err) => return Err(err),
                }
            };
            if d < 5 {
                reduced.push(format!("{} n={n} at {d}", e.name));
            }
            let twice = cosk(&c.sset, n, d, &b)?;
            if !twice.sset.structurally_equal(&c.sset) {
                return fail(format!("cosk{n} not idempotent on {} at dim {d}", e.name));
            }
            let r = right_extend(&truncate_at(&e.sset, n), d, &b)?;
            if find_isomorphism(&r, &c.sset, &b)?.is_none() {
                return fail(format!("right_extend ∘ truncate_at ≇ cosk{n} on {}", e.name));
            }
            checked += 1;
        }
    }
    pass(format!("{checked} (object, n) pairs at max_dim 5 except {}", reduced.join(", ")))
}

/// Matching criterion against the homotopy-pullback square.
fn bousfield_friedlander() -> Result<Outcome> {
    let b = Budget::default();
    let fibs = corpus::fibrations(4)?;
    let (mut agree, mut undecided) = (0, 0);
    for (name, f) in &fibs {
        for n in 0..=1 {
            let m = is_n_fibration(f, n, 3, &b)?.verdict;
            let q = q_fibration_square_check(f, n, 3, &b)?.verdict;
            if m.is_unknown() || q.is_unknown() {
                undecided += 1;
            } else if m.is_certified() != q.is_certified() {
                return fail(format!("{name}, n = {n}: matching {m:?} vs square {q:?}"));
            } else {
                agree += 1;
            }
        }
    }
    if fibs.len() < 10 {
        return fail(format!("only {} fibrations", fibs.len()));
    }
    pass(format!("{} fibrations, {agree} definite agreements, {undecided} undecided", fibs.len()))
}

/// `P_n X` is an `n`-type; `N(ℤ/2)` is a 1-type and not a 0-type.
fn n_type_certification() -> Result<Outcome> {
    let b = Budget::default();
    let mut count = 0;
    for e in corpus::objects(6).into_iter().filter(|e| e.kan) {
        for n in 0..=2 {
            let p = postnikov(&e.sset, n, n + 4, &Fibrancy::Certify { dim: n + 3 }, &b)?;
            let cert = is_n_type(&p.stage, n, n + 3, &b)?;
            if !cert.is_certified() {
                return fail(format!("P{n}({}) is not a {n}-type: {:?}", e.name, cert.verdict));
            }
            count += 1;
        }
    }
    let z2 = corpus::get("nerve_z2", 4).expect("corpus entry").sset;
    if !is_n_type(&z2, 1, 3, &b)?.is_certified() {
        return fail("N(ℤ/2) is not certified as a 1-type");
    }
    let cert = is_n_type(&z2, 0, 3, &b)?;
    let Verdict::Refuted(w) = &cert.verdict else {
        return fail(format!("N(ℤ/2) as a 0-type: {:?}", cert.verdict));
    };
    let f = SMap::to_point(z2.clone(), arc(standard(0)))?;
    if !sphere_is_unhit(&f, w, &b)? || is_n_type(&z2, 0, 3, &b)? != cert {
        return fail("sphere witness does not reproduce");
    }
    pass(format!("{count} Postnikov stages certified; N(ℤ/2): 1-type, not a 0-type (sphere witness re-checked)"))
}

/// Presheaf maps between sectionwise Kan objects over both sites.
fn presheaf_corpus(site: &Arc<FiniteCat>) -> Result<Vec<(String, PresheafMap)>> {
    let b = Budget::default();
    let mut out = Vec::new();
    let keep = ["N(Z/2) → Δ0", "id N(Z/2)", "Δ0⊔Δ0 → Δ0", "N(Z/3) → Δ0", "N(Z/2)⊔Δ0 → Δ0"];
    for (name, f) in corpus::fibrations(4)? {
        if keep.contains(&name.as_str()) {
            out.push((format!("c({name})"), PresheafMap::constant(site, &f)));
        }
    }
    if site.objects().len() == 2 {
        let q = Arc::new(load_presheaf(&corpus_path("quotient.presheaf"))?);
        let z2 = Arc::new(Presheaf::constant(site, q.at(1)));
        let to_z2 = presheaf_homs(&q, &z2, &b)?
            .into_iter()
            .find(|m| m.components[1].is_iso())
            .expect("the quotient map");
        out.push(("Q → c(N(Z/2))".into(), to_z2));
    }
    Ok(out)
}

fn corpus_path(name: &str) -> std::path::PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect()
}

/// Lifting against the `J_n` slice agrees with the sectionwise criterion.
fn generating_set_lemma() -> Result<Outcome> {
    let b = Budget::default();
    let mut compared = 0;
    for site in sites() {
        for n in 0..=1 {
            let set = generating_sets(n, &site, n + 3)?.j_n();
            for (name, f) in presheaf_corpus(&site)? {
                let rlp = rlp_against(&f, &set, None, &b)?.verdict;
                let fib = is_n_fibration_presheaf(&f, n, n + 3, &b)?.verdict;
                if rlp.is_unknown() || fib.is_unknown() {
                    continue;
                }
                if rlp.is_certified() != fib.is_certified() {
                    return fail(format!("{name} over {}, n = {n}: rlp {rlp:?} vs n-fibration {fib:?}", site.name()));
                }
                compared += 1;
            }
        }
    }
    pass(format!("{compared} definite comparisons over 2 sites, n ∈ {{0, 1}}"))
}

/// `Hom(GX, H) ≅ Hom(X, W̄H)`.
fn loop_adjunction() -> Result<Outcome> {
    let b = Budget::default();
    let groups = [FiniteGroupoid::trivial(), FiniteGroupoid::cyclic(2), FiniteGroupoid::cyclic(3)];
    let mut sizes = Vec::new();
    for x in [arc(standard(0)), arc(circle()), arc(boundary(2))] {
        for h in &groups {
            let r = adjunction_bijection(&x, h, &b)?;
            if !r.is_bijection() {
                return fail(format!("{} vs {}: {r:?}", x.name(), h.name()));
            }
            sizes.push(r.functors);
        }
    }
    // S¹ against ℤ/2
    if sizes[4] != 2 {
        return fail(format!("|Hom(GS¹, ℤ/2)| = {}", sizes[4]));
    }
    pass(format!("9 bijections, sizes {sizes:?}"))
}

/// `π_1 dBH ≅ π_0 H(x, x)` and the two fundamental groups.
fn shift_isomorphism() -> Result<Outcome> {
    let b = Budget::default();
    let z2 = SGpd::constant(FiniteGroupoid::cyclic(2));
    let r = shift_check(&z2, "*", 1, &b)?;
    if !r.verdict.is_isomorphic() {
        return fail(format!("const ℤ/2: {:?}", r.verdict));
    }
    let d = diag_nerve(&z2, 3, &b)?;
    let p = pi1(&d.sset, d.sset.cell_name(d.sset.cells(0).next().expect("a vertex")))?;
    let c = compare_groups(&p, &GroupPresentation::cyclic(2), &b);
    if !c.is_isomorphic() {
        return fail(format!("π1(dB ℤ/2) vs ℤ/2: {c:?}"));
    }
    let gs1 = SGpd::loop_groupoid(&arc(circle()));
    let d = diag_nerve(&gs1, 3, &b)?;
    let p = pi1(&d.sset, "v")?;
    let c = compare_groups(&p, &GroupPresentation::free(1), &b);
    if !c.is_isomorphic() {
        return fail(format!("π1(dB GS¹) vs ℤ: {c:?}"));
    }
    let r = shift_check(&gs1, "v", 1, &b)?;
    if !r.verdict.is_isomorphic() {
        return fail(format!("GS¹: {:?}", r.verdict));
    }
    pass("dB ℤ/2 and dB GS¹: Isomorphic")
}

/// `W̄ P_0 G X ≃ P_1 X` sectionwise.
fn truncation_roundtrip() -> Result<Outcome> {
    let b = Budget::default();
    let z2 = corpus::get("nerve_z2", 3).expect("corpus entry").sset;
    let mut runs = 0;
    for site in sites() {
        let x = Presheaf::constant(&site, &z2);
        let r = roundtrip_check(&x, 1, &[], &b)?;
        if !r.verdict.is_positive() {
            return fail(format!("N(ℤ/2) over {}: {:?}", site.name(), r.verdict));
        }
        let s1 = kanified(&Presheaf::constant(&site, &arc(circle())), &b)?;
        let names: Vec<&str> = site.objects().iter().map(String::as_str).collect();
        let r = roundtrip_check(&s1, 1, &names, &b.clone().with_word_length(1))?;
        if !r.verdict.is_positive() {
            return fail(format!("Kanified S¹ over {}: {:?}", site.name(), r.verdict));
        }
        runs += 2;
    }
    pass(format!("{runs} roundtrips positive"))
}

/// `X → W̄GX` on `π_0` and `π_1`.
fn unit_equivalence() -> Result<Outcome> {
    let b = Budget::default();
    let pt = arc(standard(0));
    let xs = [
        pt.clone(),
        disjoint_union(&pt, &pt),
        arc(circle()),
        arc(boundary(2)),
        corpus::get("nerve_z2", 2).expect("corpus entry").sset,
    ];
    for x in xs {
        let u = unit_map(&x, 2, &b)?;
        let v = section_weq(&u.map, 1, &b);
        if !v.is_positive() {
            return fail(format!("{}: {v:?}", x.name()));
        }
    }
    pass("5 units positive through π1")
}

/// `Hom(L_U K, X) ≅ Hom(K, X(U))` with both round trips.
fn free_adjunction_check() -> Result<Outcome> {
    let b = Budget::default();
    let site = Arc::new(FiniteCat::arrow());
    let q = Arc::new(load_presheaf(&corpus_path("quotient.presheaf"))?);
    let c = Arc::new(Presheaf::constant(&site, &arc(circle())));
    let l = free_presheaf(&site, "U", &arc(standard(1)))?.presheaf;
    let mut count = 0;
    for x in [q, c, l] {
        for u in site.objects() {
            for k in [standard(0), standard(1), boundary(2)] {
                let r = free_adjunction(&site, u, &arc(k), &x, &b)?;
                if !r.is_bijection() {
                    return fail(format!("{} at {u}: {r:?}", x.name()));
                }
                count += 1;
            }
        }
    }
    pass(format!("{count} bijections with round-trip identity"))
}

/// Exactness at `π_0 F` and `π_0 X` for the fibrations of the square criterion.
fn fiber_exactness() -> Result<Outcome> {
    let b = Budget::default();
    let mut checked = 0;
    for (name, f) in corpus::fibrations(4)? {
        let x = f.source().clone();
        for v in x.cells(0) {
            let r = fiber_exactness_check(&f, x.cell_name(v), &b)?;
            if !(r.exact_at_pi0_fiber && r.exact_at_pi0_total) {
                return fail(format!("{name} at {}: {r:?}", x.cell_name(v)));
            }
            checked += 1;
        }
    }
    pass(format!("{checked} basepoints exact"))
}

type Criterion = (&'static str, Duration, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("coskeleton laws", Duration::from_secs(10), coskeleton_laws),
        ("matching criterion vs homotopy pullback", Duration::from_secs(60), bousfield_friedlander),
        ("n-type certification", Duration::from_secs(30), n_type_certification),
        ("generating trivial cofibrations", Duration::from_secs(120), generating_set_lemma),
        ("G ⊣ W̄ adjunction", Duration::from_secs(30), loop_adjunction),
        ("shift isomorphism", Duration::from_secs(30), shift_isomorphism),
        ("truncation roundtrip", Duration::from_secs(60), truncation_roundtrip),
        ("unit equivalence", Duration::from_secs(60), unit_equivalence),
        ("L_U adjunction", Duration::from_secs(10), free_adjunction_check),
        ("fiber-sequence exactness", Duration::from_secs(30), fiber_exactness),
    ];
    let mut failures = Vec::new();
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e: Error| Outcome {
            passed: false,
            detail: format!("error: {e}"),
        });
        let took = start.elapsed();
        let in_time = took <= *limit;
        let ok = outcome.passed && in_time;
        println!(
            "criterion {:2} {}: {} ({}; {:.2} s of {} s)",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            outcome.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
        if !ok {
            failures.push(i + 1);
        }
    }
    if !failures.is_empty() {
        println!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
