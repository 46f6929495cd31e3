use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::sgpd::FiniteGroupoid;
use crate::{Budget, Error, Result, Witness};

/// A letter is `±(generator index + 1)`; negative letters are inverses.
pub type Word = Vec<i32>;

pub fn reduce(word: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn cyclic_reduce(word: &[i32]) -> Word {
    let mut w = reduce(word);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn invert(word: &[i32]) -> Word {
    word.iter().rev().map(|l| -l).collect()
}

/// A finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub basepoint: String,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        GroupPresentation {
            generators,
            relators: relators.iter().map(|r| reduce(r)).filter(|r| !r.is_empty()).collect(),
            basepoint: String::new(),
        }
    }

    pub fn with_basepoint(mut self, basepoint: &str) -> Self {
        self.basepoint = basepoint.to_string();
        self
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new(), Vec::new())
    }

    pub fn free(rank: usize) -> Self {
        Self::new((0..rank).map(|i| format!("x{i}")).collect(), Vec::new())
    }

    pub fn cyclic(n: usize) -> Self {
        Self::new(vec!["g".into()], vec![vec![1; n]])
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    /// Parses `gens: a b; rels: a a, a b A B;`. A token naming no generator
    /// but lowercasing to one is its inverse; `x^-1` is accepted as well.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels_text: Option<String> = None;
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once(':')
                .ok_or_else(|| Error::malformed(format!("expected `key: value`, got `{part}`")))?;
            match key.trim() {
                "gens" => gens = Some(value.split_whitespace().map(String::from).collect()),
                "rels" => rels_text = Some(value.to_string()),
                other => return Err(Error::malformed(format!("unknown section `{other}`"))),
            }
        }
        let gens = gens.ok_or_else(|| Error::malformed("missing `gens:`"))?;
        let mut seen = HashSet::new();
        if !gens.iter().all(|g| seen.insert(g.clone())) {
            return Err(Error::malformed("generator names repeat"));
        }
        let mut relators = Vec::new();
        for rel in rels_text.unwrap_or_default().split(',') {
            let tokens: Vec<&str> = rel.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            let mut w = Vec::new();
            for t in tokens {
                w.push(parse_letter(&gens, t)?);
            }
            relators.push(w);
        }
        Ok(Self::new(gens, relators))
    }

    fn letter(&self, l: i32) -> String {
        let g = &self.generators[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            g.clone()
        } else {
            let upper = g.to_uppercase();
            if upper != *g && !self.generators.contains(&upper) && upper.to_lowercase() == *g {
                upper
            } else {
                format!("{g}^-1")
            }
        }
    }

    pub fn render_word(&self, w: &[i32]) -> String {
        w.iter().map(|&l| self.letter(l)).collect::<Vec<_>>().join(" ")
    }

    /// Tietze simplification: cyclically reduces relators, removes
    /// duplicates, and eliminates generators that occur exactly once in
    /// some relator.
    pub fn simplify(&self) -> Self {
        let mut gens: Vec<Option<String>> = self.generators.iter().cloned().map(Some).collect();
        let mut rels: Vec<Word> = self.relators.iter().map(|r| cyclic_reduce(r)).collect();
        loop {
            rels.retain(|r| !r.is_empty());
            let mut uniq: Vec<Word> = Vec::new();
            for r in rels.drain(..) {
                let canon = canonical(&r);
                if !uniq.iter().any(|u| canonical(u) == canon) {
                    uniq.push(r);
                }
            }
            rels = uniq;
            // pick the shortest relator with a generator occurring exactly once
            let mut best: Option<(usize, i32)> = None;
            for (ri, r) in rels.iter().enumerate() {
                let mut counts: HashMap<i32, usize> = HashMap::new();
                for l in r {
                    *counts.entry(l.abs()).or_default() += 1;
                }
                let mut once: Vec<i32> = counts.into_iter().filter(|(_, c)| *c == 1).map(|(g, _)| g).collect();
                once.sort();
                if let Some(&g) = once.last() {
                    if best.is_none_or(|(bi, _)| r.len() < rels[bi].len()) {
                        best = Some((ri, g));
                    }
                }
            }
            let Some((ri, g)) = best else { break };
            let r = rels.remove(ri);
            // r = u g^ε v  ⇒  g^ε = u⁻¹ v⁻¹ (cyclically: g^ε = (v u)⁻¹)
            let pos = r.iter().position(|l| l.abs() == g).unwrap();
            let eps = r[pos].signum();
            let mut rest: Word = r[pos + 1..].to_vec();
            rest.extend_from_slice(&r[..pos]);
            let value = if eps > 0 { invert(&rest) } else { rest };
            rels = rels
                .iter()
                .map(|w| {
                    let mut out = Vec::new();
                    for &l in w {
                        if l.abs() == g {
                            if l > 0 {
                                out.extend_from_slice(&value);
                            } else {
                                out.extend(invert(&value));
                            }
                        } else {
                            out.push(l);
                        }
                    }
                    cyclic_reduce(&out)
                })
                .collect();
            gens[(g - 1) as usize] = None;
        }
        // renumber surviving generators
        let mut map = HashMap::new();
        let mut names = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if let Some(n) = g {
                map.insert(i as i32 + 1, names.len() as i32 + 1);
                names.push(n.clone());
            }
        }
        let relators = rels
            .iter()
            .map(|r| r.iter().map(|l| map[&l.abs()] * l.signum()).collect())
            .collect();
        GroupPresentation {
            generators: names,
            relators,
            basepoint: self.basepoint.clone(),
        }
    }

    /// Invariant factors of the abelianization.
    pub fn abelianization(&self) -> Abelianization {
        let n = self.generators.len();
        let mut m: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; n];
                for &l in r {
                    row[(l.unsigned_abs() - 1) as usize] += l.signum() as i64;
                }
                row
            })
            .collect();
        let diag = smith_diagonal(&mut m, n);
        let nonzero: Vec<i64> = diag.into_iter().filter(|d| *d != 0).collect();
        let mut torsion: Vec<i64> = nonzero.iter().copied().filter(|d| *d > 1).collect();
        torsion.sort();
        Abelianization {
            torsion,
            rank: n - nonzero.len(),
        }
    }

    /// Evaluates a word under an assignment of generators to group elements.
    fn eval(&self, g: &FiniteGroupoid, images: &[usize], w: &[i32]) -> usize {
        let mut acc = g.identity(0);
        for &l in w {
            let x = images[(l.unsigned_abs() - 1) as usize];
            let x = if l > 0 { x } else { g.inverse(x) };
            acc = g.compose(acc, x).unwrap();
        }
        acc
    }

    /// Homomorphisms into a finite group, found by backtracking over
    /// generator images.
    pub fn homs_into(&self, g: &FiniteGroupoid, node_limit: u64) -> Result<Vec<Vec<usize>>> {
        let k = self.generators.len();
        let mut by_last: Vec<Vec<&Word>> = vec![Vec::new(); k];
        for r in &self.relators {
            let last = r.iter().map(|l| l.unsigned_abs() as usize - 1).max().unwrap();
            by_last[last].push(r);
        }
        let order = g.arrows().len();
        let mut out = Vec::new();
        let mut images = vec![0usize; k];
        let mut nodes = 0u64;
        fn rec(
            p: &GroupPresentation,
            g: &FiniteGroupoid,
            by_last: &[Vec<&Word>],
            order: usize,
            pos: usize,
            images: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
            nodes: &mut u64,
            limit: u64,
        ) -> Result<()> {
            if pos == images.len() {
                out.push(images.clone());
                return Ok(());
            }
            for x in 0..order {
                *nodes += 1;
                if *nodes > limit {
                    return Err(Error::SearchBudgetExceeded(limit));
                }
                images[pos] = x;
                if by_last[pos].iter().all(|r| g.is_identity(p.eval(g, images, r))) {
                    rec(p, g, by_last, order, pos + 1, images, out, nodes, limit)?;
                }
            }
            Ok(())
        }
        rec(self, g, &by_last, order, 0, &mut images, &mut out, &mut nodes, node_limit)?;
        Ok(out)
    }

    pub fn count_homs_into(&self, g: &FiniteGroupoid, node_limit: u64) -> Result<usize> {
        Ok(self.homs_into(g, node_limit)?.len())
    }

    /// Runs coset enumeration over the trivial subgroup.
    pub fn enumerate_cosets(&self, max_cosets: usize) -> Option<CosetTable> {
        todd_coxeter(self, max_cosets)
    }
}

fn parse_letter(gens: &[String], t: &str) -> Result<i32> {
    if let Some(base) = t.strip_suffix("^-1") {
        if let Some(i) = gens.iter().position(|g| g == base) {
            return Ok(-(i as i32 + 1));
        }
    }
    if let Some(i) = gens.iter().position(|g| g == t) {
        return Ok(i as i32 + 1);
    }
    let lower = t.to_lowercase();
    if lower != t {
        if let Some(i) = gens.iter().position(|g| *g == lower) {
            return Ok(-(i as i32 + 1));
        }
    }
    Err(Error::malformed(format!("unknown generator `{t}`")))
}

/// Least rotation of the word or of its inverse.
fn canonical(w: &[i32]) -> Word {
    let mut best: Option<Word> = None;
    for cand in [w.to_vec(), invert(w)] {
        for k in 0..cand.len().max(1) {
            let mut r = cand[k..].to_vec();
            r.extend_from_slice(&cand[..k]);
            if best.as_ref().is_none_or(|b| &r < b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.render_word(r)).collect();
        write!(f, "gens: {}; rels: {};", self.generators.join(" "), rels.join(", "))
    }
}

/// `ℤ^rank ⊕ ⊕ ℤ/t` with `t` the invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub torsion: Vec<i64>,
    pub rank: usize,
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".into() } else { format!("Z^{}", self.rank) });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Diagonal of the Smith normal form (each entry divides the next).
fn smith_diagonal(m: &mut [Vec<i64>], cols: usize) -> Vec<i64> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && pivot.is_none_or(|(pi, pj): (usize, usize)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t] / m[t][t];
            if q != 0 {
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
            }
            if m[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = m[t][j] / m[t][t];
            if q != 0 {
                for i in t..rows {
                    m[i][j] -= q * m[i][t];
                }
            }
            if m[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold a non-multiple entry into the pivot row
        let p = m[t][t];
        if let Some((i, _)) = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| m[i][j] % p != 0)
        {
            for j in t..cols {
                m[t][j] += m[i][j];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// The regular permutation action of a finite group on its elements, as
/// produced by coset enumeration over the trivial subgroup.
#[derive(Clone, Debug)]
pub struct CosetTable {
    /// `table[c][2i]` = c·g_i, `table[c][2i+1]` = c·g_i⁻¹
    pub table: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// Right action of a word on coset `c`.
    pub fn act(&self, c: usize, w: &[i32]) -> usize {
        w.iter().fold(c, |c, &l| self.table[c][column(l)])
    }

    /// A word for each element, by breadth-first search from the identity.
    pub fn element_words(&self) -> Vec<Word> {
        let mut words: Vec<Option<Word>> = vec![None; self.order()];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        let cols = self.table.first().map_or(0, |r| r.len());
        while let Some(c) = queue.pop_front() {
            for col in 0..cols {
                let d = self.table[c][col];
                if words[d].is_none() {
                    let mut w = words[c].clone().unwrap();
                    w.push(letter_of(col));
                    words[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        words.into_iter().map(|w| w.unwrap()).collect()
    }

    /// The group as a one-object groupoid; elements are named by words.
    pub fn to_group(&self, p: &GroupPresentation) -> Result<FiniteGroupoid> {
        let words = self.element_words();
        let names: Vec<String> = words
            .iter()
            .map(|w| if w.is_empty() { "1".to_string() } else { p.render_word(w).replace(' ', "") })
            .collect();
        let mut names_unique = names.clone();
        let mut seen = HashSet::new();
        for n in names_unique.iter_mut() {
            while !seen.insert(n.clone()) {
                n.push('\'');
            }
        }
        let table = (0..self.order())
            .map(|a| words.iter().map(|w| self.act(a, w)).collect())
            .collect();
        FiniteGroupoid::group("G", names_unique, table)
    }
}

fn column(l: i32) -> usize {
    let g = (l.unsigned_abs() - 1) as usize;
    if l > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

fn letter_of(col: usize) -> i32 {
    let g = (col / 2) as i32 + 1;
    if col % 2 == 0 {
        g
    } else {
        -g
    }
}

struct Enumerator {
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    cols: usize,
    live: usize,
    limit: usize,
}

impl Enumerator {
    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, col: usize) -> bool {
        if self.live >= self.limit {
            return false;
        }
        let n = self.table.len();
        self.table.push(vec![None; self.cols]);
        self.parent.push(n);
        self.live += 1;
        self.table[c][col] = Some(n);
        self.table[n][col ^ 1] = Some(c);
        true
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        self.live -= 1;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                if let Some(d) = self.table[g][x] {
                    self.table[d][x ^ 1] = None;
                    let mu = self.rep(g);
                    let nu = self.rep(d);
                    if let Some(t) = self.table[mu][x] {
                        self.merge(nu, t);
                    } else if let Some(t) = self.table[nu][x ^ 1] {
                        self.merge(mu, t);
                    } else {
                        self.table[mu][x] = Some(nu);
                        self.table[nu][x ^ 1] = Some(mu);
                    }
                }
            }
        }
    }

    /// Returns `false` when the coset limit was hit.
    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> bool {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, w.len() as isize - 1);
        loop {
            while i <= j {
                match self.table[f][w[i as usize]] {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i {
                match self.table[b][w[j as usize] ^ 1] {
                    Some(n) => {
                        b = n;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i {
                self.coincidence(f, b);
                return true;
            } else if i == j {
                let x = w[i as usize];
                self.table[f][x] = Some(b);
                self.table[b][x ^ 1] = Some(f);
                return true;
            } else if !self.define(f, w[i as usize]) {
                return false;
            }
        }
    }
}

fn todd_coxeter(p: &GroupPresentation, max_cosets: usize) -> Option<CosetTable> {
    let cols = 2 * p.generators.len();
    let rels: Vec<Vec<usize>> = p.relators.iter().map(|r| r.iter().map(|&l| column(l)).collect()).collect();
    let mut e = Enumerator {
        table: vec![vec![None; cols]],
        parent: vec![0],
        queue: Vec::new(),
        cols,
        live: 1,
        limit: max_cosets.max(1),
    };
    let mut c = 0;
    while c < e.table.len() {
        for r in &rels {
            if !e.alive(c) {
                break;
            }
            if !e.scan_and_fill(c, r) {
                return None;
            }
        }
        if e.alive(c) {
            for x in 0..cols {
                if e.table[c][x].is_none() && !e.define(c, x) {
                    return None;
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.alive(c)).collect();
    let index: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let table = live
        .iter()
        .map(|&c| {
            (0..cols)
                .map(|x| index[&e.table[c][x].expect("complete table")])
                .collect()
        })
        .collect();
    Some(CosetTable { table })
}

/// Outcome of comparing two presented groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum CompareVerdict {
    Isomorphic(String),
    NotIsomorphic(Witness),
    Unknown(String),
}

impl CompareVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, CompareVerdict::Isomorphic(_))
    }

    pub fn is_not_isomorphic(&self) -> bool {
        matches!(self, CompareVerdict::NotIsomorphic(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, CompareVerdict::Unknown(_))
    }
}

/// Groups of order at most `max_order` used as hom-count probes.
pub fn small_groups(max_order: usize) -> Vec<FiniteGroupoid> {
    let mut out = Vec::new();
    for n in 2..=max_order {
        out.push(FiniteGroupoid::cyclic(n));
    }
    let z2 = FiniteGroupoid::cyclic(2);
    let z4 = FiniteGroupoid::cyclic(4);
    if max_order >= 4 {
        out.push(FiniteGroupoid::product(&z2, &z2));
    }
    if max_order >= 6 {
        out.push(FiniteGroupoid::symmetric3());
    }
    if max_order >= 8 {
        out.push(FiniteGroupoid::product(&z2, &z4));
        out.push(FiniteGroupoid::product(&FiniteGroupoid::product(&z2, &z2), &z2));
        out.push(dihedral(4));
        out.push(quaternion());
    }
    out
}

/// Dihedral group of order `2n`: elements `r^k` and `s r^k`.
pub fn dihedral(n: usize) -> FiniteGroupoid {
    // (f, k) ↦ s^f r^k
    let elems: Vec<(usize, usize)> = (0..2).flat_map(|f| (0..n).map(move |k| (f, k))).collect();
    let names = elems
        .iter()
        .map(|&(f, k)| match (f, k) {
            (0, 0) => "e".to_string(),
            (0, k) => format!("r{k}"),
            (_, k) => format!("sr{k}"),
        })
        .collect();
    // s^a r^b · s^c r^d = s^{a+c} r^{(-1)^c b + d}
    let table = elems
        .iter()
        .map(|&(a, b)| {
            elems
                .iter()
                .map(|&(c, d)| {
                    let k = if c == 0 { (b + d) % n } else { (n - b + d) % n };
                    elems.iter().position(|&e| e == ((a + c) % 2, k)).unwrap()
                })
                .collect()
        })
        .collect();
    FiniteGroupoid::group(&format!("D{n}"), names, table).expect("dihedral groups are groups")
}

/// The quaternion group `{±1, ±i, ±j, ±k}`.
pub fn quaternion() -> FiniteGroupoid {
    // unit index 0..4 = 1,i,j,k with sign
    let mul = |a: usize, b: usize| -> (usize, bool) {
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 1) => (3, true),
            (2, 3) => (1, false),
            (3, 2) => (1, true),
            (3, 1) => (2, false),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let elems: Vec<(usize, bool)> = (0..4).flat_map(|u| [(u, false), (u, true)]).collect();
    let names = elems
        .iter()
        .map(|&(u, neg)| format!("{}{}", if neg { "-" } else { "" }, ["1", "i", "j", "k"][u]))
        .collect();
    let table = elems
        .iter()
        .map(|&(a, na)| {
            elems
                .iter()
                .map(|&(b, nb)| {
                    let (c, nc) = mul(a, b);
                    elems.iter().position(|&e| e == (c, nc ^ na ^ nb)).unwrap()
                })
                .collect()
        })
        .collect();
    FiniteGroupoid::group("Q8", names, table).expect("Q8 is a group")
}

fn invariant(name: &str, left: String, right: String) -> CompareVerdict {
    CompareVerdict::NotIsomorphic(Witness::Invariant {
        name: name.to_string(),
        left,
        right,
    })
}

/// Three-valued isomorphism test for presented groups.
///
/// Separating invariants: abelianization, then homomorphism counts into
/// groups of order `≤ budget.group_order`. Positive answers come from equal
/// free rank or, for finite groups, an explicit isomorphism.
pub fn compare_groups(p: &GroupPresentation, q: &GroupPresentation, budget: &Budget) -> CompareVerdict {
    let (p, q) = (p.simplify(), q.simplify());
    let (ap, aq) = (p.abelianization(), q.abelianization());
    if ap != aq {
        return invariant("abelianization", ap.to_string(), aq.to_string());
    }
    if p.is_free() && q.is_free() && p.rank() == q.rank() {
        return CompareVerdict::Isomorphic(format!("free of rank {}", p.rank()));
    }
    let mut inconclusive = Vec::new();
    for g in small_groups(budget.group_order) {
        match (
            p.count_homs_into(&g, budget.search_nodes),
            q.count_homs_into(&g, budget.search_nodes),
        ) {
            (Ok(a), Ok(b)) if a != b => {
                return invariant(&format!("homomorphisms into {}", g.name()), a.to_string(), b.to_string())
            }
            (Ok(_), Ok(_)) => {}
            _ => inconclusive.push(g.name().to_string()),
        }
    }
    let (tp, tq) = (p.enumerate_cosets(budget.cosets), q.enumerate_cosets(budget.cosets));
    match (tp, tq) {
        (Some(tp), Some(tq)) => {
            if tp.order() != tq.order() {
                return invariant("order", tp.order().to_string(), tq.order().to_string());
            }
            match find_group_isomorphism(&p, &tq, &q, budget) {
                Ok(Some(images)) => CompareVerdict::Isomorphic(format!(
                    "order {}; generators ↦ {}",
                    tp.order(),
                    images.join(", ")
                )),
                Ok(None) => invariant(
                    "isomorphism search",
                    format!("order {}", tp.order()),
                    "no bijective generator assignment".into(),
                ),
                Err(e) => CompareVerdict::Unknown(e.to_string()),
            }
        }
        (Some(t), None) => CompareVerdict::Unknown(format!(
            "left group has order {}, right coset enumeration exceeded {} cosets",
            t.order(),
            budget.cosets
        )),
        (None, Some(t)) => CompareVerdict::Unknown(format!(
            "right group has order {}, left coset enumeration exceeded {} cosets",
            t.order(),
            budget.cosets
        )),
        (None, None) => CompareVerdict::Unknown(if inconclusive.is_empty() {
            "invariants agree; no isomorphism certificate within budget".into()
        } else {
            format!("invariants agree; hom counts unfinished for {}", inconclusive.join(", "))
        }),
    }
}

/// An isomorphism from `⟨p⟩` onto the finite group enumerated by `tq`,
/// given as the images of `p`'s generators.
fn find_group_isomorphism(
    p: &GroupPresentation,
    tq: &CosetTable,
    q: &GroupPresentation,
    budget: &Budget,
) -> Result<Option<Vec<String>>> {
    let g = tq.to_group(q)?;
    let order = g.arrows().len();
    for images in p.homs_into(&g, budget.search_nodes)? {
        // the image is everything iff the images generate
        let mut seen = vec![false; order];
        seen[g.identity(0)] = true;
        let mut stack = vec![g.identity(0)];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &im in &images {
                for y in [g.compose(x, im).unwrap(), g.compose(x, g.inverse(im)).unwrap()] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
        }
        if count == order {
            let names = p
                .generators
                .iter()
                .zip(&images)
                .map(|(a, &b)| format!("{a} ↦ {}", g.arrow(b).name))
                .collect();
            return Ok(Some(names));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = GroupPresentation::parse("gens: a b; rels: a a, a b A B;").unwrap();
        assert_eq!(p.relators, vec![vec![1, 1], vec![1, 2, -1, -2]]);
        assert_eq!(p.to_string(), "gens: a b; rels: a a, a b A B;");
        assert!(GroupPresentation::parse("gens: a; rels: b;").is_err());
    }

    #[test]
    fn smith_form() {
        let p = GroupPresentation::parse("gens: a b; rels: a a b b, a a a a b b b b b b;").unwrap();
        let ab = p.abelianization();
        // rows (2,2), (4,6): determinant 4, gcd of entries 2
        assert_eq!(ab.torsion, vec![2, 2]);
        assert_eq!(ab.rank, 0);
    }

    #[test]
    fn coset_enumeration_orders() {
        let s3 = GroupPresentation::parse("gens: a b; rels: a a, b b b, a b a b;").unwrap();
        assert_eq!(s3.enumerate_cosets(1000).unwrap().order(), 6);
        let q8 = GroupPresentation::parse("gens: i j; rels: i i i i, i i J J, i j i J;").unwrap();
        assert_eq!(q8.enumerate_cosets(1000).unwrap().order(), 8);
        assert!(GroupPresentation::free(1).enumerate_cosets(50).is_none());
    }
}
