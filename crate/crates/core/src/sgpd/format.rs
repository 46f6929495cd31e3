//! Line-based text format for simplicial groupoids.
//!
//! ```text
//! # the constant groupoid of a presented groupoid
//! name Z/4
//! objects: x
//! arrow g: x -> x
//! rel g g g g
//! ```
//!
//! `constant` followed by the rows of a multiplication table (the first row
//! is the row of the identity and names the elements) gives a constant
//! group; `loop <file>` gives the loop groupoid of a simplicial set file.
use std::collections::{HashMap, VecDeque};
use std::path::Path;
use std::sync::Arc;

use super::groupoid::{FiniteGroupoid, GArrow};
use super::simplicial::SGpd;
use crate::pi::{reduce, GroupPresentation, Word};
use crate::scomplex::load_sset;
use crate::{Budget, Error, Result};

pub fn parse_sgpd(text: &str, base: Option<&Path>, budget: &Budget) -> Result<SGpd> {
    let mut name: Option<String> = None;
    let mut objects: Vec<String> = Vec::new();
    let mut arrows: Vec<GArrow> = Vec::new();
    let mut rels: Vec<Vec<String>> = Vec::new();
    let mut table: Option<Vec<Vec<String>>> = None;
    let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
    while let Some(line) = lines.next() {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" => name = Some(rest.to_string()),
            "objects:" => objects.extend(rest.split_whitespace().map(str::to_string)),
            "arrow" => arrows.push(parse_arrow(rest, &objects)?),
            "rel" => rels.push(rest.split_whitespace().map(str::to_string).collect()),
            "level" => {
                if rest != "0" {
                    return Err(Error::malformed(format!(
                        "generators above level 0 are not supported (got `level {rest}`)"
                    )));
                }
            }
            "constant" => {
                table = Some(lines.by_ref().map(|l| l.split_whitespace().map(str::to_string).collect()).collect());
            }
            "loop" => {
                let path = match base {
                    Some(dir) => dir.join(rest),
                    None => Path::new(rest).to_path_buf(),
                };
                let x = Arc::new(load_sset(&path)?);
                let g = SGpd::loop_groupoid(&x);
                return Ok(match name {
                    Some(n) => g.with_name(&n),
                    None => g,
                });
            }
            other => return Err(Error::malformed(format!("unknown directive `{other}`"))),
        }
    }
    let g = match table {
        Some(rows) => from_table(name.as_deref().unwrap_or("G"), &rows)?,
        None => {
            if objects.is_empty() {
                return Err(Error::malformed("no objects"));
            }
            let rels = rels
                .iter()
                .map(|r| parse_word(r, &arrows))
                .collect::<Result<Vec<_>>>()?;
            from_presentation(name.as_deref().unwrap_or("G"), objects, arrows, rels, budget)?
        }
    };
    Ok(SGpd::constant(g))
}

pub fn load_sgpd(path: &Path, budget: &Budget) -> Result<SGpd> {
    parse_sgpd(&std::fs::read_to_string(path)?, path.parent(), budget)
}

fn parse_arrow(rest: &str, objects: &[String]) -> Result<GArrow> {
    let bad = || Error::malformed(format!("expected `arrow g: x -> y`, got `{rest}`"));
    let (name, ends) = rest.split_once(':').ok_or_else(bad)?;
    let (x, y) = ends.split_once("->").ok_or_else(bad)?;
    let find = |o: &str| {
        objects
            .iter()
            .position(|p| p == o.trim())
            .ok_or_else(|| Error::UnknownObject(o.trim().to_string()))
    };
    Ok(GArrow {
        name: name.trim().to_string(),
        src: find(x)?,
        tgt: find(y)?,
    })
}

fn parse_word(tokens: &[String], arrows: &[GArrow]) -> Result<Word> {
    let mut w = Vec::new();
    let mut at: Option<(usize, usize)> = None;
    for t in tokens {
        let (n, inv) = match t.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (t.as_str(), false),
        };
        let i = arrows
            .iter()
            .position(|a| a.name == n)
            .ok_or_else(|| Error::malformed(format!("unknown arrow `{n}` in relation")))?;
        let (s, e) = if inv { (arrows[i].tgt, arrows[i].src) } else { (arrows[i].src, arrows[i].tgt) };
        match at {
            Some((_, cur)) if cur != s => {
                return Err(Error::malformed(format!("relation `{}` is not a path", tokens.join(" "))))
            }
            Some((start, _)) => at = Some((start, e)),
            None => at = Some((s, e)),
        }
        let l = i as i32 + 1;
        w.push(if inv { -l } else { l });
    }
    if let Some((s, e)) = at {
        if s != e {
            return Err(Error::malformed(format!("relation `{}` is not closed", tokens.join(" "))));
        }
    }
    Ok(w)
}

fn from_table(name: &str, rows: &[Vec<String>]) -> Result<FiniteGroupoid> {
    let elements = rows.first().cloned().unwrap_or_default();
    let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    let table = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| index.get(e.as_str()).copied().ok_or_else(|| Error::malformed(format!("unknown element `{e}`"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    // the first row is e·b = b, so row a starts with a·e = a
    let order: Vec<usize> = table.iter().map(|r| r.first().copied().unwrap_or(0)).collect();
    let mut by_first = vec![0; elements.len()];
    for (r, &a) in order.iter().enumerate() {
        by_first[a] = r;
    }
    let sorted = (0..elements.len()).map(|a| table[by_first[a]].clone()).collect();
    FiniteGroupoid::group(name, elements, sorted)
}

/// Makes a presented groupoid finite: each component's vertex group is
/// enumerated by cosets, and an arrow `x → y` is `p_x⁻¹ γ p_y` for a
/// spanning-tree path `p` from the component's root.
pub fn from_presentation(
    name: &str,
    objects: Vec<String>,
    gens: Vec<GArrow>,
    rels: Vec<Word>,
    budget: &Budget,
) -> Result<FiniteGroupoid> {
    let n = objects.len();
    let mut adjacent: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, a) in gens.iter().enumerate() {
        adjacent[a.src].push((i, a.tgt));
        adjacent[a.tgt].push((i, a.src));
    }
    let mut root = vec![usize::MAX; n];
    let mut path: Vec<Word> = vec![Vec::new(); n];
    let mut tree = vec![false; gens.len()];
    for r in 0..n {
        if root[r] != usize::MAX {
            continue;
        }
        root[r] = r;
        let mut queue = VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            for &(i, w) in &adjacent[u] {
                if root[w] == usize::MAX {
                    root[w] = r;
                    tree[i] = true;
                    let mut p = path[u].clone();
                    p.push(if gens[i].src == u { i as i32 + 1 } else { -(i as i32 + 1) });
                    path[w] = p;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut relators = rels.clone();
    relators.extend((0..gens.len()).filter(|&i| tree[i]).map(|i| vec![i as i32 + 1]));
    let mut arrows: Vec<GArrow> = Vec::new();
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    // per root: coset table and element words over all generators
    let mut tables = HashMap::new();
    for r in (0..n).filter(|&r| root[r] == r) {
        let in_comp = |i: &usize| root[gens[*i].src] == r;
        let local: Vec<Word> = relators
            .iter()
            .filter(|w| w.iter().all(|l| in_comp(&((l.unsigned_abs() - 1) as usize))))
            .cloned()
            .collect();
        let p = GroupPresentation::new(gens.iter().map(|a| a.name.clone()).collect(), local);
        let t = p.enumerate_cosets(budget.cosets).ok_or_else(|| {
            Error::EnumerationImpossible(format!(
                "{name}: the vertex group at `{}` did not enumerate within {} cosets",
                objects[r], budget.cosets
            ))
        })?;
        let words = t.element_words();
        tables.insert(r, (t, words));
    }
    for x in 0..n {
        for y in (0..n).filter(|&y| root[y] == root[x]) {
            let (t, words) = &tables[&root[x]];
            for (g, w) in words.iter().enumerate() {
                let label = gens
                    .iter()
                    .enumerate()
                    .find(|(i, a)| a.src == x && a.tgt == y && t.act(0, &[*i as i32 + 1]) == g)
                    .map(|(_, a)| a.name.clone())
                    .unwrap_or_else(|| {
                        let mut full = crate::pi::invert(&path[x]);
                        full.extend(expand(w, &path, &gens));
                        full.extend(path[y].iter().copied());
                        render(&reduce(&full), &gens, &objects[x])
                    });
                index.insert((x, y, g), arrows.len());
                arrows.push(GArrow { name: label, src: x, tgt: y });
            }
        }
    }
    let keys: Vec<(usize, usize, usize)> = {
        let mut k = vec![(0, 0, 0); arrows.len()];
        for (key, &i) in &index {
            k[i] = *key;
        }
        k
    };
    let mut names_seen = HashMap::new();
    for a in arrows.iter_mut() {
        let c = names_seen.entry(a.name.clone()).or_insert(0);
        if *c > 0 {
            a.name = format!("{}'{}", a.name, c);
        }
        *c += 1;
    }
    FiniteGroupoid::new(name, objects, arrows, |f, g| {
        let (x, _, a) = keys[f];
        let (_, z, b) = keys[g];
        let (t, words) = &tables[&root[x]];
        index[&(x, z, t.act(a, &words[b]))]
    })
}

/// A vertex-group word as a path: each letter `a: s → t` becomes `p_s a p_t⁻¹`.
fn expand(w: &[i32], path: &[Word], gens: &[GArrow]) -> Word {
    let mut out = Vec::new();
    for &l in w {
        let a = &gens[(l.unsigned_abs() - 1) as usize];
        let mut piece = path[a.src].clone();
        piece.push(l.abs());
        piece.extend(crate::pi::invert(&path[a.tgt]));
        if l < 0 {
            piece = crate::pi::invert(&piece);
        }
        out.extend(piece);
    }
    out
}

fn render(w: &[i32], gens: &[GArrow], object: &str) -> String {
    if w.is_empty() {
        return format!("1{object}");
    }
    w.iter()
        .map(|&l| {
            let n = &gens[(l.unsigned_abs() - 1) as usize].name;
            if l < 0 {
                format!("{n}^-1")
            } else {
                n.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(".")
}
