use std::fmt;

/// Position of a nondegenerate cell inside its simplicial set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub dim: usize,
    pub index: usize,
}

/// An element of `X_n` in Eilenberg-Zilber normal form.
///
/// A simplex is a nondegenerate base cell together with the monotone
/// surjection `[n] → [dim base]` that degenerates it. The surjection is
/// stored as its value table, so two simplices are equal exactly when their
/// normal forms agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub(crate) cell: CellId,
    pub(crate) surj: Vec<u8>,
}

impl Simplex {
    pub fn nondegenerate(cell: CellId) -> Self {
        Simplex {
            cell,
            surj: (0..=cell.dim as u8).collect(),
        }
    }

    /// Builds `s_{j1} … s_{jk} base` from a degeneracy word.
    ///
    /// The word must be strictly decreasing and `j1 < dim base + k`, which is
    /// the normal-form condition.
    pub fn from_word(cell: CellId, word: &[usize]) -> Option<Self> {
        if word.windows(2).any(|w| w[0] <= w[1]) {
            return None;
        }
        let n = cell.dim + word.len();
        if let Some(&first) = word.first() {
            if first >= n {
                return None;
            }
        }
        let surj = (0..=n)
            .map(|t| (t - word.iter().filter(|&&j| j < t).count()) as u8)
            .collect();
        Some(Simplex { cell, surj })
    }

    pub fn cell(&self) -> CellId {
        self.cell
    }

    pub fn dim(&self) -> usize {
        self.surj.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.cell.dim < self.dim()
    }

    /// The degeneracy word `[j1, …, jk]`, strictly decreasing.
    pub fn word(&self) -> Vec<usize> {
        (0..self.dim())
            .rev()
            .filter(|&j| self.surj[j] == self.surj[j + 1])
            .collect()
    }

    /// Indices `j` with `self = s_j y` for some `y`.
    pub(crate) fn degenerate_directions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&j| self.surj[j] == self.surj[j + 1])
    }

    /// Totally degenerate simplex of dimension `dim` on a vertex.
    pub fn constant(vertex: CellId, dim: usize) -> Self {
        debug_assert_eq!(vertex.dim, 0);
        Simplex {
            cell: vertex,
            surj: vec![0; dim + 1],
        }
    }
}

/// Value table of the coface `δ^i : [n-1] → [n]`.
pub(crate) fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|k| if k < i { k } else { k + 1 }).collect()
}

/// Value table of the codegeneracy `σ^j : [n+1] → [n]`.
pub(crate) fn codegeneracy(n: usize, j: usize) -> Vec<usize> {
    (0..=n + 1).map(|k| if k <= j { k } else { k - 1 }).collect()
}

/// Sorted list of vertex positions set in `mask`.
pub(crate) fn mask_vertices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

pub(crate) fn full_mask(dim: usize) -> u32 {
    ((1u64 << (dim + 1)) - 1) as u32
}

/// Compact rendering used inside generated cell names; contains no whitespace.
pub(crate) struct Compact<'a>(pub &'a Simplex, pub &'a str);

impl fmt::Display for Compact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.0.word();
        if !word.is_empty() {
            let w: Vec<String> = word.iter().map(|j| j.to_string()).collect();
            write!(f, "s[{}]", w.join(","))?;
        }
        write!(f, "{}", self.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_roundtrip() {
        let cell = CellId { dim: 2, index: 0 };
        let s = Simplex::from_word(cell, &[3, 1]).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.word(), vec![3, 1]);
        assert_eq!(s.surj, vec![0, 1, 1, 2, 2]);
    }

    #[test]
    fn rejects_non_normal_words() {
        let cell = CellId { dim: 1, index: 0 };
        assert!(Simplex::from_word(cell, &[0, 1]).is_none());
        assert!(Simplex::from_word(cell, &[1, 1]).is_none());
        assert!(Simplex::from_word(cell, &[2]).is_none());
        assert!(Simplex::from_word(cell, &[1]).is_some());
    }

    #[test]
    fn operator_tables() {
        assert_eq!(coface(2, 1), vec![0, 2]);
        assert_eq!(codegeneracy(1, 0), vec![0, 0, 1]);
    }
}
