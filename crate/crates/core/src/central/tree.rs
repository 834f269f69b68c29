use crate::error::{Error, Result};
use crate::poisson::PhasePoly;

use super::{momentum, p_squared_subset, pair_label, subset_label};

/// Binary splitting of a coordinate set. A `Set` node of size ≥ 3 is stopped
/// and contributes its L′ momenta; sizes 1 and 2 are leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitTree {
    Set { indices: Vec<usize>, lprime: Option<Vec<(usize, usize)>> },
    Split(Box<SplitTree>, Box<SplitTree>),
}

/// Labeled element of a recursive set.
pub type Labeled = (String, PhasePoly);

impl SplitTree {
    /// Leaf or stopped node over the given 0-based indices.
    pub fn set(indices: &[usize]) -> Self {
        SplitTree::Set { indices: indices.to_vec(), lprime: None }
    }

    /// Stopped node with an explicit L′ (0-based pairs).
    pub fn stop_with(indices: &[usize], lprime: &[(usize, usize)]) -> Self {
        SplitTree::Set { indices: indices.to_vec(), lprime: Some(lprime.to_vec()) }
    }

    pub fn split(a: SplitTree, b: SplitTree) -> Self {
        SplitTree::Split(Box::new(a), Box::new(b))
    }

    /// Sorted coordinates covered by the node.
    pub fn indices(&self) -> Vec<usize> {
        match self {
            SplitTree::Set { indices, .. } => {
                let mut v = indices.clone();
                v.sort_unstable();
                v
            }
            SplitTree::Split(a, b) => {
                let mut v = a.indices();
                v.extend(b.indices());
                v.sort_unstable();
                v
            }
        }
    }

    /// Number of split levels on the longest path.
    pub fn depth(&self) -> usize {
        match self {
            SplitTree::Set { .. } => 0,
            SplitTree::Split(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// z: number of Z elements produced.
    pub fn z(&self) -> usize {
        match self {
            SplitTree::Set { indices, .. } => match indices.len() {
                1 => 0,
                _ => 1,
            },
            SplitTree::Split(a, b) => a.z() + b.z() + 1,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let idx = self.indices();
        if idx != (0..n).collect::<Vec<_>>() {
            return Err(Error::Invalid(format!("tree leaves do not partition 1..{n}")));
        }
        self.validate_nodes()
    }

    fn validate_nodes(&self) -> Result<()> {
        match self {
            SplitTree::Set { indices, lprime } => {
                if indices.is_empty() {
                    return Err(Error::Invalid("empty tree node".into()));
                }
                if let Some(lp) = lprime {
                    let m = indices.len();
                    if m < 3 || lp.len() != 2 * m - 4 {
                        return Err(Error::Invalid(format!("L' must have {} momenta", (2 * m).saturating_sub(4))));
                    }
                    if lp.iter().any(|(i, j)| i == j || !indices.contains(i) || !indices.contains(j)) {
                        return Err(Error::Invalid("L' momenta must lie inside the node".into()));
                    }
                }
                Ok(())
            }
            SplitTree::Split(a, b) => {
                a.validate_nodes()?;
                b.validate_nodes()
            }
        }
    }

    /// Compact rendering such as `{123}stop|{45}` (1-based).
    pub fn render(&self) -> String {
        match self {
            SplitTree::Set { indices, lprime } => {
                let s = format!("{{{}}}", digits(indices));
                match (indices.len() >= 3, lprime) {
                    (false, _) => s,
                    (true, None) => format!("{s}stop"),
                    (true, Some(lp)) => {
                        let l: Vec<String> = lp.iter().map(|&(i, j)| format!("{}{}", i + 1, j + 1)).collect();
                        format!("{s}stop({})", l.join(","))
                    }
                }
            }
            SplitTree::Split(a, b) => format!("({}|{})", a.render(), b.render()),
        }
    }
}

fn digits(v: &[usize]) -> String {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(if v.iter().any(|&i| i >= 9) { "," } else { "" })
}

/// Default L′ for a stopped node s₁ < … < s_m: P_{s₁sⱼ}, then P_{s₂sⱼ}, j ≥ 3.
pub fn default_lprime(indices: &[usize]) -> Vec<(usize, usize)> {
    let mut s = indices.to_vec();
    s.sort_unstable();
    let mut out = Vec::new();
    for a in 0..2.min(s.len()) {
        for &j in s.iter().skip(2) {
            out.push((s[a], j));
        }
    }
    out
}

/// (Z, L) of the recursive construction for the tree over n coordinates.
pub fn build_recursive_sets(n: usize, tree: &SplitTree) -> Result<(Vec<Labeled>, Vec<Labeled>)> {
    tree.validate(n)?;
    let mut z = Vec::new();
    let mut l = Vec::new();
    walk(n, tree, true, &mut z, &mut l);
    debug_assert_eq!(z.len(), tree.z());
    debug_assert_eq!(l.len(), 2 * (n - tree.z() - 1));
    Ok((z, l))
}

fn walk(n: usize, t: &SplitTree, root: bool, z: &mut Vec<Labeled>, l: &mut Vec<Labeled>) {
    let full_label = |idx: &[usize]| if root { "P^2".to_string() } else { subset_label(idx) };
    match t {
        SplitTree::Set { indices, lprime } => {
            let mut idx = indices.clone();
            idx.sort_unstable();
            match idx.len() {
                1 => {}
                2 => z.push((pair_label(idx[0], idx[1]), momentum(n, idx[0], idx[1]))),
                _ => {
                    z.push((full_label(&idx), p_squared_subset(n, &idx)));
                    let lp = lprime.clone().unwrap_or_else(|| default_lprime(&idx));
                    for (i, j) in lp {
                        l.push((pair_label(i, j), momentum(n, i, j)));
                    }
                }
            }
        }
        SplitTree::Split(a, b) => {
            let idx = t.indices();
            z.push((full_label(&idx), p_squared_subset(n, &idx)));
            walk(n, a, false, z, l);
            walk(n, b, false, z, l);
        }
    }
}

/// Every tree over 0..n with at most `max_depth` splits. Splits are taken
/// between consecutive indices, which covers all trees up to relabeling.
pub fn enumerate_trees(n: usize, max_depth: usize) -> Vec<SplitTree> {
    let idx: Vec<usize> = (0..n).collect();
    trees_over(&idx, max_depth)
}

fn trees_over(idx: &[usize], depth: usize) -> Vec<SplitTree> {
    let mut out = vec![SplitTree::set(idx)];
    if depth == 0 || idx.len() < 3 {
        return out;
    }
    for cut in 1..idx.len() {
        let (a, b) = idx.split_at(cut);
        for ta in trees_over(a, depth - 1) {
            for tb in trees_over(b, depth - 1) {
                out.push(SplitTree::split(ta.clone(), tb));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_counts() {
        let t = SplitTree::split(SplitTree::set(&[0, 1]), SplitTree::set(&[2]));
        let (z, l) = build_recursive_sets(3, &t).unwrap();
        assert_eq!(z.iter().map(|x| x.0.as_str()).collect::<Vec<_>>(), vec!["P^2", "P_12"]);
        assert!(l.is_empty());
    }

    #[test]
    fn stop_with_explicit_lprime() {
        let t = SplitTree::split(SplitTree::stop_with(&[0, 1, 2], &[(0, 1), (0, 2)]), SplitTree::set(&[3]));
        let (z, l) = build_recursive_sets(4, &t).unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(l.iter().map(|x| x.0.as_str()).collect::<Vec<_>>(), vec!["P_12", "P_13"]);
        assert_eq!(t.render(), "({123}stop(12,13)|{4})");
    }

    #[test]
    fn malformed_trees_rejected() {
        let t = SplitTree::split(SplitTree::set(&[0, 1]), SplitTree::set(&[1, 2]));
        assert!(build_recursive_sets(3, &t).is_err());
        let t = SplitTree::stop_with(&[0, 1, 2], &[(0, 1)]);
        assert!(build_recursive_sets(3, &t).is_err());
    }

    #[test]
    fn size_formula_for_all_trees() {
        for n in 2..=6 {
            for t in enumerate_trees(n, 3) {
                let (z, l) = build_recursive_sets(n, &t).unwrap();
                assert_eq!(z.len(), t.z());
                assert_eq!(l.len(), 2 * (n - t.z() - 1));
            }
        }
    }

    #[test]
    fn default_lprime_order() {
        assert_eq!(default_lprime(&[0, 1, 2, 3]), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }
}
