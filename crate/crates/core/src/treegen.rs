//! Tree generators: random recursive trees, fixed shapes, exhaustive
//! enumeration of rooted trees up to isomorphism, and the smallest trees of a
//! given width.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codec::parse_parens;
use crate::tree::{NodeId, Tree};

/// Largest size accepted by [`enumerate_rooted_trees`].
pub const ENUMERATION_CAP: usize = 12;

/// Largest `n` for which [`rooted_tree_counts`] stays exact in 128 bits.
pub const COUNT_CAP: usize = 60;

/// Refuse to materialize shapes with more nodes than this.
const SHAPE_NODE_CAP: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{0}")]
    Domain(String),
}

fn domain(msg: impl Into<String>) -> GenError {
    GenError::Domain(msg.into())
}

/// Deterministic random stream for tree generation.
///
/// ChaCha8 keyed through `SeedableRng::seed_from_u64`; a given seed yields the
/// same trees on every platform.
#[derive(Debug, Clone)]
pub struct TreeRng(ChaCha8Rng);

impl TreeRng {
    pub fn seed_from(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.0.random_range(0..bound)
    }

    fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.0);
    }
}

/// Node 0 is the root; node `i >= 1` picks its parent uniformly from `0..i`.
pub fn random_recursive_tree(n: usize, rng: &mut TreeRng) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(domain("a random recursive tree needs n >= 1"));
    }
    let parents: Vec<Option<NodeId>> = std::iter::once(None)
        .chain((1..n).map(|i| Some(rng.below(i))))
        .collect();
    Ok(Tree::from_parents(&parents).expect("parents precede children"))
}

/// The same abstract tree under a uniformly random relabeling of node ids,
/// which also reorders every child list.
pub fn isomorphic_copy(t: &Tree, rng: &mut TreeRng) -> Tree {
    let mut relabel: Vec<NodeId> = (0..t.len()).collect();
    rng.shuffle(&mut relabel);
    let mut parents = vec![None; t.len()];
    for (u, &new_id) in relabel.iter().enumerate() {
        parents[new_id] = t.parent(u).map(|p| relabel[p]);
    }
    Tree::from_parents(&parents).expect("relabeling preserves tree structure")
}

/// `n` nodes in a chain.
pub fn path(n: usize) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(domain("path needs n >= 1"));
    }
    let parents: Vec<_> = (0..n).map(|i| i.checked_sub(1)).collect();
    Ok(Tree::from_parents(&parents).unwrap())
}

/// A root with `n - 1` leaf children.
pub fn star(n: usize) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(domain("star needs n >= 1"));
    }
    let parents: Vec<_> = (0..n).map(|i| (i > 0).then_some(0)).collect();
    Ok(Tree::from_parents(&parents).unwrap())
}

/// Complete tree where every internal node has `arity` children and all
/// leaves sit at depth `depth`.
pub fn complete_kary(arity: usize, depth: usize) -> Result<Tree, GenError> {
    if arity == 0 {
        return Err(domain("complete_kary needs arity >= 1"));
    }
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=depth {
        total += layer;
        layer = layer.saturating_mul(arity as u128);
        if total > SHAPE_NODE_CAP {
            return Err(domain(format!(
                "complete {arity}-ary tree of depth {depth} exceeds {SHAPE_NODE_CAP} nodes"
            )));
        }
    }
    // Breadth-first numbering: node i > 0 hangs under (i - 1) / arity.
    let parents: Vec<_> = (0..total as usize)
        .map(|i| (i > 0).then(|| (i - 1) / arity))
        .collect();
    Ok(Tree::from_parents(&parents).unwrap())
}

/// Canonical strings of all rooted trees with `1..=max_size` nodes, one per
/// isomorphism class; `result[s - 1]` lists size `s` in ascending order.
pub fn enumerate_canonical_up_to(max_size: usize) -> Result<Vec<Vec<String>>, GenError> {
    if max_size == 0 || max_size > ENUMERATION_CAP {
        return Err(domain(format!(
            "enumeration supports 1 <= n <= {ENUMERATION_CAP}, got {max_size}"
        )));
    }
    // Classes seen so far, ordered by size and then canonical string.
    let mut pool: Vec<(usize, String)> = Vec::new();
    let mut by_size: Vec<Vec<String>> = Vec::with_capacity(max_size);
    for size in 1..=max_size {
        let mut found = Vec::new();
        let mut chosen = Vec::new();
        child_multisets(&pool, 0, size - 1, &mut chosen, &mut |children| {
            let mut parts: Vec<&str> = children.iter().map(|&i| pool[i].1.as_str()).collect();
            parts.sort_unstable();
            found.push(format!("({})", parts.concat()));
        });
        found.sort_unstable();
        pool.extend(found.iter().map(|s| (size, s.clone())));
        by_size.push(found);
    }
    Ok(by_size)
}

/// Calls `emit` once per multiset of pool classes (as a nondecreasing index
/// list starting at `first`) whose sizes add up to `remaining`.
fn child_multisets(
    pool: &[(usize, String)],
    first: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(chosen);
        return;
    }
    for i in first..pool.len() {
        let size = pool[i].0;
        if size > remaining {
            break;
        }
        chosen.push(i);
        child_multisets(pool, i, remaining - size, chosen, emit);
        chosen.pop();
    }
}

/// One representative per isomorphism class of rooted trees with `n` nodes,
/// ordered by canonical string.
pub fn enumerate_rooted_trees(n: usize) -> Result<Vec<Tree>, GenError> {
    let mut by_size = enumerate_canonical_up_to(n)?;
    let canon = by_size.pop().unwrap();
    Ok(canon.iter().map(|s| parse_parens(s).unwrap()).collect())
}

/// `a_1..=a_n`: the number of rooted trees with `k` nodes up to isomorphism,
/// by the Euler-transform recurrence
/// `a_{m+1} = (1/m) sum_{k=1..m} (sum_{d | k} d a_d) a_{m-k+1}`.
pub fn rooted_tree_counts(n: usize) -> Result<Vec<u128>, GenError> {
    if n > COUNT_CAP {
        return Err(domain(format!("counts are exact only up to n = {COUNT_CAP}")));
    }
    // a[0] is unused padding so a[k] is a_k.
    let mut a = vec![0u128; n + 1];
    if n >= 1 {
        a[1] = 1;
    }
    let mut divisor_sums = vec![0u128; n + 1];
    for m in 1..n {
        divisor_sums[m] = (1..=m).filter(|d| m % d == 0).map(|d| d as u128 * a[d]).sum();
        let total: u128 = (1..=m).map(|k| divisor_sums[k] * a[m - k + 1]).sum();
        a[m + 1] = total / m as u128;
    }
    a.remove(0);
    Ok(a)
}

/// `a_n`, its running sums `b_n`, and the minimal size `t_k` of a tree of width `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    pub a: Vec<u128>,
    pub b: Vec<u128>,
    pub t: Vec<u128>,
}

impl SequenceTable {
    pub fn a(&self, n: usize) -> u128 {
        self.a[n - 1]
    }

    pub fn b(&self, n: usize) -> u128 {
        self.b[n - 1]
    }

    pub fn t(&self, k: usize) -> u128 {
        self.t[k - 1]
    }
}

fn cumulative(a: &[u128]) -> Vec<u128> {
    a.iter()
        .scan(0u128, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// `t_k = 1 + sum_{i=1..n} i a_i + (n + 1)(k - b_n)` with `b_n < k <= b_{n+1}`.
fn t_from_counts(k: u128, a: &[u128], b: &[u128]) -> Option<u128> {
    let mut b_n = 0u128;
    let mut weighted = 0u128;
    for (i, (&a_next, &b_next)) in a.iter().zip(b).enumerate() {
        // Here b_n covers sizes 1..=i and the candidate interval is (b_n, b_{i+1}].
        if k <= b_next {
            return Some(1 + weighted + (i as u128 + 1) * (k - b_n));
        }
        weighted += (i as u128 + 1) * a_next;
        b_n = b_next;
    }
    None
}

/// Minimal node count of a tree whose width is `k`.
pub fn minimal_size_for_width(k: usize) -> Result<u128, GenError> {
    if k == 0 {
        return Err(domain("width is at least 1"));
    }
    let a = rooted_tree_counts(COUNT_CAP)?;
    let b = cumulative(&a);
    t_from_counts(k as u128, &a, &b).ok_or_else(|| domain(format!("width {k} is out of range")))
}

pub fn sequence_table(n_max: usize) -> Result<SequenceTable, GenError> {
    if n_max == 0 || n_max > COUNT_CAP {
        return Err(domain(format!("sequence table supports 1 <= n <= {COUNT_CAP}")));
    }
    let all_a = rooted_tree_counts(COUNT_CAP)?;
    let all_b = cumulative(&all_a);
    let t = (1..=n_max as u128)
        .map(|k| t_from_counts(k, &all_a, &all_b).expect("b grows faster than k"))
        .collect();
    Ok(SequenceTable {
        a: all_a[..n_max].to_vec(),
        b: all_b[..n_max].to_vec(),
        t,
    })
}

/// A root over the first `k` pairwise non-isomorphic trees taken by
/// increasing size (canonical order within a size). It has width `k` and the
/// fewest nodes possible for that width.
pub fn extremal_width_tree(k: usize) -> Result<Tree, GenError> {
    if k == 0 {
        return Err(domain("width is at least 1"));
    }
    let counts = rooted_tree_counts(ENUMERATION_CAP)?;
    let sizes_needed = cumulative(&counts)
        .iter()
        .position(|&b| b >= k as u128)
        .ok_or_else(|| {
            domain(format!(
                "width {k} needs subtrees beyond the enumeration cap of {ENUMERATION_CAP}"
            ))
        })?
        + 1;
    let classes = enumerate_canonical_up_to(sizes_needed)?;
    let children: String = classes.iter().flatten().take(k).map(String::as_str).collect();
    Ok(parse_parens(&format!("({children})")).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{canonical_string, to_parens};
    use crate::iso::width;

    #[test]
    fn random_recursive_small_cases() {
        let mut rng = TreeRng::seed_from(1);
        assert_eq!(random_recursive_tree(1, &mut rng).unwrap(), Tree::singleton());
        for seed in 0..10 {
            let t = random_recursive_tree(2, &mut TreeRng::seed_from(seed)).unwrap();
            assert_eq!(t.parents(), &[None, Some(0)]);
        }
        assert!(random_recursive_tree(0, &mut rng).is_err());
    }

    #[test]
    fn random_recursive_is_reproducible() {
        let a = random_recursive_tree(10_000, &mut TreeRng::seed_from(42)).unwrap();
        let b = random_recursive_tree(10_000, &mut TreeRng::seed_from(42)).unwrap();
        let c = random_recursive_tree(10_000, &mut TreeRng::seed_from(43)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.root(), 0);
        assert!((1..a.len()).all(|i| a.parent(i).unwrap() < i));
    }

    #[test]
    fn isomorphic_copy_preserves_canonical_form() {
        let mut rng = TreeRng::seed_from(7);
        assert_eq!(isomorphic_copy(&Tree::singleton(), &mut rng), Tree::singleton());
        let small = parse_parens("(()(()))").unwrap();
        let copy = isomorphic_copy(&small, &mut rng);
        assert_eq!(canonical_string(&copy), "((())())");
        for _ in 0..50 {
            let t = random_recursive_tree(60, &mut rng).unwrap();
            let copy = isomorphic_copy(&t, &mut rng);
            assert_eq!(canonical_string(&t), canonical_string(&copy));
        }
    }

    #[test]
    fn isomorphic_copy_relabels() {
        let t = random_recursive_tree(200, &mut TreeRng::seed_from(3)).unwrap();
        let copy = isomorphic_copy(&t, &mut TreeRng::seed_from(4));
        assert_ne!(t.parents(), copy.parents());
    }

    #[test]
    fn shapes() {
        assert_eq!(path(1).unwrap(), Tree::singleton());
        assert_eq!(star(1).unwrap(), Tree::singleton());
        assert_eq!(complete_kary(3, 0).unwrap(), Tree::singleton());
        let binary = complete_kary(2, 2).unwrap();
        assert_eq!(binary.len(), 7);
        assert_eq!(to_parens(&binary), "((()())(()()))");
        assert_eq!(complete_kary(1, 4).unwrap().len(), 5);
        assert_eq!(path(5).unwrap().depth(), 4);
        let big_star = star(100_000).unwrap();
        assert_eq!(big_star.degree(), 99_999);
        assert!(path(0).is_err());
        assert!(star(0).is_err());
        assert!(complete_kary(0, 2).is_err());
        assert!(complete_kary(10, 40).is_err());
    }

    #[test]
    fn enumeration_small_sizes() {
        assert_eq!(enumerate_rooted_trees(1).unwrap(), vec![Tree::singleton()]);
        let three: Vec<String> = enumerate_rooted_trees(3).unwrap().iter().map(to_parens).collect();
        assert_eq!(three, vec!["((()))", "(()())"]);
        assert_eq!(enumerate_rooted_trees(7).unwrap().len(), 48);
        assert!(enumerate_rooted_trees(0).is_err());
        assert!(enumerate_rooted_trees(ENUMERATION_CAP + 1).is_err());
    }

    #[test]
    fn enumeration_is_canonical_sorted_and_distinct() {
        for (i, class) in enumerate_canonical_up_to(9).unwrap().iter().enumerate() {
            assert!(class.windows(2).all(|w| w[0] < w[1]));
            for s in class {
                let t = parse_parens(s).unwrap();
                assert_eq!(t.len(), i + 1);
                assert_eq!(&canonical_string(&t), s);
            }
        }
    }

    #[test]
    fn counts_match_enumeration_through_ten() {
        // a_9 = 286 and a_10 = 719 (OEIS A000081).
        let counts = rooted_tree_counts(10).unwrap();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115, 286, 719]);
        let enumerated: Vec<u128> = enumerate_canonical_up_to(10)
            .unwrap()
            .iter()
            .map(|c| c.len() as u128)
            .collect();
        assert_eq!(enumerated, counts);
    }

    #[test]
    fn sequence_table_first_rows() {
        let table = sequence_table(8).unwrap();
        assert_eq!(table.a, vec![1, 1, 2, 4, 9, 20, 48, 115]);
        assert_eq!(table.b, vec![1, 2, 4, 8, 17, 37, 85, 200]);
        assert_eq!(table.t, vec![2, 4, 7, 10, 14, 18, 22, 26]);
        assert_eq!(table.t(5), 14);
        for n in 2..=8 {
            assert_eq!(table.b(n) - table.b(n - 1), table.a(n));
        }
        assert!(sequence_table(0).is_err());
    }

    #[test]
    fn extremal_trees() {
        let t1 = extremal_width_tree(1).unwrap();
        assert_eq!(to_parens(&t1), "(())");
        let t5 = extremal_width_tree(5).unwrap();
        assert_eq!(t5.len(), 14);
        assert_eq!(width(&t5), 5);
        // Expected shape: a leaf, a 2-path, both 3-node trees, and one 4-node tree.
        assert_eq!(
            canonical_string(&t5),
            canonical_string(&parse_parens("(()(())(()())((()))(((()))))").unwrap())
        );
        let t8 = extremal_width_tree(8).unwrap();
        assert_eq!((t8.len(), width(&t8)), (26, 8));
        assert!(extremal_width_tree(0).is_err());
    }

    #[test]
    fn minimal_sizes_match_the_table_and_extremal_trees() {
        let table = sequence_table(40).unwrap();
        for k in 1..=40 {
            assert_eq!(minimal_size_for_width(k).unwrap(), table.t(k));
        }
        // Up to b_8 = 200 the children all have at most 8 nodes.
        for k in 1..=200 {
            let t = extremal_width_tree(k).unwrap();
            assert_eq!(t.len() as u128, minimal_size_for_width(k).unwrap());
            assert_eq!(width(&t), k);
        }
    }
}
