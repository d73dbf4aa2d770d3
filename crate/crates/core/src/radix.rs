//! Lexicographic sorting of variable-length integer tuples in linear time.
//!
//! This is the classic two-phase radix sort for strings over a bounded
//! alphabet `0..=max_value`:
//!
//! 1. Collect the `(position, value)` pairs of all components and bucket them,
//!    giving for every position the ascending list of values that actually
//!    occur there. Later passes only visit those buckets, so a pass never pays
//!    for the whole alphabet.
//! 2. Process positions from the longest tuple length down to 1. Before the
//!    pass for position `j`, tuples of length exactly `j` are put in front of
//!    the queue; a stable bucket pass on component `j` then follows. Placing
//!    shorter tuples first is what makes a tuple sort before its extensions.
//!
//! Total cost is `O(total components + max_value)`.

/// Tuples stored back to back; tuple `i` is `components[offsets[i]..offsets[i + 1]]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlatTuples {
    offsets: Vec<usize>,
    components: Vec<u32>,
}

impl FlatTuples {
    pub fn new() -> Self {
        Self {
            offsets: vec![0],
            components: Vec::new(),
        }
    }

    pub fn with_capacity(tuples: usize, components: usize) -> Self {
        let mut offsets = Vec::with_capacity(tuples + 1);
        offsets.push(0);
        Self {
            offsets,
            components: Vec::with_capacity(components),
        }
    }

    pub fn push(&mut self, tuple: &[u32]) {
        self.components.extend_from_slice(tuple);
        self.offsets.push(self.components.len());
    }

    /// Builds from precomputed offsets (starting at 0, nondecreasing, ending at
    /// `components.len()`).
    pub fn from_parts(offsets: Vec<usize>, components: Vec<u32>) -> Self {
        assert_eq!(offsets.first(), Some(&0));
        assert_eq!(offsets.last(), Some(&components.len()));
        Self { offsets, components }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.components[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    fn tuple_len(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }
}

impl<T: AsRef<[u32]>> FromIterator<T> for FlatTuples {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut out = Self::new();
        for t in iter {
            out.push(t.as_ref());
        }
        out
    }
}

/// Stable lexicographic order of `tuples` as a permutation of tuple indices.
///
/// # Panics
/// If a component exceeds `max_value`.
pub fn radix_order(tuples: &FlatTuples, max_value: u32) -> Vec<usize> {
    let count = tuples.len();
    let alphabet = max_value as usize + 1;
    let max_len = (0..count).map(|i| tuples.tuple_len(i)).max().unwrap_or(0);

    // Tuples grouped by length, keeping input order within a group.
    let mut by_length: Vec<Vec<usize>> = vec![Vec::new(); max_len + 1];
    for i in 0..count {
        by_length[tuples.tuple_len(i)].push(i);
    }

    let present = values_by_position(tuples, alphabet, max_len);

    let mut queue: Vec<usize> = Vec::with_capacity(count);
    let mut next: Vec<usize> = Vec::with_capacity(count);
    let mut bucket_start = vec![0usize; alphabet];
    for j in (1..=max_len).rev() {
        next.clear();
        next.extend_from_slice(&by_length[j]);
        next.extend_from_slice(&queue);
        std::mem::swap(&mut queue, &mut next);

        // Stable counting pass on component j - 1, touching only values seen there.
        for &t in &queue {
            bucket_start[tuples.get(t)[j - 1] as usize] += 1;
        }
        let mut running = 0;
        for &v in &present[j - 1] {
            let c = bucket_start[v as usize];
            bucket_start[v as usize] = running;
            running += c;
        }
        next.clear();
        next.resize(queue.len(), 0);
        for &t in &queue {
            let slot = &mut bucket_start[tuples.get(t)[j - 1] as usize];
            next[*slot] = t;
            *slot += 1;
        }
        for &v in &present[j - 1] {
            bucket_start[v as usize] = 0;
        }
        std::mem::swap(&mut queue, &mut next);
    }

    // Empty tuples precede everything.
    let mut order = std::mem::take(&mut by_length[0]);
    order.extend_from_slice(&queue);
    order
}

/// For each position, the ascending distinct values occurring there.
fn values_by_position(tuples: &FlatTuples, alphabet: usize, max_len: usize) -> Vec<Vec<u32>> {
    let total = tuples.components.len();
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(total);
    for t in tuples.iter() {
        pairs.extend(t.iter().enumerate().map(|(j, &v)| (j as u32, v)));
    }

    // Counting sort by value, then stably by position.
    let mut by_value = vec![(0u32, 0u32); total];
    let mut start = vec![0usize; alphabet + 1];
    for &(_, v) in &pairs {
        start[v as usize + 1] += 1;
    }
    for i in 1..=alphabet {
        start[i] += start[i - 1];
    }
    for &(j, v) in &pairs {
        by_value[start[v as usize]] = (j, v);
        start[v as usize] += 1;
    }

    let mut present: Vec<Vec<u32>> = vec![Vec::new(); max_len];
    for (j, v) in by_value {
        let list = &mut present[j as usize];
        if list.last() != Some(&v) {
            list.push(v);
        }
    }
    present
}

/// Sorts tuples lexicographically (a proper prefix sorts first). Stable.
///
/// # Panics
/// If a component exceeds `max_value`.
pub fn radix_sort_tuples(tuples: &[Vec<u32>], max_value: u32) -> Vec<Vec<u32>> {
    let flat: FlatTuples = tuples.iter().collect();
    radix_order(&flat, max_value)
        .into_iter()
        .map(|i| tuples[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let input = vec![vec![1, 2], vec![2], vec![1, 1, 2]];
        assert_eq!(
            radix_sort_tuples(&input, 2),
            vec![vec![1, 1, 2], vec![1, 2], vec![2]]
        );
        assert!(radix_sort_tuples(&[], 0).is_empty());
        assert_eq!(
            radix_sort_tuples(&[vec![0, 0], vec![], vec![0]], 0),
            vec![vec![], vec![0], vec![0, 0]]
        );
    }

    #[test]
    fn prefix_sorts_first() {
        let input = vec![vec![3, 1, 4], vec![3, 1], vec![3], vec![3, 1, 4, 1]];
        assert_eq!(
            radix_sort_tuples(&input, 4),
            vec![vec![3], vec![3, 1], vec![3, 1, 4], vec![3, 1, 4, 1]]
        );
    }

    #[test]
    fn order_is_stable() {
        let flat: FlatTuples = [[1u32, 2], [0, 5], [1, 2], [0, 5]].iter().collect();
        assert_eq!(radix_order(&flat, 5), vec![1, 3, 0, 2]);
    }

    #[test]
    #[should_panic]
    fn component_above_max_value_panics() {
        radix_sort_tuples(&[vec![4]], 3);
    }

    proptest! {
        #[test]
        fn agrees_with_comparison_sort(
            tuples in prop::collection::vec(prop::collection::vec(0u32..20, 0..6), 0..200)
        ) {
            let mut expected = tuples.clone();
            expected.sort();
            prop_assert_eq!(radix_sort_tuples(&tuples, 19), expected);
        }

        #[test]
        fn order_is_a_stable_permutation(
            tuples in prop::collection::vec(prop::collection::vec(0u32..4, 0..4), 0..100)
        ) {
            let flat: FlatTuples = tuples.iter().collect();
            let order = radix_order(&flat, 3);
            let mut expected: Vec<usize> = (0..tuples.len()).collect();
            expected.sort_by(|&a, &b| tuples[a].cmp(&tuples[b]));
            prop_assert_eq!(order, expected);
        }
    }
}
