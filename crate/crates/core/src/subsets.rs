//! Subset and permutation enumeration over 1-based user indices.

use rand::seq::SliceRandom;
use rand::Rng;

/// All `size`-subsets of `1..=k` in lexicographic order.
pub fn subsets_of_size(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > k {
        return out;
    }
    let mut cur: Vec<usize> = (1..=size).collect();
    loop {
        out.push(cur.clone());
        // Rightmost position that can still advance.
        let Some(i) = (0..size).rev().find(|&i| cur[i] < k - size + i + 1) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// All nonempty subsets of `1..=k`, ordered by size then lexicographically.
pub fn nonempty_subsets(k: usize) -> Vec<Vec<usize>> {
    (1..=k).flat_map(|s| subsets_of_size(k, s)).collect()
}

/// Up to `cap` distinct `size`-subsets of `1..=k`. Exhaustive when the total
/// count fits under `cap`, otherwise a seeded sample sorted lexicographically.
pub fn sample_subsets_of_size<R: Rng + ?Sized>(rng: &mut R, k: usize, size: usize, cap: usize) -> Vec<Vec<usize>> {
    if binomial(k, size) <= cap as u128 {
        return subsets_of_size(k, size);
    }
    let users: Vec<usize> = (1..=k).collect();
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < cap {
        let mut pick: Vec<usize> = users.choose_multiple(rng, size).copied().collect();
        pick.sort_unstable();
        seen.insert(pick);
    }
    seen.into_iter().collect()
}

/// All permutations of `items` in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    let n = items.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut out = vec![items.to_vec()];
    // Standard next-permutation on the index vector.
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| idx[i] < idx[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| idx[j] > idx[i]).expect("successor exists");
        idx.swap(i, j);
        idx[i + 1..].reverse();
        out.push(idx.iter().map(|&p| items[p].clone()).collect());
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
