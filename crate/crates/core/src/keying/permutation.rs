//! Key-derived permutations.
//!
//! A seed is stretched to one pseudo-random value per position, then each
//! position is replaced by the ascending rank of its value. Equal values
//! rank by their original position, so the result is always a bijection.

use ring::hmac;

use super::{derive_material, StegoKey};
use crate::error::{Error, Result};

const EXPAND_LABEL: &[u8] = b"dctstego/perm";

/// Stretch `seed` to exactly `n` 32-bit values with HMAC-SHA256 in counter
/// mode (`HMAC(seed, label || be32(block))`, eight values per block).
pub fn expand_seed(seed: &[u8], n: usize) -> Result<Vec<u32>> {
    if seed.is_empty() {
        return Err(Error::EmptyBytes);
    }
    let key = hmac::Key::new(hmac::HMAC_SHA256, seed);
    let mut values = Vec::with_capacity(n);
    let mut block = 0u32;
    let mut msg = Vec::with_capacity(EXPAND_LABEL.len() + 4);
    while values.len() < n {
        msg.clear();
        msg.extend_from_slice(EXPAND_LABEL);
        msg.extend_from_slice(&block.to_be_bytes());
        let tag = hmac::sign(&key, &msg);
        values.extend(
            tag.as_ref()
                .chunks_exact(4)
                .map(|c| u32::from_be_bytes(c.try_into().unwrap()))
                .take(n - values.len()),
        );
        block += 1;
    }
    Ok(values)
}

/// 1-based ascending rank of every value, ties broken by position.
///
/// `rank_permutation(&[75, 69, 89]) == [2, 1, 3]`.
pub fn rank_permutation<T: Ord>(values: &[T]) -> Vec<usize> {
    let mut by_value: Vec<usize> = (0..values.len()).collect();
    // stable: equal values keep their original order
    by_value.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let mut ranks = vec![0; values.len()];
    for (rank, &pos) in by_value.iter().enumerate() {
        ranks[pos] = rank + 1;
    }
    ranks
}

/// Keyed permutation of `1..=n`.
pub fn permutation_from_bytes(bytes: &[u8], n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::ZeroLength);
    }
    Ok(rank_permutation(&expand_seed(bytes, n)?))
}

/// Row-major product of a row and a column permutation.
pub fn order_from_permutations(rows: &[usize], cols: &[usize]) -> Vec<(usize, usize)> {
    rows.iter()
        .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
        .collect()
}

/// Keyed visiting order over an `m x n` grid, 1-based `(row, col)` pairs.
pub fn hiding_order(key: &StegoKey, m: usize, n: usize) -> Result<Vec<(usize, usize)>> {
    derive_material(key)?.hiding_order(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_values_give_identity() {
        assert_eq!(rank_permutation(&[1u32, 5, 9, 200]), vec![1, 2, 3, 4]);
    }

    #[test]
    fn reversed_values_give_reversal() {
        assert_eq!(
            rank_permutation(&[40u32, 30, 20, 10, 0]),
            vec![5, 4, 3, 2, 1]
        );
    }

    #[test]
    fn key_ascii_example() {
        // "KEY" -> 75, 69, 89
        let values: Vec<u8> = b"KEY".to_vec();
        assert_eq!(rank_permutation(&values), vec![2, 1, 3]);
    }

    #[test]
    fn ties_break_by_position() {
        assert_eq!(rank_permutation(&[7u8, 3, 7, 3]), vec![3, 1, 4, 2]);
    }

    #[test]
    fn expansion_length_and_prefix_stability() {
        let a = expand_seed(b"seed", 3).unwrap();
        let b = expand_seed(b"seed", 20).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(b.len(), 20);
        assert_eq!(&b[..3], &a[..]);
    }

    #[test]
    fn bad_arguments() {
        assert!(matches!(
            permutation_from_bytes(b"", 4),
            Err(Error::EmptyBytes)
        ));
        assert!(matches!(
            permutation_from_bytes(b"x", 0),
            Err(Error::ZeroLength)
        ));
    }

    #[test]
    fn unrolled_order() {
        let order = order_from_permutations(&[2, 1], &[3, 1, 2]);
        assert_eq!(order, vec![(2, 3), (2, 1), (2, 2), (1, 3), (1, 1), (1, 2)]);
    }

    #[test]
    fn single_cell_order() {
        let key = StegoKey::new(vec![1u8; 16]).unwrap();
        assert_eq!(hiding_order(&key, 1, 1).unwrap(), vec![(1, 1)]);
    }

    #[test]
    fn pinned_permutation() {
        // HMAC-SHA256 expansion is fully specified, so this holds on every platform
        let p = permutation_from_bytes(b"pinned-seed", 8).unwrap();
        assert_eq!(p, vec![2, 6, 3, 5, 1, 4, 8, 7]);
    }
}
