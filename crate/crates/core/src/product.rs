//! Balanced divide-and-conquer products of naturals.
//!
//! Multiplying `m` numbers of `b` bits left to right repeatedly multiplies a
//! growing accumulator by a small factor. Splitting the list in halves keeps
//! the operands of each multiplication roughly the same size instead.

use num_bigint::BigUint;
use num_traits::One;

/// Product of `xs`; the empty product is 1.
///
/// The list is split at `ceil(len / 2)` until at most two factors remain.
pub fn product(xs: &[BigUint]) -> BigUint {
    match xs {
        [] => BigUint::one(),
        [x] => x.clone(),
        [x, y] => x * y,
        _ => {
            let (left, right) = xs.split_at(xs.len().div_ceil(2));
            product(left) * product(right)
        }
    }
}

/// Balanced product of machine-word factors.
pub fn product_u64(xs: &[u64]) -> BigUint {
    match xs {
        [] => BigUint::one(),
        [x] => BigUint::from(*x),
        [x, y] => BigUint::from(u128::from(*x) * u128::from(*y)),
        _ => {
            let (left, right) = xs.split_at(xs.len().div_ceil(2));
            product_u64(left) * product_u64(right)
        }
    }
}

/// Product of `xs` as a `u64` if it fits, otherwise `None`.
pub fn checked_product_u64(xs: &[u64]) -> Option<u64> {
    xs.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().copied().map(BigUint::from).collect()
    }

    fn fold(xs: &[BigUint]) -> BigUint {
        xs.iter().fold(BigUint::one(), |acc, x| acc * x)
    }

    #[test]
    fn small_examples() {
        assert_eq!(product(&[]), BigUint::one());
        assert_eq!(product(&big(&[2, 3, 5, 7])), BigUint::from(210u32));
        assert_eq!(product_u64(&[]), BigUint::one());
        assert_eq!(product_u64(&[2, 3, 5, 7]), BigUint::from(210u32));
        assert_eq!(product_u64(&[13]), BigUint::from(13u32));
    }

    #[test]
    fn thousand_twos_is_two_to_the_thousand() {
        // Square-and-multiply for 2^1000, independent of the product tree.
        let mut expected = BigUint::one();
        let mut base = BigUint::from(2u32);
        let mut e = 1000u32;
        while e > 0 {
            if e & 1 == 1 {
                expected *= &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        assert_eq!(product(&big(&[2; 1000])), expected);
        assert_eq!(product_u64(&[2; 1000]), expected);
        assert_eq!(expected.bits(), 1001);
    }

    #[test]
    fn checked_product() {
        assert_eq!(checked_product_u64(&[]), Some(1));
        assert_eq!(checked_product_u64(&[2, 3, 5]), Some(30));
        assert_eq!(checked_product_u64(&[1 << 40, 1 << 30]), None);
    }

    proptest! {
        #[test]
        fn matches_left_fold(xs in prop::collection::vec(1u64..u64::MAX, 0..300)) {
            let b = big(&xs);
            prop_assert_eq!(product(&b), fold(&b));
            prop_assert_eq!(product_u64(&xs), fold(&b));
        }

        #[test]
        fn splits_multiply(xs in prop::collection::vec(1u64..1 << 20, 0..60),
                           ys in prop::collection::vec(1u64..1 << 20, 0..60)) {
            let joined: Vec<u64> = xs.iter().chain(&ys).copied().collect();
            prop_assert_eq!(product_u64(&joined), product_u64(&xs) * product_u64(&ys));
        }

        #[test]
        fn order_does_not_matter(mut xs in prop::collection::vec(1u64..1000, 0..80), seed in any::<u64>()) {
            let before = product_u64(&xs);
            // Deterministic Fisher-Yates driven by the proptest seed.
            let mut state = seed | 1;
            for i in (1..xs.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                xs.swap(i, (state % (i as u64 + 1)) as usize);
            }
            prop_assert_eq!(product_u64(&xs), before);
        }
    }
}
