//! Two-universal hashing over GF(2).
//!
//! The family is Toeplitz: for an input of length `N` and a tag of length
//! `t`, the seed is a window of `N + t - 1` uniform bits and output bit `i`
//! is `⊕_j Y[i+j]·X[j]`. Any two distinct inputs collide on exactly a
//! `2^-t` fraction of seeds, with no length factor, and the map is linear in
//! the input.

use crate::bits::BitString;
use crate::resource::ResourceError;

/// Seed for one hash evaluation; exactly `N + t - 1` bits for declared
/// `(N, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashSeed {
    bits: BitString,
}

impl HashSeed {
    pub fn new(bits: BitString, n: usize, t: usize) -> Result<Self, ResourceError> {
        let expected = seed_length(n, t);
        if bits.len() != expected {
            return Err(ResourceError::SeedLengthMismatch {
                expected,
                got: bits.len(),
            });
        }
        Ok(HashSeed { bits })
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }
}

/// A `t`-bit authentication tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HashTag {
    bits: BitString,
}

impl HashTag {
    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Seed bits consumed for input length `n` and tag length `t`.
pub fn seed_length(n: usize, t: usize) -> usize {
    assert!(n >= 1 && t >= 1, "seed_length requires n >= 1 and t >= 1");
    n + t - 1
}

/// Toeplitz hash: `out[i] = ⊕_j seed[i+j] · input[j]` for `i` in `[0, t)`.
pub fn toeplitz_hash(
    input: &BitString,
    seed: &HashSeed,
    t: usize,
) -> Result<HashTag, ResourceError> {
    let n = input.len();
    let expected = seed_length(n, t);
    if seed.bits.len() != expected {
        return Err(ResourceError::SeedLengthMismatch {
            expected,
            got: seed.bits.len(),
        });
    }
    let mut out = BitString::zeros(t);
    for i in 0..t {
        out.set(i, input.shifted_and_parity(&seed.bits, i));
    }
    Ok(HashTag { bits: out })
}

/// Hash with a raw seed register, consuming its first `n + t - 1` bits.
/// Longer registers are fine; only the window is read.
pub fn hash_with_register_seed(
    input: &BitString,
    seed_register: &BitString,
    t: usize,
) -> Result<HashTag, ResourceError> {
    let needed = seed_length(input.len(), t);
    if seed_register.len() < needed {
        return Err(ResourceError::SeedLengthMismatch {
            expected: needed,
            got: seed_register.len(),
        });
    }
    let window = if seed_register.len() == needed {
        seed_register.clone()
    } else {
        seed_register.slice(0, needed)
    };
    toeplitz_hash(input, &HashSeed { bits: window }, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamRng;
    use proptest::prelude::*;

    /// Independent oracle: build the Toeplitz matrix row by row and do the
    /// matrix-vector product with explicit bit loops.
    fn naive_toeplitz(input: &BitString, seed: &BitString, t: usize) -> BitString {
        let n = input.len();
        assert_eq!(seed.len(), n + t - 1);
        let mut out = BitString::zeros(t);
        for i in 0..t {
            let mut acc = false;
            for j in 0..n {
                acc ^= seed.get(i + j) & input.get(j);
            }
            out.set(i, acc);
        }
        out
    }

    #[test]
    fn worked_example_n3_t2() {
        // N=3, t=2, Y=1010, X=110 -> tag 11.
        let seed = HashSeed::new(BitString::from_bit_str("1010"), 3, 2).unwrap();
        let tag = toeplitz_hash(&BitString::from_bit_str("110"), &seed, 2).unwrap();
        assert_eq!(tag.bits(), &BitString::from_bit_str("11"));
    }

    #[test]
    fn zero_input_hashes_to_zero() {
        let mut rng = StreamRng::from_seed(5);
        for _ in 0..20 {
            let seed = HashSeed::new(rng.bits(12), 8, 5).unwrap();
            let tag = toeplitz_hash(&BitString::zeros(8), &seed, 5).unwrap();
            assert!(tag.bits().is_zero());
        }
    }

    #[test]
    fn seed_lengths() {
        assert_eq!(seed_length(4, 1), 4);
        assert_eq!(seed_length(3, 2), 4);
        assert_eq!(seed_length(1024, 64), 1087);
    }

    #[test]
    fn wrong_seed_length_rejected() {
        let r = HashSeed::new(BitString::zeros(5), 3, 2);
        assert!(matches!(r, Err(ResourceError::SeedLengthMismatch { .. })));
    }

    #[test]
    fn exhaustive_universality_n6_t3() {
        // For every pair of distinct 6-bit inputs, exactly 2^-3 of the 2^8
        // seeds collide.
        let n = 6;
        let t = 3;
        let seeds: Vec<HashSeed> = (0..256u64)
            .map(|v| HashSeed::new(BitString::from_value(v, 8), n, t).unwrap())
            .collect();
        for x in 0..64u64 {
            for y in (x + 1)..64 {
                let bx = BitString::from_value(x, n);
                let by = BitString::from_value(y, n);
                let collisions = seeds
                    .iter()
                    .filter(|s| {
                        toeplitz_hash(&bx, s, t).unwrap() == toeplitz_hash(&by, s, t).unwrap()
                    })
                    .count();
                assert_eq!(collisions, 256 / 8, "pair ({x},{y})");
            }
        }
    }

    proptest! {
        #[test]
        fn matches_matrix_vector_oracle(
            n in 1usize..40,
            t in 1usize..12,
            seed_val in any::<u64>(),
        ) {
            let mut rng = StreamRng::from_seed(seed_val);
            let input = rng.bits(n);
            let seed_bits = rng.bits(n + t - 1);
            let seed = HashSeed::new(seed_bits.clone(), n, t).unwrap();
            let fast = toeplitz_hash(&input, &seed, t).unwrap();
            prop_assert_eq!(fast.bits(), &naive_toeplitz(&input, &seed_bits, t));
        }

        #[test]
        fn hash_is_linear_in_the_input(
            n in 1usize..32,
            t in 1usize..8,
            seed_val in any::<u64>(),
        ) {
            let mut rng = StreamRng::from_seed(seed_val);
            let x1 = rng.bits(n);
            let x2 = rng.bits(n);
            let seed = HashSeed::new(rng.bits(n + t - 1), n, t).unwrap();
            let lhs = toeplitz_hash(&x1.xor(&x2), &seed, t).unwrap();
            let rhs = toeplitz_hash(&x1, &seed, t)
                .unwrap()
                .bits()
                .xor(toeplitz_hash(&x2, &seed, t).unwrap().bits());
            prop_assert_eq!(lhs.bits(), &rhs);
        }
    }
}
