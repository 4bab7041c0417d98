//! Packed bit strings.
//!
//! Every register, hash seed, tag, and payload in this crate is a
//! [`BitString`]: a fixed-length sequence of bits indexed from 0. Index 0 is
//! the *first* bit of the string, which is also the most significant bit of
//! the hex form produced by [`BitString::to_hex`]. Bits are packed into `u64`
//! words so that inner products and equality checks stay word-parallel.

use std::fmt;

/// A fixed-length bit string, bit 0 first.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitString {
    /// All-zero string of the given length.
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = BitString::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    /// Parse from an ASCII string of '0'/'1' characters.
    pub fn from_bit_str(text: &str) -> Self {
        let mut s = BitString::zeros(text.len());
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => s.set(i, true),
                _ => panic!("bit string may only contain 0 and 1, got {ch:?}"),
            }
        }
        s
    }

    /// Interpret `value` as a big-endian `len`-bit string: bit 0 of the
    /// result is the most significant of the `len` low bits of `value`.
    pub fn from_value(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_value supports at most 64 bits");
        let mut s = BitString::zeros(len);
        for j in 0..len {
            s.set(j, (value >> (len - 1 - j)) & 1 == 1);
        }
        s
    }

    /// Inverse of [`BitString::from_value`]; only defined up to 64 bits.
    pub fn value(&self) -> u64 {
        assert!(self.len <= 64, "value() supports at most 64 bits");
        let mut v = 0u64;
        for j in 0..self.len {
            v = (v << 1) | self.get(j) as u64;
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i & 63);
        if v {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn swap_bits(&mut self, i: usize, j: usize) {
        let (a, b) = (self.get(i), self.get(j));
        self.set(i, b);
        self.set(j, a);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True when the first `k` bits are all zero.
    pub fn prefix_is_zero(&self, k: usize) -> bool {
        assert!(k <= self.len);
        let full = k >> 6;
        if self.words[..full].iter().any(|&w| w != 0) {
            return false;
        }
        let rem = k & 63;
        rem == 0 || self.words[full] & ((1u64 << rem) - 1) == 0
    }

    /// Zero the first `k` bits in place.
    pub fn clear_prefix(&mut self, k: usize) {
        assert!(k <= self.len);
        let full = k >> 6;
        for w in &mut self.words[..full] {
            *w = 0;
        }
        let rem = k & 63;
        if rem != 0 {
            self.words[full] &= !((1u64 << rem) - 1);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// XOR `other` into `self`; lengths must match.
    pub fn xor_in_place(&mut self, other: &BitString) {
        assert_eq!(self.len, other.len, "xor length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.xor_in_place(other);
        out
    }

    /// Concatenate two strings, `self` first.
    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = BitString::zeros(self.len + other.len);
        for i in 0..self.len {
            out.set(i, self.get(i));
        }
        for i in 0..other.len {
            out.set(self.len + i, other.get(i));
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitString {
        assert!(start + len <= self.len);
        let mut out = BitString::zeros(len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Parity of the inner product `⊕_j self[j] · other[offset + j]`.
    ///
    /// `other` must be long enough that `offset + self.len() <= other.len()`.
    /// This is the word-parallel kernel behind the Toeplitz hash.
    pub fn shifted_and_parity(&self, other: &BitString, offset: usize) -> bool {
        assert!(offset + self.len <= other.len, "offset window out of range");
        let nw = self.words.len();
        let q = offset >> 6;
        let r = offset & 63;
        let mut acc = 0u64;
        if r == 0 {
            for w in 0..nw {
                acc ^= self.words[w] & other.words[q + w];
            }
        } else {
            for w in 0..nw {
                let lo = other.words[q + w] >> r;
                let hi = other
                    .words
                    .get(q + w + 1)
                    .map_or(0, |&x| x << (64 - r));
                acc ^= self.words[w] & (lo | hi);
            }
        }
        // Trailing bits of self beyond len are zero by invariant, so no mask
        // beyond the AND with self is needed.
        acc.count_ones() & 1 == 1
    }

    /// Lowercase hex, most significant bit first: the string is read as a
    /// big-endian binary number and written with `ceil(len/4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut out = String::with_capacity(digits);
        // Leftmost digit may cover fewer than 4 bits.
        let lead = self.len - 4 * (digits.saturating_sub(1));
        let mut pos = 0usize;
        for d in 0..digits {
            let width = if d == 0 { lead } else { 4 };
            let mut v = 0u8;
            for _ in 0..width {
                v = (v << 1) | self.get(pos) as u8;
                pos += 1;
            }
            out.push(char::from_digit(v as u32, 16).unwrap());
        }
        out
    }

    /// Parse the [`BitString::to_hex`] form back into `len` bits.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self, String> {
        let digits = len.div_ceil(4);
        if hex.len() != digits {
            return Err(format!(
                "expected {digits} hex digits for {len} bits, got {}",
                hex.len()
            ));
        }
        let mut s = BitString::zeros(len);
        let lead = len - 4 * (digits.saturating_sub(1));
        let mut pos = 0usize;
        for (d, ch) in hex.chars().enumerate() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| format!("invalid hex digit {ch:?}"))? as u8;
            let width = if d == 0 { lead } else { 4 };
            if d == 0 && width < 4 && v >> width != 0 {
                return Err(format!("leading digit {ch:?} overflows {width} bits"));
            }
            for b in 0..width {
                s.set(pos, (v >> (width - 1 - b)) & 1 == 1);
                pos += 1;
            }
        }
        Ok(s)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Zero any bits beyond `len` in the last word. Callers that write raw
    /// words must restore this invariant before handing the string back.
    pub(crate) fn mask_tail(&mut self) {
        let rem = self.len & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 64 {
            write!(f, "BitString(")?;
            for b in self.iter() {
                write!(f, "{}", b as u8)?;
            }
            write!(f, ")")
        } else {
            write!(f, "BitString({} bits, {})", self.len, self.to_hex())
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_golden_values() {
        assert_eq!(BitString::from_bit_str("1011").to_hex(), "b");
        assert_eq!(BitString::from_bit_str("101101").to_hex(), "2d");
        assert_eq!(BitString::from_bit_str("0000").to_hex(), "0");
        assert_eq!(BitString::from_bit_str("1").to_hex(), "1");
        assert_eq!(BitString::zeros(12).to_hex(), "000");
    }

    #[test]
    fn from_value_round_trip() {
        for v in 0..64u64 {
            let s = BitString::from_value(v, 6);
            assert_eq!(s.value(), v);
        }
        assert_eq!(BitString::from_value(0b1011, 4).to_hex(), "b");
    }

    #[test]
    fn prefix_ops() {
        let mut s = BitString::from_bit_str("110111");
        assert!(!s.prefix_is_zero(1));
        s.clear_prefix(5);
        assert_eq!(s.to_hex(), BitString::from_bit_str("000001").to_hex());
        assert!(s.prefix_is_zero(5));
        assert!(!s.prefix_is_zero(6));
    }

    #[test]
    fn shifted_parity_matches_naive_across_word_boundaries() {
        // 70-bit window inside a 200-bit string exercises the funnel shift.
        let mut x = BitString::zeros(70);
        let mut y = BitString::zeros(200);
        let mut state = 0x12345u64;
        for i in 0..70 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            x.set(i, state >> 63 == 1);
        }
        for i in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            y.set(i, state >> 63 == 1);
        }
        for offset in 0..=(200 - 70) {
            let mut naive = false;
            for j in 0..70 {
                naive ^= x.get(j) & y.get(offset + j);
            }
            assert_eq!(x.shifted_and_parity(&y, offset), naive, "offset {offset}");
        }
    }

    proptest! {
        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let s = BitString::from_bools(&bits);
            let hex = s.to_hex();
            let back = BitString::from_hex(&hex, bits.len()).unwrap();
            prop_assert_eq!(s, back);
        }

        #[test]
        fn xor_is_involutive(a in proptest::collection::vec(any::<bool>(), 1..150),
                             bseed in any::<u64>()) {
            let x = BitString::from_bools(&a);
            let mut y = BitString::zeros(a.len());
            let mut st = bseed;
            for i in 0..a.len() {
                st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                y.set(i, st >> 63 == 1);
            }
            let z = x.xor(&y).xor(&y);
            prop_assert_eq!(x, z);
        }
    }
}
