//! Reversible operations on bit registers.
//!
//! Players may apply any bijection to their registers for free; what they
//! cannot do for free is erase. A permutation is either a list of classical
//! reversible gates or, at small widths, an explicit lookup table over all
//! `2^width` inputs.

use super::ResourceError;
use crate::bits::BitString;
use crate::rng::StreamRng;

/// Widest permutation an explicit table may represent (`2^20` entries).
pub const EXPLICIT_TABLE_WIDTH_CAP: usize = 20;

/// Classical reversible gates; each is its own inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Not(usize),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
}

impl Gate {
    fn max_index(&self) -> usize {
        match *self {
            Gate::Not(i) => i,
            Gate::Cnot { control, target } => control.max(target),
            Gate::Swap(i, j) => i.max(j),
        }
    }

    fn is_well_formed(&self) -> bool {
        match *self {
            Gate::Not(_) => true,
            Gate::Cnot { control, target } => control != target,
            Gate::Swap(i, j) => i != j,
        }
    }

    #[inline]
    fn apply(&self, bits: &mut BitString) {
        match *self {
            Gate::Not(i) => bits.flip(i),
            Gate::Cnot { control, target } => {
                if bits.get(control) {
                    bits.flip(target);
                }
            }
            Gate::Swap(i, j) => bits.swap_bits(i, j),
        }
    }

    /// Track which positions are still guaranteed-zero. A target keeps its
    /// guarantee only when every source feeding it is itself guaranteed-zero;
    /// this never over-credits.
    #[inline]
    fn apply_blank(&self, blank: &mut [bool]) {
        match *self {
            Gate::Not(i) => blank[i] = false,
            Gate::Cnot { control, target } => {
                if !blank[control] {
                    blank[target] = false;
                }
            }
            Gate::Swap(i, j) => blank.swap(i, j),
        }
    }
}

/// A bijection on `{0,1}^width`.
#[derive(Clone, Debug)]
pub enum ReversiblePermutation {
    GateList { width: usize, gates: Vec<Gate> },
    ExplicitTable { width: usize, table: Vec<u32> },
}

impl ReversiblePermutation {
    pub fn gate_list(width: usize, gates: Vec<Gate>) -> Result<Self, ResourceError> {
        if width == 0 {
            return Err(ResourceError::InvalidLength);
        }
        for g in &gates {
            if !g.is_well_formed() || g.max_index() >= width {
                return Err(ResourceError::GateOutOfRange { width });
            }
        }
        Ok(ReversiblePermutation::GateList { width, gates })
    }

    /// Build from an explicit table; checks that it is a bijection.
    pub fn explicit_table(table: Vec<u32>) -> Result<Self, ResourceError> {
        let n = table.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(ResourceError::NotABijection);
        }
        let width = n.trailing_zeros() as usize;
        if width > EXPLICIT_TABLE_WIDTH_CAP {
            return Err(ResourceError::TableTooWide {
                width,
                cap: EXPLICIT_TABLE_WIDTH_CAP,
            });
        }
        let mut seen = vec![false; n];
        for &v in &table {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(ResourceError::NotABijection);
            }
            seen[v] = true;
        }
        Ok(ReversiblePermutation::ExplicitTable { width, table })
    }

    pub fn identity_table(width: usize) -> Result<Self, ResourceError> {
        if width > EXPLICIT_TABLE_WIDTH_CAP {
            return Err(ResourceError::TableTooWide {
                width,
                cap: EXPLICIT_TABLE_WIDTH_CAP,
            });
        }
        Self::explicit_table((0..1u32 << width).collect())
    }

    /// Uniformly random permutation of `{0,1}^width` (Fisher-Yates).
    pub fn random_table(width: usize, rng: &mut StreamRng) -> Result<Self, ResourceError> {
        if width > EXPLICIT_TABLE_WIDTH_CAP {
            return Err(ResourceError::TableTooWide {
                width,
                cap: EXPLICIT_TABLE_WIDTH_CAP,
            });
        }
        let n = 1usize << width;
        let mut table: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(i as u64 + 1) as usize;
            table.swap(i, j);
        }
        Ok(ReversiblePermutation::ExplicitTable { width, table })
    }

    pub fn width(&self) -> usize {
        match self {
            ReversiblePermutation::GateList { width, .. } => *width,
            ReversiblePermutation::ExplicitTable { width, .. } => *width,
        }
    }

    /// Apply in place to a bit string of exactly `width` bits.
    pub fn apply(&self, bits: &mut BitString) {
        assert_eq!(bits.len(), self.width(), "permutation width mismatch");
        match self {
            ReversiblePermutation::GateList { gates, .. } => {
                for g in gates {
                    g.apply(bits);
                }
            }
            ReversiblePermutation::ExplicitTable { width, table } => {
                let v = bits.value() as usize;
                *bits = BitString::from_value(table[v] as u64, *width);
            }
        }
    }

    /// Apply while tracking guaranteed-zero positions. Explicit tables are
    /// opaque, so they drop every guarantee.
    pub fn apply_with_blanks(&self, bits: &mut BitString, blank: &mut [bool]) {
        assert_eq!(blank.len(), self.width());
        match self {
            ReversiblePermutation::GateList { gates, .. } => {
                for g in gates {
                    g.apply(bits);
                    g.apply_blank(blank);
                }
            }
            ReversiblePermutation::ExplicitTable { .. } => {
                self.apply(bits);
                blank.fill(false);
            }
        }
    }

    pub fn inverse(&self) -> ReversiblePermutation {
        match self {
            ReversiblePermutation::GateList { width, gates } => {
                ReversiblePermutation::GateList {
                    width: *width,
                    gates: gates.iter().rev().copied().collect(),
                }
            }
            ReversiblePermutation::ExplicitTable { width, table } => {
                let mut inv = vec![0u32; table.len()];
                for (i, &v) in table.iter().enumerate() {
                    inv[v as usize] = i as u32;
                }
                ReversiblePermutation::ExplicitTable {
                    width: *width,
                    table: inv,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cnot_semantics() {
        // CNOT(c=0, t=1) on 10 -> 11
        let mut bits = BitString::from_bit_str("10");
        Gate::Cnot {
            control: 0,
            target: 1,
        }
        .apply(&mut bits);
        assert_eq!(bits, BitString::from_bit_str("11"));
    }

    #[test]
    fn identity_table_is_noop() {
        let id = ReversiblePermutation::identity_table(4).unwrap();
        for v in 0..16u64 {
            let mut bits = BitString::from_value(v, 4);
            id.apply(&mut bits);
            assert_eq!(bits.value(), v);
        }
    }

    #[test]
    fn non_bijection_rejected() {
        assert!(matches!(
            ReversiblePermutation::explicit_table(vec![0, 0]),
            Err(ResourceError::NotABijection)
        ));
        assert!(matches!(
            ReversiblePermutation::explicit_table(vec![0, 1, 2]),
            Err(ResourceError::NotABijection)
        ));
    }

    #[test]
    fn random_table_composes_with_inverse() {
        let mut rng = StreamRng::from_seed(11);
        let p = ReversiblePermutation::random_table(8, &mut rng).unwrap();
        let inv = p.inverse();
        for v in 0..256u64 {
            let mut bits = BitString::from_value(v, 8);
            p.apply(&mut bits);
            inv.apply(&mut bits);
            assert_eq!(bits.value(), v);
        }
    }

    #[test]
    fn blank_tracking_is_sound() {
        // CNOT with a blank control leaves the target's guarantee intact;
        // a mixed control destroys it; NOT always destroys it.
        let mut blank = vec![true, true, false];
        Gate::Cnot {
            control: 0,
            target: 1,
        }
        .apply_blank(&mut blank);
        assert_eq!(blank, vec![true, true, false]);
        Gate::Cnot {
            control: 2,
            target: 1,
        }
        .apply_blank(&mut blank);
        assert_eq!(blank, vec![true, false, false]);
        Gate::Not(0).apply_blank(&mut blank);
        assert_eq!(blank, vec![false, false, false]);
    }

    fn arb_gate(width: usize) -> impl Strategy<Value = Gate> {
        prop_oneof![
            (0..width).prop_map(Gate::Not),
            (0..width, 0..width)
                .prop_filter("distinct", |(c, t)| c != t)
                .prop_map(|(c, t)| Gate::Cnot {
                    control: c,
                    target: t
                }),
            (0..width, 0..width)
                .prop_filter("distinct", |(i, j)| i != j)
                .prop_map(|(i, j)| Gate::Swap(i, j)),
        ]
    }

    proptest! {
        #[test]
        fn gate_list_then_reverse_restores_input(
            gates in proptest::collection::vec(arb_gate(6), 0..24),
            input in 0u64..64,
        ) {
            let p = ReversiblePermutation::gate_list(6, gates).unwrap();
            let mut bits = BitString::from_value(input, 6);
            p.apply(&mut bits);
            p.inverse().apply(&mut bits);
            prop_assert_eq!(bits.value(), input);
        }

        #[test]
        fn blank_positions_really_hold_zero(
            gates in proptest::collection::vec(arb_gate(6), 0..24),
            mixed in 0u64..8,
        ) {
            // First 3 bits blank (zero), last 3 mixed. Wherever the tracker
            // still claims a guarantee after the circuit, the bit is zero.
            let p = ReversiblePermutation::gate_list(6, gates).unwrap();
            let mut bits = BitString::from_value(mixed, 6); // top 3 bits zero
            let mut blank = vec![true, true, true, false, false, false];
            p.apply_with_blanks(&mut bits, &mut blank);
            for (i, &claimed) in blank.iter().enumerate() {
                if claimed {
                    prop_assert!(!bits.get(i), "claimed-blank bit {i} was 1");
                }
            }
        }
    }
}
