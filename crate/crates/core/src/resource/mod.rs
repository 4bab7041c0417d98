//! Registers, free-energy ledgers, and the world they live in.
//!
//! Every protocol in this crate is built from the operations on [`World`],
//! so cost accounting is enforced by construction: reversible operations are
//! free, erasure debits the ledger bit-for-bit, and blank (guaranteed-zero)
//! bits are the only thing extraction will pay out for.

mod reversible;
pub mod support;
mod transcript;

pub use reversible::{Gate, ReversiblePermutation, EXPLICIT_TABLE_WIDTH_CAP};
pub use support::{max_entropy, JointSupport, SUPPORT_WIDTH_CAP};
pub use transcript::{ObservableEvent, Transcript, TranscriptEvent};

use crate::bits::BitString;
use crate::rng::PurposeStream;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResourceError {
    #[error("register length must be at least 1")]
    InvalidLength,
    #[error("unknown party {0}")]
    UnknownParty(PartyId),
    #[error("unknown register {0}")]
    UnknownRegister(RegisterId),
    #[error("party {party} does not own register {register}")]
    NotOwner { register: RegisterId, party: PartyId },
    #[error("register {0} is already owned")]
    AlreadyOwned(RegisterId),
    #[error("free-energy budget exhausted: need {needed}, have {available}")]
    BudgetExhausted { needed: u64, available: u64 },
    #[error("extraction requires provenance-guaranteed blank bits")]
    IllegalExtraction,
    #[error("prefix length {k} exceeds register length {n}")]
    PrefixOutOfRange { k: usize, n: usize },
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("the same register may appear only once in an operand list")]
    AliasedRegisters,
    #[error("destination of a copy must be provenance-blank")]
    RefusedCopy,
    #[error("length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("shares do not satisfy their constraint")]
    CombineMismatch,
    #[error("tell cap exceeded: cap {cap}, attempted total {attempted}")]
    TellCapExceeded { cap: usize, attempted: usize },
    #[error("workspace cap exceeded: cap {cap}, attempted {attempted}")]
    WorkspaceExceeded { cap: usize, attempted: usize },
    #[error("explicit table is not a bijection")]
    NotABijection,
    #[error("explicit table width {width} exceeds cap {cap}")]
    TableTooWide { width: usize, cap: usize },
    #[error("gate index out of range for width {width}")]
    GateOutOfRange { width: usize },
    #[error("support width {width} exceeds cap {cap}")]
    SupportTooWide { width: usize, cap: usize },
    #[error("empty support has no max-entropy")]
    EmptySupport,
    #[error("adversary memory cap exceeded: stored {stored}, cap {cap}")]
    CapExceeded { stored: usize, cap: usize },
    #[error("hash seed length mismatch: expected {expected}, got {got}")]
    SeedLengthMismatch { expected: usize, got: usize },
    #[error("sample position {position} out of range for register length {n}")]
    PositionOutOfRange { position: usize, n: usize },
}

/// Identifier of a party in a run.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PartyId(String);

impl PartyId {
    pub fn new(name: &str) -> Self {
        PartyId(name.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartyId({})", self.0)
    }
}

impl From<&str> for PartyId {
    fn from(s: &str) -> Self {
        PartyId::new(s)
    }
}

/// Identifier of a register; allocation order within one world.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RegisterId(u64);

impl fmt::Display for RegisterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

impl fmt::Debug for RegisterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RegisterId({})", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    MixedFresh,
    Derived,
    Blank,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Owner {
    Environment,
    Party(PartyId),
}

/// A large addressable register. Its bits float in the environment; what the
/// model tracks beyond the raw bits is which positions are still
/// *guaranteed* zero (paid-for blanks) and who currently holds it.
#[derive(Clone, Debug)]
pub struct BitRegister {
    id: RegisterId,
    bits: BitString,
    blank: Vec<bool>,
    touched: bool,
    owner: Owner,
}

impl BitRegister {
    pub fn id(&self) -> RegisterId {
        self.id
    }

    pub fn n_bits(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn owner(&self) -> &Owner {
        &self.owner
    }

    pub fn blank_count(&self) -> usize {
        self.blank.iter().filter(|&&b| b).count()
    }

    pub fn blank_prefix_len(&self) -> usize {
        self.blank.iter().take_while(|&&b| b).count()
    }

    pub fn provenance(&self) -> Provenance {
        if self.blank.iter().all(|&b| b) {
            Provenance::Blank
        } else if self.touched {
            Provenance::Derived
        } else {
            Provenance::MixedFresh
        }
    }

    /// JSON envelope for register serialization.
    pub fn envelope(&self) -> RegisterEnvelope {
        RegisterEnvelope {
            id: self.id.0,
            n_bits: self.n_bits(),
            provenance: self.provenance(),
            hex: self.bits.to_hex(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegisterEnvelope {
    pub id: u64,
    pub n_bits: usize,
    pub provenance: Provenance,
    pub hex: String,
}

/// Per-party budget of erasure units (one unit = one blank bit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeEnergyLedger {
    initial_budget: u64,
    spent: u64,
    extracted: u64,
}

impl FreeEnergyLedger {
    pub fn new(initial_budget: u64) -> Self {
        FreeEnergyLedger {
            initial_budget,
            spent: 0,
            extracted: 0,
        }
    }

    pub fn initial_budget(&self) -> u64 {
        self.initial_budget
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn extracted(&self) -> u64 {
        self.extracted
    }

    pub fn available(&self) -> u64 {
        self.initial_budget + self.extracted - self.spent
    }

    fn charge(&mut self, k: u64) -> Result<(), ResourceError> {
        let available = self.available();
        if k > available {
            return Err(ResourceError::BudgetExhausted {
                needed: k,
                available,
            });
        }
        self.spent += k;
        Ok(())
    }

    fn credit(&mut self, k: u64) {
        self.extracted += k;
    }

    /// spent <= initial_budget + extracted, with both monotone. `charge` is
    /// the only mutation that can break this, and it checks first.
    pub fn conserved(&self) -> bool {
        self.spent <= self.initial_budget + self.extracted
    }
}

#[derive(Clone, Debug)]
pub struct Party {
    id: PartyId,
    ledger: FreeEnergyLedger,
    registers: BTreeSet<RegisterId>,
    workspace_used: usize,
    workspace_cap: usize,
}

impl Party {
    pub fn id(&self) -> &PartyId {
        &self.id
    }

    pub fn ledger(&self) -> &FreeEnergyLedger {
        &self.ledger
    }

    pub fn registers(&self) -> &BTreeSet<RegisterId> {
        &self.registers
    }

    pub fn workspace_used(&self) -> usize {
        self.workspace_used
    }

    pub fn workspace_cap(&self) -> usize {
        self.workspace_cap
    }
}

/// Default caps for the bounded classical resources; the honest parties'
/// workspace constant is a config knob, not a protocol value.
pub const DEFAULT_TELL_CAP: usize = 1 << 16;
pub const DEFAULT_WORKSPACE_CAP: usize = 1 << 16;

/// All mutable state of one protocol run.
pub struct World {
    registers: BTreeMap<RegisterId, BitRegister>,
    parties: BTreeMap<PartyId, Party>,
    transcript: Transcript,
    next_register: u64,
}

impl World {
    pub fn new(tell_cap: usize) -> Self {
        World {
            registers: BTreeMap::new(),
            parties: BTreeMap::new(),
            transcript: Transcript::new(tell_cap),
            next_register: 0,
        }
    }

    pub fn add_party(&mut self, name: &str, budget: u64, workspace_cap: usize) -> PartyId {
        let id = PartyId::new(name);
        self.parties.insert(
            id.clone(),
            Party {
                id: id.clone(),
                ledger: FreeEnergyLedger::new(budget),
                registers: BTreeSet::new(),
                workspace_used: 0,
                workspace_cap,
            },
        );
        id
    }

    pub fn party(&self, id: &PartyId) -> Result<&Party, ResourceError> {
        self.parties
            .get(id)
            .ok_or_else(|| ResourceError::UnknownParty(id.clone()))
    }

    fn party_mut(&mut self, id: &PartyId) -> Result<&mut Party, ResourceError> {
        self.parties
            .get_mut(id)
            .ok_or_else(|| ResourceError::UnknownParty(id.clone()))
    }

    pub fn register(&self, id: RegisterId) -> Result<&BitRegister, ResourceError> {
        self.registers
            .get(&id)
            .ok_or(ResourceError::UnknownRegister(id))
    }

    fn register_mut(&mut self, id: RegisterId) -> Result<&mut BitRegister, ResourceError> {
        self.registers
            .get_mut(&id)
            .ok_or(ResourceError::UnknownRegister(id))
    }

    fn check_owner(&self, party: &PartyId, reg: RegisterId) -> Result<(), ResourceError> {
        let r = self.register(reg)?;
        match &r.owner {
            Owner::Party(p) if p == party => Ok(()),
            _ => Err(ResourceError::NotOwner {
                register: reg,
                party: party.clone(),
            }),
        }
    }

    /// Draw a fresh uniformly mixed register from the environment. Free; the
    /// environment owns it until a party claims it.
    pub fn new_mixed_register(
        &mut self,
        n: usize,
        entropy: &mut PurposeStream,
    ) -> Result<RegisterId, ResourceError> {
        if n == 0 {
            return Err(ResourceError::InvalidLength);
        }
        let id = RegisterId(self.next_register);
        self.next_register += 1;
        self.registers.insert(
            id,
            BitRegister {
                id,
                bits: entropy.draw_bits(n),
                blank: vec![false; n],
                touched: false,
                owner: Owner::Environment,
            },
        );
        Ok(id)
    }

    pub fn claim(&mut self, party: &PartyId, reg: RegisterId) -> Result<(), ResourceError> {
        self.party(party)?;
        let r = self.register_mut(reg)?;
        if r.owner != Owner::Environment {
            return Err(ResourceError::AlreadyOwned(reg));
        }
        r.owner = Owner::Party(party.clone());
        self.party_mut(party)?.registers.insert(reg);
        Ok(())
    }

    /// Convenience: fresh mixed register claimed by `party`.
    pub fn create_mixed_for(
        &mut self,
        party: &PartyId,
        n: usize,
        entropy: &mut PurposeStream,
    ) -> Result<RegisterId, ResourceError> {
        let id = self.new_mixed_register(n, entropy)?;
        self.claim(party, id)?;
        Ok(id)
    }

    /// Erase the first `k` bits: they become guaranteed zero and the ledger
    /// is debited `k` units. Cost is charged on length, not content — the
    /// eraser does not get to inspect-and-skip.
    pub fn erase(
        &mut self,
        party: &PartyId,
        reg: RegisterId,
        k: usize,
    ) -> Result<(), ResourceError> {
        self.check_owner(party, reg)?;
        let n = self.register(reg)?.n_bits();
        if k > n {
            return Err(ResourceError::PrefixOutOfRange { k, n });
        }
        self.party_mut(party)?.ledger.charge(k as u64)?;
        let r = self.register_mut(reg)?;
        r.bits.clear_prefix(k);
        for b in &mut r.blank[..k] {
            *b = true;
        }
        r.touched = true;
        Ok(())
    }

    /// Consume `k` guaranteed-zero bits as free energy: the ledger is
    /// credited and the bits return to the environment's thermal state.
    pub fn extract(
        &mut self,
        party: &PartyId,
        reg: RegisterId,
        k: usize,
        entropy: &mut PurposeStream,
    ) -> Result<(), ResourceError> {
        self.check_owner(party, reg)?;
        let n = self.register(reg)?.n_bits();
        if k > n {
            return Err(ResourceError::PrefixOutOfRange { k, n });
        }
        if !self.register(reg)?.blank[..k].iter().all(|&b| b) {
            return Err(ResourceError::IllegalExtraction);
        }
        self.party_mut(party)?.ledger.credit(k as u64);
        let fresh = entropy.draw_bits(k);
        let r = self.register_mut(reg)?;
        for i in 0..k {
            r.bits.set(i, fresh.get(i));
            r.blank[i] = false;
        }
        r.touched = true;
        Ok(())
    }

    /// Apply a reversible permutation across the concatenation of the listed
    /// registers. Free. Blank guarantees survive only where the gate-level
    /// analysis can prove them.
    pub fn apply_reversible(
        &mut self,
        party: &PartyId,
        perm: &ReversiblePermutation,
        regs: &[RegisterId],
    ) -> Result<(), ResourceError> {
        let mut seen = BTreeSet::new();
        for &r in regs {
            self.check_owner(party, r)?;
            if !seen.insert(r) {
                return Err(ResourceError::AliasedRegisters);
            }
        }
        let total: usize = regs
            .iter()
            .map(|&r| self.register(r).map(|x| x.n_bits()))
            .collect::<Result<Vec<_>, _>>()?
            .iter()
            .sum();
        if total != perm.width() {
            return Err(ResourceError::WidthMismatch {
                expected: perm.width(),
                got: total,
            });
        }
        let mut bits = BitString::zeros(0);
        let mut blank = Vec::with_capacity(total);
        for &rid in regs {
            let r = self.register(rid)?;
            bits = bits.concat(&r.bits);
            blank.extend_from_slice(&r.blank);
        }
        perm.apply_with_blanks(&mut bits, &mut blank);
        let mut offset = 0;
        for &rid in regs {
            let n = self.register(rid)?.n_bits();
            let r = self.register_mut(rid)?;
            r.bits = bits.slice(offset, n);
            r.blank.copy_from_slice(&blank[offset..offset + n]);
            r.touched = true;
            offset += n;
        }
        Ok(())
    }

    /// Fan `src` into an all-blank `dst` of the same length (bitwise CNOT
    /// layer). Free: the cost of a copy is the prior erasure of `dst`.
    pub fn copy_into_blank(
        &mut self,
        party: &PartyId,
        src: RegisterId,
        dst: RegisterId,
    ) -> Result<(), ResourceError> {
        self.check_owner(party, src)?;
        self.check_owner(party, dst)?;
        if src == dst {
            return Err(ResourceError::AliasedRegisters);
        }
        let (src_bits, src_blank) = {
            let s = self.register(src)?;
            (s.bits.clone(), s.blank.clone())
        };
        let d = self.register(dst)?;
        if d.n_bits() != src_bits.len() {
            return Err(ResourceError::LengthMismatch {
                a: src_bits.len(),
                b: d.n_bits(),
            });
        }
        if d.provenance() != Provenance::Blank {
            return Err(ResourceError::RefusedCopy);
        }
        let d = self.register_mut(dst)?;
        d.bits = src_bits;
        d.blank = src_blank; // a CNOT target stays blank only under a blank control
        d.touched = true;
        Ok(())
    }

    /// XOR `src` into `dst` (bitwise CNOT layer, `src` as controls). Free.
    pub fn xor_into(
        &mut self,
        party: &PartyId,
        src: RegisterId,
        dst: RegisterId,
    ) -> Result<(), ResourceError> {
        self.check_owner(party, src)?;
        self.check_owner(party, dst)?;
        if src == dst {
            return Err(ResourceError::AliasedRegisters);
        }
        let (src_bits, src_blank) = {
            let s = self.register(src)?;
            (s.bits.clone(), s.blank.clone())
        };
        let d = self.register(dst)?;
        if d.n_bits() != src_bits.len() {
            return Err(ResourceError::LengthMismatch {
                a: src_bits.len(),
                b: d.n_bits(),
            });
        }
        let d = self.register_mut(dst)?;
        d.bits.xor_in_place(&src_bits);
        for (b, s) in d.blank.iter_mut().zip(&src_blank) {
            *b = *b && *s;
        }
        d.touched = true;
        Ok(())
    }

    /// Certify a register whose contents are verifiably all-zero as blank.
    ///
    /// This is the compression step `X̂_AB → π_A ⊗ |0⟩^N`: after reversible
    /// logic has provably zeroed the register (e.g. XOR of two identical
    /// shares), its bits are known-zero and convertible to free energy.
    /// A nonzero residue means the shares were tampered with.
    pub fn compress_zero(
        &mut self,
        party: &PartyId,
        reg: RegisterId,
    ) -> Result<(), ResourceError> {
        self.check_owner(party, reg)?;
        let r = self.register_mut(reg)?;
        if !r.bits.is_zero() {
            return Err(ResourceError::CombineMismatch);
        }
        r.blank.fill(true);
        r.touched = true;
        Ok(())
    }

    /// Bounded classical communication; the payload counts against the run's
    /// tell cap and the receiver's workspace.
    pub fn tell(
        &mut self,
        from: &PartyId,
        to: &PartyId,
        payload: BitString,
    ) -> Result<(), ResourceError> {
        self.party(from)?;
        let receiver = self.party(to)?;
        let attempted = receiver.workspace_used + payload.len();
        if attempted > receiver.workspace_cap {
            return Err(ResourceError::WorkspaceExceeded {
                cap: receiver.workspace_cap,
                attempted,
            });
        }
        self.transcript
            .push_tell(from.clone(), to.clone(), payload.clone())?;
        self.party_mut(to)?.workspace_used = attempted;
        Ok(())
    }

    /// Move a register to another party. The sender retains no copy: its
    /// ownership is revoked atomically with the transfer.
    pub fn send(
        &mut self,
        from: &PartyId,
        to: &PartyId,
        reg: RegisterId,
    ) -> Result<(), ResourceError> {
        self.check_owner(from, reg)?;
        self.party(to)?;
        let snapshot = self.register(reg)?.bits.clone();
        self.party_mut(from)?.registers.remove(&reg);
        self.party_mut(to)?.registers.insert(reg);
        self.register_mut(reg)?.owner = Owner::Party(to.clone());
        self.transcript
            .push_send(from.clone(), to.clone(), reg, snapshot);
        Ok(())
    }

    /// Read a register's bits; only the current owner may look.
    pub fn read_bits(
        &self,
        party: &PartyId,
        reg: RegisterId,
    ) -> Result<&BitString, ResourceError> {
        self.check_owner(party, reg)?;
        Ok(&self.register(reg)?.bits)
    }

    pub fn use_workspace(&mut self, party: &PartyId, bits: usize) -> Result<(), ResourceError> {
        let p = self.party_mut(party)?;
        let attempted = p.workspace_used + bits;
        if attempted > p.workspace_cap {
            return Err(ResourceError::WorkspaceExceeded {
                cap: p.workspace_cap,
                attempted,
            });
        }
        p.workspace_used = attempted;
        Ok(())
    }

    pub fn release_workspace(&mut self, party: &PartyId, bits: usize) -> Result<(), ResourceError> {
        let p = self.party_mut(party)?;
        p.workspace_used = p.workspace_used.saturating_sub(bits);
        Ok(())
    }

    /// Φ(party) = available energy + owned blank bits. Reversible operations
    /// never increase it; erase and extract trade its two terms one-for-one.
    pub fn potential(&self, party: &PartyId) -> Result<i128, ResourceError> {
        let p = self.party(party)?;
        let energy = p.ledger.available() as i128;
        let blanks: i128 = p
            .registers
            .iter()
            .map(|r| self.registers[r].blank_count() as i128)
            .sum();
        Ok(energy + blanks)
    }

    /// Ledger conservation across all parties.
    pub fn conservation_holds(&self) -> bool {
        self.parties.values().all(|p| p.ledger.conserved())
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn ledgers(&self) -> BTreeMap<PartyId, FreeEnergyLedger> {
        self.parties
            .iter()
            .map(|(id, p)| (id.clone(), p.ledger.clone()))
            .collect()
    }
}
