//! Ordered record of everything the parties exchanged.
//!
//! Two communication modes exist. A *tell* is bounded classical information
//! that can be copied; total told bits are capped per run. A *send* moves a
//! whole register to the receiver; the sender keeps no copy, which the world
//! enforces by transferring ownership.

use super::{PartyId, RegisterId};
use crate::bits::BitString;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TranscriptEvent {
    Tell {
        from: PartyId,
        to: PartyId,
        payload: BitString,
    },
    Send {
        from: PartyId,
        to: PartyId,
        register: RegisterId,
        /// Register contents at the moment of transfer — the receiver's view.
        snapshot: BitString,
    },
}

/// What an outside observer (or the receiver) sees of an event. Register
/// identifiers are allocation bookkeeping and are projected out, so runs
/// that allocate in different orders can still be compared.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObservableEvent {
    Tell {
        from: String,
        to: String,
        payload: BitString,
    },
    Send {
        from: String,
        to: String,
        n_bits: usize,
        contents: BitString,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    events: Vec<TranscriptEvent>,
    tell_bits_total: usize,
    tell_cap: usize,
}

impl Transcript {
    pub fn new(tell_cap: usize) -> Self {
        Transcript {
            events: Vec::new(),
            tell_bits_total: 0,
            tell_cap,
        }
    }

    pub fn tell_cap(&self) -> usize {
        self.tell_cap
    }

    pub fn tell_bits_total(&self) -> usize {
        self.tell_bits_total
    }

    pub fn events(&self) -> &[TranscriptEvent] {
        &self.events
    }

    pub(crate) fn push_tell(
        &mut self,
        from: PartyId,
        to: PartyId,
        payload: BitString,
    ) -> Result<(), super::ResourceError> {
        let attempted = self.tell_bits_total + payload.len();
        if attempted > self.tell_cap {
            return Err(super::ResourceError::TellCapExceeded {
                cap: self.tell_cap,
                attempted,
            });
        }
        self.tell_bits_total = attempted;
        self.events.push(TranscriptEvent::Tell { from, to, payload });
        Ok(())
    }

    pub(crate) fn push_send(
        &mut self,
        from: PartyId,
        to: PartyId,
        register: RegisterId,
        snapshot: BitString,
    ) {
        self.events.push(TranscriptEvent::Send {
            from,
            to,
            register,
            snapshot,
        });
    }

    /// Identifier-free projection used to compare runs for distribution
    /// equality (e.g. real vs. simulated verifier views).
    pub fn observable(&self) -> Vec<ObservableEvent> {
        self.events
            .iter()
            .map(|e| match e {
                TranscriptEvent::Tell { from, to, payload } => ObservableEvent::Tell {
                    from: from.to_string(),
                    to: to.to_string(),
                    payload: payload.clone(),
                },
                TranscriptEvent::Send {
                    from, to, snapshot, ..
                } => ObservableEvent::Send {
                    from: from.to_string(),
                    to: to.to_string(),
                    n_bits: snapshot.len(),
                    contents: snapshot.clone(),
                },
            })
            .collect()
    }
}
