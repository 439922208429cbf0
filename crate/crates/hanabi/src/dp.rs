//! Exact solver for arbitrary decks, repeats and all.
//!
//! After scanning `s` cards, record the exact hand content and the number
//! of cards played in each of the colors `1..c-1`. For one fixed last
//! color `c`, the table maps each such state to the most cards of color
//! `c` that can have been played, or nothing when the state is
//! unreachable. The deck is winnable exactly when the state (empty hand,
//! all `n`) after the full scan carries the value `n`.
//!
//! Layer `s` is produced from layer `s - 1` by the three choices for the
//! `s`-th card `(a, k)`:
//!
//! - discard: the state carries over unchanged;
//! - store: the card joins a hand that has room and no copy of it (a
//!   second copy of a held card can never be played and only wastes a
//!   slot);
//! - play: requires the color's count to stand at `a - 1`, which for
//!   `k = c` means the table value itself. After the play, any run
//!   `a+1, a+2, ...` of the same color held in hand may be chained out of
//!   it; each chain length is its own successor state. Runs of other
//!   colors never chain here: a held card playable at this step was
//!   already playable when the step began, so some earlier layer covers
//!   playing it then.
//!
//! Only reachable states are materialized, layer by layer, two layers
//! live at a time. States colliding on (hand, counts) keep the larger
//! color-`c` value: a state that has played further in color `c` can
//! replay any continuation of one that lags, discarding the already-played
//! cards, so the maximum is what the decision needs. A journal of
//! backpointers (optional, on by default) lets a winning plan be replayed
//! after the scan.

use std::collections::hash_map::{DefaultHasher, Entry, HashMap};
use std::hash::BuildHasherDefault;

use thiserror::Error;

use crate::model::{Card, Instance, PlaySequence, Step};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum DpError {
    #[error("state count exceeded the configured ceiling of {limit}")]
    ResourceLimit { limit: u64 },
    #[error("plan extraction requires the journal, which was disabled")]
    NoJournal,
}

#[derive(Clone, Debug)]
pub struct DpOptions {
    /// Record backpointers so a plan can be extracted.
    pub journal: bool,
    /// Ceiling on stored key-value pairs summed over all layers.
    pub state_limit: u64,
    /// Drop states holding a card whose value the matching color has
    /// already covered. Off by default; the table is exact without it.
    pub dominance: bool,
}

impl Default for DpOptions {
    fn default() -> DpOptions {
        DpOptions { journal: true, state_limit: 100_000_000, dominance: false }
    }
}

/// Table key: exact hand (sorted by color, then value) and cards played
/// per color except the last.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DpKey {
    pub hand: Vec<Card>,
    pub played: Vec<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DpAction {
    Discard,
    Store,
    Play { chained: u32 },
}

#[derive(Clone, Copy)]
struct Slot {
    value: u32,
    journal: u32,
}

struct JournalEntry {
    parent: u32,
    action: DpAction,
}

const ROOT: u32 = u32::MAX;

type Layer = HashMap<DpKey, Slot, BuildHasherDefault<DefaultHasher>>;

/// Result of a table run. Holds what plan extraction needs.
pub struct DpDecision {
    winnable: bool,
    deck: Vec<Card>,
    journal: Option<Vec<JournalEntry>>,
    final_journal: Option<u32>,
    layer_sizes: Vec<usize>,
    total_entries: u64,
}

impl DpDecision {
    pub fn winnable(&self) -> bool {
        self.winnable
    }

    /// Stored entries per layer, layer 0 first. For the size analysis in
    /// tests; the run itself only ever holds two layers.
    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn total_entries(&self) -> u64 {
        self.total_entries
    }

    /// Replays the journal into a plan. `None` for lost instances.
    pub fn extract_plan(&self) -> Result<Option<PlaySequence>, DpError> {
        if !self.winnable {
            return Ok(None);
        }
        let journal = self.journal.as_ref().ok_or(DpError::NoJournal)?;
        let mut actions = Vec::with_capacity(self.deck.len());
        let mut at = self.final_journal.expect("winnable run has a final entry");
        while at != ROOT {
            let entry = &journal[at as usize];
            actions.push(entry.action);
            at = entry.parent;
        }
        actions.reverse();
        debug_assert_eq!(actions.len(), self.deck.len());
        let steps = actions
            .iter()
            .zip(&self.deck)
            .map(|(&action, &card)| match action {
                DpAction::Discard => Step::discard(),
                DpAction::Store => Step::store(),
                DpAction::Play { chained } => Step::play_chain(
                    (1..=chained).map(|d| Card::new(card.value + d, card.color)).collect(),
                ),
            })
            .collect();
        Ok(Some(PlaySequence::new(steps)))
    }
}

fn hand_with(hand: &[Card], card: Card) -> Vec<Card> {
    let mut out = hand.to_vec();
    let at = out.partition_point(|held| (held.color, held.value) <= (card.color, card.value));
    out.insert(at, card);
    out
}

fn hand_without(hand: &[Card], card: Card) -> Option<Vec<Card>> {
    let at = hand.iter().position(|&held| held == card)?;
    let mut out = hand.to_vec();
    out.remove(at);
    Some(out)
}

struct Run<'a> {
    opts: &'a DpOptions,
    c: u32,
    journal: Option<Vec<JournalEntry>>,
    total_entries: u64,
}

impl Run<'_> {
    fn record(&mut self, action: DpAction, parent: u32) -> u32 {
        match self.journal.as_mut() {
            Some(journal) => {
                let id = journal.len() as u32;
                journal.push(JournalEntry { parent, action });
                id
            }
            None => ROOT,
        }
    }

    fn dominated(&self, key: &DpKey, value: u32) -> bool {
        key.hand.iter().any(|held| {
            let covered = if held.color == self.c {
                value
            } else {
                key.played[held.color as usize - 1]
            };
            held.value <= covered
        })
    }

    fn stage(
        &mut self,
        layer: &mut Layer,
        key: DpKey,
        value: u32,
        action: DpAction,
        parent: u32,
    ) -> Result<(), DpError> {
        if self.opts.dominance && self.dominated(&key, value) {
            return Ok(());
        }
        match layer.entry(key) {
            Entry::Vacant(slot) => {
                let journal = self.record(action, parent);
                slot.insert(Slot { value, journal });
                self.total_entries += 1;
                if self.total_entries > self.opts.state_limit {
                    return Err(DpError::ResourceLimit { limit: self.opts.state_limit });
                }
            }
            Entry::Occupied(mut slot) => {
                if value > slot.get().value {
                    let journal = self.record(action, parent);
                    *slot.get_mut() = Slot { value, journal };
                }
            }
        }
        Ok(())
    }
}

/// Runs the table over the deck and decides winnability.
pub fn decide(instance: &Instance, opts: &DpOptions) -> Result<DpDecision, DpError> {
    engine(instance, opts, false).map(|(decision, _)| decision)
}

/// Every layer of the table, keys to color-c values. Retains all layers
/// in memory; meant for analysis and cross-checking, not solving.
pub fn tables(
    instance: &Instance,
    opts: &DpOptions,
) -> Result<Vec<HashMap<DpKey, u32>>, DpError> {
    let (_, layers) = engine(instance, opts, true)?;
    Ok(layers
        .into_iter()
        .map(|layer| layer.into_iter().map(|(key, slot)| (key, slot.value)).collect())
        .collect())
}

fn engine(
    instance: &Instance,
    opts: &DpOptions,
    keep_layers: bool,
) -> Result<(DpDecision, Vec<Layer>), DpError> {
    let c = instance.c();
    let n = instance.n();
    let h = instance.h();
    let mut run = Run {
        opts,
        c,
        journal: if opts.journal { Some(Vec::new()) } else { None },
        total_entries: 0,
    };

    let mut layer: Layer = Layer::default();
    layer.insert(
        DpKey { hand: Vec::new(), played: vec![0; c as usize - 1] },
        Slot { value: 0, journal: ROOT },
    );
    run.total_entries = 1;
    let mut layer_sizes = vec![1usize];
    let mut kept: Vec<Layer> = Vec::new();

    for &card in instance.deck() {
        let mut next: Layer = Layer::default();
        let a = card.value;
        let k = card.color;
        for (key, slot) in &layer {
            run.stage(&mut next, key.clone(), slot.value, DpAction::Discard, slot.journal)?;

            if (key.hand.len() as u32) < h && !key.hand.contains(&card) {
                let stored = DpKey { hand: hand_with(&key.hand, card), played: key.played.clone() };
                run.stage(&mut next, stored, slot.value, DpAction::Store, slot.journal)?;
            }

            let pile = if k == c { slot.value } else { key.played[k as usize - 1] };
            if pile + 1 != a {
                continue;
            }
            let mut hand = key.hand.clone();
            let mut chained = 0u32;
            loop {
                let key_after = if k == c {
                    DpKey { hand: hand.clone(), played: key.played.clone() }
                } else {
                    let mut played = key.played.clone();
                    played[k as usize - 1] = a + chained;
                    DpKey { hand: hand.clone(), played }
                };
                let value_after = if k == c { a + chained } else { slot.value };
                run.stage(
                    &mut next,
                    key_after,
                    value_after,
                    DpAction::Play { chained },
                    slot.journal,
                )?;
                if a + chained >= n {
                    break;
                }
                match hand_without(&hand, Card::new(a + chained + 1, k)) {
                    Some(shorter) => {
                        hand = shorter;
                        chained += 1;
                    }
                    None => break,
                }
            }
        }
        layer_sizes.push(next.len());
        if keep_layers {
            kept.push(std::mem::take(&mut layer));
        }
        layer = next;
    }

    let goal = DpKey { hand: Vec::new(), played: vec![n; c as usize - 1] };
    let hit = layer.get(&goal).filter(|slot| slot.value == n);
    let decision = DpDecision {
        winnable: hit.is_some(),
        deck: instance.deck().to_vec(),
        final_journal: hit.map(|slot| slot.journal),
        journal: run.journal,
        layer_sizes,
        total_entries: run.total_entries,
    };
    if keep_layers {
        kept.push(layer);
    }
    Ok((decision, kept))
}
