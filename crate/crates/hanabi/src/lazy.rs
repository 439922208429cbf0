//! Solver for single-color decks.
//!
//! A card at position `i` with value `a` is useless if `h + 1` distinct
//! values in `(a, n]` never occur after position `i`: those values must all
//! sit in the hand while the card waits to be played, and together with the
//! card itself they would need `h + 1` slots. Useless cards can be dropped
//! without changing winnability. After dropping them, greedily keeping only
//! the last surviving copy of each value yields a plan that never exceeds
//! the hand bound, so the filtered deck decides the instance outright.
//!
//! The filter runs in one descending sweep over values. `last[v]` tracks
//! the last surviving copy of `v`; a max-heap holds the `h + 1` smallest of
//! the `last[j]` already processed. When `last[v]` sits beyond the heap
//! maximum, the values in the heap all die out before position `last[v]`,
//! which is the uselessness condition, so that copy is removed and `last[v]`
//! steps back to the previous copy.

use std::collections::BinaryHeap;

use thiserror::Error;

use crate::model::{Card, Instance, PlaySequence, Step};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum LazyError {
    #[error("deck has {c} colors; this solver handles exactly one")]
    MultiColor { c: u32 },
}

/// Answer of the direct uselessness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UselessCheck {
    pub useless: bool,
    /// The `h + 1` smallest witness values when useless, empty otherwise.
    pub witnesses: Vec<u32>,
}

/// Direct, quadratic uselessness test over a raw value sequence.
/// `index` is 0-based. Returns the witness values when the card is useless.
pub fn useless_witnesses(values: &[u32], n: u32, h: u32, index: usize) -> Option<Vec<u32>> {
    let a = values[index];
    let mut witnesses = Vec::new();
    for v in a + 1..=n {
        if !values[index + 1..].contains(&v) {
            witnesses.push(v);
            if witnesses.len() as u32 == h + 1 {
                return Some(witnesses);
            }
        }
    }
    None
}

/// Tests one deck position by definition. Positions are 0-based. Only the
/// values matter, so this is meaningful for single-color decks.
pub fn is_useless(instance: &Instance, index: usize) -> UselessCheck {
    let values: Vec<u32> = instance.deck().iter().map(|card| card.value).collect();
    match useless_witnesses(&values, instance.n(), instance.h(), index) {
        Some(witnesses) => UselessCheck { useless: true, witnesses },
        None => UselessCheck { useless: false, witnesses: Vec::new() },
    }
}

/// The deck after removing useless cards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredDeck {
    /// Surviving positions, ascending.
    pub surviving: Vec<usize>,
    /// Removed positions in the order the sweep removed them.
    pub removed: Vec<usize>,
    /// Position of the last surviving copy of each value, indexed by
    /// value - 1.
    pub last_of_value: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterOutcome {
    Filtered(FilteredDeck),
    /// Some value cannot be played: every copy (if any) was useless.
    Unwinnable { value: u32 },
}

/// Removes useless cards from a single-color deck.
pub fn filter_useless(instance: &Instance) -> Result<FilterOutcome, LazyError> {
    if instance.c() != 1 {
        return Err(LazyError::MultiColor { c: instance.c() });
    }
    let n = instance.n();
    let h = instance.h();
    let deck = instance.deck();

    let mut prev: Vec<Option<usize>> = vec![None; deck.len()];
    let mut last: Vec<Option<usize>> = vec![None; n as usize];
    for (i, card) in deck.iter().enumerate() {
        let slot = card.value as usize - 1;
        prev[i] = last[slot];
        last[slot] = Some(i);
    }
    for v in (1..=n).rev() {
        if last[v as usize - 1].is_none() {
            return Ok(FilterOutcome::Unwinnable { value: v });
        }
    }

    let mut removed_flag = vec![false; deck.len()];
    let mut removed = Vec::new();
    if h < n {
        // Heap over the last copies of the h+1 values processed so far.
        let mut heap = BinaryHeap::new();
        let lo = n.saturating_sub(h).max(1);
        for v in lo..=n {
            heap.push(last[v as usize - 1].unwrap());
        }
        let mut v = n.saturating_sub(h + 1);
        while v >= 1 {
            let mut idx = last[v as usize - 1].unwrap();
            while idx > *heap.peek().unwrap() {
                removed_flag[idx] = true;
                removed.push(idx);
                match prev[idx] {
                    Some(p) => idx = p,
                    None => return Ok(FilterOutcome::Unwinnable { value: v }),
                }
            }
            last[v as usize - 1] = Some(idx);
            heap.pop();
            heap.push(idx);
            v -= 1;
        }
    }

    let surviving = (0..deck.len()).filter(|&i| !removed_flag[i]).collect();
    let last_of_value = last.into_iter().map(|entry| entry.unwrap()).collect();
    Ok(FilterOutcome::Filtered(FilteredDeck { surviving, removed, last_of_value }))
}

/// Decides a single-color deck and produces a plan.
///
/// The plan discards everything except the last surviving copy of each
/// value, which is stored until playable, then played with any newly
/// playable stored values chained behind it.
pub fn solve_single_color(instance: &Instance) -> Result<Option<PlaySequence>, LazyError> {
    let filtered = match filter_useless(instance)? {
        FilterOutcome::Filtered(f) => f,
        FilterOutcome::Unwinnable { .. } => return Ok(None),
    };
    let n = instance.n();
    let mut chosen = vec![false; instance.len()];
    for &i in &filtered.last_of_value {
        chosen[i] = true;
    }

    let mut stored = vec![false; n as usize + 2];
    let mut progress = 0u32;
    let mut steps = Vec::with_capacity(instance.len());
    for (i, card) in instance.deck().iter().enumerate() {
        if !chosen[i] {
            steps.push(Step::discard());
            continue;
        }
        if card.value == progress + 1 {
            progress = card.value;
            let mut chain = Vec::new();
            while progress < n && stored[progress as usize + 1] {
                stored[progress as usize + 1] = false;
                progress += 1;
                chain.push(Card::new(progress, 1));
            }
            steps.push(Step::play_chain(chain));
        } else {
            debug_assert!(card.value > progress + 1);
            stored[card.value as usize] = true;
            steps.push(Step::store());
        }
    }
    debug_assert_eq!(progress, n);
    Ok(Some(PlaySequence::new(steps)))
}
