//! Solver for decks in which no (value, color) pair repeats.
//!
//! For card `i` let `f(i)` be the last deck position holding a card of the
//! same color with value at most that of card `i`. Card `i` must sit in the
//! hand exactly over the half-open span `(i, f(i)]` when `f(i) > i`: it
//! cannot be played before its predecessors of the same color have all
//! appeared, and the last of those appears at `f(i)`. The deck is winnable
//! if and only if the maximum number of spans covering any single position,
//! the overlap width, is at most `h`, and the witness plan is forced: play
//! a card the moment it is playable, store it otherwise.

use thiserror::Error;

use crate::model::{Card, Instance, PlaySequence, Step};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GreedyError {
    #[error("card {value}:{color} occurs twice, deck is not a permutation")]
    NotPermutation { value: u32, color: u32 },
    #[error("card {value}:{color} occurs twice; a deck with repeats needs the general solver")]
    NotUnique { value: u32, color: u32 },
}

/// Forced storage spans of a repeat-free deck. Positions are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalProfile {
    /// `f[i]`: last position of a same-color card with value <= the value
    /// at position `i`. Always >= i for repeat-free decks.
    pub f: Vec<usize>,
    /// The spans `(i, f[i]]` with `f[i] > i`, in deck order.
    pub intervals: Vec<(usize, usize)>,
    /// Maximum number of spans covering one position.
    pub width: usize,
}

fn find_repeat(instance: &Instance) -> Option<Card> {
    let n = instance.n() as usize;
    let mut seen = vec![false; n * instance.c() as usize];
    for card in instance.deck() {
        let slot = (card.color as usize - 1) * n + (card.value as usize - 1);
        if seen[slot] {
            return Some(*card);
        }
        seen[slot] = true;
    }
    None
}

/// Computes the storage spans and their overlap width.
///
/// The deck must hold each (value, color) pair at most once; pairs may be
/// missing, which only shortens spans.
pub fn compute_f(instance: &Instance) -> Result<IntervalProfile, GreedyError> {
    if let Some(card) = find_repeat(instance) {
        return Err(GreedyError::NotPermutation { value: card.value, color: card.color });
    }
    let n = instance.n() as usize;
    let deck = instance.deck();

    // Position of each pair, then per color a running maximum over values.
    let mut position = vec![usize::MAX; n * instance.c() as usize];
    for (i, card) in deck.iter().enumerate() {
        position[(card.color as usize - 1) * n + (card.value as usize - 1)] = i;
    }
    let mut reach = vec![usize::MAX; n * instance.c() as usize];
    for k in 0..instance.c() as usize {
        let mut best = usize::MAX;
        for v in 0..n {
            let at = position[k * n + v];
            if at != usize::MAX && (best == usize::MAX || at > best) {
                best = at;
            }
            reach[k * n + v] = best;
        }
    }

    let mut f = Vec::with_capacity(deck.len());
    let mut intervals = Vec::new();
    for (i, card) in deck.iter().enumerate() {
        let fi = reach[(card.color as usize - 1) * n + (card.value as usize - 1)];
        f.push(fi);
        if fi > i {
            intervals.push((i, fi));
        }
    }

    // A span (i, f] covers positions i+1 ..= f; sweep the coverage deltas.
    let mut deltas = vec![0i64; deck.len() + 2];
    for &(i, fi) in &intervals {
        deltas[i + 1] += 1;
        deltas[fi + 1] -= 1;
    }
    let mut width = 0i64;
    let mut running = 0i64;
    for j in 0..=deck.len() {
        running += deltas[j];
        width = width.max(running);
    }
    Ok(IntervalProfile { f, intervals, width: width as usize })
}

/// Decides a repeat-free deck and produces the forced plan.
///
/// Returns `None` when some (value, color) combination is absent (it can
/// never be played) or when the overlap width exceeds `h`. A deck with a
/// repeated pair is an error; route such instances to the general solver.
pub fn solve_unique(instance: &Instance) -> Result<Option<PlaySequence>, GreedyError> {
    if let Some(card) = find_repeat(instance) {
        return Err(GreedyError::NotUnique { value: card.value, color: card.color });
    }
    let n = instance.n() as usize;
    let c = instance.c() as usize;
    if instance.len() < n * c {
        return Ok(None);
    }
    let profile = compute_f(instance)?;
    if profile.width > instance.h() as usize {
        return Ok(None);
    }

    // Hand membership as a color x value presence matrix.
    let mut held = vec![false; n * c];
    let mut progress = vec![0u32; c];
    let mut steps = Vec::with_capacity(instance.len());
    for card in instance.deck() {
        let k = card.color as usize - 1;
        if progress[k] + 1 == card.value {
            progress[k] = card.value;
            let mut chain = Vec::new();
            let mut v = card.value + 1;
            while v as usize <= n && held[k * n + (v as usize - 1)] {
                held[k * n + (v as usize - 1)] = false;
                chain.push(Card::new(v, card.color));
                progress[k] = v;
                v += 1;
            }
            steps.push(Step::play_chain(chain));
        } else {
            held[k * n + (card.value as usize - 1)] = true;
            steps.push(Step::store());
        }
    }
    debug_assert!(progress.iter().all(|&p| p == instance.n()));
    Ok(Some(PlaySequence::new(steps)))
}
