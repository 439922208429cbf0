//! Core game model: cards, instances, play sequences, and the replay verifier.
//!
//! An instance is a deck of cards scanned left to right. Each drawn card is
//! discarded, stored in a bounded hand, or played. A card `(a, k)` may be
//! played only while the fireworks pile of color `k` stands at `a - 1`.
//! After the drawn card is handled, any number of held cards may be played
//! in sequence, each one checked against the piles at its own moment. The
//! game is won when every color reaches `n`.

use std::fmt;

use thiserror::Error;

/// A card, identified by face value and color. Both are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Card {
    pub value: u32,
    pub color: u32,
}

impl Card {
    pub fn new(value: u32, color: u32) -> Card {
        Card { value, color }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.value, self.color)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("n, c, and r must all be at least 1")]
    BadParams,
    #[error("card {index} has value {value}, outside 1..={n}")]
    ValueOutOfRange { index: usize, value: u32, n: u32 },
    #[error("card {index} has color {color}, outside 1..={c}")]
    ColorOutOfRange { index: usize, color: u32, c: u32 },
    #[error("card {value}:{color} occurs more than {r} times")]
    MultiplicityExceeded { value: u32, color: u32, r: u32 },
}

/// A solitaire Hanabi instance: parameters plus the deck in scan order.
///
/// Invariants are checked on construction: every value lies in `1..=n`,
/// every color in `1..=c`, and no (value, color) pair occurs more than `r`
/// times. The hand bound `h` may be zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: u32,
    c: u32,
    r: u32,
    h: u32,
    deck: Vec<Card>,
}

impl Instance {
    pub fn new(n: u32, c: u32, r: u32, h: u32, deck: Vec<Card>) -> Result<Instance, InstanceError> {
        if n == 0 || c == 0 || r == 0 {
            return Err(InstanceError::BadParams);
        }
        let mut counts = vec![0u32; (n as usize) * (c as usize)];
        for (index, card) in deck.iter().enumerate() {
            if card.value == 0 || card.value > n {
                return Err(InstanceError::ValueOutOfRange { index, value: card.value, n });
            }
            if card.color == 0 || card.color > c {
                return Err(InstanceError::ColorOutOfRange { index, color: card.color, c });
            }
            let slot = (card.color as usize - 1) * n as usize + (card.value as usize - 1);
            counts[slot] += 1;
            if counts[slot] > r {
                return Err(InstanceError::MultiplicityExceeded {
                    value: card.value,
                    color: card.color,
                    r,
                });
            }
        }
        Ok(Instance { n, c, r, h, deck })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Deck length, written `N` throughout.
    pub fn len(&self) -> usize {
        self.deck.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deck.is_empty()
    }

    pub fn deck(&self) -> &[Card] {
        &self.deck
    }

    /// Same deck and parameters except for the hand bound.
    pub fn with_hand(&self, h: u32) -> Instance {
        Instance { h, ..self.clone() }
    }

    pub fn into_deck(self) -> Vec<Card> {
        self.deck
    }
}

/// What to do with the card just drawn from the deck.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DrawAction {
    Discard,
    Store,
    PlayFromDeck,
}

/// One step of a play sequence: the draw action, then zero or more plays
/// of held cards in the listed order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub draw_action: DrawAction,
    pub hand_plays: Vec<Card>,
}

impl Step {
    pub fn discard() -> Step {
        Step { draw_action: DrawAction::Discard, hand_plays: Vec::new() }
    }

    pub fn store() -> Step {
        Step { draw_action: DrawAction::Store, hand_plays: Vec::new() }
    }

    pub fn play() -> Step {
        Step { draw_action: DrawAction::PlayFromDeck, hand_plays: Vec::new() }
    }

    pub fn play_chain(hand_plays: Vec<Card>) -> Step {
        Step { draw_action: DrawAction::PlayFromDeck, hand_plays }
    }
}

/// A full plan: exactly one step per deck card.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PlaySequence {
    pub steps: Vec<Step>,
}

impl PlaySequence {
    pub fn new(steps: Vec<Step>) -> PlaySequence {
        PlaySequence { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Replay state: position in the deck, held cards, and per-color progress.
/// The hand is a multiset, kept sorted for cheap comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GameState {
    cursor: usize,
    hand: Vec<Card>,
    progress: Vec<u32>,
}

impl GameState {
    pub fn initial(instance: &Instance) -> GameState {
        GameState {
            cursor: 0,
            hand: Vec::new(),
            progress: vec![0; instance.c() as usize],
        }
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn hand(&self) -> &[Card] {
        &self.hand
    }

    /// Highest value played so far in each color, indexed by color - 1.
    pub fn progress(&self) -> &[u32] {
        &self.progress
    }

    fn playable(&self, card: Card) -> bool {
        self.progress[card.color as usize - 1] + 1 == card.value
    }

    fn play(&mut self, card: Card) {
        self.progress[card.color as usize - 1] = card.value;
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum StepError {
    #[error("play of a card whose pile is not one below its value")]
    IllegalPlay,
    #[error("store onto a full hand")]
    HandOverflow,
    #[error("hand play of a card not currently held")]
    PlayNotInHand,
}

/// Why a replay did not win.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailReason {
    IllegalPlay,
    HandOverflow,
    PlayNotInHand,
    IncompleteFireworks,
    LengthMismatch,
}

impl From<StepError> for FailReason {
    fn from(e: StepError) -> FailReason {
        match e {
            StepError::IllegalPlay => FailReason::IllegalPlay,
            StepError::HandOverflow => FailReason::HandOverflow,
            StepError::PlayNotInHand => FailReason::PlayNotInHand,
        }
    }
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            FailReason::IllegalPlay => "a play does not continue its color's pile",
            FailReason::HandOverflow => "a store exceeds the hand bound",
            FailReason::PlayNotInHand => "a chained card is not in hand",
            FailReason::IncompleteFireworks => "the deck ends before every pile is complete",
            FailReason::LengthMismatch => "the plan length does not match the deck",
        };
        f.write_str(text)
    }
}

/// Verifier verdict. `failing_step` is the 0-based index of the offending
/// step and is present for every reason except `IncompleteFireworks`; a
/// `LengthMismatch` points at the first index where one side has no
/// counterpart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Win,
    NotWin { reason: FailReason, failing_step: Option<usize> },
}

impl Verdict {
    pub fn is_win(&self) -> bool {
        matches!(self, Verdict::Win)
    }
}

/// Applies one step to a state. Pure: the input state is unchanged.
///
/// Order of effects: the draw action first (legality checked against the
/// current piles and the hand bound `h`), then each hand play in listed
/// order, each checked at its own moment.
pub fn apply_step(
    state: &GameState,
    card: Card,
    step: &Step,
    h: u32,
) -> Result<GameState, StepError> {
    let mut next = state.clone();
    match step.draw_action {
        DrawAction::Discard => {}
        DrawAction::Store => {
            if next.hand.len() as u32 >= h {
                return Err(StepError::HandOverflow);
            }
            let at = next.hand.partition_point(|&held| held <= card);
            next.hand.insert(at, card);
        }
        DrawAction::PlayFromDeck => {
            if !next.playable(card) {
                return Err(StepError::IllegalPlay);
            }
            next.play(card);
        }
    }
    next.cursor += 1;
    for &chained in &step.hand_plays {
        let Ok(at) = next.hand.binary_search(&chained) else {
            return Err(StepError::PlayNotInHand);
        };
        if !next.playable(chained) {
            return Err(StepError::IllegalPlay);
        }
        next.hand.remove(at);
        next.play(chained);
    }
    Ok(next)
}

/// Replays a plan against an instance and reports the verdict.
pub fn verify(instance: &Instance, plan: &PlaySequence) -> Verdict {
    verify_trace(instance, plan).0
}

/// Like [`verify`], but also returns the state after every applied step.
/// On failure the trace stops before the offending step.
pub fn verify_trace(instance: &Instance, plan: &PlaySequence) -> (Verdict, Vec<GameState>) {
    let n = instance.len();
    let mut trace = Vec::new();
    if plan.steps.len() != n {
        let at = plan.steps.len().min(n);
        return (
            Verdict::NotWin { reason: FailReason::LengthMismatch, failing_step: Some(at) },
            trace,
        );
    }
    let mut state = GameState::initial(instance);
    for (index, step) in plan.steps.iter().enumerate() {
        match apply_step(&state, instance.deck()[index], step, instance.h()) {
            Ok(next) => {
                state = next;
                trace.push(state.clone());
            }
            Err(e) => {
                return (
                    Verdict::NotWin { reason: e.into(), failing_step: Some(index) },
                    trace,
                );
            }
        }
    }
    let done = state.progress.iter().all(|&p| p == instance.n());
    let verdict = if done {
        Verdict::Win
    } else {
        Verdict::NotWin { reason: FailReason::IncompleteFireworks, failing_step: None }
    };
    (verdict, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cards(spec: &[(u32, u32)]) -> Vec<Card> {
        spec.iter().map(|&(v, k)| Card::new(v, k)).collect()
    }

    #[test]
    fn two_card_single_color_win() {
        let inst = Instance::new(2, 1, 1, 1, cards(&[(2, 1), (1, 1)])).unwrap();
        let plan = PlaySequence::new(vec![
            Step::store(),
            Step::play_chain(vec![Card::new(2, 1)]),
        ]);
        assert_eq!(verify(&inst, &plan), Verdict::Win);
    }

    #[test]
    fn store_with_zero_hand_overflows_at_step_one() {
        let inst = Instance::new(2, 1, 1, 0, cards(&[(2, 1), (1, 1)])).unwrap();
        let plan = PlaySequence::new(vec![Step::store(), Step::play()]);
        assert_eq!(
            verify(&inst, &plan),
            Verdict::NotWin { reason: FailReason::HandOverflow, failing_step: Some(0) }
        );
    }

    #[test]
    fn playing_an_already_covered_value_is_illegal() {
        // Playing value <= current progress must be IllegalPlay, not a no-op.
        let inst = Instance::new(2, 1, 2, 1, cards(&[(1, 1), (1, 1), (2, 1)])).unwrap();
        let plan = PlaySequence::new(vec![Step::play(), Step::play(), Step::play()]);
        assert_eq!(
            verify(&inst, &plan),
            Verdict::NotWin { reason: FailReason::IllegalPlay, failing_step: Some(1) }
        );
    }

    #[test]
    fn hand_is_a_multiset() {
        // Two copies of the same card can be held at once.
        let inst = Instance::new(2, 1, 2, 2, cards(&[(2, 1), (2, 1), (1, 1)])).unwrap();
        let plan = PlaySequence::new(vec![
            Step::store(),
            Step::store(),
            Step::play_chain(vec![Card::new(2, 1)]),
        ]);
        // Second held copy of 2:1 is now dead; fireworks are complete anyway.
        assert_eq!(verify(&inst, &plan), Verdict::Win);
    }

    #[test]
    fn chains_attach_to_any_action() {
        // A held card may be played after a discard step as well.
        let inst = Instance::new(1, 1, 2, 1, cards(&[(1, 1), (1, 1)])).unwrap();
        let plan = PlaySequence::new(vec![
            Step::store(),
            Step { draw_action: DrawAction::Discard, hand_plays: vec![Card::new(1, 1)] },
        ]);
        assert_eq!(verify(&inst, &plan), Verdict::Win);
    }

    #[test]
    fn chain_of_unheld_card_fails() {
        let inst = Instance::new(1, 1, 1, 1, cards(&[(1, 1)])).unwrap();
        let plan = PlaySequence::new(vec![Step {
            draw_action: DrawAction::Discard,
            hand_plays: vec![Card::new(1, 1)],
        }]);
        assert_eq!(
            verify(&inst, &plan),
            Verdict::NotWin { reason: FailReason::PlayNotInHand, failing_step: Some(0) }
        );
    }

    #[test]
    fn short_plan_is_a_length_mismatch() {
        let inst = Instance::new(2, 1, 1, 1, cards(&[(1, 1), (2, 1)])).unwrap();
        let plan = PlaySequence::new(vec![Step::play()]);
        assert_eq!(
            verify(&inst, &plan),
            Verdict::NotWin { reason: FailReason::LengthMismatch, failing_step: Some(1) }
        );
    }

    #[test]
    fn all_discards_leave_fireworks_incomplete() {
        let inst = Instance::new(1, 1, 1, 0, cards(&[(1, 1)])).unwrap();
        let plan = PlaySequence::new(vec![Step::discard()]);
        assert_eq!(
            verify(&inst, &plan),
            Verdict::NotWin { reason: FailReason::IncompleteFireworks, failing_step: None }
        );
    }

    #[test]
    fn instance_validation() {
        assert_eq!(
            Instance::new(2, 1, 1, 0, cards(&[(3, 1)])),
            Err(InstanceError::ValueOutOfRange { index: 0, value: 3, n: 2 })
        );
        assert_eq!(
            Instance::new(2, 1, 1, 0, cards(&[(1, 2)])),
            Err(InstanceError::ColorOutOfRange { index: 0, color: 2, c: 1 })
        );
        assert_eq!(
            Instance::new(2, 1, 1, 0, cards(&[(1, 1), (1, 1)])),
            Err(InstanceError::MultiplicityExceeded { value: 1, color: 1, r: 1 })
        );
        assert_eq!(Instance::new(0, 1, 1, 0, vec![]), Err(InstanceError::BadParams));
    }
}
