//! Reference solver: exhaustive memoized search over replay states.
//!
//! The search exists to be obviously correct, not fast. Solvers elsewhere in
//! this crate are tested against its decisions on small instances. It
//! explores, for each drawn card, playing it, storing it, then discarding
//! it, in that order, so winnable instances tend to produce a witness
//! quickly. Dead ends are memoized on (cursor, hand, progress).
//!
//! Two default restrictions are justified by equivalence tests on full
//! enumerations of small decks and can be lifted through [`OracleOptions`]:
//! a second copy of a held card is never stored, and held cards are played
//! eagerly the moment a play makes them playable rather than at any later
//! step.

use std::collections::HashSet;

use crate::model::{Card, Instance, PlaySequence, Step};

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Abort after visiting this many search states.
    pub budget: u64,
    /// Play every playable held card immediately after each play.
    /// When false, playing a held card is a separate search move that can
    /// happen at any later step, which is the unrestricted turn structure.
    pub eager_chains: bool,
    /// Permit storing a card identical to one already held.
    pub allow_duplicate_hand: bool,
    /// Remember losing states. Disabling is only useful for validating the
    /// memoization itself.
    pub memoize: bool,
}

impl Default for OracleOptions {
    fn default() -> OracleOptions {
        OracleOptions {
            budget: 10_000_000,
            eager_chains: true,
            allow_duplicate_hand: false,
            memoize: true,
        }
    }
}

impl OracleOptions {
    pub fn with_budget(budget: u64) -> OracleOptions {
        OracleOptions { budget, ..OracleOptions::default() }
    }
}

/// Outcome of a search. `BudgetExceeded` is not a decision; it only says
/// the budget ran out before the state space was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Win(PlaySequence),
    NoWin,
    BudgetExceeded,
}

impl OracleOutcome {
    pub fn is_win(&self) -> bool {
        matches!(self, OracleOutcome::Win(_))
    }
}

enum Explored {
    Win,
    Exhausted,
    Budget,
}

struct Search<'a> {
    deck: &'a [Card],
    n: u32,
    h: u32,
    opts: &'a OracleOptions,
    nodes: u64,
    memo: HashSet<(usize, Vec<Card>, Vec<u32>)>,
    // last_seen[k-1][v-1]: last deck index holding (v, k), or -1.
    last_seen: Vec<Vec<i64>>,
    // tail_min[k-1][p]: min of last_seen over values p+1..=n, so a color at
    // progress p is satisfiable from the deck suffix at s iff tail_min >= s.
    tail_min: Vec<Vec<i64>>,
    steps: Vec<Step>,
}

/// Decides an instance by exhaustive search, returning a witness plan on a
/// win. Respects `opts.budget`; see [`OracleOutcome`].
pub fn solve(instance: &Instance, opts: &OracleOptions) -> OracleOutcome {
    let c = instance.c() as usize;
    let n = instance.n() as usize;
    let mut last_seen = vec![vec![-1i64; n]; c];
    for (i, card) in instance.deck().iter().enumerate() {
        last_seen[card.color as usize - 1][card.value as usize - 1] = i as i64;
    }
    let mut tail_min = vec![vec![i64::MAX; n + 1]; c];
    for k in 0..c {
        for p in (0..n).rev() {
            tail_min[k][p] = tail_min[k][p + 1].min(last_seen[k][p]);
        }
    }
    let mut search = Search {
        deck: instance.deck(),
        n: instance.n(),
        h: instance.h(),
        opts,
        nodes: 0,
        memo: HashSet::new(),
        last_seen,
        tail_min,
        steps: Vec::new(),
    };
    let hand = Vec::new();
    let progress = vec![0u32; c];
    match search.explore(0, &hand, &progress) {
        Explored::Win => OracleOutcome::Win(PlaySequence::new(search.steps)),
        Explored::Exhausted => OracleOutcome::NoWin,
        Explored::Budget => OracleOutcome::BudgetExceeded,
    }
}

impl Search<'_> {
    /// A color is dead once some still-needed value is neither held nor
    /// anywhere in the unscanned deck suffix. Sound for every variant of
    /// the search, since progress only ever moves upward.
    fn dead_color(&self, cursor: usize, hand: &[Card], progress: &[u32]) -> bool {
        for (k, &p) in progress.iter().enumerate() {
            if p == self.n {
                continue;
            }
            if self.tail_min[k][p as usize] >= cursor as i64 {
                continue;
            }
            for v in p + 1..=self.n {
                if self.last_seen[k][v as usize - 1] < cursor as i64
                    && !hand.contains(&Card::new(v, k as u32 + 1))
                {
                    return true;
                }
            }
        }
        false
    }

    fn explore(&mut self, cursor: usize, hand: &Vec<Card>, progress: &Vec<u32>) -> Explored {
        if progress.iter().all(|&p| p == self.n) {
            while self.steps.len() < self.deck.len() {
                self.steps.push(Step::discard());
            }
            return Explored::Win;
        }
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            return Explored::Budget;
        }
        if self.dead_color(cursor, hand, progress) {
            return Explored::Exhausted;
        }
        let key = (cursor, hand.clone(), progress.clone());
        if self.opts.memoize && self.memo.contains(&key) {
            return Explored::Exhausted;
        }
        let mut budget_hit = false;

        // Playing a held card as its own move, in the unrestricted variant.
        if !self.opts.eager_chains && cursor > 0 {
            let mut previous = None;
            for i in 0..hand.len() {
                let card = hand[i];
                if previous == Some(card) || progress[card.color as usize - 1] + 1 != card.value {
                    previous = Some(card);
                    continue;
                }
                previous = Some(card);
                let mut next_hand = hand.clone();
                next_hand.remove(i);
                let mut next_progress = progress.clone();
                next_progress[card.color as usize - 1] = card.value;
                self.steps[cursor - 1].hand_plays.push(card);
                match self.explore(cursor, &next_hand, &next_progress) {
                    Explored::Win => return Explored::Win,
                    Explored::Budget => budget_hit = true,
                    Explored::Exhausted => {}
                }
                self.steps[cursor - 1].hand_plays.pop();
            }
        }

        if cursor < self.deck.len() {
            let card = self.deck[cursor];

            if progress[card.color as usize - 1] + 1 == card.value {
                let mut next_progress = progress.clone();
                next_progress[card.color as usize - 1] = card.value;
                let mut next_hand = hand.clone();
                let mut chain = Vec::new();
                if self.opts.eager_chains {
                    loop {
                        let at = next_hand.iter().position(|held| {
                            next_progress[held.color as usize - 1] + 1 == held.value
                        });
                        let Some(at) = at else { break };
                        let held = next_hand.remove(at);
                        next_progress[held.color as usize - 1] = held.value;
                        chain.push(held);
                    }
                }
                self.steps.push(Step::play_chain(chain));
                match self.explore(cursor + 1, &next_hand, &next_progress) {
                    Explored::Win => return Explored::Win,
                    Explored::Budget => budget_hit = true,
                    Explored::Exhausted => {}
                }
                self.steps.pop();
            }

            if (hand.len() as u32) < self.h
                && (self.opts.allow_duplicate_hand || !hand.contains(&card))
            {
                let mut next_hand = hand.clone();
                let at = next_hand.partition_point(|&held| held <= card);
                next_hand.insert(at, card);
                self.steps.push(Step::store());
                match self.explore(cursor + 1, &next_hand, progress) {
                    Explored::Win => return Explored::Win,
                    Explored::Budget => budget_hit = true,
                    Explored::Exhausted => {}
                }
                self.steps.pop();
            }

            self.steps.push(Step::discard());
            match self.explore(cursor + 1, hand, progress) {
                Explored::Win => return Explored::Win,
                Explored::Budget => budget_hit = true,
                Explored::Exhausted => {}
            }
            self.steps.pop();
        }

        if budget_hit {
            Explored::Budget
        } else {
            if self.opts.memoize {
                self.memo.insert(key);
            }
            Explored::Exhausted
        }
    }
}
