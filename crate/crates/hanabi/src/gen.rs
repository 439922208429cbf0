//! Seeded random decks for testing and benchmarks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::greedy::compute_f;
use crate::model::{Card, Instance, InstanceError};

const SHUFFLE_ATTEMPTS: u32 = 1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error(transparent)]
    Invalid(#[from] InstanceError),
    #[error("guaranteed-solvable generation needs r=1")]
    SolvableRequiresUniqueDeck,
    #[error("no solvable deal with h={h} found in {attempts} shuffles")]
    InfeasibleRequest { h: u32, attempts: u32 },
}

/// Shuffles the full multiset (every value-color pair, r copies each).
/// With `solvable` set, reshuffles until the deal is winnable with hand
/// `h`; that guarantee is only available for r=1, where winnability is a
/// cheap width check.
pub fn gen_random(
    n: u32,
    c: u32,
    r: u32,
    h: u32,
    seed: u64,
    solvable: bool,
) -> Result<Instance, GenError> {
    if solvable && r != 1 {
        return Err(GenError::SolvableRequiresUniqueDeck);
    }
    let mut deck = Vec::with_capacity((n as usize) * (c as usize) * (r as usize));
    for color in 1..=c {
        for value in 1..=n {
            for _ in 0..r {
                deck.push(Card::new(value, color));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SHUFFLE_ATTEMPTS {
        deck.shuffle(&mut rng);
        let instance = Instance::new(n, c, r, h, deck)?;
        if !solvable {
            return Ok(instance);
        }
        let profile = compute_f(&instance).expect("full multiset with r=1 is a permutation");
        if profile.width <= h as usize {
            return Ok(instance);
        }
        deck = instance.into_deck();
    }
    Err(GenError::InfeasibleRequest { h, attempts: SHUFFLE_ATTEMPTS })
}
