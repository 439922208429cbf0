//! Solvers for solitaire Hanabi: a deck of value-color cards is scanned
//! once, each card discarded, stored (bounded hand), or played, and the
//! game is won when every color's pile reaches the top value.
//!
//! Deciding winnability is easy in two special shapes and hard in
//! general:
//!
//! - [`greedy`] handles decks where no card repeats, in linear time;
//! - [`lazy`] handles single-color decks by filtering useless cards;
//! - [`dp`] decides arbitrary decks exactly, in time exponential in the
//!   hand bound and color count;
//! - [`oracle`] is a plain exhaustive search kept around to cross-check
//!   the fast paths;
//! - [`reduction`] turns 3-SAT formulas into decks, the other direction
//!   of the story.
//!
//! [`model`] holds the rules and the plan verifier, [`format`] the text
//! formats, [`gen`] seeded random decks.

#[cfg(doctest)]
mod book;

pub mod dp;
pub mod format;
pub mod gen;
pub mod greedy;
pub mod lazy;
pub mod model;
pub mod oracle;
pub mod reduction;

pub use model::{verify, Card, Instance, PlaySequence, Step, Verdict};
