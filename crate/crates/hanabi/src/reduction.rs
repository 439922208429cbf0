//! 3-SAT instances rendered as solitaire Hanabi decks.
//!
//! Each variable owns two colors, odd to affirm and even to negate. A
//! variable phase forces every play sequence to commit one of the two
//! (only one color can get its 2 played), which encodes an assignment.
//! Clause gadgets then let every non-dummy color advance by exactly five
//! values, but the three colors carrying the clause's literals compete
//! for hand space in a way only a satisfied clause survives. A dummy
//! color threads through everything, absorbing hand slots so the player
//! can never smuggle cards between gadgets.
//!
//! The deck uses n = 6m + 2 values, c = 2v + 1 colors, multiplicity 2 and
//! hand size 2 for a formula with v variables and m clauses. Two other
//! shapes are derivable: padding raises the multiplicity by inserting
//! dead copies, and a doubled clause tail trades hand size 1 against
//! multiplicity 3.
//!
//! Gadget values near the top of the range can exceed n for one- and
//! two-clause formulas; such cards are simply not emitted. Dropping cards
//! never turns a losing deck winnable, and the witness plans built here
//! only ever play the cards that remain.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::{Card, Instance, PlaySequence, Step};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Literal {
    /// Variable index, 0-based.
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn positive(var: u32) -> Literal {
        Literal { var, negated: false }
    }

    pub fn negative(var: u32) -> Literal {
        Literal { var, negated: true }
    }

    /// The color carrying this literal.
    pub fn color(&self) -> u32 {
        2 * self.var + if self.negated { 2 } else { 1 }
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment[self.var as usize] != self.negated
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("missing p cnf header")]
    MissingHeader,
    #[error("unreadable token {token:?}")]
    BadToken { token: String },
    #[error("literal {literal} is outside the declared {vars} variables")]
    VarOutOfRange { literal: i64, vars: u32 },
    #[error("clause {clause} must hold exactly three literals over distinct variables")]
    Not3Sat { clause: usize },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("formula has no clauses")]
    Empty,
}

/// A 3-CNF formula. Every clause has exactly three literals over three
/// distinct variables; the construction leans on that shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    vars: u32,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(vars: u32, clauses: Vec<[Literal; 3]>) -> Result<CnfFormula, CnfError> {
        if clauses.is_empty() {
            return Err(CnfError::Empty);
        }
        for (index, clause) in clauses.iter().enumerate() {
            let mut seen = [false; 3];
            for (slot, literal) in clause.iter().enumerate() {
                if literal.var >= vars {
                    return Err(CnfError::VarOutOfRange {
                        literal: literal.var as i64 + 1,
                        vars,
                    });
                }
                seen[slot] = clause[..slot].iter().any(|other| other.var == literal.var);
            }
            if seen.iter().any(|&dup| dup) {
                return Err(CnfError::Not3Sat { clause: index });
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Index of the first clause the assignment leaves false.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|clause| !clause.iter().any(|literal| literal.satisfied_by(assignment)))
    }
}

/// Reads DIMACS cnf text. Comment lines start with `c`.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut vars = 0u32;
    let mut declared = 0usize;
    let mut saw_header = false;
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut overfull = false;

    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if !saw_header {
            let mut tokens = line.split_whitespace();
            if tokens.next() != Some("p") || tokens.next() != Some("cnf") {
                return Err(CnfError::MissingHeader);
            }
            let parse = |token: Option<&str>| {
                token
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| CnfError::BadToken { token: line.to_string() })
            };
            vars = parse(tokens.next())? as u32;
            declared = parse(tokens.next())? as usize;
            saw_header = true;
            continue;
        }
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| CnfError::BadToken { token: token.to_string() })?;
            if value == 0 {
                if current.len() != 3 || overfull {
                    return Err(CnfError::Not3Sat { clause: clauses.len() });
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
                overfull = false;
                continue;
            }
            if value.unsigned_abs() > vars as u64 {
                return Err(CnfError::VarOutOfRange { literal: value, vars });
            }
            if current.len() == 3 {
                overfull = true;
                continue;
            }
            let var = value.unsigned_abs() as u32 - 1;
            current.push(if value < 0 { Literal::negative(var) } else { Literal::positive(var) });
        }
    }
    if !saw_header {
        return Err(CnfError::MissingHeader);
    }
    if !current.is_empty() {
        return Err(CnfError::Not3Sat { clause: clauses.len() });
    }
    if clauses.len() != declared {
        return Err(CnfError::ClauseCountMismatch { declared, found: clauses.len() });
    }
    CnfFormula::new(vars, clauses)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// Multiplicity 2, hand size 2 (raisable via overrides).
    Base,
    /// Hand size 1 at multiplicity 3, using doubled clause tails.
    H1,
}

#[derive(Clone, Debug, Default)]
pub struct ReductionOptions {
    pub variant: Option<Variant>,
    pub r: Option<u32>,
    pub h: Option<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("no construction for r={r}, h={h}")]
    UnsupportedVariant { r: u32, h: u32 },
    #[error("assignment leaves clause {clause} unsatisfied")]
    UnsatisfiedAssignment { clause: usize },
}

/// A named deck region, 0-based inclusive on both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    pub name: String,
    pub start: usize,
    pub end: usize,
}

/// Where everything landed in the deck, plus the variable-to-color and
/// clause-offset tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layout {
    pub spans: Vec<Span>,
    /// (variable, affirming color, negating color), variables 0-based.
    pub color_map: Vec<(u32, u32, u32)>,
    /// `offsets[j]` is the value offset of clause `j`.
    pub offsets: Vec<u32>,
}

pub struct Reduction {
    pub instance: Instance,
    pub layout: Layout,
    /// The three colors carrying each clause's literals, ascending.
    pub clause_colors: Vec<[u32; 3]>,
    pub variant: Variant,
}

struct Builder {
    deck: Vec<Card>,
    n: u32,
    dummy: u32,
    extra_copies: u32,
    seen: HashSet<Card>,
    spans: Vec<Span>,
    open: Vec<(String, usize)>,
}

impl Builder {
    fn new(n: u32, dummy: u32, extra_copies: u32) -> Builder {
        Builder {
            deck: Vec::new(),
            n,
            dummy,
            extra_copies,
            seen: HashSet::new(),
            spans: Vec::new(),
            open: Vec::new(),
        }
    }

    fn push(&mut self, value: u32, color: u32) {
        if value > self.n {
            return;
        }
        let card = Card::new(value, color);
        self.deck.push(card);
        if color != self.dummy && self.extra_copies > 0 && self.seen.insert(card) {
            for _ in 0..self.extra_copies {
                self.deck.push(card);
            }
        }
    }

    fn begin(&mut self, name: String) {
        self.open.push((name, self.deck.len()));
    }

    fn end(&mut self) {
        let (name, start) = self.open.pop().expect("balanced span markers");
        debug_assert!(self.deck.len() > start, "span {name} is empty");
        self.spans.push(Span { name, start, end: self.deck.len() - 1 });
    }
}

fn emit_dump(builder: &mut Builder, base: u32, variant: Variant) {
    let d = builder.dummy;
    match variant {
        Variant::Base => {
            builder.push(base + 1, d);
            builder.push(base + 2, d);
            builder.push(base, d);
        }
        // One hand slot: only (base + 1) waits in hand.
        Variant::H1 => {
            builder.push(base + 1, d);
            builder.push(base, d);
            builder.push(base + 2, d);
        }
    }
}

fn emit_variable_phase(builder: &mut Builder, v: u32, variant: Variant) {
    let d = builder.dummy;
    // The base wrapper stores its 2 across the whole phase, squeezing the
    // hand to one slot. With hand size 1 there is nothing to squeeze, so
    // the 1 plays on arrival and the 2 follows at the end.
    let (first, last) = match variant {
        Variant::Base => (2, 1),
        Variant::H1 => (1, 2),
    };
    builder.push(first, d);
    for i in 1..=v {
        let (pos, neg) = (2 * i - 1, 2 * i);
        builder.push(2, pos);
        builder.push(2, neg);
        builder.push(1, pos);
        builder.push(3, pos);
        builder.push(4, pos);
        builder.push(5, pos);
        builder.push(1, neg);
        builder.push(3, neg);
        builder.push(4, neg);
        builder.push(5, neg);
    }
    builder.push(last, d);
}

fn emit_clause(builder: &mut Builder, j: u32, assoc: [u32; 3], v: u32, variant: Variant) {
    let o = 5 * (j - 1);
    let non_assoc: Vec<u32> = (1..=2 * v).filter(|k| !assoc.contains(k)).collect();

    for &k in &assoc {
        for value in o + 6..=o + 10 {
            builder.push(value, k);
        }
    }
    for &k in &non_assoc {
        for value in (o + 5..=o + 10).chain(o + 2..=o + 4) {
            builder.push(value, k);
        }
        if variant == Variant::H1 {
            // Second exit for a lagging color that could only bank one
            // card: play 2..4, chain the banked 5, then take this 6.
            builder.push(o + 6, k);
        }
    }

    builder.begin(format!("dump_in_{j}"));
    emit_dump(builder, 6 * (j - 1) + 6, variant);
    builder.end();

    for &k in &assoc {
        builder.push(o + 3, k);
    }
    for &k in &assoc {
        for value in [o + 2, o + 4, o + 5, o + 6] {
            builder.push(value, k);
        }
    }
    if variant == Variant::H1 {
        // Doubled tail: a second lagging literal color banks the 4 from
        // the first pass and crosses here; a third still cannot.
        for &k in &assoc {
            builder.push(o + 4, k);
        }
        for &k in &assoc {
            for value in [o + 3, o + 5, o + 6] {
                builder.push(value, k);
            }
        }
    }
}

/// The variable phase on its own, wrapper included, for v variables.
pub fn build_variable_phase(v: u32) -> Vec<Card> {
    let mut builder = Builder::new(u32::MAX, 2 * v + 1, 0);
    emit_variable_phase(&mut builder, v, Variant::Base);
    builder.deck
}

/// Hand dump triple for a dummy color sitting at `base - 1`.
pub fn build_hand_dump(base: u32, dummy: u32) -> [Card; 3] {
    [Card::new(base + 1, dummy), Card::new(base + 2, dummy), Card::new(base, dummy)]
}

/// Hand reduction wrapper: `(base + 1, dummy)`, the payload, `(base, dummy)`.
pub fn build_hand_reduction(base: u32, dummy: u32, payload: Vec<Card>) -> Vec<Card> {
    let mut out = vec![Card::new(base + 1, dummy)];
    out.extend(payload);
    out.push(Card::new(base, dummy));
    out
}

/// The full clause gadget template for clause `j` (1-based) with the
/// given literal colors, in a formula with `v` variables. Values are not
/// capped here; `reduce` drops anything above its n.
pub fn build_clause_gadget(j: u32, assoc: [u32; 3], v: u32) -> Vec<Card> {
    let mut builder = Builder::new(u32::MAX, 2 * v + 1, 0);
    emit_clause(&mut builder, j, assoc, v, Variant::Base);
    builder.deck
}

/// Builds the deck for a formula. Winnable with the produced parameters
/// exactly when the formula is satisfiable.
pub fn reduce(formula: &CnfFormula, opts: &ReductionOptions) -> Result<Reduction, ReductionError> {
    let variant = opts.variant.unwrap_or(Variant::Base);
    let (r, h) = match variant {
        Variant::Base => (opts.r.unwrap_or(2), opts.h.unwrap_or(2)),
        Variant::H1 => (opts.r.unwrap_or(3), opts.h.unwrap_or(1)),
    };
    let supported = match variant {
        Variant::Base => r >= 2 && h >= 2,
        Variant::H1 => r >= 3 && h == 1,
    };
    if !supported {
        return Err(ReductionError::UnsupportedVariant { r, h });
    }

    let v = formula.vars();
    let m = formula.clauses().len() as u32;
    let c = 2 * v + 1;
    let d = c;
    // Extra hand slots are soaked up by high dummy cards stored from the
    // very start, so the value range grows with them.
    let n = 6 * m + 2 + h.saturating_sub(2);
    let base_r = match variant {
        Variant::Base => 2,
        Variant::H1 => 3,
    };

    let mut builder = Builder::new(n, d, r - base_r);
    if h > 2 {
        builder.begin("wrapper".into());
        for value in 6 * m + 3..=n {
            builder.push(value, d);
        }
        builder.end();
    }
    builder.begin("sigma1".into());
    emit_variable_phase(&mut builder, v, variant);
    builder.end();

    let mut clause_colors = Vec::with_capacity(m as usize);
    for (index, clause) in formula.clauses().iter().enumerate() {
        let j = index as u32 + 1;
        let mut assoc = [clause[0].color(), clause[1].color(), clause[2].color()];
        assoc.sort_unstable();
        clause_colors.push(assoc);

        builder.begin(format!("dump_pre_{j}"));
        emit_dump(&mut builder, 6 * (j - 1) + 3, variant);
        builder.end();
        builder.begin(format!("clause_{j}"));
        emit_clause(&mut builder, j, assoc, v, variant);
        builder.end();
    }

    builder.begin("tail".into());
    for value in 5 * m + 2..=n {
        for k in 1..=2 * v {
            builder.push(value, k);
        }
    }
    builder.end();

    let layout = Layout {
        spans: builder.spans,
        color_map: (0..v).map(|i| (i, 2 * i + 1, 2 * i + 2)).collect(),
        offsets: (0..m).map(|j| 5 * j).collect(),
    };
    let instance = Instance::new(n, c, r, h, builder.deck)
        .expect("construction stays within its own bounds");
    Ok(Reduction { instance, layout, clause_colors, variant })
}

/// Witness plan for a satisfying assignment, for any base-variant deck.
/// The plan is deterministic: play and chain whatever is playable, store
/// dummies and the handful of cards the gadget routes call for, discard
/// the rest. Padding copies arrive right behind a card this plan already
/// holds or has outplayed, so they always fall through to discard.
pub fn assignment_plan(
    reduction: &Reduction,
    assignment: &[bool],
) -> Result<PlaySequence, ReductionError> {
    let instance = &reduction.instance;
    if reduction.variant != Variant::Base {
        return Err(ReductionError::UnsupportedVariant { r: instance.r(), h: instance.h() });
    }
    assert!(
        assignment.len() as u32 >= (instance.c() - 1) / 2,
        "assignment must cover every variable"
    );
    let chosen =
        |k: u32| if k % 2 == 1 { assignment[(k as usize - 1) / 2] } else { !assignment[k as usize / 2 - 1] };
    for (index, colors) in reduction.clause_colors.iter().enumerate() {
        if !colors.iter().any(|&k| chosen(k)) {
            return Err(ReductionError::UnsatisfiedAssignment { clause: index });
        }
    }

    let d = instance.c();
    let mut clause_at = vec![usize::MAX; instance.len()];
    for span in &reduction.layout.spans {
        if let Some(j) = span.name.strip_prefix("clause_").and_then(|t| t.parse::<usize>().ok()) {
            clause_at[span.start..=span.end].iter_mut().for_each(|slot| *slot = j - 1);
        }
    }

    let mut progress = vec![0u32; d as usize + 1];
    let mut hand: Vec<Card> = Vec::new();
    let mut steps = Vec::with_capacity(instance.len());
    for (cursor, &card) in instance.deck().iter().enumerate() {
        let k = card.color as usize;
        if progress[k] + 1 == card.value {
            progress[k] += 1;
            let mut chain = Vec::new();
            while let Some(at) =
                hand.iter().position(|held| progress[held.color as usize] + 1 == held.value)
            {
                let held = hand.remove(at);
                progress[held.color as usize] += 1;
                chain.push(held);
            }
            steps.push(Step::play_chain(chain));
            continue;
        }
        let keep = if card.color == d {
            true
        } else if card.value == 2 && progress[k] == 0 {
            chosen(card.color)
        } else if clause_at[cursor] != usize::MAX {
            let j = clause_at[cursor];
            let o = reduction.layout.offsets[j];
            let lagging = progress[k] == o + 1;
            if reduction.clause_colors[j].contains(&card.color) {
                lagging && card.value == o + 3
            } else {
                lagging && (card.value == o + 5 || card.value == o + 6)
            }
        } else {
            false
        };
        if keep && !hand.contains(&card) {
            debug_assert!((hand.len() as u32) < instance.h(), "gadget routes overflow the hand");
            let at = hand.partition_point(|held| *held <= card);
            hand.insert(at, card);
            steps.push(Step::store());
        } else {
            steps.push(Step::discard());
        }
    }
    Ok(PlaySequence::new(steps))
}
