//! Plain-text formats: instances, plans, and reduction layouts.
//!
//! An instance file is a header line `HANABI v1`, a parameter line
//! `n=.. c=.. r=.. h=..`, and one `value color` pair per line. Blank
//! lines and `#` comments are ignored when reading and never written. A
//! plan file holds one step per line: `d`, `s`, or `p`, optionally
//! followed by ` | ` and the chained cards as `value:color` tokens.
//! Layout files use `block`, `colormap`, and `offset` lines with 1-based
//! positions.

use std::fmt;
use std::fmt::Write as _;

use crate::model::{Card, DrawAction, Instance, InstanceError, PlaySequence, Step};
use crate::reduction::Layout;

#[derive(Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number in the input text.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    BadParameters,
    BadCard,
    ValueOutOfRange,
    ColorOutOfRange,
    TooManyCopies,
    BadStep,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            ParseErrorKind::MissingHeader => "missing HANABI v1 header",
            ParseErrorKind::BadParameters => "malformed parameter line",
            ParseErrorKind::BadCard => "malformed card line",
            ParseErrorKind::ValueOutOfRange => "value out of range",
            ParseErrorKind::ColorOutOfRange => "color out of range",
            ParseErrorKind::TooManyCopies => "card repeated more than r times",
            ParseErrorKind::BadStep => "malformed step line",
        };
        f.write_str(text)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, line {}", self.kind, self.line)
    }
}

impl std::error::Error for ParseError {}

fn significant(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(at, line)| (at + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = significant(text);
    let total = text.lines().count();

    let (header_line, header) = lines
        .next()
        .ok_or(ParseError { line: total.max(1), kind: ParseErrorKind::MissingHeader })?;
    if header != "HANABI v1" {
        return Err(ParseError { line: header_line, kind: ParseErrorKind::MissingHeader });
    }

    let (params_line, params) =
        lines.next().ok_or(ParseError { line: total + 1, kind: ParseErrorKind::BadParameters })?;
    let bad_params = ParseError { line: params_line, kind: ParseErrorKind::BadParameters };
    let mut fields = [0u32; 4];
    let mut tokens = params.split_whitespace();
    for (field, name) in fields.iter_mut().zip(["n=", "c=", "r=", "h="]) {
        *field = tokens
            .next()
            .and_then(|token| token.strip_prefix(name))
            .and_then(|digits| digits.parse().ok())
            .ok_or(ParseError { line: params_line, kind: ParseErrorKind::BadParameters })?;
    }
    if tokens.next().is_some() {
        return Err(bad_params);
    }
    let [n, c, r, h] = fields;

    let mut deck = Vec::new();
    let mut card_lines = Vec::new();
    for (line, content) in lines {
        let mut tokens = content.split_whitespace();
        let mut next = || tokens.next().and_then(|token| token.parse::<u32>().ok());
        match (next(), next(), tokens.next()) {
            (Some(value), Some(color), None) => {
                deck.push(Card::new(value, color));
                card_lines.push(line);
            }
            _ => return Err(ParseError { line, kind: ParseErrorKind::BadCard }),
        }
    }

    Instance::new(n, c, r, h, deck).map_err(|err| match err {
        InstanceError::BadParams => bad_params,
        InstanceError::ValueOutOfRange { index, .. } => {
            ParseError { line: card_lines[index], kind: ParseErrorKind::ValueOutOfRange }
        }
        InstanceError::ColorOutOfRange { index, .. } => {
            ParseError { line: card_lines[index], kind: ParseErrorKind::ColorOutOfRange }
        }
        InstanceError::MultiplicityExceeded { value, color, .. } => {
            // The instance reports the pair; the offending line is its
            // (r + 1)-th occurrence.
            let at = deck_nth_occurrence(&card_lines, text, value, color, r);
            ParseError { line: at, kind: ParseErrorKind::TooManyCopies }
        }
    })
}

fn deck_nth_occurrence(card_lines: &[usize], text: &str, value: u32, color: u32, r: u32) -> usize {
    let mut seen = 0;
    for (line, content) in significant(text).skip(2) {
        let mut tokens = content.split_whitespace().filter_map(|t| t.parse::<u32>().ok());
        if tokens.next() == Some(value) && tokens.next() == Some(color) {
            seen += 1;
            if seen == r + 1 {
                return line;
            }
        }
    }
    *card_lines.last().unwrap_or(&1)
}

pub fn emit_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "HANABI v1");
    let _ = writeln!(
        out,
        "n={} c={} r={} h={}",
        instance.n(),
        instance.c(),
        instance.r(),
        instance.h()
    );
    for card in instance.deck() {
        let _ = writeln!(out, "{} {}", card.value, card.color);
    }
    out
}

pub fn parse_plan(text: &str) -> Result<PlaySequence, ParseError> {
    let mut steps = Vec::new();
    for (line, content) in significant(text) {
        let bad = ParseError { line, kind: ParseErrorKind::BadStep };
        let (head, chain) = match content.split_once('|') {
            Some((head, rest)) => (head.trim(), rest.trim()),
            None => (content, ""),
        };
        let draw_action = match head {
            "d" => DrawAction::Discard,
            "s" => DrawAction::Store,
            "p" => DrawAction::PlayFromDeck,
            _ => return Err(bad),
        };
        let mut hand_plays = Vec::new();
        for token in chain.split_whitespace() {
            let card = token
                .split_once(':')
                .and_then(|(v, k)| Some(Card::new(v.parse().ok()?, k.parse().ok()?)))
                .ok_or(ParseError { line, kind: ParseErrorKind::BadStep })?;
            hand_plays.push(card);
        }
        steps.push(Step { draw_action, hand_plays });
    }
    Ok(PlaySequence::new(steps))
}

pub fn emit_plan(plan: &PlaySequence) -> String {
    let mut out = String::new();
    for step in &plan.steps {
        let letter = match step.draw_action {
            DrawAction::Discard => "d",
            DrawAction::Store => "s",
            DrawAction::PlayFromDeck => "p",
        };
        out.push_str(letter);
        if !step.hand_plays.is_empty() {
            out.push_str(" |");
            for card in &step.hand_plays {
                let _ = write!(out, " {card}");
            }
        }
        out.push('\n');
    }
    out
}

/// Renders a reduction layout; positions become 1-based inclusive.
pub fn emit_layout(layout: &Layout) -> String {
    let mut out = String::new();
    for span in &layout.spans {
        let _ = writeln!(out, "block {} {} {}", span.name, span.start + 1, span.end + 1);
    }
    for &(var, pos, neg) in &layout.color_map {
        let _ = writeln!(out, "colormap {} {} {}", var + 1, pos, neg);
    }
    for (index, &offset) in layout.offsets.iter().enumerate() {
        let _ = writeln!(out, "offset {} {}", index + 1, offset);
    }
    out
}
