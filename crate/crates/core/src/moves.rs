//! Move calculus on event words, with ruling transport.
//!
//! Every move is a window rewrite: a run of consecutive events is replaced by
//! another run with the same strand count on both ends. Crossing ordinals
//! before the window are unchanged, those after it shift by the change in the
//! window's crossing count.
//!
//! Anchors: for insertions (`h0`, `h1` split, `r1`) the anchor `k` means
//! "after event `k`" (0 = at the very left). For pattern moves it is the
//! 1-based index of the first matched event.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::diagram::{Event, EventKind, FrontDiagram, ValidationReport};
use crate::ruling::{check_ruling, enumerate_rulings_with_budget, NormalRuling, PairingState, RulingError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveKind {
    Handle0,
    Handle1,
    R1,
    R1Inv,
    R2,
    R2Inv,
    R3,
    Transpose,
}

impl MoveKind {
    pub const ALL: [MoveKind; 8] = [
        MoveKind::Handle0,
        MoveKind::Handle1,
        MoveKind::R1,
        MoveKind::R1Inv,
        MoveKind::R2,
        MoveKind::R2Inv,
        MoveKind::R3,
        MoveKind::Transpose,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            MoveKind::Handle0 => "h0",
            MoveKind::Handle1 => "h1",
            MoveKind::R1 => "r1",
            MoveKind::R1Inv => "r1inv",
            MoveKind::R2 => "r2",
            MoveKind::R2Inv => "r2inv",
            MoveKind::R3 => "r3",
            MoveKind::Transpose => "tr",
        }
    }

    /// Legendrian isotopies, as opposed to handle attachments.
    pub fn is_isotopy(self) -> bool {
        !matches!(self, MoveKind::Handle0 | MoveKind::Handle1)
    }

    /// Whether the anchor counts slices (insertion) rather than events.
    fn inserts(self, variant: Variant) -> bool {
        match self {
            MoveKind::Handle0 | MoveKind::R1 => true,
            MoveKind::Handle1 => variant != Variant::Merge,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    None,
    /// R1 kink or R2 cusp passage above the strand, or below the cusp.
    Up,
    Down,
    /// 1-handle inserting `rc p, lc p` between two adjacent strands.
    Split,
    /// 1-handle removing an adjacent `rc p, lc p` pair.
    Merge,
}

/// One move of the calculus.
///
/// `anchor: None` picks the first anchor at which the move applies.
/// `position` is only meaningful for insertions and is 0 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub kind: MoveKind,
    pub anchor: Option<usize>,
    pub position: usize,
    pub variant: Variant,
}

impl Move {
    pub fn handle0(anchor: usize, position: usize) -> Self {
        Move { kind: MoveKind::Handle0, anchor: Some(anchor), position, variant: Variant::None }
    }

    pub fn split(anchor: usize, position: usize) -> Self {
        Move { kind: MoveKind::Handle1, anchor: Some(anchor), position, variant: Variant::Split }
    }

    pub fn merge(event: usize) -> Self {
        Move { kind: MoveKind::Handle1, anchor: Some(event), position: 0, variant: Variant::Merge }
    }

    pub fn r1(anchor: usize, position: usize, up: bool) -> Self {
        Move { kind: MoveKind::R1, anchor: Some(anchor), position, variant: up_down(up) }
    }

    pub fn r2(event: usize, up: bool) -> Self {
        Move { kind: MoveKind::R2, anchor: Some(event), position: 0, variant: up_down(up) }
    }

    pub fn pattern(kind: MoveKind, event: usize) -> Self {
        Move { kind, anchor: Some(event), position: 0, variant: Variant::None }
    }

    fn with_anchor(self, anchor: usize) -> Self {
        Move { anchor: Some(anchor), ..self }
    }
}

fn up_down(up: bool) -> Variant {
    if up {
        Variant::Up
    } else {
        Variant::Down
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.keyword())?;
        if let Some(a) = self.anchor {
            write!(f, " @{a}")?;
        }
        if self.kind.inserts(self.variant) {
            write!(f, " {}", self.position)?;
        }
        match self.variant {
            Variant::Up => write!(f, " up"),
            Variant::Down => write!(f, " down"),
            Variant::Merge => write!(f, " merge"),
            Variant::None | Variant::Split => Ok(()),
        }
    }
}

impl Serialize for Move {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct MoveParseError {
    pub message: String,
}

impl FromStr for Move {
    type Err = MoveParseError;

    /// `h0 [@k] [p]`, `h1 [@k] [p]`, `h1 [@k] merge`, `r1 [@k] [p] [up|down]`,
    /// `r1inv [@k]`, `r2 [@k] [up|down]`, `r2inv [@k]`, `r3 [@k]`, `tr [@k]`.
    /// Omitted positions default to 1 and omitted variants to `up`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: String| MoveParseError { message: m };
        let mut tokens = s.split_whitespace();
        let kw = tokens.next().ok_or_else(|| err("empty move".into()))?;
        let kind = MoveKind::ALL
            .into_iter()
            .find(|k| k.keyword() == kw)
            .ok_or_else(|| err(format!("unknown move `{kw}`")))?;
        let mut anchor = None;
        let mut position = None;
        let mut variant = None;
        for t in tokens {
            if let Some(a) = t.strip_prefix('@') {
                if anchor.is_some() {
                    return Err(err("anchor given twice".into()));
                }
                anchor = Some(a.parse::<usize>().map_err(|_| err(format!("bad anchor `{t}`")))?);
            } else if let Ok(p) = t.parse::<usize>() {
                if position.is_some() {
                    return Err(err("position given twice".into()));
                }
                if p == 0 {
                    return Err(err("positions are 1-based".into()));
                }
                position = Some(p);
            } else {
                let v = match t {
                    "up" => Variant::Up,
                    "down" => Variant::Down,
                    "merge" => Variant::Merge,
                    "split" => Variant::Split,
                    _ => return Err(err(format!("unexpected token `{t}`"))),
                };
                if variant.replace(v).is_some() {
                    return Err(err("variant given twice".into()));
                }
            }
        }
        let variant = match (kind, variant) {
            (MoveKind::R1 | MoveKind::R2, None) => Variant::Up,
            (MoveKind::R1 | MoveKind::R2, Some(v @ (Variant::Up | Variant::Down))) => v,
            (MoveKind::Handle1, None) => Variant::Split,
            (MoveKind::Handle1, Some(v @ (Variant::Split | Variant::Merge))) => v,
            (_, None) => Variant::None,
            (k, Some(_)) => return Err(err(format!("`{}` takes no such variant", k.keyword()))),
        };
        let position = if kind.inserts(variant) {
            position.unwrap_or(1)
        } else if position.is_some() {
            return Err(err(format!("`{kw}` takes no position")));
        } else {
            0
        };
        Ok(Move { kind, anchor, position, variant })
    }
}

/// Parses a move script: one move per line, `#` comments, blank lines ignored.
pub fn parse_script(text: &str) -> Result<Vec<Move>, (usize, MoveParseError)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(body.parse::<Move>().map_err(|e| (i + 1, e))?);
    }
    Ok(out)
}

pub fn format_script(moves: &[Move]) -> String {
    moves.iter().map(|m| format!("{m}\n")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(ValidationReport),
    #[error("`{mv}` does not apply: {reason}")]
    NotApplicable { mv: String, reason: String },
    #[error("ruling {ruling} is not a normal ruling of the source diagram")]
    OutOfDomain { ruling: NormalRuling },
    #[error("ruling {ruling} has no normal image under `{mv}`")]
    TransportFailure { mv: String, ruling: NormalRuling },
    #[error("transport of {ruling} under `{mv}` is ambiguous")]
    AmbiguousTransport { mv: String, ruling: NormalRuling },
    #[error(transparent)]
    Ruling(#[from] RulingError),
}

/// Replacement of `removed` events starting at the 0-based index `start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rewrite {
    pub start: usize,
    pub removed: usize,
    pub inserted: Vec<Event>,
}

impl Rewrite {
    pub fn apply(&self, d: &FrontDiagram) -> FrontDiagram {
        let mut events = d.events().to_vec();
        events.splice(self.start..self.start + self.removed, self.inserted.iter().copied());
        FrontDiagram::new(events)
    }
}

fn not_applicable(m: &Move, reason: impl Into<String>) -> MoveError {
    MoveError::NotApplicable { mv: m.to_string(), reason: reason.into() }
}

/// New events for swapping `e1, e2` (in that order) when their supports in the
/// middle slice are disjoint.
///
/// Supports use doubled coordinates: slots `p, p + 1` span `[2p, 2p + 2]`, the
/// gap a cusp opens or closes below slot `p` is the point `2p - 1`.
pub fn transpose_events(e1: Event, e2: Event) -> Option<(Event, Event)> {
    #[derive(Clone, Copy)]
    enum Support {
        Span(usize, usize),
        Gap(usize),
    }
    let span = |p: usize| Support::Span(2 * p, 2 * p + 2);
    let s1 = match e1.kind {
        EventKind::RightCusp => Support::Gap(2 * e1.position - 1),
        _ => span(e1.position),
    };
    let s2 = match e2.kind {
        EventKind::LeftCusp => Support::Gap(2 * e2.position - 1),
        _ => span(e2.position),
    };
    let (lo1, hi1) = match s1 {
        Support::Span(a, b) => (a, b),
        Support::Gap(g) => (g, g),
    };
    let (lo2, hi2) = match s2 {
        Support::Span(a, b) => (a, b),
        Support::Gap(g) => (g, g),
    };
    let above = if lo2 > hi1 {
        true
    } else if hi2 < lo1 {
        false
    } else {
        return None;
    };
    let shift = |p: usize, d: isize| p.checked_add_signed(d).filter(|&q| q >= 1);
    if above {
        let p2 = shift(e2.position, -e1.kind.strand_delta())?;
        Some((Event { kind: e2.kind, position: p2 }, e1))
    } else {
        let p1 = shift(e1.position, e2.kind.strand_delta())?;
        Some((e2, Event { kind: e1.kind, position: p1 }))
    }
}

/// The rewrite performed by a move with a fixed anchor.
fn rewrite_at(d: &FrontDiagram, m: &Move, profile: &[usize]) -> Result<Rewrite, MoveError> {
    let events = d.events();
    let anchor = m.anchor.expect("anchor resolved");
    if m.kind.inserts(m.variant) {
        if anchor > events.len() {
            return Err(not_applicable(m, format!("anchor beyond the {} events", events.len())));
        }
        let s = profile[anchor];
        let p = m.position;
        let inserted = match m.kind {
            MoveKind::Handle0 => {
                if p == 0 || p > s + 1 {
                    return Err(not_applicable(m, format!("needs 1 <= p <= {}", s + 1)));
                }
                vec![Event::lc(p), Event::rc(p)]
            }
            MoveKind::Handle1 => {
                if p == 0 || p + 1 > s {
                    return Err(not_applicable(m, format!("needs two adjacent strands at slots {p}, {}", p + 1)));
                }
                vec![Event::rc(p), Event::lc(p)]
            }
            MoveKind::R1 => {
                if p == 0 || p > s {
                    return Err(not_applicable(m, format!("no strand at slot {p}")));
                }
                match m.variant {
                    Variant::Up => vec![Event::lc(p + 1), Event::x(p), Event::rc(p + 1)],
                    _ => vec![Event::lc(p), Event::x(p + 1), Event::rc(p)],
                }
            }
            _ => unreachable!("not an insertion"),
        };
        return Ok(Rewrite { start: anchor, removed: 0, inserted });
    }

    if anchor == 0 || anchor > events.len() {
        return Err(not_applicable(m, "anchor is not an event"));
    }
    let i = anchor - 1;
    let window = |n: usize| -> Result<&[Event], MoveError> {
        events.get(i..i + n).ok_or_else(|| not_applicable(m, format!("needs {n} events from the anchor")))
    };
    use EventKind::{Crossing as X, LeftCusp as L, RightCusp as R};
    let kinds = |w: &[Event]| -> Vec<EventKind> { w.iter().map(|e| e.kind).collect() };
    match m.kind {
        MoveKind::Handle1 => {
            let w = window(2)?;
            if kinds(w) == [R, L] && w[0].position == w[1].position {
                Ok(Rewrite { start: i, removed: 2, inserted: vec![] })
            } else {
                Err(not_applicable(m, "expects `rc p, lc p`"))
            }
        }
        MoveKind::R1Inv => {
            let w = window(3)?;
            let q = w[0].position;
            let ok = kinds(w) == [L, X, R]
                && w[2].position == q
                && (w[1].position + 1 == q || w[1].position == q + 1);
            if ok {
                Ok(Rewrite { start: i, removed: 3, inserted: vec![] })
            } else {
                Err(not_applicable(m, "expects `lc q, x q-1, rc q` or `lc q, x q+1, rc q`"))
            }
        }
        MoveKind::R2 => {
            let e = events[i];
            let s = profile[i];
            let p = e.position;
            let up = m.variant == Variant::Up;
            let inserted = match (e.kind, up) {
                (L, true) if p <= s => vec![Event::lc(p + 1), Event::x(p), Event::x(p + 1)],
                (L, false) if p >= 2 => vec![Event::lc(p - 1), Event::x(p), Event::x(p - 1)],
                (R, true) if p + 2 <= s => vec![Event::x(p + 1), Event::x(p), Event::rc(p + 1)],
                (R, false) if p >= 2 => vec![Event::x(p - 1), Event::x(p), Event::rc(p - 1)],
                (X, _) => return Err(not_applicable(m, "anchor is not a cusp")),
                _ => return Err(not_applicable(m, "no strand to pass the cusp through")),
            };
            Ok(Rewrite { start: i, removed: 1, inserted })
        }
        MoveKind::R2Inv => {
            let w = window(3)?;
            let (a, b, c) = (w[0].position, w[1].position, w[2].position);
            let replacement = match kinds(w).as_slice() {
                [L, X, X] if b + 1 == a && c == a => Event::lc(a - 1),
                [L, X, X] if b == a + 1 && c == a => Event::lc(a + 1),
                [X, X, R] if b + 1 == a && c == a => Event::rc(a - 1),
                [X, X, R] if b == a + 1 && c == a => Event::rc(a + 1),
                _ => return Err(not_applicable(m, "no cusp-through-strand pattern")),
            };
            Ok(Rewrite { start: i, removed: 3, inserted: vec![replacement] })
        }
        MoveKind::R3 => {
            let w = window(3)?;
            let (a, b, c) = (w[0].position, w[1].position, w[2].position);
            if kinds(w) == [X, X, X] && a == c && (b == a + 1 || b + 1 == a) {
                Ok(Rewrite { start: i, removed: 3, inserted: vec![Event::x(b), Event::x(a), Event::x(b)] })
            } else {
                Err(not_applicable(m, "expects `x q, x q±1, x q`"))
            }
        }
        MoveKind::Transpose => {
            let w = window(2)?;
            match transpose_events(w[0], w[1]) {
                Some((a, b)) => Ok(Rewrite { start: i, removed: 2, inserted: vec![a, b] }),
                None => Err(not_applicable(m, "events do not have disjoint supports")),
            }
        }
        MoveKind::Handle0 | MoveKind::R1 => unreachable!("insertions handled above"),
    }
}

fn candidate_anchors(d: &FrontDiagram, m: &Move) -> std::ops::RangeInclusive<usize> {
    if m.kind.inserts(m.variant) {
        0..=d.len()
    } else {
        1..=d.len()
    }
}

/// Fixes the anchor of a move, picking the first applicable one if omitted.
pub fn resolve_anchor(d: &FrontDiagram, m: &Move) -> Result<(Move, Rewrite), MoveError> {
    let profile = d.strand_profile();
    match m.anchor {
        Some(_) => rewrite_at(d, m, &profile).map(|r| (*m, r)),
        None => candidate_anchors(d, m)
            .find_map(|k| {
                let mk = m.with_anchor(k);
                rewrite_at(d, &mk, &profile).ok().map(|r| (mk, r))
            })
            .ok_or_else(|| not_applicable(m, "no anchor matches")),
    }
}

/// How rulings of the source map to rulings of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulingTransport {
    pub mv: Move,
    pub source: FrontDiagram,
    pub target: FrontDiagram,
    pub rewrite: Rewrite,
    crossings_before: usize,
    source_window: usize,
    target_window: usize,
}

fn crossings_in(events: &[Event]) -> usize {
    events.iter().filter(|e| e.is_crossing()).count()
}

fn run_window(state: &mut PairingState, events: &[Event], first_index: usize, switches: &[bool]) -> bool {
    let mut k = 0;
    for (j, e) in events.iter().enumerate() {
        let ok = match e.kind {
            EventKind::LeftCusp => {
                state.left_cusp(e.position, first_index + j);
                true
            }
            EventKind::RightCusp => state.right_cusp(e.position).is_ok(),
            EventKind::Crossing => {
                k += 1;
                state.crossing(e.position, switches[k - 1]).is_ok()
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

impl RulingTransport {
    pub fn kind(&self) -> MoveKind {
        self.mv.kind
    }

    /// Image of a ruling of the source.
    ///
    /// Handles keep the switch set as is. Isotopies match the window locally:
    /// starting from the pairing the ruling produces at the left edge of the
    /// window, the image switches are the unique choice of window crossings
    /// that reproduces the pairing at the right edge (one more switch for an
    /// R1 kink, one fewer for its inverse, the same number otherwise).
    pub fn transport(&self, ruling: &NormalRuling) -> Result<NormalRuling, MoveError> {
        if check_ruling(&self.source, ruling)?.is_some() {
            return Err(MoveError::OutOfDomain { ruling: ruling.clone() });
        }
        let cb = self.crossings_before;
        let (cs, ct) = (self.source_window, self.target_window);
        let mut image: Vec<usize> = Vec::with_capacity(ruling.len() + 1);
        let mut inside = Vec::new();
        for &o in ruling.switches() {
            if o <= cb {
                image.push(o);
            } else if o <= cb + cs {
                inside.push(o - cb);
            } else {
                image.push(o - cs + ct);
            }
        }
        if self.mv.kind.is_isotopy() {
            let local = self.match_window(ruling, &inside)?;
            image.extend(local.into_iter().map(|k| k + cb));
        } else {
            debug_assert!(cs == 0 && ct == 0);
        }
        let image = NormalRuling::new(image);
        if check_ruling(&self.target, &image)?.is_some() {
            return Err(MoveError::TransportFailure { mv: self.mv.to_string(), ruling: ruling.clone() });
        }
        Ok(image)
    }

    fn match_window(&self, ruling: &NormalRuling, inside: &[usize]) -> Result<Vec<usize>, MoveError> {
        let start = self.rewrite.start;
        let mut state = PairingState::new();
        let prefix = FrontDiagram::new(self.source.events()[..start].to_vec());
        let flags: Vec<bool> = (1..=crossings_in(prefix.events())).map(|o| ruling.contains(o)).collect();
        let ok = run_window(&mut state, prefix.events(), 0, &flags);
        debug_assert!(ok, "prefix of a normal ruling runs");
        let src_events = &self.source.events()[start..start + self.rewrite.removed];
        let src_flags: Vec<bool> = (1..=self.source_window).map(|k| inside.contains(&k)).collect();
        let mut out_state = state.clone();
        let ok = run_window(&mut out_state, src_events, start, &src_flags);
        debug_assert!(ok, "window of a normal ruling runs");
        let want = out_state.mates();
        let size = match self.mv.kind {
            MoveKind::R1 => inside.len() + 1,
            MoveKind::R1Inv => match inside.len().checked_sub(1) {
                Some(s) => s,
                None => return Err(MoveError::TransportFailure { mv: self.mv.to_string(), ruling: ruling.clone() }),
            },
            _ => inside.len(),
        };
        let ct = self.target_window;
        let mut found: Option<Vec<usize>> = None;
        for mask in 0u32..(1 << ct) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let flags: Vec<bool> = (0..ct).map(|k| mask & (1 << k) != 0).collect();
            let mut st = state.clone();
            if run_window(&mut st, &self.rewrite.inserted, start, &flags) && st.mates() == want {
                if found.is_some() {
                    return Err(MoveError::AmbiguousTransport { mv: self.mv.to_string(), ruling: ruling.clone() });
                }
                found = Some((1..=ct).filter(|k| flags[k - 1]).collect());
            }
        }
        found.ok_or_else(|| MoveError::TransportFailure { mv: self.mv.to_string(), ruling: ruling.clone() })
    }

    /// The transport on every ruling of the source.
    pub fn table(&self, budget: Option<u64>) -> Result<Vec<TransportRow>, MoveError> {
        let rulings = enumerate_rulings_with_budget(&self.source, budget)?;
        Ok(rulings.into_iter().map(|r| {
            let image = self.transport(&r);
            (r, image)
        }).collect())
    }
}

/// A source ruling and its image.
pub type TransportRow = (NormalRuling, Result<NormalRuling, MoveError>);

pub fn apply_move(d: &FrontDiagram, m: &Move) -> Result<(FrontDiagram, RulingTransport), MoveError> {
    let report = d.validate();
    if !report.is_ok() {
        return Err(MoveError::InvalidDiagram(report));
    }
    let (mv, rewrite) = resolve_anchor(d, m)?;
    let target = rewrite.apply(d);
    debug_assert!(target.validate().is_ok(), "{mv} on {d:?}");
    let events = d.events();
    let transport = RulingTransport {
        mv,
        source: d.clone(),
        target: target.clone(),
        crossings_before: crossings_in(&events[..rewrite.start]),
        source_window: crossings_in(&events[rewrite.start..rewrite.start + rewrite.removed]),
        target_window: crossings_in(&rewrite.inserted),
        rewrite,
    };
    Ok((target, transport))
}

pub fn transport_ruling(t: &RulingTransport, ruling: &NormalRuling) -> Result<NormalRuling, MoveError> {
    t.transport(ruling)
}

/// Every applicable move with an explicit anchor.
///
/// Order: by kind (h0, h1 split, h1 merge, r1, r1inv, r2, r2inv, r3, tr), then
/// anchor, then position, then variant.
pub fn enumerate_applicable_moves(d: &FrontDiagram) -> Vec<Move> {
    if !d.validate().is_ok() {
        return Vec::new();
    }
    let profile = d.strand_profile();
    let n = d.len();
    let mut candidates = Vec::new();
    for (k, &s) in profile.iter().enumerate() {
        for p in 1..=s + 1 {
            candidates.push(Move::handle0(k, p));
        }
    }
    for (k, &s) in profile.iter().enumerate() {
        for p in 1..s {
            candidates.push(Move::split(k, p));
        }
    }
    for k in 1..=n {
        candidates.push(Move::merge(k));
    }
    for (k, &s) in profile.iter().enumerate() {
        for p in 1..=s {
            candidates.push(Move::r1(k, p, true));
            candidates.push(Move::r1(k, p, false));
        }
    }
    for kind in [MoveKind::R1Inv, MoveKind::R2, MoveKind::R2Inv, MoveKind::R3, MoveKind::Transpose] {
        for k in 1..=n {
            if kind == MoveKind::R2 {
                candidates.push(Move::r2(k, true));
                candidates.push(Move::r2(k, false));
            } else {
                candidates.push(Move::pattern(kind, k));
            }
        }
    }
    candidates.into_iter().filter(|m| rewrite_at(d, m, &profile).is_ok()).collect()
}
