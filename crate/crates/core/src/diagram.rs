//! Event-word encoding of Legendrian fronts.
//!
//! A front in generic position is swept left to right. Every cusp and crossing
//! sits at its own x-coordinate, so the whole diagram is the ordered list of
//! those events. Each event carries the 1-based vertical slot it acts on,
//! counted from the bottom strand of the slice just before it:
//!
//! * `lc p` inserts two strands at slots `p` and `p + 1`,
//! * `rc p` joins the strands at `p` and `p + 1`,
//! * `x p` exchanges the strands at `p` and `p + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    LeftCusp,
    RightCusp,
    Crossing,
}

impl EventKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EventKind::LeftCusp => "lc",
            EventKind::RightCusp => "rc",
            EventKind::Crossing => "x",
        }
    }

    /// Change in strand count caused by the event.
    pub fn strand_delta(self) -> isize {
        match self {
            EventKind::LeftCusp => 2,
            EventKind::RightCusp => -2,
            EventKind::Crossing => 0,
        }
    }
}

/// Serialized as its text form, e.g. `"lc 1"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    pub kind: EventKind,
    /// 1-based slot, 1 = bottom strand.
    pub position: usize,
}

impl Event {
    pub const fn lc(position: usize) -> Self {
        Event { kind: EventKind::LeftCusp, position }
    }

    pub const fn rc(position: usize) -> Self {
        Event { kind: EventKind::RightCusp, position }
    }

    pub const fn x(position: usize) -> Self {
        Event { kind: EventKind::Crossing, position }
    }

    pub fn is_crossing(&self) -> bool {
        self.kind == EventKind::Crossing
    }

    /// Whether the event is legal on a slice carrying `strands` strands.
    pub fn fits(&self, strands: usize) -> bool {
        let p = self.position;
        match self.kind {
            EventKind::LeftCusp => p >= 1 && p <= strands + 1,
            EventKind::RightCusp | EventKind::Crossing => p >= 1 && p < strands,
        }
    }
}

impl Serialize for Event {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        crate::text::parse_event(&s).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.keyword(), self.position)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Slot 0 does not exist.
    ZeroPosition,
    LeftCuspOutOfRange,
    RightCuspOutOfRange,
    CrossingOutOfRange,
    /// Strands remain alive after the last event.
    NotClosed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 1-based index of the offending event (the last event for `NotClosed`).
    pub event: usize,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "event {}: {}", self.event, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            None => write!(f, "ok"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("invalid diagram: {0}")]
    Invalid(ValidationReport),
    #[error("braid letter {letter} is outside 1..{max}")]
    InvalidBraidLetter { letter: usize, max: usize },
    #[error("a braid closure needs at least 2 strands and a non-empty word")]
    EmptyBraid,
}

/// A front diagram as an ordered event word.
///
/// The word itself is not required to be valid; operations that need a closed
/// generic front call [`FrontDiagram::ensure_valid`] first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrontDiagram {
    events: Vec<Event>,
}

impl FrontDiagram {
    pub fn new(events: Vec<Event>) -> Self {
        FrontDiagram { events }
    }

    pub fn empty() -> Self {
        FrontDiagram::default()
    }

    /// Builds a diagram and rejects it unless it validates.
    pub fn checked(events: Vec<Event>) -> Result<Self, DiagramError> {
        let d = FrontDiagram::new(events);
        d.ensure_valid()?;
        Ok(d)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn crossing_count(&self) -> usize {
        self.events.iter().filter(|e| e.is_crossing()).count()
    }

    pub fn left_cusp_count(&self) -> usize {
        self.events.iter().filter(|e| e.kind == EventKind::LeftCusp).count()
    }

    /// 0-based event indices of the crossings; crossing ordinal `k` lives at
    /// `crossing_events()[k - 1]`.
    pub fn crossing_events(&self) -> Vec<usize> {
        self.events
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_crossing())
            .map(|(i, _)| i)
            .collect()
    }

    /// Strand count of every slice: entry `k` is the count after `k` events,
    /// so the vector has `len() + 1` entries. Assumes the word is valid.
    pub fn strand_profile(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.events.len() + 1);
        let mut s = 0usize;
        out.push(s);
        for e in &self.events {
            s = s.saturating_add_signed(e.kind.strand_delta());
            out.push(s);
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut strands = 0usize;
        for (i, e) in self.events.iter().enumerate() {
            if !e.fits(strands) {
                let (rule, message) = if e.position == 0 {
                    (Rule::ZeroPosition, "positions are 1-based".to_string())
                } else {
                    match e.kind {
                        EventKind::LeftCusp => (
                            Rule::LeftCuspOutOfRange,
                            format!(
                                "left cusp at {} needs 1 <= p <= {} ({} strands alive)",
                                e.position,
                                strands + 1,
                                strands
                            ),
                        ),
                        EventKind::RightCusp => (
                            Rule::RightCuspOutOfRange,
                            format!(
                                "right cusp at {} needs p + 1 <= {} strands",
                                e.position, strands
                            ),
                        ),
                        EventKind::Crossing => (
                            Rule::CrossingOutOfRange,
                            format!(
                                "crossing at {} needs p + 1 <= {} strands",
                                e.position, strands
                            ),
                        ),
                    }
                };
                return ValidationReport { violations: vec![Violation { event: i + 1, rule, message }] };
            }
            strands = strands.saturating_add_signed(e.kind.strand_delta());
        }
        if strands != 0 {
            return ValidationReport {
                violations: vec![Violation {
                    event: self.events.len(),
                    rule: Rule::NotClosed,
                    message: format!("{strands} strands remain after the last event"),
                }],
            };
        }
        ValidationReport::default()
    }

    pub fn ensure_valid(&self) -> Result<(), DiagramError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(DiagramError::Invalid(report))
        }
    }

    pub fn trace(&self) -> Result<StrandTrace, DiagramError> {
        self.ensure_valid()?;
        Ok(StrandTrace::build(self))
    }

    pub fn component_count(&self) -> Result<usize, DiagramError> {
        Ok(self.trace()?.component_count())
    }

    /// Places `other` above `self`, with every component of `other` nested
    /// above all strands of `self` (a split union when concatenated this way).
    pub fn disjoint_union(&self, other: &FrontDiagram) -> FrontDiagram {
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events);
        FrontDiagram::new(events)
    }
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

impl From<Vec<Event>> for FrontDiagram {
    fn from(events: Vec<Event>) -> Self {
        FrontDiagram::new(events)
    }
}

pub type StrandId = usize;
pub type ComponentId = usize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CuspTally {
    pub left: usize,
    pub right: usize,
}

/// Strand bookkeeping of a valid diagram.
///
/// A strand runs from the left cusp that creates it to the right cusp that
/// ends it, passing through crossings. Strands are numbered in birth order,
/// the lower branch of a left cusp first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandTrace {
    /// `slices[k]` lists the strand at each slot after `k` events.
    pub slices: Vec<Vec<StrandId>>,
    /// Component of every strand.
    pub component_of: Vec<ComponentId>,
    pub tallies: Vec<CuspTally>,
}

impl StrandTrace {
    fn build(d: &FrontDiagram) -> Self {
        let mut parent: Vec<usize> = Vec::new();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let mut slices = Vec::with_capacity(d.len() + 1);
        let mut cur: Vec<StrandId> = Vec::new();
        slices.push(cur.clone());
        // (strand, is_left) per cusp, resolved to components afterwards
        let mut cusps: Vec<(StrandId, bool)> = Vec::new();
        for e in d.events() {
            let p = e.position - 1;
            match e.kind {
                EventKind::LeftCusp => {
                    let lo = parent.len();
                    parent.push(lo);
                    parent.push(lo);
                    cur.splice(p..p, [lo, lo + 1]);
                    cusps.push((lo, true));
                }
                EventKind::RightCusp => {
                    let (a, b) = (cur[p], cur[p + 1]);
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                    cur.drain(p..p + 2);
                    cusps.push((a, false));
                }
                EventKind::Crossing => cur.swap(p, p + 1),
            }
            slices.push(cur.clone());
        }
        let mut component_of = vec![usize::MAX; parent.len()];
        let mut root_to_component: Vec<Option<usize>> = vec![None; parent.len()];
        let mut next = 0;
        for (s, slot) in component_of.iter_mut().enumerate() {
            let r = find(&mut parent, s);
            *slot = *root_to_component[r].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        let mut tallies = vec![CuspTally::default(); next];
        for (s, left) in cusps {
            let t = &mut tallies[component_of[s]];
            if left {
                t.left += 1;
            } else {
                t.right += 1;
            }
        }
        StrandTrace { slices, component_of, tallies }
    }

    pub fn component_count(&self) -> usize {
        self.tallies.len()
    }

    pub fn strand_count(&self) -> usize {
        self.component_of.len()
    }
}
