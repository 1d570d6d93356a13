//! Normal rulings.
//!
//! A left-to-right pairing state machine: every live slot belongs to an eye,
//! every eye owns two slots. Non-switch crossings exchange slots, switches keep
//! them fixed and must pass [`switch_allowed`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{Event, EventKind, FrontDiagram, ValidationReport};

pub type EyeId = usize;

/// Which branch of its birth cusp a resolved strand came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RulingError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(ValidationReport),
    #[error("crossing {crossing} does not exist (diagram has {count})")]
    UnknownCrossing { crossing: usize, count: usize },
    #[error("slots {position} and {} belong to the same eye", position + 1)]
    SameEye { position: usize },
    #[error("node budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
}

/// A set of switches, kept sorted and duplicate-free.
///
/// Ordering is by size first, then lexicographic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct NormalRuling {
    switches: Vec<usize>,
}

impl NormalRuling {
    pub fn new<I: IntoIterator<Item = usize>>(switches: I) -> Self {
        let set: BTreeSet<usize> = switches.into_iter().collect();
        NormalRuling { switches: set.into_iter().collect() }
    }

    pub fn empty() -> Self {
        NormalRuling::default()
    }

    pub fn switches(&self) -> &[usize] {
        &self.switches
    }

    pub fn contains(&self, crossing: usize) -> bool {
        self.switches.binary_search(&crossing).is_ok()
    }

    pub fn len(&self) -> usize {
        self.switches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.switches.is_empty()
    }
}

impl Ord for NormalRuling {
    fn cmp(&self, other: &Self) -> Ordering {
        self.switches
            .len()
            .cmp(&other.switches.len())
            .then_with(|| self.switches.cmp(&other.switches))
    }
}

impl PartialOrd for NormalRuling {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormalRuling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.switches.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

impl From<Vec<usize>> for NormalRuling {
    fn from(v: Vec<usize>) -> Self {
        NormalRuling::new(v)
    }
}

impl From<NormalRuling> for Vec<usize> {
    fn from(r: NormalRuling) -> Self {
        r.switches
    }
}

impl<const N: usize> From<[usize; N]> for NormalRuling {
    fn from(a: [usize; N]) -> Self {
        NormalRuling::new(a)
    }
}

/// Eye bookkeeping of one vertical slice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PairingState {
    /// Eye at each 0-based slot.
    eyes: Vec<EyeId>,
    /// Birth branch of the resolved strand at each slot.
    sides: Vec<Side>,
    /// Event index (0-based) of each eye's left cusp.
    births: Vec<usize>,
}

/// Why a scan rejected a switch set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    /// A non-switch crossing between the two strands of one eye.
    SelfIntersection,
    /// A switch between two eyes whose slots interleave.
    Interleaved,
    /// A switch between the two strands of one eye.
    SameEyeSwitch,
    /// A right cusp joining strands of two different eyes.
    CuspMismatch,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::SelfIntersection => "eye crosses itself",
            FailureReason::Interleaved => "switch between interleaved eyes",
            FailureReason::SameEyeSwitch => "switch inside one eye",
            FailureReason::CuspMismatch => "right cusp joins two different eyes",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RulingFailure {
    /// 1-based event index.
    pub event: usize,
    /// Crossing ordinal, when the failing event is a crossing.
    pub crossing: Option<usize>,
    pub reason: FailureReason,
}

impl fmt::Display for RulingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.crossing {
            Some(c) => write!(f, "crossing {c} (event {}): {}", self.event, self.reason),
            None => write!(f, "event {}: {}", self.event, self.reason),
        }
    }
}

/// Normality of the switch at slots `p`, `p + 1` (1-based) given the mates
/// `a` of `p` and `b` of `p + 1`: the two eyes must be disjoint or nested.
pub fn mates_allow_switch(p: usize, a: usize, b: usize) -> bool {
    (a < p && b > p + 1) || (a > p + 1 && b > p + 1 && b < a) || (a < p && b < p && b < a)
}

impl PairingState {
    pub fn new() -> Self {
        PairingState::default()
    }

    pub fn strands(&self) -> usize {
        self.eyes.len()
    }

    pub fn eye_count(&self) -> usize {
        self.births.len()
    }

    /// Eye at the 1-based slot `p`.
    pub fn eye_at(&self, p: usize) -> EyeId {
        self.eyes[p - 1]
    }

    pub fn side_at(&self, p: usize) -> Side {
        self.sides[p - 1]
    }

    pub fn eyes(&self) -> &[EyeId] {
        &self.eyes
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn births(&self) -> &[usize] {
        &self.births
    }

    /// 1-based slot of the other strand of the eye at `p`.
    pub fn mate(&self, p: usize) -> usize {
        let e = self.eyes[p - 1];
        self.eyes
            .iter()
            .enumerate()
            .position(|(i, &x)| x == e && i != p - 1)
            .map(|i| i + 1)
            .expect("every live eye owns two slots")
    }

    /// Mate of every slot, 1-based; a label-free view of the pairing.
    pub fn mates(&self) -> Vec<usize> {
        (1..=self.strands()).map(|p| self.mate(p)).collect()
    }

    pub fn left_cusp(&mut self, p: usize, event: usize) {
        let id = self.births.len();
        self.births.push(event);
        self.eyes.splice(p - 1..p - 1, [id, id]);
        self.sides.splice(p - 1..p - 1, [Side::Lower, Side::Upper]);
    }

    pub fn right_cusp(&mut self, p: usize) -> Result<(), FailureReason> {
        if self.eyes[p - 1] != self.eyes[p] {
            return Err(FailureReason::CuspMismatch);
        }
        self.eyes.drain(p - 1..p + 1);
        self.sides.drain(p - 1..p + 1);
        Ok(())
    }

    pub fn crossing(&mut self, p: usize, switch: bool) -> Result<(), FailureReason> {
        if self.eyes[p - 1] == self.eyes[p] {
            return Err(if switch {
                FailureReason::SameEyeSwitch
            } else {
                FailureReason::SelfIntersection
            });
        }
        if switch {
            if !mates_allow_switch(p, self.mate(p), self.mate(p + 1)) {
                return Err(FailureReason::Interleaved);
            }
        } else {
            self.eyes.swap(p - 1, p);
            self.sides.swap(p - 1, p);
        }
        Ok(())
    }
}

/// Whether a switch at slots `p`, `p + 1` is normal in `state`.
pub fn switch_allowed(state: &PairingState, p: usize) -> Result<bool, RulingError> {
    if state.eye_at(p) == state.eye_at(p + 1) {
        return Err(RulingError::SameEye { position: p });
    }
    Ok(mates_allow_switch(p, state.mate(p), state.mate(p + 1)))
}

fn check_diagram(d: &FrontDiagram) -> Result<(), RulingError> {
    let report = d.validate();
    if report.is_ok() {
        Ok(())
    } else {
        Err(RulingError::InvalidDiagram(report))
    }
}

fn check_ordinals(d: &FrontDiagram, ruling: &NormalRuling) -> Result<(), RulingError> {
    let count = d.crossing_count();
    match ruling.switches().iter().find(|&&c| c == 0 || c > count) {
        Some(&crossing) => Err(RulingError::UnknownCrossing { crossing, count }),
        None => Ok(()),
    }
}

/// One processed event of a ruling scan.
pub(crate) struct ScanStep {
    /// 0-based event index.
    pub index: usize,
    pub event: Event,
    pub ordinal: Option<usize>,
    pub switch: bool,
}

/// Per-event callback of a ruling scan.
pub(crate) trait ScanObserver {
    fn after_event(&mut self, _step: &ScanStep, _before: &PairingState, _after: &PairingState) {}
}

impl ScanObserver for () {}

/// Runs the state machine over a valid diagram.
pub(crate) fn scan<O: ScanObserver>(
    d: &FrontDiagram,
    ruling: &NormalRuling,
    observer: &mut O,
) -> Result<PairingState, RulingFailure> {
    let mut state = PairingState::new();
    let mut ordinal = 0;
    for (i, e) in d.events().iter().enumerate() {
        let before = state.clone();
        let mut crossing = None;
        let mut switch = false;
        let step = match e.kind {
            EventKind::LeftCusp => {
                state.left_cusp(e.position, i);
                Ok(())
            }
            EventKind::RightCusp => state.right_cusp(e.position),
            EventKind::Crossing => {
                ordinal += 1;
                crossing = Some(ordinal);
                switch = ruling.contains(ordinal);
                state.crossing(e.position, switch)
            }
        };
        if let Err(reason) = step {
            return Err(RulingFailure { event: i + 1, crossing, reason });
        }
        observer.after_event(&ScanStep { index: i, event: *e, ordinal: crossing, switch }, &before, &state);
    }
    Ok(state)
}

/// Checks a switch set, returning the first failure if it is not normal.
pub fn check_ruling(d: &FrontDiagram, ruling: &NormalRuling) -> Result<Option<RulingFailure>, RulingError> {
    check_diagram(d)?;
    check_ordinals(d, ruling)?;
    Ok(scan(d, ruling, &mut ()).err())
}

pub fn is_normal_ruling(d: &FrontDiagram, ruling: &NormalRuling) -> Result<bool, RulingError> {
    Ok(check_ruling(d, ruling)?.is_none())
}

/// All normal rulings, sorted by size then lexicographically.
pub fn enumerate_rulings(d: &FrontDiagram) -> Result<Vec<NormalRuling>, RulingError> {
    enumerate_rulings_with_budget(d, None)
}

/// As [`enumerate_rulings`], failing once more than `budget` search nodes
/// have been visited.
pub fn enumerate_rulings_with_budget(d: &FrontDiagram, budget: Option<u64>) -> Result<Vec<NormalRuling>, RulingError> {
    check_diagram(d)?;
    let mut search = Search { events: d, budget, nodes: 0, out: Vec::new(), chosen: Vec::new() };
    search.descend(0, 0, PairingState::new())?;
    let mut out = search.out;
    out.sort();
    Ok(out)
}

pub fn count_rulings(d: &FrontDiagram) -> Result<usize, RulingError> {
    Ok(enumerate_rulings(d)?.len())
}

struct Search<'a> {
    events: &'a FrontDiagram,
    budget: Option<u64>,
    nodes: u64,
    out: Vec<NormalRuling>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, start: usize, mut ordinal: usize, mut state: PairingState) -> Result<(), RulingError> {
        self.nodes += 1;
        if let Some(budget) = self.budget {
            if self.nodes > budget {
                return Err(RulingError::BudgetExceeded { budget });
            }
        }
        let events = self.events.events();
        for (i, &e) in events.iter().enumerate().skip(start) {
            match e.kind {
                EventKind::LeftCusp => state.left_cusp(e.position, i),
                EventKind::RightCusp => {
                    if state.right_cusp(e.position).is_err() {
                        return Ok(());
                    }
                }
                EventKind::Crossing => {
                    ordinal += 1;
                    let mut switched = state.clone();
                    let can_switch = switched.crossing(e.position, true).is_ok();
                    if state.crossing(e.position, false).is_err() {
                        // same eye: neither choice survives
                        return Ok(());
                    }
                    if can_switch {
                        self.descend(i + 1, ordinal, state)?;
                        self.chosen.push(ordinal);
                        let r = self.descend(i + 1, ordinal, switched);
                        self.chosen.pop();
                        return r;
                    }
                }
            }
        }
        self.out.push(NormalRuling::new(self.chosen.iter().copied()));
        Ok(())
    }
}
