//! Resolutions, eye pairs and clasps.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::FrontDiagram;
use crate::ruling::{check_ruling, scan, EyeId, NormalRuling, PairingState, RulingError, RulingFailure, ScanObserver, ScanStep, Side};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClaspError {
    #[error(transparent)]
    Ruling(#[from] RulingError),
    #[error("not a normal ruling: {0}")]
    InvalidRuling(RulingFailure),
    #[error("eye {eye} does not exist (resolution has {count})")]
    UnknownEye { eye: EyeId, count: usize },
    #[error("switch {crossing} touches eyes {a} and {b} while they interleave")]
    SwitchWhileInterleaved { crossing: usize, a: EyeId, b: EyeId },
}

/// A resolved strand: its eye and its birth branch.
pub type EyeStrand = (EyeId, Side);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingRecord {
    pub ordinal: usize,
    /// 0-based event index.
    pub event: usize,
    /// 1-based lower slot of the crossing.
    pub position: usize,
    /// Strand at the lower slot before the crossing.
    pub lower: EyeStrand,
    pub upper: EyeStrand,
}

impl CrossingRecord {
    pub fn eyes(&self) -> (EyeId, EyeId) {
        let (a, b) = (self.lower.0, self.upper.0);
        (a.min(b), a.max(b))
    }

    fn strand_pair(&self) -> (EyeStrand, EyeStrand) {
        (self.lower.min(self.upper), self.lower.max(self.upper))
    }
}

/// The resolution of a normal ruling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub diagram: FrontDiagram,
    pub ruling: NormalRuling,
    /// `slices[k]` is the resolved strand at each slot after `k` events.
    pub slices: Vec<Vec<EyeStrand>>,
    /// Event index of every eye's left cusp, by eye id.
    pub births: Vec<usize>,
    /// Non-switch crossings, left to right. They never join one eye to itself.
    pub crossings: Vec<CrossingRecord>,
    /// Switches, left to right; the strands touch without exchanging slots.
    pub touches: Vec<CrossingRecord>,
}

#[derive(Default)]
struct Recorder {
    slices: Vec<Vec<EyeStrand>>,
    crossings: Vec<CrossingRecord>,
    touches: Vec<CrossingRecord>,
}

fn slice_of(state: &PairingState) -> Vec<EyeStrand> {
    state.eyes().iter().copied().zip(state.sides().iter().copied()).collect()
}

impl ScanObserver for Recorder {
    fn after_event(&mut self, step: &ScanStep, before: &PairingState, after: &PairingState) {
        if let Some(ordinal) = step.ordinal {
            let pos = step.event.position;
            let rec = CrossingRecord {
                ordinal,
                event: step.index,
                position: pos,
                lower: (before.eye_at(pos), before.side_at(pos)),
                upper: (before.eye_at(pos + 1), before.side_at(pos + 1)),
            };
            if step.switch {
                self.touches.push(rec);
            } else {
                self.crossings.push(rec);
            }
        }
        self.slices.push(slice_of(after));
    }
}

pub fn resolve(d: &FrontDiagram, ruling: &NormalRuling) -> Result<Resolution, ClaspError> {
    if let Some(f) = check_ruling(d, ruling)? {
        return Err(ClaspError::InvalidRuling(f));
    }
    let mut rec = Recorder { slices: vec![Vec::new()], ..Default::default() };
    let end = scan(d, ruling, &mut rec).map_err(ClaspError::InvalidRuling)?;
    debug_assert_eq!(end.strands(), 0);
    Ok(Resolution {
        diagram: d.clone(),
        ruling: ruling.clone(),
        slices: rec.slices,
        births: end.births().to_vec(),
        crossings: rec.crossings,
        touches: rec.touches,
    })
}

/// Relative position of two eyes over one slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairConfig {
    /// At least one of the eyes is not alive.
    Absent,
    Disjoint,
    Nested,
    /// Each eye has exactly one strand between the other's two strands.
    Interleaved,
}

/// Classifies two eyes from the slots they occupy in one slice.
pub fn classify(slice: &[EyeStrand], a: EyeId, b: EyeId) -> PairConfig {
    let slots = |e: EyeId| -> Vec<usize> { slice.iter().enumerate().filter(|(_, s)| s.0 == e).map(|(i, _)| i).collect() };
    let (pa, pb) = (slots(a), slots(b));
    if pa.len() != 2 || pb.len() != 2 {
        return PairConfig::Absent;
    }
    let inside = pb.iter().filter(|&&x| pa[0] < x && x < pa[1]).count();
    match inside {
        1 => PairConfig::Interleaved,
        2 => PairConfig::Nested,
        _ if pb[0] < pa[0] && pa[1] < pb[1] => PairConfig::Nested,
        _ => PairConfig::Disjoint,
    }
}

impl Resolution {
    pub fn eye_count(&self) -> usize {
        self.births.len()
    }

    fn check_eye(&self, eye: EyeId) -> Result<(), ClaspError> {
        if eye < self.eye_count() {
            Ok(())
        } else {
            Err(ClaspError::UnknownEye { eye, count: self.eye_count() })
        }
    }

    /// Configuration of a pair over every slice.
    pub fn pair_configs(&self, a: EyeId, b: EyeId) -> Result<Vec<PairConfig>, ClaspError> {
        self.check_eye(a)?;
        self.check_eye(b)?;
        Ok(self.slices.iter().map(|s| classify(s, a, b)).collect())
    }

    /// Unordered eye pairs that meet at a crossing or a switch.
    pub fn interacting_pairs(&self) -> Vec<(EyeId, EyeId)> {
        let mut v: Vec<_> = self.crossings.iter().chain(&self.touches).map(|r| r.eyes()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Interleaved stretches of eyes `a` and `b` that are clasps, as the event
/// indices (0-based) of their two bounding crossings.
///
/// Every crossing of the pair toggles between interleaved and not, so the
/// interleaved stretches are bounded by the 1st and 2nd, 3rd and 4th, ...
/// crossing of the pair. A stretch is a clasp when both of its bounding
/// crossings involve the same strand of `a` and the same strand of `b`.
pub fn clasp_intervals(res: &Resolution, a: EyeId, b: EyeId) -> Result<Vec<(usize, usize)>, ClaspError> {
    res.check_eye(a)?;
    res.check_eye(b)?;
    let key = (a.min(b), a.max(b));
    let mut crossings = res.crossings.iter().filter(|r| r.eyes() == key).peekable();
    let mut touches = res.touches.iter().filter(|r| r.eyes() == key).peekable();
    let mut open: Option<&CrossingRecord> = None;
    let mut out = Vec::new();
    loop {
        let next_touch = touches.peek().map(|t| t.event);
        let next_cross = crossings.peek().map(|c| c.event);
        match (next_cross, next_touch) {
            (None, None) => break,
            (_, Some(t)) if next_cross.is_none_or(|c| t < c) => {
                let t = touches.next().expect("peeked");
                if open.is_some() {
                    return Err(ClaspError::SwitchWhileInterleaved { crossing: t.ordinal, a: key.0, b: key.1 });
                }
            }
            _ => {
                let c = crossings.next().expect("peeked");
                match open.take() {
                    None => open = Some(c),
                    Some(first) => {
                        if first.strand_pair() == c.strand_pair() {
                            out.push((first.event, c.event));
                        }
                    }
                }
            }
        }
    }
    debug_assert!(open.is_none(), "pairs end non-interleaved");
    Ok(out)
}

/// Number of clasps between eyes `a` and `b`; see [`clasp_intervals`].
pub fn count_clasps_pair(res: &Resolution, a: EyeId, b: EyeId) -> Result<usize, ClaspError> {
    Ok(clasp_intervals(res, a, b)?.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(total: usize) -> Self {
        if total.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClasps {
    pub eyes: [EyeId; 2],
    pub clasps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaspReport {
    pub pairs: Vec<PairClasps>,
    pub total: usize,
    pub parity: Parity,
}

impl ClaspReport {
    pub fn from_pairs(pairs: Vec<PairClasps>) -> Self {
        let total = pairs.iter().map(|p| p.clasps).sum();
        ClaspReport { pairs, total, parity: Parity::of(total) }
    }
}

pub fn report_for(res: &Resolution) -> Result<ClaspReport, ClaspError> {
    let mut counts = BTreeMap::new();
    for (a, b) in res.interacting_pairs() {
        counts.insert((a, b), count_clasps_pair(res, a, b)?);
    }
    Ok(ClaspReport::from_pairs(
        counts.into_iter().map(|((a, b), clasps)| PairClasps { eyes: [a, b], clasps }).collect(),
    ))
}

pub fn clasp_report(d: &FrontDiagram, ruling: &NormalRuling) -> Result<ClaspReport, ClaspError> {
    report_for(&resolve(d, ruling)?)
}

pub fn parity(report: &ClaspReport) -> Parity {
    Parity::of(report.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::ruling::enumerate_rulings;

    #[test]
    fn trefoil_resolutions() {
        let t = generate::trefoil();
        let all = resolve(&t, &[1, 2, 3].into()).unwrap();
        assert_eq!(all.eye_count(), 2);
        assert!(all.crossings.is_empty());
        assert_eq!(count_clasps_pair(&all, 0, 1).unwrap(), 0);

        let one = resolve(&t, &[1].into()).unwrap();
        let ords: Vec<_> = one.crossings.iter().map(|c| c.ordinal).collect();
        assert_eq!(ords, vec![2, 3]);
        assert_eq!(count_clasps_pair(&one, 0, 1).unwrap(), 1);
        assert_eq!(count_clasps_pair(&one, 1, 0).unwrap(), 1);
        assert_eq!(clasp_intervals(&one, 0, 1).unwrap(), vec![(3, 4)]);
    }

    #[test]
    fn trefoil_reports() {
        let t = generate::trefoil();
        let totals: Vec<_> = enumerate_rulings(&t)
            .unwrap()
            .iter()
            .map(|r| clasp_report(&t, r).unwrap().total)
            .collect();
        assert_eq!(totals, vec![1, 1, 0]);
        let r = clasp_report(&t, &[3].into()).unwrap();
        assert_eq!(r.parity, Parity::Odd);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"pairs":[{"eyes":[0,1],"clasps":1}],"total":1,"parity":"odd"}"#
        );
    }

    #[test]
    fn unlink_and_unknot() {
        let u = resolve(&generate::unlink(2), &NormalRuling::empty()).unwrap();
        assert_eq!(u.eye_count(), 2);
        assert_eq!(count_clasps_pair(&u, 0, 1).unwrap(), 0);
        let r = clasp_report(&generate::unknot(), &NormalRuling::empty()).unwrap();
        assert_eq!(r.total, 0);
        assert!(r.pairs.is_empty());
        assert_eq!(parity(&r), Parity::Even);
    }

    #[test]
    fn torus_clasps() {
        for n in 0..3 {
            let d = generate::torus4(n);
            let rs = enumerate_rulings(&d).unwrap();
            let r = clasp_report(&d, &rs[0]).unwrap();
            assert_eq!(r.total, 2 * n + 5);
            assert_eq!(r.parity, Parity::Odd);
        }
    }

    #[test]
    fn errors() {
        let t = generate::trefoil();
        assert!(matches!(resolve(&t, &[2].into()), Err(ClaspError::InvalidRuling(_))));
        let res = resolve(&t, &[1].into()).unwrap();
        assert_eq!(count_clasps_pair(&res, 0, 7), Err(ClaspError::UnknownEye { eye: 7, count: 2 }));
    }

    #[test]
    fn classify_shapes() {
        let s = |v: &[usize]| -> Vec<EyeStrand> { v.iter().map(|&e| (e, Side::Lower)).collect() };
        assert_eq!(classify(&s(&[0, 0, 1, 1]), 0, 1), PairConfig::Disjoint);
        assert_eq!(classify(&s(&[0, 1, 1, 0]), 0, 1), PairConfig::Nested);
        assert_eq!(classify(&s(&[1, 0, 0, 1]), 0, 1), PairConfig::Nested);
        assert_eq!(classify(&s(&[0, 1, 0, 1]), 0, 1), PairConfig::Interleaved);
        assert_eq!(classify(&s(&[0, 0]), 0, 1), PairConfig::Absent);
    }
}
