//! Decomposable filling scripts, associated rulings and the parity obstruction.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clasp::{clasp_report, ClaspError, ClaspReport, Parity};
use crate::diagram::{Event, EventKind, FrontDiagram};
use crate::moves::{apply_move, enumerate_applicable_moves, format_script, Move, MoveError, MoveKind, Variant};
use crate::ruling::{enumerate_rulings_with_budget, NormalRuling, RulingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FillingError {
    #[error("move {index} (`{mv}`): {source}")]
    Script { index: usize, mv: String, source: MoveError },
    #[error("move {index} (`{mv}`): {source}")]
    TransportFailure { index: usize, mv: String, source: MoveError },
    #[error("associated ruling {ruling} has {total} clasps, an odd number")]
    EvennessViolation { ruling: NormalRuling, total: usize },
    #[error(transparent)]
    Ruling(#[from] RulingError),
    #[error(transparent)]
    Clasp(#[from] ClaspError),
}

/// A move sequence starting from the empty diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MoveScript {
    pub moves: Vec<Move>,
}

impl MoveScript {
    pub fn new(moves: Vec<Move>) -> Self {
        MoveScript { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

impl std::fmt::Display for MoveScript {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_script(&self.moves))
    }
}

/// Result of executing a script without the evenness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    /// The moves with every anchor made explicit.
    pub script: MoveScript,
    pub diagram: FrontDiagram,
    pub ruling: NormalRuling,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillingCertificate {
    pub script: MoveScript,
    pub diagram: FrontDiagram,
    pub ruling: NormalRuling,
    pub clasps: ClaspReport,
}

/// Folds the moves over the empty diagram, carrying the associated ruling.
pub fn execute(script: &MoveScript) -> Result<Execution, FillingError> {
    let mut diagram = FrontDiagram::empty();
    let mut ruling = NormalRuling::empty();
    let mut resolved = Vec::with_capacity(script.len());
    for (i, m) in script.moves.iter().enumerate() {
        let index = i + 1;
        let (next, transport) = apply_move(&diagram, m).map_err(|source| FillingError::Script {
            index,
            mv: m.to_string(),
            source,
        })?;
        ruling = transport.transport(&ruling).map_err(|source| FillingError::TransportFailure {
            index,
            mv: transport.mv.to_string(),
            source,
        })?;
        resolved.push(transport.mv);
        diagram = next;
    }
    Ok(Execution { script: MoveScript::new(resolved), diagram, ruling })
}

/// Executes a script and certifies the associated ruling. An odd clasp count
/// is reported as [`FillingError::EvennessViolation`].
pub fn run_script(script: &MoveScript) -> Result<FillingCertificate, FillingError> {
    let ex = execute(script)?;
    let clasps = clasp_report(&ex.diagram, &ex.ruling)?;
    if !clasps.parity.is_even() {
        return Err(FillingError::EvennessViolation { ruling: ex.ruling, total: clasps.total });
    }
    Ok(FillingCertificate { script: ex.script, diagram: ex.diagram, ruling: ex.ruling, clasps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RulingParity {
    pub ruling: NormalRuling,
    pub clasps: usize,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionVerdict {
    pub verdict: Verdict,
    /// First even ruling, when there is one.
    pub witness: Option<NormalRuling>,
    pub evidence: Vec<RulingParity>,
    pub note: Option<String>,
}

pub fn ruling_parities(d: &FrontDiagram, budget: Option<u64>) -> Result<Vec<RulingParity>, FillingError> {
    let rulings = enumerate_rulings_with_budget(d, budget)?;
    rulings
        .into_iter()
        .map(|r| {
            let rep = clasp_report(d, &r)?;
            Ok(RulingParity { ruling: r, clasps: rep.total, parity: rep.parity })
        })
        .collect()
}

/// Obstructed iff there is at least one normal ruling and every one is odd.
pub fn obstruction_verdict(d: &FrontDiagram, budget: Option<u64>) -> Result<ObstructionVerdict, FillingError> {
    let evidence = ruling_parities(d, budget)?;
    let witness = evidence.iter().find(|e| e.parity.is_even()).map(|e| e.ruling.clone());
    let (verdict, note) = if evidence.is_empty() {
        (Verdict::NotObstructed, Some("no rulings: the parity criterion does not apply".to_string()))
    } else if witness.is_none() {
        (Verdict::Obstructed, None)
    } else {
        (Verdict::NotObstructed, None)
    };
    Ok(ObstructionVerdict { verdict, witness, evidence, note })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CobordismParity {
    Compatible,
    Incompatible,
    NotApplicable,
}

/// For two links with exactly one normal ruling each, a decomposable
/// cobordism between them forces equal ruling parities.
pub fn cobordism_parity_check(lower: &FrontDiagram, upper: &FrontDiagram, budget: Option<u64>) -> Result<CobordismParity, FillingError> {
    let lo = ruling_parities(lower, budget)?;
    let hi = ruling_parities(upper, budget)?;
    Ok(match (lo.as_slice(), hi.as_slice()) {
        ([a], [b]) if a.parity == b.parity => CobordismParity::Compatible,
        ([_], [_]) => CobordismParity::Incompatible,
        _ => CobordismParity::NotApplicable,
    })
}

/// A seeded random script of `length` moves from the empty diagram.
///
/// Each step draws a move kind uniformly among the applicable ones, then a
/// move of that kind uniformly. Moves the associated ruling cannot follow are
/// discarded and redrawn.
pub fn random_script(length: usize, seed: u64) -> MoveScript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diagram = FrontDiagram::empty();
    let mut ruling = NormalRuling::empty();
    let mut moves = Vec::with_capacity(length);
    while moves.len() < length {
        let mut by_kind: BTreeMap<MoveKind, Vec<Move>> = BTreeMap::new();
        for m in enumerate_applicable_moves(&diagram) {
            by_kind.entry(m.kind).or_default().push(m);
        }
        let mut advanced = false;
        while !by_kind.is_empty() {
            let kinds: Vec<MoveKind> = by_kind.keys().copied().collect();
            let kind = *kinds.choose(&mut rng).expect("non-empty");
            let pool = by_kind.get_mut(&kind).expect("present");
            let j = rng.gen_range(0..pool.len());
            let m = pool.swap_remove(j);
            if pool.is_empty() {
                by_kind.remove(&kind);
            }
            let (next, t) = apply_move(&diagram, &m).expect("enumerated moves apply");
            if let Ok(r) = t.transport(&ruling) {
                diagram = next;
                ruling = r;
                moves.push(m);
                advanced = true;
                break;
            }
        }
        if !advanced {
            // h0 always applies, so this cannot happen
            break;
        }
    }
    MoveScript::new(moves)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub expanded: u64,
    pub depth_reached: usize,
    pub budget_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { certificate: FillingCertificate, stats: SearchStats },
    Exhausted { stats: SearchStats },
    Pruned { verdict: ObstructionVerdict },
}

/// One backward step: `pred` becomes the current diagram under `forward`.
fn predecessors(d: &FrontDiagram) -> Vec<(FrontDiagram, Move)> {
    let mut out = Vec::new();
    let ev = d.events();
    // births of small eyes
    for i in 0..ev.len().saturating_sub(1) {
        if ev[i].kind == EventKind::LeftCusp && ev[i + 1] == Event::rc(ev[i].position) {
            let mut e = ev.to_vec();
            e.drain(i..i + 2);
            out.push((FrontDiagram::new(e), Move::handle0(i, ev[i].position)));
        }
    }
    for back in enumerate_applicable_moves(d) {
        let anchor = back.anchor.expect("enumerated moves carry anchors");
        let forward = match (back.kind, back.variant) {
            (MoveKind::Handle1, Variant::Merge) => Move::split(anchor - 1, ev[anchor - 1].position),
            (MoveKind::Handle1, _) => Move::merge(anchor + 1),
            (MoveKind::R1Inv, _) => {
                let (q, x) = (ev[anchor - 1].position, ev[anchor].position);
                if x + 1 == q {
                    Move::r1(anchor - 1, q - 1, true)
                } else {
                    Move::r1(anchor - 1, q, false)
                }
            }
            (MoveKind::R2Inv, _) => {
                let (a, b) = (ev[anchor - 1].position, ev[anchor].position);
                Move::r2(anchor, b + 1 == a)
            }
            (MoveKind::R3 | MoveKind::Transpose, _) => back,
            _ => continue,
        };
        let Ok((pred, _)) = apply_move(d, &back) else { continue };
        out.push((pred, forward));
    }
    out
}

/// Breadth-first backward search from `d` to the empty diagram.
///
/// Backward steps undo 0-handles, both 1-handle directions, R1 and R2 kinks,
/// R3 and transpositions. The first shortest script (in the deterministic
/// expansion order) whose forward run reproduces `d` with an even certificate
/// is returned. Diagrams whose rulings are all odd are pruned up front.
pub fn search_filling(d: &FrontDiagram, depth_bound: usize, node_budget: u64) -> Result<SearchOutcome, FillingError> {
    let verdict = obstruction_verdict(d, Some(node_budget.max(1_000_000)))?;
    if verdict.verdict == Verdict::Obstructed {
        return Ok(SearchOutcome::Pruned { verdict });
    }
    let mut stats = SearchStats::default();
    // child and forward move leading to it, per discovered predecessor
    let mut next_of: HashMap<FrontDiagram, Option<(FrontDiagram, Move)>> = HashMap::new();
    next_of.insert(d.clone(), None);
    let mut queue = VecDeque::from([(d.clone(), 0usize)]);
    while let Some((cur, depth)) = queue.pop_front() {
        stats.depth_reached = stats.depth_reached.max(depth);
        if cur.is_empty() {
            let mut moves = Vec::new();
            let mut at = cur.clone();
            while let Some(Some((child, m))) = next_of.get(&at) {
                moves.push(*m);
                at = child.clone();
            }
            let script = MoveScript::new(moves);
            if let Ok(cert) = run_script(&script) {
                if &cert.diagram == d {
                    return Ok(SearchOutcome::Found { certificate: cert, stats });
                }
            }
            continue;
        }
        if depth >= depth_bound {
            continue;
        }
        if stats.expanded >= node_budget {
            stats.budget_hit = true;
            break;
        }
        stats.expanded += 1;
        for (pred, forward) in predecessors(&cur) {
            if !next_of.contains_key(&pred) {
                next_of.insert(pred.clone(), Some((cur.clone(), forward)));
                queue.push_back((pred, depth + 1));
            }
        }
    }
    Ok(SearchOutcome::Exhausted { stats })
}
