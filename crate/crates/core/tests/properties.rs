use std::collections::BTreeMap;

use clasplab_core::clasp::{clasp_report, resolve, PairConfig};
use clasplab_core::diagram::{Event, EventKind, FrontDiagram};
use clasplab_core::filling::{execute, obstruction_verdict, random_script, run_script, search_filling, SearchOutcome};
use clasplab_core::generate;
use clasplab_core::moves::{apply_move, enumerate_applicable_moves, MoveKind};
use clasplab_core::ruling::{enumerate_rulings, is_normal_ruling, NormalRuling};
use clasplab_core::text::{parse, serialize};
use clasplab_oracle as oracle;
use proptest::prelude::*;

/// Builds a closed word from raw choices, never exceeding `max` strands.
fn word(choices: &[(u8, u8)], max: usize) -> FrontDiagram {
    let mut s = 0usize;
    let mut events = Vec::new();
    for &(k, p) in choices {
        let e = match k % 3 {
            0 if s + 2 <= max => Event::lc(1 + p as usize % (s + 1)),
            1 if s >= 2 => Event::rc(1 + p as usize % (s - 1)),
            _ if s >= 2 => Event::x(1 + p as usize % (s - 1)),
            _ => Event::lc(1),
        };
        s = s.saturating_add_signed(e.kind.strand_delta());
        events.push(e);
    }
    while s > 0 {
        events.push(Event::rc(1));
        s -= 2;
    }
    FrontDiagram::new(events)
}

fn arb_word(max_strands: usize, len: usize) -> impl Strategy<Value = FrontDiagram> {
    prop::collection::vec((any::<u8>(), any::<u8>()), 0..len).prop_map(move |c| word(&c, max_strands))
}

fn fillable(seed: u64, len: usize) -> FrontDiagram {
    execute(&random_script(len, seed)).unwrap().diagram
}

fn parity_multiset(d: &FrontDiagram) -> (usize, usize) {
    let mut odd = 0;
    let mut even = 0;
    for r in enumerate_rulings(d).unwrap() {
        if clasp_report(d, &r).unwrap().parity.is_even() {
            even += 1;
        } else {
            odd += 1;
        }
    }
    (odd, even)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip(d in arb_word(8, 30)) {
        prop_assert!(d.validate().is_ok());
        prop_assert_eq!(parse(&serialize(&d)).unwrap(), d);
    }

    #[test]
    fn profile_is_a_closed_walk(d in arb_word(8, 30)) {
        let prof = d.strand_profile();
        prop_assert_eq!(prof[0], 0);
        prop_assert_eq!(*prof.last().unwrap(), 0);
        for w in prof.windows(2) {
            let step = w[1] as isize - w[0] as isize;
            prop_assert!(step == 2 || step == -2 || step == 0);
        }
    }

    #[test]
    fn enumeration_matches_brute_force(d in arb_word(6, 24)) {
        prop_assume!(d.crossing_count() <= 12);
        let fast: Vec<Vec<usize>> = enumerate_rulings(&d).unwrap().iter().map(|r| r.switches().to_vec()).collect();
        prop_assert_eq!(fast, oracle::brute_force_rulings(&d));
    }

    #[test]
    fn enumerated_rulings_check(d in arb_word(8, 30)) {
        for r in enumerate_rulings(&d).unwrap() {
            prop_assert!(is_normal_ruling(&d, &r).unwrap());
        }
    }

    #[test]
    fn clasps_match_slices(d in arb_word(8, 30)) {
        for r in enumerate_rulings(&d).unwrap() {
            let rep = clasp_report(&d, &r).unwrap();
            let nonzero: Vec<_> = rep.pairs.iter().filter(|p| p.clasps > 0).map(|p| ((p.eyes[0], p.eyes[1]), p.clasps)).collect();
            prop_assert_eq!(nonzero, oracle::clasps_by_slices(&d, r.switches()));
        }
    }

    #[test]
    fn pair_configs_step_one_at_a_time(d in arb_word(8, 30)) {
        for r in enumerate_rulings(&d).unwrap() {
            let res = resolve(&d, &r).unwrap();
            for a in 0..res.eye_count() {
                for b in a + 1..res.eye_count() {
                    let cfg = res.pair_configs(a, b).unwrap();
                    prop_assert_ne!(cfg[0], PairConfig::Interleaved);
                    prop_assert_ne!(*cfg.last().unwrap(), PairConfig::Interleaved);
                    for (k, w) in cfg.windows(2).enumerate() {
                        let alive = w[0] != PairConfig::Absent && w[1] != PairConfig::Absent;
                        if alive && w[0] != w[1] {
                            prop_assert!(w[0] == PairConfig::Interleaved || w[1] == PairConfig::Interleaved, "{:?} at {}", w, k);
                        }
                        if (w[0] == PairConfig::Absent) != (w[1] == PairConfig::Absent) {
                            prop_assert_ne!(w[0], PairConfig::Interleaved);
                            prop_assert_ne!(w[1], PairConfig::Interleaved);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn components_agree_with_oracle(d in arb_word(8, 30)) {
        prop_assert_eq!(d.component_count().unwrap(), oracle::component_count(&d));
        let t = d.trace().unwrap();
        for tally in t.tallies {
            prop_assert_eq!(tally.left, tally.right);
        }
    }

    #[test]
    fn single_edits_are_flagged(d in arb_word(6, 20), at in any::<prop::sample::Index>(), e in (0u8..3, 1usize..8)) {
        let mut events = d.events().to_vec();
        let i = at.index(events.len() + 1);
        let ev = match e.0 { 0 => Event::lc(e.1), 1 => Event::rc(e.1), _ => Event::x(e.1) };
        events.insert(i, ev);
        let edited = FrontDiagram::new(events);
        let report = edited.validate();
        if ev.kind == EventKind::Crossing {
            // a crossing never changes strand counts: valid iff it fits
            let s = d.strand_profile()[i];
            prop_assert_eq!(report.is_ok(), ev.fits(s));
            if !report.is_ok() {
                prop_assert_eq!(report.first().unwrap().event, i + 1);
            }
        } else {
            // a lone cusp always breaks closure or range
            prop_assert!(!report.is_ok());
            prop_assert!(report.first().unwrap().event > i);
        }
        prop_assert!(report.violations.len() <= 1);
    }

    #[test]
    fn disjoint_union_multiplies(a in arb_word(6, 16), b in arb_word(6, 16)) {
        let u = a.disjoint_union(&b);
        prop_assert_eq!(
            enumerate_rulings(&u).unwrap().len(),
            enumerate_rulings(&a).unwrap().len() * enumerate_rulings(&b).unwrap().len()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn isotopy_moves_biject_rulings(seed in any::<u64>(), len in 1usize..14) {
        let d = fillable(seed, len);
        let src = enumerate_rulings(&d).unwrap();
        let before = parity_multiset(&d);
        let tb = oracle::thurston_bennequin(&d);
        for m in enumerate_applicable_moves(&d).into_iter().filter(|m| m.kind.is_isotopy()) {
            let (e, t) = apply_move(&d, &m).unwrap();
            prop_assert!(e.validate().is_ok());
            let mut img = Vec::new();
            for r in &src {
                let image = t.transport(r).unwrap();
                let pa = clasp_report(&d, r).unwrap().parity;
                let pb = clasp_report(&e, &image).unwrap().parity;
                prop_assert_eq!(pa, pb, "{} on {:?}, ruling {}", m, d, r);
                img.push(image);
            }
            img.sort();
            prop_assert_eq!(&img, &enumerate_rulings(&e).unwrap(), "{}", m);
            prop_assert_eq!(parity_multiset(&e), before);
            prop_assert_eq!(oracle::component_count(&e), oracle::component_count(&d));
            if oracle::component_count(&d) == 1 {
                prop_assert_eq!(oracle::thurston_bennequin(&e), tb, "{}", m);
            }
        }
    }

    #[test]
    fn handles_keep_parity(seed in any::<u64>(), len in 1usize..14) {
        let d = fillable(seed, len);
        for m in enumerate_applicable_moves(&d).into_iter().filter(|m| !m.kind.is_isotopy()) {
            let (e, t) = apply_move(&d, &m).unwrap();
            for r in enumerate_rulings(&d).unwrap() {
                if let Ok(image) = t.transport(&r) {
                    prop_assert_eq!(clasp_report(&d, &r).unwrap().parity, clasp_report(&e, &image).unwrap().parity, "{}", m);
                }
            }
            if m.kind == MoveKind::Handle0 {
                prop_assert_eq!(oracle::component_count(&e), oracle::component_count(&d) + 1);
            }
        }
    }

    #[test]
    fn random_scripts_are_even(seed in any::<u64>(), len in 1usize..26) {
        let s = random_script(len, seed);
        prop_assert_eq!(s.len(), len);
        let c = run_script(&s).unwrap();
        prop_assert!(c.clasps.parity.is_even());
        prop_assert!(is_normal_ruling(&c.diagram, &c.ruling).unwrap());
    }

    #[test]
    fn verdict_is_move_stable(seed in any::<u64>(), len in 1usize..10) {
        let d = fillable(seed, len);
        let v = obstruction_verdict(&d, None).unwrap().verdict;
        for m in enumerate_applicable_moves(&d).into_iter().filter(|m| m.kind.is_isotopy()) {
            let (e, _) = apply_move(&d, &m).unwrap();
            prop_assert_eq!(obstruction_verdict(&e, None).unwrap().verdict, v);
        }
    }
}

#[test]
fn corpus_round_trips() {
    for d in [FrontDiagram::empty(), generate::unknot(), generate::trefoil(), generate::torus4(0), generate::torus4(2)] {
        assert_eq!(parse(&serialize(&d)).unwrap(), d);
    }
}

#[test]
fn torus_family_traces() {
    for n in 0..=10 {
        let d = generate::torus4(n);
        assert_eq!(d.crossing_count(), 3 * (2 * n + 5));
        assert_eq!(oracle::component_count(&d), 1);
        assert_eq!(oracle::thurston_bennequin(&d), -4 * (2 * n as isize + 5));
    }
}

#[test]
fn found_scripts_reexecute() {
    for seed in 0..6 {
        let d = fillable(seed, 3);
        if let SearchOutcome::Found { certificate, .. } = search_filling(&d, 4, 20_000).unwrap() {
            let again = run_script(&certificate.script).unwrap();
            assert_eq!(again.diagram, d);
            assert!(again.clasps.parity.is_even());
        }
    }
}

#[test]
fn obstructed_is_never_found() {
    for n in 0..2 {
        assert!(matches!(search_filling(&generate::torus4(n), 6, 1_000).unwrap(), SearchOutcome::Pruned { .. }));
    }
}

#[test]
fn transports_of_isotopies_are_total_on_corpus() {
    let mut counts = BTreeMap::new();
    for d in [generate::unknot(), generate::trefoil(), generate::torus4(0)] {
        let src = enumerate_rulings(&d).unwrap();
        for m in enumerate_applicable_moves(&d).into_iter().filter(|m| m.kind.is_isotopy()) {
            let (e, t) = apply_move(&d, &m).unwrap();
            let mut img: Vec<NormalRuling> = src.iter().map(|r| t.transport(r).unwrap()).collect();
            img.sort();
            assert_eq!(img, enumerate_rulings(&e).unwrap(), "{m}");
            *counts.entry(m.kind).or_insert(0) += 1;
        }
    }
    for k in [MoveKind::R1, MoveKind::R2, MoveKind::Transpose] {
        assert!(counts.get(&k).copied().unwrap_or(0) > 0, "{k:?} never exercised");
    }
}

#[test]
fn r3_two_switch_exchanges_occur_and_biject() {
    // three stacked eyes, two crossings, an R3 window, two crossings
    let mut exchanges = 0;
    let mut with_rulings = 0;
    for pre in 0..25 {
        for q in 1..=4 {
            for flip in [false, true] {
                for suf in 0..25 {
                    let (a, b) = if flip { (q + 1, q) } else { (q, q + 1) };
                    let mut events = vec![Event::lc(1), Event::lc(3), Event::lc(5)];
                    events.extend([Event::x(1 + pre / 5), Event::x(1 + pre % 5)]);
                    events.extend([Event::x(a), Event::x(b), Event::x(a)]);
                    events.extend([Event::x(1 + suf / 5), Event::x(1 + suf % 5)]);
                    events.extend([Event::rc(5), Event::rc(3), Event::rc(1)]);
                    let d = FrontDiagram::new(events);
                    let src = enumerate_rulings(&d).unwrap();
                    if src.is_empty() {
                        continue;
                    }
                    with_rulings += 1;
                    let (e, t) = apply_move(&d, &"r3 @6".parse().unwrap()).unwrap();
                    let window = |r: &NormalRuling| -> Vec<usize> { r.switches().iter().copied().filter(|o| (3..=5).contains(o)).collect() };
                    let mut img = Vec::new();
                    for r in &src {
                        let image = t.transport(r).unwrap();
                        assert_eq!(window(r).len(), window(&image).len());
                        if window(r).len() == 2 && window(r) != window(&image) {
                            exchanges += 1;
                        }
                        assert_eq!(clasp_report(&d, r).unwrap().parity, clasp_report(&e, &image).unwrap().parity, "{d:?} {r}");
                        img.push(image);
                    }
                    img.sort();
                    assert_eq!(img, enumerate_rulings(&e).unwrap());
                }
            }
        }
    }
    assert_eq!(with_rulings, 100);
    assert!(exchanges > 0, "no two-switch exchange exercised");
}
