//! End-to-end acceptance gates. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use clasplab_core::clasp::clasp_report;
use clasplab_core::diagram::FrontDiagram;
use clasplab_core::filling::{
    cobordism_parity_check, execute, obstruction_verdict, random_script, run_script, search_filling, CobordismParity,
    SearchOutcome, Verdict,
};
use clasplab_core::generate;
use clasplab_core::moves::{apply_move, enumerate_applicable_moves};
use clasplab_core::ruling::{enumerate_rulings, NormalRuling};
use clasplab_core::text::{parse, serialize};
use clasplab_oracle as oracle;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:.2?}, limit {limit:?}"))
}

/// Diagram reached by a seeded random filling script.
fn fillable(seed: u64) -> FrontDiagram {
    let len = 1 + (seed % 14) as usize;
    execute(&random_script(len, seed)).expect("random scripts execute").diagram
}

fn totals(d: &FrontDiagram, rulings: &[NormalRuling]) -> Vec<usize> {
    rulings.iter().map(|r| clasp_report(d, r).unwrap().total).collect()
}

fn parity_multiset(d: &FrontDiagram) -> (usize, usize) {
    let t = totals(d, &enumerate_rulings(d).unwrap());
    let odd = t.iter().filter(|&&c| c % 2 == 1).count();
    (odd, t.len() - odd)
}

fn trefoil_fixture() -> Outcome {
    let start = Instant::now();
    let t = generate::trefoil();
    let rulings = enumerate_rulings(&t).map_err(|e| e.to_string())?;
    let want: Vec<NormalRuling> = vec![[1].into(), [3].into(), [1, 2, 3].into()];
    ensure(rulings == want, || format!("rulings {rulings:?}"))?;
    let t_totals = totals(&t, &rulings);
    ensure(t_totals == [1, 1, 0], || format!("clasp totals {t_totals:?}"))?;
    let pm = parity_multiset(&t);
    ensure(pm == (2, 1), || format!("odd/even {pm:?}"))?;
    within(start, Duration::from_secs(1), "trefoil")?;
    Ok(format!("{{1}} {{3}} {{1,2,3}} with clasps 1 1 0 in {:.2?}", start.elapsed()))
}

fn torus_family() -> Outcome {
    let mut notes = Vec::new();
    for n in 0..=2 {
        let start = Instant::now();
        let d = generate::torus4(n);
        let rulings = enumerate_rulings(&d).map_err(|e| e.to_string())?;
        let t = totals(&d, &rulings);
        ensure(rulings.len() == 1 && t[0] == 2 * n + 5, || {
            format!(
                "representative mismatch: torus4({n}) has {} normal rulings with clasp totals {t:?}, expected one ruling with {} clasps",
                rulings.len(),
                2 * n + 5
            )
        })?;
        let v = obstruction_verdict(&d, None).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::Obstructed, || format!("torus4({n}) verdict {:?}", v.verdict))?;
        within(start, Duration::from_secs(10), &format!("torus4({n})"))?;
        notes.push(format!("n={n}: {} clasps", t[0]));
    }
    Ok(notes.join(", "))
}

fn filling_evenness() -> Outcome {
    let start = Instant::now();
    for seed in 0..1000u64 {
        let len = 1 + (seed % 25) as usize;
        let s = random_script(len, seed);
        let cert = run_script(&s).map_err(|e| format!("seed {seed}: {e}"))?;
        let total = clasp_report(&cert.diagram, &cert.ruling).map_err(|e| e.to_string())?.total;
        ensure(total % 2 == 0, || format!("seed {seed}: ruling {} has {total} clasps\n{s}", cert.ruling))?;
    }
    within(start, Duration::from_secs(60), "1000 scripts")?;
    Ok(format!("1000 scripts, all even, {:.2?}", start.elapsed()))
}

fn invariance() -> Outcome {
    let mut corpus = vec![generate::unknot(), generate::trefoil(), generate::torus4(0)];
    corpus.extend((0..100).map(fillable));
    let mut checked = 0;
    for d in &corpus {
        let src = enumerate_rulings(d).unwrap();
        let before = parity_multiset(d);
        for m in enumerate_applicable_moves(d).into_iter().filter(|m| m.kind.is_isotopy()) {
            let (e, t) = apply_move(d, &m).map_err(|err| format!("{m} on {d:?}: {err}"))?;
            let target = enumerate_rulings(&e).unwrap();
            ensure(src.len() == target.len(), || format!("{m} on {d:?}: {} -> {} rulings", src.len(), target.len()))?;
            let mut img = Vec::with_capacity(src.len());
            for r in &src {
                img.push(t.transport(r).map_err(|err| format!("{m} on {d:?}, ruling {r}: {err}"))?);
            }
            img.sort();
            img.dedup();
            ensure(img == target, || format!("{m} on {d:?}: transport is not a bijection"))?;
            let after = parity_multiset(&e);
            ensure(after == before, || format!("{m} on {d:?}: odd/even {before:?} -> {after:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{} diagrams, {checked} isotopy moves", corpus.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut corpus = vec![generate::unknot(), generate::trefoil(), generate::unlink(3), generate::torus4(0)];
    for word in [&[1, 1, 1, 1, 1][..], &[2, 1, 2, 1, 2, 1], &[1, 2, 3, 1, 2, 3], &[2, 2, 2, 1, 3, 2, 2, 2]] {
        corpus.push(generate::plat_closure(4, word).map_err(|e| e.to_string())?);
    }
    let fixed = corpus.len();
    corpus.extend((0..500).map(fillable));
    let mut enumerated = 0;
    for d in corpus.iter().filter(|d| d.crossing_count() <= 12) {
        let fast: Vec<Vec<usize>> = enumerate_rulings(d).unwrap().iter().map(|r| r.switches().to_vec()).collect();
        ensure(fast == oracle::brute_force_rulings(d), || format!("enumeration differs on {d:?}"))?;
        enumerated += 1;
    }
    let mut scans = 0;
    for d in &corpus {
        for r in enumerate_rulings(d).unwrap() {
            let report = clasp_report(d, &r).unwrap();
            let mut fast: Vec<((usize, usize), usize)> =
                report.pairs.iter().filter(|p| p.clasps > 0).map(|p| ((p.eyes[0], p.eyes[1]), p.clasps)).collect();
            fast.sort();
            let mut slow = oracle::clasps_by_slices(d, r.switches());
            slow.sort();
            ensure(fast == slow, || format!("{d:?}, ruling {r}: scan {fast:?}, slices {slow:?}"))?;
            scans += 1;
        }
    }
    Ok(format!("{enumerated} enumerations, {scans} clasp scans over {fixed} fixed and 500 random diagrams"))
}

fn verdicts() -> Outcome {
    let t = obstruction_verdict(&generate::trefoil(), None).map_err(|e| e.to_string())?;
    ensure(t.verdict == Verdict::NotObstructed && t.witness == Some([1, 2, 3].into()), || format!("trefoil {t:?}"))?;
    let u = obstruction_verdict(&generate::unknot(), None).map_err(|e| e.to_string())?;
    ensure(u.verdict == Verdict::NotObstructed, || format!("unknot {u:?}"))?;
    let s = search_filling(&generate::torus4(0), 4, 100_000).map_err(|e| e.to_string())?;
    ensure(matches!(s, SearchOutcome::Pruned { .. }), || "torus4(0) search was not pruned".into())?;
    let c = cobordism_parity_check(&generate::torus4(0), &generate::torus4(1), None).map_err(|e| e.to_string())?;
    ensure(c == CobordismParity::Compatible, || format!("cobordism check {c:?}"))?;
    Ok("trefoil, unknot, torus4(0), torus4(0)->torus4(1)".into())
}

fn cli(args: &[&str]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_clasplab")).args(args).env_remove("CLASPLAB_BUDGET").output().unwrap();
    assert!(o.status.success(), "clasplab {args:?}: {}", String::from_utf8_lossy(&o.stderr));
    o.stdout
}

fn round_trip_and_determinism() -> Outcome {
    let mut corpus = vec![generate::unknot(), generate::trefoil(), generate::unlink(2)];
    corpus.extend((0..=2).map(generate::torus4));
    corpus.push(generate::plat_closure(4, &[1, 2, 3, 1, 2, 3]).unwrap());
    corpus.extend((0..100).map(fillable));
    for d in &corpus {
        let text = serialize(d);
        let back = parse(&text).map_err(|e| e.to_string())?;
        ensure(&back == d && serialize(&back) == text, || format!("round trip changed {d:?}"))?;
    }
    let invocations: &[&[&str]] = &[
        &["apply-script", "--random", "25", "--seed", "11"],
        &["apply-script", "--random", "25", "--seed", "11", "--format", "text"],
        &["generate", "--generate", "random", "--n", "18", "--seed", "4"],
        &["parity", "--generate", "random", "--n", "18", "--seed", "4"],
        &["search", "--generate", "random", "--n", "3", "--seed", "9"],
        &["render", "--generate", "random", "--n", "12", "--seed", "6"],
        &["render", "--generate", "torus4", "--n", "1", "--style", "ascii"],
    ];
    for args in invocations {
        let (a, b) = (cli(args), cli(args));
        ensure(a == b, || format!("clasplab {args:?} is not deterministic"))?;
    }
    Ok(format!("{} diagrams, {} CLI invocations", corpus.len(), invocations.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("trefoil fixture", trefoil_fixture),
        ("torus family", torus_family),
        ("filling scripts have even clasps", filling_evenness),
        ("isotopy invariance", invariance),
        ("oracle equivalence", oracle_equivalence),
        ("verdicts", verdicts),
        ("round trip and determinism", round_trip_and_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
