//! Slow reference implementations for tests.
//!
//! Nothing here reuses the core scanning code: rulings are checked from the
//! resolution graph, clasps are read off fully materialized slices.

use clasplab_core::{EventKind, FrontDiagram};

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = a;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Resolved picture: which resolved strand sits at each slot of each slice.
struct Resolved {
    slices: Vec<Vec<usize>>,
    /// Event index, slot and whether it was a switch, for every crossing.
    crossings: Vec<(usize, usize, bool)>,
    /// Component of every resolved strand.
    component: Vec<usize>,
    /// Number of components.
    components: usize,
    /// Left and right cusps per component.
    cusps: Vec<(usize, usize)>,
    /// Resolved strand born as the lower branch of its cusp.
    lower: Vec<bool>,
}

fn resolve(d: &FrontDiagram, switches: &[usize]) -> Resolved {
    let mut slices = vec![Vec::new()];
    let mut cur: Vec<usize> = Vec::new();
    let mut joins = Vec::new();
    let mut lc_of = Vec::new();
    let mut rc_at = Vec::new();
    let mut crossings = Vec::new();
    let mut lower = Vec::new();
    let mut next = 0;
    let mut ordinal = 0;
    for (i, e) in d.events().iter().enumerate() {
        let p = e.position - 1;
        match e.kind {
            EventKind::LeftCusp => {
                cur.insert(p, next + 1);
                cur.insert(p, next);
                joins.push((next, next + 1));
                lc_of.push(next);
                lower.push(true);
                lower.push(false);
                next += 2;
            }
            EventKind::RightCusp => {
                joins.push((cur[p], cur[p + 1]));
                rc_at.push(cur[p]);
                cur.drain(p..p + 2);
            }
            EventKind::Crossing => {
                ordinal += 1;
                let switch = switches.contains(&ordinal);
                crossings.push((i, p, switch));
                if !switch {
                    cur.swap(p, p + 1);
                }
            }
        }
        slices.push(cur.clone());
    }
    let mut dsu = Dsu::new(next);
    for (a, b) in joins {
        dsu.union(a, b);
    }
    let mut label = vec![usize::MAX; next];
    let mut component = vec![0; next];
    let mut components = 0;
    for (s, slot) in component.iter_mut().enumerate() {
        let r = dsu.find(s);
        if label[r] == usize::MAX {
            label[r] = components;
            components += 1;
        }
        *slot = label[r];
    }
    let mut cusps = vec![(0, 0); components];
    for s in lc_of {
        cusps[component[s]].0 += 1;
    }
    for s in rc_at {
        cusps[component[s]].1 += 1;
    }
    Resolved { slices, crossings, component, components, cusps, lower }
}

fn slots_of(slice: &[usize], component: &[usize], c: usize) -> Vec<usize> {
    slice.iter().enumerate().filter(|(_, &s)| component[s] == c).map(|(i, _)| i).collect()
}

fn interleaved(a: &[usize], b: &[usize]) -> bool {
    let inside = b.iter().filter(|&&x| a[0] < x && x < a[1]).count();
    inside == 1
}

/// Checks the ruling conditions directly on the resolution graph: every
/// component has one left and one right cusp, no component crosses itself,
/// and the two components meeting at a switch are not interleaved there.
pub fn is_ruling_by_definition(d: &FrontDiagram, switches: &[usize]) -> bool {
    let r = resolve(d, switches);
    if r.cusps.iter().any(|&c| c != (1, 1)) {
        return false;
    }
    for &(i, p, switch) in &r.crossings {
        let slice = &r.slices[i];
        let (ca, cb) = (r.component[slice[p]], r.component[slice[p + 1]]);
        if ca == cb {
            return false;
        }
        if switch {
            let sa = slots_of(slice, &r.component, ca);
            let sb = slots_of(slice, &r.component, cb);
            if interleaved(&sa, &sb) {
                return false;
            }
        }
    }
    true
}

/// Every subset of crossings passing [`is_ruling_by_definition`], ordered by
/// size then lexicographically.
pub fn brute_force_rulings(d: &FrontDiagram) -> Vec<Vec<usize>> {
    let c = d.crossing_count();
    assert!(c <= 20, "brute force over 2^{c} subsets");
    let mut out: Vec<Vec<usize>> = (0u32..1 << c)
        .map(|mask| (1..=c).filter(|k| mask & (1 << (k - 1)) != 0).collect::<Vec<_>>())
        .filter(|s| is_ruling_by_definition(d, s))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Clasps of a normal ruling per unordered component pair, from slice
/// classification. Components are numbered in birth order. Pairs without
/// clasps are omitted.
pub fn clasps_by_slices(d: &FrontDiagram, switches: &[usize]) -> Vec<((usize, usize), usize)> {
    let r = resolve(d, switches);
    let events = d.events();
    let mut out = Vec::new();
    for a in 0..r.components {
        for b in a + 1..r.components {
            let inter: Vec<bool> = r
                .slices
                .iter()
                .map(|s| {
                    let (sa, sb) = (slots_of(s, &r.component, a), slots_of(s, &r.component, b));
                    sa.len() == 2 && sb.len() == 2 && interleaved(&sa, &sb)
                })
                .collect();
            let strand_pair = |k: usize| -> (usize, usize) {
                // crossing event k acts on slice k
                let e = events[k];
                assert_eq!(e.kind, EventKind::Crossing, "interleaving changes only at crossings");
                let s = &r.slices[k];
                let (x, y) = (s[e.position - 1], s[e.position]);
                let key = |t: usize| 2 * r.component[t] + usize::from(!r.lower[t]);
                (key(x).min(key(y)), key(x).max(key(y)))
            };
            let mut count = 0;
            let mut k = 0;
            while k < inter.len() {
                if !inter[k] {
                    k += 1;
                    continue;
                }
                let start = k;
                while inter[k] {
                    k += 1;
                }
                if strand_pair(start - 1) == strand_pair(k - 1) {
                    count += 1;
                }
            }
            if count > 0 {
                out.push(((a, b), count));
            }
        }
    }
    out
}

pub fn total_clasps_by_slices(d: &FrontDiagram, switches: &[usize]) -> usize {
    clasps_by_slices(d, switches).iter().map(|(_, c)| c).sum()
}

/// Number of link components.
pub fn component_count(d: &FrontDiagram) -> usize {
    let no_switches: [usize; 0] = [];
    let r = resolve(d, &no_switches);
    r.components
}

/// Writhe minus the number of right cusps, with each component oriented so
/// that the lower branch of its first left cusp runs rightwards.
pub fn thurston_bennequin(d: &FrontDiagram) -> isize {
    let no_switches: [usize; 0] = [];
    let r = resolve(d, &no_switches);
    let n = r.lower.len();
    // strands meet at cusps; directions alternate around each component
    let mut nbrs = vec![Vec::new(); n];
    let mut cur: Vec<usize> = Vec::new();
    let mut next = 0;
    for e in d.events() {
        let p = e.position - 1;
        match e.kind {
            EventKind::LeftCusp => {
                cur.insert(p, next + 1);
                cur.insert(p, next);
                nbrs[next].push(next + 1);
                nbrs[next + 1].push(next);
                next += 2;
            }
            EventKind::RightCusp => {
                let (a, b) = (cur[p], cur[p + 1]);
                nbrs[a].push(b);
                nbrs[b].push(a);
                cur.drain(p..p + 2);
            }
            EventKind::Crossing => cur.swap(p, p + 1),
        }
    }
    let mut rightward: Vec<Option<bool>> = vec![None; n];
    for s in (0..n).step_by(2) {
        if rightward[s].is_some() {
            continue;
        }
        rightward[s] = Some(true);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let dir = rightward[x].expect("set");
            for &y in &nbrs[x] {
                if rightward[y].is_none() {
                    rightward[y] = Some(!dir);
                    stack.push(y);
                }
            }
        }
    }
    let mut writhe = 0isize;
    let mut right_cusps = 0isize;
    for (k, e) in d.events().iter().enumerate() {
        match e.kind {
            EventKind::Crossing => {
                let s = &r.slices[k];
                let (x, y) = (s[e.position - 1], s[e.position]);
                writhe += if rightward[x] == rightward[y] { 1 } else { -1 };
            }
            EventKind::RightCusp => right_cusps += 1,
            EventKind::LeftCusp => {}
        }
    }
    writhe - right_cusps
}
