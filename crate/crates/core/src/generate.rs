//! Fixture families.

use crate::diagram::{DiagramError, Event, FrontDiagram};

pub fn unknot() -> FrontDiagram {
    FrontDiagram::new(vec![Event::lc(1), Event::rc(1)])
}

/// Right-handed trefoil: two stacked eyes and three crossings between them.
pub fn trefoil() -> FrontDiagram {
    FrontDiagram::new(vec![
        Event::lc(1),
        Event::lc(3),
        Event::x(2),
        Event::x(2),
        Event::x(2),
        Event::rc(3),
        Event::rc(1),
    ])
}

/// Nested plat closure of a braid word on `strands` strands.
///
/// `strands` nested left cusps give `2 * strands` strands paired `i <-> 2s+1-i`,
/// letter `j` becomes `x j`, and nested right cusps close everything off.
pub fn plat_closure(strands: usize, word: &[usize]) -> Result<FrontDiagram, DiagramError> {
    if strands < 2 || word.is_empty() {
        return Err(DiagramError::EmptyBraid);
    }
    if let Some(&letter) = word.iter().find(|&&j| j == 0 || j >= strands) {
        return Err(DiagramError::InvalidBraidLetter { letter, max: strands - 1 });
    }
    let mut events: Vec<Event> = (1..=strands).map(Event::lc).collect();
    events.extend(word.iter().map(|&j| Event::x(j)));
    events.extend((1..=strands).rev().map(Event::rc));
    FrontDiagram::checked(events)
}

/// Maximal-tb front of the negative torus link `T(p, -(p + r))`.
///
/// Built as the `p`-copy of the standard unknot eye: `p` stacked eyes, the lower
/// strands sorted to the bottom, `r` cyclic shifts of that bundle, then the
/// sort undone and the eyes closed.
pub fn negative_torus(p: usize, r: usize) -> FrontDiagram {
    assert!(p >= 1, "at least one copy");
    let mut events: Vec<Event> = (0..p).map(|i| Event::lc(2 * i + 1)).collect();
    let mut sort = Vec::new();
    for i in 1..p {
        for pos in (i + 1..=2 * i).rev() {
            sort.push(pos);
        }
    }
    events.extend(sort.iter().map(|&q| Event::x(q)));
    for _ in 0..r {
        events.push(Event::lc(1));
        events.extend((2..=p).map(Event::x));
        events.push(Event::rc(p + 1));
    }
    events.extend(sort.iter().rev().map(|&q| Event::x(q)));
    events.extend((0..p).rev().map(|i| Event::rc(2 * i + 1)));
    FrontDiagram::new(events)
}

/// Max-tb Legendrian `(4, -(2n+5))` torus knot.
pub fn torus4(n: usize) -> FrontDiagram {
    negative_torus(4, 2 * n + 1)
}

/// Disjoint union of `k` standard unknots, stacked left to right.
pub fn unlink(k: usize) -> FrontDiagram {
    let mut events = Vec::with_capacity(2 * k);
    for _ in 0..k {
        events.push(Event::lc(1));
        events.push(Event::rc(1));
    }
    FrontDiagram::new(events)
}
