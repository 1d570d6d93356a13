//! Line-oriented diagram text format.
//!
//! One event per line (`lc <p>`, `rc <p>`, `x <p>`), `#` starts a comment,
//! blank lines are ignored.

use crate::diagram::{DiagramError, Event, EventKind, FrontDiagram};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A parsed diagram together with the source line of every event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourcedDiagram {
    pub diagram: FrontDiagram,
    pub lines: Vec<usize>,
}

impl SourcedDiagram {
    /// Source line of the 1-based event index, if any.
    pub fn line_of(&self, event: usize) -> Option<usize> {
        event.checked_sub(1).and_then(|i| self.lines.get(i)).copied()
    }
}

pub fn parse_event(text: &str) -> Result<Event, String> {
    let mut parts = text.split_whitespace();
    let kw = parts.next().ok_or_else(|| "empty event".to_string())?;
    let kind = match kw {
        "lc" => EventKind::LeftCusp,
        "rc" => EventKind::RightCusp,
        "x" => EventKind::Crossing,
        other => return Err(format!("unknown event `{other}`")),
    };
    let pos = parts.next().ok_or_else(|| format!("`{kw}` needs a position"))?;
    let position: usize = pos.parse().map_err(|_| format!("bad position `{pos}`"))?;
    if position == 0 {
        return Err("positions are 1-based".into());
    }
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected token `{extra}`"));
    }
    Ok(Event { kind, position })
}

pub fn parse_sourced(text: &str) -> Result<SourcedDiagram, ParseError> {
    let mut events = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let e = parse_event(body).map_err(|message| ParseError { line: i + 1, message })?;
        events.push(e);
        lines.push(i + 1);
    }
    Ok(SourcedDiagram { diagram: FrontDiagram::new(events), lines })
}

/// Parses events without checking the diagram invariants.
pub fn parse(text: &str) -> Result<FrontDiagram, ParseError> {
    parse_sourced(text).map(|s| s.diagram)
}

/// Parses and validates.
pub fn parse_strict(text: &str) -> Result<FrontDiagram, TextError> {
    let d = parse(text)?;
    d.ensure_valid()?;
    Ok(d)
}

pub fn serialize(diagram: &FrontDiagram) -> String {
    diagram.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn parses_unknot() {
        let d = parse("lc 1\nrc 1\n").unwrap();
        assert_eq!(d, generate::unknot());
    }

    #[test]
    fn serializes_trefoil() {
        assert_eq!(serialize(&generate::trefoil()), "lc 1\nlc 3\nx 2\nx 2\nx 2\nrc 3\nrc 1\n");
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_sourced("# unknot\n\nlc 1   # birth\n  rc 1\n").unwrap();
        assert_eq!(s.diagram, generate::unknot());
        assert_eq!(s.lines, vec![3, 4]);
        assert_eq!(s.line_of(2), Some(4));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse("x 0").unwrap_err().line, 1);
        assert_eq!(parse("lc 1\nfoo 2").unwrap_err().line, 2);
        assert!(parse("lc").is_err());
        assert!(parse("lc 1 2").is_err());
        assert!(parse("lc -1").is_err());
    }

    #[test]
    fn strict_checks_invariants() {
        assert!(parse("rc 1").is_ok());
        assert!(matches!(parse_strict("rc 1"), Err(TextError::Diagram(_))));
        assert!(parse_strict("lc 1\nrc 1").is_ok());
    }
}
