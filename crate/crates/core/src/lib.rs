//! Legendrian front diagrams as event words: normal rulings, clasps, the
//! move calculus of decomposable fillings, and the clasp-parity obstruction.

pub mod clasp;
pub mod diagram;
pub mod filling;
pub mod generate;
pub mod moves;
pub mod ruling;
pub mod text;

pub use clasp::{clasp_report, count_clasps_pair, resolve, ClaspReport, Parity, Resolution};
pub use diagram::{Event, EventKind, FrontDiagram, StrandTrace, ValidationReport};
pub use ruling::{enumerate_rulings, is_normal_ruling, NormalRuling, PairingState};
