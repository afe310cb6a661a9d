//! Signal pleats and the gadgets that combine them.
//!
//! A pleat carries one bit. Looking along its direction of travel, state 0
//! puts the mountain crease on the left and state 1 puts the valley there.
//! Reversing the direction of travel therefore complements the state, which
//! is why relations are stated per port in the port's own direction: inputs
//! travel into the gadget, outputs travel out of it.

mod library;
mod sketch;

use std::collections::BTreeSet;

pub use library::*;
pub use sketch::{Arm, Sketch};

use crate::crease_pattern::{ColorTag, CreaseAssignment, CreasePattern};
use crate::exec;
use crate::flat_fold_oracle::{self, OracleConfig, OracleError};
use crate::geometry::{Direction, ExactPoint, ExactScalar, Isometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    Pleat,
    Nae,
    Reflector,
    Rotator,
    Duplicator,
    Not,
    Combiner,
    CrossingRight,
    CrossingZigzag,
    /// Two-twist corner tile with four axis-aligned arms.
    Hub,
    /// Axis-aligned NAE tile with a copy of its third input.
    NaeHub,
}

impl GadgetKind {
    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::Pleat => "pleat",
            GadgetKind::Nae => "nae",
            GadgetKind::Reflector => "reflector",
            GadgetKind::Rotator => "rotator",
            GadgetKind::Duplicator => "duplicator",
            GadgetKind::Not => "not",
            GadgetKind::Combiner => "combiner",
            GadgetKind::CrossingRight => "crossing-right",
            GadgetKind::CrossingZigzag => "crossing-zigzag",
            GadgetKind::Hub => "hub",
            GadgetKind::NaeHub => "nae-hub",
        }
    }
}

/// A pleat end on the fragment boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    /// Midpoint of the pleat where it meets the border.
    pub anchor: ExactPoint,
    /// Direction of travel: into the gadget for inputs, out for outputs.
    pub direction: Direction,
    pub width: ExactScalar,
    pub polarity: Polarity,
    pub role: ColorTag,
    /// Border-incident crease pieces, `[left, right]` of travel.
    pub creases: [usize; 2],
}

impl Port {
    /// Assignments that put this port in `state`.
    pub fn pin(&self, state: u8) -> [(usize, CreaseAssignment); 2] {
        let (l, r) = if state == 0 {
            (CreaseAssignment::Mountain, CreaseAssignment::Valley)
        } else {
            (CreaseAssignment::Valley, CreaseAssignment::Mountain)
        };
        [(self.creases[0], l), (self.creases[1], r)]
    }
}

/// Port-state tuples a gadget admits, in port order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogicalRelation {
    pub allowed: BTreeSet<Vec<u8>>,
}

impl LogicalRelation {
    pub fn new(allowed: impl IntoIterator<Item = Vec<u8>>) -> Self {
        LogicalRelation { allowed: allowed.into_iter().collect() }
    }

    /// All tuples of `arity` bits satisfying `pred`.
    pub fn from_predicate(arity: usize, pred: impl Fn(&[u8]) -> bool) -> Self {
        LogicalRelation::new(all_tuples(arity).into_iter().filter(|t| pred(t)))
    }

    pub fn contains(&self, tuple: &[u8]) -> bool {
        self.allowed.contains(tuple)
    }

    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    /// Restriction to a subset of positions.
    pub fn project(&self, positions: &[usize]) -> LogicalRelation {
        LogicalRelation::new(self.allowed.iter().map(|t| positions.iter().map(|&i| t[i]).collect::<Vec<u8>>()))
    }
}

pub fn all_tuples(arity: usize) -> Vec<Vec<u8>> {
    (0..1u32 << arity).map(|bits| (0..arity).map(|i| (bits >> (arity - 1 - i) & 1) as u8).collect()).collect()
}

/// Placement of a gadget: rotate by `heading` about the origin, then move to `at`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pose {
    pub at: ExactPoint,
    pub heading: Direction,
}

impl Pose {
    pub fn new(at: ExactPoint, heading: Direction) -> Self {
        Pose { at, heading }
    }

    pub fn isometry(&self) -> Isometry {
        Isometry::translation(self.at.clone()).compose(&Isometry::rotation(&ExactPoint::origin(), self.heading.k()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    pub pose: Pose,
    pub theta: Option<Direction>,
    pub ports: Vec<Port>,
    /// Crease pattern with every fold unassigned.
    pub fragment: CreasePattern,
    pub relation: LogicalRelation,
}

impl GadgetInstance {
    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn port_index(&self, name: &str) -> Option<usize> {
        self.ports.iter().position(|p| p.name == name)
    }

    /// Port positions with the tracked role.
    pub fn tracked_ports(&self) -> Vec<usize> {
        (0..self.ports.len()).filter(|&i| self.ports[i].role == ColorTag::Tracked).collect()
    }

    pub fn pins(&self, states: &[u8]) -> Vec<(usize, CreaseAssignment)> {
        self.ports.iter().zip(states).flat_map(|(p, &s)| p.pin(s)).collect()
    }

    /// Pins for `states`, or `None` when two ports share a crease and disagree.
    pub fn consistent_pins(&self, states: &[u8]) -> Option<Vec<(usize, CreaseAssignment)>> {
        let pins = self.pins(states);
        let mut seen = std::collections::BTreeMap::new();
        for &(c, a) in &pins {
            if *seen.entry(c).or_insert(a) != a {
                return None;
            }
        }
        Some(pins)
    }

    /// The fragment with a complete M/V assignment realizing `states`, taken
    /// from an oracle witness. `None` if the states are not foldable.
    pub fn assigned(&self, states: &[u8], config: &OracleConfig) -> Result<Option<CreasePattern>, OracleError> {
        let Some(pins) = self.consistent_pins(states) else { return Ok(None) };
        let d = flat_fold_oracle::is_flat_foldable_with(&self.fragment, &pins, config)?;
        Ok(d.witness().map(|w| {
            let changes: Vec<(usize, CreaseAssignment)> = w.assignments.iter().copied().enumerate().collect();
            self.fragment.with_assignments(&changes)
        }))
    }
}

/// The relation the oracle actually admits, by trying every port-state tuple.
pub fn oracle_relation(g: &GadgetInstance, config: &OracleConfig) -> Result<LogicalRelation, OracleError> {
    let geom = flat_fold_oracle::analyze(&g.fragment, config)?;
    let tuples = all_tuples(g.ports.len());
    let ok = exec::map(&tuples, |t| g.consistent_pins(t).is_some_and(|p| geom.decide(&g.fragment, &p).is_foldable()));
    Ok(LogicalRelation::new(tuples.into_iter().zip(ok).filter(|(_, k)| *k).map(|(t, _)| t)))
}

/// Converts a relation on inward states into port states.
pub(crate) fn from_inward(polarities: &[Polarity], inward: impl Fn(&[u8]) -> bool) -> LogicalRelation {
    LogicalRelation::from_predicate(polarities.len(), |t| {
        let inw: Vec<u8> =
            t.iter().zip(polarities).map(|(&s, p)| if *p == Polarity::Output { 1 - s } else { s }).collect();
        inward(&inw)
    })
}
