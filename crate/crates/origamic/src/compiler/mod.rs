//! Netlists to placed, routed and lowered crease patterns.
//!
//! The pipeline is [`netlist::parse_netlist`] → [`layout::place`] →
//! [`layout::route`] → [`extract::extract`] → [`lower::lower_to_creases`].
//! Extraction reads the logic back from the placed tiles alone, so
//! simulating an extracted design checks the layout, not the netlist.

pub mod audit;
pub mod extract;
pub mod layout;
pub mod lower;
pub mod netlist;
pub mod tiles;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::crease_pattern::{CreasePattern, PatternError};
use crate::geometry::ExactScalar;
use crate::logic_layer::LogicCircuit;

pub use audit::{audit, efficiency_report, AuditReport, Efficiency, LaneGeom, Violation};
pub use extract::{extract, ExtractError, Extracted};
pub use layout::{place, route, PlacedDesign, Placement};
pub use lower::{length_by_tag, lower_to_creases};
pub use netlist::{parse_netlist, CircuitNetlist, NetlistError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("net {0} has no driver")]
    UndrivenNet(String),
    #[error("loop through NOT gates at net {0}")]
    InverterLoop(String),
    #[error("two connections need the tile at row {row}, column {col}")]
    RoutingCongestion { row: usize, col: usize },
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("lane states at row {row}, column {col} have no fold")]
    InconsistentTile { row: usize, col: usize },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileConfig {
    /// Paper distance between neighbouring strips, before `spacing`.
    pub pitch: ExactScalar,
    /// Paper width of a column lane.
    pub base_width: ExactScalar,
    /// Multiplier on `pitch`.
    pub spacing: ExactScalar,
    /// Input values the emitted mountain/valley assignment is drawn for.
    /// Missing inputs read as 0.
    pub inputs: BTreeMap<String, u8>,
}

impl Default for CompileConfig {
    fn default() -> Self {
        CompileConfig {
            pitch: ExactScalar::one(),
            base_width: ExactScalar::ratio(1, 8),
            spacing: ExactScalar::one(),
            inputs: BTreeMap::new(),
        }
    }
}

impl CompileConfig {
    /// Strip gap in lane units.
    pub fn gap(&self) -> Result<ExactScalar, CompileError> {
        for (name, v) in [("pitch", &self.pitch), ("base width", &self.base_width), ("spacing", &self.spacing)] {
            if v.signum() <= 0 {
                return Err(CompileError::Config(format!("{name} must be positive")));
            }
        }
        Ok(&(&self.pitch * &self.spacing) / &self.base_width)
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub design: PlacedDesign,
    pub extracted: Extracted,
    pub lane_states: Vec<u8>,
    pub pattern: CreasePattern,
    pub audit: AuditReport,
}

/// Place and route without lowering.
pub fn lay_out(circuit: &LogicCircuit, config: &CompileConfig) -> Result<PlacedDesign, CompileError> {
    route(&place(circuit, config.gap()?))
}

pub fn compile_circuit(circuit: &LogicCircuit, config: &CompileConfig) -> Result<Compiled, CompileError> {
    let design = lay_out(circuit, config)?;
    let extracted = extract(&design)?;
    let values = extracted.settle_vector(&design, &config.inputs)?;
    let lane_states = extracted.lane_states(&values);
    let pattern = lower_to_creases(&design, &lane_states, &config.base_width)?;
    let audit = audit(&design);
    Ok(Compiled { design, extracted, lane_states, pattern, audit })
}

pub fn compile(netlist: &CircuitNetlist, config: &CompileConfig) -> Result<Compiled, CompileError> {
    compile_circuit(&netlist.to_circuit()?, config)
}

/// Plain-text summary of a compiled design.
pub fn report(c: &Compiled) -> String {
    let mut s = String::new();
    let d = &c.design;
    let a = &c.audit;
    let e = efficiency_report(a);
    let _ = writeln!(s, "rows {} columns {}", d.placement.rows.len(), d.placement.cols.len());
    let _ = writeln!(s, "blocks {}", d.placement.blocks.len());
    for (k, n) in &a.tiles {
        let _ = writeln!(s, "tile {k} {n}");
    }
    let _ = writeln!(s, "lanes {} crossings {}", d.lanes.len(), a.crossings);
    let _ = writeln!(s, "vertices {} creases {} faces {}", c.pattern.vertices().len(), c.pattern.creases().len(), c.pattern.faces().len());
    let _ = writeln!(s, "useful pleats {}", e.useful);
    let _ = writeln!(s, "extraneous pleats {}", e.extraneous);
    let ratio = |r: Option<f64>| r.map(|x| format!("{x:.4}")).unwrap_or_else(|| "undefined".into());
    let _ = writeln!(s, "useful per extraneous {}", ratio(e.per_extraneous));
    let _ = writeln!(s, "useful fraction {}", ratio(e.useful_fraction));
    for (tag, len) in length_by_tag(&c.pattern) {
        let _ = writeln!(s, "length {} {len:.4}", tag.name());
    }
    let _ = writeln!(s, "violations {}", a.violations.len());
    for v in &a.violations {
        let _ = writeln!(s, "  {v:?}");
    }
    s
}
