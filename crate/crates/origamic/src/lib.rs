//! Boolean circuits to flat-foldable crease patterns, with exact verification.
//!
//! The crate is layered bottom-up: [`geometry`] supplies exact ℚ[√3]
//! arithmetic, [`crease_pattern`] the planar model, [`flat_fold_oracle`] a
//! small-pattern foldability decision, [`gadgets`] the signal constructions,
//! [`logic_layer`] the boolean reading of gadget networks, and [`compiler`]
//! turns netlists into placed patterns.

pub mod compiler;
pub mod crease_pattern;
pub mod exec;
pub mod flat_fold_oracle;
pub mod gadgets;
pub mod geometry;
pub mod logic_layer;
pub mod polygon;
pub mod spatial;
