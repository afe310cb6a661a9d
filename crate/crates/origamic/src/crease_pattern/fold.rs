//! FOLD 1.1 serialization. Decimal coordinates go in the standard field for
//! viewers; exact `a|b` strings go in `origamic:exact_coords`.

use serde::{Deserialize, Serialize};

use super::{build_pattern, ColorTag, Crease, CreaseAssignment, CreasePattern, PatternError};
use crate::geometry::{ExactPoint, ExactScalar};

#[derive(Debug, thiserror::Error)]
pub enum FoldError {
    #[error("malformed FOLD file: {0}")]
    MalformedFile(String),
    #[error("unsupported frame class: {0:?}")]
    UnsupportedFrameClass(Vec<String>),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Serialize, Deserialize)]
struct FoldFile {
    file_spec: f64,
    #[serde(default)]
    file_creator: String,
    #[serde(default)]
    file_classes: Vec<String>,
    #[serde(default)]
    frame_classes: Vec<String>,
    #[serde(default)]
    frame_attributes: Vec<String>,
    vertices_coords: Vec<Vec<f64>>,
    edges_vertices: Vec<Vec<usize>>,
    edges_assignment: Vec<String>,
    #[serde(default)]
    faces_vertices: Vec<Vec<usize>>,
    #[serde(rename = "origamic:exact_coords", default, skip_serializing_if = "Option::is_none")]
    exact_coords: Option<Vec<[String; 2]>>,
    #[serde(rename = "origamic:edges_tag", default, skip_serializing_if = "Option::is_none")]
    edges_tag: Option<Vec<String>>,
}

pub fn export_fold(pattern: &CreasePattern) -> Vec<u8> {
    let file = FoldFile {
        file_spec: 1.1,
        file_creator: "origamic".into(),
        file_classes: vec!["singleModel".into()],
        frame_classes: vec!["creasePattern".into()],
        frame_attributes: vec!["2D".into()],
        vertices_coords: pattern.vertices().iter().map(|p| vec![p.x.to_f64(), p.y.to_f64()]).collect(),
        edges_vertices: pattern.creases().iter().map(|c| c.v.to_vec()).collect(),
        edges_assignment: pattern.creases().iter().map(|c| c.assignment.fold_letter().to_string()).collect(),
        faces_vertices: pattern.faces().iter().map(|f| f.vertices.clone()).collect(),
        exact_coords: Some(pattern.vertices().iter().map(|p| [p.x.to_string(), p.y.to_string()]).collect()),
        edges_tag: Some(pattern.creases().iter().map(|c| c.tag.name().to_string()).collect()),
    };
    let mut out = serde_json::to_vec_pretty(&file).expect("FOLD structure serializes");
    out.push(b'\n');
    out
}

/// Parses and re-validates a FOLD crease pattern. Without the exact field the
/// decimal coordinates are taken as exact binary fractions.
pub fn import_fold(bytes: &[u8]) -> Result<CreasePattern, FoldError> {
    let file: FoldFile = serde_json::from_slice(bytes).map_err(|e| FoldError::MalformedFile(e.to_string()))?;
    if !file.frame_classes.is_empty() && !file.frame_classes.iter().any(|c| c == "creasePattern") {
        return Err(FoldError::UnsupportedFrameClass(file.frame_classes));
    }
    let n = file.vertices_coords.len();
    let vertices: Vec<ExactPoint> = match &file.exact_coords {
        Some(exact) => {
            if exact.len() != n {
                return Err(FoldError::MalformedFile("exact_coords length differs from vertices_coords".into()));
            }
            exact
                .iter()
                .map(|[x, y]| {
                    let px: ExactScalar = x.parse().map_err(|e| FoldError::MalformedFile(format!("{e}")))?;
                    let py: ExactScalar = y.parse().map_err(|e| FoldError::MalformedFile(format!("{e}")))?;
                    Ok(ExactPoint::new(px, py))
                })
                .collect::<Result<_, FoldError>>()?
        }
        None => file
            .vertices_coords
            .iter()
            .map(|c| {
                if c.len() != 2 {
                    return Err(FoldError::MalformedFile("vertex is not 2D".into()));
                }
                Ok(ExactPoint::new(float_scalar(c[0])?, float_scalar(c[1])?))
            })
            .collect::<Result<_, FoldError>>()?,
    };
    if file.edges_assignment.len() != file.edges_vertices.len() {
        return Err(FoldError::MalformedFile("edges_assignment length differs from edges_vertices".into()));
    }
    if let Some(tags) = &file.edges_tag {
        if tags.len() != file.edges_vertices.len() {
            return Err(FoldError::MalformedFile("edges_tag length differs from edges_vertices".into()));
        }
    }
    let mut creases = Vec::with_capacity(file.edges_vertices.len());
    for (i, ev) in file.edges_vertices.iter().enumerate() {
        if ev.len() != 2 {
            return Err(FoldError::MalformedFile(format!("edge {i} does not have two vertices")));
        }
        let assignment = CreaseAssignment::from_fold_letter(&file.edges_assignment[i])
            .ok_or_else(|| FoldError::MalformedFile(format!("edge {i} has assignment {:?}", file.edges_assignment[i])))?;
        let tag = match &file.edges_tag {
            Some(tags) => ColorTag::from_name(&tags[i])
                .ok_or_else(|| FoldError::MalformedFile(format!("edge {i} has tag {:?}", tags[i])))?,
            None => ColorTag::Tracked,
        };
        creases.push(Crease { v: [ev[0], ev[1]], assignment, tag });
    }
    Ok(build_pattern(vertices, creases)?)
}

fn float_scalar(x: f64) -> Result<ExactScalar, FoldError> {
    let r = num_rational::BigRational::from_float(x).ok_or_else(|| FoldError::MalformedFile(format!("coordinate {x}")))?;
    Ok(ExactScalar::new(r, Default::default()))
}
