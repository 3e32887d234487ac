//! JSON geometry documents: the on-disk description of a shape pair.
//!
//! Format: `{"A": <shape>, "B": <shape>, "direction": [nx, ny, nz]}` with
//! shape encodings
//! `{"type": "boxUnion", "boxes": [{"min": [x,y,z], "max": [x,y,z]}, ...]}`,
//! `{"type": "sphere", "center": [x,y,z], "radius": r}`,
//! `{"type": "cylinderZ", "center": [x,y,z], "radius": r, "height": h}`, and
//! `{"type": "comb", "H": ..., "h": ..., "N": ..., "side": "A"|"B"}`.
//! `direction` may be omitted only when both sides are comb shapes (then
//! it defaults to [0, 0, 1], the comb's oscillation axis).

use crate::error::{Error, Result};
use crate::geometry::{comb_side, AxisBox, CombParams, CombSide, GeometryPair, Point3, Shape};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxDoc {
    min: [f64; 3],
    max: [f64; 3],
}

#[derive(Debug, Deserialize)]
enum SideDoc {
    A,
    B,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type")]
enum ShapeDoc {
    #[serde(rename = "boxUnion")]
    BoxUnion { boxes: Vec<BoxDoc> },
    #[serde(rename = "sphere")]
    Sphere { center: [f64; 3], radius: f64 },
    #[serde(rename = "cylinderZ")]
    CylinderZ {
        center: [f64; 3],
        radius: f64,
        height: f64,
    },
    #[serde(rename = "comb")]
    Comb {
        #[serde(rename = "H")]
        tooth_height: f64,
        #[serde(rename = "h")]
        slab_thickness: f64,
        #[serde(rename = "N")]
        teeth: u32,
        side: SideDoc,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDoc {
    #[serde(rename = "A")]
    a: ShapeDoc,
    #[serde(rename = "B")]
    b: ShapeDoc,
    direction: Option<[f64; 3]>,
}

fn point(v: [f64; 3]) -> Point3 {
    Point3::new(v[0], v[1], v[2])
}

fn build_shape(doc: ShapeDoc) -> Result<Shape> {
    match doc {
        ShapeDoc::BoxUnion { boxes } => {
            let built: Result<Vec<AxisBox>> = boxes
                .into_iter()
                .map(|b| AxisBox::from_corners(point(b.min), point(b.max)))
                .collect();
            Shape::box_union(built?)
        }
        ShapeDoc::Sphere { center, radius } => Shape::sphere(point(center), radius),
        ShapeDoc::CylinderZ {
            center,
            radius,
            height,
        } => Shape::cylinder_z(point(center), radius, height),
        ShapeDoc::Comb {
            tooth_height,
            slab_thickness,
            teeth,
            side,
        } => {
            let p = CombParams::new(tooth_height, slab_thickness, teeth)?;
            Ok(comb_side(
                p,
                match side {
                    SideDoc::A => CombSide::A,
                    SideDoc::B => CombSide::B,
                },
            ))
        }
    }
}

/// Parses a pair document from JSON text and validates it into a
/// [`GeometryPair`]. Malformed JSON or missing fields surface as
/// [`Error::Document`] with line/column positions; geometry violations
/// (overlap, volume mismatch, bad direction) keep their own error kinds.
pub fn parse_pair_document(json: &str) -> Result<GeometryPair> {
    let doc: PairDoc = serde_json::from_str(json)
        .map_err(|e| Error::Document(format!("geometry document: {e}")))?;
    let both_combs = matches!(
        (&doc.a, &doc.b),
        (ShapeDoc::Comb { .. }, ShapeDoc::Comb { .. })
    );
    let direction = match doc.direction {
        Some(v) => point(v),
        None if both_combs => Point3::new(0.0, 0.0, 1.0),
        None => {
            return Err(Error::Document(
                "geometry document: \"direction\" is required unless both shapes are combs"
                    .into(),
            ))
        }
    };
    let a = build_shape(doc.a)?;
    let b = build_shape(doc.b)?;
    GeometryPair::new(a, b, direction)
}

/// True when both sides of the parsed document are box unions (combs
/// included), making exact evaluation available.
pub fn is_box_union_pair(pair: &GeometryPair) -> bool {
    pair.a().as_box_union().is_some() && pair.b().as_box_union().is_some()
}
