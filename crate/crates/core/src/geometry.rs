//! Shapes, pair validation, comb construction, and uniform sampling.
//!
//! All coordinates are dimensionless model units: the form factor is
//! scale-invariant, so only ratios matter. Shapes are immutable after
//! construction and safe to share across threads.

use crate::error::{Error, Result};
use rand::Rng;

/// Tolerance for separation classification: interval overlaps (or
/// penetration depths) must exceed this to count as `Overlapping`, and
/// gaps must exceed it to count as `Separated`; the band in between is
/// `Touching`. Guards floating-point face equality.
pub const CONTACT_TOLERANCE: f64 = 1e-12;

/// Relative tolerance for the equal-volume pair invariant.
pub const VOLUME_TOLERANCE: f64 = 1e-9;

/// A point or vector in model space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn sub(self, other: Point3) -> Point3 {
        Point3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Returns the point scaled to unit norm.
    pub fn normalized(self) -> Result<Point3> {
        if !self.is_finite() {
            return Err(Error::InvalidDirection("non-finite components".into()));
        }
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::InvalidDirection("zero vector".into()));
        }
        Ok(Point3::new(self.x / n, self.y / n, self.z / n))
    }

    pub fn component(self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }
}

/// A coordinate axis; also used to name oscillation directions that the
/// analytic evaluator can handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn unit(self) -> Point3 {
        match self {
            Axis::X => Point3::new(1.0, 0.0, 0.0),
            Axis::Y => Point3::new(0.0, 1.0, 0.0),
            Axis::Z => Point3::new(0.0, 0.0, 1.0),
        }
    }

    /// Identifies a unit vector that coincides with ±axis within `1e-12`.
    pub fn of_direction(n: Point3) -> Option<Axis> {
        for axis in Axis::ALL {
            if (n.component(axis).abs() - 1.0).abs() <= 1e-12 {
                return Some(axis);
            }
        }
        None
    }
}

/// Axis-aligned box with strictly positive extent on every axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisBox {
    xlo: f64,
    xhi: f64,
    ylo: f64,
    yhi: f64,
    zlo: f64,
    zhi: f64,
}

impl AxisBox {
    pub fn new(xlo: f64, xhi: f64, ylo: f64, yhi: f64, zlo: f64, zhi: f64) -> Result<Self> {
        let bounds = [xlo, xhi, ylo, yhi, zlo, zhi];
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidBox("non-finite bound".into()));
        }
        if xlo >= xhi || ylo >= yhi || zlo >= zhi {
            return Err(Error::InvalidBox(format!(
                "empty extent: [{xlo},{xhi}]×[{ylo},{yhi}]×[{zlo},{zhi}]"
            )));
        }
        Ok(AxisBox {
            xlo,
            xhi,
            ylo,
            yhi,
            zlo,
            zhi,
        })
    }

    /// Convenience constructor from corner points.
    pub fn from_corners(min: Point3, max: Point3) -> Result<Self> {
        AxisBox::new(min.x, max.x, min.y, max.y, min.z, max.z)
    }

    /// The (lo, hi) interval on one axis.
    pub fn interval(&self, axis: Axis) -> (f64, f64) {
        match axis {
            Axis::X => (self.xlo, self.xhi),
            Axis::Y => (self.ylo, self.yhi),
            Axis::Z => (self.zlo, self.zhi),
        }
    }

    /// Intervals in (x, y, z) order.
    pub fn intervals(&self) -> [(f64, f64); 3] {
        [
            (self.xlo, self.xhi),
            (self.ylo, self.yhi),
            (self.zlo, self.zhi),
        ]
    }

    pub fn volume(&self) -> f64 {
        (self.xhi - self.xlo) * (self.yhi - self.ylo) * (self.zhi - self.zlo)
    }

    /// Rebuilds the box with intervals permuted to (x', y', z') order.
    pub fn with_intervals(iv: [(f64, f64); 3]) -> AxisBox {
        // Intervals come from an existing valid box, so re-validation is
        // unnecessary, but keep the invariant check in debug builds.
        debug_assert!(iv.iter().all(|(lo, hi)| lo < hi));
        AxisBox {
            xlo: iv[0].0,
            xhi: iv[0].1,
            ylo: iv[1].0,
            yhi: iv[1].1,
            zlo: iv[2].0,
            zhi: iv[2].1,
        }
    }

    pub fn translated(&self, d: Point3) -> AxisBox {
        AxisBox {
            xlo: self.xlo + d.x,
            xhi: self.xhi + d.x,
            ylo: self.ylo + d.y,
            yhi: self.yhi + d.y,
            zlo: self.zlo + d.z,
            zhi: self.zhi + d.z,
        }
    }

    pub fn scaled(&self, s: f64) -> AxisBox {
        AxisBox {
            xlo: self.xlo * s,
            xhi: self.xhi * s,
            ylo: self.ylo * s,
            yhi: self.yhi * s,
            zlo: self.zlo * s,
            zhi: self.zhi * s,
        }
    }
}

/// A rigid body: a union of axis-aligned boxes, a sphere, or a z-aligned
/// cylinder. Box unions must have pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    BoxUnion(Vec<AxisBox>),
    Sphere {
        center: Point3,
        radius: f64,
    },
    CylinderZ {
        center: Point3,
        radius: f64,
        height: f64,
    },
}

impl Shape {
    /// Builds a box union, validating pairwise interior disjointness.
    pub fn box_union(boxes: Vec<AxisBox>) -> Result<Shape> {
        let shape = Shape::BoxUnion(boxes);
        shape.validate()?;
        Ok(shape)
    }

    pub fn sphere(center: Point3, radius: f64) -> Result<Shape> {
        if !center.is_finite() || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidShape(format!("sphere radius {radius}")));
        }
        Ok(Shape::Sphere { center, radius })
    }

    pub fn cylinder_z(center: Point3, radius: f64, height: f64) -> Result<Shape> {
        if !center.is_finite()
            || !radius.is_finite()
            || !height.is_finite()
            || radius <= 0.0
            || height <= 0.0
        {
            return Err(Error::InvalidShape(format!(
                "cylinder radius {radius}, height {height}"
            )));
        }
        Ok(Shape::CylinderZ {
            center,
            radius,
            height,
        })
    }

    /// Lebesgue volume of the shape.
    pub fn volume(&self) -> f64 {
        match self {
            Shape::BoxUnion(boxes) => {
                crate::sum::neumaier_sum(boxes.iter().map(|b| b.volume()))
            }
            Shape::Sphere { radius, .. } => {
                4.0 / 3.0 * std::f64::consts::PI * radius.powi(3)
            }
            Shape::CylinderZ { radius, height, .. } => {
                std::f64::consts::PI * radius * radius * height
            }
        }
    }

    /// Re-checks the construction invariants (enum variants are public,
    /// so shapes can be built without the checked constructors).
    pub fn validate(&self) -> Result<()> {
        match self {
            Shape::BoxUnion(boxes) => {
                if boxes.is_empty() {
                    return Err(Error::InvalidShape("box union must not be empty".into()));
                }
                for i in 0..boxes.len() {
                    for j in (i + 1)..boxes.len() {
                        if boxes_overlap(&boxes[i], &boxes[j]) {
                            return Err(Error::Overlap(format!(
                                "union members {i} and {j} have intersecting interiors"
                            )));
                        }
                    }
                }
                Ok(())
            }
            Shape::Sphere { center, radius } => {
                if !center.is_finite() || !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidShape(format!("sphere radius {radius}")));
                }
                Ok(())
            }
            Shape::CylinderZ {
                center,
                radius,
                height,
            } => {
                if !center.is_finite()
                    || !radius.is_finite()
                    || !height.is_finite()
                    || *radius <= 0.0
                    || *height <= 0.0
                {
                    return Err(Error::InvalidShape(format!(
                        "cylinder radius {radius}, height {height}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// The member boxes if this is a box union.
    pub fn as_box_union(&self) -> Option<&[AxisBox]> {
        match self {
            Shape::BoxUnion(boxes) => Some(boxes),
            _ => None,
        }
    }

    pub fn translated(&self, d: Point3) -> Shape {
        match self {
            Shape::BoxUnion(boxes) => {
                Shape::BoxUnion(boxes.iter().map(|b| b.translated(d)).collect())
            }
            Shape::Sphere { center, radius } => Shape::Sphere {
                center: Point3::new(center.x + d.x, center.y + d.y, center.z + d.z),
                radius: *radius,
            },
            Shape::CylinderZ {
                center,
                radius,
                height,
            } => Shape::CylinderZ {
                center: Point3::new(center.x + d.x, center.y + d.y, center.z + d.z),
                radius: *radius,
                height: *height,
            },
        }
    }
}

/// How two shapes relate spatially; see [`separation_class`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeparationClass {
    /// Closures are disjoint; carries the minimum Euclidean distance.
    Separated { gap: f64 },
    /// Closures intersect but interiors are disjoint (shared faces/points).
    Touching,
    /// Interiors intersect; fatal for every form-factor operation.
    Overlapping,
}

/// One spatial factor (an interval pair, a disc pair, …) of a product-set
/// distance computation.
#[derive(Clone, Copy)]
enum FactorClass {
    Sep(f64),
    Touch,
    Over,
}

fn classify_scalar(signed_gap: f64) -> FactorClass {
    if signed_gap > CONTACT_TOLERANCE {
        FactorClass::Sep(signed_gap)
    } else if signed_gap < -CONTACT_TOLERANCE {
        FactorClass::Over
    } else {
        FactorClass::Touch
    }
}

/// Signed gap between two closed intervals: positive = gap, negative =
/// overlap depth, zero = shared endpoint.
fn interval_signed_gap(a: (f64, f64), b: (f64, f64)) -> f64 {
    f64::max(a.0, b.0) - f64::min(a.1, b.1)
}

fn combine_factors(factors: &[FactorClass]) -> SeparationClass {
    let mut gap_sq = 0.0;
    let mut any_sep = false;
    let mut all_over = true;
    for f in factors {
        match f {
            FactorClass::Sep(g) => {
                any_sep = true;
                all_over = false;
                gap_sq += g * g;
            }
            FactorClass::Touch => all_over = false,
            FactorClass::Over => {}
        }
    }
    if any_sep {
        SeparationClass::Separated { gap: gap_sq.sqrt() }
    } else if all_over {
        SeparationClass::Overlapping
    } else {
        SeparationClass::Touching
    }
}

fn boxes_overlap(a: &AxisBox, b: &AxisBox) -> bool {
    matches!(box_box_class(a, b), SeparationClass::Overlapping)
}

pub(crate) fn box_box_class(a: &AxisBox, b: &AxisBox) -> SeparationClass {
    let factors: Vec<FactorClass> = Axis::ALL
        .iter()
        .map(|&ax| classify_scalar(interval_signed_gap(a.interval(ax), b.interval(ax))))
        .collect();
    combine_factors(&factors)
}

/// Distance from a point to a closed rectangle in the xy-plane.
fn point_rect_distance(px: f64, py: f64, rect: &AxisBox) -> f64 {
    let dx = (rect.xlo - px).max(px - rect.xhi).max(0.0);
    let dy = (rect.ylo - py).max(py - rect.yhi).max(0.0);
    (dx * dx + dy * dy).sqrt()
}

fn sphere_sphere_class(c1: Point3, r1: f64, c2: Point3, r2: f64) -> SeparationClass {
    let signed = c1.sub(c2).norm() - (r1 + r2);
    match classify_scalar(signed) {
        FactorClass::Sep(g) => SeparationClass::Separated { gap: g },
        FactorClass::Touch => SeparationClass::Touching,
        FactorClass::Over => SeparationClass::Overlapping,
    }
}

fn point_box_distance(p: Point3, b: &AxisBox) -> f64 {
    let dx = (b.xlo - p.x).max(p.x - b.xhi).max(0.0);
    let dy = (b.ylo - p.y).max(p.y - b.yhi).max(0.0);
    let dz = (b.zlo - p.z).max(p.z - b.zhi).max(0.0);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

fn point_cylinder_distance(p: Point3, center: Point3, radius: f64, height: f64) -> f64 {
    let (zlo, zhi) = (center.z - height / 2.0, center.z + height / 2.0);
    let dz = (zlo - p.z).max(p.z - zhi).max(0.0);
    let radial = ((p.x - center.x).powi(2) + (p.y - center.y).powi(2)).sqrt();
    let dxy = (radial - radius).max(0.0);
    (dz * dz + dxy * dxy).sqrt()
}

fn sphere_box_class(center: Point3, radius: f64, b: &AxisBox) -> SeparationClass {
    match classify_scalar(point_box_distance(center, b) - radius) {
        FactorClass::Sep(g) => SeparationClass::Separated { gap: g },
        FactorClass::Touch => SeparationClass::Touching,
        FactorClass::Over => SeparationClass::Overlapping,
    }
}

fn sphere_cylinder_class(
    sc: Point3,
    sr: f64,
    cc: Point3,
    cr: f64,
    ch: f64,
) -> SeparationClass {
    match classify_scalar(point_cylinder_distance(sc, cc, cr, ch) - sr) {
        FactorClass::Sep(g) => SeparationClass::Separated { gap: g },
        FactorClass::Touch => SeparationClass::Touching,
        FactorClass::Over => SeparationClass::Overlapping,
    }
}

fn cylinder_box_class(cc: Point3, cr: f64, ch: f64, b: &AxisBox) -> SeparationClass {
    let z_cyl = (cc.z - ch / 2.0, cc.z + ch / 2.0);
    let z_factor = classify_scalar(interval_signed_gap(z_cyl, (b.zlo, b.zhi)));
    let xy_factor = classify_scalar(point_rect_distance(cc.x, cc.y, b) - cr);
    combine_factors(&[z_factor, xy_factor])
}

fn cylinder_cylinder_class(
    c1: Point3,
    r1: f64,
    h1: f64,
    c2: Point3,
    r2: f64,
    h2: f64,
) -> SeparationClass {
    let z1 = (c1.z - h1 / 2.0, c1.z + h1 / 2.0);
    let z2 = (c2.z - h2 / 2.0, c2.z + h2 / 2.0);
    let z_factor = classify_scalar(interval_signed_gap(z1, z2));
    let planar = ((c1.x - c2.x).powi(2) + (c1.y - c2.y).powi(2)).sqrt();
    let xy_factor = classify_scalar(planar - (r1 + r2));
    combine_factors(&[z_factor, xy_factor])
}

fn primitive_class(a: &Shape, b: &Shape) -> SeparationClass {
    use Shape::*;
    match (a, b) {
        (BoxUnion(_), _) | (_, BoxUnion(_)) => {
            unreachable!("unions handled by separation_class")
        }
        (
            Sphere {
                center: c1,
                radius: r1,
            },
            Sphere {
                center: c2,
                radius: r2,
            },
        ) => sphere_sphere_class(*c1, *r1, *c2, *r2),
        (
            Sphere { center, radius },
            CylinderZ {
                center: cc,
                radius: cr,
                height: ch,
            },
        )
        | (
            CylinderZ {
                center: cc,
                radius: cr,
                height: ch,
            },
            Sphere { center, radius },
        ) => sphere_cylinder_class(*center, *radius, *cc, *cr, *ch),
        (
            CylinderZ {
                center: c1,
                radius: r1,
                height: h1,
            },
            CylinderZ {
                center: c2,
                radius: r2,
                height: h2,
            },
        ) => cylinder_cylinder_class(*c1, *r1, *h1, *c2, *r2, *h2),
    }
}

fn shape_box_class(shape: &Shape, b: &AxisBox) -> SeparationClass {
    match shape {
        Shape::BoxUnion(_) => unreachable!("unions handled by separation_class"),
        Shape::Sphere { center, radius } => sphere_box_class(*center, *radius, b),
        Shape::CylinderZ {
            center,
            radius,
            height,
        } => cylinder_box_class(*center, *radius, *height, b),
    }
}

/// Classifies the spatial relation of two shapes: `Separated` with the
/// minimum Euclidean distance between closures, `Touching` when closures
/// meet but interiors stay disjoint, or `Overlapping`.
pub fn separation_class(a: &Shape, b: &Shape) -> SeparationClass {
    // Reduce unions to the worst member pair: any overlap dominates, then
    // any touch; otherwise the minimum gap.
    let mut min_gap = f64::INFINITY;
    let mut touching = false;

    let mut absorb = |class: SeparationClass| -> Option<SeparationClass> {
        match class {
            SeparationClass::Overlapping => Some(SeparationClass::Overlapping),
            SeparationClass::Touching => {
                touching = true;
                None
            }
            SeparationClass::Separated { gap } => {
                min_gap = min_gap.min(gap);
                None
            }
        }
    };

    match (a, b) {
        (Shape::BoxUnion(boxes_a), Shape::BoxUnion(boxes_b)) => {
            for ba in boxes_a {
                for bb in boxes_b {
                    if let Some(fatal) = absorb(box_box_class(ba, bb)) {
                        return fatal;
                    }
                }
            }
        }
        (Shape::BoxUnion(boxes), other) | (other, Shape::BoxUnion(boxes)) => {
            for bx in boxes {
                if let Some(fatal) = absorb(shape_box_class(other, bx)) {
                    return fatal;
                }
            }
        }
        (pa, pb) => {
            if let Some(fatal) = absorb(primitive_class(pa, pb)) {
                return fatal;
            }
        }
    }

    if touching {
        SeparationClass::Touching
    } else {
        SeparationClass::Separated { gap: min_gap }
    }
}

/// Two equal-volume shapes with disjoint interiors plus a unit oscillation
/// direction — the argument of the form factor.
#[derive(Debug, Clone)]
pub struct GeometryPair {
    a: Shape,
    b: Shape,
    direction: Point3,
}

impl GeometryPair {
    /// Validates and builds a pair. The direction is normalized; shapes
    /// must have disjoint interiors and equal volumes (relative 1e-9).
    pub fn new(a: Shape, b: Shape, direction: Point3) -> Result<GeometryPair> {
        let n = direction.normalized()?;
        a.validate()?;
        b.validate()?;
        if matches!(separation_class(&a, &b), SeparationClass::Overlapping) {
            return Err(Error::Overlap("pair members A and B".into()));
        }
        let (va, vb) = (a.volume(), b.volume());
        if (va - vb).abs() > VOLUME_TOLERANCE * va.abs().max(vb.abs()) {
            return Err(Error::VolumeMismatch { a: va, b: vb });
        }
        Ok(GeometryPair {
            a,
            b,
            direction: n,
        })
    }

    pub fn a(&self) -> &Shape {
        &self.a
    }

    pub fn b(&self) -> &Shape {
        &self.b
    }

    pub fn direction(&self) -> Point3 {
        self.direction
    }

    pub fn volume(&self) -> f64 {
        self.a.volume()
    }

    /// The same pair with A and B exchanged.
    pub fn swapped(&self) -> GeometryPair {
        GeometryPair {
            a: self.b.clone(),
            b: self.a.clone(),
            direction: self.direction,
        }
    }
}

/// Parameters of the interleaved comb pair: tooth height `H`, slab
/// thickness `h`, and tooth count `N` per side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombParams {
    pub tooth_height: f64,
    pub slab_thickness: f64,
    pub teeth: u32,
}

impl CombParams {
    pub fn new(tooth_height: f64, slab_thickness: f64, teeth: u32) -> Result<CombParams> {
        if !tooth_height.is_finite() || tooth_height <= 0.0 {
            return Err(Error::domain(
                "CombParams",
                format!("tooth height must be positive, got {tooth_height}"),
            ));
        }
        if !slab_thickness.is_finite() || slab_thickness <= 0.0 {
            return Err(Error::domain(
                "CombParams",
                format!("slab thickness must be positive, got {slab_thickness}"),
            ));
        }
        if teeth < 1 {
            return Err(Error::domain("CombParams", "tooth count must be ≥ 1"));
        }
        Ok(CombParams {
            tooth_height,
            slab_thickness,
            teeth,
        })
    }
}

/// The `i`-th tooth (1-based) of side A: x ∈ [(2i−2)/(2N), (2i−1)/(2N)].
pub(crate) fn tooth_a(p: CombParams, i: u32) -> AxisBox {
    let n2 = 2.0 * p.teeth as f64;
    AxisBox {
        xlo: (2 * i - 2) as f64 / n2,
        xhi: (2 * i - 1) as f64 / n2,
        ylo: 0.0,
        yhi: 1.0,
        zlo: 0.0,
        zhi: p.tooth_height,
    }
}

/// The `j`-th tooth (1-based) of side B: x ∈ [(2j−1)/(2N), 2j/(2N)].
pub(crate) fn tooth_b(p: CombParams, j: u32) -> AxisBox {
    let n2 = 2.0 * p.teeth as f64;
    AxisBox {
        xlo: (2 * j - 1) as f64 / n2,
        xhi: (2 * j) as f64 / n2,
        ylo: 0.0,
        yhi: 1.0,
        zlo: 0.0,
        zhi: p.tooth_height,
    }
}

/// Side A's base slab: [0,1]² × [−h, 0].
pub(crate) fn base_slab(p: CombParams) -> AxisBox {
    AxisBox {
        xlo: 0.0,
        xhi: 1.0,
        ylo: 0.0,
        yhi: 1.0,
        zlo: -p.slab_thickness,
        zhi: 0.0,
    }
}

/// Side B's cap slab: [0,1]² × [H, H+h].
pub(crate) fn cap_slab(p: CombParams) -> AxisBox {
    AxisBox {
        xlo: 0.0,
        xhi: 1.0,
        ylo: 0.0,
        yhi: 1.0,
        zlo: p.tooth_height,
        zhi: p.tooth_height + p.slab_thickness,
    }
}

/// Builds one side of the comb as a box union.
pub fn comb_side(p: CombParams, side: CombSide) -> Shape {
    let mut boxes = Vec::with_capacity(p.teeth as usize + 1);
    match side {
        CombSide::A => {
            for i in 1..=p.teeth {
                boxes.push(tooth_a(p, i));
            }
            boxes.push(base_slab(p));
        }
        CombSide::B => {
            for j in 1..=p.teeth {
                boxes.push(tooth_b(p, j));
            }
            boxes.push(cap_slab(p));
        }
    }
    // Construction guarantees disjoint interiors; skip the O(N²) recheck.
    Shape::BoxUnion(boxes)
}

/// Which side of the comb pair a shape belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombSide {
    A,
    B,
}

/// Builds the interleaved comb pair: side A is N teeth plus a base slab
/// below, side B is N offset teeth plus a cap slab above; the oscillation
/// direction is e_z. Teeth of the two sides share faces (`Touching`).
pub fn build_comb(p: CombParams) -> Result<GeometryPair> {
    GeometryPair::new(
        comb_side(p, CombSide::A),
        comb_side(p, CombSide::B),
        Point3::new(0.0, 0.0, 1.0),
    )
}

/// Draws a point uniformly from the shape's volume.
///
/// Component draws happen in a fixed (x, y, z) order — and a union's box
/// pick first — so that axis permutations of box/sphere geometry consume
/// the random stream identically (exact 90°-rotation equivariance).
pub fn sample_uniform<R: Rng + ?Sized>(shape: &Shape, rng: &mut R) -> Point3 {
    match shape {
        Shape::BoxUnion(boxes) => {
            let total: f64 = boxes.iter().map(|b| b.volume()).sum();
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = boxes.len() - 1;
            for (i, b) in boxes.iter().enumerate() {
                target -= b.volume();
                if target < 0.0 {
                    chosen = i;
                    break;
                }
            }
            sample_box(&boxes[chosen], rng)
        }
        Shape::Sphere { center, radius } => loop {
            let x = 2.0 * rng.gen::<f64>() - 1.0;
            let y = 2.0 * rng.gen::<f64>() - 1.0;
            let z = 2.0 * rng.gen::<f64>() - 1.0;
            if x * x + y * y + z * z <= 1.0 {
                return Point3::new(
                    center.x + radius * x,
                    center.y + radius * y,
                    center.z + radius * z,
                );
            }
        },
        Shape::CylinderZ {
            center,
            radius,
            height,
        } => {
            let r = radius * rng.gen::<f64>().sqrt();
            let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            let z = center.z - height / 2.0 + height * rng.gen::<f64>();
            Point3::new(center.x + r * theta.cos(), center.y + r * theta.sin(), z)
        }
    }
}

pub(crate) fn sample_box<R: Rng + ?Sized>(b: &AxisBox, rng: &mut R) -> Point3 {
    let x = b.xlo + (b.xhi - b.xlo) * rng.gen::<f64>();
    let y = b.ylo + (b.yhi - b.ylo) * rng.gen::<f64>();
    let z = b.zlo + (b.zhi - b.zlo) * rng.gen::<f64>();
    Point3::new(x, y, z)
}

/// Precomputed cumulative volumes for repeated union sampling.
pub(crate) struct PreparedSampler<'a> {
    shape: &'a Shape,
    cumulative: Vec<f64>,
    total: f64,
}

impl<'a> PreparedSampler<'a> {
    pub(crate) fn new(shape: &'a Shape) -> Self {
        let (cumulative, total) = match shape {
            Shape::BoxUnion(boxes) => {
                let mut acc = 0.0;
                let cum: Vec<f64> = boxes
                    .iter()
                    .map(|b| {
                        acc += b.volume();
                        acc
                    })
                    .collect();
                (cum, acc)
            }
            _ => (Vec::new(), 0.0),
        };
        PreparedSampler {
            shape,
            cumulative,
            total,
        }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point3 {
        match self.shape {
            Shape::BoxUnion(boxes) => {
                let target = rng.gen::<f64>() * self.total;
                let idx = self
                    .cumulative
                    .partition_point(|&c| c <= target)
                    .min(boxes.len() - 1);
                sample_box(&boxes[idx], rng)
            }
            other => sample_uniform(other, rng),
        }
    }
}
