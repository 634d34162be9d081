//! Lattice polygons, the lambda order, boundary reference paths and the
//! enumeration of lambda-increasing lattice paths.
//!
//! The order is `lambda(x, y) = x - eps*y` for an infinitesimally small
//! irrational `eps`. No epsilon is ever materialized: two lattice points
//! compare by `x` ascending, ties broken by `y` descending, which is exactly
//! the symbolic order and never ties.

use std::cmp::Ordering;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::seq::Sequence;

/// A point of the integer lattice.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.x, self.y).serialize(serializer)
    }
}

/// `lambda(a) < lambda(b)` in the exact symbolic order.
pub fn lambda_less(a: LatticePoint, b: LatticePoint) -> bool {
    lambda_cmp(a, b) == Ordering::Less
}

/// Total order induced by `lambda`: `x` ascending, then `y` descending.
pub fn lambda_cmp(a: LatticePoint, b: LatticePoint) -> Ordering {
    a.x.cmp(&b.x).then(b.y.cmp(&a.y))
}

/// The ambient region: the triangle `{x >= 0, y >= 0, x + y <= d}` or the
/// rectangle `[0, width] x [0, height]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LatticePolygon {
    Triangle { size: u32 },
    Rectangle { width: u32, height: u32 },
}

impl LatticePolygon {
    pub fn triangle(d: u32) -> Self {
        assert!(d >= 1, "triangle size must be at least 1");
        LatticePolygon::Triangle { size: d }
    }

    pub fn rectangle(width: u32, height: u32) -> Self {
        assert!(width >= 1 && height >= 1, "rectangle sides must be at least 1");
        LatticePolygon::Rectangle { width, height }
    }

    /// Number of columns to the right of `x = 0`.
    pub fn width(&self) -> u32 {
        match *self {
            LatticePolygon::Triangle { size } => size,
            LatticePolygon::Rectangle { width, .. } => width,
        }
    }

    /// Height of the left edge, the side carrying the contact conditions.
    pub fn height(&self) -> u32 {
        match *self {
            LatticePolygon::Triangle { size } => size,
            LatticePolygon::Rectangle { height, .. } => height,
        }
    }

    /// Top boundary height over column `x`.
    pub fn top_at(&self, x: i64) -> i64 {
        match *self {
            LatticePolygon::Triangle { size } => size as i64 - x,
            LatticePolygon::Rectangle { height, .. } => height as i64,
        }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        p.x >= 0 && p.y >= 0 && p.x <= self.width() as i64 && p.y <= self.top_at(p.x)
    }

    /// The lambda-minimal point `p = (0, height)`.
    pub fn lambda_min(&self) -> LatticePoint {
        LatticePoint::new(0, self.height() as i64)
    }

    /// The lambda-maximal point `q = (width, 0)`.
    pub fn lambda_max(&self) -> LatticePoint {
        LatticePoint::new(self.width() as i64, 0)
    }

    /// All lattice points of the polygon in ascending lambda order.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let mut pts = Vec::new();
        for x in 0..=self.width() as i64 {
            for y in (0..=self.top_at(x)).rev() {
                pts.push(LatticePoint::new(x, y));
            }
        }
        pts
    }
}

impl Serialize for LatticePolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match *self {
            LatticePolygon::Triangle { size } => {
                map.serialize_entry("shape", "triangle")?;
                map.serialize_entry("d", &size)?;
            }
            LatticePolygon::Rectangle { width, height } => {
                map.serialize_entry("shape", "rectangle")?;
                map.serialize_entry("dprime", &width)?;
                map.serialize_entry("d", &height)?;
            }
        }
        map.end()
    }
}

/// A strictly lambda-increasing chain of lattice points inside a polygon.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticePath {
    polygon: LatticePolygon,
    points: Vec<LatticePoint>,
}

impl LatticePath {
    pub fn new(polygon: LatticePolygon, points: Vec<LatticePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NotLambdaIncreasing);
        }
        for &p in &points {
            if !polygon.contains(p) {
                return Err(Error::PointOutsidePolygon { x: p.x, y: p.y });
            }
        }
        if !points.windows(2).all(|w| lambda_less(w[0], w[1])) {
            return Err(Error::NotLambdaIncreasing);
        }
        Ok(LatticePath { polygon, points })
    }

    /// Constructor for points already known to form a valid path.
    pub(crate) fn new_unchecked(polygon: LatticePolygon, points: Vec<LatticePoint>) -> Self {
        debug_assert!(LatticePath::new(polygon, points.clone()).is_ok());
        LatticePath { polygon, points }
    }

    pub fn polygon(&self) -> LatticePolygon {
        self.polygon
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn start(&self) -> LatticePoint {
        self.points[0]
    }

    pub fn end(&self) -> LatticePoint {
        *self.points.last().unwrap()
    }

    pub fn step_count(&self) -> usize {
        self.points.len() - 1
    }
}

impl Serialize for LatticePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("polygon", &self.polygon)?;
        map.serialize_entry("points", &self.points)?;
        map.end()
    }
}

/// The clockwise boundary path from `p` to `q`: the diagonal of a triangle,
/// the top edge followed by the right edge of a rectangle. Visits every
/// boundary lattice point on that side.
pub fn delta_plus(polygon: LatticePolygon) -> LatticePath {
    let mut points = Vec::new();
    match polygon {
        LatticePolygon::Triangle { size } => {
            let d = size as i64;
            for x in 0..=d {
                points.push(LatticePoint::new(x, d - x));
            }
        }
        LatticePolygon::Rectangle { width, height } => {
            let (w, h) = (width as i64, height as i64);
            for x in 0..=w {
                points.push(LatticePoint::new(x, h));
            }
            for y in (0..h).rev() {
                points.push(LatticePoint::new(w, y));
            }
        }
    }
    LatticePath::new_unchecked(polygon, points)
}

/// The counterclockwise boundary path from `p` to `q`: down the left edge,
/// then right along the bottom edge, visiting every lattice point.
pub fn delta_minus(polygon: LatticePolygon) -> LatticePath {
    let h = polygon.height() as i64;
    let w = polygon.width() as i64;
    let mut points = Vec::new();
    for y in (0..=h).rev() {
        points.push(LatticePoint::new(0, y));
    }
    for x in 1..=w {
        points.push(LatticePoint::new(x, 0));
    }
    LatticePath::new_unchecked(polygon, points)
}

/// Whether the path is an end path `delta_beta`: it descends the left edge
/// from `(0, I(beta))` to the origin with vertical steps whose length
/// multiset equals `beta` (any order), then runs along `y = 0` in unit steps
/// to `q`.
pub fn is_delta_beta(path: &LatticePath, beta: &Sequence) -> bool {
    is_delta_beta_points(path.polygon(), path.points(), beta)
}

pub(crate) fn is_delta_beta_points(
    polygon: LatticePolygon,
    points: &[LatticePoint],
    beta: &Sequence,
) -> bool {
    let start = LatticePoint::new(0, beta.weighted_sum() as i64);
    if points.first() != Some(&start) {
        return false;
    }
    // Leading run on the left edge.
    let mut i = 0;
    while i + 1 < points.len() && points[i + 1].x == 0 {
        i += 1;
    }
    if points[i] != LatticePoint::new(0, 0) {
        return false;
    }
    let lengths = (0..i).map(|j| (points[j].y - points[j + 1].y) as u64);
    if Sequence::from_parts(lengths) != *beta {
        return false;
    }
    // Unit steps along the bottom edge to q.
    let w = polygon.width() as i64;
    if points.len() != i + 1 + w as usize {
        return false;
    }
    points[i..]
        .iter()
        .enumerate()
        .all(|(t, &p)| p == LatticePoint::new(t as i64, 0))
}

/// Per-column data of a path without column skips: `heights[i]` is the
/// highest `y` of a path point on `x = i`, and `vertical_steps[i]` the
/// sequence of lengths of the vertical steps there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnProfile {
    pub heights: Vec<i64>,
    pub vertical_steps: Vec<Sequence>,
}

/// Computes the column profile; errors when a step spans two or more columns
/// (or the path misses column 0 entirely).
pub fn column_profile(path: &LatticePath) -> Result<ColumnProfile> {
    let points = path.points();
    if points[0].x != 0 {
        return Err(Error::ColumnSkip {
            from: 0,
            to: points[0].x,
        });
    }
    for w in points.windows(2) {
        if w[1].x - w[0].x >= 2 {
            return Err(Error::ColumnSkip {
                from: w[0].x,
                to: w[1].x,
            });
        }
    }
    let width = path.end().x;
    let mut heights = vec![0i64; width as usize + 1];
    let mut lengths: Vec<Vec<u64>> = vec![Vec::new(); width as usize + 1];
    for (j, &p) in points.iter().enumerate() {
        let col = p.x as usize;
        // Points on a column appear in descending y, so the first is h(i).
        if j == 0 || points[j - 1].x != p.x {
            heights[col] = p.y;
        } else {
            lengths[col].push((points[j - 1].y - p.y) as u64);
        }
    }
    Ok(ColumnProfile {
        heights,
        vertical_steps: lengths.into_iter().map(Sequence::from_parts).collect(),
    })
}

/// Whether some step of the path moves at least two columns to the right.
/// Such a path always has multiplicity zero, so enumeration may prune it.
pub fn has_column_skip(path: &LatticePath) -> bool {
    path.points().windows(2).any(|w| w[1].x - w[0].x >= 2)
}

/// Depth-first enumeration of every lambda-increasing path with exactly
/// `steps` steps from `start` to `end`, in a fixed order. With
/// `prune_column_skips` paths containing a step spanning two or more columns
/// are omitted. Memory stays linear in the path length.
pub fn enumerate_paths(
    polygon: LatticePolygon,
    start: LatticePoint,
    end: LatticePoint,
    steps: usize,
    prune_column_skips: bool,
) -> PathEnumerator {
    let feasible = polygon.contains(start) && polygon.contains(end);
    let pts: Vec<LatticePoint> = if feasible {
        polygon
            .lattice_points()
            .into_iter()
            .filter(|&p| lambda_cmp(start, p) != Ordering::Greater && lambda_cmp(p, end) != Ordering::Greater)
            .collect()
    } else {
        Vec::new()
    };
    // pts is lambda-sorted with start first and end last when both are valid.
    let valid = !pts.is_empty() && pts[0] == start && *pts.last().unwrap() == end;
    PathEnumerator {
        polygon,
        end_x: end.x,
        end_idx: pts.len().saturating_sub(1),
        pts,
        steps,
        prune: prune_column_skips,
        chain: vec![0],
        cursor: vec![1],
        done: !valid,
        emitted_trivial: false,
    }
}

pub struct PathEnumerator {
    polygon: LatticePolygon,
    pts: Vec<LatticePoint>,
    end_idx: usize,
    end_x: i64,
    steps: usize,
    prune: bool,
    /// Indices into `pts` of the current partial chain; `chain[0]` is `start`.
    chain: Vec<usize>,
    /// `cursor[i]` is the next candidate index to try after `chain[i]`.
    cursor: Vec<usize>,
    done: bool,
    emitted_trivial: bool,
}

impl PathEnumerator {
    fn feasible(&self, cand: usize) -> bool {
        let depth = self.chain.len(); // steps taken after pushing cand
        let steps_left = self.steps - depth;
        if cand == self.end_idx {
            if steps_left != 0 {
                return false;
            }
        } else {
            // Need steps_left further points ending exactly at end_idx.
            if steps_left == 0 || self.end_idx - cand < steps_left {
                return false;
            }
        }
        if self.prune {
            let prev = self.pts[*self.chain.last().unwrap()];
            let next = self.pts[cand];
            if next.x - prev.x >= 2 {
                return false;
            }
            if (self.end_x - next.x) as usize > steps_left {
                return false;
            }
        }
        true
    }
}

impl Iterator for PathEnumerator {
    type Item = LatticePath;

    fn next(&mut self) -> Option<LatticePath> {
        if self.done {
            return None;
        }
        if self.steps == 0 {
            // Only the trivial single-point path, and only when start == end.
            self.done = true;
            if self.end_idx == 0 && !self.emitted_trivial {
                self.emitted_trivial = true;
                return Some(LatticePath::new_unchecked(
                    self.polygon,
                    vec![self.pts[0]],
                ));
            }
            return None;
        }
        loop {
            let depth = self.chain.len() - 1;
            if depth == self.steps {
                let points: Vec<LatticePoint> =
                    self.chain.iter().map(|&i| self.pts[i]).collect();
                self.chain.pop();
                self.cursor.pop();
                return Some(LatticePath::new_unchecked(self.polygon, points));
            }
            let cand = self.cursor[depth];
            if cand > self.end_idx {
                // Exhausted candidates at this depth; backtrack.
                self.chain.pop();
                self.cursor.pop();
                if self.chain.is_empty() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            self.cursor[depth] += 1;
            if self.feasible(cand) {
                self.chain.push(cand);
                self.cursor.push(cand + 1);
            }
        }
    }
}
