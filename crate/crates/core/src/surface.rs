//! Combinatorial ideal triangulations, the quiver vertex set and diagonal flips.
//!
//! A [`Triangulation`] is raw gluing data: a list of triangle ids and a list
//! of edge records, each attached to one or two `(triangle, side)` slots.
//! Triangle sides are numbered counterclockwise, side `s` running from
//! corner `s` to corner `s + 1`. An edge's first attachment traverses the
//! edge from tail to head; the second (if any) traverses it head to tail.
//! Corners are never stored; they are read off the oriented edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type TriangleId = u32;
pub type EdgeId = u32;
/// Label of a marked point (or puncture) at an end of an ideal edge.
pub type MarkedPoint = u32;

/// A `(triangle, side)` slot.
pub type SideSlot = (TriangleId, u8);

/// Second attachment of an edge: another side, or the surface boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attachment {
    Side(SideSlot),
    Boundary,
}

impl Serialize for Attachment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Attachment::Side(slot) => slot.serialize(s),
            Attachment::Boundary => s.serialize_str("boundary"),
        }
    }
}

impl<'de> Deserialize<'de> for Attachment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Slot(SideSlot),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Slot(slot) => Ok(Attachment::Side(slot)),
            Raw::Tag(t) if t == "boundary" => Ok(Attachment::Boundary),
            Raw::Tag(t) => Err(de::Error::custom(format!(
                "expected [triangle, side] or \"boundary\", got {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub tail: MarkedPoint,
    pub head: MarkedPoint,
    /// First slot traverses tail to head, the second head to tail.
    pub attach: (SideSlot, Attachment),
}

impl EdgeRecord {
    pub fn is_boundary(&self) -> bool {
        self.attach.1 == Attachment::Boundary
    }
}

/// Topological type of the surface: genus, boundary components, marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub genus: u32,
    pub boundary_components: u32,
    pub marked_points: u32,
}

impl Signature {
    /// `f = 2c + m + 4g - 4`.
    pub fn triangle_count(&self) -> i64 {
        2 * self.boundary_components as i64 + self.marked_points as i64 + 4 * self.genus as i64 - 4
    }

    /// `e = 3c + 2m + 6g - 6`.
    pub fn edge_count(&self) -> i64 {
        3 * self.boundary_components as i64 + 2 * self.marked_points as i64 + 6 * self.genus as i64
            - 6
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub triangles: Vec<TriangleId>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Signature>,
}

/// Vertex of the quiver: the center of a triangle, or one of the two
/// vertices on an edge. Slot 0 is the one nearer the edge's tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThetaVertexId {
    Center(TriangleId),
    EdgeVertex(EdgeId, u8),
}

impl fmt::Display for ThetaVertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaVertexId::Center(t) => write!(f, "c:{t}"),
            ThetaVertexId::EdgeVertex(e, s) => write!(f, "e:{e}:{s}"),
        }
    }
}

impl FromStr for ThetaVertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadVertexKey(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["c", t] => Ok(ThetaVertexId::Center(t.parse().map_err(|_| bad())?)),
            ["e", e, slot] => {
                let slot: u8 = slot.parse().map_err(|_| bad())?;
                if slot > 1 {
                    return Err(bad());
                }
                Ok(ThetaVertexId::EdgeVertex(
                    e.parse().map_err(|_| bad())?,
                    slot,
                ))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for ThetaVertexId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ThetaVertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// One problem found by [`validate_complex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateTriangle {
        triangle: TriangleId,
    },
    DuplicateEdge {
        edge: EdgeId,
    },
    UnknownTriangle {
        edge: EdgeId,
        triangle: TriangleId,
    },
    BadSideIndex {
        edge: EdgeId,
        side: u8,
    },
    RepeatedSlot {
        edge: EdgeId,
    },
    DanglingSide {
        triangle: TriangleId,
        side: u8,
    },
    DoubleAttachment {
        triangle: TriangleId,
        side: u8,
        edges: Vec<EdgeId>,
    },
    CornerMismatch {
        triangle: TriangleId,
        corner: u8,
    },
    CountMismatch {
        quantity: String,
        expected: i64,
        actual: i64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateTriangle { triangle } => {
                write!(f, "triangle {triangle} listed twice")
            }
            Violation::DuplicateEdge { edge } => write!(f, "edge {edge} listed twice"),
            Violation::UnknownTriangle { edge, triangle } => {
                write!(f, "edge {edge} attaches to unknown triangle {triangle}")
            }
            Violation::BadSideIndex { edge, side } => write!(f, "edge {edge} names side {side}"),
            Violation::RepeatedSlot { edge } => {
                write!(f, "edge {edge} attaches the same slot twice")
            }
            Violation::DanglingSide { triangle, side } => {
                write!(f, "side {side} of triangle {triangle} has no edge")
            }
            Violation::DoubleAttachment {
                triangle,
                side,
                edges,
            } => {
                write!(
                    f,
                    "side {side} of triangle {triangle} is attached to edges {edges:?}"
                )
            }
            Violation::CornerMismatch { triangle, corner } => {
                write!(f, "edges around corner {corner} of triangle {triangle} disagree on its marked point")
            }
            Violation::CountMismatch {
                quantity,
                expected,
                actual,
            } => {
                write!(f, "{quantity}: expected {expected}, found {actual}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// An edge as seen from one side of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SideRef {
    pub edge: EdgeId,
    /// True when the triangle traverses the edge from tail to head.
    pub aligned: bool,
}

/// Resolved per-triangle side table of a valid triangulation.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    sides: BTreeMap<TriangleId, [SideRef; 3]>,
    edges: BTreeMap<EdgeId, usize>,
}

impl Layout {
    pub fn sides(&self, t: TriangleId) -> Result<&[SideRef; 3]> {
        self.sides.get(&t).ok_or(Error::UnknownTriangle(t))
    }

    pub fn triangle_ids(&self) -> impl Iterator<Item = TriangleId> + '_ {
        self.sides.keys().copied()
    }
}

/// Quiver vertices of a side, ordered (near its start corner, near its end corner).
pub(crate) fn side_vertices(side: SideRef) -> (ThetaVertexId, ThetaVertexId) {
    let v0 = ThetaVertexId::EdgeVertex(side.edge, 0);
    let v1 = ThetaVertexId::EdgeVertex(side.edge, 1);
    if side.aligned {
        (v0, v1)
    } else {
        (v1, v0)
    }
}

impl Triangulation {
    pub fn edge(&self, id: EdgeId) -> Result<&EdgeRecord> {
        self.edges
            .iter()
            .find(|e| e.id == id)
            .ok_or(Error::UnknownEdge(id))
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = &EdgeRecord> {
        self.edges.iter().filter(|e| !e.is_boundary())
    }

    /// Resolve the side table, failing if the complex is malformed.
    pub(crate) fn layout(&self) -> Result<Layout> {
        let report = validate_complex(self);
        if !report.is_empty() {
            return Err(Error::InvalidComplex(report));
        }
        Ok(self.layout_unchecked())
    }

    fn layout_unchecked(&self) -> Layout {
        let mut sides: BTreeMap<TriangleId, [Option<SideRef>; 3]> =
            self.triangles.iter().map(|&t| (t, [None; 3])).collect();
        let mut edges = BTreeMap::new();
        for (idx, rec) in self.edges.iter().enumerate() {
            edges.insert(rec.id, idx);
            let (t, s) = rec.attach.0;
            sides.get_mut(&t).unwrap()[s as usize] = Some(SideRef {
                edge: rec.id,
                aligned: true,
            });
            if let Attachment::Side((t, s)) = rec.attach.1 {
                sides.get_mut(&t).unwrap()[s as usize] = Some(SideRef {
                    edge: rec.id,
                    aligned: false,
                });
            }
        }
        let sides = sides
            .into_iter()
            .map(|(t, s)| (t, [s[0].unwrap(), s[1].unwrap(), s[2].unwrap()]))
            .collect();
        Layout { sides, edges }
    }

    fn side_endpoints(&self, layout: &Layout, side: SideRef) -> (MarkedPoint, MarkedPoint) {
        let rec = &self.edges[layout.edges[&side.edge]];
        if side.aligned {
            (rec.tail, rec.head)
        } else {
            (rec.head, rec.tail)
        }
    }

    pub(crate) fn corners_with(&self, layout: &Layout, t: TriangleId) -> Result<[MarkedPoint; 3]> {
        let sides = layout.sides(t)?;
        Ok([0, 1, 2].map(|s| self.side_endpoints(layout, sides[s]).0))
    }

    /// Marked points at corners 0, 1, 2 of triangle `t`.
    pub fn corners(&self, t: TriangleId) -> Result<[MarkedPoint; 3]> {
        self.corners_with(&self.layout()?, t)
    }

    /// Edge ids on sides 0, 1, 2 of triangle `t`.
    pub fn triangle_edges(&self, t: TriangleId) -> Result<[EdgeId; 3]> {
        Ok(self.layout()?.sides(t)?.map(|s| s.edge))
    }

    /// Quiver vertices `a1..a7` of triangle `t` in the reading used by the
    /// rhombus conditions: corner 0 is the top, `a1`/`a3` sit on side 0 with
    /// `a1` nearer corner 0, `a6`/`a7` on side 1 with `a6` nearer corner 1,
    /// `a5`/`a2` on side 2 with `a5` nearer corner 2, and `a4` is the center.
    pub fn triangle_frame(&self, t: TriangleId) -> Result<[ThetaVertexId; 7]> {
        triangle_frame_with(&self.layout()?, t)
    }

    /// Key identifying a quiver vertex by its position among the marked
    /// points, independent of edge and triangle ids. Returns `None` when the
    /// marked points around the vertex are not distinct.
    pub fn geometric_keys(&self) -> Result<BTreeMap<ThetaVertexId, GeoKey>> {
        let layout = self.layout()?;
        let mut out = BTreeMap::new();
        for t in layout.triangle_ids() {
            let mut c = self.corners_with(&layout, t)?;
            c.sort_unstable();
            if c[0] == c[1] || c[1] == c[2] {
                return Err(Error::InvalidComplex(ValidationReport {
                    violations: vec![Violation::CornerMismatch {
                        triangle: t,
                        corner: 0,
                    }],
                }));
            }
            out.insert(ThetaVertexId::Center(t), GeoKey::Center(c));
        }
        for rec in &self.edges {
            out.insert(
                ThetaVertexId::EdgeVertex(rec.id, 0),
                GeoKey::Edge {
                    near: rec.tail,
                    far: rec.head,
                },
            );
            out.insert(
                ThetaVertexId::EdgeVertex(rec.id, 1),
                GeoKey::Edge {
                    near: rec.head,
                    far: rec.tail,
                },
            );
        }
        Ok(out)
    }
}

/// Position of a quiver vertex in terms of marked points only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeoKey {
    /// Sorted corner labels of a triangle.
    Center([MarkedPoint; 3]),
    Edge {
        near: MarkedPoint,
        far: MarkedPoint,
    },
}

pub(crate) fn triangle_frame_with(layout: &Layout, t: TriangleId) -> Result<[ThetaVertexId; 7]> {
    let sides = layout.sides(t)?;
    let (a1, a3) = side_vertices(sides[0]);
    let (a6, a7) = side_vertices(sides[1]);
    let (a5, a2) = side_vertices(sides[2]);
    Ok([a1, a2, a3, ThetaVertexId::Center(t), a5, a6, a7])
}

/// Structural check of the gluing data. An empty report means the complex
/// is a valid (oriented) triangulation.
pub fn validate_complex(t: &Triangulation) -> ValidationReport {
    let mut violations = Vec::new();

    let mut seen = BTreeSet::new();
    for &tri in &t.triangles {
        if !seen.insert(tri) {
            violations.push(Violation::DuplicateTriangle { triangle: tri });
        }
    }
    let mut seen_edges = BTreeSet::new();
    for rec in &t.edges {
        if !seen_edges.insert(rec.id) {
            violations.push(Violation::DuplicateEdge { edge: rec.id });
        }
    }

    let mut slot_edges: BTreeMap<SideSlot, Vec<EdgeId>> = BTreeMap::new();
    for rec in &t.edges {
        let mut slots = vec![rec.attach.0];
        if let Attachment::Side(slot) = rec.attach.1 {
            if slot == rec.attach.0 {
                violations.push(Violation::RepeatedSlot { edge: rec.id });
                continue;
            }
            slots.push(slot);
        }
        for (tri, side) in slots {
            if !seen.contains(&tri) {
                violations.push(Violation::UnknownTriangle {
                    edge: rec.id,
                    triangle: tri,
                });
            } else if side > 2 {
                violations.push(Violation::BadSideIndex { edge: rec.id, side });
            } else {
                slot_edges.entry((tri, side)).or_default().push(rec.id);
            }
        }
    }
    for &tri in &seen {
        for side in 0..3u8 {
            match slot_edges.get(&(tri, side)) {
                None => violations.push(Violation::DanglingSide {
                    triangle: tri,
                    side,
                }),
                Some(edges) if edges.len() > 1 => violations.push(Violation::DoubleAttachment {
                    triangle: tri,
                    side,
                    edges: edges.clone(),
                }),
                Some(_) => {}
            }
        }
    }

    if let Some(sig) = t.signature {
        let f = t.triangles.len() as i64;
        let e = t.edges.len() as i64;
        if f != sig.triangle_count() {
            violations.push(Violation::CountMismatch {
                quantity: "triangles".into(),
                expected: sig.triangle_count(),
                actual: f,
            });
        }
        if e != sig.edge_count() {
            violations.push(Violation::CountMismatch {
                quantity: "edges".into(),
                expected: sig.edge_count(),
                actual: e,
            });
        }
    }

    // Corner consistency needs a complete side table.
    if violations.is_empty() {
        let layout = t.layout_unchecked();
        for tri in layout.triangle_ids() {
            let sides = layout.sides[&tri];
            for s in 0..3 {
                let end = t.side_endpoints(&layout, sides[s]).1;
                let next_start = t.side_endpoints(&layout, sides[(s + 1) % 3]).0;
                if end != next_start {
                    violations.push(Violation::CornerMismatch {
                        triangle: tri,
                        corner: ((s + 1) % 3) as u8,
                    });
                }
            }
        }
    }

    ValidationReport { violations }
}

/// All quiver vertices: centers in triangle-id order, then both vertices of
/// each edge in edge-id order.
pub fn theta_index(t: &Triangulation) -> Vec<ThetaVertexId> {
    let mut tris = t.triangles.clone();
    tris.sort_unstable();
    let mut edges: Vec<EdgeId> = t.edges.iter().map(|e| e.id).collect();
    edges.sort_unstable();
    tris.into_iter()
        .map(ThetaVertexId::Center)
        .chain(edges.into_iter().flat_map(|e| {
            [
                ThetaVertexId::EdgeVertex(e, 0),
                ThetaVertexId::EdgeVertex(e, 1),
            ]
        }))
        .collect()
}

/// Triangulation of the convex `m`-gon with vertices `0..m` counterclockwise.
///
/// Boundary edge `i` runs `i -> i+1 (mod m)`; diagonals get ids `m, m+1, ...`
/// in sorted order and run from the lower vertex index. Triangles are
/// numbered in lexicographic order of their corner sets, corner 0 being the
/// smallest vertex.
pub fn build_polygon(m: u32, diagonals: &[(u32, u32)]) -> Result<Triangulation> {
    let bad = |msg: String| Error::InvalidPolygonTriangulation(msg);
    if m < 3 {
        return Err(bad(format!("a polygon needs at least 3 vertices, got {m}")));
    }
    let mut diags: Vec<(u32, u32)> = Vec::with_capacity(diagonals.len());
    for &(a, b) in diagonals {
        let (i, j) = (a.min(b), a.max(b));
        if j >= m {
            return Err(bad(format!("diagonal ({a},{b}) leaves the {m}-gon")));
        }
        if i == j || j - i == 1 || (i == 0 && j == m - 1) {
            return Err(bad(format!("({a},{b}) is not a diagonal")));
        }
        diags.push((i, j));
    }
    diags.sort_unstable();
    if diags.windows(2).any(|w| w[0] == w[1]) {
        return Err(bad("repeated diagonal".into()));
    }
    for (x, &(a, b)) in diags.iter().enumerate() {
        for &(c, d) in &diags[x + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return Err(bad(format!("diagonals ({a},{b}) and ({c},{d}) cross")));
            }
        }
    }
    if diags.len() != m as usize - 3 {
        return Err(bad(format!(
            "a triangulation of the {m}-gon needs {} diagonals, got {}",
            m - 3,
            diags.len()
        )));
    }

    let connected = |i: u32, j: u32| -> bool {
        let (i, j) = (i.min(j), i.max(j));
        j - i == 1 || (i == 0 && j == m - 1) || diags.binary_search(&(i, j)).is_ok()
    };
    let mut tris = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if !connected(i, j) {
                continue;
            }
            for k in j + 1..m {
                if connected(j, k) && connected(i, k) {
                    tris.push([i, j, k]);
                }
            }
        }
    }
    debug_assert_eq!(tris.len(), m as usize - 2);

    // Directed side (a -> b) to its slot.
    let mut slot_of: BTreeMap<(u32, u32), SideSlot> = BTreeMap::new();
    for (id, c) in tris.iter().enumerate() {
        for s in 0..3 {
            slot_of.insert((c[s], c[(s + 1) % 3]), (id as TriangleId, s as u8));
        }
    }

    let mut edges = Vec::with_capacity(2 * m as usize - 3);
    for i in 0..m {
        let (tail, head) = (i, (i + 1) % m);
        edges.push(EdgeRecord {
            id: i,
            tail,
            head,
            attach: (slot_of[&(tail, head)], Attachment::Boundary),
        });
    }
    for (k, &(i, j)) in diags.iter().enumerate() {
        edges.push(EdgeRecord {
            id: m + k as u32,
            tail: i,
            head: j,
            attach: (slot_of[&(i, j)], Attachment::Side(slot_of[&(j, i)])),
        });
    }

    Ok(Triangulation {
        triangles: (0..tris.len() as TriangleId).collect(),
        edges,
        signature: Some(Signature {
            genus: 0,
            boundary_components: 1,
            marked_points: m,
        }),
    })
}

/// Fan triangulation of the `m`-gon from vertex 0.
pub fn fan_polygon(m: u32) -> Result<Triangulation> {
    let diags: Vec<(u32, u32)> = (2..m.saturating_sub(1)).map(|j| (0, j)).collect();
    build_polygon(m, &diags)
}

/// The quadrilateral around an interior edge, labelled `a1..a12`.
///
/// With the diagonal running from `Q` (tail) to `P` (head), the left
/// triangle is `(Q, P, R)` and the right one `(P, Q, S)`:
/// `a6`/`a2` are the diagonal vertices near `Q`/`P`; `a5`/`a7` the left/right
/// centers; `a1`/`a4` lie on `PR` near `P`/`R`; `a9`/`a10` on `RQ` near
/// `R`/`Q`; `a11`/`a12` on `QS` near `Q`/`S`; `a8`/`a3` on `SP` near `S`/`P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadFrame {
    pub diagonal: EdgeId,
    pub left: TriangleId,
    pub right: TriangleId,
    /// `a1..a12`, zero-indexed.
    pub labels: [ThetaVertexId; 12],
    /// Marked points `[Q, P, R, S]`.
    pub corners: [MarkedPoint; 4],
}

impl QuadFrame {
    /// Label `a{i}` for `i` in `1..=12`.
    pub fn a(&self, i: usize) -> ThetaVertexId {
        self.labels[i - 1]
    }
}

pub(crate) fn quad_frame_with(t: &Triangulation, layout: &Layout, e: EdgeId) -> Result<QuadFrame> {
    let rec = t.edge(e)?;
    let (tl, sa) = rec.attach.0;
    let (tr, sb) = match rec.attach.1 {
        Attachment::Side(slot) => slot,
        Attachment::Boundary => return Err(Error::NotFlippable(e)),
    };
    if tl == tr {
        return Err(Error::SelfFoldedUnsupported(e));
    }
    let (sa, sb) = (sa as usize, sb as usize);
    let left = layout.sides(tl)?;
    let right = layout.sides(tr)?;
    let (a1, a4) = side_vertices(left[(sa + 1) % 3]);
    let (a9, a10) = side_vertices(left[(sa + 2) % 3]);
    let (a11, a12) = side_vertices(right[(sb + 1) % 3]);
    let (a8, a3) = side_vertices(right[(sb + 2) % 3]);
    let r = t.corners_with(layout, tl)?[(sa + 2) % 3];
    let s = t.corners_with(layout, tr)?[(sb + 2) % 3];
    Ok(QuadFrame {
        diagonal: e,
        left: tl,
        right: tr,
        labels: [
            a1,
            ThetaVertexId::EdgeVertex(e, 1),
            a3,
            a4,
            ThetaVertexId::Center(tl),
            ThetaVertexId::EdgeVertex(e, 0),
            ThetaVertexId::Center(tr),
            a8,
            a9,
            a10,
            a11,
            a12,
        ],
        corners: [rec.tail, rec.head, r, s],
    })
}

/// The quad frame of interior edge `e`.
pub fn quad_frame(t: &Triangulation, e: EdgeId) -> Result<QuadFrame> {
    quad_frame_with(t, &t.layout()?, e)
}

/// Replace diagonal `e` by the other diagonal of its quadrilateral.
///
/// The new diagonal keeps id `e` and runs from the lower to the higher
/// marked-point label of the two opposite corners (`R` to `S` on ties). The
/// triangle to its left keeps the old left triangle's id. Each new triangle
/// is numbered so that corner 0 carries its smallest label. Under these
/// rules flipping the same edge twice restores the input exactly.
pub fn flip_triangulation(
    t: &Triangulation,
    e: EdgeId,
) -> Result<(Triangulation, QuadFrame, QuadFrame)> {
    let layout = t.layout()?;
    let old = quad_frame_with(t, &layout, e)?;
    let [_, _, r, s] = old.corners;
    let rec = t.edge(e)?;
    let (sa, sb) = match rec.attach {
        ((_, sa), Attachment::Side((_, sb))) => (sa as usize, sb as usize),
        _ => unreachable!("quad_frame_with rejects boundary edges"),
    };
    let left = *layout.sides(old.left)?;
    let right = *layout.sides(old.right)?;
    let (l_pr, l_rq) = (left[(sa + 1) % 3], left[(sa + 2) % 3]);
    let (r_qs, r_sp) = (right[(sb + 1) % 3], right[(sb + 2) % 3]);

    let r_to_s = r <= s;
    let (tail, head) = if r_to_s { (r, s) } else { (s, r) };
    let diag_fwd = SideRef {
        edge: e,
        aligned: true,
    };
    let diag_rev = SideRef {
        edge: e,
        aligned: false,
    };
    // Triangle (R, S, P) has sides RS, SP, PR; triangle (S, R, Q) has SR, RQ, QS.
    let (new_left, new_right) = if r_to_s {
        (
            ([r, s, old.corners[1]], [diag_fwd, r_sp, l_pr]),
            ([s, r, old.corners[0]], [diag_rev, l_rq, r_qs]),
        )
    } else {
        (
            ([s, r, old.corners[0]], [diag_fwd, l_rq, r_qs]),
            ([r, s, old.corners[1]], [diag_rev, r_sp, l_pr]),
        )
    };

    let mut out = t.clone();
    {
        let diag = out.edges.iter_mut().find(|x| x.id == e).unwrap();
        diag.tail = tail;
        diag.head = head;
    }
    for (id, (corners, sides)) in [(old.left, new_left), (old.right, new_right)] {
        let rot = (0..3).min_by_key(|&k| (corners[k], k)).unwrap();
        for k in 0..3 {
            let side = sides[(k + rot) % 3];
            let slot = (id, k as u8);
            let rec = out.edges.iter_mut().find(|x| x.id == side.edge).unwrap();
            if side.aligned {
                rec.attach.0 = slot;
            } else {
                rec.attach.1 = Attachment::Side(slot);
            }
        }
    }

    let new_layout = out.layout()?;
    let new = quad_frame_with(&out, &new_layout, e)?;
    Ok((out, old, new))
}

/// Triangles in breadth-first order over interior-edge adjacency, starting
/// from the smallest id of each connected component.
pub(crate) fn spanning_order(t: &Triangulation) -> Vec<TriangleId> {
    let mut adj: BTreeMap<TriangleId, Vec<TriangleId>> =
        t.triangles.iter().map(|&x| (x, Vec::new())).collect();
    for rec in t.interior_edges() {
        if let Attachment::Side((b, _)) = rec.attach.1 {
            let a = rec.attach.0 .0;
            adj.get_mut(&a).unwrap().push(b);
            adj.get_mut(&b).unwrap().push(a);
        }
    }
    for v in adj.values_mut() {
        v.sort_unstable();
    }
    let mut order = Vec::with_capacity(adj.len());
    let mut seen = BTreeSet::new();
    for &start in adj.keys() {
        if !seen.insert(start) {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &adj[&x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Triangulation {
        build_polygon(3, &[]).unwrap()
    }

    #[test]
    fn polygon_counts() {
        let t = triangle();
        assert_eq!(
            (t.triangle_count(), t.edge_count(), theta_index(&t).len()),
            (1, 3, 7)
        );
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        assert_eq!(
            (q.triangle_count(), q.edge_count(), theta_index(&q).len()),
            (2, 5, 12)
        );
        let p = build_polygon(5, &[(0, 2), (0, 3)]).unwrap();
        assert_eq!(
            (p.triangle_count(), p.edge_count(), theta_index(&p).len()),
            (3, 7, 17)
        );
    }

    #[test]
    fn polygon_rejects_bad_diagonals() {
        for diags in [
            vec![],
            vec![(0, 2), (1, 3)],
            vec![(0, 1)],
            vec![(0, 7)],
            vec![(0, 2), (2, 0)],
        ] {
            assert!(matches!(
                build_polygon(4, &diags),
                Err(Error::InvalidPolygonTriangulation(_))
            ));
        }
        assert!(build_polygon(2, &[]).is_err());
        assert!(build_polygon(6, &[(0, 2), (1, 4), (0, 4)]).is_err());
    }

    #[test]
    fn all_boundary_triangle_is_valid() {
        let t = triangle();
        assert!(t.edges.iter().all(EdgeRecord::is_boundary));
        assert!(validate_complex(&t).is_empty());
    }

    #[test]
    fn double_attachment_reported() {
        let mut q = build_polygon(4, &[(0, 2)]).unwrap();
        // Boundary edge 0 now claims the slot that edge 1 already uses.
        q.edges[0].attach.0 = q.edges[1].attach.0;
        let report = validate_complex(&q);
        let doubles: Vec<_> = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::DoubleAttachment { .. }))
            .collect();
        assert_eq!(doubles.len(), 1, "{report}");
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DanglingSide { .. })));
    }

    #[test]
    fn signature_counts_checked() {
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        let sig = q.signature.unwrap();
        assert_eq!((sig.triangle_count(), sig.edge_count()), (2, 5));
        assert!(validate_complex(&q).is_empty());
        let mut wrong = q.clone();
        wrong.signature = Some(Signature {
            marked_points: 5,
            ..sig
        });
        let report = validate_complex(&wrong);
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn corner_mismatch_reported() {
        let mut q = build_polygon(4, &[(0, 2)]).unwrap();
        q.edges[4].tail = 3;
        assert!(validate_complex(&q)
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CornerMismatch { .. })));
    }

    #[test]
    fn theta_index_order() {
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        let idx = theta_index(&q);
        assert_eq!(idx[0], ThetaVertexId::Center(0));
        assert_eq!(idx[1], ThetaVertexId::Center(1));
        assert_eq!(idx[2], ThetaVertexId::EdgeVertex(0, 0));
        assert_eq!(idx[11], ThetaVertexId::EdgeVertex(4, 1));
        assert_eq!(idx, theta_index(&q.clone()));
    }

    #[test]
    fn vertex_keys_roundtrip() {
        for v in [ThetaVertexId::Center(3), ThetaVertexId::EdgeVertex(12, 1)] {
            assert_eq!(v.to_string().parse::<ThetaVertexId>().unwrap(), v);
        }
        assert!("e:1:2".parse::<ThetaVertexId>().is_err());
        assert!("x:1".parse::<ThetaVertexId>().is_err());
    }

    #[test]
    fn flip_quadrilateral() {
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        let (q2, old, new) = flip_triangulation(&q, 4).unwrap();
        let d = q2.edge(4).unwrap();
        assert_eq!((d.tail, d.head), (1, 3));
        assert_eq!(old.corners, [0, 2, 3, 1]);
        assert_eq!(new.corners, [1, 3, 0, 2]);
        assert!(validate_complex(&q2).is_empty());
        let distinct: BTreeSet<_> = old.labels.iter().collect();
        assert_eq!(distinct.len(), 12);
        // The polygon builder produces the same data for diagonal (1,3) up to ids.
        let direct = build_polygon(4, &[(1, 3)]).unwrap();
        let keys = |t: &Triangulation| -> BTreeSet<GeoKey> {
            t.geometric_keys().unwrap().into_values().collect()
        };
        assert_eq!(keys(&q2), keys(&direct));
    }

    #[test]
    fn flip_twice_is_identity() {
        let p = build_polygon(6, &[(0, 2), (0, 3), (3, 5)]).unwrap();
        for e in [6, 7, 8] {
            let (p1, _, _) = flip_triangulation(&p, e).unwrap();
            let (p2, _, _) = flip_triangulation(&p1, e).unwrap();
            assert_eq!(p2, p);
        }
    }

    #[test]
    fn flip_errors() {
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        assert_eq!(
            flip_triangulation(&q, 0).unwrap_err(),
            Error::NotFlippable(0)
        );
        assert_eq!(
            flip_triangulation(&q, 9).unwrap_err(),
            Error::UnknownEdge(9)
        );
    }

    #[test]
    fn self_folded_rejected() {
        // A triangle whose sides 0 and 1 are glued to each other.
        let t = Triangulation {
            triangles: vec![0],
            edges: vec![
                EdgeRecord {
                    id: 0,
                    tail: 0,
                    head: 1,
                    attach: ((0, 0), Attachment::Side((0, 1))),
                },
                EdgeRecord {
                    id: 1,
                    tail: 0,
                    head: 0,
                    attach: ((0, 2), Attachment::Boundary),
                },
            ],
            signature: None,
        };
        // Corners: side 0 runs 0->1, side 1 runs 1->0, side 2 runs 0->0.
        assert!(validate_complex(&t).is_empty(), "{}", validate_complex(&t));
        assert_eq!(
            flip_triangulation(&t, 0).unwrap_err(),
            Error::SelfFoldedUnsupported(0)
        );
    }

    #[test]
    fn json_shape() {
        let t = triangle();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["edges"][0]["attach"][1], "boundary");
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        let text = serde_json::to_string(&q).unwrap();
        let back: Triangulation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Attachment>("\"inside\"").is_err());
    }

    #[test]
    fn triangle_frame_reading() {
        let t = triangle();
        // corners (0,1,2); side 0 is edge 0 (0->1), side 1 edge 1, side 2 edge 2 (2->0)
        let f = t.triangle_frame(0).unwrap();
        use ThetaVertexId::*;
        assert_eq!(
            f,
            [
                EdgeVertex(0, 0),
                EdgeVertex(2, 1),
                EdgeVertex(0, 1),
                Center(0),
                EdgeVertex(2, 0),
                EdgeVertex(1, 0),
                EdgeVertex(1, 1)
            ]
        );
    }
}
