//! Reduced webs in coordinates, per triangle and per surface, and their
//! bijection with hives.
//!
//! A reduced web on a triangle is a honeycomb of signed size `x` plus corner
//! arcs: `w`, `v` at corner 0, `u`, `t` at corner 1 and `y`, `z` at corner 2.
//! The first letter of each pair counts the arcs crossed at cost 1/3 by the
//! inward tripod leg from that corner.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hive::{rhombus_differences, Hive, TriangleHive};
use crate::surface::{triangle_frame_with, Attachment, ThetaVertexId, TriangleId, Triangulation};
use crate::third::Third;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TriangleWebCoords {
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub t: i64,
    pub u: i64,
    pub v: i64,
    pub w: i64,
}

impl TriangleWebCoords {
    pub const fn new(x: i64, y: i64, z: i64, t: i64, u: i64, v: i64, w: i64) -> Self {
        TriangleWebCoords {
            x,
            y,
            z,
            t,
            u,
            v,
            w,
        }
    }

    /// `(x, y, z, t, u, v, w)`
    pub fn to_array(self) -> [i64; 7] {
        [self.x, self.y, self.z, self.t, self.u, self.v, self.w]
    }

    pub fn from_array(c: [i64; 7]) -> Self {
        TriangleWebCoords::new(c[0], c[1], c[2], c[3], c[4], c[5], c[6])
    }

    pub fn validate(&self) -> Result<()> {
        let names = ["y", "z", "t", "u", "v", "w"];
        for (name, value) in names.iter().zip(&self.to_array()[1..]) {
            if *value < 0 {
                return Err(Error::InvalidWebCoords(format!(
                    "corner count {name} = {value} is negative"
                )));
            }
        }
        Ok(())
    }

    /// Reject coordinates whose magnitude exceeds `limit`.
    pub fn check_bound(&self, limit: i64) -> Result<()> {
        for value in self.to_array() {
            if value.checked_abs().is_none_or(|m| m > limit) {
                return Err(Error::OutOfRange { value, limit });
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for TriangleWebCoords {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("bad coordinate {p:?}: {e}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let arr: [i64; 7] = parts.try_into().map_err(|v: Vec<i64>| {
            format!("expected 7 coordinates x,y,z,t,u,v,w, got {}", v.len())
        })?;
        Ok(TriangleWebCoords::from_array(arr))
    }
}

/// Hive coordinates of a reduced triangle web.
pub fn web_to_hive_triangle(c: &TriangleWebCoords) -> Result<TriangleHive> {
    c.validate()?;
    let TriangleWebCoords {
        x,
        y,
        z,
        t,
        u,
        v,
        w,
    } = *c;
    let big = (2 * x).max(-x);
    let small = x.max(-2 * x);
    Ok(TriangleHive::from_thirds([
        2 * t + u + 2 * w + v + big,
        2 * w + v + 2 * z + y + small,
        2 * v + w + 2 * u + t + small,
        2 * v + w + 2 * t + u + 2 * z + y + 3 * x.abs(),
        2 * v + w + 2 * y + z + big,
        2 * z + y + 2 * u + t + big,
        2 * t + u + 2 * y + z + small,
    ]))
}

fn int(v: Third) -> i64 {
    v.to_int()
        .expect("rhombus differences of a hive are integers")
}

/// Inverse of [`web_to_hive_triangle`] on valid triangle hives.
pub fn hive_to_web_triangle(h: &TriangleHive) -> Result<TriangleWebCoords> {
    if !h.is_valid() {
        let d = rhombus_differences(h);
        let (i, bad) = d
            .iter()
            .enumerate()
            .find(|(_, d)| !d.is_integer() || **d < Third::ZERO)
            .unwrap();
        return Err(Error::InvalidHive(format!(
            "rhombus difference #{i} equals {bad}"
        )));
    }
    let TriangleHive {
        a1,
        a2,
        a3,
        a4,
        a5,
        a6,
        a7,
    } = *h;
    let x = int(a1 + a5 + a6 - a2 - a3 - a7);
    let w = int(a1 + a2 - a4);
    let u = int(a3 + a6 - a4);
    let y = int(a5 + a7 - a4);
    let v = int(a3 + a4 - a6 - a1).min(int(a4 + a5 - a2 - a7));
    let t = int(a1 + a4 - a3 - a2).min(int(a4 + a7 - a6 - a5));
    let z = int(a2 + a4 - a1 - a5).min(int(a4 + a6 - a3 - a7));
    Ok(TriangleWebCoords {
        x,
        y,
        z,
        t,
        u,
        v,
        w,
    })
}

/// Oriented strand counts `(2 near - far, 2 far - near)` through a side
/// whose two quiver vertices carry `near` and `far`.
pub fn side_arc_counts(near: Third, far: Third) -> Result<(i64, i64)> {
    let first = near.scale(2) - far;
    let second = far.scale(2) - near;
    match (first.to_int(), second.to_int()) {
        (Some(p), Some(q)) if p >= 0 && q >= 0 => Ok((p, q)),
        _ => Err(Error::InconsistentSide {
            near: near.thirds,
            far: far.thirds,
        }),
    }
}

/// Per-triangle web coordinates over a triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SurfaceWeb {
    pub coords: BTreeMap<TriangleId, TriangleWebCoords>,
}

/// Web document: coordinates with an optional inline triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangulation: Option<Triangulation>,
    pub coords: SurfaceWeb,
}

/// Strand counts through edge `e`'s vertices `(slot 0, slot 1)`.
fn edge_counts(vals: &BTreeMap<ThetaVertexId, Third>, e: u32) -> Result<(i64, i64)> {
    side_arc_counts(
        vals[&ThetaVertexId::EdgeVertex(e, 0)],
        vals[&ThetaVertexId::EdgeVertex(e, 1)],
    )
}

/// Glue per-triangle hives into a hive on `t`, checking that the webs meet
/// along every interior edge with matching strand counts.
pub fn surface_web_to_hive(t: &Triangulation, web: &SurfaceWeb) -> Result<Hive> {
    let layout = t.layout()?;
    let mut per_triangle: BTreeMap<TriangleId, BTreeMap<ThetaVertexId, Third>> = BTreeMap::new();
    for tri in layout.triangle_ids() {
        let coords = web
            .coords
            .get(&tri)
            .ok_or_else(|| Error::InvalidWebCoords(format!("no coordinates for triangle {tri}")))?;
        let th = web_to_hive_triangle(coords)?;
        let frame = triangle_frame_with(&layout, tri)?;
        per_triangle.insert(tri, frame.into_iter().zip(th.to_array()).collect());
    }
    if let Some(extra) = web.coords.keys().find(|k| !per_triangle.contains_key(k)) {
        return Err(Error::UnknownTriangle(*extra));
    }

    for rec in t.interior_edges() {
        let a = rec.attach.0 .0;
        let Attachment::Side((b, _)) = rec.attach.1 else {
            unreachable!()
        };
        let first = edge_counts(&per_triangle[&a], rec.id)?;
        let second = edge_counts(&per_triangle[&b], rec.id)?;
        if first != second {
            return Err(Error::GluingMismatch {
                edge: rec.id,
                first,
                second,
            });
        }
    }

    let mut hive = Hive::default();
    for vals in per_triangle.into_values() {
        hive.values.extend(vals);
    }
    Ok(hive)
}

/// Split a hive into per-triangle webs.
pub fn hive_to_surface_web(t: &Triangulation, h: &Hive) -> Result<SurfaceWeb> {
    let layout = t.layout()?;
    h.check_support(t)?;
    let mut coords = BTreeMap::new();
    for tri in layout.triangle_ids() {
        let frame = triangle_frame_with(&layout, tri)?;
        let th = TriangleHive::from_array(frame.map(|v| h.values[&v]));
        let c = hive_to_web_triangle(&th)
            .map_err(|e| Error::InvalidHive(format!("triangle {tri}: {e}")))?;
        coords.insert(tri, c);
    }
    Ok(SurfaceWeb { coords })
}
