//! Hives over a triangulation and their transport across flips.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{
    flip_triangulation, spanning_order, theta_index, triangle_frame_with, EdgeId, QuadFrame,
    ThetaVertexId, TriangleId, Triangulation,
};
use crate::third::{is_integer, Third};
use crate::web::{web_to_hive_triangle, TriangleWebCoords};

/// The seven values on the quiver of a single triangle.
///
/// With the triangle drawn with one corner on top: `a1`, `a3` on the left
/// side (`a1` nearer the top), `a2`, `a5` on the right side (`a2` nearer the
/// top), `a6`, `a7` on the bottom (`a6` nearer `a3`), `a4` in the middle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TriangleHive {
    pub a1: Third,
    pub a2: Third,
    pub a3: Third,
    pub a4: Third,
    pub a5: Third,
    pub a6: Third,
    pub a7: Third,
}

impl TriangleHive {
    pub fn from_array(a: [Third; 7]) -> Self {
        TriangleHive {
            a1: a[0],
            a2: a[1],
            a3: a[2],
            a4: a[3],
            a5: a[4],
            a6: a[5],
            a7: a[6],
        }
    }

    pub fn from_thirds(a: [i64; 7]) -> Self {
        Self::from_array(a.map(Third::from_thirds))
    }

    pub fn to_array(self) -> [Third; 7] {
        [
            self.a1, self.a2, self.a3, self.a4, self.a5, self.a6, self.a7,
        ]
    }

    pub fn to_thirds(self) -> [i64; 7] {
        self.to_array().map(|v| v.thirds)
    }

    /// True iff all nine rhombus differences are non-negative integers.
    pub fn is_valid(&self) -> bool {
        rhombus_differences(self)
            .iter()
            .all(|&d| is_integer(d) && d >= Third::ZERO)
    }
}

/// The nine rhombus differences, in the order
/// `a1+a2-a4, a3+a4-a1-a6, a4+a5-a2-a7, a5+a7-a4, a2+a4-a1-a5,
///  a4+a6-a3-a7, a3+a6-a4, a4+a7-a5-a6, a1+a4-a2-a3`.
pub fn rhombus_differences(h: &TriangleHive) -> [Third; 9] {
    let TriangleHive {
        a1,
        a2,
        a3,
        a4,
        a5,
        a6,
        a7,
    } = *h;
    [
        a1 + a2 - a4,
        a3 + a4 - a1 - a6,
        a4 + a5 - a2 - a7,
        a5 + a7 - a4,
        a2 + a4 - a1 - a5,
        a4 + a6 - a3 - a7,
        a3 + a6 - a4,
        a4 + a7 - a5 - a6,
        a1 + a4 - a2 - a3,
    ]
}

/// An assignment of thirds to quiver vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hive {
    pub values: BTreeMap<ThetaVertexId, Third>,
}

impl Hive {
    /// All-zero assignment on every quiver vertex of `t`.
    pub fn zero(t: &Triangulation) -> Self {
        Hive {
            values: theta_index(t)
                .into_iter()
                .map(|v| (v, Third::ZERO))
                .collect(),
        }
    }

    pub fn get(&self, v: ThetaVertexId) -> Result<Third> {
        self.values.get(&v).copied().ok_or(Error::IncompleteHive(v))
    }

    pub fn set(&mut self, v: ThetaVertexId, value: Third) {
        self.values.insert(v, value);
    }

    /// Reject values whose magnitude exceeds `limit` thirds.
    pub fn check_bound(&self, limit: i64) -> Result<()> {
        self.values
            .values()
            .try_for_each(|v| v.check_bound(limit).map(drop))
    }

    /// Check that the keys are exactly the quiver vertices of `t`.
    pub fn check_support(&self, t: &Triangulation) -> Result<()> {
        let theta = theta_index(t);
        if let Some(&missing) = theta.iter().find(|v| !self.values.contains_key(v)) {
            return Err(Error::IncompleteHive(missing));
        }
        if self.values.len() != theta.len() {
            let extra = self
                .values
                .keys()
                .find(|k| theta.binary_search(k).is_err())
                .copied()
                .expect("more keys than quiver vertices");
            return Err(Error::UnknownVertex(extra));
        }
        Ok(())
    }

    /// Values keyed by marked-point position rather than by id.
    pub fn by_geometry(
        &self,
        t: &Triangulation,
    ) -> Result<BTreeMap<crate::surface::GeoKey, Third>> {
        let keys = t.geometric_keys()?;
        keys.into_iter()
            .map(|(v, k)| Ok((k, self.get(v)?)))
            .collect()
    }
}

/// Hive document: values with an optional inline triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiveDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangulation: Option<Triangulation>,
    pub values: Hive,
}

/// The per-triangle values of `h` read through the triangle's frame.
pub fn triangle_hive(t: &Triangulation, h: &Hive, tri: TriangleId) -> Result<TriangleHive> {
    let frame = t.triangle_frame(tri)?;
    let vals = frame
        .iter()
        .map(|&v| h.get(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(TriangleHive::from_array(vals.try_into().unwrap()))
}

/// One failed rhombus condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HiveViolation {
    pub triangle: TriangleId,
    /// Zero-based position in the order of [`rhombus_differences`].
    pub rhombus: u8,
    pub value: Third,
}

/// Every rhombus difference that is negative or not an integer.
pub fn validate_hive(t: &Triangulation, h: &Hive) -> Result<Vec<HiveViolation>> {
    let layout = t.layout()?;
    h.check_support(t)?;
    let mut out = Vec::new();
    for tri in layout.triangle_ids() {
        let frame = triangle_frame_with(&layout, tri)?;
        let th = TriangleHive::from_array(frame.map(|v| h.values[&v]));
        for (i, d) in rhombus_differences(&th).into_iter().enumerate() {
            if !is_integer(d) || d < Third::ZERO {
                out.push(HiveViolation {
                    triangle: tri,
                    rhombus: i as u8,
                    value: d,
                });
            }
        }
    }
    Ok(out)
}

/// Maximum over all triangles and rhombi of minus the rhombus difference.
pub fn tropical_potential(t: &Triangulation, h: &Hive) -> Result<Third> {
    let layout = t.layout()?;
    h.check_support(t)?;
    let mut best: Option<Third> = None;
    for tri in layout.triangle_ids() {
        let frame = triangle_frame_with(&layout, tri)?;
        let th = TriangleHive::from_array(frame.map(|v| h.values[&v]));
        for d in rhombus_differences(&th) {
            best = Some(best.map_or(-d, |b| b.max(-d)));
        }
    }
    Ok(best.unwrap_or(Third::ZERO))
}

/// True iff every summand of the tropical potential is an integer `<= 0`.
pub fn is_in_positive_cone(t: &Triangulation, h: &Hive) -> Result<bool> {
    let layout = t.layout()?;
    h.check_support(t)?;
    for tri in layout.triangle_ids() {
        let frame = triangle_frame_with(&layout, tri)?;
        let th = TriangleHive::from_array(frame.map(|v| h.values[&v]));
        for d in rhombus_differences(&th) {
            let alpha = -d;
            if !is_integer(alpha) || alpha > Third::ZERO {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The four octahedron relations on raw labels `a1..a12`, returning
/// `(b2, b5, b6, b7)`. `b2` and `b6` are computed first since `b5` and `b7`
/// depend on them.
pub fn octahedron_values(a: &[Third; 12]) -> [Third; 4] {
    let at = |i: usize| a[i - 1];
    let b2 = (at(1) + at(7)).max(at(5) + at(3)) - at(2);
    let b6 = (at(5) + at(11)).max(at(7) + at(10)) - at(6);
    let b5 = (at(4) + b6).max(at(9) + b2) - at(5);
    let b7 = (b2 + at(12)).max(at(8) + b6) - at(7);
    [b2, b5, b6, b7]
}

/// Orientation of the new diagonal relative to the old quad.
enum FlipCase {
    /// New diagonal runs `R -> S`.
    RToS,
    /// New diagonal runs `S -> R`.
    SToR,
}

fn flip_case(old: &QuadFrame, new: &QuadFrame) -> Result<FlipCase> {
    if old.diagonal != new.diagonal {
        return Err(Error::FrameMismatch);
    }
    // new label index <- old label index, for the eight outer vertices
    const R_TO_S: [(usize, usize); 8] = [
        (1, 8),
        (4, 3),
        (9, 1),
        (10, 4),
        (11, 9),
        (12, 10),
        (8, 11),
        (3, 12),
    ];
    const S_TO_R: [(usize, usize); 8] = [
        (1, 9),
        (4, 10),
        (9, 11),
        (10, 12),
        (11, 8),
        (12, 3),
        (8, 1),
        (3, 4),
    ];
    let matches = |map: &[(usize, usize); 8]| map.iter().all(|&(n, o)| new.a(n) == old.a(o));
    if matches(&R_TO_S) {
        Ok(FlipCase::RToS)
    } else if matches(&S_TO_R) {
        Ok(FlipCase::SToR)
    } else {
        Err(Error::FrameMismatch)
    }
}

/// The two triangles of a quad frame in triangle-frame order.
fn quad_triangles(a: &[Third; 12]) -> [TriangleHive; 2] {
    let at = |i: usize| a[i - 1];
    // Left (Q, P, R) read from Q; right (P, Q, S) read from P.
    let left = TriangleHive {
        a1: at(6),
        a2: at(10),
        a3: at(2),
        a4: at(5),
        a5: at(9),
        a6: at(1),
        a7: at(4),
    };
    let right = TriangleHive {
        a1: at(2),
        a2: at(3),
        a3: at(6),
        a4: at(7),
        a5: at(8),
        a6: at(11),
        a7: at(12),
    };
    [left, right]
}

/// Transport a hive across the flip described by `old -> new`.
///
/// Only the two centers and the two diagonal vertices change; every other
/// value is copied.
pub fn octahedron_transport(h: &Hive, old: &QuadFrame, new: &QuadFrame) -> Result<Hive> {
    let case = flip_case(old, new)?;
    let a: [Third; 12] = old
        .labels
        .iter()
        .map(|&v| h.get(v))
        .collect::<Result<Vec<_>>>()?
        .try_into()
        .unwrap();
    for (side, th) in ["left", "right"].iter().zip(quad_triangles(&a)) {
        if !th.is_valid() {
            return Err(Error::InvalidHive(format!(
                "rhombus condition fails in the {side} triangle of the quad around edge {}",
                old.diagonal
            )));
        }
    }
    let [b2, b5, b6, b7] = octahedron_values(&a);
    let mut out = h.clone();
    match case {
        FlipCase::RToS => {
            out.set(new.a(5), b2);
            out.set(new.a(7), b6);
            out.set(new.a(6), b5);
            out.set(new.a(2), b7);
        }
        FlipCase::SToR => {
            out.set(new.a(5), b6);
            out.set(new.a(7), b2);
            out.set(new.a(2), b5);
            out.set(new.a(6), b7);
        }
    }
    Ok(out)
}

/// Flip `e` and transport `h` along it.
pub fn flip_hive(t: &Triangulation, h: &Hive, e: EdgeId) -> Result<(Triangulation, Hive)> {
    let (t2, old, new) = flip_triangulation(t, e)?;
    let h2 = octahedron_transport(h, &old, &new)?;
    Ok((t2, h2))
}

/// Flip the edges in order, transporting the hive at every step.
pub fn flip_path(t: &Triangulation, h: &Hive, edges: &[EdgeId]) -> Result<(Triangulation, Hive)> {
    edges
        .iter()
        .try_fold((t.clone(), h.clone()), |(t, h), &e| flip_hive(&t, &h, e))
}

/// Every triangle web in the box `x in [-K, K]`, corner counts in `[0, K]`,
/// with its triangle hive.
pub fn box_candidates(bound: u32) -> Vec<(TriangleWebCoords, TriangleHive)> {
    let k = bound as i64;
    let mut out = Vec::with_capacity(((2 * k + 1) * (k + 1).pow(6)) as usize);
    for x in -k..=k {
        for y in 0..=k {
            for z in 0..=k {
                for t in 0..=k {
                    for u in 0..=k {
                        for v in 0..=k {
                            for w in 0..=k {
                                let c = TriangleWebCoords {
                                    x,
                                    y,
                                    z,
                                    t,
                                    u,
                                    v,
                                    w,
                                };
                                let h = web_to_hive_triangle(&c).expect("box coords are valid");
                                out.push((c, h));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// A random valid hive on `t`, deterministic in `(t, bound, seed)`.
///
/// Triangles are visited in breadth-first order; each one draws uniformly
/// among the box webs whose hive agrees with the values already fixed on
/// its edges.
pub fn sample_hive(t: &Triangulation, bound: u32, seed: u64) -> Result<Hive> {
    sample_hive_from(t, &box_candidates(bound), seed)
}

/// [`sample_hive`] with a precomputed candidate table from [`box_candidates`].
pub fn sample_hive_from(
    t: &Triangulation,
    candidates: &[(TriangleWebCoords, TriangleHive)],
    seed: u64,
) -> Result<Hive> {
    let layout = t.layout()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hive = Hive::default();
    for tri in spanning_order(t) {
        let frame = triangle_frame_with(&layout, tri)?;
        let fixed: Vec<(usize, Third)> = frame
            .iter()
            .enumerate()
            .filter_map(|(i, v)| hive.values.get(v).map(|&x| (i, x)))
            .collect();
        let feasible: Vec<&TriangleHive> = candidates
            .iter()
            .map(|(_, h)| h)
            .filter(|h| {
                let a = h.to_array();
                fixed.iter().all(|&(i, x)| a[i] == x)
            })
            .collect();
        if feasible.is_empty() {
            return Err(Error::SamplingFailed { triangle: tri });
        }
        let pick = feasible[rng.gen_range(0..feasible.len())];
        for (v, x) in frame.iter().zip(pick.to_array()) {
            hive.set(*v, x);
        }
    }
    Ok(hive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_polygon;

    fn th(a: [i64; 7]) -> TriangleHive {
        TriangleHive::from_thirds(a)
    }

    #[test]
    fn rhombus_zero() {
        assert_eq!(rhombus_differences(&th([0; 7])), [Third::ZERO; 9]);
    }

    #[test]
    fn rhombus_reference_instance() {
        let d = rhombus_differences(&th([12, 10, 9, 19, 14, 13, 11]));
        let ints: Vec<i64> = d.iter().map(|x| x.to_int().unwrap()).collect();
        assert_eq!(ints, [1, 1, 4, 2, 1, 4, 1, 1, 4]);
    }

    #[test]
    fn rhombus_negative_honeycomb() {
        // hand evaluation of the nine formulas on (1,2,2,3,1,1,2)/3
        let d = rhombus_differences(&th([1, 2, 2, 3, 1, 1, 2]));
        let ints: Vec<i64> = d.iter().map(|x| x.to_int().unwrap()).collect();
        assert_eq!(ints, [0, 1, 0, 0, 1, 0, 0, 1, 0]);
    }

    #[test]
    fn zero_hive_on_pentagon_is_valid() {
        let p = build_polygon(5, &[(0, 2), (0, 3)]).unwrap();
        let h = Hive::zero(&p);
        assert!(validate_hive(&p, &h).unwrap().is_empty());
        assert_eq!(tropical_potential(&p, &h).unwrap(), Third::ZERO);
        assert!(is_in_positive_cone(&p, &h).unwrap());
    }

    #[test]
    fn center_bump_breaks_every_rhombus() {
        let p = build_polygon(5, &[(0, 2), (0, 3)]).unwrap();
        let mut h = Hive::zero(&p);
        h.set(ThetaVertexId::Center(1), Third::from_thirds(1));
        let v = validate_hive(&p, &h).unwrap();
        assert!(v.iter().all(|x| x.triangle == 1));
        // the three-term rhombi go negative ...
        let negative: Vec<u8> = v
            .iter()
            .filter(|x| x.value == Third::from_thirds(-1))
            .map(|x| x.rhombus)
            .collect();
        assert_eq!(negative, [0, 3, 6]);
        // ... and the six four-term rhombi become fractional
        assert_eq!(v.len(), 9);
        assert_eq!(tropical_potential(&p, &h).unwrap(), Third::from_thirds(1));
        assert!(!is_in_positive_cone(&p, &h).unwrap());
    }

    #[test]
    fn four_term_fraction_is_reported() {
        let t = build_polygon(3, &[]).unwrap();
        let frame = t.triangle_frame(0).unwrap();
        // a5 = 1/3: a4+a5-a2-a7 = 1/3, a5+a7-a4 = 1/3, a2+a4-a1-a5 = -1/3, ...
        let mut h = Hive::zero(&t);
        h.set(frame[4], Third::from_thirds(1));
        let v = validate_hive(&t, &h).unwrap();
        assert!(v
            .iter()
            .any(|x| x.rhombus == 2 && x.value == Third::from_thirds(1)));
        assert!(!is_in_positive_cone(&t, &h).unwrap());
    }

    #[test]
    fn incomplete_and_unknown_vertices() {
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        let mut h = Hive::zero(&q);
        h.values.remove(&ThetaVertexId::Center(1));
        assert_eq!(
            validate_hive(&q, &h).unwrap_err(),
            Error::IncompleteHive(ThetaVertexId::Center(1))
        );
        let mut h = Hive::zero(&q);
        h.set(ThetaVertexId::Center(7), Third::ZERO);
        assert_eq!(
            validate_hive(&q, &h).unwrap_err(),
            Error::UnknownVertex(ThetaVertexId::Center(7))
        );
    }

    #[test]
    fn octahedron_formula_example() {
        let a = [0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0].map(Third::from_thirds);
        let b = octahedron_values(&a).map(|x| x.thirds);
        assert_eq!(b, [0, -1, 0, -1]);
    }

    #[test]
    fn zero_hive_transports_to_zero() {
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        let (q2, old, new) = flip_triangulation(&q, 4).unwrap();
        let h2 = octahedron_transport(&Hive::zero(&q), &old, &new).unwrap();
        assert_eq!(h2, Hive::zero(&q2));
    }

    #[test]
    fn transport_rejects_invalid_and_mismatched() {
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        let (_, old, new) = flip_triangulation(&q, 4).unwrap();
        let mut bad = Hive::zero(&q);
        bad.set(old.a(5), Third::from_thirds(1));
        assert!(matches!(
            octahedron_transport(&bad, &old, &new),
            Err(Error::InvalidHive(_))
        ));
        assert_eq!(
            octahedron_transport(&Hive::zero(&q), &old, &old).unwrap_err(),
            Error::FrameMismatch
        );
    }

    #[test]
    fn quad_triangle_reading_matches_triangle_frames() {
        let q = build_polygon(4, &[(0, 2)]).unwrap();
        let h = sample_hive(&q, 2, 11).unwrap();
        let (_, old, _) = flip_triangulation(&q, 4).unwrap();
        let a: [Third; 12] = old.labels.map(|v| h.values[&v]);
        let [l, r] = quad_triangles(&a);
        let valid_l = triangle_hive(&q, &h, old.left).unwrap();
        let valid_r = triangle_hive(&q, &h, old.right).unwrap();
        // Same multiset of rhombus differences: the readings differ by a rotation.
        let sorted = |t: &TriangleHive| {
            let mut d = rhombus_differences(t).to_vec();
            d.sort();
            d
        };
        assert_eq!(sorted(&l), sorted(&valid_l));
        assert_eq!(sorted(&r), sorted(&valid_r));
    }

    #[test]
    fn sampler_zero_box_and_determinism() {
        let p = build_polygon(5, &[(0, 2), (0, 3)]).unwrap();
        assert_eq!(sample_hive(&p, 0, 99).unwrap(), Hive::zero(&p));
        let a = sample_hive(&p, 2, 5).unwrap();
        let b = sample_hive(&p, 2, 5).unwrap();
        assert_eq!(a, b);
        assert!(validate_hive(&p, &a).unwrap().is_empty());
    }

    #[test]
    fn box_size() {
        assert_eq!(box_candidates(1).len(), 3 * 64);
    }
}
