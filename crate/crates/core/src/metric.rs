//! The asymmetric intersection metric on oriented graphs.
//!
//! Walking along an arc costs 1/3, walking against it costs 2/3. Distances
//! are kept as integer numerators over 3, so every arc contributes weight 1
//! forward and 2 backward.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::third::{LatticePoint, Third};

/// A finite directed multigraph with named vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrientedGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    arcs: Vec<(usize, usize)>,
    /// `(neighbor, weight in thirds)`
    adjacency: Vec<Vec<(usize, u64)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<String>,
    arcs: Vec<(String, String)>,
}

impl Serialize for OrientedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            vertices: self.names.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|&(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrientedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        OrientedGraph::from_parts(repr.vertices, repr.arcs).map_err(serde::de::Error::custom)
    }
}

impl OrientedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        arcs: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self> {
        let mut g = OrientedGraph::new();
        for v in vertices {
            let v = v.into();
            if g.index.contains_key(&v) {
                return Err(Error::DuplicateGraphVertex(v));
            }
            g.add_vertex(v);
        }
        for (a, b) in arcs {
            let (a, b) = (a.into(), b.into());
            let ia = *g.index.get(&a).ok_or(Error::DanglingArc(a))?;
            let ib = *g.index.get(&b).ok_or(Error::DanglingArc(b))?;
            g.add_arc_idx(ia, ib);
        }
        Ok(g)
    }

    /// Index of `name`, inserting it if new.
    pub fn add_vertex(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        self.adjacency.push(Vec::new());
        i
    }

    pub fn add_arc_idx(&mut self, tail: usize, head: usize) {
        self.arcs.push((tail, head));
        self.adjacency[tail].push((head, 1));
        self.adjacency[head].push((tail, 2));
    }

    pub fn add_arc(&mut self, tail: &str, head: &str) -> Result<()> {
        let t = self.vertex(tail)?;
        let h = self.vertex(head)?;
        self.add_arc_idx(t, h);
        Ok(())
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGraphVertex(name.to_string()))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    /// The graph with every arc reversed.
    pub fn reversed(&self) -> Self {
        let mut g = OrientedGraph::new();
        for n in &self.names {
            g.add_vertex(n.clone());
        }
        for &(a, b) in &self.arcs {
            g.add_arc_idx(b, a);
        }
        g
    }

    /// Distances in thirds from `source` to every vertex; `None` when unreachable.
    pub fn distances_from(&self, source: usize) -> Vec<Option<u64>> {
        let mut dist: Vec<Option<u64>> = vec![None; self.names.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(0);
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v].is_some_and(|best| d > best) {
                continue;
            }
            for &(w, cost) in &self.adjacency[v] {
                let nd = d + cost;
                if dist[w].is_none_or(|cur| nd < cur) {
                    dist[w] = Some(nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }
}

fn third_of(d: u64) -> Third {
    Third::from_thirds(i64::try_from(d).expect("distance fits in i64"))
}

/// Intersection-metric distance from `s` to `t`.
pub fn shortest_distance(g: &OrientedGraph, s: &str, t: &str) -> Result<Third> {
    let si = g.vertex(s)?;
    let ti = g.vertex(t)?;
    g.distances_from(si)[ti]
        .map(third_of)
        .ok_or_else(|| Error::Unreachable {
            from: s.to_string(),
            to: t.to_string(),
        })
}

/// Closed-form distance from the origin to `p` in the lattice graph with
/// arcs `+(1,0)`, `+(0,1)`, `-(1,1)` at every vertex.
pub fn gamma_distance(p: LatticePoint) -> Third {
    let LatticePoint { x, y } = p;
    Third::from_thirds((x + y).max(y - 2 * x).max(x - 2 * y))
}

/// Vertex name of a lattice point in a window graph.
pub fn lattice_name(p: LatticePoint) -> String {
    format!("{},{}", p.x, p.y)
}

/// The lattice graph restricted to the box `[x0, x1] x [y0, y1]`.
pub fn gamma_window(x0: i64, x1: i64, y0: i64, y1: i64) -> OrientedGraph {
    gamma_subgraph(
        |p| (x0..=x1).contains(&p.x) && (y0..=y1).contains(&p.y),
        (x0, x1, y0, y1),
    )
}

/// Induced subgraph of the lattice graph on the points of the bounding box
/// `(x0, x1, y0, y1)` that satisfy `keep`. Vertices are inserted row by row.
pub fn gamma_subgraph(
    keep: impl Fn(LatticePoint) -> bool,
    (x0, x1, y0, y1): (i64, i64, i64, i64),
) -> OrientedGraph {
    let mut g = OrientedGraph::new();
    let mut ids: HashMap<LatticePoint, usize> = HashMap::new();
    for y in y0..=y1 {
        for x in x0..=x1 {
            let p = LatticePoint::new(x, y);
            if keep(p) {
                ids.insert(p, g.add_vertex(lattice_name(p)));
            }
        }
    }
    for y in y0..=y1 {
        for x in x0..=x1 {
            let Some(&from) = ids.get(&LatticePoint::new(x, y)) else {
                continue;
            };
            for (dx, dy) in [(1, 0), (0, 1), (-1, -1)] {
                if let Some(&to) = ids.get(&LatticePoint::new(x + dx, y + dy)) {
                    g.add_arc_idx(from, to);
                }
            }
        }
    }
    g
}

/// Three lattice points: `a` lower-left, `b` lower-right, `c` upper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatSpec {
    pub a: LatticePoint,
    pub b: LatticePoint,
    pub c: LatticePoint,
}

impl FermatSpec {
    /// The points `(x, y)` with `a.x <= x <= b.x`, `a.y <= y <= c.y` and
    /// `b.y - b.x <= y - x <= c.y - c.x`.
    pub fn contains(&self, p: LatticePoint) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a.x <= p.x
            && p.x <= b.x
            && a.y <= p.y
            && p.y <= c.y
            && b.y - b.x <= p.y - p.x
            && p.y - p.x <= c.y - c.x
    }

    pub fn omega_is_empty(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        if a.x > b.x || a.y > c.y {
            return true;
        }
        // y - x ranges over every integer in [a.y - b.x, c.y - a.x] on the box
        let lo = (b.y - b.x).max(a.y - b.x);
        let hi = (c.y - c.x).min(c.y - a.x);
        lo > hi
    }

    /// All points of the minimizer region, sorted.
    pub fn omega(&self) -> Vec<LatticePoint> {
        if self.omega_is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for x in self.a.x..=self.b.x {
            for y in self.a.y..=self.c.y {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Minimum of `d(A,X) + d(B,X) + d(C,X)` over the infinite lattice graph.
pub fn fermat_closed_form(f: &FermatSpec) -> Result<Third> {
    if f.omega_is_empty() {
        return Err(Error::OmegaEmpty);
    }
    let (a, b, c) = (f.a, f.b, f.c);
    Ok(Third::from_thirds(
        -a.x - a.y + 2 * b.x - b.y - c.x + 2 * c.y,
    ))
}

/// Exhaustive minimum of `d(a,X) + d(b,X) + d(c,X)` over the vertices of
/// `g`, with every minimizing vertex.
pub fn fermat_brute(
    g: &OrientedGraph,
    a: &str,
    b: &str,
    c: &str,
) -> Result<(Third, BTreeSet<String>)> {
    let sources = [g.vertex(a)?, g.vertex(b)?, g.vertex(c)?];
    let tables = sources.map(|s| g.distances_from(s));
    let mut best: Option<u64> = None;
    let mut argmin = BTreeSet::new();
    let [ta, tb, tc] = &tables;
    for (x, ((da, db), dc)) in ta.iter().zip(tb).zip(tc).enumerate() {
        let (Some(da), Some(db), Some(dc)) = (*da, *db, *dc) else {
            continue;
        };
        let total = da + db + dc;
        match best {
            Some(b) if total > b => {}
            Some(b) if total == b => {
                argmin.insert(g.name(x).to_string());
            }
            _ => {
                best = Some(total);
                argmin.clear();
                argmin.insert(g.name(x).to_string());
            }
        }
    }
    match best {
        Some(b) => Ok((third_of(b), argmin)),
        None => Err(Error::Unreachable {
            from: a.to_string(),
            to: format!("any vertex reachable from {b:?} and {c:?}"),
        }),
    }
}
