//! Brute-force hive values read off an explicit oriented net.
//!
//! For a triangle with web coordinates `(x, y, z, t, u, v, w)` the net is a
//! triangular patch of the lattice graph with `|x| + 1` points on each side,
//! plus three strings of arcs leading out of its corners to the terminals
//! `A`, `B` and `C`. Shortest-path distances between the terminals and the
//! Fermat minimum of the three terminals reproduce the seven hive values.

use crate::error::Result;
use crate::hive::TriangleHive;
use crate::metric::{fermat_brute, gamma_subgraph, lattice_name, shortest_distance, OrientedGraph};
use crate::third::LatticePoint;
use crate::web::TriangleWebCoords;

/// An oriented net together with the names of its three terminals.
#[derive(Debug, Clone)]
pub struct TriangleNet {
    pub graph: OrientedGraph,
    pub a: String,
    pub b: String,
    pub c: String,
}

/// Append a string of `inward + outward` arcs to `start`. The first
/// `inward` arcs point back toward `start`, the rest point away from it.
fn grow_string(g: &mut OrientedGraph, start: &str, tag: &str, inward: i64, outward: i64) -> String {
    let mut prev = g.vertex(start).expect("string starts on the mesh");
    let mut name = start.to_string();
    for i in 0..inward + outward {
        name = format!("{tag}{}", i + 1);
        let next = g.add_vertex(name.clone());
        if i < inward {
            g.add_arc_idx(next, prev);
        } else {
            g.add_arc_idx(prev, next);
        }
        prev = next;
    }
    name
}

/// Build the net for one triangle's web coordinates.
pub fn build_net(c: &TriangleWebCoords) -> Result<TriangleNet> {
    c.validate()?;
    let n = c.x.abs();
    let mesh = gamma_subgraph(|p| p.x <= 0 && 0 <= p.y && p.y - p.x <= n, (-n, 0, 0, n));
    let mut graph = if c.x < 0 { mesh.reversed() } else { mesh };
    let corner_a = lattice_name(LatticePoint::new(-n, 0));
    let corner_b = lattice_name(LatticePoint::new(0, 0));
    let corner_c = lattice_name(LatticePoint::new(0, n));
    let a = grow_string(&mut graph, &corner_a, "A", c.w, c.v);
    let b = grow_string(&mut graph, &corner_b, "B", c.u, c.t);
    let c_end = grow_string(&mut graph, &corner_c, "C", c.y, c.z);
    Ok(TriangleNet {
        graph,
        a,
        b,
        c: c_end,
    })
}

/// Hive values of a triangle computed by shortest paths on its net.
pub fn oracle_triangle_hive(c: &TriangleWebCoords) -> Result<TriangleHive> {
    let net = build_net(c)?;
    let g = &net.graph;
    let d = |s: &str, t: &str| shortest_distance(g, s, t);
    let (a, b, cc) = (net.a.as_str(), net.b.as_str(), net.c.as_str());
    let (fermat, _) = fermat_brute(g, a, b, cc)?;
    Ok(TriangleHive::from_array([
        d(b, a)?,
        d(cc, a)?,
        d(a, b)?,
        fermat,
        d(a, cc)?,
        d(cc, b)?,
        d(b, cc)?,
    ]))
}
