use hiveweb_core::hive::{box_candidates, sample_hive_from};
use hiveweb_core::metric::lattice_name;
use hiveweb_core::*;
use proptest::prelude::*;

fn coords() -> impl Strategy<Value = TriangleWebCoords> {
    (-6i64..=6, prop::array::uniform6(0i64..=4))
        .prop_map(|(x, c)| TriangleWebCoords::new(x, c[0], c[1], c[2], c[3], c[4], c[5]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn net_distances_match_formulas(c in coords()) {
        prop_assert_eq!(oracle_triangle_hive(&c).unwrap(), web_to_hive_triangle(&c).unwrap());
    }

    #[test]
    fn web_roundtrip_beyond_the_box(x in -1000i64..=1000, c in prop::array::uniform6(0i64..=1000)) {
        let w = TriangleWebCoords::new(x, c[0], c[1], c[2], c[3], c[4], c[5]);
        let h = web_to_hive_triangle(&w).unwrap();
        prop_assert!(h.is_valid());
        prop_assert_eq!(hive_to_web_triangle(&h).unwrap(), w);
    }

    #[test]
    fn invalid_triangle_hives_have_no_web(a in prop::array::uniform7(-9i64..=9)) {
        let h = TriangleHive::from_thirds(a);
        prop_assert_eq!(h.is_valid(), hive_to_web_triangle(&h).is_ok());
    }

    #[test]
    fn lattice_triangle_inequality(
        p in (-5i64..=5, -5i64..=5),
        q in (-5i64..=5, -5i64..=5),
    ) {
        let (p, q) = (LatticePoint::new(p.0, p.1), LatticePoint::new(q.0, q.1));
        let sum = LatticePoint::new(p.x + q.x, p.y + q.y);
        prop_assert!(gamma_distance(sum) <= gamma_distance(p) + gamma_distance(q));
    }

    #[test]
    fn octahedron_involution_on_hexagon(seed in 0u64..5000, edge in 6u32..9) {
        let hex = build_polygon(6, &[(0, 2), (0, 3), (3, 5)]).unwrap();
        let cands = box_candidates(1);
        let Ok(h) = sample_hive_from(&hex, &cands, seed) else { return Ok(()) };
        let (t1, h1) = flip_hive(&hex, &h, edge).unwrap();
        prop_assert!(validate_hive(&t1, &h1).unwrap().is_empty());
        let (t2, h2) = flip_hive(&t1, &h1, edge).unwrap();
        prop_assert_eq!(t2, hex);
        prop_assert_eq!(h2, h);
    }
}

#[test]
fn straight_geodesics() {
    // moving only along +x and +y arcs costs one third per step
    let g = gamma_window(-2, 6, -2, 6);
    for p in 0..=4 {
        for q in 0..=4 {
            let d = shortest_distance(&g, "0,0", &lattice_name(LatticePoint::new(p, q))).unwrap();
            let expected = (p + q).max(q - 2 * p).max(p - 2 * q);
            assert_eq!(d.thirds, expected);
        }
    }
}

#[test]
fn flips_preserve_boundary_values() {
    let pent = build_polygon(5, &[(0, 2), (0, 3)]).unwrap();
    let cands = box_candidates(2);
    let h = (0..)
        .find_map(|s| sample_hive_from(&pent, &cands, s).ok())
        .unwrap();
    let (t1, h1) = flip_hive(&pent, &h, 5).unwrap();
    for e in 0..5u32 {
        for s in 0..2u8 {
            let v = hiveweb_core::ThetaVertexId::EdgeVertex(e, s);
            assert_eq!(h.get(v).unwrap(), h1.get(v).unwrap());
        }
    }
    assert!(validate_hive(&t1, &h1).unwrap().is_empty());
}

#[test]
fn sampler_is_deterministic() {
    let t = fan_polygon(6).unwrap();
    let cands = box_candidates(2);
    let a = sample_hive_from(&t, &cands, 11);
    let b = sample_hive_from(&t, &cands, 11);
    assert_eq!(a, b);
}

fn random_graph(n: usize, arcs: &[(usize, usize)]) -> OrientedGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let arcs: Vec<(String, String)> = arcs
        .iter()
        .map(|&(a, b)| (names[a % n].clone(), names[b % n].clone()))
        .collect();
    OrientedGraph::from_parts(names, arcs).unwrap()
}

proptest! {
    #[test]
    fn metric_axioms_on_random_graphs(
        n in 1usize..8,
        arcs in prop::collection::vec((0usize..8, 0usize..8), 0..16),
    ) {
        let g = random_graph(n, &arcs);
        let table: Vec<Vec<Option<u64>>> = (0..n).map(|i| g.distances_from(i)).collect();
        for a in 0..n {
            for b in 0..n {
                if let Some(d) = table[a][b] {
                    prop_assert_eq!(d == 0, a == b);
                    // reversing a path swaps forward and backward steps
                    prop_assert!(table[b][a].is_some());
                }
                for c in 0..n {
                    if let (Some(ab), Some(bc)) = (table[a][b], table[b][c]) {
                        prop_assert!(table[a][c].unwrap() <= ab + bc);
                    }
                }
            }
        }
    }
}

#[test]
fn axis_to_axis_geodesic() {
    let g = gamma_window(-3, 9, -3, 9);
    for p in 0..=6 {
        for q in 0..=6 {
            let from = lattice_name(LatticePoint::new(0, p));
            let to = lattice_name(LatticePoint::new(q, 0));
            assert_eq!(shortest_distance(&g, &from, &to).unwrap().thirds, 2 * p + q);
        }
    }
}

#[test]
fn boundary_straight_paths_are_geodesic() {
    for x in -3i64..=3 {
        for t in 0..=2 {
            for u in 0..=2 {
                for (v, w) in [(0, 0), (1, 2), (2, 1)] {
                    let c = TriangleWebCoords::new(x, 1, 1, t, u, v, w);
                    let net = build_net(&c).unwrap();
                    let d = shortest_distance(&net.graph, &net.b, &net.a).unwrap();
                    // string B backwards over t, forwards over u; the mesh side
                    // has |x| arcs, walked against them when x >= 0; string A
                    // against w, along v
                    let side = if x >= 0 { 2 * x } else { -x };
                    assert_eq!(d.thirds, 2 * t + u + side + 2 * w + v, "{c:?}");
                }
            }
        }
    }
}

#[test]
fn fermat_minimum_is_attained_on_the_mesh() {
    for x in -3i64..=3 {
        for corners in [[0, 0, 0, 0, 0, 0], [1, 2, 0, 1, 2, 0], [2, 1, 1, 0, 0, 2]] {
            let c = TriangleWebCoords::new(
                x, corners[0], corners[1], corners[2], corners[3], corners[4], corners[5],
            );
            let net = build_net(&c).unwrap();
            let g = &net.graph;
            let tables: Vec<_> = [&net.a, &net.b, &net.c]
                .iter()
                .map(|s| g.distances_from(g.vertex(s).unwrap()))
                .collect();
            let on_mesh = (0..g.vertex_count())
                .filter(|&i| g.name(i).contains(','))
                .map(|i| tables.iter().map(|t| t[i].unwrap()).sum::<u64>())
                .min()
                .unwrap();
            let (all, _) = fermat_brute(g, &net.a, &net.b, &net.c).unwrap();
            assert_eq!(on_mesh as i64, all.thirds, "{c:?}");
        }
    }
}

proptest! {
    #[test]
    fn rhombus_set_is_rotation_invariant(a in prop::array::uniform7(-12i64..=12)) {
        // reading the same triangle from the next corner
        let [a1, a2, a3, a4, a5, a6, a7] = a;
        let turned = [a5, a7, a2, a4, a6, a1, a3];
        let sorted = |v: [i64; 7]| {
            let mut d: Vec<i64> = rhombus_differences(&TriangleHive::from_thirds(v))
                .iter()
                .map(|x| x.thirds)
                .collect();
            d.sort();
            d
        };
        prop_assert_eq!(sorted(a), sorted(turned));
    }
}
