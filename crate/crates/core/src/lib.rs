//! Exact tropical SL3 webs and hives on triangulated surfaces.
//!
//! Values live in `(1/3)Z` and are represented by [`Third`]. A [`Hive`]
//! assigns a value to every vertex of the quiver of a [`Triangulation`];
//! [`flip_hive`] transports it across a diagonal flip. Integer web
//! coordinates convert to and from hives triangle by triangle, and the
//! [`metric`] and [`surfacoid`] modules compute the same numbers as
//! shortest-path distances on oriented graphs.

pub mod error;
pub mod hive;
pub mod metric;
pub mod surface;
pub mod surfacoid;
pub mod third;
pub mod web;

pub use error::{Error, Result};
pub use hive::{
    flip_hive, flip_path, is_in_positive_cone, octahedron_transport, octahedron_values,
    rhombus_differences, sample_hive, tropical_potential, validate_hive, Hive, HiveDoc,
    HiveViolation, TriangleHive,
};
pub use metric::{
    fermat_brute, fermat_closed_form, gamma_distance, gamma_window, shortest_distance, FermatSpec,
    OrientedGraph,
};
pub use surface::{
    build_polygon, fan_polygon, flip_triangulation, validate_complex, Attachment, EdgeId,
    EdgeRecord, GeoKey, QuadFrame, Signature, ThetaVertexId, TriangleId, Triangulation,
    ValidationReport, Violation,
};
pub use surfacoid::{build_net, oracle_triangle_hive, TriangleNet};
pub use third::{is_integer, LatticePoint, Third, DEFAULT_MAX_THIRDS};
pub use web::{
    hive_to_surface_web, hive_to_web_triangle, surface_web_to_hive, web_to_hive_triangle,
    SurfaceWeb, TriangleWebCoords, WebDoc,
};
