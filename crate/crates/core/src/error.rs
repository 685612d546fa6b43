use thiserror::Error;

use crate::surface::{EdgeId, ThetaVertexId, TriangleId, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in thirds-scaled value")]
    Overflow,

    #[error("value {value} exceeds the magnitude limit {limit}")]
    OutOfRange { value: i64, limit: i64 },

    #[error("invalid polygon triangulation: {0}")]
    InvalidPolygonTriangulation(String),

    #[error("invalid triangulation complex: {0}")]
    InvalidComplex(ValidationReport),

    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("unknown triangle {0}")]
    UnknownTriangle(TriangleId),

    #[error("edge {0} is a boundary edge and cannot be flipped")]
    NotFlippable(EdgeId),

    #[error("edge {0} is glued to the same triangle on both sides")]
    SelfFoldedUnsupported(EdgeId),

    #[error("quad frames do not describe a flip of the same quadrilateral")]
    FrameMismatch,

    #[error("hive has no value at {0}")]
    IncompleteHive(ThetaVertexId),

    #[error("hive assigns a value to {0}, which is not a vertex of the quiver")]
    UnknownVertex(ThetaVertexId),

    #[error("malformed vertex key {0:?}")]
    BadVertexKey(String),

    #[error("not a hive: {0}")]
    InvalidHive(String),

    #[error("invalid web coordinates: {0}")]
    InvalidWebCoords(String),

    #[error("inconsistent side values ({near}, {far}) thirds: strand counts must be non-negative integers")]
    InconsistentSide { near: i64, far: i64 },

    #[error("gluing mismatch on edge {edge}: strand counts {first:?} vs {second:?}")]
    GluingMismatch {
        edge: EdgeId,
        first: (i64, i64),
        second: (i64, i64),
    },

    #[error("no hive candidate matches the fixed edge values at triangle {triangle}")]
    SamplingFailed { triangle: TriangleId },

    #[error("unknown graph vertex {0:?}")]
    UnknownGraphVertex(String),

    #[error("arc endpoint {0:?} is not a vertex")]
    DanglingArc(String),

    #[error("duplicate graph vertex {0:?}")]
    DuplicateGraphVertex(String),

    #[error("{to:?} is unreachable from {from:?}")]
    Unreachable { from: String, to: String },

    #[error("the minimizer region is empty for this triple")]
    OmegaEmpty,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
