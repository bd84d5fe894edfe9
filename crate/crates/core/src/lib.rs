//! Dimer models with boundary built from GL_m-dimers of polygon triangulations.
//!
//! The pipeline runs triangulation → GL_m-dimer → reduced dimer → quiver with
//! faces → relations of the natural potential → boundary algebra presentation,
//! which is then matched against the canonical quiver `Γ(m, n)`.

pub mod dimer;
pub mod polygon;
pub mod quiver;
pub mod rewrite;
pub mod lattice;
pub mod boundary;

pub use dimer::{build_dimer, reduce_dimer, reduce_dimer_with, validate_dimer, DimerError, ValidationReport, Color, GLmDimer, NodeKey};
pub use polygon::{enumerate_triangulations, PolygonError, fan_triangulation, flip, flip_sequence, Diagonal, FlipMove, Triangulation};
pub use quiver::{
    chordless_cycle_at, chordless_cycles_at, dual_quiver, p2, potential_relations, validate_dimer_model, Arrow, ArrowId,
    Face, Kind, LatticePoint, Orientation, Path, QuiverError, QuiverWithFaces, Relation, RelationSet, Vertex, VertexId,
    VertexLabel,
};
pub use rewrite::{
    abelian_invariant, audit, paths_equal, rewrite_sites, Audit, Direction, EqualityVerdict, Evidence, Outcome,
    RewriteError, RewriteSystem, SearchBudget, Site, Step,
};
pub use boundary::{
    boundary_generators, build_gamma, match_gamma, verify_central_element, verify_flip_transport,
    verify_theorem_relations, BoundaryError, BoundaryModel, BoundaryPresentation, CentralElementReport,
    FlipTransportCertificate, GammaMatch, GammaQuiver, Generator, RelationReport, Tag,
};
