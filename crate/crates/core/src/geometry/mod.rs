//! Exact polyhedral computation: H-polyhedra, cones, faces, normal cones,
//! projections and covering tests.

pub mod cover;
pub mod dd;
pub mod faces;
pub mod polyhedron;
pub mod project;

pub use cover::{covered_by_union, uncovered_point};
pub use dd::{cone_generators, ConeGenerators};
pub use faces::{
    faces, minimal_face_at, normal_cone, normal_cone_at, normal_cone_of_tight, tangent_cone_at,
    Face,
};
pub use polyhedron::{Analysis, Dim, HPolyhedron, PolyCone, Row, VRep};
pub use project::{minimize_quadratic, project, project_union, Projection, QpSolution};
