//! Non-abelian first cohomology of cyclic groups acting on simple groups
//! through diagram automorphisms, with alcove and Kac-coordinate models.

pub mod alcove;
pub mod bundles;
pub mod cohomology;
pub mod error;
pub mod folding;
pub mod lattice;
pub mod normal_form;
pub mod oracle;
pub mod reference_tables;
pub mod root_data;

pub use alcove::{
    classify_automorphisms, enumerate_alcove_points, enumerate_kac_coordinates, fundamental_alcove,
    kac_classes, parahoric_descriptor, reduce_to_alcove, AlcoveContext, AutomorphismDescriptor,
    KacCoordinates,
};
pub use bundles::{component_count, covering_exists, local_type_sets, CoveringData};
pub use cohomology::{h1_group, h1_torus, CohomologySet, H1Context, Method};
pub use error::{Error, Result};
pub use folding::{diagram_automorphism, DiagramAutomorphism, FoldedDatum};
pub use lattice::{LatticeMap, Q};
pub use normal_form::{quotient, FiniteAbelianGroup, QuotientElement};
pub use oracle::{brute_force_h1_group, brute_force_h1_torus};
pub use root_data::{Family, Isogeny, RootDatum, SimpleType};
