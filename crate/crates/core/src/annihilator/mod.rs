//! Exact arithmetic over the prime field: polynomials in `F_p[X]`, the group
//! ring `F_p[G]` of the cyclic Galois group, eigenvalue bookkeeping, and the
//! minimal annihilator polynomials attached to the subgroup tower `G_d`.

mod eigen;
mod group_ring;
mod poly;
mod rank;

pub use eigen::{
    minus_plus_split, primitive_root, validate_eigenvalue_set, Eigen, EigenSet, PowerTable,
    ValidationOptions,
};
pub use group_ring::{stickelberger_element, GroupRingElem};
pub use poly::{poly_from_roots, FpPoly};
pub use rank::{
    induced_eigenvalues, induced_min_poly, rank_inequality_report, reassemble_symmetric,
    structure_bounds_check, symmetric_coefficients, BoundCheck, RankProfile, StructureBounds,
};
