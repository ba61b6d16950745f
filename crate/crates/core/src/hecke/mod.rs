//! Hecke operators prime to the level, orbit decomposition, multiplicity
//! one on S_k(Γ0(N))/K_0(N), minimal levels and Theorem 2.

mod newforms;
mod operators;
mod orbits;

pub use newforms::{
    almost_all_pairs, decompose_level, divisor_levels, matching_primes, minimal_level,
    mult_one_check, newform_inventory, theorem2_from_levels, transport, verify_theorem2,
    BlockReport, LevelDecomposition, MultOneReport, NewformOrbit, NewformsReport, OrbitT2,
    Theorem2Report,
};
pub use operators::{
    eigenvalue_of, hecke_matrix, hecke_prec, quotient_hecke, HeckeMatrix, HeckeMatrixJson,
};
pub use orbits::{
    almost_all_check, eigensystem_key, isotypic_decompose, simple_by_combination,
    AlmostAllReport, EigenSystemKey, OrbitComponent,
};
