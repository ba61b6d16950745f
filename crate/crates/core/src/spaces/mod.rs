//! Γ0(N) invariants, dimension formulas, cusps and bases of M_k and S_k.

mod basis;
mod gamma0;
mod generators;
mod io;
mod store;

pub use basis::{build_mk_basis, build_sk_basis, SpaceBasis, Source};
pub use gamma0::{
    check_weight, dim_spaces, enumerate_cusps, gamma0_index, gamma0_invariants, Cusp,
    Gamma0Invariants, SpaceDims,
};
pub use generators::{integer_series, list_generators, Factor, Generator};
pub use io::{export_basis, fixture_name, ingest_basis, parse_basis, render_basis};
pub use store::{default_data_dir, SpaceStore, DATA_DIR_ENV};
