//! Exact computation of Jordan chains of a rational matrix, one irreducible
//! factor of the characteristic polynomial at a time.

pub mod annihilator;
pub mod bench;
pub mod chains;
pub mod charpoly;
pub mod echelon;
pub mod error;
pub mod factor;
pub mod genmat;
pub mod io;
pub mod jk;
pub mod krylov;
pub mod matrix;
pub(crate) mod modp;
mod multimod;
pub mod ops;
pub mod pipeline;
pub mod poly;
pub mod rat;
pub(crate) mod zpoly;

pub use annihilator::{
    build_annihilator_table, build_annihilator_table_std, build_annihilator_table_with, min_annih_vector,
    AnnihilatorTable, FactorEntry,
};
pub use chains::{
    apply_a_minus_lambda, chain_from_basis_vector, jordan_chains, psi_tower, verify_chain, ChainCheck, ChainReport,
    JordanChain, PolyVec, PsiTower,
};
pub use charpoly::char_poly;
pub use echelon::{echelon_insert, simultaneous_reduce, EchelonState, Insertion, SimultaneousReduction};
pub use error::{Error, Result};
pub use jk::{jk_eliminate, jk_eliminate_traced, JKBasis, JkTrace};
pub use krylov::{krylov_generating_set, rank_f, reduce_gen_set, KrylovGenSet};
pub use factor::{factor_rationals, squarefree_decomposition, Factorization};
pub use matrix::{mat_mul, mat_poly_apply_vec, mat_poly_eval, mat_vec, rank, MatQ, VecQ};
pub use pipeline::{
    certify_independence, generalized_eigenspace, generalized_eigenspace_run, run_full, EigenstructureReport, FactorRun,
    Options, StageTimes,
};
pub use poly::{poly_divrem, poly_gcd, poly_lcm, PolyQ};
pub use rat::{parse_rat, rat, ratio, Rat};
