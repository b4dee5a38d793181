//! Brute-force experiments on point sets `S ⊆ F_q^n`.

mod clp;
mod enumerate;
mod extremal;
mod pointset;
mod replay;
mod subspace;

pub use clp::{clp_rank_check, diagonal_indicator, ClpReport, CLP_SPACE_LIMIT};
pub use enumerate::{
    affine_rank_of_codes, arank_histogram, enumerate_solutions, tuple_from_codes, RankHistogram, SolutionEnumerator,
};
pub use extremal::{max_solution_free_set, Certificate, ExtremalResult, Forbid, SearchMode, EXACT_LIMIT};
pub use pointset::{PointSet, MAX_SPACE};
pub use replay::{proof_replay, ReplayReport, TrialReport, REPLAY_SIDE_LIMIT, REPLAY_TENSOR_LIMIT};
pub use subspace::{find_affine_subspace, AffineSubspace, SUBSPACE_DIM_LIMIT, SUBSPACE_SPACE_LIMIT};
