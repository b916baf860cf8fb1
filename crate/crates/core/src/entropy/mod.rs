//! Rank-based entropy oracle over linear storage ensembles, and the
//! information-theoretic checks evaluated with it.

mod checks;
mod ensemble;
mod random;
mod verify;

pub use checks::{
    check_cond_entropy_final, check_cond_entropy_final_all, check_corollaries, check_joint_entropy,
    check_mds_reconstruction, check_mi_bound, check_min_avg, check_prop_parity_iid, check_stability, CheckReport,
    CheckStatus, MiBound, MinAvg, PreconditionFailure,
};
pub use ensemble::{
    canonical_pair, cond_entropy, ensemble_from_codes, entropy, independent, mutual_info, rs_ensemble, LinearEnsemble,
    NodeId, NodeKind,
};
pub use random::{
    merge_reports, random_corollary_trials, random_decomposition_trials, random_map, random_mi_bound_trials,
    random_min_avg_trials, random_scheme,
};
pub use verify::{grid_points, verify_ensemble, verify_grid, Corruption, SkippedPoint, VerifyConfig, VerifyOutcome};
