//! Runs every check over a grid of Reed-Solomon ensembles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::checks::{
    check_cond_entropy_final_all, check_joint_entropy, check_mds_reconstruction, check_prop_parity_iid,
    check_stability, CheckReport,
};
use super::ensemble::{rs_ensemble, LinearEnsemble};
use super::random::{
    merge_reports, random_corollary_trials, random_decomposition_trials, random_mi_bound_trials, random_min_avg_trials,
};
use crate::convertible::{default_scheme, ConversionScheme, SplitParams};
use crate::exec::Exec;

/// A deliberately planted defect, used to confirm the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corruption {
    /// Initial parity 1 becomes a copy of initial parity 0.
    DuplicateParity,
    /// Final parity slot 0 becomes a copy of initial parity 0.
    InitialIntoFinal,
}

impl Corruption {
    /// `None` when the ensemble has too few nodes to plant this defect.
    pub fn apply(self, ens: &LinearEnsemble) -> Option<LinearEnsemble> {
        match self {
            Corruption::DuplicateParity if ens.initial_parity().len() >= 2 => {
                Some(ens.with_initial_parity(1, ens.initial_parity()[0].clone()))
            }
            Corruption::InitialIntoFinal if !ens.initial_parity().is_empty() && !ens.final_parity().is_empty() => {
                Some(ens.with_final_parity(0, ens.initial_parity()[0].clone()))
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub qs: Vec<usize>,
    pub lfs: Vec<usize>,
    pub kfs: Vec<usize>,
    pub rfs: Vec<usize>,
    pub ris: Vec<usize>,
    pub alphas: Vec<usize>,
    /// Grid points with `n_i` above this are skipped.
    pub max_ni: usize,
    /// Random instances per randomized check and ensemble.
    pub trials: usize,
    pub seed: u64,
    pub corruption: Option<Corruption>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            qs: vec![5, 7, 11],
            lfs: vec![2, 3],
            kfs: vec![1, 2],
            rfs: vec![1, 2],
            ris: vec![1, 2, 3],
            alphas: vec![1, 2],
            max_ni: 8,
            trials: 1000,
            seed: 0,
            corruption: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SkippedPoint {
    pub params: SplitParams,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub reports: Vec<CheckReport>,
    pub skipped: Vec<SkippedPoint>,
}

impl VerifyOutcome {
    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports.iter().filter(|r| !r.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

fn decomposition_fixed(ens: &LinearEnsemble) -> CheckReport {
    let field = ens.field();
    let p = *ens.params();
    let reports = vec![
        check_cond_entropy_final_all(ens, &default_scheme(p, field)),
        check_cond_entropy_final_all(ens, &ConversionScheme::empty(p, field)),
    ];
    merge_reports("final_cond_entropy_decomposition", reports).expect("two reports")
}

/// All checks on one ensemble, sorted by check name. `trials` random
/// instances per randomized check, drawn from `ChaCha8Rng(seed)`.
pub fn verify_ensemble(ens: &LinearEnsemble, trials: usize, seed: u64) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        check_joint_entropy(ens),
        check_prop_parity_iid(ens),
        check_mds_reconstruction(ens),
        check_stability(ens),
        decomposition_fixed(ens),
        random_decomposition_trials(ens, trials.min(100), &mut rng),
        random_mi_bound_trials(ens, trials, &mut rng),
        random_min_avg_trials(ens, trials, &mut rng),
        random_corollary_trials(ens, trials, &mut rng),
    ];
    out.sort_by(|a, b| a.check.cmp(&b.check));
    out
}

/// Grid points in lexicographic order `(q, lf, kf, rf, ri, alpha)`.
pub fn grid_points(cfg: &VerifyConfig) -> Vec<Result<SplitParams, SkippedPoint>> {
    let mut out = Vec::new();
    for &q in &cfg.qs {
        for &lf in &cfg.lfs {
            for &kf in &cfg.kfs {
                for &rf in &cfg.rfs {
                    for &ri in &cfg.ris {
                        for &alpha in &cfg.alphas {
                            let Ok(p) = SplitParams::new(lf, kf, rf, ri, alpha) else {
                                continue;
                            };
                            let skip = |reason: String| SkippedPoint {
                                params: SplitParams { q: Some(q), ..p },
                                reason,
                            };
                            if p.n_i() > cfg.max_ni {
                                out.push(Err(skip(format!("n_i = {} exceeds {}", p.n_i(), cfg.max_ni))));
                                continue;
                            }
                            match p.with_field(q) {
                                Ok(p) => out.push(Ok(p)),
                                Err(e) => out.push(Err(skip(e.to_string()))),
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Runs [`verify_ensemble`] on every grid point. The seed for point `i` is
/// `cfg.seed + i`, so results do not depend on `exec`.
pub fn verify_grid(cfg: &VerifyConfig, exec: Exec) -> VerifyOutcome {
    let points = grid_points(cfg);
    let results = exec.map_range(points.len(), |i| match &points[i] {
        Ok(p) => {
            let ens = rs_ensemble(*p).expect("grid point has a valid field");
            let ens = match cfg.corruption {
                Some(c) => match c.apply(&ens) {
                    Some(e) => e,
                    None => return Vec::new(),
                },
                None => ens,
            };
            verify_ensemble(&ens, cfg.trials, cfg.seed.wrapping_add(i as u64))
        }
        Err(_) => Vec::new(),
    });
    VerifyOutcome {
        reports: results.into_iter().flatten().collect(),
        skipped: points.into_iter().filter_map(Result::err).collect(),
    }
}
