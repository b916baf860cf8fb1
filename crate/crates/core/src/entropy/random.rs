//! Seeded random instances for the inequality checks.

use rand::Rng;
use serde_json::json;

use super::checks::{
    check_cond_entropy_final_all, check_corollaries, check_mi_bound, check_min_avg, CheckReport, CheckStatus, Tally,
};
use super::ensemble::LinearEnsemble;
use crate::convertible::ConversionScheme;
use crate::gf::{Field, Matrix};

/// A random linear map on one node: `0..=alpha` rows, uniform entries (so
/// possibly rank-deficient).
pub fn random_map<R: Rng + ?Sized>(field: &Field, alpha: usize, rng: &mut R) -> Matrix {
    let rows = rng.gen_range(0..=alpha);
    Matrix::random(field, rows, alpha, rng)
}

/// A random scheme: every node gets a canonicalized random map.
pub fn random_scheme<R: Rng + ?Sized>(ens: &LinearEnsemble, rng: &mut R) -> ConversionScheme {
    let p = *ens.params();
    let f = ens.field();
    let a: Vec<Matrix> = (0..p.k_i()).map(|_| random_map(f, p.alpha, rng)).collect();
    let b: Vec<Matrix> = (0..p.r_i).map(|_| random_map(f, p.alpha, rng)).collect();
    ConversionScheme::canonicalized(p, &a, &b).expect("random maps have the right shape")
}

fn all_blocks(ens: &LinearEnsemble) -> Vec<Matrix> {
    ens.info()
        .iter()
        .chain(ens.initial_parity())
        .chain(ens.final_parity())
        .cloned()
        .collect()
}

/// Random disjoint `A`, `B` over every node of the ensemble, random
/// exempted subsets and random maps.
pub fn random_mi_bound_trials<R: Rng + ?Sized>(ens: &LinearEnsemble, trials: usize, rng: &mut R) -> CheckReport {
    let p = *ens.params();
    let mut t = Tally::new("mi_bound_random", p);
    let z = all_blocks(ens);
    for trial in 0..trials {
        let f: Vec<Matrix> = z.iter().map(|_| random_map(ens.field(), p.alpha, rng)).collect();
        let (mut a, mut b, mut d1, mut d2) = (vec![], vec![], vec![], vec![]);
        for i in 0..z.len() {
            match rng.gen_range(0..3) {
                0 => {
                    a.push(i);
                    if rng.gen_bool(0.5) {
                        d1.push(i);
                    }
                }
                1 => {
                    b.push(i);
                    if rng.gen_bool(0.5) {
                        d2.push(i);
                    }
                }
                _ => {}
            }
        }
        match check_mi_bound(&z, &f, &a, &b, &d1, &d2) {
            Ok(r) => t.record(
                r.holds(),
                || json!({ "trial": trial, "a": a, "b": b, "d1": d1, "d2": d2, "mi": r.mi, "bound": r.bound }),
            ),
            Err(_) => t.skip(),
        }
    }
    t.finish()
}

/// Random `b` nodes (information and initial parity), random `a <= b` and
/// random maps.
pub fn random_min_avg_trials<R: Rng + ?Sized>(ens: &LinearEnsemble, trials: usize, rng: &mut R) -> CheckReport {
    let p = *ens.params();
    let mut t = Tally::new("min_avg_random", p);
    let pool: Vec<Matrix> = ens.info().iter().chain(ens.initial_parity()).cloned().collect();
    for trial in 0..trials {
        let b = rng.gen_range(1..=pool.len());
        let chosen: Vec<usize> = rand::seq::index::sample(rng, pool.len(), b).into_vec();
        let z: Vec<Matrix> = chosen.iter().map(|&i| pool[i].clone()).collect();
        let f: Vec<Matrix> = z.iter().map(|_| random_map(ens.field(), p.alpha, rng)).collect();
        let a = rng.gen_range(0..=b);
        match check_min_avg(&z, &f, a) {
            Ok(r) => t.record(
                r.holds,
                || json!({ "trial": trial, "nodes": chosen, "a": a, "outcome": r }),
            ),
            Err(_) => t.skip(),
        }
    }
    t.finish()
}

/// Merges per-trial reports of one check into a single report.
pub fn merge_reports(name: &str, reports: Vec<CheckReport>) -> Option<CheckReport> {
    let mut it = reports.into_iter();
    let mut acc = it.next()?;
    acc.check = name.to_string();
    for r in it {
        acc.checked += r.checked;
        acc.precondition_failures += r.precondition_failures;
        if r.status == CheckStatus::Fail && acc.status != CheckStatus::Fail {
            acc.status = CheckStatus::Fail;
            acc.counterexample = r.counterexample;
        } else if acc.status == CheckStatus::PreconditionFailed && r.status == CheckStatus::Pass {
            acc.status = CheckStatus::Pass;
        }
    }
    Some(acc)
}

/// Both corollaries on `trials` random schemes.
pub fn random_corollary_trials<R: Rng + ?Sized>(ens: &LinearEnsemble, trials: usize, rng: &mut R) -> CheckReport {
    let reports = (0..trials)
        .map(|_| check_corollaries(ens, &random_scheme(ens, rng)))
        .collect();
    merge_reports("corollaries_random", reports)
        .unwrap_or_else(|| Tally::new("corollaries_random", *ens.params()).finish())
}

/// Final-parity decomposition on `trials` random schemes.
pub fn random_decomposition_trials<R: Rng + ?Sized>(ens: &LinearEnsemble, trials: usize, rng: &mut R) -> CheckReport {
    let reports = (0..trials)
        .map(|_| check_cond_entropy_final_all(ens, &random_scheme(ens, rng)))
        .collect();
    merge_reports("final_cond_entropy_decomposition_random", reports)
        .unwrap_or_else(|| Tally::new("final_cond_entropy_decomposition_random", *ens.params()).finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::ensemble::tests_support::rs_ensemble;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_trials_find_no_violations() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = rs_ensemble(2, 2, 1, 2, 1, 7);
        let r = random_mi_bound_trials(&e, 300, &mut rng);
        assert!(r.passed(), "{r:?}");
        assert!(r.checked > 0 && r.precondition_failures > 0);
        assert!(random_min_avg_trials(&e, 300, &mut rng).passed());
        assert!(random_corollary_trials(&e, 50, &mut rng).passed());
        assert!(random_decomposition_trials(&e, 50, &mut rng).passed());
    }

    #[test]
    fn merge_keeps_first_failure() {
        let e = rs_ensemble(2, 1, 1, 1, 1, 5);
        let p = *e.params();
        let ok = Tally::new("x", p).finish();
        let mut bad = Tally::new("x", p);
        bad.record(false, || json!({ "why": 1 }));
        let merged = merge_reports("m", vec![ok, bad.finish()]).unwrap();
        assert_eq!(merged.status, CheckStatus::Fail);
        assert_eq!(merged.checked, 1);
    }
}
