//! Structural checks of storage and conversion ensembles.
//!
//! Each check evaluates an entropy identity or inequality exactly (ranks and
//! integer/rational arithmetic) and returns a [`CheckReport`]. A failed
//! precondition is reported separately from a violated inequality.

use itertools::Itertools;
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use super::ensemble::{cond_entropy, entropy, independent, mutual_info, LinearEnsemble};
use crate::convertible::{ConversionScheme, SplitParams};
use crate::gf::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    PreconditionFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: SplitParams,
    pub status: CheckStatus,
    /// Instances (subsets, trials) evaluated.
    pub checked: usize,
    /// Instances skipped because a precondition did not hold.
    pub precondition_failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Accumulates instance outcomes into a report, keeping the first failure.
pub(crate) struct Tally {
    check: &'static str,
    params: SplitParams,
    checked: usize,
    skipped: usize,
    failures: usize,
    first: Option<Value>,
}

impl Tally {
    pub(crate) fn new(check: &'static str, params: SplitParams) -> Self {
        Tally {
            check,
            params,
            checked: 0,
            skipped: 0,
            failures: 0,
            first: None,
        }
    }

    pub(crate) fn record(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(detail());
            }
        }
    }

    pub(crate) fn skip(&mut self) {
        self.skipped += 1;
    }

    pub(crate) fn finish(self) -> CheckReport {
        let status = if self.failures > 0 {
            CheckStatus::Fail
        } else if self.checked == 0 && self.skipped > 0 {
            CheckStatus::PreconditionFailed
        } else {
            CheckStatus::Pass
        };
        CheckReport {
            check: self.check.to_string(),
            params: self.params,
            status,
            checked: self.checked,
            precondition_failures: self.skipped,
            counterexample: self.first,
        }
    }
}

fn pick<'a>(blocks: &'a [Matrix], idx: &[usize]) -> Vec<&'a Matrix> {
    idx.iter().map(|&i| &blocks[i]).collect()
}

fn all(blocks: &[Matrix]) -> Vec<&Matrix> {
    blocks.iter().collect()
}

/// Data stored on all information and initial parity nodes carries exactly
/// `k_i * alpha` symbols of entropy.
pub fn check_joint_entropy(ens: &LinearEnsemble) -> CheckReport {
    let p = *ens.params();
    let mut t = Tally::new("joint_entropy", p);
    let blocks: Vec<&Matrix> = ens.info().iter().chain(ens.initial_parity()).collect();
    let h = entropy(&blocks);
    t.record(
        h == p.message_dim(),
        || json!({ "entropy": h, "expected": p.message_dim() }),
    );
    t.finish()
}

/// Every set of at most `k_i` initial parities is independent and uniform:
/// `H(Y_A) = |A| * alpha`.
pub fn check_prop_parity_iid(ens: &LinearEnsemble) -> CheckReport {
    let p = *ens.params();
    let mut t = Tally::new("parity_iid", p);
    let r = p.r_i;
    for size in 0..=r.min(p.k_i()) {
        for subset in (0..r).combinations(size) {
            let h = entropy(&pick(ens.initial_parity(), &subset));
            t.record(
                h == size * p.alpha,
                || json!({ "parities": subset, "entropy": h, "expected": size * p.alpha }),
            );
        }
    }
    t.finish()
}

/// MDS reconstruction: any `k` nodes of a codeword determine its message,
/// for the initial codeword and for each final codeword. Also checks that
/// distinct final codewords are independent.
pub fn check_mds_reconstruction(ens: &LinearEnsemble) -> CheckReport {
    let p = *ens.params();
    let mut t = Tally::new("mds_reconstruction", p);
    let xs = all(ens.info());
    for a in 0..=p.r_i.min(p.k_i()) {
        for ya in (0..p.r_i).combinations(a) {
            for xb in (0..p.k_i()).combinations(p.k_i() - a) {
                let mut given = pick(ens.initial_parity(), &ya);
                given.extend(pick(ens.info(), &xb));
                let h = cond_entropy(&xs, &given);
                t.record(
                    h == 0,
                    || json!({ "code": "initial", "parities": ya, "info": xb, "residual": h }),
                );
            }
        }
    }
    for cw in 0..p.lambda_f {
        let x_t = all(ens.info_of(cw));
        let y_t = ens.final_parity_of(cw);
        for a in 0..=p.r_f.min(p.k_f) {
            for ya in (0..p.r_f).combinations(a) {
                for xb in (0..p.k_f).combinations(p.k_f - a) {
                    let mut given = pick(y_t, &ya);
                    given.extend(pick(ens.info_of(cw), &xb));
                    let h = cond_entropy(&x_t, &given);
                    t.record(
                        h == 0,
                        || json!({ "code": "final", "codeword": cw, "parities": ya, "info": xb, "residual": h }),
                    );
                }
            }
        }
        let rest: Vec<&Matrix> = ens
            .info()
            .iter()
            .enumerate()
            .filter(|(j, _)| !p.codeword_nodes(cw).contains(j))
            .map(|(_, b)| b)
            .collect();
        let mi = mutual_info(&rest, &x_t);
        t.record(
            mi == 0,
            || json!({ "code": "final", "codeword": cw, "cross_codeword_mi": mi }),
        );
    }
    t.finish()
}

/// Stability: initial parities carry no information about any single final
/// codeword, while each final parity carries `alpha` symbols about its own.
/// Hence no initial parity can be kept as a final parity.
pub fn check_stability(ens: &LinearEnsemble) -> CheckReport {
    let p = *ens.params();
    let mut t = Tally::new("stability", p);
    for cw in 0..p.lambda_f {
        let x_t = all(ens.info_of(cw));
        for (i, y) in ens.initial_parity().iter().enumerate() {
            let mi = mutual_info(&x_t, &[y]);
            t.record(
                mi == 0,
                || json!({ "codeword": cw, "initial_parity": i, "mi": mi, "expected": 0 }),
            );
        }
        for (j, y) in ens.final_parity_of(cw).iter().enumerate() {
            let mi = mutual_info(&x_t, &[y]);
            t.record(
                mi == p.alpha,
                || json!({ "codeword": cw, "final_parity": j, "mi": mi, "expected": p.alpha }),
            );
        }
    }
    for (i, yi) in ens.initial_parity().iter().enumerate() {
        for (j, yf) in ens.final_parity().iter().enumerate() {
            let same = yi.same_row_space(yf);
            t.record(
                !same,
                || json!({ "initial_parity": i, "final_parity": j, "same_row_space": true }),
            );
        }
    }
    t.finish()
}

/// `H(Y^F_S | V_S) = sum_{t in S} H(Y^F_t | V_t)` for one set `S` of final
/// codewords.
pub fn check_cond_entropy_final(ens: &LinearEnsemble, scheme: &ConversionScheme, codewords: &[usize]) -> bool {
    let (lhs, rhs) = cond_entropy_final_sides(ens, &ens.downloaded_info(scheme), codewords);
    lhs == rhs
}

fn cond_entropy_final_sides(ens: &LinearEnsemble, v: &[Matrix], codewords: &[usize]) -> (usize, usize) {
    let p = ens.params();
    let mut ys = Vec::new();
    let mut vs = Vec::new();
    let mut rhs = 0;
    for &cw in codewords {
        let y_t = all(ens.final_parity_of(cw));
        let v_t: Vec<&Matrix> = v[p.codeword_nodes(cw)].iter().collect();
        rhs += cond_entropy(&y_t, &v_t);
        ys.extend(y_t);
        vs.extend(v_t);
    }
    (cond_entropy(&ys, &vs), rhs)
}

/// Checks the decomposition above for every nonempty set of codewords.
pub fn check_cond_entropy_final_all(ens: &LinearEnsemble, scheme: &ConversionScheme) -> CheckReport {
    let p = *ens.params();
    let mut t = Tally::new("final_cond_entropy_decomposition", p);
    let v = ens.downloaded_info(scheme);
    for size in 1..=p.lambda_f {
        for s in (0..p.lambda_f).combinations(size) {
            let (lhs, rhs) = cond_entropy_final_sides(ens, &v, &s);
            t.record(lhs == rhs, || json!({ "codewords": s, "joint": lhs, "sum": rhs }));
        }
    }
    t.finish()
}

/// Outcome of one mutual-information bound evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiBound {
    pub mi: usize,
    pub bound: usize,
}

impl MiBound {
    pub fn holds(&self) -> bool {
        self.mi <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("independence precondition does not hold for {0:?}")]
pub struct PreconditionFailure(pub Vec<usize>);

/// For disjoint index sets `a`, `b` and `d1 ⊆ a`, `d2 ⊆ b`, with the
/// blocks outside `d1 ∪ d2` independent:
/// `I(f_A(Z_A); f_B(Z_B)) <= H(f_D1(Z_D1)) + H(f_D2(Z_D2))`.
///
/// `z[i]` is a node block and `f[i]` the linear map applied to it.
pub fn check_mi_bound(
    z: &[Matrix],
    f: &[Matrix],
    a: &[usize],
    b: &[usize],
    d1: &[usize],
    d2: &[usize],
) -> Result<MiBound, PreconditionFailure> {
    assert!(a.iter().all(|i| !b.contains(i)), "A and B must be disjoint");
    assert!(d1.iter().all(|i| a.contains(i)) && d2.iter().all(|i| b.contains(i)));
    let rest: Vec<usize> = a
        .iter()
        .chain(b)
        .copied()
        .filter(|i| !d1.contains(i) && !d2.contains(i))
        .collect();
    if !independent(&pick(z, &rest)) {
        return Err(PreconditionFailure(rest));
    }
    let apply = |idx: &[usize]| -> Vec<Matrix> { idx.iter().map(|&i| f[i].mul(&z[i])).collect() };
    let (fa, fb) = (apply(a), apply(b));
    let mi = mutual_info(&all(&fa), &all(&fb));
    let bound = entropy(&all(&apply(d1))) + entropy(&all(&apply(d2)));
    Ok(MiBound { mi, bound })
}

/// Outcome of the minimum-versus-average bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinAvg {
    pub min_entropy: usize,
    /// `(a/b) * sum_i H(f_i(Z_i))`, as `[num, den]`.
    pub average_bound: [i64; 2],
    /// `(a/b) * H(f_[b](Z_[b]))` when all blocks are independent.
    pub joint_bound: Option<[i64; 2]>,
    pub holds: bool,
}

/// `min_{|A|=a} H(f_A(Z_A)) <= (a/b) sum_i H(f_i(Z_i))`, provided every
/// `a`-subset of the `b` blocks is independent. When all `b` blocks are
/// independent, also checks the bound by `(a/b) H(f_[b](Z_[b]))`.
pub fn check_min_avg(z: &[Matrix], f: &[Matrix], a: usize) -> Result<MinAvg, PreconditionFailure> {
    let b = z.len();
    assert!(a <= b && f.len() == b);
    for subset in (0..b).combinations(a) {
        if !independent(&pick(z, &subset)) {
            return Err(PreconditionFailure(subset));
        }
    }
    let fz: Vec<Matrix> = f.iter().zip(z).map(|(fi, zi)| fi.mul(zi)).collect();
    let min_entropy = (0..b)
        .combinations(a)
        .map(|s| entropy(&pick(&fz, &s)))
        .min()
        .unwrap_or(0);
    let sum: usize = fz.iter().map(Matrix::rank).sum();
    let ratio = |x: usize| {
        if b == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new((a * x) as i64, b as i64)
        }
    };
    let avg = ratio(sum);
    let min = Ratio::from_integer(min_entropy as i64);
    let mut holds = min <= avg;
    let joint_bound = independent(&all(z)).then(|| {
        let jb = ratio(entropy(&all(&fz)));
        holds &= min <= jb;
        [*jb.numer(), *jb.denom()]
    });
    Ok(MinAvg {
        min_entropy,
        average_bound: [*avg.numer(), *avg.denom()],
        joint_bound,
        holds,
    })
}

// For each mask and size, the minimum of `h` over submasks of that size.
fn min_by_submask(h: &[usize], width: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![usize::MAX; width + 1]; h.len()];
    for (mask, row) in out.iter_mut().enumerate() {
        let mut sub = mask;
        loop {
            let s = sub.count_ones() as usize;
            row[s] = row[s].min(h[sub]);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    out
}

fn subset_entropies(blocks: &[Matrix]) -> Vec<usize> {
    (0..1usize << blocks.len())
        .map(|mask| {
            let sel: Vec<&Matrix> = (0..blocks.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &blocks[i])
                .collect();
            entropy(&sel)
        })
        .collect()
}

fn mask_members(mask: usize, width: usize) -> Vec<usize> {
    (0..width).filter(|i| mask >> i & 1 == 1).collect()
}

/// Largest code dimension for which subset tables are tabulated exhaustively.
const EXHAUSTIVE_INFO_LIMIT: usize = 12;
const EXHAUSTIVE_PARITY_LIMIT: usize = 4;

/// Both mutual-information corollaries for the initial codeword, with
/// `mu_i = B_i` on parities and `nu_j = A_j` on information nodes:
///
/// 1. for `S1 ⊆ [r]`, `S2 ⊆ [k]`, `beta1 + beta2 = r`:
///    `I(U; V) <= min_{D1} H(U_D1) + min_{D2} H(V_D2)
///             <= beta1/|S1| sum_{S1} H(U_i) + beta2/|S2| H(V_S2)`;
/// 2. for `S ⊆ [k]` with `|S| >= r`:
///    `I(U; V) <= min_{|D|=r} H(V_D) <= r/|S| H(V_S)`.
///
/// All `(S1, S2, beta1)` are enumerated when `r <= 4` and `k <= 12`;
/// otherwise the report is marked as a precondition failure.
#[allow(clippy::needless_range_loop)]
pub fn check_corollaries(ens: &LinearEnsemble, scheme: &ConversionScheme) -> CheckReport {
    let p = *ens.params();
    let mut t = Tally::new("mutual_information_corollaries", p);
    let (r, k) = (p.r_i, p.k_i());
    if r > EXHAUSTIVE_PARITY_LIMIT || k > EXHAUSTIVE_INFO_LIMIT {
        t.skip();
        return t.finish();
    }
    let u = ens.downloaded_parity(scheme);
    let v = ens.downloaded_info(scheme);
    let mi = mutual_info(&all(&u), &all(&v));
    let hu = subset_entropies(&u);
    let hv = subset_entropies(&v);
    let min_u = min_by_submask(&hu, r);
    let min_v = min_by_submask(&hv, k);

    for s1 in 0..1usize << r {
        let n1 = s1.count_ones() as usize;
        let sum_u: usize = mask_members(s1, r).iter().map(|&i| hu[1 << i]).sum();
        for s2 in 0..1usize << k {
            let n2 = s2.count_ones() as usize;
            for beta1 in r.saturating_sub(n2)..=n1.min(r) {
                let beta2 = r - beta1;
                let mins = min_u[s1][beta1] + min_v[s2][beta2];
                t.record(mi <= mins, || {
                    json!({ "inequality": "split", "s1": mask_members(s1, r), "s2": mask_members(s2, k),
                            "beta1": beta1, "mi": mi, "min_sum": mins })
                });
                // Averaging over beta1-subsets of parities needs them
                // independent, which MDS guarantees only up to k of them.
                if beta1 > k {
                    t.skip();
                    continue;
                }
                let mut avg = Ratio::from_integer(0i64);
                if n1 > 0 {
                    avg += Ratio::new((beta1 * sum_u) as i64, n1 as i64);
                }
                if n2 > 0 {
                    avg += Ratio::new((beta2 * hv[s2]) as i64, n2 as i64);
                }
                t.record(Ratio::from_integer(mins as i64) <= avg, || {
                    json!({ "inequality": "split", "s1": mask_members(s1, r), "s2": mask_members(s2, k),
                            "beta1": beta1, "min_sum": mins, "average": [*avg.numer(), *avg.denom()] })
                });
            }
        }
    }
    for s in 0..1usize << k {
        let n = s.count_ones() as usize;
        if n < r || n == 0 {
            continue;
        }
        let m = min_v[s][r];
        let avg = Ratio::new((r * hv[s]) as i64, n as i64);
        t.record(mi <= m && Ratio::from_integer(m as i64) <= avg, || {
            json!({ "inequality": "info_only", "s": mask_members(s, k), "mi": mi, "min": m,
                    "average": [*avg.numer(), *avg.denom()] })
        });
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convertible::default_scheme;
    use crate::entropy::ensemble::tests_support::rs_ensemble;
    use crate::gf::{Field, Matrix};

    #[test]
    fn storage_checks_pass_on_rs_ensembles() {
        for (lf, kf, rf, ri, alpha, q) in [(2, 2, 1, 2, 1, 7), (3, 2, 2, 3, 2, 11), (2, 1, 2, 3, 2, 5)] {
            let e = rs_ensemble(lf, kf, rf, ri, alpha, q);
            assert!(check_joint_entropy(&e).passed());
            assert!(check_prop_parity_iid(&e).passed());
            assert!(check_mds_reconstruction(&e).passed());
            assert!(check_stability(&e).passed());
        }
    }

    #[test]
    fn duplicated_parity_fails_parity_iid() {
        let e = rs_ensemble(2, 2, 1, 2, 1, 7);
        let dup = e.initial_parity()[0].clone();
        let bad = e.with_initial_parity(1, dup);
        let rep = check_prop_parity_iid(&bad);
        assert_eq!(rep.status, CheckStatus::Fail);
        assert!(rep.counterexample.is_some());
    }

    #[test]
    fn planted_initial_parity_breaks_stability() {
        let e = rs_ensemble(2, 2, 1, 2, 1, 7);
        let bad = e.with_final_parity(0, e.initial_parity()[0].clone());
        assert_eq!(check_stability(&bad).status, CheckStatus::Fail);
    }

    #[test]
    fn stability_mi_values() {
        let e = rs_ensemble(2, 2, 1, 2, 1, 7);
        let x0: Vec<&Matrix> = e.info_of(0).iter().collect();
        assert_eq!(mutual_info(&x0, &[&e.initial_parity()[1]]), 0);
        assert_eq!(mutual_info(&x0, &[&e.final_parity_of(0)[0]]), 1);
    }

    #[test]
    fn mi_bound_examples() {
        let e = rs_ensemble(2, 2, 1, 1, 1, 5);
        let f = e.field().clone();
        let z: Vec<Matrix> = e.info().to_vec();
        let id = vec![Matrix::identity(&f, 1); z.len()];
        // D1 = A, D2 = B: the bound is trivially at least the MI.
        let r = check_mi_bound(&z, &id, &[0, 1], &[2, 3], &[0, 1], &[2, 3]).unwrap();
        assert!(r.holds());
        // Different codewords, nothing exempted: MI = 0 <= 0.
        let r = check_mi_bound(&z, &id, &[0, 1], &[2, 3], &[], &[]).unwrap();
        assert_eq!(r, MiBound { mi: 0, bound: 0 });
    }

    #[test]
    fn mi_bound_reports_precondition() {
        let e = rs_ensemble(2, 1, 1, 2, 1, 5);
        let f = e.field().clone();
        // Two info nodes plus one parity of a [4,2] code are dependent.
        let z = vec![e.info()[0].clone(), e.info()[1].clone(), e.initial_parity()[0].clone()];
        let id = vec![Matrix::identity(&f, 1); 3];
        assert!(check_mi_bound(&z, &id, &[0, 1], &[2], &[], &[]).is_err());
    }

    #[test]
    fn min_avg_examples() {
        let e = rs_ensemble(2, 2, 1, 2, 1, 7);
        let f = e.field().clone();
        let z = e.info().to_vec();
        let id = vec![Matrix::identity(&f, 1); 4];
        let r = check_min_avg(&z, &id, 2).unwrap();
        assert_eq!(r.min_entropy, 2);
        assert_eq!(r.average_bound, [2, 1]);
        assert!(r.holds);
        let mut maps = id.clone();
        maps[0] = Matrix::zeros(&f, 0, 1);
        let r = check_min_avg(&z, &maps, 1).unwrap();
        assert_eq!(r.min_entropy, 0);
        assert!(r.holds);
    }

    #[test]
    fn corollaries_hold_for_default_and_empty_schemes() {
        let e = rs_ensemble(2, 2, 1, 2, 2, 7);
        let p = *e.params();
        let f = Field::new(7).unwrap();
        assert!(check_corollaries(&e, &default_scheme(p, &f)).passed());
        assert!(check_corollaries(&e, &ConversionScheme::empty(p, &f)).passed());
    }

    #[test]
    fn corollary_two_with_full_downloads_reads_r_alpha() {
        // Full downloads everywhere: I(U; V) = H(U) = r*alpha, which is
        // exactly (r/k) * k * alpha.
        let e = rs_ensemble(2, 2, 1, 2, 2, 7);
        let p = *e.params();
        let f = Field::new(7).unwrap();
        let full =
            ConversionScheme::new(p, vec![Matrix::identity(&f, 2); 4], vec![Matrix::identity(&f, 2); 2]).unwrap();
        let u = e.downloaded_parity(&full);
        let v = e.downloaded_info(&full);
        assert_eq!(mutual_info(&all(&u), &all(&v)), p.r_i * p.alpha);
        assert!(check_corollaries(&e, &full).passed());
    }

    #[test]
    fn final_decomposition_examples() {
        let e = rs_ensemble(3, 1, 1, 2, 1, 7);
        let p = *e.params();
        let f = Field::new(7).unwrap();
        let def = default_scheme(p, &f);
        assert!(check_cond_entropy_final(&e, &def, &[1]));
        assert!(check_cond_entropy_final(&e, &def, &[0, 1, 2]));
        let empty = ConversionScheme::empty(p, &f);
        assert!(check_cond_entropy_final_all(&e, &empty).passed());
    }
}
