//! Exhaustive search over linear conversion schemes.
//!
//! Every download map is replaced by the reduced echelon basis of its row
//! space, so the search space is a product of per-node subspace lists.
//! Schemes are visited level by level in increasing total download
//! dimension; inside a level, by dimension profile in lexicographic order
//! and then by subspace indices with node 0 most significant. The first
//! feasible scheme is therefore a minimizer of the read bandwidth, and the
//! smallest one in that order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{entropy_v_lb, theorem_bound, Rational, RationalDoc};
use crate::convertible::{check_feasible, default_scheme, ConversionScheme, SchemeDoc, SplitParams};
use crate::entropy::{canonical_pair, ensemble_from_codes, entropy, LinearEnsemble};
use crate::error::{ConversionError, ParamError, SearchError};
use crate::exec::Exec;
use crate::gf::{enumerate_subspaces, Matrix};
use crate::mds::{VectorCode, VectorCodeDoc};

const CHUNK: u64 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Largest total download dimension to try; `None` means no limit.
    pub max_dimension: Option<usize>,
    pub max_visits: u64,
    /// Seed for the random code pairs of [`certify_bound`].
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_dimension: None,
            max_visits: 10_000_000,
            seed: 0,
        }
    }
}

/// Per-node canonical download maps, grouped by dimension.
struct Space {
    nodes: usize,
    alpha: usize,
    by_dim: Vec<Vec<Matrix>>,
    /// All maps of one node, ordered by dimension then index.
    flat: Vec<Matrix>,
}

impl Space {
    fn new(ens: &LinearEnsemble) -> Self {
        let p = ens.params();
        let by_dim: Vec<Vec<Matrix>> = (0..=p.alpha)
            .map(|d| enumerate_subspaces(p.alpha, ens.field(), d).expect("d <= alpha"))
            .collect();
        let flat = by_dim.iter().flatten().cloned().collect();
        Space {
            nodes: p.n_i(),
            alpha: p.alpha,
            by_dim,
            flat,
        }
    }

    fn scheme(&self, params: SplitParams, maps: Vec<Matrix>) -> ConversionScheme {
        let k = params.k_i();
        let mut info = maps;
        let parity = info.split_off(k);
        ConversionScheme::new(params, info, parity).expect("canonical maps are full rank")
    }

    /// Dimension profiles summing to `level`, in lexicographic order.
    fn profiles(&self, level: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.nodes);
        fn rec(n: usize, alpha: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let rest = n - cur.len() - 1;
            for d in 0..=alpha.min(left) {
                if left - d <= rest * alpha {
                    cur.push(d);
                    rec(n, alpha, left - d, cur, out);
                    cur.pop();
                }
            }
        }
        rec(self.nodes, self.alpha, level, &mut cur, &mut out);
        out
    }

    fn profile_size(&self, profile: &[usize]) -> u64 {
        profile.iter().map(|&d| self.by_dim[d].len() as u64).product()
    }

    /// Maps for index `idx` within `profile`, node 0 most significant.
    fn maps_at(&self, profile: &[usize], mut idx: u64) -> Vec<Matrix> {
        let mut picks = vec![0usize; profile.len()];
        for (i, &d) in profile.iter().enumerate().rev() {
            let base = self.by_dim[d].len() as u64;
            picks[i] = (idx % base) as usize;
            idx /= base;
        }
        profile
            .iter()
            .zip(picks)
            .map(|(&d, i)| self.by_dim[d][i].clone())
            .collect()
    }

    fn total(&self) -> u64 {
        (self.flat.len() as u64).pow(self.nodes as u32)
    }

    fn maps_flat(&self, mut idx: u64) -> Vec<Matrix> {
        let base = self.flat.len() as u64;
        let mut picks = vec![0usize; self.nodes];
        for p in picks.iter_mut().rev() {
            *p = (idx % base) as usize;
            idx /= base;
        }
        picks.into_iter().map(|i| self.flat[i].clone()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub min_read: usize,
    #[serde(skip)]
    pub scheme: ConversionScheme,
    /// Schemes examined, counting the minimizer itself.
    pub visited: u64,
}

fn chunks(size: u64) -> Vec<(u64, u64)> {
    (0..size.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(size)))
        .collect()
}

/// Searches levels in increasing total dimension for the first feasible
/// scheme. Before a level is entered its full size is charged against
/// `budget.max_visits`.
pub fn min_bandwidth_exhaustive(
    ens: &LinearEnsemble,
    budget: &SearchBudget,
    exec: Exec,
) -> Result<SearchOutcome, SearchError> {
    let p = *ens.params();
    let space = Space::new(ens);
    let top = budget
        .max_dimension
        .unwrap_or(usize::MAX)
        .min(space.nodes * space.alpha);
    let mut visited: u64 = 0;
    for level in 0..=top {
        let profiles = space.profiles(level);
        let sizes: Vec<u64> = profiles.iter().map(|pr| space.profile_size(pr)).collect();
        let level_size: u64 = sizes.iter().sum();
        if visited + level_size > budget.max_visits {
            return Err(SearchError::BudgetExhausted { visited, level });
        }
        let mut items = Vec::new();
        let mut offset = 0;
        for (pi, &size) in sizes.iter().enumerate() {
            for (lo, hi) in chunks(size) {
                items.push((pi, lo, hi, offset));
            }
            offset += size;
        }
        let found = exec.find_map_first(&items, |&(pi, lo, hi, off)| {
            (lo..hi).find_map(|idx| {
                let scheme = space.scheme(p, space.maps_at(&profiles[pi], idx));
                check_feasible(ens, &scheme).then_some((scheme, off + idx))
            })
        });
        if let Some((scheme, pos)) = found {
            return Ok(SearchOutcome {
                min_read: level,
                scheme,
                visited: visited + pos + 1,
            });
        }
        visited += level_size;
    }
    Err(SearchError::NoFeasibleScheme(top))
}

/// A feasible scheme whose read cost equals the theorem bound, if this code
/// pair admits one within `budget`.
pub fn find_achieving(
    ens: &LinearEnsemble,
    budget: &SearchBudget,
    exec: Exec,
) -> Result<Option<ConversionScheme>, SearchError> {
    let value = theorem_bound(ens.params()).value;
    if !value.is_integer() {
        return Ok(None);
    }
    let target = *value.numer() as usize;
    let capped = SearchBudget {
        max_dimension: Some(budget.max_dimension.map_or(target, |m| m.min(target))),
        ..*budget
    };
    match min_bandwidth_exhaustive(ens, &capped, exec) {
        Ok(out) if out.min_read == target => Ok(Some(out.scheme)),
        Ok(_) | Err(SearchError::NoFeasibleScheme(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Instance-wise checks of the inequalities behind the bound, for one
/// feasible scheme. `None` marks an inequality whose parameter condition
/// does not hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub h_v: usize,
    pub h_u: usize,
    pub read: usize,
    /// `(r_f/k_f) H(V) + H(U) >= lambda_f r_f alpha`, for `r_f < k_f`.
    pub parity_entropy: Option<bool>,
    /// `read >= ((k_f - r_f)/k_f) H(V) + lambda_f r_f alpha`, for `r_f < k_f`.
    pub read_vs_info_entropy: Option<bool>,
    /// `H(V)` against the lower bound for each `theta_1`, for
    /// `r_f < r_i` and `r_f < k_f`.
    pub info_entropy_lb: Option<bool>,
    pub failed_theta1: Vec<usize>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        [self.parity_entropy, self.read_vs_info_entropy, self.info_entropy_lb]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

pub fn check_scheme_inequalities(
    ens: &LinearEnsemble,
    scheme: &ConversionScheme,
) -> Result<InequalityReport, ConversionError> {
    if !check_feasible(ens, scheme) {
        return Err(ConversionError::Infeasible);
    }
    let p = ens.params();
    let v = ens.downloaded_info(scheme);
    let u = ens.downloaded_parity(scheme);
    let h_v = entropy(&v.iter().collect::<Vec<_>>());
    let h_u = entropy(&u.iter().collect::<Vec<_>>());
    let read = scheme.read_total();
    let (kf, rf) = (p.k_f as i64, p.r_f as i64);
    let new = Rational::from_integer((p.lambda_f * p.r_f * p.alpha) as i64);
    let hv = Rational::from_integer(h_v as i64);
    let small_rf = p.r_f < p.k_f;
    let parity_entropy = small_rf.then(|| Rational::new(rf, kf) * hv + h_u as i64 >= new);
    let read_vs_info_entropy =
        small_rf.then(|| Rational::from_integer(read as i64) >= Rational::new(kf - rf, kf) * hv + new);
    let mut failed_theta1 = Vec::new();
    let info_entropy_lb = (small_rf && p.r_f < p.r_i).then(|| {
        for t in 1..=p.lambda_f {
            if hv < entropy_v_lb(p, t).expect("conditions checked") {
                failed_theta1.push(t);
            }
        }
        failed_theta1.is_empty()
    });
    Ok(InequalityReport {
        h_v,
        h_u,
        read,
        parity_entropy,
        read_vs_info_entropy,
        info_entropy_lb,
        failed_theta1,
    })
}

/// Result of enumerating every scheme of one code pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub schemes: u64,
    pub feasible: u64,
    pub min_read: Option<usize>,
    /// Feasible schemes reading less than the theorem bound.
    pub soundness_violations: u64,
    pub inequality_violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Value>,
}

impl AuditSummary {
    fn merge(mut self, other: AuditSummary) -> AuditSummary {
        self.schemes += other.schemes;
        self.feasible += other.feasible;
        self.min_read = match (self.min_read, other.min_read) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.soundness_violations += other.soundness_violations;
        self.inequality_violations += other.inequality_violations;
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        self
    }

    pub fn clean(&self) -> bool {
        self.soundness_violations == 0 && self.inequality_violations == 0
    }
}

/// Enumerates every canonical scheme, checking each feasible one against
/// the theorem bound and [`check_scheme_inequalities`].
pub fn audit_all(ens: &LinearEnsemble, max_visits: u64, exec: Exec) -> Result<AuditSummary, SearchError> {
    let p = *ens.params();
    let space = Space::new(ens);
    let total = space.total();
    if total > max_visits {
        return Err(SearchError::BudgetExhausted { visited: 0, level: 0 });
    }
    let bound = theorem_bound(&p).value;
    let parts = exec.map(&chunks(total), |&(lo, hi)| {
        let mut s = AuditSummary::default();
        for idx in lo..hi {
            s.schemes += 1;
            let scheme = space.scheme(p, space.maps_flat(idx));
            let Ok(ineq) = check_scheme_inequalities(ens, &scheme) else {
                continue;
            };
            s.feasible += 1;
            let read = scheme.read_total();
            s.min_read = Some(s.min_read.map_or(read, |m| m.min(read)));
            let sound = Rational::from_integer(read as i64) >= bound;
            if !sound {
                s.soundness_violations += 1;
            }
            if !ineq.passed() {
                s.inequality_violations += 1;
            }
            if (!sound || !ineq.passed()) && s.first_violation.is_none() {
                s.first_violation = Some(json!({ "scheme": scheme.to_doc(), "inequalities": ineq }));
            }
        }
        s
    });
    Ok(parts.into_iter().fold(AuditSummary::default(), AuditSummary::merge))
}

/// A seeded random systematic MDS pair. Each code gets a uniformly random
/// parity block that passes the MDS check; if `attempts` draws fail, the
/// canonical parity block is mixed by a random invertible matrix instead.
pub fn random_mds_pair(
    params: &SplitParams,
    rng: &mut ChaCha8Rng,
    attempts: usize,
) -> Result<(VectorCode, VectorCode), ParamError> {
    let (init, fin) = canonical_pair(params)?;
    let mut draw = |c: &VectorCode| {
        c.random_parity(rng, attempts)
            .unwrap_or_else(|| c.random_parity_mix(rng, attempts))
    };
    let init = draw(&init);
    let fin = draw(&fin);
    Ok((init, fin))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Sound,
    Violation,
    Inconclusive,
}

/// Outcome of the search on one code pair. Evidence for that pair only.
#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub params: SplitParams,
    /// `canonical` or `random-<i>`.
    pub pair: String,
    pub initial: VectorCodeDoc,
    #[serde(rename = "final")]
    pub final_code: VectorCodeDoc,
    pub min_read: Option<usize>,
    pub budget_exhausted: bool,
    pub visited: u64,
    pub bound: RationalDoc,
    pub verdict: Verdict,
    /// The minimizer reads exactly the bound.
    pub achieving: bool,
    pub scheme: Option<SchemeDoc>,
    pub default_read: usize,
    pub audit: Option<AuditSummary>,
}

impl CertificationReport {
    pub fn ok(&self) -> bool {
        self.verdict != Verdict::Violation && self.audit.as_ref().is_none_or(AuditSummary::clean)
    }
}

fn certify_pair(
    p: SplitParams,
    name: String,
    initial: &VectorCode,
    final_code: &VectorCode,
    budget: &SearchBudget,
    audit: bool,
    exec: Exec,
) -> Result<CertificationReport, ParamError> {
    let ens = ensemble_from_codes(p, initial, final_code)?;
    let bound = theorem_bound(&p).value;
    let result = min_bandwidth_exhaustive(&ens, budget, exec);
    let (min_read, visited, scheme, exhausted) = match result {
        Ok(o) => (Some(o.min_read), o.visited, Some(o.scheme), false),
        Err(SearchError::BudgetExhausted { visited, .. }) => (None, visited, None, true),
        Err(SearchError::NoFeasibleScheme(_)) => (None, 0, None, true),
    };
    let verdict = match min_read {
        Some(m) if Rational::from_integer(m as i64) >= bound => Verdict::Sound,
        Some(_) => Verdict::Violation,
        None => Verdict::Inconclusive,
    };
    let audit = if audit {
        audit_all(&ens, budget.max_visits, exec).ok()
    } else {
        None
    };
    let verdict = match &audit {
        Some(a) if a.soundness_violations > 0 => Verdict::Violation,
        _ => verdict,
    };
    Ok(CertificationReport {
        params: p,
        pair: name,
        initial: initial.to_doc(),
        final_code: final_code.to_doc(),
        min_read,
        budget_exhausted: exhausted,
        visited,
        bound: bound.into(),
        verdict,
        achieving: min_read.is_some_and(|m| Rational::from_integer(m as i64) == bound),
        scheme: scheme.as_ref().map(ConversionScheme::to_doc),
        default_read: default_scheme(p, ens.field()).read_total(),
        audit,
    })
}

/// Searches `pairs` code pairs: the canonical one, then `pairs - 1` random
/// pairs drawn from `ChaCha8Rng(budget.seed)`. With `audit`, every scheme
/// of every pair is also enumerated and checked.
pub fn certify_bound(
    p: &SplitParams,
    pairs: usize,
    budget: &SearchBudget,
    audit: bool,
    exec: Exec,
) -> Result<Vec<CertificationReport>, ParamError> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out = Vec::with_capacity(pairs);
    for i in 0..pairs {
        let (init, fin) = if i == 0 {
            canonical_pair(p)?
        } else {
            random_mds_pair(p, &mut rng, 64)?
        };
        let name = if i == 0 {
            "canonical".to_string()
        } else {
            format!("random-{i}")
        };
        out.push(certify_pair(*p, name, &init, &fin, budget, audit, exec)?);
    }
    Ok(out)
}
