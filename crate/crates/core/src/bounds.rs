//! Closed-form lower bounds on split-regime conversion read bandwidth.
//!
//! All values are exact rationals in subsymbols. The three components are
//! `L3` ([`bound_trivial`], every parameter), `L2` ([`bound_i`], needs
//! `1 <= r_f < k_f`) and `L1` ([`bound_ii`], needs additionally
//! `r_f < r_i <= k_i`).

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::convertible::SplitParams;
use crate::error::BoundError;
use crate::exec::Exec;

pub type Rational = Ratio<i64>;

fn r(n: usize) -> Rational {
    Rational::from_integer(n as i64)
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn pre(ok: bool, what: &str) -> Result<(), BoundError> {
    if ok {
        Ok(())
    } else {
        Err(BoundError::Precondition(what.to_string()))
    }
}

/// JSON form of a rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RationalDoc {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for RationalDoc {
    fn from(v: Rational) -> Self {
        RationalDoc {
            num: *v.numer(),
            den: *v.denom(),
        }
    }
}

fn ser_ratio<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    RationalDoc::from(*v).serialize(s)
}

fn ser_opt_ratio<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    v.map(RationalDoc::from).serialize(s)
}

/// `lambda_f * min(k_f, r_f) * alpha`.
pub fn bound_trivial(p: &SplitParams) -> Rational {
    r(p.lambda_f * p.k_f.min(p.r_f) * p.alpha)
}

/// `lambda_f*k_f*alpha - min(r_i, k_i)*alpha*(k_f/r_f - 1)`, for `1 <= r_f < k_f`.
pub fn bound_i(p: &SplitParams) -> Result<Rational, BoundError> {
    pre(p.r_f >= 1 && p.r_f < p.k_f, "bound_I needs 1 <= r_f < k_f")?;
    let help = r(p.r_i.min(p.k_i()) * p.alpha) * (Rational::new(p.k_f as i64, p.r_f as i64) - 1);
    Ok(r(p.lambda_f * p.k_f * p.alpha) - help)
}

/// Two-branch bound for `1 <= r_f < k_f` and `r_f < r_i <= k_i`, split on
/// whether `r_i mod k_f >= r_f`.
pub fn bound_ii(p: &SplitParams) -> Result<Rational, BoundError> {
    pre(
        p.r_f >= 1 && p.r_f < p.k_f && p.r_f < p.r_i && p.r_i <= p.k_i(),
        "bound_II needs 1 <= r_f < k_f and r_f < r_i <= k_i",
    )?;
    let (lf, kf, rf, ri, a) = (p.lambda_f, p.k_f, p.r_f, p.r_i, p.alpha);
    if ri % kf >= rf {
        let c = ceil_div(ri, kf);
        let num = r((lf - c) * kf + ri);
        let den = r((lf - c) * rf + ri);
        Ok(r(lf * rf * a) * num / den)
    } else {
        let f = ri / kf;
        let den = r((lf - f) * rf + f * kf);
        Ok(r(lf * kf * a) - r(lf * ri * a * (kf - rf)) / den)
    }
}

/// The `theta_1` used by the theorem: `ceil((r_i - r_f + 1) / k_f)`, capped
/// at `lambda_f`.
pub fn theorem_theta1(p: &SplitParams) -> usize {
    ceil_div((p.r_i + 1).saturating_sub(p.r_f), p.k_f).clamp(1, p.lambda_f)
}

/// Lower bound on the entropy of the information-node downloads for a
/// given `theta_1 in 1..=lambda_f`; clamped to 0 when the numerator is not
/// positive.
pub fn entropy_v_lb(p: &SplitParams, theta1: usize) -> Result<Rational, BoundError> {
    pre(
        p.r_f < p.k_f && p.r_f < p.r_i,
        "entropy_V_lb needs r_f < k_f and r_f < r_i",
    )?;
    pre((1..=p.lambda_f).contains(&theta1), "theta_1 must lie in 1..=lambda_f")?;
    let theta2 = p.r_i.saturating_sub(theta1 * p.k_f) as i64;
    let n = ((p.lambda_f - theta1) * p.r_f) as i64 - theta2;
    if n <= 0 {
        return Ok(Rational::from_integer(0));
    }
    let total = r(p.lambda_f * p.k_f * p.alpha);
    Ok(total * Rational::new(n, n + p.r_i as i64))
}

/// Largest [`entropy_v_lb`] over all `theta_1`, with the first maximizer.
pub fn entropy_v_lb_max(p: &SplitParams) -> Result<(usize, Rational), BoundError> {
    let mut best = (1, entropy_v_lb(p, 1)?);
    for t in 2..=p.lambda_f {
        let v = entropy_v_lb(p, t)?;
        if v > best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}

/// Bound under equal per-node download amounts.
pub fn uniform_cost_bound(p: &SplitParams) -> Rational {
    if p.r_f == 0 {
        return r(0);
    }
    if p.r_i <= p.lambda_f * p.r_f {
        let slope = (Rational::new(p.k_f as i64, p.r_f as i64) - 1).max(r(0));
        r(p.lambda_f * p.k_f * p.alpha) - r(p.r_i * p.alpha) * slope
    } else {
        bound_trivial(p)
    }
}

/// Read cost of the known constructions for `r_f < r_i`, `r_f < k_f`:
/// `lambda_f*r_f*alpha*((lambda_f-1)k_f + r_i)/((lambda_f-1)r_f + r_i)`.
pub fn achievable_decreasing(p: &SplitParams) -> Result<Rational, BoundError> {
    pre(
        p.r_f >= 1 && p.r_f < p.r_i && p.r_f < p.k_f,
        "achievable_decreasing needs 1 <= r_f < r_i and r_f < k_f",
    )?;
    let (lf, kf, rf, ri) = (p.lambda_f, p.k_f, p.r_f, p.r_i);
    Ok(r(lf * rf * p.alpha) * r((lf - 1) * kf + ri) / r((lf - 1) * rf + ri))
}

/// Access cost lower bound for linear MDS conversion in the general regime
/// (`k_i != k_f`), with `lambda_i` initial and `lambda_f` final codewords.
pub fn reference_access_bound(
    k_i: usize,
    r_i: usize,
    k_f: usize,
    r_f: usize,
    lambda_i: usize,
    lambda_f: usize,
) -> Result<usize, BoundError> {
    pre(k_i != k_f, "reference_access_bound needs k_i != k_f")?;
    pre(
        lambda_f >= 1 && k_i >= 1,
        "reference_access_bound needs lambda_f, k_i >= 1",
    )?;
    if r_i < r_f || r_f >= k_i.min(k_f) {
        return Ok(lambda_i * k_i);
    }
    Ok(lambda_i * r_f + (lambda_i % lambda_f) * (k_i - (k_f % k_i).max(r_f)))
}

/// Bandwidth lower bound in the merge regime `k_f = lambda_i * k_i`.
pub fn reference_merge_bound(
    k_i: usize,
    r_i: usize,
    r_f: usize,
    lambda_i: usize,
    alpha: usize,
) -> Result<Rational, BoundError> {
    pre(lambda_i >= 2, "reference_merge_bound needs lambda_i >= 2")?;
    let scale = r(lambda_i * alpha);
    if r_i >= r_f || k_i <= r_f {
        return Ok(scale * r(k_i.min(r_f)));
    }
    Ok(scale * (r(r_i) + r(k_i) * (r(1) - Rational::new(r_i as i64, r_f as i64))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Regime {
    /// `r_f = 0`: nothing to build.
    #[serde(rename = "rf=0")]
    NoFinalParity,
    #[serde(rename = "rf>=kf")]
    ManyFinalParities,
    #[serde(rename = "ri<=rf<kf")]
    IncreasingRedundancy,
    #[serde(rename = "rf<ri<=ki,ri%kf>=rf")]
    DecreasingHighRemainder,
    #[serde(rename = "rf<ri<=ki,ri%kf<rf")]
    DecreasingLowRemainder,
    #[serde(rename = "ri>ki,rf<kf")]
    ManyInitialParities,
}

impl Regime {
    pub fn classify(p: &SplitParams) -> Regime {
        let (kf, rf, ri) = (p.k_f, p.r_f, p.r_i);
        if rf == 0 {
            Regime::NoFinalParity
        } else if rf < kf && rf < ri && ri <= p.k_i() {
            if ri % kf >= rf {
                Regime::DecreasingHighRemainder
            } else {
                Regime::DecreasingLowRemainder
            }
        } else if ri <= rf && rf < kf {
            Regime::IncreasingRedundancy
        } else if rf >= kf {
            Regime::ManyFinalParities
        } else {
            Regime::ManyInitialParities
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::NoFinalParity => "rf=0",
            Regime::ManyFinalParities => "rf>=kf",
            Regime::IncreasingRedundancy => "ri<=rf<kf",
            Regime::DecreasingHighRemainder => "rf<ri<=ki,ri%kf>=rf",
            Regime::DecreasingLowRemainder => "rf<ri<=ki,ri%kf<rf",
            Regime::ManyInitialParities => "ri>ki,rf<kf",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub params: SplitParams,
    pub regime: Regime,
    #[serde(serialize_with = "ser_ratio")]
    pub value: Rational,
    #[serde(rename = "L1", serialize_with = "ser_opt_ratio")]
    pub l1: Option<Rational>,
    #[serde(rename = "L2", serialize_with = "ser_opt_ratio")]
    pub l2: Option<Rational>,
    #[serde(rename = "L3", serialize_with = "ser_ratio")]
    pub l3: Rational,
    pub tight: bool,
    /// Read cost of a known scheme matching the bound's regime (default
    /// re-encoding for `r_f >= k_f`), when one applies.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub matching_construction_cost: Option<Rational>,
    #[serde(serialize_with = "ser_ratio")]
    pub uniform_cost: Rational,
    pub theta1: Option<usize>,
    /// `r_i mod k_f`.
    pub b: usize,
}

/// Classifies `p` and evaluates the piecewise bound.
pub fn theorem_bound(p: &SplitParams) -> BoundReport {
    let regime = Regime::classify(p);
    let l1 = bound_ii(p).ok();
    let l2 = bound_i(p).ok();
    let l3 = bound_trivial(p);
    let value = match regime {
        Regime::NoFinalParity => r(0),
        Regime::ManyFinalParities | Regime::ManyInitialParities => l3,
        Regime::IncreasingRedundancy => l2.expect("bound_I applies"),
        Regime::DecreasingHighRemainder | Regime::DecreasingLowRemainder => l1.expect("bound_II applies"),
    };
    let tight = regime == Regime::NoFinalParity || p.r_f >= p.k_f || p.r_i <= p.k_f;
    let matching_construction_cost = match regime {
        Regime::NoFinalParity => Some(r(0)),
        Regime::ManyFinalParities => Some(r(p.k_i() * p.alpha)),
        Regime::IncreasingRedundancy => l2,
        _ => achievable_decreasing(p).ok(),
    };
    let theta1 = (p.r_f < p.k_f && p.r_f < p.r_i).then(|| theorem_theta1(p));
    BoundReport {
        params: *p,
        regime,
        value,
        l1,
        l2,
        l3,
        tight,
        matching_construction_cost,
        uniform_cost: uniform_cost_bound(p),
        theta1,
        b: p.r_i % p.k_f,
    }
}

/// For `1 <= r_f < k_f` and `r_f < r_i`: `L1` dominates both other
/// components when `r_i <= k_i`, and `L3 > L2` otherwise.
pub fn dominance_check(p: &SplitParams) -> Result<bool, BoundError> {
    pre(
        p.r_f >= 1 && p.r_f < p.k_f && p.r_f < p.r_i,
        "dominance_check needs 1 <= r_f < k_f and r_f < r_i",
    )?;
    let l2 = bound_i(p)?;
    let l3 = bound_trivial(p);
    if p.r_i <= p.k_i() {
        let l1 = bound_ii(p)?;
        Ok(l1 >= l2 && l1 >= l3)
    } else {
        Ok(l3 > l2)
    }
}

/// Consistency of one parameter point. `None` marks a check whose
/// precondition does not hold at this point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointAudit {
    pub params: SplitParams,
    /// The bound value equals the largest applicable component.
    pub value_is_max: bool,
    pub dominance: Option<bool>,
    /// `max(L3, L2)` equals the uniform-cost bound.
    pub uniform_matches: Option<bool>,
    /// `L1` equals the construction cost for `r_f < r_i <= k_f`.
    pub tight_identity: Option<bool>,
    /// The construction cost is at least the theorem value.
    pub achievable_dominates: Option<bool>,
}

impl PointAudit {
    pub fn passed(&self) -> bool {
        self.value_is_max
            && [
                self.dominance,
                self.uniform_matches,
                self.tight_identity,
                self.achievable_dominates,
            ]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

pub fn audit_point(p: &SplitParams) -> PointAudit {
    let rep = theorem_bound(p);
    let max = [rep.l1, rep.l2, Some(rep.l3)]
        .into_iter()
        .flatten()
        .max()
        .expect("L3 always applies");
    let value_is_max = if p.r_f == 0 {
        rep.value == r(0) && max == r(0)
    } else {
        rep.value == max
    };
    let ach = achievable_decreasing(p).ok();
    let tight_identity = (p.r_f >= 1 && p.r_f < p.r_i && p.r_i <= p.k_f && p.r_f < p.k_f).then(|| rep.l1 == ach);
    PointAudit {
        params: *p,
        value_is_max,
        dominance: dominance_check(p).ok(),
        uniform_matches: rep.l2.map(|l2| l2.max(rep.l3) == rep.uniform_cost),
        tight_identity,
        achievable_dominates: ach.map(|a| a >= rep.value),
    }
}

/// One CSV row of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lf: usize,
    pub kf: usize,
    pub rf: usize,
    pub ri: usize,
    pub alpha: usize,
    pub regime: &'static str,
    pub value_num: i64,
    pub value_den: i64,
    pub value_decimal: String,
    #[serde(rename = "L1")]
    pub l1: String,
    #[serde(rename = "L2")]
    pub l2: String,
    #[serde(rename = "L3")]
    pub l3: String,
    pub tight: bool,
    pub uniform_cost: String,
    pub achievable: String,
}

fn show(v: Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn show_opt(v: Option<Rational>) -> String {
    v.map(show).unwrap_or_default()
}

impl From<&BoundReport> for SweepRow {
    fn from(rep: &BoundReport) -> Self {
        let p = &rep.params;
        SweepRow {
            lf: p.lambda_f,
            kf: p.k_f,
            rf: p.r_f,
            ri: p.r_i,
            alpha: p.alpha,
            regime: rep.regime.label(),
            value_num: *rep.value.numer(),
            value_den: *rep.value.denom(),
            value_decimal: format!("{:.6}", *rep.value.numer() as f64 / *rep.value.denom() as f64),
            l1: show_opt(rep.l1),
            l2: show_opt(rep.l2),
            l3: show(rep.l3),
            tight: rep.tight,
            uniform_cost: show(rep.uniform_cost),
            achievable: show_opt(rep.matching_construction_cost),
        }
    }
}

/// Axis values of a sweep. `ris = None` means `1..=2*k_i` for each point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepGrid {
    pub lfs: Vec<usize>,
    pub kfs: Vec<usize>,
    pub rfs: Vec<usize>,
    pub ris: Option<Vec<usize>>,
    pub alphas: Vec<usize>,
}

impl SweepGrid {
    /// Valid parameter points in lexicographic `(lf, kf, rf, ri, alpha)` order.
    pub fn points(&self) -> Vec<SplitParams> {
        let mut out = Vec::new();
        for &lf in &self.lfs {
            for &kf in &self.kfs {
                for &rf in &self.rfs {
                    let ris: Vec<usize> = match &self.ris {
                        Some(v) => v.clone(),
                        None => (1..=2 * lf * kf).collect(),
                    };
                    for &ri in &ris {
                        for &alpha in &self.alphas {
                            if let Ok(p) = SplitParams::new(lf, kf, rf, ri, alpha) {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Number of points without materializing them.
    pub fn len(&self) -> usize {
        let ri_count = |lf: usize, kf: usize| self.ris.as_ref().map_or(2 * lf * kf, Vec::len);
        let valid = |v: &Vec<usize>, min: usize| v.iter().filter(|&&x| x >= min).count();
        let mut n = 0;
        for &lf in self.lfs.iter().filter(|&&l| l >= 2) {
            for &kf in self.kfs.iter().filter(|&&k| k >= 1) {
                n += self.rfs.len() * ri_count(lf, kf) * valid(&self.alphas, 1);
            }
        }
        n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Evaluates every grid point, rejecting grids larger than `max_rows`.
/// Rows come back in [`SweepGrid::points`] order for every `exec`.
pub fn sweep(grid: &SweepGrid, max_rows: usize, exec: Exec) -> Result<Vec<BoundReport>, BoundError> {
    let n = grid.len();
    if n > max_rows {
        return Err(BoundError::GridTooLarge { rows: n, cap: max_rows });
    }
    Ok(exec.map(&grid.points(), theorem_bound))
}

/// Audits every grid point.
pub fn audit_grid(grid: &SweepGrid, exec: Exec) -> Vec<PointAudit> {
    exec.map(&grid.points(), audit_point)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lf: usize, kf: usize, rf: usize, ri: usize, alpha: usize) -> SplitParams {
        SplitParams::new(lf, kf, rf, ri, alpha).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn trivial_bound_examples() {
        assert_eq!(bound_trivial(&p(2, 2, 3, 1, 1)), q(4, 1));
        assert_eq!(bound_trivial(&p(2, 2, 0, 1, 1)), q(0, 1));
        assert_eq!(bound_trivial(&p(3, 4, 2, 1, 2)), q(12, 1));
    }

    #[test]
    fn bound_i_examples() {
        assert_eq!(bound_i(&p(2, 3, 2, 1, 2)).unwrap(), q(11, 1));
        assert_eq!(bound_i(&p(2, 2, 1, 1, 1)).unwrap(), q(3, 1));
        assert_eq!(bound_i(&p(2, 3, 1, 0, 2)).unwrap(), q(12, 1));
        assert!(bound_i(&p(2, 2, 2, 1, 1)).is_err());
        assert!(bound_i(&p(2, 2, 0, 1, 1)).is_err());
    }

    #[test]
    fn bound_ii_examples() {
        assert_eq!(bound_ii(&p(2, 3, 1, 2, 3)).unwrap(), q(10, 1));
        assert_eq!(bound_ii(&p(2, 4, 3, 5, 7)).unwrap(), q(46, 1));
        assert_eq!(achievable_decreasing(&p(2, 3, 1, 2, 3)).unwrap(), q(10, 1));
        assert!(bound_ii(&p(2, 3, 1, 7, 1)).is_err());
    }

    #[test]
    fn entropy_lb_examples() {
        assert_eq!(entropy_v_lb(&p(2, 3, 1, 2, 3), 1).unwrap(), q(6, 1));
        assert_eq!(entropy_v_lb(&p(2, 4, 3, 5, 7), 1).unwrap(), q(16, 1));
        assert_eq!(entropy_v_lb(&p(2, 2, 1, 4, 1), 2).unwrap(), q(0, 1));
        assert!(entropy_v_lb(&p(2, 3, 1, 2, 3), 3).is_err());
        assert!(entropy_v_lb(&p(2, 3, 1, 2, 3), 0).is_err());
        assert_eq!(theorem_theta1(&p(2, 3, 1, 2, 3)), 1);
        let (_, best) = entropy_v_lb_max(&p(2, 3, 1, 2, 3)).unwrap();
        assert!(best >= q(6, 1));
    }

    #[test]
    fn theorem_examples() {
        let a = theorem_bound(&p(2, 3, 1, 2, 3));
        assert_eq!(
            (a.regime, a.value, a.tight),
            (Regime::DecreasingHighRemainder, q(10, 1), true)
        );
        let b = theorem_bound(&p(2, 2, 1, 5, 1));
        assert_eq!(
            (b.regime, b.value, b.tight),
            (Regime::ManyInitialParities, q(2, 1), false)
        );
        let c = theorem_bound(&p(2, 2, 3, 1, 1));
        assert_eq!((c.regime, c.value, c.tight), (Regime::ManyFinalParities, q(4, 1), true));
        let d = theorem_bound(&p(2, 4, 3, 5, 7));
        assert_eq!((d.regime, d.value), (Regime::DecreasingLowRemainder, q(46, 1)));
        assert_eq!(theorem_bound(&p(2, 3, 2, 1, 2)).value, q(11, 1));
        assert_eq!(theorem_bound(&p(2, 3, 0, 2, 1)).value, q(0, 1));
    }

    #[test]
    fn uniform_cost_examples() {
        assert_eq!(uniform_cost_bound(&p(2, 2, 1, 1, 1)), q(3, 1));
        assert_eq!(uniform_cost_bound(&p(2, 2, 1, 3, 1)), q(2, 1));
        assert_eq!(uniform_cost_bound(&p(2, 2, 3, 1, 1)), q(4, 1));
        assert_eq!(uniform_cost_bound(&p(2, 2, 0, 0, 1)), q(0, 1));
    }

    #[test]
    fn achievable_examples() {
        assert_eq!(achievable_decreasing(&p(2, 4, 3, 5, 7)).unwrap(), q(189, 4));
        assert_eq!(achievable_decreasing(&p(3, 2, 1, 2, 1)).unwrap(), q(9, 2));
        assert!(achievable_decreasing(&p(2, 4, 3, 2, 7)).is_err());
    }

    #[test]
    fn reference_bounds() {
        assert_eq!(reference_access_bound(2, 1, 4, 2, 3, 1).unwrap(), 6);
        assert_eq!(reference_access_bound(2, 2, 4, 1, 2, 1).unwrap(), 2);
        assert_eq!(reference_access_bound(2, 2, 4, 3, 2, 1).unwrap(), 4);
        assert!(reference_access_bound(2, 2, 2, 1, 2, 1).is_err());
        assert_eq!(reference_merge_bound(3, 2, 1, 2, 2).unwrap(), q(4, 1));
        assert_eq!(reference_merge_bound(2, 1, 2, 2, 2).unwrap(), q(8, 1));
        assert_eq!(reference_merge_bound(2, 0, 3, 2, 1).unwrap(), q(4, 1));
        assert!(reference_merge_bound(2, 0, 3, 1, 1).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_check(&p(2, 3, 1, 2, 3)).unwrap());
        assert!(dominance_check(&p(2, 2, 1, 5, 1)).unwrap());
        assert!(dominance_check(&p(2, 2, 2, 5, 1)).is_err());
    }

    #[test]
    fn sweep_is_nonincreasing_in_ri() {
        let grid = SweepGrid {
            lfs: vec![2],
            kfs: vec![4],
            rfs: vec![2],
            ris: Some((1..=12).collect()),
            alphas: vec![1],
        };
        let rows = sweep(&grid, 100, Exec::Parallel).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.windows(2).all(|w| w[0].value >= w[1].value));
        let values: Vec<Rational> = rows.iter().map(|r| r.value).collect();
        assert_eq!(&values[..6], &[q(7, 1), q(6, 1), q(28, 5), q(16, 3), q(14, 3), q(4, 1)]);
        for r in rows.iter().filter(|r| r.params.r_i <= 4) {
            assert!(r.tight);
            assert_eq!(r.matching_construction_cost, Some(r.value));
        }
        assert!(sweep(&grid, 11, Exec::Parallel).is_err());
    }

    #[test]
    fn grid_len_matches_points() {
        let grid = SweepGrid {
            lfs: vec![1, 2, 3],
            kfs: vec![0, 1, 2],
            rfs: vec![0, 1],
            ris: None,
            alphas: vec![0, 1, 2],
        };
        assert_eq!(grid.len(), grid.points().len());
    }

    #[test]
    fn small_grid_is_consistent() {
        let grid = SweepGrid {
            lfs: vec![2, 3],
            kfs: (1..=4).collect(),
            rfs: (0..=4).collect(),
            ris: None,
            alphas: vec![1, 2],
        };
        for a in audit_grid(&grid, Exec::Sequential) {
            assert!(a.passed(), "{a:?}");
        }
    }

    #[test]
    fn report_json_uses_integer_pairs() {
        let v = serde_json::to_value(theorem_bound(&p(2, 3, 1, 2, 3))).unwrap();
        assert_eq!(v["value"], serde_json::json!({ "num": 10, "den": 1 }));
        assert_eq!(v["regime"], "rf<ri<=ki,ri%kf>=rf");
        assert_eq!(v["params"]["lf"], 2);
    }
}
