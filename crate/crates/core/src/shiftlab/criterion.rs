use serde::{Deserialize, Serialize};

use super::orbit::{return_set_with, ProductTable};
use super::scaled::Scaled;
use super::{BallSpec, NormKind, Side, TruncatedVector, WeightSpec};
use crate::error::{invalid, Error, Result};
use crate::natset::{FamilyTest, WindowSet};
use crate::verdict::{FamilyVerdict, Witness};

/// Absolute slack for log-space threshold comparisons.
pub const LOG_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `∏_{i=j+1}^{j+L} |w_i|`.
    Forward,
    /// `∏_{i=j-L+1}^{j} |w_i|`.
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightProduct {
    /// Natural log of the product.
    pub ln: f64,
    exact: Scaled,
}

impl WeightProduct {
    /// The product as a double; saturates to `0` or `inf` out of range.
    pub fn value(&self) -> f64 {
        self.exact.to_f64()
    }

    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }
}

fn index_range(side: Side, j: i64, len: u64, dir: Direction) -> Result<(i64, i64)> {
    let len = i64::try_from(len).map_err(|_| invalid("product length too large"))?;
    let (lo, hi) = match dir {
        Direction::Forward => (j + 1, j + len),
        Direction::Backward => (j - len + 1, j),
    };
    if side == Side::Unilateral && lo < 1 {
        return Err(Error::IndexOutOfDomain(format!(
            "unilateral weights start at index 1, product needs index {lo}"
        )));
    }
    Ok((lo, hi))
}

pub fn weight_product(w: &WeightSpec, j: i64, len: u64, dir: Direction) -> Result<WeightProduct> {
    if len == 0 {
        return Err(invalid("product length must be at least 1"));
    }
    let (lo, hi) = index_range(w.side(), j, len, dir)?;
    let mut ln = 0.0;
    let mut exact = Scaled::ONE;
    for i in lo..=hi {
        let wi = w.weight(i).abs();
        ln += wi.ln();
        exact = exact.mul_f64(wi);
    }
    Ok(WeightProduct { ln, exact })
}

/// One line of the criterion CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionRow {
    pub m: u64,
    pub direction: Direction,
    /// `ln` of the compared quantity (`∏` forward, `1/∏` backward).
    pub ln_value: f64,
    pub pass: bool,
}

impl CriterionRow {
    /// `m,product,pass` with the product printed from its logarithm so
    /// values beyond the double range stay readable.
    pub fn csv_line(&self) -> String {
        format!("{},{},{}", self.m, format_from_ln(self.ln_value), self.pass)
    }
}

pub(crate) fn format_from_ln(ln: f64) -> String {
    let l10 = ln / std::f64::consts::LN_10;
    let mut exp = l10.floor();
    let mut mant = (10f64.powf(l10 - exp) * 1e6).round() / 1e6;
    if mant >= 10.0 {
        mant /= 10.0;
        exp += 1.0;
    }
    format!("{mant:.6}e{exp}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionSets {
    pub forward: WindowSet,
    /// Absent for unilateral shifts.
    pub backward: Option<WindowSet>,
    pub rows: Vec<CriterionRow>,
}

/// `{m <= m_max : ∏_{i=j+1}^{j+md} |w_i| > M}` and, for bilateral shifts,
/// `{m <= m_max : 1/∏_{i=j-md+1}^{j} |w_i| > M}`, both on `[0, m_max]`.
pub fn criterion_sets(
    w: &WeightSpec,
    j: i64,
    d: u64,
    threshold: f64,
    m_max: u64,
) -> Result<CriterionSets> {
    if d == 0 {
        return Err(invalid("power difference d must be at least 1"));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(invalid("threshold M must be positive"));
    }
    if m_max == 0 {
        return Err(invalid("m_max must be at least 1"));
    }
    if w.side() == Side::Unilateral && j < 0 {
        return Err(Error::IndexOutOfDomain(format!(
            "unilateral probe j = {j} is negative"
        )));
    }
    let ln_m = threshold.ln();
    let di = d as i64;
    let mut rows = Vec::with_capacity(2 * m_max as usize);

    let mut forward = Vec::new();
    let mut acc = 0.0;
    for m in 1..=m_max {
        let end = j + m as i64 * di;
        for i in end - di + 1..=end {
            acc += w.weight(i).abs().ln();
        }
        let pass = acc - ln_m > LOG_SLACK;
        if pass {
            forward.push(m);
        }
        rows.push(CriterionRow {
            m,
            direction: Direction::Forward,
            ln_value: acc,
            pass,
        });
    }

    let backward = match w.side() {
        Side::Unilateral => None,
        Side::Bilateral => {
            let mut set = Vec::new();
            let mut acc = 0.0;
            for m in 1..=m_max {
                let start = j - m as i64 * di + 1;
                for i in start..start + di {
                    acc += w.weight(i).abs().ln();
                }
                let pass = -acc - ln_m > LOG_SLACK;
                if pass {
                    set.push(m);
                }
                rows.push(CriterionRow {
                    m,
                    direction: Direction::Backward,
                    ln_value: -acc,
                    pass,
                });
            }
            Some(WindowSet::new(m_max + 1, set)?)
        }
    };

    Ok(CriterionSets {
        forward: WindowSet::new(m_max + 1, forward)?,
        backward,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfConfig {
    /// `r_1 < ... < r_N`; `r_0 = 0` is added implicitly.
    pub powers: Vec<u64>,
    pub test: FamilyTest,
    /// Defaults to `|j| <= 8` (`0..=8` for unilateral shifts).
    #[serde(default)]
    pub probes: Option<Vec<i64>>,
    /// Defaults to `10^t`, `-2 <= t <= 6`.
    #[serde(default)]
    pub m_grid: Option<Vec<f64>>,
    pub m_max: u64,
}

impl DfConfig {
    pub fn new(powers: Vec<u64>, test: FamilyTest, m_max: u64) -> Self {
        DfConfig {
            powers,
            test,
            probes: None,
            m_grid: None,
            m_max,
        }
    }

    fn probes_for(&self, side: Side) -> Vec<i64> {
        self.probes.clone().unwrap_or_else(|| match side {
            Side::Bilateral => (-8..=8).collect(),
            Side::Unilateral => (0..=8).collect(),
        })
    }

    fn grid(&self) -> Vec<f64> {
        self.m_grid
            .clone()
            .unwrap_or_else(|| (-2..=6).map(|t| 10f64.powi(t)).collect())
    }

    /// Distinct differences `r_l - r_s`, `0 <= s < l <= N`, ascending.
    pub fn differences(&self) -> Result<Vec<u64>> {
        if self.powers.is_empty() || self.powers[0] == 0 {
            return Err(invalid("powers must start at r_1 >= 1"));
        }
        if self.powers.windows(2).any(|p| p[0] >= p[1]) {
            return Err(invalid("powers must be strictly increasing"));
        }
        let mut all = vec![0];
        all.extend(&self.powers);
        let mut diffs: Vec<u64> = all
            .iter()
            .enumerate()
            .flat_map(|(s, &rs)| all[s + 1..].iter().map(move |&rl| rl - rs))
            .collect();
        diffs.sort_unstable();
        diffs.dedup();
        Ok(diffs)
    }

    fn validate(&self, side: Side) -> Result<()> {
        if self.m_max == 0 {
            return Err(invalid("m_max must be at least 1"));
        }
        if self.grid().iter().any(|m| !(*m > 0.0 && m.is_finite())) {
            return Err(invalid("thresholds M must be positive"));
        }
        if side == Side::Unilateral && self.probes_for(side).iter().any(|&j| j < 0) {
            return Err(Error::IndexOutOfDomain(
                "unilateral probes must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome for one `(j, M, d, direction)` combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub j: i64,
    pub threshold: f64,
    pub d: u64,
    pub direction: Direction,
    pub set_size: usize,
    pub verdict: FamilyVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DfReport {
    pub verdict: FamilyVerdict,
    pub cases: Vec<CaseOutcome>,
}

impl DfReport {
    fn assemble(cases: Vec<CaseOutcome>) -> Self {
        let first_fail = cases.iter().position(|c| c.verdict.is_fails());
        let verdict = match first_fail {
            None => FamilyVerdict::holds(None),
            Some(idx) => {
                let c = &cases[idx];
                FamilyVerdict::fails(Witness::Member { index: idx }).with_note(format!(
                    "j = {}, M = {}, d = {}, {:?} set fails {}",
                    c.j,
                    c.threshold,
                    c.d,
                    c.direction,
                    c.verdict
                ))
            }
        };
        DfReport { verdict, cases }
    }

    /// The `(j, M, d, direction)` sets, in case order, for cross-route
    /// comparison.
    pub fn verdicts(&self) -> Vec<bool> {
        self.cases.iter().map(|c| c.verdict.is_holds()).collect()
    }
}

/// Weight-product route: every criterion set, for every probe `j`,
/// threshold `M` and power difference, must pass the family test.
pub fn d_f_verdict(w: &WeightSpec, cfg: &DfConfig) -> Result<DfReport> {
    cfg.validate(w.side())?;
    let diffs = cfg.differences()?;
    let mut cases = Vec::new();
    for j in cfg.probes_for(w.side()) {
        for &threshold in &cfg.grid() {
            for &d in &diffs {
                let sets = criterion_sets(w, j, d, threshold, cfg.m_max)?;
                let mut push = |dir, set: &WindowSet| -> Result<()> {
                    cases.push(CaseOutcome {
                        j,
                        threshold,
                        d,
                        direction: dir,
                        set_size: set.len(),
                        verdict: cfg.test.apply(set)?,
                    });
                    Ok(())
                };
                push(Direction::Forward, &sets.forward)?;
                if let Some(b) = &sets.backward {
                    push(Direction::Backward, b)?;
                }
            }
        }
    }
    Ok(DfReport::assemble(cases))
}

/// Balls whose return set encodes the criterion set for `(j, M)`:
/// forward uses `U = B(0, 1/(2M))`, `V = B(e_j, 1/2)`; backward swaps the
/// roles, `U = B(e_j, 1/2)`, `V = B(0, 1/(2M))`. Sup norm throughout.
pub fn probe_balls(
    side: Side,
    j: i64,
    threshold: f64,
    dir: Direction,
) -> Result<(BallSpec, BallSpec)> {
    let unit = TruncatedVector::basis(side, j, j, j)?;
    let zero = TruncatedVector::zeros(side, j, j)?;
    let small = 1.0 / (2.0 * threshold);
    Ok(match dir {
        Direction::Forward => (
            BallSpec::new(zero, small, NormKind::Sup)?,
            BallSpec::new(unit, 0.5, NormKind::Sup)?,
        ),
        Direction::Backward => (
            BallSpec::new(unit, 0.5, NormKind::Sup)?,
            BallSpec::new(zero, small, NormKind::Sup)?,
        ),
    })
}

/// Direct-simulation route: the same cases as [`d_f_verdict`], with each
/// set read off as `{m : m·d ∈ N(U, V)}` from [`direct_return_set`].
pub fn direct_d_f_verdict(w: &WeightSpec, cfg: &DfConfig) -> Result<DfReport> {
    cfg.validate(w.side())?;
    let diffs = cfg.differences()?;
    let d_max = *diffs.last().expect("at least one difference");
    let n_max = cfg
        .m_max
        .checked_mul(d_max)
        .ok_or_else(|| invalid("m_max * d overflows"))?;
    let dirs: &[Direction] = match w.side() {
        Side::Bilateral => &[Direction::Forward, Direction::Backward],
        Side::Unilateral => &[Direction::Forward],
    };
    let probes = cfg.probes_for(w.side());
    let table = ProductTable::covering(w, &probes, n_max)?;
    let mut cases = Vec::new();
    for &j in &probes {
        for &threshold in &cfg.grid() {
            let returns: Vec<WindowSet> = dirs
                .iter()
                .map(|&dir| {
                    let (u, v) = probe_balls(w.side(), j, threshold, dir)?;
                    return_set_with(&table, w.side(), &u, &v, n_max)
                })
                .collect::<Result<_>>()?;
            for &d in &diffs {
                for (dir, ret) in dirs.iter().zip(&returns) {
                    let set: Vec<u64> = (1..=cfg.m_max).filter(|m| ret.contains(m * d)).collect();
                    let set = WindowSet::new(cfg.m_max + 1, set)?;
                    cases.push(CaseOutcome {
                        j,
                        threshold,
                        d,
                        direction: *dir,
                        set_size: set.len(),
                        verdict: cfg.test.apply(&set)?,
                    });
                }
            }
        }
    }
    Ok(DfReport::assemble(cases))
}

/// Runs both routes; `agree` is true when every case verdict matches.
pub fn compare_routes(w: &WeightSpec, cfg: &DfConfig) -> Result<(DfReport, DfReport, bool)> {
    let crit = d_f_verdict(w, cfg)?;
    let direct = direct_d_f_verdict(w, cfg)?;
    let agree = crit.verdict.is_holds() == direct.verdict.is_holds()
        && crit.verdicts() == direct.verdicts();
    Ok((crit, direct, agree))
}
