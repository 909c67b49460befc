//! End-to-end inequality verification for a metric.
//!
//! Computes balance, curvature, area, diameter, the first eigenvalue and a
//! systole upper bound, then emits one record per inequality with explicit
//! margins. Inequalities whose left side involves the systole use the
//! certified upper bound, so a pass is a genuine verification while a fail
//! is only inconclusive; entries whose hypotheses fail are skipped with a
//! reason, never dropped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::{find_systole_upper, SystoleConfig, SystoleEstimate, SystoleSource};
use crate::metrics::{
    area, balance, curvature_stats, diameter, lambda1, CurvatureStats, DiameterEstimate,
    FiberBalance, MetricModel,
};
use crate::nirenberg::beta_delta_bound;

pub const SCHEMA: &str = "reeb-systole/1";

/// Pinching threshold above which the sharp cited bounds are reported:
/// `(4 + sqrt 7) / 8`.
pub fn sharp_pinching_threshold() -> f64 {
    (4.0 + 7.0f64.sqrt()) / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub systole: SystoleConfig,
    pub diameter_resolution: usize,
    pub lambda1_band_limit: usize,
    /// Normalized-margin tolerance for "holds".
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            systole: SystoleConfig::default(),
            diameter_resolution: 64,
            lambda1_band_limit: 16,
            tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Pass,
    /// The inequality did not clear the margin, but its left side is only an
    /// upper bound, so nothing is refuted.
    Inconclusive,
    Fail,
    Skipped,
    /// The systole search failed, leaving the left side unknown.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityEntry {
    pub id: String,
    /// Attribution of the inequality being checked.
    pub paper_ref: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// `(rhs - lhs) / max(|lhs|, |rhs|, 1)`.
    pub margin: Option<f64>,
    pub holds: bool,
    pub status: EntryStatus,
    pub reason: Option<String>,
    /// The left side uses the systole upper bound.
    pub conservative: bool,
    /// Cited sharp result reported for context, not counted as applicable.
    pub informational: bool,
    pub inputs_used: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityBlock {
    pub balance: FiberBalance,
    pub curvature: CurvatureStats,
    pub area: f64,
    pub volume_disk_bundle: f64,
    pub diameter: DiameterEstimate,
    pub lambda1: Option<f64>,
    pub systole_upper: Option<f64>,
    pub systole_source: Option<SystoleSource>,
    pub systole_candidates: usize,
}

/// The Rotman-vs-balanced comparison of right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaThresholdRecord {
    pub beta: f64,
    /// `pi / 32`: the balance above which the balanced bound is finer.
    pub threshold: f64,
    pub balanced_rhs: f64,
    pub rotman_rhs: f64,
    pub balanced_bound_finer: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub schema: String,
    pub metric_digest: String,
    pub quantities: QuantityBlock,
    pub entries: Vec<InequalityEntry>,
    pub beta_threshold: BetaThresholdRecord,
    pub all_applicable_hold: bool,
}

impl InequalityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,lhs,rhs,margin,holds,status,reason\n");
        for e in &self.entries {
            let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{},{},{},{:?},{}\n",
                e.id,
                fmt(e.lhs),
                fmt(e.rhs),
                fmt(e.margin),
                e.holds,
                e.status,
                e.reason.clone().unwrap_or_default()
            ));
        }
        s
    }
}

struct EntryBuilder {
    tolerance: f64,
    entries: Vec<InequalityEntry>,
}

impl EntryBuilder {
    fn push_check(
        &mut self,
        id: &str,
        paper_ref: &str,
        lhs: Option<f64>,
        rhs: Option<f64>,
        conservative: bool,
        informational: bool,
        inputs: &[&str],
        skip_reason: Option<String>,
    ) {
        let entry = match (skip_reason, lhs, rhs) {
            (Some(reason), _, _) => InequalityEntry {
                id: id.into(),
                paper_ref: paper_ref.into(),
                lhs: None,
                rhs: None,
                margin: None,
                holds: false,
                status: EntryStatus::Skipped,
                reason: Some(reason),
                conservative,
                informational,
                inputs_used: inputs.iter().map(|s| s.to_string()).collect(),
            },
            (None, Some(l), Some(r)) => {
                let margin = (r - l) / l.abs().max(r.abs()).max(1.0);
                let holds = margin >= -self.tolerance;
                let status = if holds {
                    EntryStatus::Pass
                } else if conservative {
                    EntryStatus::Inconclusive
                } else {
                    EntryStatus::Fail
                };
                InequalityEntry {
                    id: id.into(),
                    paper_ref: paper_ref.into(),
                    lhs: Some(l),
                    rhs: Some(r),
                    margin: Some(margin),
                    holds,
                    status,
                    reason: (!holds && conservative)
                        .then(|| "upper bound on the systole may be too large".into()),
                    conservative,
                    informational,
                    inputs_used: inputs.iter().map(|s| s.to_string()).collect(),
                }
            }
            (None, _, _) => InequalityEntry {
                id: id.into(),
                paper_ref: paper_ref.into(),
                lhs: None,
                rhs: None,
                margin: None,
                holds: false,
                status: EntryStatus::Indeterminate,
                reason: Some("systole search produced no candidate".into()),
                conservative,
                informational,
                inputs_used: inputs.iter().map(|s| s.to_string()).collect(),
            },
        };
        self.entries.push(entry);
    }
}

/// Run every inequality check against one metric.
pub fn verify(metric: &MetricModel, cfg: &VerifyConfig) -> Result<InequalityReport> {
    let metric = metric.validate()?;
    let bal = balance(&metric);
    let curv = curvature_stats(&metric);
    let a = area(&metric);
    let vol = 2.0 * std::f64::consts::PI * a;
    let diam = diameter(&metric, cfg.diameter_resolution);
    let lam = match lambda1(&metric, cfg.lambda1_band_limit) {
        Ok(v) => Some(v),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let systole: Option<SystoleEstimate> = match find_systole_upper(&metric, &cfg.systole) {
        Ok(est) => Some(est),
        Err(Error::SearchFailure { .. }) => None,
        Err(e) => return Err(e),
    };
    let l_up = systole.as_ref().map(|s| s.value);
    let l_sq = l_up.map(|v| v * v);

    let mut b = EntryBuilder {
        tolerance: cfg.tolerance,
        entries: Vec::new(),
    };
    let pi = std::f64::consts::PI;

    b.push_check(
        "action_circumradius",
        "minimal Reeb action vs circumradius of the cosphere bundle",
        l_up,
        Some(2.0 * pi * bal.circumradius),
        true,
        false,
        &["systole_upper", "circumradius"],
        None,
    );
    b.push_check(
        "action_volume",
        "squared minimal action vs contact volume over twice the balance",
        l_sq,
        Some(vol / (2.0 * bal.beta)),
        true,
        false,
        &["systole_upper", "area", "beta"],
        None,
    );
    b.push_check(
        "systole_area_balanced",
        "balanced systole-area bound, L^2 <= (pi/beta) Area",
        l_sq,
        Some(pi / bal.beta * a),
        true,
        false,
        &["systole_upper", "area", "beta"],
        None,
    );
    b.push_check(
        "systole_area_rotman",
        "Rotman's universal bound, L^2 <= 32 Area",
        l_sq,
        Some(32.0 * a),
        true,
        false,
        &["systole_upper", "area"],
        None,
    );
    b.push_check(
        "hersch_eigenvalue",
        "Hersch's bound, lambda_1 <= 8 pi / Area",
        lam,
        Some(8.0 * pi / a),
        false,
        false,
        &["lambda1", "area"],
        lam.is_none()
            .then(|| "lambda_1 unavailable for this metric variant".into()),
    );
    b.push_check(
        "systole_eigenvalue",
        "balanced systole-eigenvalue bound, L^2 <= 8 pi^2 / (beta lambda_1)",
        l_sq,
        lam.map(|lm| 8.0 * pi * pi / (bal.beta * lm)),
        true,
        false,
        &["systole_upper", "beta", "lambda1"],
        lam.is_none()
            .then(|| "lambda_1 unavailable for this metric variant".into()),
    );

    let nonneg = curv.k_min >= 0.0;
    let curvature_skip = || {
        (!nonneg).then(|| {
            format!(
                "requires nonnegative curvature, found K_min = {:.6}",
                curv.k_min
            )
        })
    };
    b.push_check(
        "calabi_cao_area_diameter",
        "Calabi-Cao bound, Area <= (8/pi) D^2 for nonnegative curvature",
        Some(a),
        Some(8.0 / pi * diam.value * diam.value),
        false,
        false,
        &["area", "diameter"],
        curvature_skip(),
    );
    b.push_check(
        "systole_diameter_balanced",
        "balanced systole-diameter bound, L <= (2 sqrt2 / sqrt beta) D",
        l_up,
        Some(2.0 * 2.0f64.sqrt() / bal.beta.sqrt() * diam.value),
        true,
        false,
        &["systole_upper", "beta", "diameter"],
        curvature_skip(),
    );
    b.push_check(
        "systole_diameter_3d",
        "Adelstein-Bravo Pallete bound, L <= 3 D for nonnegative curvature",
        l_up,
        Some(3.0 * diam.value),
        true,
        false,
        &["systole_upper", "diameter"],
        curvature_skip(),
    );

    // sharp cited results, reported only in their pinching regime
    let sharp = sharp_pinching_threshold();
    let pinched_enough = matches!(curv.delta, Some(d) if d > sharp);
    let sharp_skip = || {
        (!pinched_enough).then(|| {
            format!(
                "reported only for pinching above (4 + sqrt 7)/8 ~ {:.3}, found {:?}",
                sharp, curv.delta
            )
        })
    };
    b.push_check(
        "sharp_systole_area",
        "sharp pinched systole-area bound, L^2 <= pi Area (cited result)",
        l_sq,
        Some(pi * a),
        true,
        true,
        &["systole_upper", "area"],
        sharp_skip(),
    );
    b.push_check(
        "sharp_systole_diameter",
        "sharp pinched systole-diameter bound, L <= (2/sqrt delta) D (cited result)",
        l_up,
        curv.delta.map(|d| 2.0 / d.sqrt() * diam.value),
        true,
        true,
        &["systole_upper", "delta", "diameter"],
        sharp_skip(),
    );

    let balanced_rhs = pi / bal.beta * a;
    let rotman_rhs = 32.0 * a;
    let beta_threshold = BetaThresholdRecord {
        beta: bal.beta,
        threshold: pi / 32.0,
        balanced_rhs,
        rotman_rhs,
        balanced_bound_finer: balanced_rhs < rotman_rhs,
    };

    let all_applicable_hold = b
        .entries
        .iter()
        .filter(|e| !e.informational && e.status != EntryStatus::Skipped)
        .all(|e| e.status == EntryStatus::Pass);

    Ok(InequalityReport {
        schema: SCHEMA.into(),
        metric_digest: metric.digest(),
        quantities: QuantityBlock {
            balance: bal,
            curvature: curv,
            area: a,
            volume_disk_bundle: vol,
            diameter: diam,
            lambda1: lam,
            systole_upper: l_up,
            systole_source: systole.as_ref().map(|s| s.source),
            systole_candidates: systole.as_ref().map_or(0, |s| s.candidates.len()),
        },
        entries: b.entries,
        beta_threshold,
        all_applicable_hold,
    })
}

/// Pinching-to-balance comparison for antipodally symmetric pinched metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaDeltaRecord {
    pub delta: f64,
    pub beta_actual: f64,
    pub beta_bound: f64,
    pub bound_holds: bool,
}

/// Compare the actual balance against the closed-form bound from the
/// pinching ratio. Errors when the metric is not antipodally symmetric or
/// not positively pinched.
pub fn compare_beta_delta(metric: &MetricModel) -> Result<BetaDeltaRecord> {
    if !metric.is_antipodal(1e-12) {
        return Err(Error::Domain(
            "the pinching-to-balance bound needs antipodal symmetry".into(),
        ));
    }
    let curv = curvature_stats(metric);
    let delta = curv.delta.ok_or_else(|| {
        Error::Domain(format!(
            "the pinching-to-balance bound needs positive curvature, found K_min = {:.6}",
            curv.k_min
        ))
    })?;
    let beta_actual = balance(metric).beta;
    let beta_bound = beta_delta_bound(delta)?;
    Ok(BetaDeltaRecord {
        delta,
        beta_actual,
        beta_bound,
        bound_holds: beta_actual > beta_bound,
    })
}
