//! Component-count series over a range of branch-point numbers, with
//! observational periodicity detection.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::PermGroup;
use crate::nielsen::{Budget, EnumerationSpec};
use crate::orbit::decompose_components;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectedPeriod {
    pub period: u32,
    pub onset: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountSeries {
    pub group: String,
    pub spec: EnumerationSpec,
    pub points: BTreeMap<u32, u64>,
    /// Smallest (period, onset) consistent with the recorded range; this is
    /// an observation within the range, never a proof.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detected_period: Option<DetectedPeriod>,
    /// Set when a budget was exhausted at some r; counts stop before it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated_at: Option<u32>,
}

impl CountSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,count\n");
        for (r, count) in &self.points {
            out.push_str(&format!("{r},{count}\n"));
        }
        match self.detected_period {
            Some(p) => out.push_str(&format!(
                "# period {} from r = {} (observed within range, not proven)\n",
                p.period, p.onset
            )),
            None => out.push_str("# no period observed within range\n"),
        }
        if let Some(r) = self.truncated_at {
            out.push_str(&format!("# truncated: budget exceeded at r = {r}\n"));
        }
        out
    }
}

/// Component counts for each r in the range. On a budget overrun the series
/// is truncated at the offending r and flagged, and the budget error is
/// returned alongside.
pub fn count_series(
    group: &Arc<PermGroup>,
    spec: &EnumerationSpec,
    r_range: std::ops::RangeInclusive<u32>,
    budget: Budget,
) -> (CountSeries, Option<Error>) {
    let mut points = BTreeMap::new();
    let mut truncated_at = None;
    let mut err = None;
    for r in r_range {
        match decompose_components(group, r as usize, spec, budget) {
            Ok(comps) => {
                points.insert(r, comps.len() as u64);
            }
            Err(e @ Error::Budget { .. }) => {
                truncated_at = Some(r);
                err = Some(e);
                break;
            }
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    let detected_period = detect_period(&points);
    (
        CountSeries {
            group: group.name().to_string(),
            spec: spec.clone(),
            points,
            detected_period,
            truncated_at,
        },
        err,
    )
}

/// Smallest (u, R) with counts(r+u) = counts(r) for all recorded r >= R,
/// requiring at least 2u recorded points from the onset on.
pub fn detect_period(points: &BTreeMap<u32, u64>) -> Option<DetectedPeriod> {
    let rs: Vec<u32> = points.keys().copied().collect();
    if rs.is_empty() {
        return None;
    }
    let r_max = *rs.last().unwrap();
    for u in 1..=(rs.len() as u32 / 2) {
        // Minimal onset where the shift-by-u condition holds throughout.
        let mut onset: Option<u32> = None;
        for &r in rs.iter().rev() {
            let Some(&shifted) = points.get(&(r + u)) else {
                if r + u > r_max {
                    continue; // beyond the range: unconstrained
                }
                break;
            };
            if shifted == points[&r] {
                onset = Some(r);
            } else {
                break;
            }
        }
        if let Some(onset) = onset {
            let surviving = rs.iter().filter(|&&r| r >= onset).count() as u32;
            if surviving >= 2 * u {
                return Some(DetectedPeriod { period: u, onset });
            }
        }
    }
    None
}
