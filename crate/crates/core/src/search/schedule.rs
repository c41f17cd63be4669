use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::ratio::{fmt_rational, int};
use crate::Rational;

/// One order of a [`ThresholdSchedule`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleLevel {
    pub order: usize,
    #[serde(with = "crate::ratio::serde_rational")]
    pub exact: Rational,
    #[serde(with = "crate::ratio::serde_rational_opt")]
    pub override_value: Option<Rational>,
}

impl ScheduleLevel {
    /// The threshold actually compared against.
    pub fn threshold(&self) -> &Rational {
        self.override_value.as_ref().unwrap_or(&self.exact)
    }
}

/// Thresholds `t_r` for orders `r_lo..=r_hi` with `t_{r-1} = t_r (r-2)/r`
/// and `t_{r_hi}` equal to the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdSchedule {
    #[serde(with = "crate::ratio::serde_rational")]
    pub target: Rational,
    pub r_hi: usize,
    pub r_lo: usize,
    /// ascending by order
    pub levels: Vec<ScheduleLevel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleMode {
    Exact,
    /// Thresholds for the top orders, ascending; the last entry belongs to `r_hi`.
    Decimal(Vec<Rational>),
}

pub fn threshold_schedule(
    target: &Rational,
    r_hi: usize,
    r_lo: usize,
    mode: &ScheduleMode,
) -> Result<ThresholdSchedule, SearchError> {
    if r_lo < 3 || r_hi <= r_lo {
        return Err(SearchError::Schedule(format!("need 3 <= r_lo < r_hi, got r_lo = {r_lo}, r_hi = {r_hi}")));
    }
    if target.is_negative() {
        return Err(SearchError::Schedule("target must be nonnegative".into()));
    }
    let mut levels = Vec::with_capacity(r_hi - r_lo + 1);
    let mut t = target.clone();
    for r in (r_lo..=r_hi).rev() {
        levels.push(ScheduleLevel { order: r, exact: t.clone(), override_value: None });
        t = t * int(r as i64 - 2) / int(r as i64);
    }
    levels.reverse();
    let mut schedule = ThresholdSchedule { target: target.clone(), r_hi, r_lo, levels };
    if let ScheduleMode::Decimal(values) = mode {
        if values.len() > schedule.levels.len() {
            return Err(SearchError::Schedule(format!(
                "{} decimal thresholds for {} orders",
                values.len(),
                schedule.levels.len()
            )));
        }
        let first = r_hi + 1 - values.len();
        for (offset, value) in values.iter().enumerate() {
            schedule = schedule.with_override(first + offset, value.clone())?;
        }
    }
    Ok(schedule)
}

impl ThresholdSchedule {
    /// Replaces the threshold at `order`; the value may not undercut the exact chain.
    pub fn with_override(mut self, order: usize, value: Rational) -> Result<Self, SearchError> {
        let level = self
            .levels
            .iter_mut()
            .find(|l| l.order == order)
            .ok_or_else(|| SearchError::Schedule(format!("order {order} is outside the schedule")))?;
        if value < level.exact {
            return Err(SearchError::UnsoundThreshold {
                order,
                value: fmt_rational(&value),
                exact: fmt_rational(&level.exact),
            });
        }
        level.override_value = Some(value);
        Ok(self)
    }

    pub fn level(&self, order: usize) -> Option<&ScheduleLevel> {
        self.levels.iter().find(|l| l.order == order)
    }

    pub fn threshold(&self, order: usize) -> Option<&Rational> {
        self.level(order).map(ScheduleLevel::threshold)
    }
}

impl fmt::Display for ThresholdSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "target={}@{}", fmt_rational(&self.target), self.r_hi)?;
        for l in &self.levels {
            write!(f, ";{}:{}", l.order, fmt_rational(&l.exact))?;
            if let Some(o) = &l.override_value {
                write!(f, "~{}", fmt_rational(o))?;
            }
        }
        Ok(())
    }
}
