use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::catalog::{grade_weight, Level, WeightGrade};
use crate::problem::CareLevel;

use super::EngineError;

/// Bucketing thresholds shared by the scorer and the profiler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Thresholds {
    /// Upper bounds (inclusive, ms) of the Low, Medium and High response-time
    /// buckets; anything slower is Very High.
    pub decision_speed_ms: [f64; 3],
    /// Row counts: below the first is Low, up to the second is Medium.
    pub volume_rows: [u64; 2],
    /// Null fractions: zero is None, below the first is Low, below the
    /// second Medium, else High.
    pub missing_fraction: [f64; 2],
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            decision_speed_ms: [10.0, 100.0, 1000.0],
            volume_rows: [1_000, 100_000],
            missing_fraction: [0.05, 0.20],
        }
    }
}

impl Thresholds {
    pub fn decision_speed_bucket(&self, millis: f64) -> Level {
        let [low, medium, high] = self.decision_speed_ms;
        if millis <= low {
            Level::Low
        } else if millis <= medium {
            Level::Medium
        } else if millis <= high {
            Level::High
        } else {
            Level::VeryHigh
        }
    }

    pub fn volume_bucket(&self, rows: u64) -> Level {
        let [low, medium] = self.volume_rows;
        if rows < low {
            Level::Low
        } else if rows <= medium {
            Level::Medium
        } else {
            Level::High
        }
    }

    pub fn missing_level(&self, null_fraction: f64) -> Level {
        let [low, medium] = self.missing_fraction;
        if null_fraction <= 0.0 {
            Level::None
        } else if null_fraction < low {
            Level::Low
        } else if null_fraction < medium {
            Level::Medium
        } else {
            Level::High
        }
    }

    fn validate(&self) -> Result<(), String> {
        let d = self.decision_speed_ms;
        if !(d[0] < d[1] && d[1] < d[2]) {
            return Err("decision speed thresholds must increase".into());
        }
        if self.volume_rows[0] >= self.volume_rows[1] {
            return Err("volume thresholds must increase".into());
        }
        let m = self.missing_fraction;
        if !(0.0 < m[0] && m[0] < m[1]) {
            return Err("missing-value thresholds must increase".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Equal scores are ordered by ascending family id.
    #[default]
    FamilyId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EngineConfig {
    /// Numeric weight per grade, indexed in `WeightGrade::ALL` order.
    pub grade_weights: [f64; 6],
    /// Numeric care per level, indexed in `CareLevel::ALL` order.
    pub care_numerics: [f64; 4],
    pub thresholds: Thresholds,
    pub tie_break: TieBreak,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            grade_weights: WeightGrade::ALL.map(grade_weight),
            care_numerics: CareLevel::ALL.map(CareLevel::numeric),
            thresholds: Thresholds::default(),
            tie_break: TieBreak::FamilyId,
        }
    }
}

impl EngineConfig {
    pub fn weight(&self, g: WeightGrade) -> f64 {
        self.grade_weights[g as usize]
    }

    pub fn care(&self, c: CareLevel) -> f64 {
        self.care_numerics[c as usize]
    }

    /// Copy with every grade weight multiplied by `k`.
    pub fn scaled(&self, k: f64) -> EngineConfig {
        EngineConfig {
            grade_weights: self.grade_weights.map(|w| w * k),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let invalid = |m: String| Err(EngineError::InvalidConfig(m));
        if self
            .grade_weights
            .iter()
            .any(|w| !(w.is_finite() && *w > 0.0))
        {
            return invalid("grade weights must be positive".into());
        }
        if self
            .grade_weights
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Greater))
        {
            return invalid("grade weights must decrease from A to D".into());
        }
        if self.care_numerics[0] != 0.0
            || self
                .care_numerics
                .windows(2)
                .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
            || self.care_numerics[3] > 1.0
        {
            return invalid("care numerics must increase from 0 to at most 1".into());
        }
        self.thresholds
            .validate()
            .map_err(EngineError::InvalidConfig)
    }
}
