//! Graded comparison of linguistic values.

use crate::catalog::{Level, LinguisticValue, Scale};

use super::EngineError;

/// `≤fuzzy` on ranks, as a count of thirds in `0..=3`.
pub fn fuzzy_leq_thirds(rank1: u8, rank2: u8) -> u8 {
    (3 + i16::from(rank2) - i16::from(rank1)).clamp(0, 3) as u8
}

/// Scale both values are compared on. Three-level values embed by label
/// into whichever scale the other side uses.
fn common_scale(a: Scale, b: Scale) -> Option<Scale> {
    match (a, b) {
        _ if a == b => Some(a),
        (Scale::Parallelism, _) | (_, Scale::Parallelism) => None,
        (Scale::ThreeLevel, other) | (other, Scale::ThreeLevel) => Some(other),
        _ => None,
    }
}

/// Extent to which `v1` is at most `v2`: `min(1, 1 - (rank(v1) - rank(v2)) / 3)`,
/// never below 0.
pub fn fuzzy_leq(v1: &LinguisticValue, v2: &LinguisticValue) -> Result<f64, EngineError> {
    let scale = common_scale(v1.scale(), v2.scale()).ok_or(EngineError::IncompatibleScales {
        left: v1.scale(),
        right: v2.scale(),
    })?;
    let r1 = scale
        .rank_of(v1.level())
        .expect("label embeds in common scale");
    let r2 = scale
        .rank_of(v2.level())
        .expect("label embeds in common scale");
    Ok(f64::from(fuzzy_leq_thirds(r1, r2)) / 3.0)
}

/// Value with rank `5 - rank(v)` on the canonical scale.
pub fn complement(v: &LinguisticValue) -> Result<LinguisticValue, EngineError> {
    if v.scale() != Scale::Canonical {
        return Err(EngineError::NotCanonical(v.scale()));
    }
    let level = Scale::Canonical
        .level_at(5 - v.rank())
        .expect("rank within 1..=4");
    Ok(LinguisticValue::canonical(level).expect("canonical label"))
}

/// Re-reads a value by rank on the canonical scale (None/Partial/High
/// become Low/Medium/High).
pub fn canonical_by_rank(v: &LinguisticValue) -> LinguisticValue {
    let level = Scale::Canonical
        .level_at(v.rank())
        .unwrap_or(Level::VeryHigh);
    LinguisticValue::canonical(level).expect("canonical label")
}

/// Position of `v` on its scale mapped linearly onto `[0, 1]`.
pub fn normalized(v: &LinguisticValue) -> f64 {
    f64::from(v.rank() - 1) / f64::from(v.scale().level_count() - 1)
}
