use algofit_core::engine::{complement, fuzzy_leq, fuzzy_leq_thirds};
use algofit_core::{Level, LinguisticValue, Scale};

fn canon(l: Level) -> LinguisticValue {
    LinguisticValue::canonical(l).unwrap()
}

const WORKED: [(Level, Level, u8); 9] = [
    (Level::Low, Level::Low, 3),
    (Level::Low, Level::Medium, 3),
    (Level::Low, Level::High, 3),
    (Level::Medium, Level::Low, 2),
    (Level::High, Level::Medium, 2),
    (Level::VeryHigh, Level::High, 2),
    (Level::High, Level::Low, 1),
    (Level::VeryHigh, Level::Medium, 1),
    (Level::VeryHigh, Level::Low, 0),
];

#[test]
fn worked_values_exact() {
    for (a, b, thirds) in WORKED {
        let (ra, rb) = (canon(a).rank(), canon(b).rank());
        assert_eq!(fuzzy_leq_thirds(ra, rb), thirds, "{a} <= {b}");
        let f = fuzzy_leq(&canon(a), &canon(b)).unwrap();
        assert!(
            (f - f64::from(thirds) / 3.0).abs() <= 1e-15,
            "{a} <= {b}: {f}"
        );
    }
}

#[test]
fn complement_values_and_involution() {
    assert_eq!(
        complement(&canon(Level::Low)).unwrap().level(),
        Level::VeryHigh
    );
    assert_eq!(
        complement(&canon(Level::High)).unwrap().level(),
        Level::Medium
    );
    for l in Scale::Canonical.levels() {
        let v = canon(*l);
        assert_eq!(complement(&complement(&v).unwrap()).unwrap(), v);
    }
}

#[test]
fn complement_needs_canonical_scale() {
    let v = LinguisticValue::new(Scale::NoneBased, Level::None).unwrap();
    assert!(complement(&v).is_err());
}

#[test]
fn three_level_embeds_by_label() {
    let high3 = LinguisticValue::new(Scale::ThreeLevel, Level::High).unwrap();
    assert_eq!(fuzzy_leq(&high3, &canon(Level::Medium)).unwrap(), 2.0 / 3.0);
    assert_eq!(
        fuzzy_leq(&canon(Level::VeryHigh), &high3).unwrap(),
        2.0 / 3.0
    );
    let partial = LinguisticValue::new(Scale::Parallelism, Level::Partial).unwrap();
    assert!(fuzzy_leq(&partial, &canon(Level::Low)).is_err());
}
