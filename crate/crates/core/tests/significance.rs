mod common;

use common::random_dataset;
use ordeval::dataset::{generate_synthetic, PlantedAttribute, PlantedKind, SyntheticSpec};
use ordeval::kano::{classify_attribute, kano_report, KanoLabel};
use ordeval::ordeval::{reinforcement_profile, OrdEvalParams};
use ordeval::significance::{
    nearest_rank, null_distribution, significance_flags, ConfidenceBox, SignificanceParams,
};
use proptest::prelude::*;

#[test]
fn nearest_rank_percentiles() {
    let s: Vec<f64> = (1..=200).map(|i| i as f64).collect();
    assert_eq!(nearest_rank(&s, 0.025), 5.0);
    assert_eq!(nearest_rank(&s, 0.975), 195.0);
    assert_eq!(nearest_rank(&s, 0.5), 100.0);
    assert_eq!(nearest_rank(&s, 0.0), 1.0);
    assert_eq!(nearest_rank(&[7.0], 0.975), 7.0);
}

#[test]
fn same_seed_same_null_different_seed_different_null() {
    let ds = random_dataset(3, 40, 3, 0.05);
    let op = OrdEvalParams::default();
    let a = null_distribution(&ds, &op, &SignificanceParams::new(9)).unwrap();
    let b = null_distribution(&ds, &op, &SignificanceParams::new(9)).unwrap();
    let c = null_distribution(&ds, &op, &SignificanceParams::new(10)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn invalid_params_are_rejected() {
    let ds = random_dataset(1, 10, 1, 0.0);
    let op = OrdEvalParams::default();
    let mut sp = SignificanceParams::new(0);
    sp.resamples = 5;
    assert!(null_distribution(&ds, &op, &sp).is_err());
    sp.resamples = 50;
    sp.alpha = 0.7;
    assert!(null_distribution(&ds, &op, &sp).is_err());
}

#[test]
fn strong_monotone_attribute_is_flagged() {
    let attrs = vec![
        PlantedAttribute::new("p", PlantedKind::Performance, 3),
        PlantedAttribute::new("z", PlantedKind::Noise, 3),
    ];
    let ds = generate_synthetic(&SyntheticSpec::new(150, attrs, 0.05), 21).unwrap();
    let op = OrdEvalParams::default();
    let profile = reinforcement_profile(&ds, &op).unwrap();
    let null = null_distribution(&ds, &op, &SignificanceParams::new(2)).unwrap();
    let flags = significance_flags(&profile, &null).unwrap();
    assert!(flags.attributes[0].up_aggregate && flags.attributes[0].down_aggregate);
    let kano = kano_report(&profile, &flags, 0.6).unwrap();
    assert_eq!(kano.attributes[1].label, KanoLabel::Negligible);
}

#[test]
fn kano_rule_table() {
    assert_eq!(classify_attribute(Some(0.8), Some(0.7), 0.6), KanoLabel::Performance);
    assert_eq!(classify_attribute(Some(0.3), Some(0.7), 0.6), KanoLabel::Basic);
    assert_eq!(classify_attribute(Some(0.8), Some(0.2), 0.6), KanoLabel::Excitement);
    assert_eq!(classify_attribute(Some(0.5), Some(0.5), 0.6), KanoLabel::Negligible);
    assert_eq!(classify_attribute(Some(0.6), Some(0.6), 0.6), KanoLabel::Performance);
    assert_eq!(classify_attribute(None, Some(0.9), 0.6), KanoLabel::Basic);
    assert_eq!(classify_attribute(None, None, 0.6), KanoLabel::Negligible);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boxes_are_ordered(samples in prop::collection::vec(0.0f64..=1.0, 1..300), alpha in 0.001f64..0.499) {
        let b = ConfidenceBox::from_samples(&samples, alpha).unwrap();
        prop_assert!(b.is_ordered());
        prop_assert_eq!(b.sample_count, samples.len());
    }

    #[test]
    fn null_boxes_are_ordered(seed in any::<u64>(), n in 2usize..=20) {
        let ds = random_dataset(seed, n, 2, 0.1);
        let mut sp = SignificanceParams::new(seed);
        sp.resamples = 30;
        let nd = null_distribution(&ds, &OrdEvalParams::default(), &sp).unwrap();
        for a in &nd.attributes {
            for c in a.up.iter().chain(&a.down).chain([&a.up_aggregate, &a.down_aggregate]) {
                prop_assert_eq!(c.resamples, 30);
                prop_assert_eq!(c.confidence.is_some(), !c.samples.is_empty());
                if let Some(b) = &c.confidence {
                    prop_assert!(b.is_ordered());
                }
                prop_assert_eq!(c.unassessable, 2 * (30 - c.samples.len()) >= 30);
            }
        }
    }

    #[test]
    fn significance_is_one_sided(seed in any::<u64>()) {
        let ds = random_dataset(seed, 25, 2, 0.0);
        let op = OrdEvalParams::default();
        let profile = reinforcement_profile(&ds, &op).unwrap();
        let mut sp = SignificanceParams::new(seed);
        sp.resamples = 40;
        let nd = null_distribution(&ds, &op, &sp).unwrap();
        let flags = significance_flags(&profile, &nd).unwrap();
        for ((p, n), f) in profile.attributes.iter().zip(&nd.attributes).zip(&flags.attributes) {
            for o in 0..p.up.len() {
                if f.up[o] {
                    prop_assert!(p.up[o].probability().unwrap() > n.up[o].confidence.unwrap().whisker_high);
                    prop_assert!(!n.up[o].unassessable);
                }
            }
        }
    }
}
