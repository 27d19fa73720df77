use hrbounds::distributions::Family;
use hrbounds::experiment::{preset, BoundChoice, ExperimentConfig, PRESETS};
use hrbounds::shape::{ScaleFunction, ShapeFunction, WeightSequence};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Rademacher),
        (-2.0..2.0f64, 0.1..3.0f64).prop_map(|(mu, sigma)| Family::Gaussian { mu, sigma }),
        (0.1..5.0f64).prop_map(|lambda| Family::CenteredExponential { lambda }),
        (0.3..2.0f64, -1.0..1.0f64, 0.1..4.0f64).prop_map(|(alpha, beta, scale)| Family::AlphaStable {
            alpha,
            beta,
            scale
        }),
        (-3.0..3.0f64).prop_map(|c| Family::PointMass { c }),
    ]
}

proptest! {
    #[test]
    fn toml_and_json_round_trip(
        fam in family(),
        n in 1usize..500,
        nu in 1.0..4.0f64,
        eps in 0.01..100.0f64,
        rho in 0.5..3.0f64,
        beta in 0.0..2.0f64,
        seed in any::<u64>(),
        epsilons in proptest::collection::vec(0.1..20.0f64, 0..4),
        power_chi in any::<bool>(),
    ) {
        let mut c = preset("rademacher-n2-eps10").unwrap();
        c.sequence.family = fam;
        c.sequence.n = n;
        c.phi = ShapeFunction::AbsPower { nu };
        c.chi = if power_chi { ScaleFunction::Power { epsilon: eps, rho } } else { ScaleFunction::Linear { epsilon: eps } };
        c.weights = WeightSequence::Power { beta };
        c.master_seed = seed;
        c.verify.epsilons = epsilons;
        c.bound.kinds = vec![BoundChoice::Theorem1, BoundChoice::Amini];
        let text = c.to_toml().unwrap();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_toml().unwrap(), text);
        let json = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(ExperimentConfig::from_json(&json).unwrap(), c);
    }
}

#[test]
fn presets_load_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    for name in PRESETS {
        let c = preset(name).unwrap();
        let toml_path = dir.path().join(format!("{name}.toml"));
        std::fs::write(&toml_path, c.to_toml().unwrap()).unwrap();
        assert_eq!(ExperimentConfig::load(&toml_path).unwrap(), c);
        let json_path = dir.path().join(format!("{name}.json"));
        std::fs::write(&json_path, serde_json::to_string_pretty(&c).unwrap()).unwrap();
        assert_eq!(ExperimentConfig::load(&json_path).unwrap(), c);
    }
}

#[test]
fn invalid_sub_specs_rejected_on_load() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = preset("rademacher-oracle").unwrap();
    c.phi = ShapeFunction::AbsPower { nu: 0.5 };
    let path = dir.path().join("c.toml");
    std::fs::write(&path, c.to_toml().unwrap()).unwrap();
    let err = ExperimentConfig::load(&path).unwrap_err();
    assert_eq!(err.kind(), "parameter_domain");
}
