use modal_lca::mode::Component;
use modal_lca::scenario::{
    apply_scenario, breakeven_mileage, lifespan_asymptote, sweep, Axis, Breakeven, FreightFactors, FreightMode,
    ScenarioSpec, ShippingLeg, ShippingRoute,
};
use modal_lca::{Dataset, Error, Indicator, INDICATORS};
use proptest::prelude::*;

const SHARED: [&str; 3] = ["shared_bike", "shared_es", "shared_emoped"];
const PRIVATE: [&str; 4] = [
    "private_bike",
    "private_es_entry",
    "private_es_mid",
    "private_motorcycle",
];

/// GWP per pkt as reported for the shared modes.
const REPORTED_GWP: [f64; 3] = [3.29e-2, 6.10e-2, 3.40e-2];

fn bundled() -> Dataset {
    Dataset::load_bundled().unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn route(legs: &[(FreightMode, f64)]) -> ShippingRoute<f64> {
    ShippingRoute {
        route_id: "R".into(),
        market: "test".into(),
        label: "test".into(),
        legs: legs
            .iter()
            .map(|(m, d)| ShippingLeg {
                freight_mode: *m,
                distance_km: *d,
            })
            .collect(),
    }
}

#[test]
fn base_lifespan_reproduces_the_base_result() {
    let ds = bundled();
    for id in ds.mode_ids() {
        let ev = ds.evaluation(id).unwrap();
        let spec = ScenarioSpec::lifespan("base", ev.mode.vehicle.lifetime_km);
        let m = apply_scenario(&ev.mode, &spec, &ev.freight).unwrap();
        assert_eq!(m, ev.mode);
        assert_eq!(ev.context().assess(&m).unwrap(), ev.assess().unwrap());
    }
}

#[test]
fn servicing_axis_rejects_private_modes() {
    let ds = bundled();
    for id in PRIVATE {
        assert!(matches!(ds.levels(id, Axis::Servicing), Err(Error::InvalidScenario(_))));
        let ev = ds.evaluation(id).unwrap();
        let spec = ScenarioSpec::servicing("any", 10.0);
        assert!(matches!(
            apply_scenario(&ev.mode, &spec, &ev.freight),
            Err(Error::InvalidScenario(_))
        ));
    }
}

#[test]
fn invalid_levels_are_rejected() {
    let ds = bundled();
    let ev = ds.evaluation("shared_bike").unwrap();
    for spec in [
        ScenarioSpec::lifespan("zero", 0.0),
        ScenarioSpec::servicing("negative", -1.0),
        ScenarioSpec::shipping(route(&[])),
        ScenarioSpec::shipping(route(&[(FreightMode::Sea, -5.0)])),
    ] {
        assert!(
            matches!(
                apply_scenario(&ev.mode, &spec, &ev.freight),
                Err(Error::InvalidScenario(_))
            ),
            "{}",
            spec.label
        );
    }
    assert!(matches!(
        sweep(&ev.mode, &[], &ev.context()),
        Err(Error::InvalidScenario(_))
    ));
    let spec = ScenarioSpec::shipping(route(&[(FreightMode::Air, 100.0)]));
    assert!(matches!(
        apply_scenario(&ev.mode, &spec, &FreightFactors::new()),
        Err(Error::Configuration(_))
    ));
    let spec = ScenarioSpec::electricity("XX");
    let m = apply_scenario(&ev.mode, &spec, &ev.freight).unwrap();
    assert!(ev.context().assess(&m).is_err());
}

#[test]
fn longer_lifespans_lower_every_indicator() {
    let ds = bundled();
    for id in SHARED {
        let ev = ds.evaluation(id).unwrap();
        let levels = ds.levels(id, Axis::Lifespan).unwrap();
        let results = sweep(&ev.mode, &levels, &ev.context()).unwrap();
        assert_eq!(results.len(), 4);
        for pair in results.windows(2) {
            for k in INDICATORS {
                assert!(pair[1].total[k] < pair[0].total[k], "{id} {k}");
            }
        }
    }
}

#[test]
fn shared_es_servicing_range() {
    let ds = bundled();
    let ev = ds.evaluation("shared_es").unwrap();
    let results = sweep(
        &ev.mode,
        &ds.levels("shared_es", Axis::Servicing).unwrap(),
        &ev.context(),
    )
    .unwrap();
    let g: Vec<f64> = results.iter().map(|r| r.total[Indicator::Gwp100] * 1000.0).collect();
    assert!(close(g[0], 80.0, 0.1), "{g:?}");
    assert!(close(g[3], 58.0, 0.1), "{g:?}");
    assert!(g.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn breakeven_matches_reported_totals() {
    let ds = bundled();
    for (id, total) in SHARED.iter().zip(REPORTED_GWP) {
        let ev = ds.evaluation(id).unwrap();
        let share = ds
            .calibrated
            .entry(id, Indicator::Gwp100)
            .unwrap()
            .share(&Component::Vehicle)
            .unwrap();
        let per_vehicle = share * total * ev.mode.vehicle.lifetime_km;
        let oracle = per_vehicle / (0.2 - (1.0 - share) * total);
        match breakeven_mileage(&ev.mode, Indicator::Gwp100, 0.2, &ev.context()).unwrap() {
            Breakeven::Attained { lifetime_km, .. } => {
                assert!(close(lifetime_km, oracle, 0.03), "{id}: {lifetime_km} vs {oracle}")
            }
            other => panic!("{id}: {other:?}"),
        }
    }
}

#[test]
fn breakeven_below_the_fixed_part_is_unattainable() {
    let ds = bundled();
    let ev = ds.evaluation("shared_es").unwrap();
    match breakeven_mileage(&ev.mode, Indicator::Gwp100, 1e-3, &ev.context()).unwrap() {
        Breakeven::Unattainable { fixed_per_pkt, target } => {
            assert_eq!(target, 1e-3);
            assert!(fixed_per_pkt > target);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn lifespan_asymptotes() {
    let ds = bundled();
    for (id, expected) in SHARED.iter().zip([11.0, 15.0, 16.0]) {
        let ev = ds.evaluation(id).unwrap();
        let g = lifespan_asymptote(&ev.mode, Indicator::Gwp100, 200_000.0, &ev.context()).unwrap() * 1000.0;
        assert!((g - expected).abs() <= 0.5, "{id}: {g}");
    }
}

#[test]
fn eu_rail_route_totals() {
    let ds = bundled();
    let r = ds.shipping_route("UE2").unwrap().route();
    assert!(close(r.total_km(), 9400.0, 1e-12));
    let rail: f64 = r
        .legs
        .iter()
        .filter(|l| matches!(l.freight_mode, FreightMode::RailDiesel | FreightMode::RailElectric))
        .map(|l| l.distance_km)
        .sum();
    assert!(close(rail, 8400.0, 1e-12));
}

#[test]
fn every_named_level_evaluates() {
    let ds = bundled();
    for id in ds.mode_ids() {
        let ev = ds.evaluation(id).unwrap();
        for axis in [Axis::Lifespan, Axis::Servicing, Axis::Shipping, Axis::Electricity] {
            let Ok(levels) = ds.levels(id, axis) else {
                assert!(
                    PRIVATE.contains(&id) && matches!(axis, Axis::Servicing | Axis::Lifespan),
                    "{id} {axis}"
                );
                continue;
            };
            for r in sweep(&ev.mode, &levels, &ev.context()).unwrap() {
                assert!(r.total.is_finite(), "{id} {axis}");
            }
        }
    }
}

fn pick_mode() -> impl Strategy<Value = &'static str> {
    prop::sample::select(SHARED.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifespan_touches_only_the_vehicle_term(id in pick_mode(), km in 100.0f64..300_000.0) {
        let ds = bundled();
        let ev = ds.evaluation(id).unwrap();
        let base = ev.assess().unwrap();
        let m = apply_scenario(&ev.mode, &ScenarioSpec::lifespan("x", km), &ev.freight).unwrap();
        let r = ev.context().assess(&m).unwrap();
        prop_assert_eq!(r.use_stage, base.use_stage);
        prop_assert_eq!(r.servicing, base.servicing);
        prop_assert_eq!(&r.infrastructure, &base.infrastructure);
        for k in INDICATORS {
            prop_assert!(close(r.vehicle[k] * km, base.vehicle[k] * ev.mode.vehicle.lifetime_km, 1e-12));
        }
    }

    #[test]
    fn servicing_touches_only_servicing_and_is_affine(id in pick_mode(), a in 0.0f64..200.0, b in 0.0f64..200.0) {
        let ds = bundled();
        let ev = ds.evaluation(id).unwrap();
        let base = ev.assess().unwrap();
        let at = |d: f64| {
            let m = apply_scenario(&ev.mode, &ScenarioSpec::servicing("x", d), &ev.freight).unwrap();
            ev.context().assess(&m).unwrap()
        };
        let (ra, rb, rab, r0) = (at(a), at(b), at(a + b), at(0.0));
        prop_assert_eq!(ra.vehicle, base.vehicle);
        prop_assert_eq!(ra.use_stage, base.use_stage);
        prop_assert_eq!(&ra.infrastructure, &base.infrastructure);
        for k in INDICATORS {
            let lhs = ra.total[k] + rb.total[k];
            let rhs = rab.total[k] + r0.total[k];
            prop_assert!(close(lhs, rhs, 1e-12), "{} {}", lhs, rhs);
        }
    }

    #[test]
    fn shipping_adds_a_term_linear_in_distance(
        id in pick_mode(),
        legs in prop::collection::vec((prop::sample::select(FreightMode::ALL.to_vec()), 1.0f64..20_000.0), 1..5),
        factor in 0.1f64..10.0,
    ) {
        let ds = bundled();
        let ev = ds.evaluation(id).unwrap();
        let base = ev.assess().unwrap();
        let scaled: Vec<(FreightMode, f64)> = legs.iter().map(|(m, d)| (*m, d * factor)).collect();
        let extra = |legs: &[(FreightMode, f64)]| {
            let m = apply_scenario(&ev.mode, &ScenarioSpec::shipping(route(legs)), &ev.freight).unwrap();
            let r = ev.context().assess(&m).unwrap();
            assert_eq!(r.use_stage, base.use_stage);
            assert_eq!(r.servicing, base.servicing);
            r.total - base.total
        };
        let (one, many) = (extra(&legs), extra(&scaled));
        for k in INDICATORS {
            prop_assert!(one[k] >= 0.0);
            prop_assert!(close(many[k], one[k] * factor, 1e-9), "{} vs {}", many[k], one[k] * factor);
        }
    }

    #[test]
    fn breakeven_lifetime_hits_the_target(id in pick_mode(), k in prop::sample::select(INDICATORS.to_vec()), over in 0.05f64..20.0) {
        let ds = bundled();
        let ev = ds.evaluation(id).unwrap();
        let r = ev.assess().unwrap();
        let target = (r.total[k] - r.vehicle[k]) + r.vehicle[k] * over;
        match breakeven_mileage(&ev.mode, k, target, &ev.context()).unwrap() {
            Breakeven::Attained { lifetime_km, .. } => {
                let got = lifespan_asymptote(&ev.mode, k, lifetime_km, &ev.context()).unwrap();
                prop_assert!(close(got, target, 1e-9), "{} vs {}", got, target);
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn sweep_keeps_input_order(id in pick_mode(), kms in prop::collection::vec(500.0f64..100_000.0, 1..12)) {
        let ds = bundled();
        let ev = ds.evaluation(id).unwrap();
        let levels: Vec<ScenarioSpec<f64>> = kms.iter().enumerate().map(|(i, km)| ScenarioSpec::lifespan(format!("l{i}"), *km)).collect();
        let results = sweep(&ev.mode, &levels, &ev.context()).unwrap();
        prop_assert_eq!(&results, &sweep(&ev.mode, &levels, &ev.context()).unwrap());
        for (spec, r) in levels.iter().zip(&results) {
            prop_assert_eq!(r.scenario.as_deref(), Some(spec.label.as_str()));
            let single = ev.context().assess(&apply_scenario(&ev.mode, spec, &ev.freight).unwrap()).unwrap();
            prop_assert_eq!(r.total, single.total);
        }
    }
}
