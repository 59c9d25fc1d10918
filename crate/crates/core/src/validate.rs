//! Golden-number checks on a loaded dataset, as run by the `validate`
//! command.

use std::collections::BTreeMap;

use crate::dataset::{correct_tailpipe, derive_servicing_distance, es_pickup_distance, shared_bike_lifetime, Dataset};
use crate::impact::{Indicator, INDICATORS};
use crate::lci::FlowId;
use crate::report::rank_values;
use crate::scenario::{apply_scenario, breakeven_mileage, lifespan_asymptote, sweep, Axis, Breakeven, ScenarioSpec};
use crate::{Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(criterion: u8, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            criterion,
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

pub const SHARED_MODES: [&str; 3] = ["shared_bike", "shared_es", "shared_emoped"];

/// Use and servicing shares (%) with the Chinese mix, per indicator.
pub const CN_SHARES: [(&str, [(f64, f64); 5]); 2] = [
    (
        "shared_es",
        [
            (22.47, 18.64),
            (15.60, 17.23),
            (11.34, 17.18),
            (8.03, 22.75),
            (17.43, 16.68),
        ],
    ),
    (
        "shared_emoped",
        [
            (52.07, 10.66),
            (34.60, 9.36),
            (23.01, 7.81),
            (11.74, 7.65),
            (41.12, 9.60),
        ],
    ),
];

type CheckGroup<T> = fn(&Dataset<T>, &mut Vec<Check>) -> Result<()>;

/// Runs every golden check. Errors while computing a check are reported as
/// failures of that check.
pub fn golden_checks<T: Scalar>(ds: &Dataset<T>) -> Vec<Check> {
    let mut out = Vec::new();
    let groups: [(u8, CheckGroup<T>); 11] = [
        (1, allocation),
        (2, recomposition),
        (3, lifetimes),
        (4, asymptote),
        (5, breakeven),
        (6, servicing),
        (7, shipping),
        (8, electricity),
        (9, derivations),
        (10, tailpipe),
        (12, ranking),
    ];
    for (criterion, f) in groups {
        if let Err(e) = f(ds, &mut out) {
            out.push(Check::new(criterion, "computation", false, e.to_string()));
        }
    }
    out
}

fn allocation<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    for (asset, expected) in [("pavement", 4.39e-10), ("cycle_lane", 1.73e-9)] {
        let f = 1.0 / ds.asset_vkt(asset)?.to_f64_lossy();
        out.push(Check::new(
            1,
            format!("{asset} allocation factor"),
            rel(f, expected) <= 0.01,
            format!("{f:.4e} vs {expected:e}"),
        ));
    }
    Ok(())
}

fn recomposition<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    for id in ds.mode_ids() {
        let r = ds.assess(id)?;
        let reported = ds.calibrated.totals(id).unwrap_or(r.total);
        let worst = INDICATORS
            .iter()
            .map(|k| rel(r.total[*k].to_f64_lossy(), reported[*k].to_f64_lossy()))
            .fold(0.0, f64::max);
        out.push(Check::new(
            2,
            format!("{id} recomposes to reported totals"),
            worst <= 0.02,
            format!("max deviation {:.3}%", worst * 100.0),
        ));
    }
    Ok(())
}

fn lifetimes<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    let p = &ds.parameters.shared_bike_lifetime;
    let sb = shared_bike_lifetime(
        T::lit(p.contract_months),
        T::lit(p.bikes_manufactured),
        T::lit(p.bikes_operated),
        T::lit(p.annual_km),
    )?;
    let l = sb.lifetime_km_rounded.to_f64_lossy();
    out.push(Check::new(
        3,
        "shared bike lifetime",
        (l - 12250.0).abs() < 1e-6 * 12250.0,
        format!("{l} km"),
    ));
    let pb = ds.private_bike_lifetime()?;
    let age = pb.mean_age_years.to_f64_lossy();
    let km = pb.annual_km.to_f64_lossy();
    let (lo, hi) = (pb.lifetime_km_rounded.to_f64_lossy(), pb.lifetime_km.to_f64_lossy());
    out.push(Check::new(
        3,
        "private bike mean age",
        (age * 10.0).round() == 54.0,
        format!("{age:.4} yr"),
    ));
    out.push(Check::new(
        3,
        "private bike annual distance",
        km.round() == 1854.0,
        format!("{km:.2} km/yr"),
    ));
    let ok = [lo, hi].iter().all(|v| (20023.0..=20075.0).contains(v));
    out.push(Check::new(
        3,
        "private bike lifetime",
        ok,
        format!("{lo:.1} (rounded inputs) / {hi:.1} (unrounded) km"),
    ));
    Ok(())
}

fn asymptote<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    for (id, expected) in SHARED_MODES.iter().zip([11.0, 15.0, 16.0]) {
        let ev = ds.evaluation(id)?;
        let g =
            lifespan_asymptote(&ev.mode, Indicator::Gwp100, T::lit(200_000.0), &ev.context())?.to_f64_lossy() * 1000.0;
        out.push(Check::new(
            4,
            format!("{id} GWP at 200 000 km"),
            (g - expected).abs() <= 0.5,
            format!("{g:.2} g vs {expected} g"),
        ));
    }
    Ok(())
}

fn breakeven<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    for (id, expected) in SHARED_MODES.iter().zip([1500.0, 1800.0, 6000.0]) {
        let ev = ds.evaluation(id)?;
        let (ok, detail) = match breakeven_mileage(&ev.mode, Indicator::Gwp100, T::lit(0.2), &ev.context())? {
            Breakeven::Attained { lifetime_km, .. } => {
                let l = lifetime_km.to_f64_lossy();
                (rel(l, expected) <= 0.1, format!("{l:.0} km vs {expected} km"))
            }
            Breakeven::Unattainable { fixed_per_pkt, .. } => {
                (false, format!("unattainable, fixed part {fixed_per_pkt}"))
            }
        };
        out.push(Check::new(5, format!("{id} break-even against 200 g"), ok, detail));
    }
    Ok(())
}

fn servicing<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    let ev = ds.evaluation("shared_es")?;
    let levels = ds.levels("shared_es", Axis::Servicing)?;
    let results = sweep(&ev.mode, &levels, &ev.context())?;
    let g = |i: usize| results[i].total[Indicator::Gwp100].to_f64_lossy() * 1000.0;
    let (hi, lo) = (g(0), g(results.len() - 1));
    out.push(Check::new(
        6,
        "shared e-scooter servicing worst case",
        rel(hi, 80.0) <= 0.1,
        format!("{hi:.2} g vs 80 g"),
    ));
    out.push(Check::new(
        6,
        "shared e-scooter servicing optimistic",
        rel(lo, 58.0) <= 0.1,
        format!("{lo:.2} g vs 58 g"),
    ));
    for (id, tol) in [("shared_bike", 0.10), ("shared_emoped", 0.15)] {
        let ev = ds.evaluation(id)?;
        let base = ev.assess()?.total[Indicator::Gwp100].to_f64_lossy();
        let results = sweep(&ev.mode, &ds.levels(id, Axis::Servicing)?, &ev.context())?;
        let dev = results
            .iter()
            .map(|r| rel(r.total[Indicator::Gwp100].to_f64_lossy(), base))
            .fold(0.0, f64::max);
        out.push(Check::new(
            6,
            format!("{id} servicing span"),
            dev <= tol,
            format!("max {:.1}% vs {:.0}%", dev * 100.0, tol * 100.0),
        ));
    }
    Ok(())
}

fn shipped_gwp<T: Scalar>(ds: &Dataset<T>, id: &str, route: &str) -> Result<f64> {
    let ev = ds.evaluation(id)?;
    let spec = ScenarioSpec::shipping(ds.shipping_route(route)?.route());
    let m = apply_scenario(&ev.mode, &spec, &ev.freight)?;
    Ok(ev.context().assess(&m)?.total[Indicator::Gwp100].to_f64_lossy())
}

fn shipping<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    for id in SHARED_MODES {
        let base = ds.assess(id)?.total[Indicator::Gwp100].to_f64_lossy();
        let ue1 = shipped_gwp(ds, id, "UE1")?;
        let (dg, dp) = ((ue1 - base) * 1000.0, (ue1 / base - 1.0) * 100.0);
        let ok = (0.65..=1.25).contains(&dg) && (1.5..=3.5).contains(&dp);
        out.push(Check::new(
            7,
            format!("{id} UE1 sea + road"),
            ok,
            format!("+{dg:.2} g, +{dp:.2}%"),
        ));
    }
    for (id, eu, us, tol) in [("shared_bike", 57.0, 69.0, 5.0), ("shared_emoped", 79.0, 96.0, 8.0)] {
        let e = (shipped_gwp(ds, id, "EU3")? / shipped_gwp(ds, id, "UE1")? - 1.0) * 100.0;
        let u = (shipped_gwp(ds, id, "US3")? / shipped_gwp(ds, id, "US1")? - 1.0) * 100.0;
        out.push(Check::new(
            7,
            format!("{id} EU3 air vs UE1"),
            (e - eu).abs() <= tol,
            format!("+{e:.1}% vs +{eu}%"),
        ));
        out.push(Check::new(
            7,
            format!("{id} US3 air vs US1"),
            (u - us).abs() <= tol,
            format!("+{u:.1}% vs +{us}%"),
        ));
    }
    Ok(())
}

fn electricity<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    let mut values: BTreeMap<&str, BTreeMap<String, f64>> = BTreeMap::new();
    for id in SHARED_MODES {
        let ev = ds.evaluation(id)?;
        let results = sweep(&ev.mode, &ds.levels(id, Axis::Electricity)?, &ev.context())?;
        values.insert(
            id,
            results
                .into_iter()
                .map(|r| {
                    (
                        r.scenario.unwrap_or_default(),
                        r.total[Indicator::Gwp100].to_f64_lossy() * 1000.0,
                    )
                })
                .collect(),
        );
    }
    let bike = &values["shared_bike"];
    let worst = bike.values().map(|v| rel(*v, 34.5)).fold(0.0, f64::max);
    out.push(Check::new(
        8,
        "shared bike across all mixes",
        worst <= 0.05 && bike.len() == 12,
        format!("{} mixes, max deviation {:.2}%", bike.len(), worst * 100.0),
    ));
    for (id, low_mixes, low, cn) in [
        ("shared_es", &["NO", "DK", "FR"][..], 60.0, 92.0),
        ("shared_emoped", &["NO", "DK"][..], 32.0, 78.0),
    ] {
        let v = &values[id];
        for mix in low_mixes.iter().copied().chain(["CN"]) {
            let expected = if mix == "CN" { cn } else { low };
            let got = v.get(mix).copied().unwrap_or(f64::NAN);
            out.push(Check::new(
                8,
                format!("{id} with {mix} mix"),
                rel(got, expected) <= 0.1,
                format!("{got:.1} g vs {expected} g"),
            ));
        }
    }
    for (id, table) in CN_SHARES {
        let ev = ds.evaluation(id)?;
        let m = apply_scenario(&ev.mode, &ScenarioSpec::electricity("CN"), &ev.freight)?;
        let r = ev.context().assess(&m)?;
        for (k, (use_pct, serv_pct)) in INDICATORS.iter().zip(table) {
            let t = r.total[*k].to_f64_lossy();
            let u = r.use_stage[*k].to_f64_lossy() / t * 100.0;
            let s = r.servicing[*k].to_f64_lossy() / t * 100.0;
            let ok = (u - use_pct).abs() <= 3.0 && (s - serv_pct).abs() <= 3.0;
            out.push(Check::new(
                8,
                format!("{id} China shares on {k}"),
                ok,
                format!("use {u:.2}% vs {use_pct}%, servicing {s:.2}% vs {serv_pct}%"),
            ));
        }
    }
    Ok(())
}

fn derivations<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    let e = ds.station_energy()?;
    let per = e.per_station_kwh.to_f64_lossy();
    out.push(Check::new(
        9,
        "station energy proration",
        per.floor() == 6063.0,
        format!("{per:.2} kWh/station/yr"),
    ));
    let s = &ds.parameters.servicing;
    let fleet = |p: &crate::dataset::config::FleetServicingParams| {
        derive_servicing_distance(
            T::lit(p.vans),
            T::lit(p.km_per_day_per_van),
            T::lit(p.vehicles),
            T::lit(p.km_per_year_per_vehicle),
        )
    };
    let es = es_pickup_distance(
        T::lit(s.shared_es.lcv_trip_km),
        T::lit(s.shared_es.vehicles_per_trip),
        T::lit(s.shared_es.km_between_pickups),
    )?;
    for (name, got, expected) in [
        ("shared bike", fleet(&s.shared_bike)?, 11.0),
        ("shared e-scooter", es, 45.0),
        ("shared e-moped", fleet(&s.shared_emoped)?, 20.0),
    ] {
        let got = got.to_f64_lossy();
        out.push(Check::new(
            9,
            format!("{name} servicing distance"),
            rel(got, expected) <= 0.1,
            format!("{got:.2} m/vkt vs {expected}"),
        ));
    }
    Ok(())
}

fn tailpipe<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    let p = &ds.parameters.tailpipe_correction;
    let co2 = ds
        .hbefa
        .iter()
        .find(|r| r.flow.as_str() == "co2_fossil")
        .map(|r| r.g_per_vkt)
        .unwrap_or_else(T::zero);
    let row = BTreeMap::from([(FlowId::from("co2_fossil"), co2)]);
    let c = correct_tailpipe(
        &row,
        T::lit(p.baseline_l_per_100km),
        &[T::lit(p.moped_l_per_100km), T::lit(p.motorcycle_l_per_100km)],
        &[T::lit(p.moped_share), T::lit(p.motorcycle_share)],
    )?;
    let ratio = c.ratio.to_f64_lossy();
    out.push(Check::new(
        10,
        "consumption ratio",
        (ratio * 100.0).round() == 66.0,
        format!("{ratio:.5}"),
    ));
    let corrected = c.emissions[&FlowId::from("co2_fossil")].to_f64_lossy();
    out.push(Check::new(
        10,
        "corrected CO2",
        (corrected - 53.7).abs() <= 0.1,
        format!("{corrected:.2} g/vkt"),
    ));
    Ok(())
}

fn ranking<T: Scalar>(ds: &Dataset<T>, out: &mut Vec<Check>) -> Result<()> {
    let results = ds.assess_all()?;
    for k in INDICATORS {
        let computed: Vec<(String, f64)> = results
            .iter()
            .map(|r| (r.mode_id.clone(), r.total[k].to_f64_lossy()))
            .collect();
        let reported: Vec<(String, f64)> = ds
            .mode_ids()
            .into_iter()
            .filter_map(|id| {
                ds.calibrated
                    .entry(id, k)
                    .map(|e| (id.to_string(), e.total.to_f64_lossy()))
            })
            .collect();
        let (a, b) = (rank_values(&computed), rank_values(&reported));
        out.push(Check::new(12, format!("{k} ranking"), a == b, a.join(" < ")));
    }
    let hh = rank_values(
        &results
            .iter()
            .map(|r| (r.mode_id.clone(), r.total[Indicator::HumanHealthDamage].to_f64_lossy()))
            .collect::<Vec<_>>(),
    );
    let top = hh.last().cloned().unwrap_or_default();
    out.push(Check::new(12, "HumanHealthDamage maximum", top == "shared_emoped", top));
    Ok(())
}
