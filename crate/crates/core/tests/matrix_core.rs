mod common;

use std::collections::BTreeMap;

use common::{norm_inf, random_db, values};
use modal_lca::impact::{apply_all, characterize, CharacterizationFactorSet};
use modal_lca::lci::{
    assemble, condition_estimate, inventory, solve_scaling, BackgroundDatabase, DenseMatrix, Exchange, Flow, FlowId,
    FlowKind, FlowVector, ProcessId, UnitProcess,
};
use modal_lca::{Error, Indicator, Scalar, INDICATORS};
use proptest::prelude::*;

fn product(id: &str) -> Flow {
    Flow {
        id: FlowId::from(id),
        kind: FlowKind::Product,
        name: id.to_string(),
        unit: "kg".into(),
        compartment: None,
    }
}

fn emission(id: &str) -> Flow {
    Flow {
        id: FlowId::from(id),
        kind: FlowKind::Elementary,
        name: id.to_string(),
        unit: "kg".into(),
        compartment: Some("air".into()),
    }
}

fn process<T: Scalar>(id: &str, makes: &str, exchanges: &[(&str, f64)]) -> UnitProcess<T> {
    UnitProcess {
        id: ProcessId::from(id),
        name: id.to_string(),
        reference: Exchange {
            flow: FlowId::from(makes),
            amount: T::one(),
        },
        exchanges: exchanges
            .iter()
            .map(|(f, a)| Exchange {
                flow: FlowId::from(*f),
                amount: T::lit(*a),
            })
            .collect(),
    }
}

fn demand<T: Scalar>(pairs: &[(&str, f64)]) -> BTreeMap<FlowId, T> {
    pairs.iter().map(|(f, a)| (FlowId::from(*f), T::lit(*a))).collect()
}

/// X needs 0.5 Y; Y emits `y_co2`, and optionally needs `loop_back` X.
fn chain<T: Scalar>(y_co2: f64, loop_back: f64) -> BackgroundDatabase<T> {
    let mut y: Vec<(&str, f64)> = vec![("co2", y_co2)];
    if loop_back != 0.0 {
        y.push(("x", loop_back));
    }
    BackgroundDatabase::new(
        vec![product("x"), product("y"), emission("co2")],
        vec![process("make x", "x", &[("y", 0.5)]), process("make y", "y", &y)],
    )
    .unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

#[test]
fn identity_system() {
    let db: BackgroundDatabase<f64> = BackgroundDatabase::new(
        vec![product("x"), product("y"), emission("co2")],
        vec![process("make x", "x", &[("co2", 2.0)]), process("make y", "y", &[])],
    )
    .unwrap();
    let sys = assemble(&db, &demand(&[("x", 1.0), ("y", 0.0)])).unwrap();
    assert_eq!(sys.technology.to_dense(), DenseMatrix::identity(2));
    let s = solve_scaling(&sys).unwrap();
    assert_eq!(s, vec![1.0, 0.0]);
    assert_eq!(inventory(&sys, &s).get("co2"), 2.0);
}

#[test]
fn chain_forward_substitution() {
    let db = chain::<f64>(4.0, 0.0);
    let sys = assemble(&db, &demand(&[("x", 1.0)])).unwrap();
    assert_eq!(sys.technology.get(1, 0), -0.5);
    assert_eq!(sys.technology.get(0, 1), 0.0);
    let s = solve_scaling(&sys).unwrap();
    assert_eq!(s, vec![1.0, 0.5]);
    assert_eq!(inventory(&sys, &s).get("co2"), 2.0);
}

#[test]
fn loop_matches_truncated_series() {
    let db: BackgroundDatabase<f64> = BackgroundDatabase::new(
        vec![product("x"), product("y")],
        vec![
            process("make x", "x", &[("y", 0.2)]),
            process("make y", "y", &[("x", 0.1)]),
        ],
    )
    .unwrap();
    let sys = assemble(&db, &demand(&[("x", 1.0)])).unwrap();
    let a = sys.technology.to_dense();
    assert_eq!(a, DenseMatrix::from_rows(&[vec![1.0, -0.1], vec![-0.2, 1.0]]));
    let s = solve_scaling(&sys).unwrap();
    let mut term = vec![1.0, 0.0];
    let mut sum = term.clone();
    for _ in 0..40 {
        term = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| (if i == j { 1.0 } else { 0.0 } - a[(i, j)]) * term[j])
                    .sum()
            })
            .collect();
        sum = sum.iter().zip(&term).map(|(x, t)| x + t).collect();
    }
    assert!(
        close(s[0], sum[0], 1e-9) && close(s[1], sum[1], 1e-9),
        "{s:?} vs {sum:?}"
    );
    assert!((s[0] - 1.020408).abs() < 1e-6);
    assert!((s[1] - 0.204082).abs() < 1e-6);
}

#[test]
fn single_process_inventory() {
    let db: BackgroundDatabase<f64> = BackgroundDatabase::new(
        vec![product("x"), emission("co2")],
        vec![process("make x", "x", &[("co2", 2.0)])],
    )
    .unwrap();
    let g = db.life_cycle_inventory(&demand(&[("x", 1.0)])).unwrap();
    assert_eq!(g.get("co2"), 2.0);
}

#[test]
fn credits_can_make_the_inventory_negative() {
    let db: BackgroundDatabase<f64> = BackgroundDatabase::new(
        vec![product("battery"), product("recycling"), emission("co2")],
        vec![
            process("make battery", "battery", &[("recycling", -1.0), ("co2", 0.2)]),
            process("recycle", "recycling", &[("co2", 1.0)]),
        ],
    )
    .unwrap();
    let sys = assemble(&db, &demand(&[("battery", 1.0)])).unwrap();
    let s = solve_scaling(&sys).unwrap();
    assert!(s.iter().any(|x| *x < 0.0));
    assert!((inventory(&sys, &s).get("co2") + 0.8).abs() < 1e-12);
}

#[test]
fn demand_of_unknown_or_elementary_flow_is_rejected() {
    let db = chain::<f64>(1.0, 0.0);
    for flow in ["nothing", "co2"] {
        let err = assemble(&db, &demand(&[(flow, 1.0)])).unwrap_err();
        match err {
            Error::UnresolvableDemand { flow: f, .. } => assert_eq!(f, flow),
            other => panic!("unexpected {other}"),
        }
    }
}

#[test]
fn two_producers_violate_integrity() {
    let err = BackgroundDatabase::<f64>::new(
        vec![product("x"), emission("co2")],
        vec![process("a", "x", &[]), process("b", "x", &[])],
    )
    .unwrap_err();
    assert!(
        matches!(err, Error::DatabaseIntegrity(ref m) if m.contains("both")),
        "{err}"
    );
}

#[test]
fn unproduced_product_and_dangling_flow_are_rejected() {
    let err =
        BackgroundDatabase::<f64>::new(vec![product("x"), product("y")], vec![process("a", "x", &[])]).unwrap_err();
    assert!(matches!(err, Error::DatabaseIntegrity(_)), "{err}");
    let err =
        BackgroundDatabase::<f64>::new(vec![product("x")], vec![process("a", "x", &[("ghost", 1.0)])]).unwrap_err();
    assert!(
        matches!(err, Error::DanglingReference { ref id, .. } if id == "ghost"),
        "{err}"
    );
}

#[test]
fn flows_must_respect_compartment_rules() {
    let mut bad = emission("co2");
    bad.compartment = None;
    assert!(BackgroundDatabase::<f64>::new(vec![bad], vec![]).is_err());
    let mut bad = product("x");
    bad.compartment = Some("air".into());
    assert!(BackgroundDatabase::<f64>::new(vec![bad], vec![process("a", "x", &[])]).is_err());
}

#[test]
fn singular_system_names_a_product() {
    // x needs one y, y needs one x: A = [[1, -1], [-1, 1]]
    let db: BackgroundDatabase<f64> = BackgroundDatabase::new(
        vec![product("x"), product("y")],
        vec![process("a", "x", &[("y", 1.0)]), process("b", "y", &[("x", 1.0)])],
    )
    .unwrap();
    let sys = assemble(&db, &demand(&[("x", 1.0)])).unwrap();
    match solve_scaling(&sys).unwrap_err() {
        Error::Singular { product } => assert!(product == "x" || product == "y"),
        other => panic!("unexpected {other}"),
    }
    assert!(condition_estimate(&sys.technology.to_dense()).is_infinite());
}

#[test]
fn near_singular_system_is_rejected() {
    let db: BackgroundDatabase<f64> = BackgroundDatabase::new(
        vec![product("x"), product("y")],
        vec![
            process("a", "x", &[("y", 1.0)]),
            process("b", "y", &[("x", 1.0 - 1e-14)]),
        ],
    )
    .unwrap();
    let sys = assemble(&db, &demand(&[("x", 1.0)])).unwrap();
    assert!(matches!(solve_scaling(&sys), Err(Error::Singular { .. })));
}

#[test]
fn single_precision_solve_agrees() {
    let s64 = {
        let db = chain::<f64>(1.0, 0.02);
        solve_scaling(&assemble(&db, &demand(&[("x", 1.0)])).unwrap()).unwrap()
    };
    let db = chain::<f32>(1.0, 0.02);
    let sys = assemble(&db, &demand(&[("x", 1.0)])).unwrap();
    let s32 = solve_scaling(&sys).unwrap();
    for (a, b) in s32.iter().zip(&s64) {
        assert!((f64::from(*a) - b).abs() < 1e-5);
    }
    assert!((inventory(&sys, &s32).get("co2") - 0.50505).abs() < 1e-4);
}

#[test]
fn methane_characterization() {
    let g = FlowVector::from_pairs([("co2", 2.0f64), ("ch4", 0.1)]);
    let cf = CharacterizationFactorSet::new()
        .with("co2", Indicator::Gwp100, 1.0)
        .with("ch4", Indicator::Gwp100, 28.0);
    let c = characterize(&g, &cf, Indicator::Gwp100).unwrap();
    assert!((c.score - 4.8).abs() < 1e-12);
    assert!(c.missing.is_empty());
    assert!(matches!(
        characterize(&g, &cf, Indicator::Ced),
        Err(Error::UnknownIndicator(_))
    ));
}

#[test]
fn zero_factors_and_missing_flows() {
    let g = FlowVector::from_pairs([("co2", 2.0f64), ("so2", 1.0)]);
    let zero = CharacterizationFactorSet::new().with("co2", Indicator::Gwp100, 0.0);
    assert_eq!(characterize(&g, &zero, Indicator::Gwp100).unwrap().score, 0.0);
    let cf = CharacterizationFactorSet::new().with("co2", Indicator::Gwp100, 1.0);
    let c = characterize(&g, &cf, Indicator::Gwp100).unwrap();
    assert_eq!(c.score, 2.0);
    assert_eq!(c.missing, vec![FlowId::from("so2")]);
}

/// Processes, scaling vector, inventory, `A s` and `f`.
type Solved = (Vec<ProcessId>, Vec<f64>, FlowVector<f64>, Vec<f64>, Vec<f64>);

fn solve_random(db: &common::RandomDb) -> Solved {
    let database = db.database();
    let sys = assemble(&database, &db.demand_map()).unwrap();
    let s = solve_scaling(&sys).unwrap();
    let g = inventory(&sys, &s);
    let a = sys.technology.to_dense();
    (sys.processes.clone(), s.clone(), g, a.mul_vec(&s), sys.demand.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn solver_matches_neumann_oracle(db in random_db(20, true)) {
        let (processes, s, g, _, _) = solve_random(&db);
        let (s_oracle, g_oracle) = db.oracle();
        let by_process: BTreeMap<&str, f64> = processes.iter().map(|p| p.as_str()).zip(s.iter().copied()).collect();
        let s_lib: Vec<f64> = (0..db.n)
            .map(|j| by_process.get(format!("make {}", common::product(j)).as_str()).copied().unwrap_or(0.0))
            .collect();
        let diff: Vec<f64> = s_lib.iter().zip(&s_oracle).map(|(a, b)| a - b).collect();
        prop_assert!(norm_inf(&diff) <= 1e-6 * norm_inf(&s_oracle).max(1e-300), "{s_lib:?} vs {s_oracle:?}");
        let g_lib: Vec<f64> = (0..db.m).map(|e| g.get(&common::emission(e))).collect();
        let diff: Vec<f64> = g_lib.iter().zip(&g_oracle).map(|(a, b)| a - b).collect();
        prop_assert!(norm_inf(&diff) <= 1e-6 * norm_inf(&g_oracle).max(1e-12));
    }

    #[test]
    fn residual_is_bounded(db in random_db(20, true)) {
        let (_, _, _, a_s, f) = solve_random(&db);
        let r: Vec<f64> = a_s.iter().zip(&f).map(|(x, y)| x - y).collect();
        prop_assert!(norm_inf(&r) <= 1e-9 * norm_inf(&f));
    }

    #[test]
    fn doubling_demand_doubles_everything(db in random_db(20, true), cf in values(4 * 5, -3.0, 30.0)) {
        let database = db.database();
        let f = db.demand_map();
        let f2: BTreeMap<FlowId, f64> = f.iter().map(|(k, v)| (k.clone(), 2.0 * v)).collect();
        let g1 = database.life_cycle_inventory(&f).unwrap();
        let g2 = database.life_cycle_inventory(&f2).unwrap();
        for (flow, v) in &g1.entries {
            prop_assert!(close(g2.entries[flow], 2.0 * v, 1e-12) || (g2.entries[flow] - 2.0 * v).abs() < 1e-300);
        }
        let mut set = CharacterizationFactorSet::new();
        for e in 0..db.m {
            for k in INDICATORS {
                set = set.with(&common::emission(e), k, cf[e * 5 + k.index()]);
            }
        }
        let (i1, i2) = (apply_all(&g1, &set), apply_all(&g2, &set));
        for k in INDICATORS {
            prop_assert!(close(i2[k], 2.0 * i1[k], 1e-12) || (i2[k] - 2.0 * i1[k]).abs() < 1e-300);
        }
    }

    #[test]
    fn demands_superpose(db in random_db(20, true), other in values(20, -5.0, 5.0)) {
        let database = db.database();
        let f1 = db.demand_map();
        let f2: BTreeMap<FlowId, f64> = (0..db.n).map(|i| (FlowId::from(common::product(i)), other[i])).collect();
        let mut both = f2.clone();
        for (k, v) in &f1 {
            *both.get_mut(k).unwrap() += v;
        }
        let g1 = database.life_cycle_inventory(&f1).unwrap();
        let g2 = database.life_cycle_inventory(&f2).unwrap();
        let g = database.life_cycle_inventory(&both).unwrap();
        let sum = &g1 + &g2;
        let scale = sum.entries.values().chain(g.entries.values()).fold(1e-12f64, |a, x| a.max(x.abs()));
        for e in 0..db.m {
            let id = common::emission(e);
            prop_assert!((g.get(&id) - sum.get(&id)).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn nonnegative_data_give_nonnegative_inventory(db in random_db(20, false)) {
        let g = db.database().life_cycle_inventory(&db.demand_map()).unwrap();
        for v in g.entries.values() {
            prop_assert!(*v >= 0.0);
        }
    }

    #[test]
    fn characterization_is_linear(
        g1 in values(6, -10.0, 10.0),
        g2 in values(6, -10.0, 10.0),
        cf in values(6, -5.0, 50.0),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
    ) {
        let ids = ["co2", "ch4", "n2o", "nox", "pm25", "so2"];
        let v = |g: &[f64]| FlowVector::from_pairs(ids.iter().copied().zip(g.iter().copied()));
        let set = ids.iter().zip(&cf).fold(CharacterizationFactorSet::new(), |s, (id, c)| s.with(id, Indicator::Gwp100, *c));
        let combined = &(&v(&g1) * alpha) + &(&v(&g2) * beta);
        let lhs = characterize(&combined, &set, Indicator::Gwp100).unwrap().score;
        let rhs = alpha * characterize(&v(&g1), &set, Indicator::Gwp100).unwrap().score
            + beta * characterize(&v(&g2), &set, Indicator::Gwp100).unwrap().score;
        let scale: f64 = g1.iter().chain(&g2).map(|x| x.abs()).sum::<f64>() * cf.iter().fold(0.0f64, |a, x| a.max(x.abs())) * 3.0;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
    }
}
