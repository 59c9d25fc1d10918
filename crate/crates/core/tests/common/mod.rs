//! Random background databases and a Neumann-series oracle shared by the
//! integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use modal_lca::lci::{BackgroundDatabase, Exchange, Flow, FlowId, FlowKind, ProcessId, UnitProcess};
use proptest::prelude::*;

/// Raw draw of a small database. `tech[i * n + j]` is the amount of product
/// `i` consumed by process `j` before column scaling.
#[derive(Debug, Clone)]
pub struct RandomDb {
    pub n: usize,
    pub m: usize,
    pub reference: Vec<f64>,
    pub tech: Vec<Option<f64>>,
    pub bio: Vec<f64>,
    pub demand: Vec<Option<f64>>,
    /// Bound on the column 1-norm of the normalized off-diagonal part.
    pub rho: f64,
}

pub fn product(i: usize) -> String {
    format!("p{i:02}")
}

pub fn emission(i: usize) -> String {
    format!("e{i}")
}

impl RandomDb {
    /// Scaled off-diagonal consumption: `M[i][j]`, with `Σ_i |M[i][j]| / r_j ≤ rho`.
    pub fn consumption(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut out = vec![vec![0.0; n]; n];
        for j in 0..n {
            let col: f64 = (0..n)
                .filter(|&i| i != j)
                .filter_map(|i| self.tech[i * n + j])
                .map(f64::abs)
                .sum();
            if col == 0.0 {
                continue;
            }
            let scale = self.rho * self.reference[j] / col;
            for i in (0..n).filter(|&i| i != j) {
                if let Some(v) = self.tech[i * n + j] {
                    out[i][j] = v * scale;
                }
            }
        }
        out
    }

    pub fn demand_map(&self) -> BTreeMap<FlowId, f64> {
        let mut out: BTreeMap<FlowId, f64> = self
            .demand
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|v| (FlowId::from(product(i)), v)))
            .collect();
        if out.is_empty() {
            out.insert(FlowId::from(product(0)), 1.0);
        }
        out
    }

    pub fn database(&self) -> BackgroundDatabase<f64> {
        let mut flows: Vec<Flow> = (0..self.n)
            .map(|i| Flow {
                id: FlowId::from(product(i)),
                kind: FlowKind::Product,
                name: format!("product {i}"),
                unit: "kg".into(),
                compartment: None,
            })
            .collect();
        flows.extend((0..self.m).map(|e| Flow {
            id: FlowId::from(emission(e)),
            kind: FlowKind::Elementary,
            name: format!("emission {e}"),
            unit: "kg".into(),
            compartment: Some("air".into()),
        }));
        let m = self.consumption();
        let processes = (0..self.n)
            .map(|j| {
                let mut exchanges: Vec<Exchange<f64>> = (0..self.n)
                    .filter(|&i| m[i][j] != 0.0)
                    .map(|i| Exchange {
                        flow: FlowId::from(product(i)),
                        amount: m[i][j],
                    })
                    .collect();
                exchanges.extend(
                    (0..self.m)
                        .filter(|&e| self.bio[e * self.n + j] != 0.0)
                        .map(|e| Exchange {
                            flow: FlowId::from(emission(e)),
                            amount: self.bio[e * self.n + j],
                        }),
                );
                UnitProcess {
                    id: ProcessId::from(format!("make {}", product(j)).as_str()),
                    name: format!("process {j}"),
                    reference: Exchange {
                        flow: FlowId::from(product(j)),
                        amount: self.reference[j],
                    },
                    exchanges,
                }
            })
            .collect();
        BackgroundDatabase::new(flows, processes).expect("random database is valid")
    }

    /// Oracle scaling vector over all `n` processes and inventory over all
    /// `m` emissions.
    pub fn oracle(&self) -> (Vec<f64>, Vec<f64>) {
        let f: Vec<f64> = {
            let d = self.demand_map();
            (0..self.n)
                .map(|i| d.get(&FlowId::from(product(i))).copied().unwrap_or(0.0))
                .collect()
        };
        let m = self.consumption();
        let s = neumann(&self.reference, &m, &f);
        let g = (0..self.m)
            .map(|e| (0..self.n).map(|j| self.bio[e * self.n + j] * s[j]).sum())
            .collect();
        (s, g)
    }
}

/// Solves `(D − M)·s = f` as `D·s = Σ_k (M·D⁻¹)^k f`, truncated once a term
/// no longer changes the sum.
pub fn neumann(reference: &[f64], m: &[Vec<f64>], f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut term = f.to_vec();
    let mut sum = f.to_vec();
    for _ in 0..5000 {
        let scaled: Vec<f64> = term.iter().zip(reference).map(|(t, r)| t / r).collect();
        term = (0..n).map(|i| (0..n).map(|j| m[i][j] * scaled[j]).sum()).collect();
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        let tn = term.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let sn = sum.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if tn <= 1e-17 * sn.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum.iter().zip(reference).map(|(s, r)| s / r).collect()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Databases of up to `max_n` processes. `signed` allows credits in both
/// matrices and negative demands.
pub fn random_db(max_n: usize, signed: bool) -> impl Strategy<Value = RandomDb> {
    (1..=max_n, 1..=4usize, 0.05f64..0.8).prop_flat_map(move |(n, m, rho)| {
        let low = if signed { -0.5 } else { 0.0 };
        let tech = prop::collection::vec(prop::option::weighted(0.35, low..1.0f64), n * n);
        let bio = prop::collection::vec(
            prop_oneof![2 => Just(0.0), 3 => (if signed { -2.0 } else { 0.0 })..5.0f64],
            m * n,
        );
        let demand_low = if signed { -10.0 } else { 0.1 };
        let demand = prop::collection::vec(prop::option::weighted(0.4, demand_low..10.0f64), n);
        let reference = prop::collection::vec(0.5f64..2.0, n);
        (Just(n), Just(m), reference, tech, bio, demand, Just(rho)).prop_map(
            |(n, m, reference, tech, bio, demand, rho)| RandomDb {
                n,
                m,
                reference,
                tech,
                bio,
                demand,
                rho,
            },
        )
    })
}

/// Random vectors of finite values for inventories and factor sets.
pub fn values(len: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, len)
}
