use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::matrix::SparseMatrix;
use crate::{units, Error, Result, Scalar};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }
    };
}

id_type!(FlowId);
id_type!(ProcessId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowKind {
    Product,
    Elementary,
    Waste,
}

impl FlowKind {
    /// Product and waste flows are exchanged between processes.
    pub fn is_technosphere(self) -> bool {
        !matches!(self, FlowKind::Elementary)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FlowKind::Product => "product",
            FlowKind::Elementary => "elementary",
            FlowKind::Waste => "waste",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub id: FlowId,
    pub kind: FlowKind,
    pub name: String,
    /// Canonical unit symbol.
    pub unit: String,
    pub compartment: Option<String>,
}

/// A signed amount of a flow, in the flow's canonical unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Exchange<T> {
    pub flow: FlowId,
    pub amount: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitProcess<T> {
    pub id: ProcessId,
    pub name: String,
    pub reference: Exchange<T>,
    /// Inputs are positive, outputs of elementary flows are positive, and a
    /// negative technosphere amount is a credit.
    pub exchanges: Vec<Exchange<T>>,
}

/// Validated set of flows and unit processes.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundDatabase<T> {
    flows: BTreeMap<FlowId, Flow>,
    processes: BTreeMap<ProcessId, UnitProcess<T>>,
    producers: BTreeMap<FlowId, ProcessId>,
}

impl<T: Scalar> BackgroundDatabase<T> {
    pub fn new(flows: Vec<Flow>, processes: Vec<UnitProcess<T>>) -> Result<Self> {
        let mut flow_map = BTreeMap::new();
        for flow in flows {
            if flow.unit.trim().is_empty() {
                return Err(Error::DatabaseIntegrity(format!("flow `{}` has no unit", flow.id)));
            }
            if units::canonical_symbol(&flow.unit)? != flow.unit {
                return Err(Error::DatabaseIntegrity(format!(
                    "flow `{}` unit `{}` is not canonical",
                    flow.id, flow.unit
                )));
            }
            match (flow.kind, &flow.compartment) {
                (FlowKind::Elementary, None) => {
                    return Err(Error::DatabaseIntegrity(format!(
                        "elementary flow `{}` has no compartment",
                        flow.id
                    )))
                }
                (FlowKind::Product | FlowKind::Waste, Some(_)) => {
                    return Err(Error::DatabaseIntegrity(format!(
                        "technosphere flow `{}` carries a compartment",
                        flow.id
                    )))
                }
                _ => {}
            }
            let id = flow.id.clone();
            if flow_map.insert(id.clone(), flow).is_some() {
                return Err(Error::DatabaseIntegrity(format!("duplicate flow id `{id}`")));
            }
        }

        let mut process_map = BTreeMap::new();
        let mut producers: BTreeMap<FlowId, ProcessId> = BTreeMap::new();
        for process in processes {
            let context = format!("process `{}`", process.id);
            let reference = flow_map
                .get(&process.reference.flow)
                .ok_or_else(|| Error::dangling(&context, "flow", process.reference.flow.as_str()))?;
            if !reference.kind.is_technosphere() {
                return Err(Error::DatabaseIntegrity(format!(
                    "{context}: reference flow `{}` is elementary",
                    reference.id
                )));
            }
            if !(process.reference.amount > T::zero()) || !process.reference.amount.is_finite() {
                return Err(Error::DatabaseIntegrity(format!(
                    "{context}: reference amount must be positive and finite"
                )));
            }
            for exchange in &process.exchanges {
                if !flow_map.contains_key(&exchange.flow) {
                    return Err(Error::dangling(&context, "flow", exchange.flow.as_str()));
                }
                if !exchange.amount.is_finite() {
                    return Err(Error::DatabaseIntegrity(format!(
                        "{context}: non-finite amount for `{}`",
                        exchange.flow
                    )));
                }
            }
            if let Some(other) = producers.insert(process.reference.flow.clone(), process.id.clone()) {
                return Err(Error::DatabaseIntegrity(format!(
                    "`{}` is produced by both `{other}` and `{}`",
                    process.reference.flow, process.id
                )));
            }
            let id = process.id.clone();
            if process_map.insert(id.clone(), process).is_some() {
                return Err(Error::DatabaseIntegrity(format!("duplicate process id `{id}`")));
            }
        }

        for flow in flow_map.values() {
            if flow.kind.is_technosphere() && !producers.contains_key(&flow.id) {
                return Err(Error::DatabaseIntegrity(format!("no process produces `{}`", flow.id)));
            }
        }

        Ok(BackgroundDatabase {
            flows: flow_map,
            processes: process_map,
            producers,
        })
    }

    pub fn flows(&self) -> impl Iterator<Item = &Flow> {
        self.flows.values()
    }

    pub fn processes(&self) -> impl Iterator<Item = &UnitProcess<T>> {
        self.processes.values()
    }

    pub fn flow(&self, id: &FlowId) -> Option<&Flow> {
        self.flows.get(id)
    }

    pub fn process(&self, id: &ProcessId) -> Option<&UnitProcess<T>> {
        self.processes.get(id)
    }

    pub fn producer(&self, flow: &FlowId) -> Option<&UnitProcess<T>> {
        self.producers.get(flow).and_then(|p| self.processes.get(p))
    }
}

/// Technology matrix `A`, intervention matrix `B` and demand `f`.
///
/// Rows of `A` are the product flows in `products`; column `j` is the
/// producer of `products[j]`, so reference products sit on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSystem<T> {
    pub products: Vec<FlowId>,
    pub processes: Vec<ProcessId>,
    pub elementary: Vec<FlowId>,
    pub technology: SparseMatrix<T>,
    pub intervention: SparseMatrix<T>,
    pub demand: Vec<T>,
}

/// Elementary-flow amounts in canonical units.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FlowVector<T> {
    pub entries: BTreeMap<FlowId, T>,
}

impl<T: Scalar> FlowVector<T> {
    pub fn new() -> Self {
        FlowVector {
            entries: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I, F>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (F, T)>,
        F: Into<FlowId>,
    {
        let mut v = FlowVector::new();
        for (flow, amount) in pairs {
            v.accumulate(flow.into(), amount);
        }
        v
    }

    pub fn accumulate(&mut self, flow: FlowId, amount: T) {
        let slot = self.entries.entry(flow).or_insert_with(T::zero);
        *slot = *slot + amount;
    }

    pub fn get(&self, flow: &str) -> T {
        self.entries.get(&FlowId::from(flow)).copied().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, factor: T) -> Self {
        FlowVector {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), *v * factor)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entries.values().all(|v| v.is_finite())
    }

    pub fn flow_ids(&self) -> BTreeSet<&FlowId> {
        self.entries.keys().collect()
    }
}

impl<T: Scalar> Add for &FlowVector<T> {
    type Output = FlowVector<T>;

    fn add(self, rhs: Self) -> FlowVector<T> {
        let mut out = self.clone();
        for (k, v) in &rhs.entries {
            out.accumulate(k.clone(), *v);
        }
        out
    }
}

impl<T: Scalar> Sub for &FlowVector<T> {
    type Output = FlowVector<T>;

    fn sub(self, rhs: Self) -> FlowVector<T> {
        self + &rhs.scale(-T::one())
    }
}

impl<T: Scalar> Mul<T> for &FlowVector<T> {
    type Output = FlowVector<T>;

    fn mul(self, rhs: T) -> FlowVector<T> {
        self.scale(rhs)
    }
}
