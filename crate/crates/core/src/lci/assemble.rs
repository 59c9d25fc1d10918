use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::matrix::SparseMatrix;
use super::types::{BackgroundDatabase, FlowId, FlowKind, MatrixSystem};
use crate::{Error, Result, Scalar};

/// Builds the matrix system for the part of `db` reachable from `demand`.
///
/// `A[i][j]` is the net amount of product `i` produced (+) or consumed (−)
/// by process `j`. Products are ordered by id, processes follow their
/// reference product, and elementary flows are ordered by id.
pub fn assemble<T: Scalar>(db: &BackgroundDatabase<T>, demand: &BTreeMap<FlowId, T>) -> Result<MatrixSystem<T>> {
    for (flow, amount) in demand {
        let known = db.flow(flow).ok_or_else(|| Error::UnresolvableDemand {
            flow: flow.to_string(),
            reason: "flow is not in the database".into(),
        })?;
        if known.kind == FlowKind::Elementary {
            return Err(Error::UnresolvableDemand {
                flow: flow.to_string(),
                reason: "elementary flows cannot be demanded".into(),
            });
        }
        if !amount.is_finite() {
            return Err(Error::UnresolvableDemand {
                flow: flow.to_string(),
                reason: "amount is not finite".into(),
            });
        }
    }

    let mut reachable: BTreeSet<FlowId> = BTreeSet::new();
    let mut queue: VecDeque<FlowId> = demand.keys().cloned().collect();
    while let Some(flow) = queue.pop_front() {
        if !reachable.insert(flow.clone()) {
            continue;
        }
        let producer = db.producer(&flow).ok_or_else(|| Error::UnresolvableDemand {
            flow: flow.to_string(),
            reason: "no producing process".into(),
        })?;
        for exchange in &producer.exchanges {
            let kind = db.flow(&exchange.flow).map(|f| f.kind);
            if kind.is_some_and(FlowKind::is_technosphere) && !reachable.contains(&exchange.flow) {
                queue.push_back(exchange.flow.clone());
            }
        }
    }

    let products: Vec<FlowId> = reachable.into_iter().collect();
    let row_of: BTreeMap<&FlowId, usize> = products.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut processes = Vec::with_capacity(products.len());
    let mut elementary_set: BTreeSet<FlowId> = BTreeSet::new();
    for flow in &products {
        let p = db.producer(flow).expect("reachable products have producers");
        processes.push(p.id.clone());
        for exchange in &p.exchanges {
            if db.flow(&exchange.flow).map(|f| f.kind) == Some(FlowKind::Elementary) {
                elementary_set.insert(exchange.flow.clone());
            }
        }
    }
    let elementary: Vec<FlowId> = elementary_set.into_iter().collect();
    let elem_of: BTreeMap<&FlowId, usize> = elementary.iter().enumerate().map(|(i, f)| (f, i)).collect();

    let mut a = Vec::new();
    let mut b = Vec::new();
    for (j, flow) in products.iter().enumerate() {
        let p = db.producer(flow).expect("reachable products have producers");
        a.push((j, j, p.reference.amount));
        for exchange in &p.exchanges {
            if let Some(&i) = row_of.get(&exchange.flow) {
                a.push((i, j, -exchange.amount));
            } else if let Some(&i) = elem_of.get(&exchange.flow) {
                b.push((i, j, exchange.amount));
            }
        }
    }
    let n = products.len();
    let technology = SparseMatrix::from_triplets(n, n, a);
    for (j, flow) in products.iter().enumerate() {
        if !(technology.get(j, j) > T::zero()) {
            return Err(Error::DatabaseIntegrity(format!(
                "process `{}` consumes at least as much `{flow}` as it produces",
                processes[j]
            )));
        }
    }
    let intervention = SparseMatrix::from_triplets(elementary.len(), n, b);
    let demand_vec = products
        .iter()
        .map(|f| demand.get(f).copied().unwrap_or_else(T::zero))
        .collect();

    Ok(MatrixSystem {
        products,
        processes,
        elementary,
        technology,
        intervention,
        demand: demand_vec,
    })
}
