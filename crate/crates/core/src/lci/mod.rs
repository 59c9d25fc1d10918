//! Matrix life-cycle inventory: `A·s = f`, `g = B·s`.

mod assemble;
mod matrix;
mod solve;
mod types;

pub use assemble::assemble;
pub use matrix::{DenseMatrix, SparseMatrix};
pub use solve::{condition_estimate, inventory, solve_scaling};
pub use types::{
    BackgroundDatabase, Exchange, Flow, FlowId, FlowKind, FlowVector, MatrixSystem, ProcessId, UnitProcess,
};

use std::collections::BTreeMap;

use crate::{Result, Scalar};

impl<T: Scalar> BackgroundDatabase<T> {
    /// Assembles, solves and returns the elementary-flow inventory for a
    /// product demand.
    pub fn life_cycle_inventory(&self, demand: &BTreeMap<FlowId, T>) -> Result<FlowVector<T>> {
        let sys = assemble(self, demand)?;
        let s = solve_scaling(&sys)?;
        Ok(inventory(&sys, &s))
    }
}
