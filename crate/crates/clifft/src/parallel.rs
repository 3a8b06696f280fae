//! Worker pool setup and the parallel drivers built on core's per-node APIs.

use clifft_core::convolution::KernelTranslation;
use clifft_core::field::SampledField;
use clifft_core::{Multivector, VectorM};
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "CLIFFT_THREADS";

/// Worker count requested through `CLIFFT_THREADS`; `None` when unset.
pub fn requested_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

/// Sizes the global pool from `CLIFFT_THREADS`. Later calls are no-ops.
pub fn init_pool() -> Result<()> {
    if let Some(n) = requested_threads()? {
        // Fails only if the pool already exists, which is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// `T_y f` by the kernel integral for every displacement, nodes spread over
/// the pool. Each node is computed independently, so results do not depend
/// on the worker count.
pub fn translate_by_kernel(f: &SampledField, ys: &[VectorM]) -> Result<Vec<SampledField>> {
    let plan = KernelTranslation::new(f, ys)?;
    let per_node: Vec<Vec<Multivector>> = (0..plan.grid().node_count())
        .into_par_iter()
        .map(|i| plan.eval_node(i))
        .collect::<std::result::Result<_, _>>()?;
    Ok(plan.assemble(&per_node)?)
}
