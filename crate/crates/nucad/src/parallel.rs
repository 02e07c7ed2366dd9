//! Multi-threaded tree construction.
//!
//! Each round hands every pending cell to a rayon pool and absorbs the
//! children in queue order. A split depends only on its cell and the
//! formula, so the tree is identical to the sequential build for any
//! worker count.

use nucad_core::{split, BuildError, Builder, Formula, NuCadTree, SplitPolicy};
use rayon::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum ParallelBuildError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Builds with `policy.workers` threads; one worker runs the sequential
/// builder.
pub fn build_parallel(formula: &Formula, policy: &SplitPolicy) -> Result<NuCadTree, ParallelBuildError> {
    if policy.workers <= 1 {
        return Ok(nucad_core::build(formula, policy)?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(policy.workers)
        .build()?;
    let mut b = Builder::new(formula.clone(), *policy);
    while !b.is_done() {
        let batch = b.take_batch(usize::MAX);
        let results: Vec<_> = pool.install(|| {
            batch
                .par_iter()
                .map(|cell| split(cell, formula, policy))
                .collect()
        });
        for (cell, children) in batch.iter().zip(results) {
            b.absorb(cell.label(), children.map_err(BuildError::from)?)?;
        }
    }
    Ok(b.finish())
}
