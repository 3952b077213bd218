//! GP posterior against a dense solve, and incremental against batch updates.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use safemdp::gp::{Covariance, StationaryCovariance};
use safemdp::{GpModel, Kernel};

use super::{random_table_metric, rel_err, DenseGp};

pub const TOL: f64 = 1e-8;

/// Random table metric on 10 to 39 points, random hyperparameters and at
/// most 50 observations.
pub fn random_instance(rng: &mut ChaCha8Rng, matern: bool) -> (Arc<dyn Covariance>, f64, Vec<usize>, Vec<f64>) {
    let n = rng.random_range(10..40);
    let metric = random_table_metric(rng, n, 10.0);
    let (ls, sd) = (rng.random_range(0.5..6.0), rng.random_range(0.3..3.0));
    let kernel = if matern { Kernel::matern52(ls, sd) } else { Kernel::squared_exponential(ls, sd) }.unwrap();
    let noise = rng.random_range(0.05..0.5);
    let m = rng.random_range(1..=50);
    let inputs: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
    let y: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
    (Arc::new(StationaryCovariance::new(kernel, metric)), noise, inputs, y)
}

/// Mean, variance and one covariance per query point on `0..n`.
pub fn compare_with_dense(model: &GpModel, cov: &Arc<dyn Covariance>, n: usize) -> Result<(), String> {
    let c = cov.clone();
    let k = move |a: usize, b: usize| c.cov(a, b);
    let noise = model.noise_std();
    let dense = DenseGp::new(&k, noise * noise, model.inputs(), model.observations());
    let queries: Vec<usize> = (0..n).collect();
    let (means, vars) = model.posterior(&queries);
    let scale = cov.variance(0);
    for q in 0..n {
        let m = dense.mean(&k, q);
        if rel_err(means[q], m, scale.sqrt()) >= TOL {
            return Err(format!("mean at {q}: {} vs {m}", means[q]));
        }
        let v = dense.cov(&k, q, q).max(0.0);
        if rel_err(vars[q], v, scale) >= TOL {
            return Err(format!("variance at {q}: {} vs {v}", vars[q]));
        }
        let other = (q * 7 + 3) % n;
        let c = dense.cov(&k, q, other);
        if rel_err(model.posterior_cov(q, other), c, scale) >= TOL {
            return Err(format!("covariance ({q},{other})"));
        }
    }
    Ok(())
}

/// Batch posteriors on random instances, alternating kernels.
pub fn check_dense(instances: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        let (cov, noise, inputs, y) = random_instance(&mut rng, i % 2 == 0);
        let size = inputs.iter().copied().max().unwrap() + 1;
        let model = GpModel::with_data(cov.clone(), noise, inputs, y).map_err(|e| e.to_string())?;
        compare_with_dense(&model, &cov, size).map_err(|e| format!("instance {i}: {e}"))?;
    }
    Ok(())
}

/// Rank-1 updates one observation at a time against a batch fit.
pub fn check_incremental(instances: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        let (cov, noise, inputs, y) = random_instance(&mut rng, i % 2 == 1);
        let batch = GpModel::with_data(cov.clone(), noise, inputs.clone(), y.clone()).map_err(|e| e.to_string())?;
        let mut inc = GpModel::new(cov.clone(), noise).map_err(|e| e.to_string())?;
        for (&p, &v) in inputs.iter().zip(&y) {
            inc.observe(p, v).map_err(|e| e.to_string())?;
        }
        let queries: Vec<usize> = (0..=*inputs.iter().max().unwrap()).collect();
        let (mb, vb) = batch.posterior(&queries);
        let (mi, vi) = inc.posterior(&queries);
        let scale = cov.variance(0);
        for q in 0..queries.len() {
            if rel_err(mi[q], mb[q], scale.sqrt()) >= TOL || rel_err(vi[q], vb[q], scale) >= TOL {
                return Err(format!("instance {i}: incremental and batch differ at {q}"));
            }
        }
    }
    Ok(())
}
