use rayon::prelude::*;

use super::GpModel;

/// Posterior over a fixed set of query points, kept in sync with a growing
/// [`GpModel`] at `O(t)` cost per query and observation.
///
/// For every query `q` the tracker stores `v_q = L⁻¹ k_t(q)`. Appending an
/// observation extends each `v_q` by one entry, which updates the mean by
/// `v_q[t] α[t]` and the variance by `-v_q[t]²`. Periodic rebuilds of the
/// model's factor reproduce it to round-off and are absorbed incrementally;
/// the tracker only recomputes from scratch when the model's jitter changes.
#[derive(Clone, Debug)]
pub struct PosteriorTracker {
    queries: Vec<usize>,
    projections: Vec<Vec<f64>>,
    mean: Vec<f64>,
    variance: Vec<f64>,
    jitter: f64,
    synced: usize,
}

impl PosteriorTracker {
    pub fn new(model: &GpModel, queries: Vec<usize>) -> Self {
        let n = queries.len();
        let mut tracker = Self {
            queries,
            projections: vec![Vec::new(); n],
            mean: vec![0.0; n],
            variance: vec![0.0; n],
            jitter: model.jitter(),
            synced: 0,
        };
        tracker.recompute(model);
        tracker
    }

    pub fn queries(&self) -> &[usize] {
        &self.queries
    }

    fn recompute(&mut self, model: &GpModel) {
        let cov = model.covariance();
        let alpha = model.alpha();
        self.queries
            .par_iter()
            .zip(self.projections.par_iter_mut())
            .zip(self.mean.par_iter_mut().zip(self.variance.par_iter_mut()))
            .for_each(|((&q, proj), (mean, var))| {
                *proj = model.project(q);
                *mean = proj.iter().zip(alpha).map(|(a, b)| a * b).sum();
                *var = cov.variance(q) - proj.iter().map(|x| x * x).sum::<f64>();
            });
        self.jitter = model.jitter();
        self.synced = model.len();
    }

    /// Discards the incremental state and recomputes against `model`.
    pub fn resync(&mut self, model: &GpModel) {
        self.recompute(model);
    }

    /// Brings the tracker up to date with `model`, which must be the model
    /// the tracker was created from (or a descendant of it).
    pub fn sync(&mut self, model: &GpModel) {
        if model.jitter() != self.jitter || model.len() < self.synced {
            self.recompute(model);
            return;
        }
        let cov = model.covariance();
        for i in self.synced..model.len() {
            let x = model.inputs()[i];
            let row = model.factor_row(i);
            let alpha_i = model.alpha()[i];
            self.queries
                .par_iter()
                .zip(self.projections.par_iter_mut())
                .zip(self.mean.par_iter_mut().zip(self.variance.par_iter_mut()))
                .for_each(|((&q, proj), (mean, var))| {
                    let dot: f64 = row[..i].iter().zip(proj.iter()).map(|(l, v)| l * v).sum();
                    let v = (cov.cov(x, q) - dot) / row[i];
                    proj.push(v);
                    *mean += v * alpha_i;
                    *var -= v * v;
                });
        }
        self.synced = model.len();
    }

    /// Posterior mean of the `k`-th query.
    pub fn mean(&self, k: usize) -> f64 {
        self.mean[k]
    }

    /// Posterior variance of the `k`-th query, clamped at zero.
    pub fn variance(&self, k: usize) -> f64 {
        self.variance[k].max(0.0)
    }

    /// Posterior covariance between the `i`-th and `j`-th queries.
    pub fn covariance(&self, model: &GpModel, i: usize, j: usize) -> f64 {
        let dot: f64 = self.projections[i].iter().zip(&self.projections[j]).map(|(a, b)| a * b).sum();
        model.covariance().cov(self.queries[i], self.queries[j]) - dot
    }

    pub fn means(&self) -> &[f64] {
        &self.mean
    }

    /// Unclamped variances.
    pub fn raw_variances(&self) -> &[f64] {
        &self.variance
    }
}
