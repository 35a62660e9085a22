//! Maximum-likelihood logistic regression via Newton iterations with
//! step-halving (IRLS).

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::models::ModelSpec;
use crate::scalar::{real, Real};

/// Log-odds of a probability in (0, 1).
pub fn logit<F: Real>(p: F) -> F {
    (p / (F::one() - p)).ln()
}

/// Numerically stable inverse logit; never overflows for finite input.
pub fn inv_logit<F: Real>(x: F) -> F {
    if x >= F::zero() {
        F::one() / (F::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (F::one() + e)
    }
}

/// Clamps a probability into the open unit interval so downstream logs and
/// likelihoods stay finite. The margin is 1e-12 or one epsilon of the scalar
/// type, whichever keeps the bound representable.
pub(crate) fn clamp_unit<F: Real>(p: F) -> F {
    let lo = real::<F>(1e-12).max(F::epsilon());
    p.max(lo).min(F::one() - lo)
}

/// Convergence controls for [`fit_logistic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions<F> {
    /// Gradient max-norm at which the fit counts as converged.
    pub tol: F,
    pub max_iter: usize,
    /// Coefficient max-norm beyond which the data are treated as separated:
    /// the fit stops, coefficients are clamped to the cap, and the model is
    /// flagged rather than aborted (capped fits still predict).
    pub coef_cap: F,
}

impl<F: Real> Default for FitOptions<F> {
    fn default() -> Self {
        FitOptions {
            tol: real(1e-8),
            max_iter: 50,
            coef_cap: real(30.0),
        }
    }
}

/// A fitted logistic model: coefficients, their covariance (inverse observed
/// information), and fit diagnostics that callers must not silently drop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel<F> {
    spec: ModelSpec,
    coefficients: Vec<F>,
    covariance: Vec<Vec<F>>,
    converged: bool,
    separated: bool,
    iterations: usize,
    train_rows: usize,
}

impl<F: Real> FittedModel<F> {
    /// Wraps externally chosen coefficients (intercept first) as a model, for
    /// scoring a known mechanism rather than a fit. The covariance is zero
    /// and the model counts as converged.
    pub fn from_coefficients(spec: ModelSpec, coefficients: Vec<F>) -> Result<Self> {
        if coefficients.len() != spec.width() {
            return Err(Error::invalid(format!(
                "{} coefficients against design width {}",
                coefficients.len(),
                spec.width()
            )));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        let width = spec.width();
        Ok(FittedModel {
            spec,
            coefficients,
            covariance: vec![vec![F::zero(); width]; width],
            converged: true,
            separated: false,
            iterations: 0,
            train_rows: 0,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// Intercept first, then one coefficient per spec covariate.
    pub fn coefficients(&self) -> &[F] {
        &self.coefficients
    }

    pub fn covariance(&self) -> &[Vec<F>] {
        &self.covariance
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn separated(&self) -> bool {
        self.separated
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn train_rows(&self) -> usize {
        self.train_rows
    }

    /// Whether the model can produce predictions: all coefficients finite.
    /// True for capped (separated) fits, false only after numerical failure.
    pub fn usable(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_finite())
    }

    pub fn intercept(&self) -> F {
        self.coefficients[0]
    }

    fn covariate_position(&self, covariate: &str) -> Result<usize> {
        self.spec
            .covariates()
            .iter()
            .position(|c| c == covariate)
            .map(|i| i + 1)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "model {:?} has no covariate {covariate:?}",
                    self.spec.name()
                ))
            })
    }

    pub fn coefficient(&self, covariate: &str) -> Result<F> {
        Ok(self.coefficients[self.covariate_position(covariate)?])
    }

    /// Standard error of a covariate's coefficient.
    pub fn std_error(&self, covariate: &str) -> Result<F> {
        let j = self.covariate_position(covariate)?;
        let var = self.covariance[j][j];
        if var <= F::zero() || !var.is_finite() {
            return Err(Error::numerical(format!(
                "no usable standard error for {covariate:?}"
            )));
        }
        Ok(var.sqrt())
    }

    /// Predicted probabilities for a matrix of covariate values (no
    /// intercept column; width must equal the spec's covariate count).
    pub fn predict_prob(&self, features: &Matrix<F>) -> Result<Vec<F>> {
        let p = self.spec.covariates().len();
        if features.n_cols() != p {
            return Err(Error::invalid(format!(
                "feature width {} does not match the {} covariates of {:?}",
                features.n_cols(),
                p,
                self.spec.name()
            )));
        }
        Ok((0..features.n_rows())
            .map(|i| {
                let row = features.row(i);
                let mut eta = self.coefficients[0];
                for (j, &x) in row.iter().enumerate() {
                    eta += self.coefficients[j + 1] * x;
                }
                clamp_unit(inv_logit(eta))
            })
            .collect())
    }

    /// Predicted probabilities for dataset rows, with covariates found by
    /// name.
    pub fn predict_dataset(&self, data: &Dataset<F>) -> Result<Vec<F>> {
        let columns = covariate_columns(data, &self.spec)?;
        Ok((0..data.n_rows())
            .map(|i| {
                let row = data.row(i);
                let mut eta = self.coefficients[0];
                for (j, &col) in columns.iter().enumerate() {
                    eta += self.coefficients[j + 1] * row[col];
                }
                clamp_unit(inv_logit(eta))
            })
            .collect())
    }
}

fn covariate_columns<F: Real>(data: &Dataset<F>, spec: &ModelSpec) -> Result<Vec<usize>> {
    spec.covariates()
        .iter()
        .map(|name| {
            data.column_index(name).map_err(|_| {
                Error::contract(format!(
                    "dataset lacks covariate {name:?} required by model {:?}",
                    spec.name()
                ))
            })
        })
        .collect()
}

pub(crate) fn design_matrix<F: Real>(data: &Dataset<F>, spec: &ModelSpec) -> Result<Matrix<F>> {
    let columns = covariate_columns(data, spec)?;
    let mut x = Matrix::zeros(data.n_rows(), spec.width());
    for i in 0..data.n_rows() {
        x.set(i, 0, F::one());
        let row = data.row(i);
        for (j, &col) in columns.iter().enumerate() {
            x.set(i, j + 1, row[col]);
        }
    }
    Ok(x)
}

fn linear_predictor<F: Real>(x: &Matrix<F>, i: usize, beta: &[F]) -> F {
    x.row(i)
        .iter()
        .zip(beta)
        .map(|(&xv, &b)| xv * b)
        .fold(F::zero(), |acc, t| acc + t)
}

/// log(1 + exp(eta)) without overflow.
fn softplus<F: Real>(eta: F) -> F {
    eta.max(F::zero()) + (-eta.abs()).exp().ln_1p()
}

fn ll_at<F: Real>(x: &Matrix<F>, labels: &[u8], beta: &[F]) -> F {
    let mut ll = F::zero();
    for (i, &y) in labels.iter().enumerate() {
        let eta = linear_predictor(x, i, beta);
        let y = real::<F>(f64::from(y));
        ll += y * eta - softplus(eta);
    }
    ll
}

/// Score vector X'(y - p) and observed information X'WX at `beta`.
fn grad_info<F: Real>(x: &Matrix<F>, labels: &[u8], beta: &[F]) -> (Vec<F>, Matrix<F>) {
    let w = beta.len();
    let mut g = vec![F::zero(); w];
    let mut info = Matrix::zeros(w, w);
    for (i, &y) in labels.iter().enumerate() {
        let row = x.row(i);
        let p = inv_logit(linear_predictor(x, i, beta));
        let resid = real::<F>(f64::from(y)) - p;
        let weight = p * (F::one() - p);
        for a in 0..w {
            g[a] += row[a] * resid;
            for b in a..w {
                let v = info.get(a, b) + weight * row[a] * row[b];
                info.set(a, b, v);
            }
        }
    }
    for a in 0..w {
        for b in 0..a {
            info.set(a, b, info.get(b, a));
        }
    }
    (g, info)
}

fn max_abs<F: Real>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |m, &x| m.max(x.abs()))
}

fn ridged<F: Real>(info: &Matrix<F>, lambda: F) -> Matrix<F> {
    let mut out = info.clone();
    for a in 0..out.n_rows() {
        out.set(a, a, out.get(a, a) + lambda);
    }
    out
}

/// Inverse of the information matrix, falling back to progressively stronger
/// ridge terms when it is singular (separated or collinear fits). A fully
/// unusable matrix yields zeros; diagnostics flags tell callers not to trust
/// it in that case.
fn invert_info<F: Real>(info: &Matrix<F>) -> Vec<Vec<F>> {
    let w = info.n_rows();
    if let Some(inv) = info.inverse() {
        return inv.rows_vec();
    }
    let scale = (0..w)
        .map(|a| info.get(a, a))
        .fold(F::one(), |m, d| m.max(d.abs()));
    for lambda in [1e-10, 1e-8, 1e-6, 1e-4] {
        let inv = ridged(info, real::<F>(lambda) * scale).inverse();
        if let Some(inv) = inv {
            return inv.rows_vec();
        }
    }
    vec![vec![F::zero(); w]; w]
}

/// Bernoulli log-likelihood of `beta` for the spec's design on `data`.
pub fn log_likelihood<F: Real>(data: &Dataset<F>, spec: &ModelSpec, beta: &[F]) -> Result<F> {
    let x = design_matrix(data, spec)?;
    check_beta_width(spec, beta)?;
    Ok(ll_at(&x, data.labels(), beta))
}

/// Analytic gradient of [`log_likelihood`] in `beta`.
pub fn log_likelihood_gradient<F: Real>(
    data: &Dataset<F>,
    spec: &ModelSpec,
    beta: &[F],
) -> Result<Vec<F>> {
    let x = design_matrix(data, spec)?;
    check_beta_width(spec, beta)?;
    Ok(grad_info(&x, data.labels(), beta).0)
}

fn check_beta_width<F: Real>(spec: &ModelSpec, beta: &[F]) -> Result<()> {
    if beta.len() != spec.width() {
        return Err(Error::invalid(format!(
            "coefficient vector length {} does not match design width {}",
            beta.len(),
            spec.width()
        )));
    }
    Ok(())
}

/// Fits `spec` to `data` by Newton iterations on the Bernoulli likelihood.
///
/// Each step is halved until the log-likelihood does not decrease, so the
/// iteration is monotone. Quasi-complete separation (coefficients walking
/// past `coef_cap`) stops the fit with clamped coefficients and the
/// `separated` flag set instead of an error: small folds separate routinely
/// and a capped fit still ranks observations.
pub fn fit_logistic<F: Real>(
    data: &Dataset<F>,
    spec: &ModelSpec,
    options: &FitOptions<F>,
) -> Result<FittedModel<F>> {
    if !data.has_both_classes() {
        return Err(Error::contract(format!(
            "cannot fit {:?}: training data holds a single class",
            spec.name()
        )));
    }
    let x = design_matrix(data, spec)?;
    let labels = data.labels();
    let width = spec.width();
    let two = real::<F>(2.0);

    let mut beta = vec![F::zero(); width];
    let mut ll = ll_at(&x, labels, &beta);
    let mut converged = false;
    let mut separated = false;
    let mut iterations = 0;

    for _ in 0..options.max_iter {
        let (g, info) = grad_info(&x, labels, &beta);
        if max_abs(&g) <= options.tol {
            converged = true;
            break;
        }
        let delta = match info.solve(&g) {
            Some(d) => d,
            None => {
                let scale = (0..width)
                    .map(|a| info.get(a, a))
                    .fold(F::one(), |m, d| m.max(d.abs()));
                ridged(&info, real::<F>(1e-8) * scale)
                    .solve(&g)
                    .ok_or_else(|| {
                        Error::numerical(format!(
                            "singular information matrix fitting {:?}; covariates may be collinear",
                            spec.name()
                        ))
                    })?
            }
        };

        let mut step = F::one();
        let mut improved = false;
        for _ in 0..40 {
            let candidate: Vec<F> = beta
                .iter()
                .zip(&delta)
                .map(|(&b, &d)| b + step * d)
                .collect();
            let candidate_ll = ll_at(&x, labels, &candidate);
            let slack = (ll.abs() + F::one()) * real::<F>(1e-12);
            if candidate_ll >= ll - slack {
                beta = candidate;
                ll = candidate_ll;
                improved = true;
                break;
            }
            step = step / two;
        }
        iterations += 1;
        if !improved {
            break;
        }
        if max_abs(&beta) > options.coef_cap {
            separated = true;
            for b in beta.iter_mut() {
                *b = b.min(options.coef_cap).max(-options.coef_cap);
            }
            break;
        }
    }

    if !converged && !separated {
        let (g, _) = grad_info(&x, labels, &beta);
        converged = max_abs(&g) <= options.tol;
    }
    let (_, info) = grad_info(&x, labels, &beta);
    let covariance = invert_info(&info);

    Ok(FittedModel {
        spec: spec.clone(),
        coefficients: beta,
        covariance,
        converged,
        separated,
        iterations,
        train_rows: data.n_rows(),
    })
}
