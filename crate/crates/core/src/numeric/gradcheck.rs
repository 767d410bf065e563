use super::Matrix;
use crate::error::{GucError, Result};

/// Maximum relative error between central differences of `f` around
/// `params` and `analytic`.
///
/// Per coordinate the error is `|numeric - analytic| / max(1e-8, |numeric| + |analytic|)`.
pub fn grad_check<F>(f: F, params: &Matrix, analytic: &Matrix, h: f64) -> Result<f64>
where
    F: FnMut(&Matrix) -> f64,
{
    grad_check_masked(f, params, analytic, h, |_| true)
}

/// Like [`grad_check`] but only coordinates for which `include` returns
/// true are perturbed. Used to step around kinks of non-smooth losses.
pub fn grad_check_masked<F, P>(
    mut f: F,
    params: &Matrix,
    analytic: &Matrix,
    h: f64,
    mut include: P,
) -> Result<f64>
where
    F: FnMut(&Matrix) -> f64,
    P: FnMut(usize) -> bool,
{
    if !(h > 0.0) {
        return Err(GucError::InvalidArgument(format!("step h must be positive, got {h}")));
    }
    params.check_same_shape("grad_check", analytic)?;

    let mut probe = params.clone();
    let mut worst: f64 = 0.0;
    for i in 0..params.len() {
        if !include(i) {
            continue;
        }
        let orig = probe.as_slice()[i];
        probe.as_mut_slice()[i] = orig + h;
        let plus = f(&probe);
        probe.as_mut_slice()[i] = orig - h;
        let minus = f(&probe);
        probe.as_mut_slice()[i] = orig;
        if !plus.is_finite() || !minus.is_finite() {
            return Err(GucError::NonFinite(format!("loss at perturbed coordinate {i}")));
        }
        let numeric = (plus - minus) / (2.0 * h);
        let ana = analytic.as_slice()[i];
        let rel = (numeric - ana).abs() / (numeric.abs() + ana.abs()).max(1e-8);
        worst = worst.max(rel);
    }
    Ok(worst)
}
