//! Two-sample Kolmogorov-Smirnov statistic.

use crate::error::{Error, Result};
use crate::scalar::{real_usize, Real};

fn sorted_finite<F: Real>(sample: &[F], name: &str) -> Result<Vec<F>> {
    if sample.is_empty() {
        return Err(Error::invalid(format!("sample {name} is empty")));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("sample {name} contains non-finite values")));
    }
    let mut out = sample.to_vec();
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    Ok(out)
}

/// Largest absolute difference between the two empirical CDFs, evaluated at
/// every pooled sample point (the ECDFs are right-continuous, so the
/// supremum is attained at one of them).
pub fn ks_statistic<F: Real>(a: &[F], b: &[F]) -> Result<F> {
    let a = sorted_finite(a, "a")?;
    let b = sorted_finite(b, "b")?;
    let na = real_usize::<F>(a.len());
    let nb = real_usize::<F>(b.len());
    let mut ia = 0;
    let mut ib = 0;
    let mut d = F::zero();
    while ia < a.len() || ib < b.len() {
        let v = match (a.get(ia), b.get(ib)) {
            (Some(&va), Some(&vb)) => va.min(vb),
            (Some(&va), None) => va,
            (None, Some(&vb)) => vb,
            (None, None) => unreachable!(),
        };
        while ia < a.len() && a[ia] <= v {
            ia += 1;
        }
        while ib < b.len() && b[ib] <= v {
            ib += 1;
        }
        let fa = real_usize::<F>(ia) / na;
        let fb = real_usize::<F>(ib) / nb;
        d = d.max((fa - fb).abs());
    }
    Ok(d)
}
