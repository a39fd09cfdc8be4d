use num_bigint::BigInt;
use num_traits::Zero;

use super::BimodError;

/// Hilbert series of `P^{W_K} (x)_{R^W} R` through `t^n`:
/// `prod_K 1/(1 - t^(2d)) * prod_G (1 - t^(2d)) / (1 - t^2)^{n_T}`.
///
/// The inputs are the degrees of fundamental invariants of `W_K` and `W`
/// and the number of generators of `R`. Every factor has constant term 1,
/// so the quotient is an honest power series and is computed exactly.
pub fn equivariant_poincare(
    degrees_k: &[u32],
    degrees_g: &[u32],
    n_t: u32,
    n: usize,
) -> Result<Vec<BigInt>, BimodError> {
    if let Some(d) = degrees_k.iter().chain(degrees_g).find(|d| **d == 0) {
        return Err(BimodError::BadSeries(format!("invariant degree {d} must be positive")));
    }
    let mut series = vec![BigInt::zero(); n + 1];
    series[0] = BigInt::from(1);
    let geometric = |s: &mut Vec<BigInt>, step: usize| {
        // Multiply by 1/(1 - t^step) as a running sum.
        for i in step..s.len() {
            let prev = s[i - step].clone();
            s[i] += prev;
        }
    };
    for &d in degrees_k {
        geometric(&mut series, 2 * d as usize);
    }
    for _ in 0..n_t {
        geometric(&mut series, 2);
    }
    for &d in degrees_g {
        let step = 2 * d as usize;
        for i in (step..series.len()).rev() {
            let prev = series[i - step].clone();
            series[i] -= prev;
        }
    }
    Ok(series)
}
