use crate::error::{Error, Result};

/// `sign(z)·max(|z| − t, 0)`.
#[inline]
pub fn soft_threshold(z: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Relative tolerance for treating two objective values as tied.
const TIE_RTOL: f64 = 1e-12;

#[inline]
fn dist_to_signal(b: f64) -> f64 {
    b.abs().min((b - 1.0).abs())
}

/// Exact minimiser of `½·c·β² − ρ·β + λw·min{|β|, |β − 1|}`.
///
/// The penalty is the pointwise minimum of two convex arms, so the global
/// minimum is the better of the two arm minimisers. Ties go to the candidate
/// nearer a signal value, then to 0.
pub fn md_coordinate_update(rho: f64, col_sq_norm: f64, w: f64, lambda: f64) -> Result<f64> {
    if !(col_sq_norm > 0.0) {
        return Err(Error::DegenerateColumn(0));
    }
    Ok(md_update_unchecked(rho, col_sq_norm, w * lambda))
}

#[inline]
pub(crate) fn md_update_unchecked(rho: f64, c: f64, t: f64) -> f64 {
    let zero_arm = soft_threshold(rho, t) / c;
    let one_arm = 1.0 + soft_threshold(rho - c, t) / c;
    let f = |b: f64| 0.5 * c * b * b - rho * b + t * dist_to_signal(b);
    let (f0, f1) = (f(zero_arm), f(one_arm));
    let scale = 0.5 * c * (1.0 + zero_arm * zero_arm + one_arm * one_arm)
        + (rho.abs() + t) * (1.0 + zero_arm.abs() + one_arm.abs());
    if (f0 - f1).abs() <= TIE_RTOL * scale {
        let (d0, d1) = (dist_to_signal(zero_arm), dist_to_signal(one_arm));
        if d1 < d0 {
            one_arm
        } else {
            zero_arm
        }
    } else if f0 < f1 {
        zero_arm
    } else {
        one_arm
    }
}

/// Exact minimiser of `½·c·β² − ρ·β + λ₁|β| + λ₂|β − 1|` (convex, kinks at 0 and 1).
pub fn signal_lasso_update(rho: f64, col_sq_norm: f64, lambda1: f64, lambda2: f64) -> Result<f64> {
    if !(col_sq_norm > 0.0) {
        return Err(Error::DegenerateColumn(0));
    }
    Ok(signal_update_unchecked(rho, col_sq_norm, lambda1, lambda2))
}

#[inline]
pub(crate) fn signal_update_unchecked(rho: f64, c: f64, l1: f64, l2: f64) -> f64 {
    let f = |b: f64| 0.5 * c * b * b - rho * b + l1 * b.abs() + l2 * (b - 1.0).abs();
    let candidates = [
        ((rho - l1 + l2) / c).clamp(0.0, 1.0),
        ((rho + l1 + l2) / c).min(0.0),
        ((rho - l1 - l2) / c).max(1.0),
    ];
    let mut best = candidates[0];
    let mut best_f = f(best);
    for &b in &candidates[1..] {
        let fb = f(b);
        if fb < best_f {
            best = b;
            best_f = fb;
        }
    }
    best
}
