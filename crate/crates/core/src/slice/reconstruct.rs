//! Continued-fraction reconstruction of rationals from floating point.

use num_bigint::BigInt;

use crate::exact::Rat;

/// The last convergent of `x` whose denominator does not exceed `max_den`.
pub fn best_rational(x: f64, max_den: u64) -> Option<Rat> {
    if !x.is_finite() || x.abs() > 1e15 || max_den == 0 {
        return None;
    }
    let max_den = max_den as i128;
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i128;
        let h_next = ai.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = ai.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > max_den {
            break;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
        let frac = rest - a;
        if frac < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
        if !rest.is_finite() {
            break;
        }
    }
    (k > 0).then(|| Rat::new(BigInt::from(h), BigInt::from(k)))
}
