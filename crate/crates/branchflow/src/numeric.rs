//! Floating point rendering of cyclotomic scalars. Display only: nothing
//! computed here feeds back into exact results.

use std::f64::consts::PI;

use branchflow_core::Scalar;
use num_traits::ToPrimitive;

/// `[re, im]` of a scalar of `Q(zeta_order)` under `zeta -> exp(2 pi i / order)`.
pub fn complex(s: &Scalar, order: u32) -> [f64; 2] {
    let order = order.max(1);
    let mut out = [0.0, 0.0];
    for (k, c) in s.coordinates(order).iter().enumerate() {
        let c = c.to_f64().unwrap_or(f64::NAN);
        let a = 2.0 * PI * k as f64 / order as f64;
        out[0] += c * a.cos();
        out[1] += c * a.sin();
    }
    out
}

/// All `d`-th roots of a complex number, by increasing argument offset.
pub fn roots(z: &[f64; 2], d: u32) -> Vec<[f64; 2]> {
    let r = z[0].hypot(z[1]).powf(1.0 / d as f64);
    let arg = z[1].atan2(z[0]);
    (0..d)
        .map(|k| {
            let a = (arg + 2.0 * PI * k as f64) / d as f64;
            [r * a.cos(), r * a.sin()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_cube_root() {
        let z = Scalar::parse("1*z^4", 12).unwrap();
        let [re, im] = complex(&z, 12);
        assert!((re + 0.5).abs() < 1e-12 && (im - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(roots(&[8.0, 0.0], 3).len(), 3);
        assert!((roots(&[8.0, 0.0], 3)[0][0] - 2.0).abs() < 1e-12);
    }
}
