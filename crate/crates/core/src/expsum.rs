//! Exponential sums `Σ_{t ∈ (F_q^×)^k} θ(g(t))` for Laurent polynomials `g`.

use num_complex::Complex64;
use serde::Serialize;

use crate::chars::Characters;
use crate::count::{self, weighted_kernel_sum};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::lattice::{kernel_mod, IntMatrix};
use crate::par::{self, CompensatedSum};
use crate::poly::{SparsePoly, TorusWalker};

/// Cap on `k · (q-1)^k` term evaluations.
pub const DEFAULT_TERM_CAP: u64 = 100_000_000;

/// The six-term Laurent polynomial whose exponential sum is `L`.
pub const L_POLYNOMIAL: &str = "t1 + t2 + t3 - t1^2*t2^-2*t3 - t1^2*t2^-3*t3^2 - t1*t2^-2*t3^2";

#[derive(Clone, Debug, Serialize)]
pub struct ExpSumResult {
    pub field: String,
    pub theta_shift: u32,
    pub re: f64,
    pub im: f64,
    /// Present when the value is within `1e-6` of an integer.
    pub rounded: Option<i64>,
}

impl ExpSumResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

pub fn laurent_exp_sum(chars: &Characters, g: &SparsePoly) -> Result<ExpSumResult> {
    laurent_exp_sum_capped(chars, g, DEFAULT_TERM_CAP)
}

pub fn laurent_exp_sum_capped(
    chars: &Characters,
    g: &SparsePoly,
    cap: u64,
) -> Result<ExpSumResult> {
    let field = chars.field();
    let m = field.unit_order() as u64;
    let k = g.nvars() as u32;
    let work = m
        .checked_pow(k)
        .and_then(|t| t.checked_mul(k.max(1) as u64))
        .filter(|&w| w <= cap)
        .ok_or_else(|| Error::EnumerationTooLarge {
            size: format!("{k}*{m}^{k}"),
            cap,
        })?;
    debug_assert!(work <= cap);

    let value = if g.is_zero() {
        Complex64::new((m as f64).powi(k as i32), 0.0)
    } else {
        let walker = TorusWalker::new(field, g);
        let slices = par::map_indexed(chars.exec(), walker.slices() as usize, |s| {
            let mut acc = CompensatedSum::default();
            walker.walk_slice(s as u64, |v| acc.add(chars.theta_of_trace(field.trace(v))));
            acc.value()
        });
        slices.into_iter().collect::<CompensatedSum>().value()
    };
    let rounded = value.re.round();
    let integral = (value.re - rounded).abs() < 1e-6 && value.im.abs() < 1e-6;
    Ok(ExpSumResult {
        field: field.spec_string(),
        theta_shift: chars.shift(),
        re: value.re,
        im: value.im,
        rounded: integral.then_some(rounded as i64),
    })
}

pub fn l_polynomial(field: &FieldDescriptor) -> SparsePoly {
    SparsePoly::parse(field, L_POLYNOMIAL, 3).expect("fixed polynomial parses")
}

/// `L = Σ_{t ∈ (F_q^×)^3} θ(t1 + t2 + t3 - t1²t2⁻²t3 - t1²t2⁻³t3² - t1t2⁻²t3²)`,
/// by direct enumeration of the torus.
pub fn l_sum(chars: &Characters) -> Result<i64> {
    let r = laurent_exp_sum(chars, &l_polynomial(chars.field()))?;
    let (value, _) = count::round_count(r.value(), 1.0)?;
    Ok(value)
}

/// `Σ_{v ∈ Ker R̃} Π_j G(χ_{v_j}^{-1}) χ_{v_j}(c_j) · Π_{j ∈ signs} χ_{v_j}(-1)`,
/// with `sign_indices` 0-based.
pub fn gauss_product_sum(
    chars: &Characters,
    rtilde: &IntMatrix,
    coeffs: &[FieldElement],
    sign_indices: &[usize],
    kernel_cap: u64,
) -> Result<Complex64> {
    let field = chars.field();
    if coeffs.len() != rtilde.cols() || sign_indices.iter().any(|&j| j >= coeffs.len()) {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} columns",
            coeffs.len(),
            rtilde.cols()
        )));
    }
    let kernel = kernel_mod(rtilde, field.unit_order() as u64)?;
    match kernel.size() {
        Some(s) if s <= kernel_cap => {}
        s => {
            return Err(Error::KernelTooLarge {
                size: s.map_or_else(
                    || format!("10^{:.1}", kernel.log10_size()),
                    |s| s.to_string(),
                ),
                cap: kernel_cap,
            })
        }
    }
    // χ(-1)χ(c) = χ(-c)
    let mut twisted = coeffs.to_vec();
    for &j in sign_indices {
        twisted[j] = field.neg(twisted[j]);
    }
    weighted_kernel_sum(chars, &kernel, &twisted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn chars(q: u64) -> Characters {
        Characters::new(Arc::new(FieldDescriptor::from_order(q).unwrap()), 1).unwrap()
    }

    #[test]
    fn elementary_sums() {
        for q in [2u64, 3, 4, 7, 9] {
            let c = chars(q);
            let t1 = SparsePoly::parse(c.field(), "t1", 1).unwrap();
            assert_eq!(laurent_exp_sum(&c, &t1).unwrap().rounded, Some(-1));
            let zero = SparsePoly::zero(2);
            assert_eq!(
                laurent_exp_sum(&c, &zero).unwrap().rounded,
                Some(((q - 1) * (q - 1)) as i64)
            );
        }
    }

    #[test]
    fn l_at_small_q() {
        assert_eq!(l_sum(&chars(2)).unwrap(), 1);
        assert_eq!(l_sum(&chars(3)).unwrap(), 8);
        assert_eq!(l_sum(&chars(5)).unwrap(), 34);
        assert_eq!(l_sum(&chars(9)).unwrap(), 134);
    }

    #[test]
    fn cap_is_enforced() {
        let c = chars(7);
        let g = l_polynomial(c.field());
        assert!(matches!(
            laurent_exp_sum_capped(&c, &g, 100),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn trivial_kernel_sum() {
        let c = chars(5);
        let s = gauss_product_sum(
            &c,
            &IntMatrix::from_rows(&[[1]]),
            &[FieldElement::ONE],
            &[],
            10,
        )
        .unwrap();
        assert!((s - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quadratic_kernel_sum() {
        for q in [3u64, 4, 5, 7, 8, 9] {
            let c = chars(q);
            let rt = IntMatrix::from_rows(&[
                [1, 1, 0, 0],
                [1, 0, 3, 2],
                [1, 3, 0, 2],
                [1, 0, 1, 0],
                [1, 1, 1, 1],
            ]);
            let ones = vec![FieldElement::ONE; 4];
            let s = gauss_product_sum(&c, &rt, &ones, &[1, 2], 1000).unwrap();
            let qf = q as f64;
            assert!((s - Complex64::new(qf * qf * (qf - 2.0) + 1.0, 0.0)).norm() < 1e-6);
        }
    }
}
