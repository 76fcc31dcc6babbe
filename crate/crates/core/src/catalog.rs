//! Builtin varieties addressed as `builtin:<name>`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::lattice::IntMatrix;
use crate::poly::Variety;

pub const TWISTED_CUBIC: &str = "\
# twisted cubic in P^3
nvars=4
x1*x3 - x2^2
x2*x4 - x3^2
x1*x4 - x2*x3
";

pub const SEGRE_1X2: &str = "\
# Segre embedding of P^1 x P^2 in P^5
nvars=6
x1*x5 - x2*x4
x1*x6 - x3*x4
x2*x6 - x3*x5
";

pub const BUILTIN_NAMES: [&str; 2] = ["twisted-cubic", "segre-1x2"];

pub fn builtin_source(name: &str) -> Result<&'static str> {
    match name {
        "twisted-cubic" => Ok(TWISTED_CUBIC),
        "segre-1x2" => Ok(SEGRE_1X2),
        other => Err(Error::UnknownVariety(other.to_string())),
    }
}

pub fn builtin_variety(field: &FieldDescriptor, name: &str) -> Result<Variety> {
    Variety::parse(field, builtin_source(name)?)
}

/// Augmented exponent matrix of `f1·f2` on the twisted cubic, columns
/// `x1x2x3x4, x1x3³, x2³x4, x2²x3²`.
pub fn twisted_cubic_rtilde_12() -> IntMatrix {
    IntMatrix::from_rows(&[
        [1, 1, 0, 0],
        [1, 0, 3, 2],
        [1, 3, 0, 2],
        [1, 0, 1, 0],
        [1, 1, 1, 1],
    ])
}

/// Sign pattern of the columns of [`twisted_cubic_rtilde_12`].
pub const TWISTED_CUBIC_SIGNS_12: [i64; 4] = [1, -1, -1, 1];

/// Augmented exponent matrix of the six-term reduction of `f1·f2·f3` on the twisted cubic.
pub fn twisted_cubic_rtilde_123() -> IntMatrix {
    IntMatrix::from_rows(&[
        [2, 2, 1, 1, 0, 0],
        [1, 0, 1, 3, 4, 3],
        [1, 3, 4, 0, 1, 3],
        [2, 1, 0, 2, 1, 0],
        [1, 1, 1, 1, 1, 1],
    ])
}

/// Sign pattern of the columns of the six-term matrices.
pub const SIGNS_123: [i64; 6] = [1, -1, 1, -1, 1, -1];

/// Augmented exponent matrix of `f1·f2` on the Segre threefold.
pub fn segre_rtilde_12() -> IntMatrix {
    IntMatrix::from_rows(&[
        [2, 1, 1, 0],
        [0, 0, 1, 1],
        [0, 1, 0, 1],
        [0, 1, 1, 2],
        [1, 1, 0, 0],
        [1, 0, 1, 0],
        [1, 1, 1, 1],
    ])
}

/// Augmented exponent matrix of the six-term reduction of `f1·f2·f3` on the Segre threefold.
pub fn segre_rtilde_123() -> IntMatrix {
    IntMatrix::from_rows(&[
        [2, 2, 1, 1, 0, 0],
        [1, 0, 0, 2, 2, 1],
        [0, 1, 2, 0, 1, 2],
        [0, 0, 1, 1, 2, 2],
        [1, 2, 2, 0, 0, 1],
        [2, 1, 0, 2, 1, 0],
        [1, 1, 1, 1, 1, 1],
    ])
}

/// `{(k, -k, -k, k)}` in `(Z/m)^4`.
pub fn kernel_12_expected(m: u64) -> BTreeSet<Vec<u64>> {
    (0..m)
        .map(|k| vec![k, (m - k) % m, (m - k) % m, k])
        .collect()
}

/// `{(-2a-2b-c, 2a+3b+2c, -a-2b-2c, a, b, c)}` in `(Z/m)^6`.
pub fn kernel_123_expected(m: u64) -> BTreeSet<Vec<u64>> {
    let mi = m as i64;
    let r = |x: i64| x.rem_euclid(mi) as u64;
    let mut out = BTreeSet::new();
    for a in 0..mi {
        for b in 0..mi {
            for c in 0..mi {
                out.insert(vec![
                    r(-2 * a - 2 * b - c),
                    r(2 * a + 3 * b + 2 * c),
                    r(-a - 2 * b - 2 * c),
                    a as u64,
                    b as u64,
                    c as u64,
                ]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        let f = FieldDescriptor::from_order(5).unwrap();
        assert_eq!(builtin_variety(&f, "twisted-cubic").unwrap().polys.len(), 3);
        assert_eq!(builtin_variety(&f, "segre-1x2").unwrap().nvars, 6);
        assert_eq!(
            builtin_variety(&f, "quartic"),
            Err(Error::UnknownVariety("quartic".into()))
        );
    }

    #[test]
    fn parameterizations_lie_in_kernels() {
        let m = 6;
        for v in kernel_12_expected(m) {
            assert!(twisted_cubic_rtilde_12()
                .mul_vec_mod(&v, m)
                .iter()
                .all(|&y| y == 0));
        }
        for v in kernel_123_expected(m) {
            assert!(twisted_cubic_rtilde_123()
                .mul_vec_mod(&v, m)
                .iter()
                .all(|&y| y == 0));
            assert!(segre_rtilde_123()
                .mul_vec_mod(&v, m)
                .iter()
                .all(|&y| y == 0));
        }
        assert_eq!(kernel_123_expected(m).len(), 216);
    }
}
