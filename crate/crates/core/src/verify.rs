//! Closed-form identity sweeps over prime powers.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::catalog;
use crate::chars::{CharacterIndex, Characters};
use crate::count::{segre_assembly, twisted_cubic_assembly, PointCounter};
use crate::error::Result;
use crate::expsum;
use crate::field::{prime_powers_up_to, FieldDescriptor};
use crate::lattice::{kernel_mod, smith_normal_form, IntMatrix};
use crate::oracle;
use crate::par::Exec;

/// Largest `(q^n - 1)/(q - 1)` for which a sweep also runs the brute-force oracle.
pub const ORACLE_SWEEP_CAP: u64 = 1_000_000;
const CHAR_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub name: String,
    pub q: u64,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    fn push(&mut self, row: VerifyRow) {
        self.rows.push(row);
        self.pass = self.rows.iter().all(|r| r.pass);
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

struct Sweep<'a> {
    report: VerifyReport,
    q: u64,
    sink: &'a mut dyn FnMut(&VerifyRow),
}

impl Sweep<'_> {
    /// Records `name` with an exact integer comparison.
    fn exact<F>(&mut self, name: &str, expected: i128, actual: F)
    where
        F: FnOnce() -> Result<i128>,
    {
        let start = Instant::now();
        let actual = actual();
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let (actual, pass) = match actual {
            Ok(v) => (v.to_string(), v == expected),
            Err(e) => (format!("error: {e}"), false),
        };
        self.record(name, expected.to_string(), actual, pass, wall_ms);
    }

    /// Records `name` as passing when `check` returns a deviation below `tol`.
    fn within<F>(&mut self, name: &str, tol: f64, check: F)
    where
        F: FnOnce() -> Result<f64>,
    {
        let start = Instant::now();
        let dev = check();
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let (actual, pass) = match dev {
            Ok(d) => (format!("{d:.3e}"), d < tol),
            Err(e) => (format!("error: {e}"), false),
        };
        self.record(name, format!("< {tol:e}"), actual, pass, wall_ms);
    }

    /// Records `name` as passing when `check` returns `true`.
    fn holds<F>(&mut self, name: &str, check: F)
    where
        F: FnOnce() -> Result<bool>,
    {
        let start = Instant::now();
        let ok = check();
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let (actual, pass) = match ok {
            Ok(b) => (b.to_string(), b),
            Err(e) => (format!("error: {e}"), false),
        };
        self.record(name, "true".into(), actual, pass, wall_ms);
    }

    fn record(&mut self, name: &str, expected: String, actual: String, pass: bool, wall_ms: f64) {
        let row = VerifyRow {
            name: name.to_string(),
            q: self.q,
            expected,
            actual,
            pass,
            wall_ms,
        };
        (self.sink)(&row);
        self.report.push(row);
    }
}

fn characters(q: u64, shift: u32, exec: Exec) -> Result<Characters> {
    Ok(Characters::new(Arc::new(FieldDescriptor::from_order(q)?), shift)?.with_exec(exec))
}

fn l_closed(q: i128) -> i128 {
    2 * q * q - 3 * q - 1
}

fn projective_size(q: u64, nvars: u32) -> u64 {
    q.checked_pow(nvars).map_or(u64::MAX, |t| (t - 1) / (q - 1))
}

fn kernel_set(r: &IntMatrix, m: u64) -> Result<BTreeSet<Vec<u64>>> {
    Ok(kernel_mod(r, m)?.iter().collect())
}

fn snf_holds(r: &IntMatrix) -> Result<bool> {
    let s = smith_normal_form(r)?;
    let d = s.invariant_factors();
    let chain = d
        .windows(2)
        .all(|w| (w[0] != 0 && w[1] % w[0] == 0) || w[1] == 0);
    Ok(s.u.mul(r)?.mul(&s.v)? == s.d && chain)
}

/// Every closed-form identity for the twisted cubic, the Segre threefold and `L`,
/// plus the character and lattice checks they rest on, for each prime power `q <= qmax`.
pub fn verify_identities(
    qmax: u64,
    exec: Exec,
    sink: &mut dyn FnMut(&VerifyRow),
) -> Result<VerifyReport> {
    let mut sweep = Sweep {
        report: VerifyReport {
            pass: true,
            rows: Vec::new(),
        },
        q: 0,
        sink,
    };
    let fixtures = [
        catalog::twisted_cubic_rtilde_12(),
        catalog::twisted_cubic_rtilde_123(),
        catalog::segre_rtilde_12(),
        catalog::segre_rtilde_123(),
    ];
    for (i, r) in fixtures.iter().enumerate() {
        sweep.holds(&format!("snf/fixture-{}", i + 1), || snf_holds(r));
    }

    for q in prime_powers_up_to(qmax) {
        sweep.q = q;
        let chars = characters(q, 1, exec)?;
        let field = chars.field();
        let m = q - 1;
        let (qi, mi) = (q as i128, m as i128);
        let l = l_closed(qi);

        sweep.within("characters/orthogonality", CHAR_TOLERANCE, || {
            Ok(chars.orthogonality_check().max())
        });
        sweep.within("characters/gauss-product", CHAR_TOLERANCE, || {
            let mut worst: f64 = 0.0;
            let minus_one = field.neg(crate::field::FieldElement::ONE);
            for k in 1..m as i64 {
                let (a, b) = (
                    CharacterIndex::new(field, k),
                    CharacterIndex::new(field, -k),
                );
                let lhs = chars.gauss_sum(a) * chars.gauss_sum(b);
                let rhs = chars.chi(a, minus_one) * q as f64;
                worst = worst.max((lhs - rhs).norm() / q as f64);
            }
            Ok(worst)
        });
        sweep.within("characters/theta-via-gauss", CHAR_TOLERANCE, || {
            let mut worst: f64 = 0.0;
            for x in field.units() {
                worst = worst.max((chars.theta_via_gauss(x)? - chars.theta(x)).norm());
            }
            Ok(worst)
        });

        sweep.exact("L", l, || Ok(expsum::l_sum(&chars)? as i128));
        sweep.exact("twisted-cubic/assembly", qi + 1, || {
            Ok(twisted_cubic_assembly(&chars)? as i128)
        });
        sweep.exact("segre-1x2/assembly", (qi + 1) * (qi * qi + qi + 1), || {
            Ok(segre_assembly(&chars)? as i128)
        });

        let counter = PointCounter::new(characters(q, 1, exec)?);
        let cubic = catalog::builtin_variety(field, "twisted-cubic")?;
        let report = counter.projective_count(&cubic);
        let nx = |key: &str| -> Result<i128> {
            let r = report.as_ref().map_err(Clone::clone)?;
            Ok(r.nx.get(key).copied().unwrap_or(u64::MAX) as i128)
        };
        sweep.exact("twisted-cubic/total", qi + 1, || {
            Ok(report.as_ref().map_err(Clone::clone)?.total as i128)
        });
        sweep.exact("twisted-cubic/N0", 2, || {
            Ok(report.as_ref().map_err(Clone::clone)?.n0 as i128)
        });
        for key in ["1", "2", "3"] {
            sweep.exact(&format!("twisted-cubic/N×{key}"), mi * mi, || nx(key));
        }
        for key in ["1,2", "1,3", "2,3"] {
            sweep.exact(
                &format!("twisted-cubic/N×{key}"),
                2 * qi * qi - 5 * qi + 3,
                || nx(key),
            );
        }
        sweep.exact("twisted-cubic/N×1,2,3", (mi.pow(3) + mi * l) / qi, || {
            nx("1,2,3")
        });
        if projective_size(q, 4) <= ORACLE_SWEEP_CAP {
            sweep.exact("twisted-cubic/oracle", qi + 1, || {
                Ok(oracle::brute_projective_count_with(exec, field, &cubic)? as i128)
            });
        }

        let segre = catalog::builtin_variety(field, "segre-1x2")?;
        let report = counter.projective_count(&segre);
        let nx = |key: &str| -> Result<i128> {
            let r = report.as_ref().map_err(Clone::clone)?;
            Ok(r.nx.get(key).copied().unwrap_or(u64::MAX) as i128)
        };
        sweep.exact("segre-1x2/total", (qi + 1) * (qi * qi + qi + 1), || {
            Ok(report.as_ref().map_err(Clone::clone)?.total as i128)
        });
        sweep.exact("segre-1x2/N0", 5 * qi * qi - qi + 2, || {
            Ok(report.as_ref().map_err(Clone::clone)?.n0 as i128)
        });
        for key in ["1", "2", "3"] {
            sweep.exact(&format!("segre-1x2/N×{key}"), mi.pow(4), || nx(key));
        }
        for key in ["1,2", "1,3", "2,3"] {
            sweep.exact(
                &format!("segre-1x2/N×{key}"),
                mi * mi * (2 * qi * qi - 5 * qi + 3),
                || nx(key),
            );
        }
        sweep.exact(
            "segre-1x2/N×1,2,3",
            (mi.pow(5) + mi.pow(3) * l) / qi,
            || nx("1,2,3"),
        );
        if projective_size(q, 6) <= ORACLE_SWEEP_CAP {
            sweep.exact("segre-1x2/oracle", (qi + 1) * (qi * qi + qi + 1), || {
                Ok(oracle::brute_projective_count_with(exec, field, &segre)? as i128)
            });
        }

        if q > 2 {
            sweep.holds("kernel/twisted-cubic-12", || {
                Ok(kernel_set(&catalog::twisted_cubic_rtilde_12(), m)?
                    == catalog::kernel_12_expected(m))
            });
            sweep.holds("kernel/twisted-cubic-123", || {
                Ok(kernel_set(&catalog::twisted_cubic_rtilde_123(), m)?
                    == catalog::kernel_123_expected(m))
            });
            sweep.holds("kernel/segre-123", || {
                Ok(kernel_set(&catalog::segre_rtilde_123(), m)?
                    == kernel_set(&catalog::twisted_cubic_rtilde_123(), m)?)
            });
            if m.checked_pow(4).is_some_and(|t| t <= oracle::KERNEL_CAP) {
                sweep.holds("kernel/oracle-12", || {
                    let r = catalog::twisted_cubic_rtilde_12();
                    Ok(kernel_set(&r, m)? == oracle::brute_kernel(&r, m)?)
                });
            }
        }
    }
    Ok(sweep.report)
}

/// `L = 2q² - 3q - 1` for each prime power `q <= qmax` and every additive character shift.
pub fn verify_l(qmax: u64, exec: Exec, sink: &mut dyn FnMut(&VerifyRow)) -> Result<VerifyReport> {
    let mut sweep = Sweep {
        report: VerifyReport {
            pass: true,
            rows: Vec::new(),
        },
        q: 0,
        sink,
    };
    for q in prime_powers_up_to(qmax) {
        sweep.q = q;
        let p = FieldDescriptor::from_order(q)?.p();
        for shift in 1..p {
            let chars = characters(q, shift, exec)?;
            sweep.exact(&format!("L/shift={shift}"), l_closed(q as i128), || {
                Ok(expsum::l_sum(&chars)? as i128)
            });
        }
    }
    Ok(sweep.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        let mut seen = 0;
        let report = verify_identities(5, Exec::Sequential, &mut |_| seen += 1).unwrap();
        assert!(report.pass, "{:?}", report.failures().collect::<Vec<_>>());
        assert_eq!(seen, report.rows.len());
        let report = verify_l(9, Exec::Parallel, &mut |_| {}).unwrap();
        assert!(report.pass);
        // q = 9 has two shifts
        assert_eq!(report.rows.iter().filter(|r| r.q == 9).count(), 2);
    }
}
