//! Point counting on tori and projective spaces.
//!
//! For `f = Σ_j c_j x^{r_j}` with `N` terms in `n` variables,
//!
//! ```text
//! #{x ∈ (F_q^×)^n : f(x) = 0}
//!     = (q-1)^n / q + (q-1)^{n+1-N} / q · Σ_{v ∈ Ker R̃} Π_j G(χ_{v_j}^{-1}) χ_{v_j}(c_j)
//! ```
//!
//! where `R̃` is the exponent matrix with an all-ones row appended and the kernel is
//! taken in `(Z/(q-1))^N`. Common zero loci come from zero loci of products by
//! inclusion-exclusion, and projective counts from a stratification of `P^n` by the
//! set of nonzero coordinates.

use std::collections::HashMap;

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::Serialize;

use crate::chars::Characters;
use crate::error::{Error, Result};
use crate::expsum;
use crate::field::{FieldDescriptor, FieldElement};
use crate::lattice::{kernel_mod, KernelEnumeration};
use crate::par::{self, CompensatedSum};
use crate::poly::{SparsePoly, TorusWalker, Variety};

pub const DEFAULT_KERNEL_CAP: u64 = 10_000_000;
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;
/// Absolute rounding tolerance, scaled by `max(1, (q-1)^n)`.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

/// Largest count the floating-point route can round exactly.
const EXACT_F64: u64 = 1 << 53;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Kernel formula unless the kernel is larger than the torus.
    #[default]
    Auto,
    Formula,
    Enumerate,
}

#[derive(Clone, Copy, Debug)]
pub struct CountConfig {
    pub kernel_cap: u64,
    pub enumeration_cap: u64,
    pub strategy: Strategy,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            kernel_cap: DEFAULT_KERNEL_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            strategy: Strategy::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    /// Zero polynomial or a single term.
    Trivial,
    Formula,
    Enumeration,
}

/// One torus hypersurface count with provenance.
#[derive(Clone, Debug, Serialize)]
pub struct TorusCount {
    pub count: u64,
    pub method: CountMethod,
    pub terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelEnumeration>,
    pub residual: f64,
}

/// Result of a projective count.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub field: String,
    pub theta_shift: u32,
    pub inputs: Vec<String>,
    /// Points with at least one zero coordinate.
    pub n0: u64,
    /// Points of the open stratum on `∪_{i∈S} V(f_i)`, keyed by `S` (1-based, comma-joined).
    pub nx: IndexMap<String, u64>,
    /// Points of `V` with all coordinates nonzero.
    pub open: u64,
    pub total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_total: Option<u64>,
    /// Points of `V` per stratum, keyed by the nonzero coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strata: Option<IndexMap<String, u64>>,
    /// Torus counts behind each entry of `nx`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernels: Option<IndexMap<String, TorusCount>>,
}

impl CountReport {
    /// Re-evaluates `open = Σ_{S≠∅} (-1)^{|S|+1} N×_S` and `total = n0 + open`.
    pub fn is_consistent(&self) -> bool {
        let alternating: i128 = self
            .nx
            .iter()
            .map(|(k, &v)| {
                let size = k.split(',').count();
                if size % 2 == 1 {
                    v as i128
                } else {
                    -(v as i128)
                }
            })
            .sum();
        let open_ok = self.nx.is_empty() || alternating == self.open as i128;
        open_ok && self.total == self.n0 + self.open
    }

    /// Drops the per-stratum and per-kernel detail.
    pub fn summary(mut self) -> Self {
        self.strata = None;
        self.kernels = None;
        self
    }
}

fn subset_key(indices: impl IntoIterator<Item = usize>) -> String {
    indices
        .into_iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Nonempty subsets of `0..m` as bitmasks, ordered by size and then lexicographically.
fn ordered_subsets(m: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (1..(1u64 << m)).collect();
    masks.sort_by_key(|&mask| {
        let members: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        (members.len(), members)
    });
    masks
}

fn members(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `Σ_{v ∈ kernel} Π_j G(χ_{v_j}^{-1}) χ_{v_j}(c_j)`, in a fixed summation order.
pub(crate) fn weighted_kernel_sum(
    chars: &Characters,
    kernel: &KernelEnumeration,
    coeffs: &[FieldElement],
) -> Result<Complex64> {
    let field = chars.field();
    let m = field.unit_order();
    let gauss = chars.gauss_table();
    let mut table_of: HashMap<FieldElement, usize> = HashMap::new();
    let mut tables: Vec<Vec<Complex64>> = Vec::new();
    let mut column_table = Vec::with_capacity(coeffs.len());
    for &c in coeffs {
        let log_c = field.dlog(c)?;
        let idx = *table_of.entry(c).or_insert_with(|| {
            tables.push(
                (0..m)
                    .map(|k| gauss[((m - k) % m) as usize] * chars.chi_at_log(k, log_c))
                    .collect(),
            );
            tables.len() - 1
        });
        column_table.push(idx);
    }
    let size = kernel.size().ok_or_else(|| Error::KernelTooLarge {
        size: format!("10^{:.1}", kernel.log10_size()),
        cap: u64::MAX,
    })?;
    Ok(par::chunked_complex_sum(
        chars.exec(),
        size,
        |start, end| {
            let mut acc = CompensatedSum::default();
            kernel.for_each_in_range(start, end, |v| {
                let term = v
                    .iter()
                    .zip(&column_table)
                    .fold(Complex64::new(1.0, 0.0), |prod, (&k, &t)| {
                        prod * tables[t][k as usize]
                    });
                acc.add(term);
            });
            acc.value()
        },
    ))
}

/// Rounds a count computed in floating point, enforcing the integrality tolerance.
pub(crate) fn round_count(value: Complex64, scale: f64) -> Result<(i64, f64)> {
    let rounded = value.re.round();
    let residual = (value.re - rounded).abs().max(value.im.abs());
    if residual.is_nan() || residual >= INTEGRALITY_TOLERANCE * scale.max(1.0) {
        return Err(Error::IntegralityViolation {
            value: value.re,
            residual,
        });
    }
    Ok((rounded as i64, residual))
}

/// Counting engine bound to one field and one additive character.
#[derive(Debug)]
pub struct PointCounter {
    chars: Characters,
    config: CountConfig,
}

impl PointCounter {
    pub fn new(chars: Characters) -> Self {
        Self::with_config(chars, CountConfig::default())
    }

    pub fn with_config(chars: Characters, config: CountConfig) -> Self {
        PointCounter { chars, config }
    }

    pub fn chars(&self) -> &Characters {
        &self.chars
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.chars.field()
    }

    pub fn config(&self) -> &CountConfig {
        &self.config
    }

    fn torus_size(&self, n: usize) -> Result<u64> {
        let m = self.field().unit_order() as u64;
        u32::try_from(n)
            .ok()
            .and_then(|n| m.checked_pow(n))
            .filter(|&t| t <= EXACT_F64)
            .ok_or_else(|| Error::CountTooLarge(format!("({m})^{n}")))
    }

    pub fn torus_hypersurface_count(&self, f: &SparsePoly) -> Result<u64> {
        Ok(self.torus_hypersurface_detail(f)?.count)
    }

    /// `#{x ∈ (F_q^×)^n : f(x) = 0}`. Negative exponents are allowed.
    pub fn torus_hypersurface_detail(&self, f: &SparsePoly) -> Result<TorusCount> {
        let n = f.nvars();
        let torus = self.torus_size(n)?;
        let trivial = |count| TorusCount {
            count,
            method: CountMethod::Trivial,
            terms: f.len(),
            kernel: None,
            residual: 0.0,
        };
        if f.is_zero() {
            return Ok(trivial(torus));
        }
        if f.len() == 1 {
            return Ok(trivial(0));
        }
        match self.config.strategy {
            Strategy::Enumerate => self.enumerate(f, torus),
            Strategy::Formula => {
                let kernel = self.kernel_of(f)?;
                match kernel.size() {
                    Some(s) if s <= self.config.kernel_cap => self.formula(f, kernel, torus),
                    _ => Err(self.kernel_too_large(&kernel)),
                }
            }
            Strategy::Auto => {
                let kernel = self.kernel_of(f)?;
                match kernel.size() {
                    Some(s) if s <= torus && s <= self.config.kernel_cap => {
                        self.formula(f, kernel, torus)
                    }
                    _ if torus <= self.config.enumeration_cap => self.enumerate(f, torus),
                    _ => Err(self.kernel_too_large(&kernel)),
                }
            }
        }
    }

    fn kernel_too_large(&self, kernel: &KernelEnumeration) -> Error {
        Error::KernelTooLarge {
            size: kernel.size().map_or_else(
                || format!("10^{:.1}", kernel.log10_size()),
                |s| s.to_string(),
            ),
            cap: self.config.kernel_cap,
        }
    }

    fn kernel_of(&self, f: &SparsePoly) -> Result<KernelEnumeration> {
        let (r, _) = f.exponent_data()?;
        kernel_mod(&r.with_ones_row(), self.field().unit_order() as u64)
    }

    fn formula(&self, f: &SparsePoly, kernel: KernelEnumeration, torus: u64) -> Result<TorusCount> {
        let q = self.field().q() as f64;
        let m = self.field().unit_order() as f64;
        let (_, coeffs) = f.exponent_data()?;
        let sum = weighted_kernel_sum(&self.chars, &kernel, &coeffs)?;
        let scale = m.powi(f.nvars() as i32 + 1 - f.len() as i32);
        let value = (Complex64::new(torus as f64, 0.0) + sum * scale) / q;
        let (count, residual) = round_count(value, torus as f64)?;
        if count < 0 || count as u64 > torus {
            return Err(Error::IntegralityViolation {
                value: value.re,
                residual,
            });
        }
        Ok(TorusCount {
            count: count as u64,
            method: CountMethod::Formula,
            terms: f.len(),
            kernel: Some(kernel),
            residual,
        })
    }

    fn enumerate(&self, f: &SparsePoly, torus: u64) -> Result<TorusCount> {
        if torus > self.config.enumeration_cap {
            return Err(Error::EnumerationTooLarge {
                size: torus.to_string(),
                cap: self.config.enumeration_cap,
            });
        }
        let walker = TorusWalker::new(self.field(), f);
        let per_slice = par::map_indexed(self.chars.exec(), walker.slices() as usize, |s| {
            let mut zeros = 0u64;
            walker.walk_slice(s as u64, |v| zeros += v.is_zero() as u64);
            zeros
        });
        Ok(TorusCount {
            count: per_slice.into_iter().sum(),
            method: CountMethod::Enumeration,
            terms: f.len(),
            kernel: None,
            residual: 0.0,
        })
    }

    /// Zeros on the torus of the product of the polynomials indexed by `subset`.
    pub fn torus_union_count(&self, polys: &[SparsePoly], subset: &[usize]) -> Result<u64> {
        Ok(self.torus_union_detail(polys, subset)?.count)
    }

    fn torus_union_detail(&self, polys: &[SparsePoly], subset: &[usize]) -> Result<TorusCount> {
        let first = subset
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty subset".into()))?;
        let nvars = polys[*first].nvars();
        let product = SparsePoly::product(self.field(), nvars, subset.iter().map(|&i| &polys[i]))?;
        self.torus_hypersurface_detail(&product)
    }

    /// Common zeros on the `nvars`-dimensional torus, by inclusion-exclusion over products.
    pub fn torus_variety_count(&self, polys: &[SparsePoly], nvars: usize) -> Result<u64> {
        let torus = self.torus_size(nvars)?;
        if polys.is_empty() {
            return Ok(torus);
        }
        let m = polys.len();
        let masks: Vec<u64> = (1..(1u64 << m)).collect();
        let counts = par::map_indexed(self.chars.exec(), masks.len(), |i| {
            self.torus_union_count(polys, &members(masks[i], m))
        });
        let mut total: i128 = 0;
        for (mask, c) in masks.iter().zip(counts) {
            let c = c? as i128;
            total += if mask.count_ones() % 2 == 1 { c } else { -c };
        }
        u64::try_from(total)
            .ok()
            .filter(|&t| t <= torus)
            .ok_or_else(|| Error::CountTooLarge(format!("inclusion-exclusion gave {total}")))
    }

    /// `#V(F_q)` for homogeneous polynomials in `n + 1` variables.
    pub fn projective_count(&self, variety: &Variety) -> Result<CountReport> {
        let nv = variety.nvars;
        let polys = &variety.polys;
        for (i, f) in polys.iter().enumerate() {
            if !f.is_homogeneous().0 || f.has_negative_exponents() {
                return Err(Error::NonHomogeneousInput(i + 1));
            }
        }
        if nv == 0 || nv > 62 || polys.len() > 20 {
            return Err(Error::DimensionMismatch(format!(
                "{} polynomials in {nv} variables",
                polys.len()
            )));
        }
        let field = self.field();
        let m = field.unit_order() as u64;
        let divide = |count: u64| -> Result<u64> {
            if !count.is_multiple_of(m) {
                return Err(Error::DivisibilityViolation { count, modulus: m });
            }
            Ok(count / m)
        };

        // open stratum: per-subset unions
        let mut nx = IndexMap::new();
        let mut kernels = IndexMap::new();
        let subsets = ordered_subsets(polys.len());
        let details = par::map_indexed(self.chars.exec(), subsets.len(), |i| {
            self.torus_union_detail(polys, &members(subsets[i], polys.len()))
        });
        let mut alternating: i128 = 0;
        for (&mask, detail) in subsets.iter().zip(details) {
            let detail = detail?;
            let key = subset_key(members(mask, polys.len()));
            let value = divide(detail.count)?;
            alternating += if mask.count_ones() % 2 == 1 {
                value as i128
            } else {
                -(value as i128)
            };
            nx.insert(key.clone(), value);
            kernels.insert(key, detail);
        }
        let open = if polys.is_empty() {
            divide(self.torus_size(nv)?)?
        } else {
            u64::try_from(alternating)
                .map_err(|_| Error::CountTooLarge(format!("open stratum {alternating}")))?
        };

        // boundary strata, keyed by their nonzero coordinates
        let full: u64 = (1u64 << nv) - 1;
        let boundary: Vec<u64> = ordered_subsets(nv)
            .into_iter()
            .filter(|&t| t != full)
            .collect();
        let counts = par::map_indexed(self.chars.exec(), boundary.len(), |i| -> Result<u64> {
            let keep = boundary[i];
            let zeroed: Vec<usize> = (0..nv).filter(|&j| keep >> j & 1 == 0).collect();
            let mut restricted = Vec::with_capacity(polys.len());
            for f in polys {
                let r = f.restrict_to_stratum(&zeroed)?;
                if !r.is_zero() {
                    restricted.push(r);
                }
            }
            let dim = nv - zeroed.len();
            divide(self.torus_variety_count(&restricted, dim)?)
        });
        let mut strata = IndexMap::new();
        let mut n0 = 0u64;
        for (&keep, c) in boundary.iter().zip(counts) {
            let c = c?;
            n0 += c;
            strata.insert(subset_key(members(keep, nv)), c);
        }
        strata.insert(subset_key(0..nv), open);

        Ok(CountReport {
            field: field.spec_string(),
            theta_shift: self.chars.shift(),
            inputs: polys.iter().map(|f| f.to_text(field)).collect(),
            n0,
            nx,
            open,
            total: n0 + open,
            oracle_total: None,
            strata: Some(strata),
            kernels: Some(kernels),
        })
    }

    /// `#(V(closed) \ V(removed))`, i.e. `#V(closed) - #V(closed ∪ removed)`.
    /// An empty `removed` list removes nothing.
    pub fn quasi_projective_count(&self, closed: &Variety, removed: &[SparsePoly]) -> Result<i64> {
        let whole = self.projective_count(closed)?.total;
        if removed.is_empty() {
            return Ok(whole as i64);
        }
        let mut both = closed.polys.clone();
        both.extend(removed.iter().cloned());
        let cut = self
            .projective_count(&Variety::new(closed.nvars, both)?)?
            .total;
        Ok(whole as i64 - cut as i64)
    }
}

/// `-2q² + 6q - 1 + ((q-1)L - 1)/q` with `L` evaluated directly; this is the count of
/// the twisted cubic assembled from its strata.
pub fn twisted_cubic_assembly(chars: &Characters) -> Result<i64> {
    let q = chars.field().q() as i64;
    let l = expsum::l_sum(chars)?;
    let num = (q - 1) * l - 1;
    if num % q != 0 {
        return Err(Error::IntegralityViolation {
            value: num as f64 / q as f64,
            residual: (num % q) as f64 / q as f64,
        });
    }
    Ok(-2 * q * q + 6 * q - 1 + num / q)
}

/// `-2q⁴ + 10q³ - 12q² + 10q + 1 + ((q-1)³L - 1)/q`, the Segre count in terms of `L`.
pub fn segre_assembly(chars: &Characters) -> Result<i64> {
    let q = chars.field().q() as i64;
    let l = expsum::l_sum(chars)?;
    let num = (q - 1).pow(3) * l - 1;
    if num % q != 0 {
        return Err(Error::IntegralityViolation {
            value: num as f64 / q as f64,
            residual: (num % q) as f64 / q as f64,
        });
    }
    Ok(-2 * q.pow(4) + 10 * q.pow(3) - 12 * q * q + 10 * q + 1 + num / q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn counter(q: u64) -> PointCounter {
        let f = Arc::new(FieldDescriptor::from_order(q).unwrap());
        PointCounter::new(Characters::new(f, 1).unwrap())
    }

    fn poly(c: &PointCounter, text: &str, n: usize) -> SparsePoly {
        SparsePoly::parse(c.field(), text, n).unwrap()
    }

    #[test]
    fn line_in_torus() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            let c = counter(q);
            assert_eq!(
                c.torus_hypersurface_count(&poly(&c, "x1 + x2", 2)).unwrap(),
                q - 1
            );
        }
    }

    #[test]
    fn trivial_cases() {
        let c = counter(5);
        assert_eq!(
            c.torus_hypersurface_count(&SparsePoly::zero(3)).unwrap(),
            64
        );
        assert_eq!(
            c.torus_hypersurface_count(&poly(&c, "3*x1^2*x2", 2))
                .unwrap(),
            0
        );
        assert_eq!(c.torus_variety_count(&[], 2).unwrap(), 16);
    }

    #[test]
    fn quadric_counts() {
        for q in [3u64, 4, 5, 7, 8] {
            let c = counter(q);
            let f1 = poly(&c, "x1*x3 - x2^2", 4);
            assert_eq!(c.torus_hypersurface_count(&f1).unwrap(), (q - 1).pow(3));
            let f2 = poly(&c, "x2*x4 - x3^2", 4);
            let f12 = f1.multiply(c.field(), &f2).unwrap();
            let detail = c.torus_hypersurface_detail(&f12).unwrap();
            assert_eq!(detail.method, CountMethod::Formula);
            assert_eq!(detail.count, (q - 1) * (2 * q * q - 5 * q + 3));
        }
    }

    #[test]
    fn empty_projective_plane() {
        for q in [2u64, 3, 4] {
            let c = counter(q);
            let r = c
                .projective_count(&Variety::new(3, vec![]).unwrap())
                .unwrap();
            assert_eq!(r.total, q * q + q + 1);
            assert!(r.nx.is_empty());
            assert!(r.is_consistent());
        }
    }

    #[test]
    fn rejects_inhomogeneous() {
        let c = counter(3);
        let v = Variety::new(2, vec![poly(&c, "x1 + x1*x2", 2)]).unwrap();
        assert_eq!(
            c.projective_count(&v).unwrap_err(),
            Error::NonHomogeneousInput(1)
        );
    }

    #[test]
    fn removing_a_hyperplane() {
        for q in [2u64, 3, 5, 7] {
            let c = counter(q);
            let p1 = Variety::new(2, vec![]).unwrap();
            let removed = [poly(&c, "x1", 2)];
            assert_eq!(c.quasi_projective_count(&p1, &removed).unwrap(), q as i64);
            let cubic = Variety::new(
                4,
                ["x1*x3 - x2^2", "x2*x4 - x3^2", "x1*x4 - x2*x3"]
                    .iter()
                    .map(|t| poly(&c, t, 4))
                    .collect(),
            )
            .unwrap();
            let removed = [poly(&c, "x1", 4)];
            assert_eq!(
                c.quasi_projective_count(&cubic, &removed).unwrap(),
                q as i64
            );
            assert_eq!(c.quasi_projective_count(&cubic, &[]).unwrap(), q as i64 + 1);
        }
    }

    #[test]
    fn assemblies_at_small_q() {
        for q in [2u64, 3, 5] {
            let c = counter(q);
            assert_eq!(twisted_cubic_assembly(c.chars()).unwrap(), q as i64 + 1);
            assert_eq!(
                segre_assembly(c.chars()).unwrap(),
                ((q + 1) * (q * q + q + 1)) as i64
            );
        }
    }

    #[test]
    fn strategies_agree() {
        let c = counter(7);
        let f = poly(&c, "x1^2 + 3*x1*x2 - x3^2 + x2*x3", 3);
        let mut results = Vec::new();
        for strategy in [Strategy::Auto, Strategy::Formula, Strategy::Enumerate] {
            let config = CountConfig {
                strategy,
                ..CountConfig::default()
            };
            let pc = PointCounter::with_config(
                Characters::new(c.chars().field_arc(), 1).unwrap(),
                config,
            );
            results.push(pc.torus_hypersurface_count(&f).unwrap());
        }
        assert!(results.windows(2).all(|w| w[0] == w[1]), "{results:?}");
    }

    #[test]
    fn kernel_cap_is_enforced() {
        let c = counter(5);
        let config = CountConfig {
            strategy: Strategy::Formula,
            kernel_cap: 3,
            ..CountConfig::default()
        };
        let pc =
            PointCounter::with_config(Characters::new(c.chars().field_arc(), 1).unwrap(), config);
        let f = poly(&c, "x1^4 + x2^4", 2);
        assert!(matches!(
            pc.torus_hypersurface_count(&f),
            Err(Error::KernelTooLarge { .. })
        ));
    }
}
