//! Additive and multiplicative characters of `F_q` with complex values, and Gauss sums.
//!
//! The additive character is `θ(x) = exp(2πi·c·Tr(x)/p)` for a shift `c ∈ F_p^×`.
//! Multiplicative characters are indexed by `k ∈ Z/(q-1)` relative to the field's
//! generator `g`: `χ_k(g^a) = exp(2πi·k·a/(q-1))`, and `χ_k(0) = 0` for every `k`,
//! including the trivial character.

use std::f64::consts::TAU;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::par::{self, CompensatedSum, Exec};

pub type CharValue = Complex64;

/// A multiplicative character named by its exponent in `Z/(q-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterIndex(u32);

impl CharacterIndex {
    pub const TRIVIAL: CharacterIndex = CharacterIndex(0);

    pub fn new(field: &FieldDescriptor, k: i64) -> Self {
        CharacterIndex(k.rem_euclid(field.unit_order() as i64) as u32)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }

    pub fn inverse(self, field: &FieldDescriptor) -> Self {
        CharacterIndex::new(field, -(self.0 as i64))
    }
}

/// Maximal absolute deviations from the three orthogonality relations.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrthogonalityReport {
    /// `Σ_w θ(wx) ∈ {0, q}`
    pub additive: f64,
    /// `Σ_x χ(x) ∈ {0, q-1}`
    pub multiplicative: f64,
    /// `Σ_χ χ(x) ∈ {0, q-1}`
    pub dual: f64,
}

impl OrthogonalityReport {
    pub fn max(&self) -> f64 {
        self.additive.max(self.multiplicative).max(self.dual)
    }
}

/// Character tables of one field for one choice of additive character.
pub struct Characters {
    field: Arc<FieldDescriptor>,
    shift: u32,
    additive_roots: Vec<Complex64>,
    unit_roots: Vec<Complex64>,
    gauss: OnceLock<Vec<Complex64>>,
    exec: Exec,
}

impl std::fmt::Debug for Characters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Characters")
            .field("field", &self.field)
            .field("shift", &self.shift)
            .finish()
    }
}

fn roots_of_unity(n: u32) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            if j == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, TAU * j as f64 / n as f64)
            }
        })
        .collect()
}

impl Characters {
    /// `shift` selects `θ_c(x) = θ_1(c·x)`; it must be nonzero mod p.
    pub fn new(field: Arc<FieldDescriptor>, shift: u32) -> Result<Self> {
        let p = field.p();
        if shift.is_multiple_of(p) {
            return Err(Error::InvalidShift { p });
        }
        Ok(Characters {
            shift: shift % p,
            additive_roots: roots_of_unity(p),
            unit_roots: roots_of_unity(field.unit_order()),
            field,
            gauss: OnceLock::new(),
            exec: Exec::default(),
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FieldDescriptor> {
        Arc::clone(&self.field)
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    #[inline]
    pub fn theta(&self, x: FieldElement) -> CharValue {
        self.theta_of_trace(self.field.trace(x))
    }

    #[inline]
    pub(crate) fn theta_of_trace(&self, tr: u32) -> CharValue {
        let p = self.field.p() as u64;
        self.additive_roots[((self.shift as u64 * tr as u64) % p) as usize]
    }

    #[inline]
    pub fn chi(&self, k: CharacterIndex, x: FieldElement) -> CharValue {
        match self.field.dlog(x) {
            Ok(a) => self.chi_at_log(k.0, a),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `χ_k(g^a)`.
    #[inline]
    pub(crate) fn chi_at_log(&self, k: u32, a: u32) -> CharValue {
        let m = self.field.unit_order() as u64;
        self.unit_roots[((k as u64 * a as u64) % m) as usize]
    }

    /// `G(χ_k) = Σ_{x ≠ 0} θ(x) χ_k(x)`; the full table is built on first use.
    pub fn gauss_sum(&self, k: CharacterIndex) -> CharValue {
        self.gauss_table()[k.0 as usize]
    }

    pub fn gauss_table(&self) -> &[CharValue] {
        self.gauss.get_or_init(|| {
            let m = self.field.unit_order();
            let thetas: Vec<Complex64> = (0..m)
                .map(|a| self.theta(self.field.exp(a as u64)))
                .collect();
            par::map_indexed(self.exec, m as usize, |k| {
                thetas
                    .iter()
                    .enumerate()
                    .map(|(a, &t)| t * self.chi_at_log(k as u32, a as u32))
                    .collect::<CompensatedSum>()
                    .value()
            })
        })
    }

    /// `θ(x)` reconstructed as `(1/(q-1)) Σ_χ G(χ^{-1}) χ(x)`.
    pub fn theta_via_gauss(&self, x: FieldElement) -> Result<CharValue> {
        let a = self.field.dlog(x).map_err(|_| Error::ZeroArgument)?;
        let m = self.field.unit_order();
        let table = self.gauss_table();
        let sum = (0..m)
            .map(|k| table[((m - k) % m) as usize] * self.chi_at_log(k, a))
            .collect::<CompensatedSum>()
            .value();
        Ok(sum / m as f64)
    }

    pub fn orthogonality_check(&self) -> OrthogonalityReport {
        let f = &*self.field;
        let q = f.q() as f64;
        let m = f.unit_order();

        let additive = f
            .elements()
            .map(|x| {
                let s = f
                    .elements()
                    .map(|w| self.theta(f.mul(w, x)))
                    .collect::<CompensatedSum>()
                    .value();
                let target = if x.is_zero() { q } else { 0.0 };
                (s - target).norm()
            })
            .fold(0.0, f64::max);

        let multiplicative = (0..m)
            .map(|k| {
                let s = f
                    .units()
                    .map(|x| self.chi(CharacterIndex(k), x))
                    .collect::<CompensatedSum>()
                    .value();
                let target = if k == 0 { m as f64 } else { 0.0 };
                (s - target).norm()
            })
            .fold(0.0, f64::max);

        let dual = f
            .units()
            .map(|x| {
                let s = (0..m)
                    .map(|k| self.chi(CharacterIndex(k), x))
                    .collect::<CompensatedSum>()
                    .value();
                let target = if x == FieldElement::ONE {
                    m as f64
                } else {
                    0.0
                };
                (s - target).norm()
            })
            .fold(0.0, f64::max);

        OrthogonalityReport {
            additive,
            multiplicative,
            dual,
        }
    }
}
