//! Brute-force reference counts, independent of characters and lattice reduction.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};
use crate::lattice::IntMatrix;
use crate::par::{self, Exec};
use crate::poly::{SparsePoly, Variety};

pub const TORUS_CAP: u64 = 100_000_000;
pub const PROJECTIVE_CAP: u64 = 10_000_000;
pub const KERNEL_CAP: u64 = 10_000_000;

fn too_large(size: String, cap: u64) -> Error {
    Error::EnumerationTooLarge { size, cap }
}

/// `#{t ∈ (F_q^×)^n : f(t) = 0}` by evaluating `f` at every point.
pub fn brute_torus_count(field: &FieldDescriptor, f: &SparsePoly) -> Result<u64> {
    brute_torus_count_with(Exec::default(), field, f)
}

pub fn brute_torus_count_with(exec: Exec, field: &FieldDescriptor, f: &SparsePoly) -> Result<u64> {
    let n = f.nvars();
    let m = field.unit_order() as u64;
    let total = m
        .checked_pow(n as u32)
        .filter(|&t| t <= TORUS_CAP)
        .ok_or_else(|| too_large(format!("{m}^{n}"), TORUS_CAP))?;
    let units: Vec<FieldElement> = field.units().collect();
    par::chunked_count(exec, total, |start, end| -> Result<u64> {
        let mut point = vec![FieldElement::ONE; n];
        let mut hits = 0;
        for idx in start..end {
            let mut r = idx;
            for x in point.iter_mut().rev() {
                *x = units[(r % m) as usize];
                r /= m;
            }
            if f.eval(field, &point)?.is_zero() {
                hits += 1;
            }
        }
        Ok(hits)
    })
}

/// `#V(F_q)` in `P^{n-1}`, checking each canonical representative (first nonzero
/// coordinate equal to 1).
pub fn brute_projective_count(field: &FieldDescriptor, variety: &Variety) -> Result<u64> {
    brute_projective_count_with(Exec::default(), field, variety)
}

pub fn brute_projective_count_with(
    exec: Exec,
    field: &FieldDescriptor,
    variety: &Variety,
) -> Result<u64> {
    let n = variety.nvars;
    let q = field.q() as u64;
    for (i, f) in variety.polys.iter().enumerate() {
        if f.has_negative_exponents() || !f.is_homogeneous().0 {
            return Err(Error::NonHomogeneousInput(i + 1));
        }
    }
    let qn = q
        .checked_pow(n as u32)
        .filter(|&t| (t - 1) / (q - 1) <= PROJECTIVE_CAP)
        .ok_or_else(|| too_large(format!("({q}^{n}-1)/({q}-1)"), PROJECTIVE_CAP))?;
    let total = (qn - 1) / (q - 1);
    let elements: Vec<FieldElement> = field.elements().collect();

    // representative idx: leading 1 at position i, then base-q digits for the tail
    let mut offsets = Vec::with_capacity(n + 1);
    let mut acc = 0u64;
    for i in 0..n {
        offsets.push(acc);
        acc += q.pow((n - 1 - i) as u32);
    }
    offsets.push(acc);
    debug_assert_eq!(acc, total);

    par::chunked_count(exec, total, |start, end| -> Result<u64> {
        let mut point = vec![FieldElement::ZERO; n];
        let mut hits = 0;
        for idx in start..end {
            let lead = offsets.partition_point(|&o| o <= idx) - 1;
            let mut r = idx - offsets[lead];
            point.fill(FieldElement::ZERO);
            point[lead] = FieldElement::ONE;
            for x in point[lead + 1..].iter_mut().rev() {
                *x = elements[(r % q) as usize];
                r /= q;
            }
            let mut on = true;
            for f in &variety.polys {
                if !f.eval(field, &point)?.is_zero() {
                    on = false;
                    break;
                }
            }
            hits += on as u64;
        }
        Ok(hits)
    })
}

/// `{v ∈ (Z/m)^N : R v ≡ 0 (mod m)}` by scanning every vector.
pub fn brute_kernel(r: &IntMatrix, m: u64) -> Result<BTreeSet<Vec<u64>>> {
    let ncols = r.cols();
    m.checked_pow(ncols as u32)
        .filter(|&t| t <= KERNEL_CAP && m > 0)
        .ok_or_else(|| too_large(format!("{m}^{ncols}"), KERNEL_CAP))?;
    let mi = m as i64;
    let columns: Vec<Vec<i64>> = (0..ncols)
        .map(|j| r.column(j).iter().map(|x| x.rem_euclid(mi)).collect())
        .collect();
    let mut out = BTreeSet::new();
    let mut v = vec![0u64; ncols];
    // image R v mod m, updated by one column per odometer step
    let mut image = vec![0i64; r.rows()];
    loop {
        if image.iter().all(|&y| y == 0) {
            out.insert(v.clone());
        }
        let mut j = ncols;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            for (y, c) in image.iter_mut().zip(&columns[j]) {
                *y = (*y + c) % mi;
            }
            v[j] += 1;
            if v[j] < m {
                break;
            }
            v[j] = 0;
        }
    }
}
