//! Integer matrices, Smith normal form, and kernels of integer matrices acting on
//! `(Z/m)^N`.
//!
//! A character vector `(χ_{k_1}, ..., χ_{k_N})` is identified with its exponent vector
//! `(k_1, ..., k_N) ∈ (Z/(q-1))^N`; the character map of an integer matrix `M` then acts
//! as plain matrix multiplication mod `q - 1`, so its kernel is `{v : M v ≡ 0}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// The matrix with an extra all-ones row at the bottom.
    pub fn with_ones_row(&self) -> Self {
        let mut data = self.data.clone();
        data.extend(std::iter::repeat_n(1, self.cols));
        IntMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: i128 = (0..self.cols)
                    .map(|k| self.get(i, k) as i128 * other.get(k, j) as i128)
                    .sum();
                data.push(i64::try_from(s).map_err(|_| Error::EntryOverflow)?);
            }
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `M v mod m`.
    pub fn mul_vec_mod(&self, v: &[u64], m: u64) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let s: i128 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a as i128 * x as i128)
                    .sum();
                s.rem_euclid(m as i128) as u64
            })
            .collect()
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`, `d_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|&&d| d != 0).count()
    }
}

trait SnfInt:
    Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + ToPrimitive + From<i64>
{
}

impl<T> SnfInt for T where
    T: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + ToPrimitive + From<i64>
{
}

struct Overflow;

type Grid<T> = Vec<Vec<T>>;

struct Reduction<T> {
    a: Grid<T>,
    u: Grid<T>,
    v: Grid<T>,
}

fn identity_grid<T: SnfInt>(n: usize) -> Grid<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

/// `dst -= k * src`
fn sub_multiple<T: SnfInt>(dst: &mut [T], src: &[T], k: &T) -> std::result::Result<(), Overflow> {
    for (d, s) in dst.iter_mut().zip(src) {
        let prod = s.checked_mul(k).ok_or(Overflow)?;
        *d = d.checked_sub(&prod).ok_or(Overflow)?;
    }
    Ok(())
}

impl<T: SnfInt> Reduction<T> {
    fn new(m: &IntMatrix) -> Self {
        let a = (0..m.rows())
            .map(|i| m.row(i).iter().map(|&x| T::from(x)).collect())
            .collect();
        Reduction {
            a,
            u: identity_grid(m.rows()),
            v: identity_grid(m.cols()),
        }
    }

    fn nrows(&self) -> usize {
        self.a.len()
    }

    fn ncols(&self) -> usize {
        self.v.len()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i -= k row_t
    fn row_op(&mut self, i: usize, t: usize, k: &T) -> std::result::Result<(), Overflow> {
        let (src_a, src_u) = (self.a[t].clone(), self.u[t].clone());
        sub_multiple(&mut self.a[i], &src_a, k)?;
        sub_multiple(&mut self.u[i], &src_u, k)
    }

    /// col_j -= k col_t
    fn col_op(&mut self, j: usize, t: usize, k: &T) -> std::result::Result<(), Overflow> {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            let prod = row[t].checked_mul(k).ok_or(Overflow)?;
            row[j] = row[j].checked_sub(&prod).ok_or(Overflow)?;
        }
        Ok(())
    }

    /// Moves the nonzero entry of least absolute value among `positions` to `(t, t)`.
    fn pivot_from(&mut self, t: usize, positions: impl Iterator<Item = (usize, usize)>) -> bool {
        let best = positions
            .filter(|&(i, j)| !self.a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| self.a[i][j].abs().cmp(&self.a[k][l].abs()));
        match best {
            Some((i, j)) => {
                if i != t {
                    self.swap_rows(t, i);
                }
                if j != t {
                    self.swap_cols(t, j);
                }
                true
            }
            None => false,
        }
    }

    fn run(mut self) -> std::result::Result<Self, Overflow> {
        let (r, c) = (self.nrows(), self.ncols());
        for t in 0..r.min(c) {
            let whole = (t..r).flat_map(|i| (t..c).map(move |j| (i, j)));
            if !self.pivot_from(t, whole) {
                break;
            }
            loop {
                let mut dirty = false;
                for i in t + 1..r {
                    if !self.a[i][t].is_zero() {
                        let k = self.a[i][t].div_floor(&self.a[t][t]);
                        self.row_op(i, t, &k)?;
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..c {
                    if !self.a[t][j].is_zero() {
                        let k = self.a[t][j].div_floor(&self.a[t][t]);
                        self.col_op(j, t, &k)?;
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    let cross = (t..r).map(|i| (i, t)).chain((t + 1..c).map(|j| (t, j)));
                    self.pivot_from(t, cross);
                    continue;
                }
                let pivot = self.a[t][t].clone();
                let offender =
                    (t + 1..r).find(|&i| (t + 1..c).any(|j| !self.a[i][j].is_multiple_of(&pivot)));
                match offender {
                    Some(i) => {
                        // row_t += row_i
                        self.row_op(t, i, &T::from(-1))?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                let minus_one = T::from(-1);
                for x in self.a[t].iter_mut().chain(self.u[t].iter_mut()) {
                    *x = x.checked_mul(&minus_one).ok_or(Overflow)?;
                }
            }
        }
        Ok(self)
    }

    fn diagonal(&self) -> Vec<T> {
        (0..self.nrows().min(self.ncols()))
            .map(|i| self.a[i][i].clone())
            .collect()
    }
}

fn grid_to_matrix<T: SnfInt>(g: &Grid<T>, cols: usize) -> Result<IntMatrix> {
    let data = g
        .iter()
        .flatten()
        .map(|x| x.to_i64().ok_or(Error::EntryOverflow))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::new(g.len(), cols, data)
}

fn reduce<T: SnfInt>(m: &IntMatrix) -> std::result::Result<Reduction<T>, Overflow> {
    Reduction::<T>::new(m).run()
}

/// Smith normal form over `Z`, pivoting on the entry of least absolute value.
/// Intermediate arithmetic is 128-bit, with an arbitrary-precision retry on overflow.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    fn pack<T: SnfInt>(red: &Reduction<T>, m: &IntMatrix) -> Result<SmithForm> {
        Ok(SmithForm {
            u: grid_to_matrix(&red.u, m.rows())?,
            d: grid_to_matrix(&red.a, m.cols())?,
            v: grid_to_matrix(&red.v, m.cols())?,
        })
    }
    match reduce::<i128>(m) {
        Ok(red) => pack(&red, m),
        Err(Overflow) => match reduce::<BigInt>(m) {
            Ok(red) => pack(&red, m),
            Err(Overflow) => unreachable!("arbitrary precision does not overflow"),
        },
    }
}

/// A complete, duplicate-free parameterization of a subgroup of `(Z/m)^N` as
/// `{ Σ t_i g_i : 0 <= t_i < order_i }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelEnumeration {
    modulus: u64,
    ncols: usize,
    generators: Vec<Vec<u64>>,
    orders: Vec<u64>,
}

impl KernelEnumeration {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of elements, or `None` if it does not fit in 64 bits.
    pub fn size(&self) -> Option<u64> {
        self.orders
            .iter()
            .try_fold(1u64, |acc, &o| acc.checked_mul(o))
    }

    /// `log10` of the number of elements.
    pub fn log10_size(&self) -> f64 {
        self.orders.iter().map(|&o| (o as f64).log10()).sum()
    }

    /// The element with index `idx` in lexicographic parameter order
    /// (the last generator varies fastest).
    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.ncols];
        for (gen, &ord) in self.generators.iter().zip(&self.orders).rev() {
            let t = idx % ord;
            idx /= ord;
            for (x, &g) in v.iter_mut().zip(gen) {
                *x = ((*x as u128 + t as u128 * g as u128) % self.modulus as u128) as u64;
            }
        }
        v
    }

    /// Visits elements `start..end` in enumeration order.
    pub fn for_each_in_range<F: FnMut(&[u64])>(&self, start: u64, end: u64, mut f: F) {
        if start >= end {
            return;
        }
        let mut digits: Vec<u64> = {
            let mut idx = start;
            let mut d = vec![0; self.orders.len()];
            for (slot, &ord) in d.iter_mut().zip(&self.orders).rev() {
                *slot = idx % ord;
                idx /= ord;
            }
            d
        };
        let mut v = self.element(start);
        let m = self.modulus;
        for _ in start..end {
            f(&v);
            for pos in (0..digits.len()).rev() {
                for (x, &g) in v.iter_mut().zip(&self.generators[pos]) {
                    *x += g;
                    if *x >= m {
                        *x -= m;
                    }
                }
                digits[pos] += 1;
                if digits[pos] < self.orders[pos] {
                    break;
                }
                // order_i · g_i ≡ 0, so the wrap leaves this digit's contribution at 0
                digits[pos] = 0;
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let size = self.size().expect("kernel too large to iterate");
        (0..size).map(move |i| self.element(i))
    }
}

/// Kernel of `v ↦ M v` on `(Z/m)^N`. With `U M V = D`, the kernel is
/// `V · {y : d_i y_i ≡ 0 (mod m)}`, and coordinate `i` contributes the cyclic factor
/// generated by `(m / gcd(d_i, m)) · V e_i` of order `gcd(d_i, m)`.
pub fn kernel_mod(m: &IntMatrix, modulus: u64) -> Result<KernelEnumeration> {
    if modulus == 0 {
        return Err(Error::DimensionMismatch("modulus must be positive".into()));
    }
    match reduce::<i128>(m) {
        Ok(red) => Ok(kernel_from(&red, m.cols(), modulus)),
        Err(Overflow) => match reduce::<BigInt>(m) {
            Ok(red) => Ok(kernel_from(&red, m.cols(), modulus)),
            Err(Overflow) => unreachable!("arbitrary precision does not overflow"),
        },
    }
}

fn kernel_from<T: SnfInt>(red: &Reduction<T>, ncols: usize, modulus: u64) -> KernelEnumeration {
    let diag = red.diagonal();
    let big_m = T::from(modulus as i64);
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for i in 0..ncols {
        let order = match diag.get(i) {
            Some(d) => d.gcd(&big_m).to_u64().expect("gcd divides the modulus"),
            None => modulus,
        };
        if order == 1 {
            continue;
        }
        let step = modulus / order;
        let gen = (0..ncols)
            .map(|row| {
                let entry = red.v[row][i]
                    .mod_floor(&big_m)
                    .to_u64()
                    .expect("reduced mod m");
                ((entry as u128 * step as u128) % modulus as u128) as u64
            })
            .collect();
        generators.push(gen);
        orders.push(order);
    }
    KernelEnumeration {
        modulus,
        ncols,
        generators,
        orders,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0);
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[0] >= 0 && w[1] >= 0);
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&IntMatrix::identity(3)).d, IntMatrix::identity(3));
        let d = IntMatrix::from_rows(&[[2, 0], [0, 4]]);
        assert_eq!(check_snf(&d).d, d);
        let s = check_snf(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.invariant_factors(), vec![2, 4]);
        // coprime diagonal entries get merged: diag(2, 3) ~ diag(1, 6)
        let s = check_snf(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.invariant_factors(), vec![1, 6]);
        let s = check_snf(&IntMatrix::from_rows(&[[0, 0, 0], [0, -5, 0]]));
        assert_eq!(s.invariant_factors(), vec![5, 0]);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = kernel_mod(&IntMatrix::zeros(2, 3), 4).unwrap();
        assert_eq!(k.size(), Some(64));
        let set: BTreeSet<_> = k.iter().collect();
        assert_eq!(set.len(), 64);
    }

    #[test]
    fn trivial_modulus() {
        let k = kernel_mod(&IntMatrix::identity(2), 1).unwrap();
        assert_eq!(k.size(), Some(1));
        assert_eq!(k.element(0), vec![0, 0]);
    }

    #[test]
    fn incremental_walk_matches_indexing() {
        let m = IntMatrix::from_rows(&[[1, 2, 3, 0], [0, 2, 4, 6]]);
        let k = kernel_mod(&m, 12).unwrap();
        let size = k.size().unwrap();
        let mut walked = Vec::new();
        k.for_each_in_range(3, size, |v| walked.push(v.to_vec()));
        let indexed: Vec<_> = (3..size).map(|i| k.element(i)).collect();
        assert_eq!(walked, indexed);
        for v in &walked {
            assert!(m.mul_vec_mod(v, 12).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 3;
        let m = IntMatrix::from_rows(&[[big, big - 1, 7], [big - 2, big, 11], [3, big, big - 5]]);
        let k = kernel_mod(&m, 6).unwrap();
        for v in k.iter() {
            assert!(m.mul_vec_mod(&v, 6).iter().all(|&x| x == 0));
        }
    }
}
