#![allow(dead_code)]

use std::sync::Arc;

use fqpoints::chars::Characters;
use fqpoints::count::PointCounter;
use fqpoints::field::{FieldDescriptor, FieldElement};
use fqpoints::lattice::IntMatrix;
use fqpoints::poly::{SparsePoly, Variety};
use rand::Rng;

pub fn field(q: u64) -> Arc<FieldDescriptor> {
    Arc::new(FieldDescriptor::from_order(q).unwrap())
}

pub fn chars(q: u64) -> Characters {
    Characters::new(field(q), 1).unwrap()
}

pub fn counter(q: u64) -> PointCounter {
    PointCounter::new(chars(q))
}

pub fn random_element<R: Rng>(rng: &mut R, f: &FieldDescriptor) -> FieldElement {
    f.from_code(rng.gen_range(0..f.q())).unwrap()
}

pub fn random_unit<R: Rng>(rng: &mut R, f: &FieldDescriptor) -> FieldElement {
    f.from_code(rng.gen_range(1..f.q())).unwrap()
}

/// Random exponent vector of total degree `d` in `n` variables.
pub fn random_monomial<R: Rng>(rng: &mut R, n: usize, d: i32) -> Vec<i32> {
    let mut e = vec![0; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    e
}

/// 1 to 3 homogeneous polynomials of degree at most 3 in 2 to 4 variables.
pub fn random_homogeneous_system<R: Rng>(rng: &mut R, f: &FieldDescriptor) -> Variety {
    let n = rng.gen_range(2..=4);
    let npolys = rng.gen_range(1..=3);
    let polys = (0..npolys)
        .map(|_| {
            let d = rng.gen_range(1..=3);
            let nterms = rng.gen_range(1..=4);
            let terms: Vec<_> = (0..nterms)
                .map(|_| (random_monomial(rng, n, d), random_unit(rng, f)))
                .collect();
            SparsePoly::from_terms(f, n, terms).unwrap()
        })
        .collect();
    Variety::new(n, polys).unwrap()
}

/// Laurent polynomial in 1 to 3 variables with exponents in `-3..=3`.
pub fn random_laurent<R: Rng>(rng: &mut R, f: &FieldDescriptor) -> SparsePoly {
    let n = rng.gen_range(1..=3);
    let nterms = rng.gen_range(1..=4);
    let terms: Vec<_> = (0..nterms)
        .map(|_| {
            let e = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            (e, random_unit(rng, f))
        })
        .collect();
    SparsePoly::from_terms(f, n, terms).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols)
        .map(|_| rng.gen_range(-bound..=bound))
        .collect();
    IntMatrix::new(rows, cols, data).unwrap()
}
