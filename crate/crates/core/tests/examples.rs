mod common;

use fqpoints::catalog;
use fqpoints::expsum::{gauss_product_sum, l_sum};
use fqpoints::field::FieldElement;
use fqpoints::lattice::IntMatrix;
use fqpoints::oracle::{brute_kernel, brute_projective_count, brute_torus_count};
use fqpoints::poly::{SparsePoly, Variety};
use num_complex::Complex64;

use common::{chars, counter, field};

fn cubic_polys(c: &fqpoints::count::PointCounter) -> Vec<SparsePoly> {
    catalog::builtin_variety(c.field(), "twisted-cubic")
        .unwrap()
        .polys
}

#[test]
fn torus_counts() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let c = counter(q);
        let m = q - 1;
        let f = c.field();
        let line = SparsePoly::parse(f, "x1 + x2", 2).unwrap();
        assert_eq!(c.torus_hypersurface_count(&line).unwrap(), m);
        let polys = cubic_polys(&c);
        assert_eq!(c.torus_hypersurface_count(&polys[0]).unwrap(), m.pow(3));
        assert_eq!(
            c.torus_union_count(&polys, &[0, 1]).unwrap(),
            m * (2 * q * q + 3 - 5 * q)
        );
        assert_eq!(
            c.torus_hypersurface_count(&SparsePoly::zero(3)).unwrap(),
            m.pow(3)
        );
        assert_eq!(c.torus_variety_count(&polys, 4).unwrap(), m * m);
        assert_eq!(c.torus_variety_count(&[], 2).unwrap(), m * m);
        let monomial = SparsePoly::parse(f, "-x1^2*x2", 2).unwrap();
        assert_eq!(c.torus_hypersurface_count(&monomial).unwrap(), 0);

        let segre = catalog::builtin_variety(f, "segre-1x2").unwrap().polys;
        assert_eq!(
            c.torus_union_count(&segre, &[0, 1]).unwrap(),
            m.pow(3) * (2 * q * q + 3 - 5 * q)
        );
        let with_zero = vec![SparsePoly::zero(2), line.clone()];
        assert_eq!(c.torus_union_count(&with_zero, &[0]).unwrap(), m * m);
    }
}

#[test]
fn kernel_bridge_sums() {
    for q in [3u64, 4, 5, 7, 8, 9, 11, 13] {
        let ch = chars(q);
        let m = (q - 1) as f64;
        let l = l_sum(&ch).unwrap() as f64;
        let ones = [FieldElement::ONE; 6];
        let s = gauss_product_sum(
            &ch,
            &catalog::twisted_cubic_rtilde_123(),
            &ones,
            &[1, 3, 5],
            u64::MAX,
        )
        .unwrap();
        let qf = q as f64;
        assert!(
            (s - Complex64::new(m.powi(3) * l, 0.0)).norm() < 1e-6 * qf.powi(3),
            "q={q}: {s}"
        );
        let s = gauss_product_sum(
            &ch,
            &catalog::twisted_cubic_rtilde_12(),
            &ones[..4],
            &[1, 2],
            u64::MAX,
        )
        .unwrap();
        assert!((s.re - (qf * qf * (qf - 2.0) + 1.0)).abs() < 1e-6 * qf.powi(3));
    }
}

#[test]
fn oracle_examples() {
    let f3 = field(3);
    let f1 = SparsePoly::parse(&f3, "x1*x3 - x2^2", 4).unwrap();
    assert_eq!(brute_torus_count(&f3, &f1).unwrap(), 8);
    let f4 = field(4);
    assert_eq!(brute_torus_count(&f4, &SparsePoly::zero(2)).unwrap(), 9);
    let one = SparsePoly::parse(&f4, "1", 2).unwrap();
    assert_eq!(brute_torus_count(&f4, &one).unwrap(), 0);

    let f5 = field(5);
    let cubic = catalog::builtin_variety(&f5, "twisted-cubic").unwrap();
    assert_eq!(brute_projective_count(&f5, &cubic).unwrap(), 6);
    let f2 = field(2);
    let segre = catalog::builtin_variety(&f2, "segre-1x2").unwrap();
    assert_eq!(brute_projective_count(&f2, &segre).unwrap(), 21);
    let p3 = Variety::new(4, vec![]).unwrap();
    assert_eq!(brute_projective_count(&f2, &p3).unwrap(), 15);

    let k = brute_kernel(&catalog::twisted_cubic_rtilde_12(), 4).unwrap();
    assert_eq!(k, catalog::kernel_12_expected(4));
    assert_eq!(brute_kernel(&IntMatrix::zeros(2, 2), 3).unwrap().len(), 9);
    let id = brute_kernel(&IntMatrix::identity(2), 5).unwrap();
    assert_eq!(id.into_iter().collect::<Vec<_>>(), [vec![0, 0]]);
}

#[test]
fn projective_examples() {
    for q in [2u64, 3, 5] {
        let c = counter(q);
        let plane = Variety::new(3, vec![]).unwrap();
        assert_eq!(c.projective_count(&plane).unwrap().total, q * q + q + 1);
        let p1 = Variety::new(2, vec![]).unwrap();
        let x1 = SparsePoly::parse(c.field(), "x1", 2).unwrap();
        assert_eq!(c.quasi_projective_count(&p1, &[x1]).unwrap(), q as i64);
    }
}
