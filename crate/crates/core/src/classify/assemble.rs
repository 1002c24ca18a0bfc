//! Completing a partial basis to an isomorphism onto a target model.
//!
//! Given some of the new generators `y_j` (as vectors in the current
//! coordinates), the conditions `d y_j = T_j(y)` are linear in the remaining
//! ones as long as every product `y_a y_b` in the target has a fixed factor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::MinimalAlgebra;
use crate::field::{Field, Scalar};
use crate::multilinear::matrix::{unit_vec, vec_axpy};
use crate::multilinear::{binom, ExteriorElement, Matrix, Vector};

const SEED: u64 = 0x006d_696e_696d_6f64;
const TRIES: usize = 64;

fn wedge_coords(u: &[Scalar], v: &[Scalar], field: Field) -> Vector {
    ExteriorElement::from_vector(u)
        .wedge(&ExteriorElement::from_vector(v))
        .expect("degree two")
        .coords(field)
}

fn random_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-3..=3)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

/// Returns `P` (rows are the `y_j`) with `alg.pushforward(P) == target`.
///
/// Panics if some target product has two unfixed factors.
pub fn assemble(alg: &MinimalAlgebra, target: &MinimalAlgebra, fixed: &[Option<Vector>]) -> Option<Matrix> {
    let n = alg.n();
    let field = alg.field();
    let m2 = binom(n, 2);
    assert_eq!(fixed.len(), n);

    let mut offsets = vec![None; n];
    let mut unknowns = 0;
    for j in 0..n {
        if fixed[j].is_none() {
            offsets[j] = Some(unknowns);
            unknowns += n;
        }
    }
    let basis: Vec<Vector> = (0..n).map(|i| unit_vec(field, n, i)).collect();
    let dcoords: Vec<Vector> = alg.diffs.iter().map(|d| d.coords(field)).collect();

    let mut mat = Matrix::zeros(field, n * m2, unknowns.max(1));
    let mut rhs = vec![field.zero(); n * m2];
    let add = |mat: &mut Matrix, r: usize, c: usize, x: &Scalar| {
        if !x.is_zero() {
            let v = mat.get(r, c) + x;
            mat.set(r, c, v);
        }
    };

    for j in 0..n {
        let row0 = j * m2;
        // d y_j
        match (&fixed[j], offsets[j]) {
            (Some(y), _) => {
                let dy = alg.d1(y).coords(field);
                for r in 0..m2 {
                    rhs[row0 + r] = &rhs[row0 + r] - &dy[r];
                }
            }
            (None, Some(off)) => {
                for (i, dc) in dcoords.iter().enumerate() {
                    for r in 0..m2 {
                        add(&mut mat, row0 + r, off + i, &dc[r]);
                    }
                }
            }
            _ => unreachable!(),
        }
        // − T_j(y)
        for (mono, c) in target.diffs[j].terms() {
            let (a, b) = (mono[0] as usize, mono[1] as usize);
            match (&fixed[a], &fixed[b]) {
                (Some(ya), Some(yb)) => {
                    let w = wedge_coords(ya, yb, field);
                    for r in 0..m2 {
                        rhs[row0 + r] = &rhs[row0 + r] + &(c * &w[r]);
                    }
                }
                (Some(ya), None) => {
                    let off = offsets[b].unwrap();
                    for (i, e) in basis.iter().enumerate() {
                        let w = wedge_coords(ya, e, field);
                        for r in 0..m2 {
                            add(&mut mat, row0 + r, off + i, &-(c * &w[r]));
                        }
                    }
                }
                (None, Some(yb)) => {
                    let off = offsets[a].unwrap();
                    for (i, e) in basis.iter().enumerate() {
                        let w = wedge_coords(e, yb, field);
                        for r in 0..m2 {
                            add(&mut mat, row0 + r, off + i, &-(c * &w[r]));
                        }
                    }
                }
                (None, None) => panic!("product y{}y{} has no fixed factor", a + 1, b + 1),
            }
        }
    }

    let x0 = mat.solve(&rhs)?;
    let kernel = mat.kernel();
    let build = |x: &Vector| -> Matrix {
        let rows: Vec<Vector> = (0..n)
            .map(|j| match (&fixed[j], offsets[j]) {
                (Some(y), _) => y.clone(),
                (None, Some(off)) => x[off..off + n].to_vec(),
                _ => unreachable!(),
            })
            .collect();
        Matrix::from_rows(field, n, &rows)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for attempt in 0..TRIES {
        let mut x = x0.clone();
        if attempt > 0 {
            for k in &kernel {
                let r = random_scalar(&mut rng, field);
                x = vec_axpy(&x, &r, k);
            }
        }
        let p = build(&x);
        if p.is_invertible() {
            let pushed = alg.pushforward(&p).ok()?;
            debug_assert_eq!(&pushed, target);
            return (pushed.diffs == target.diffs).then_some(p);
        }
        if kernel.is_empty() {
            break;
        }
    }
    None
}
