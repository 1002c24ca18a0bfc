//! 2-forms: rank, support, Darboux-style normal form, and the pencil
//! invariant of two 2-forms on a 4-dimensional space.

use crate::error::{Error, Result};
use crate::field::{square_class, Field, FieldMode, Scalar, SquareClass};
use crate::multilinear::matrix::vec_scale;
use crate::multilinear::{ExteriorElement, Matrix, Subspace, Vector};

/// Skew matrix `B` with `φ = Σ_{a<b} B_ab x_a x_b`.
pub fn to_skew(phi: &ExteriorElement, field: Field) -> Matrix {
    let n = phi.n();
    let mut m = Matrix::zeros(field, n, n);
    for (mono, c) in phi.terms() {
        let (a, b) = (mono[0] as usize, mono[1] as usize);
        m.set(a, b, c.clone());
        m.set(b, a, -c);
    }
    m
}

pub fn from_skew(m: &Matrix) -> ExteriorElement {
    let n = m.rows;
    let mut out = ExteriorElement::zero(n, 2);
    for a in 0..n {
        for b in a + 1..n {
            let c = m.get(a, b);
            if !c.is_zero() {
                out = out.add(&ExteriorElement::monomial(n, &[a, b], c.clone()));
            }
        }
    }
    out
}

/// `u ∧ v` for two 1-forms given by coordinates.
pub fn wedge_vectors(u: &[Scalar], v: &[Scalar]) -> ExteriorElement {
    ExteriorElement::from_vector(u)
        .wedge(&ExteriorElement::from_vector(v))
        .expect("degree two")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivectorNormalForm {
    /// `2r`
    pub rank: usize,
    /// `φ = Σ pairs[i].0 ∧ pairs[i].1`
    pub pairs: Vec<(Vector, Vector)>,
    /// The paired vectors followed by a completion to a basis of `W`.
    pub basis: Vec<Vector>,
    pub support: Subspace,
}

/// Span of the contractions of `φ`; the smallest `U` with `φ ∈ Λ²U`.
pub fn support(phi: &ExteriorElement, field: Field) -> Subspace {
    let b = to_skew(phi, field);
    Subspace::span(field, phi.n(), &b.row_vecs())
}

pub fn rank(phi: &ExteriorElement, field: Field) -> usize {
    to_skew(phi, field).rank()
}

/// Writes `φ ∈ Λ²W` as `x1∧x2 + … + x_{2r−1}∧x_{2r}` and completes to a basis of `W`.
pub fn normal_form(phi: &ExteriorElement, w: &Subspace) -> BivectorNormalForm {
    let field = w.field();
    let mut rest = to_skew(phi, field);
    let n = rest.rows;
    let mut pairs = Vec::new();
    loop {
        let Some((a, b)) = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| !rest.get(a, b).is_zero())
        else {
            break;
        };
        let c = rest.get(a, b).clone();
        let u = vec_scale(&c.inv().unwrap(), &rest.row(a));
        let v = rest.row(b);
        rest = rest.add(&to_skew(&wedge_vectors(&u, &v), field).scale(&-field.one()));
        pairs.push((u, v));
    }
    let mut basis: Vec<Vector> = Vec::new();
    for (u, v) in &pairs {
        basis.push(u.clone());
        basis.push(v.clone());
    }
    let support = Subspace::span(field, n, &basis);
    debug_assert!(w.contains_subspace(&support));
    basis.extend(support.complement_in(w));
    BivectorNormalForm {
        rank: 2 * pairs.len(),
        pairs,
        basis,
        support,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PencilVerdict {
    TwoPoints,
    Tangent,
    Contained,
    Empty(SquareClass),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilInvariant {
    /// `q(s,t) = α s² + β st + γ t²`
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub discriminant: Scalar,
    pub verdict: PencilVerdict,
}

/// Ratio `ω / vol` of two proportional top-degree forms on `W`.
fn ratio(omega: &ExteriorElement, vol: &ExteriorElement, field: Field) -> Scalar {
    let (m, v) = vol.terms().next().expect("nonzero volume form");
    let c = omega.coeff(m).cloned().unwrap_or_else(|| field.zero());
    &c / v
}

/// Wedge of the (echelon) basis vectors of `w`.
pub fn volume(w: &Subspace) -> ExteriorElement {
    let n = w.ambient();
    let mut acc: Option<ExteriorElement> = None;
    for b in w.basis() {
        let e = ExteriorElement::from_vector(b);
        acc = Some(match acc {
            None => e,
            Some(a) => a.wedge(&e).expect("within ambient"),
        });
    }
    acc.unwrap_or_else(|| ExteriorElement::zero(n, 0))
}

/// The quadratic form `q(s,t) = (sφ5 + tφ6)²` on a 4-dimensional `W`, and
/// the position of the pencil relative to the rank-2 quadric.
pub fn pencil_invariant(
    phi5: &ExteriorElement,
    phi6: &ExteriorElement,
    w: &Subspace,
    mode: FieldMode,
) -> Result<PencilInvariant> {
    let field = mode.field();
    let n = phi5.n();
    let pair = Subspace::span(
        field,
        crate::multilinear::binom(n, 2),
        &[phi5.coords(field), phi6.coords(field)],
    );
    if pair.dim() < 2 {
        return Err(Error::DependentPencil);
    }
    let vol = volume(w);
    let alpha = ratio(&phi5.wedge(phi5)?, &vol, field);
    let beta = &field.from_i64(2) * &ratio(&phi5.wedge(phi6)?, &vol, field);
    let gamma = ratio(&phi6.wedge(phi6)?, &vol, field);
    let discriminant = &beta * &beta - &(&field.from_i64(4) * &(&alpha * &gamma));
    let verdict = if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
        PencilVerdict::Contained
    } else if discriminant.is_zero() {
        PencilVerdict::Tangent
    } else {
        let class = square_class(&discriminant, mode)?;
        if class.is_trivial() {
            PencilVerdict::TwoPoints
        } else {
            PencilVerdict::Empty(class)
        }
    };
    Ok(PencilInvariant {
        alpha,
        beta,
        gamma,
        discriminant,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn m(n: usize, i: usize, j: usize, c: i64) -> ExteriorElement {
        ExteriorElement::monomial(n, &[i - 1, j - 1], Q.from_i64(c))
    }

    fn reconstruct(nf: &BivectorNormalForm, n: usize) -> ExteriorElement {
        nf.pairs
            .iter()
            .fold(ExteriorElement::zero(n, 2), |acc, (u, v)| acc.add(&wedge_vectors(u, v)))
    }

    #[test]
    fn ranks_and_supports() {
        let full = Subspace::full(Q, 4);
        let phi = m(4, 1, 2, 1).add(&m(4, 3, 4, 1));
        assert_eq!(normal_form(&phi, &full).rank, 4);
        let fac = m(4, 1, 2, 1).add(&m(4, 1, 3, 1));
        let nf = normal_form(&fac, &full);
        assert_eq!(nf.rank, 2);
        let expected = Subspace::span(
            Q,
            4,
            &[
                vec![Q.one(), Q.zero(), Q.zero(), Q.zero()],
                vec![Q.zero(), Q.one(), Q.one(), Q.zero()],
            ],
        );
        assert_eq!(nf.support, expected);
        assert_eq!(reconstruct(&nf, 4), fac);
        assert_eq!(nf.basis.len(), 4);
        assert_eq!(support(&ExteriorElement::zero(4, 2), Q).dim(), 0);
    }

    #[test]
    fn dense_reconstruction() {
        let mut phi = ExteriorElement::zero(6, 2);
        let mut c = 1;
        for i in 1..=6 {
            for j in i + 1..=6 {
                phi = phi.add(&m(6, i, j, (c * 7) % 11 - 5));
                c += 1;
            }
        }
        let nf = normal_form(&phi, &Subspace::full(Q, 6));
        assert_eq!(reconstruct(&nf, 6), phi);
        assert_eq!(nf.rank, rank(&phi, Q));
    }

    #[test]
    fn pencil_verdicts() {
        let w = Subspace::span(Q, 6, &Matrix::identity(Q, 6).row_vecs()[..4]);
        let v = |a, b| pencil_invariant(a, b, &w, FieldMode::Q).unwrap().verdict;
        let (x12, x34, x13) = (m(6, 1, 2, 1), m(6, 3, 4, 1), m(6, 1, 3, 1));
        assert_eq!(v(&x12, &x34), PencilVerdict::TwoPoints);
        assert_eq!(v(&x12, &x13), PencilVerdict::Contained);
        let p5 = m(6, 1, 3, 1).add(&m(6, 2, 4, -1));
        let p6 = m(6, 1, 4, 1).add(&m(6, 2, 3, 1));
        let r = pencil_invariant(&p5, &p6, &w, FieldMode::R).unwrap();
        assert_eq!(r.verdict, PencilVerdict::Empty(square_class(&Q.from_i64(-1), FieldMode::R).unwrap()));
        assert_eq!(
            pencil_invariant(&p5, &p5, &w, FieldMode::Q),
            Err(Error::DependentPencil)
        );
    }

    #[test]
    fn pencil_calibration() {
        // dy5 = y1y3 + a·y2y4, dy6 = y1y4 + y2y3 has discriminant 16a
        let w = Subspace::span(Q, 6, &Matrix::identity(Q, 6).row_vecs()[..4]);
        for a in [-1i64, 2, 3, 5] {
            let p5 = m(6, 1, 3, 1).add(&m(6, 2, 4, a));
            let p6 = m(6, 1, 4, 1).add(&m(6, 2, 3, 1));
            let inv = pencil_invariant(&p5, &p6, &w, FieldMode::Q).unwrap();
            assert_eq!(inv.discriminant, Q.from_i64(16 * a));
        }
    }
}
