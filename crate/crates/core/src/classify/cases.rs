//! Per-signature recipes. Each recipe inspects the algebra in a frame adapted
//! to the filtration (and to the classified sub-algebra on `W_{m−1}`), may
//! refine the frame, and proposes candidate models with a few fixed target
//! generators. [`super::assemble`] completes the rest.

use crate::algebra::MinimalAlgebra;
use crate::bivector::{self, PencilVerdict};
use crate::error::{Error, Result};
use crate::field::{square_class, Field, FieldMode, Scalar};
use crate::multilinear::matrix::{unit_vec, vec_axpy, vec_is_zero, vec_scale, zero_vec};
use crate::multilinear::{ExteriorElement, Matrix, Subspace, Vector};

/// A candidate: model name, parameter value, and the fixed generators.
pub struct Candidate {
    pub name: &'static str,
    pub parameter: Option<Scalar>,
    pub fixed: Vec<Option<Vector>>,
}

/// The algebra in the current frame, and the accumulated frame change.
pub struct Frame {
    pub alg: MinimalAlgebra,
    pub acc: Matrix,
}

impl Frame {
    pub fn new(alg: MinimalAlgebra) -> Self {
        let acc = Matrix::identity(alg.field(), alg.n());
        Frame { alg, acc }
    }

    /// Pushes forward along `g` (rows are new generators in current coordinates).
    pub fn apply(&mut self, g: &Matrix) -> Result<()> {
        self.alg = self.alg.pushforward(g)?;
        self.acc = g.mul(&self.acc);
        Ok(())
    }

    fn n(&self) -> usize {
        self.alg.n()
    }

    fn field(&self) -> Field {
        self.alg.field()
    }

    fn phi(&self, i: usize) -> &ExteriorElement {
        &self.alg.diffs[i]
    }

    /// Coefficient of `z_a z_b` in `d z_i`.
    fn coef(&self, i: usize, a: usize, b: usize) -> Scalar {
        self.phi(i).coeff2(self.field(), a, b)
    }

    fn e(&self, i: usize) -> Vector {
        unit_vec(self.field(), self.n(), i)
    }

    /// `v` with `v_a` the coefficient of `z_a z_j` in `d z_i`, for `a < upto`.
    fn contract(&self, i: usize, j: usize, upto: usize) -> Vector {
        let f = self.field();
        let mut v = zero_vec(f, self.n());
        for (a, slot) in v.iter_mut().enumerate().take(upto) {
            *slot = self.coef(i, a, j);
        }
        v
    }

    /// Span of the first `s` coordinate vectors.
    fn w(&self, s: usize) -> Subspace {
        let basis: Vec<Vector> = (0..s).map(|i| self.e(i)).collect();
        Subspace::span(self.field(), self.n(), &basis)
    }

    /// `{v ∈ span(e_0..e_{s−1}) : v ∧ f = 0 for all f}`.
    fn annihilator(&self, forms: &[ExteriorElement], s: usize) -> Vec<Vector> {
        let f = self.field();
        let n = self.n();
        let mut cols: Vec<Vector> = Vec::new();
        for a in 0..s {
            let ea = ExteriorElement::generator(f, n, a);
            let mut col = Vec::new();
            for form in forms {
                col.extend(ea.wedge(form).expect("within ambient").coords(f));
            }
            cols.push(col);
        }
        let rows = cols[0].len();
        let m = Matrix::from_cols(f, rows, &cols);
        m.kernel()
            .into_iter()
            .map(|k| {
                let mut v = zero_vec(f, n);
                v[..s].clone_from_slice(&k);
                v
            })
            .collect()
    }

    /// The frame change that applies the 2×2 matrix `g` to the generator
    /// pairs `(i0, i0+1)` and `(j0, j0+1)` simultaneously.
    fn pair_change(&self, g: &Matrix, i0: usize, j0: usize) -> Matrix {
        let mut m = Matrix::identity(self.field(), self.n());
        for base in [i0, j0] {
            for r in 0..2 {
                for c in 0..2 {
                    m.set(base + r, base + c, g.get(r, c).clone());
                }
            }
        }
        m
    }
}

fn some(vs: Vec<Vector>, n: usize) -> Vec<Option<Vector>> {
    let mut out: Vec<Option<Vector>> = vs.into_iter().map(Some).collect();
    out.resize(n, None);
    out
}

fn cand(name: &'static str, fixed: Vec<Option<Vector>>) -> Candidate {
    Candidate {
        name,
        parameter: None,
        fixed,
    }
}

fn cand_a(name: &'static str, a: Scalar, fixed: Vec<Option<Vector>>) -> Candidate {
    Candidate {
        name,
        parameter: Some(a),
        fixed,
    }
}

fn internal(msg: &str) -> Error {
    Error::Internal(msg.to_string())
}

fn class_rep(x: &Scalar, mode: FieldMode) -> Result<Scalar> {
    Ok(square_class(x, mode)?.representative)
}

fn sqrt(f: Field, x: &Scalar) -> Result<Scalar> {
    f.sqrt(x).ok_or_else(|| internal("expected a square"))
}

/// First of `e_0..e_{s−1}` outside `span(vs)`.
fn outside(frame: &Frame, vs: &[Vector], s: usize) -> Result<Vector> {
    let sp = Subspace::span(frame.field(), frame.n(), vs);
    (0..s)
        .map(|i| frame.e(i))
        .find(|e| !sp.contains(e))
        .ok_or_else(|| internal("no vector outside span"))
}

/// Symmetric 2×2 `S`: returns `H` with `Hᵀ S H` diagonal, nonzero entries first.
fn diagonalize2(s: &Matrix) -> Matrix {
    let f = s.field;
    let (a, b, d) = (s.get(0, 0).clone(), s.get(0, 1).clone(), s.get(1, 1).clone());
    if !a.is_zero() {
        let m = -(&b / &a);
        return Matrix::from_rows(f, 2, &[vec![f.one(), m], vec![f.zero(), f.one()]]);
    }
    if !d.is_zero() {
        // swap, then clear
        let m = -(&b / &d);
        return Matrix::from_rows(f, 2, &[vec![f.zero(), f.one()], vec![f.one(), m]]);
    }
    if !b.is_zero() {
        return Matrix::from_rows(f, 2, &[vec![f.one(), f.one()], vec![f.one(), -f.one()]]);
    }
    Matrix::identity(f, 2)
}

fn congruent(h: &Matrix, s: &Matrix) -> Matrix {
    h.transpose().mul(s).mul(h)
}

pub fn candidates(frame: &mut Frame, sig: &[usize], sub_name: Option<&str>) -> Result<Vec<Candidate>> {
    let n = frame.n();
    let mode = frame.alg.mode;
    match (sig, sub_name) {
        ([2, 1], _) => Ok(vec![cand("L3", some(vec![frame.e(0)], n))]),
        ([3, 1], _) => {
            let nf = bivector::normal_form(frame.phi(3), &frame.w(3));
            Ok(vec![cand("L3+A1", some(vec![nf.pairs[0].0.clone()], n))])
        }
        ([2, 1, 1], _) => Ok(vec![cand("L4", some(vec![frame.contract(3, 2, 2)], n))]),
        ([4, 1], _) => {
            let nf = bivector::normal_form(frame.phi(4), &frame.w(4));
            Ok(match nf.rank {
                2 => vec![cand("L3+A2", some(vec![nf.pairs[0].0.clone()], n))],
                _ => vec![cand(
                    "L5_1",
                    vec![Some(nf.pairs[0].0.clone()), None, Some(nf.pairs[1].0.clone()), None, None],
                )],
            })
        }
        ([3, 2], _) => {
            let l = frame.annihilator(&[frame.phi(3).clone(), frame.phi(4).clone()], 3);
            Ok(vec![cand("L5_2", some(vec![l[0].clone()], n))])
        }
        ([3, 1, 1], _) => {
            let l = frame.contract(4, 3, 3);
            if bivector::rank(frame.phi(4), frame.field()) == 2 {
                Ok(vec![cand("L4+A1", some(vec![l], n))])
            } else {
                let y2 = outside(frame, std::slice::from_ref(&l), 2)?;
                Ok(vec![cand("L5_3", some(vec![l, y2], n))])
            }
        }
        ([2, 1, 2], _) => Ok(vec![cand("L5_5", some(vec![frame.e(0), frame.e(1)], n))]),
        ([2, 1, 1, 1], _) => {
            let (c, e) = (frame.coef(4, 0, 3), frame.coef(4, 1, 2));
            if e.is_zero() {
                Ok(vec![cand("L5_4", some(vec![frame.e(0)], n))])
            } else {
                let y2 = vec_scale(&(&e / &c), &frame.e(1));
                Ok(vec![cand("L5_6", some(vec![frame.e(0), y2], n))])
            }
        }
        _ => dim6(frame, sig, sub_name, mode),
    }
}

/// Embeds a vector on the first `s` coordinates into the ambient space.
fn pad(v: &[Scalar], f: Field, n: usize) -> Vector {
    let mut out = zero_vec(f, n);
    out[..v.len()].clone_from_slice(v);
    out
}

/// Restriction of the skew matrix of `φ` to the first `s` coordinates.
fn skew_block(phi: &ExteriorElement, f: Field, s: usize) -> Matrix {
    let b = bivector::to_skew(phi, f);
    let rows: Vec<Vector> = (0..s).map(|i| b.row(i)[..s].to_vec()).collect();
    Matrix::from_rows(f, s, &rows)
}

fn dim6(frame: &mut Frame, sig: &[usize], sub: Option<&str>, mode: FieldMode) -> Result<Vec<Candidate>> {
    let n = frame.n();
    let f = frame.field();
    match (sig, sub) {
        ([5, 1], _) => {
            let nf = bivector::normal_form(frame.phi(5), &frame.w(5));
            Ok(match nf.rank {
                2 => vec![cand("L3+A3", some(vec![nf.pairs[0].0.clone()], n))],
                _ => {
                    let (u1, u2) = (nf.pairs[0].0.clone(), nf.pairs[1].0.clone());
                    vec![cand("L5_1+A1", vec![Some(u1), None, Some(u2), None, None, None])]
                }
            })
        }
        ([4, 2], _) => case_4_2(frame, mode),
        ([4, 1, 1], _) => {
            let (phi5, phi6) = (frame.phi(4).clone(), frame.phi(5).clone());
            let l = frame.contract(5, 4, 4);
            let le = ExteriorElement::from_vector(&l);
            let a6l = phi6.wedge(&le)?;
            if a6l.is_zero() {
                return Ok(vec![cand("L4+A2", some(vec![l], n))]);
            }
            if phi6.wedge(&phi5)?.is_zero() {
                let y2 = outside(frame, std::slice::from_ref(&l), 2)?;
                return Ok(vec![cand("L5_3+A1", some(vec![l, y2], n))]);
            }
            let span_l = Subspace::span(f, n, std::slice::from_ref(&l));
            let y3 = frame
                .annihilator(&[a6l], 4)
                .into_iter()
                .find(|v| !span_l.contains(v))
                .ok_or_else(|| internal("no third generator"))?;
            Ok(vec![cand("L6_3", vec![Some(l), None, Some(y3), None, None, None])])
        }
        ([3, 3], _) => Ok(vec![cand("L6_4", some(vec![frame.e(0), frame.e(1)], n))]),
        ([3, 2, 1], _) => case_3_2_1(frame, mode),
        ([3, 1, 2], _) => case_3_1_2(frame, mode),
        ([3, 1, 1, 1], Some("L4+A1")) => {
            let (c, b2, e3) = (frame.coef(5, 0, 4), frame.coef(5, 1, 3), frame.coef(5, 1, 2));
            let y2 = vec_scale(&(&b2 / &c), &frame.e(1));
            Ok(match (b2.is_zero(), e3.is_zero()) {
                (true, true) => vec![cand("L5_4+A1", some(vec![frame.e(0)], n))],
                (true, false) => vec![cand("L6_13", some(vec![frame.e(0), frame.e(1)], n))],
                (false, true) => vec![cand("L5_6+A1", some(vec![frame.e(0), y2], n))],
                (false, false) => vec![cand("L6_14", some(vec![frame.e(0), y2], n))],
            })
        }
        ([3, 1, 1, 1], Some("L5_3")) => {
            // dz6 = c(z1z5 − z3z4) + e z2z4 + f z1z4 + g z2z3 + …
            let c = frame.coef(5, 0, 4);
            let e = frame.coef(5, 1, 3);
            let fg = &frame.coef(5, 0, 3) - &frame.coef(5, 1, 2);
            let y3 = vec_axpy(&frame.e(2), &-(&e / &c), &frame.e(1));
            let y3 = vec_axpy(&y3, &-(&fg / &(&frame.field().from_i64(2) * &c)), &frame.e(0));
            Ok(vec![cand("L6_15", vec![Some(frame.e(0)), None, Some(y3), None, None, None])])
        }
        ([2, 1, 2, 1], _) => {
            let s = Matrix::from_rows(
                f,
                2,
                &[
                    vec![frame.coef(5, 0, 3), frame.coef(5, 0, 4)],
                    vec![frame.coef(5, 1, 3), frame.coef(5, 1, 4)],
                ],
            );
            let mut h = diagonalize2(&s);
            let d = congruent(&h, &s);
            let (a1, a2) = (d.get(0, 0).clone(), d.get(1, 1).clone());
            let (name, param) = if a2.is_zero() {
                ("L6_16", None)
            } else {
                let a = class_rep(&(&a2 / &a1), mode)?;
                let sc = sqrt(f, &(&(&a * &a1) / &a2))?;
                for r in 0..2 {
                    let v = h.get(r, 1) * &sc;
                    h.set(r, 1, v);
                }
                ("L6_17", Some(a))
            };
            let g = h.inverse().ok_or_else(|| internal("singular congruence"))?;
            let fixed = some(vec![pad(&g.row(0), f, n), pad(&g.row(1), f, n)], n);
            Ok(vec![Candidate {
                name,
                parameter: param,
                fixed,
            }])
        }
        ([2, 1, 1, 1, 1], Some("L5_4")) => {
            let (a, b, c) = (frame.coef(5, 0, 4), frame.coef(5, 1, 2), frame.coef(5, 1, 4));
            let e0 = frame.e(0);
            Ok(if b.is_zero() && c.is_zero() {
                vec![cand("L6_18", some(vec![e0], n))]
            } else if c.is_zero() {
                let y2 = vec_scale(&(&b / &a), &frame.e(1));
                vec![cand("L6_19", some(vec![e0, y2], n))]
            } else {
                let y2 = vec_axpy(&frame.e(1), &(&a / &c), &e0);
                vec![cand("L6_20", some(vec![e0, y2, frame.e(2)], n))]
            })
        }
        ([2, 1, 1, 1, 1], Some("L5_6")) => {
            let a = &frame.coef(5, 0, 3) - &frame.coef(5, 1, 2);
            let (b, c) = (frame.coef(5, 0, 4), frame.coef(5, 1, 4));
            let e0 = frame.e(0);
            Ok(if c.is_zero() {
                let y2 = vec_axpy(&frame.e(1), &(&a / &(&f.from_i64(2) * &b)), &e0);
                vec![cand("L6_21", some(vec![e0, y2], n))]
            } else {
                let y2 = vec_axpy(&frame.e(1), &(&b / &c), &e0);
                vec![cand("L6_22", some(vec![e0, y2, frame.e(2)], n))]
            })
        }
        _ => Err(Error::UnreachableSignature(sig.to_vec())),
    }
}

fn case_4_2(frame: &mut Frame, mode: FieldMode) -> Result<Vec<Candidate>> {
    let n = frame.n();
    let f = frame.field();
    let (phi5, phi6) = (frame.phi(4).clone(), frame.phi(5).clone());
    let inv = bivector::pencil_invariant(&phi5, &phi6, &frame.w(4), mode)?;
    let combo = |s: &Scalar, t: &Scalar| phi5.scale(s).add(&phi6.scale(t));
    match inv.verdict {
        PencilVerdict::Contained => {
            let l = frame.annihilator(&[phi5.clone(), phi6.clone()], 4);
            Ok(vec![cand("L5_2+A1", some(vec![l[0].clone()], n))])
        }
        PencilVerdict::Tangent => {
            let psi = if inv.alpha.is_zero() {
                phi5.clone()
            } else {
                combo(&-inv.beta.clone(), &(&f.from_i64(2) * &inv.alpha))
            };
            let b = bivector::support(&psi, f).basis().to_vec();
            Ok(vec![
                cand("L6_1", some(vec![b[0].clone(), b[1].clone()], n)),
                cand("L6_1", some(vec![b[1].clone(), b[0].clone()], n)),
            ])
        }
        PencilVerdict::TwoPoints => {
            let roots = if inv.alpha.is_zero() {
                vec![(f.one(), f.zero()), (-inv.gamma.clone(), inv.beta.clone())]
            } else {
                let r = sqrt(f, &inv.discriminant)?;
                let two_a = &f.from_i64(2) * &inv.alpha;
                vec![
                    (&(&-inv.beta.clone() + &r) / &two_a, f.one()),
                    (&(&-inv.beta.clone() - &r) / &two_a, f.one()),
                ]
            };
            let p1 = bivector::support(&combo(&roots[0].0, &roots[0].1), f).basis()[0].clone();
            let p2 = bivector::support(&combo(&roots[1].0, &roots[1].1), f).basis()[0].clone();
            Ok(vec![cand("L3+L3", vec![Some(p1), None, Some(p2), None, None, None])])
        }
        PencilVerdict::Empty(class) => {
            let a = class.representative;
            let b5 = skew_block(&phi5, f, 4);
            let b6 = skew_block(&phi6, f, 4);
            let m = b5.mul(&b6.inverse().ok_or_else(|| internal("degenerate pencil member"))?);
            let quarter = &m.trace() / &f.from_i64(4);
            let jp = m.add(&Matrix::identity(f, 4).scale(&-quarter));
            let delta = jp.mul(&jp).get(0, 0).clone();
            let c = sqrt(f, &(&a / &delta))?;
            let mut out = Vec::new();
            for sign in [c.clone(), -c] {
                let j = jp.scale(&(&sign / &a));
                for i in 0..4 {
                    let y1 = unit_vec(f, 4, i);
                    let y2 = j.mul_vec(&y1);
                    out.push(cand_a("L6_2", a.clone(), some(vec![pad(&y1, f, n), pad(&y2, f, n)], n)));
                }
            }
            Ok(out)
        }
    }
}

/// Sub-algebra `L5_2` (`dz4 = z1z2`, `dz5 = z1z3`); `dz6 = v2 z4 + v3 z5 + …`.
fn case_3_2_1(frame: &mut Frame, mode: FieldMode) -> Result<Vec<Candidate>> {
    let n = frame.n();
    let f = frame.field();
    let pairing = |fr: &Frame| {
        let (v2, v3) = (fr.contract(5, 3, 3), fr.contract(5, 4, 3));
        let s = Matrix::from_rows(f, 2, &[vec![v2[1].clone(), v3[1].clone()], vec![v2[2].clone(), v3[2].clone()]]);
        (v2, v3, s)
    };
    let (_, _, s) = pairing(frame);
    let h = diagonalize2(&s);
    let g = h.inverse().ok_or_else(|| internal("singular congruence"))?;
    let change = frame.pair_change(&g, 1, 3);
    frame.apply(&change)?;
    let (v2, v3, s) = pairing(frame);
    let (s2, s3) = (s.get(0, 0).clone(), s.get(1, 1).clone());
    let (alpha, alpha3) = (v2[0].clone(), v3[0].clone());
    let e0 = frame.e(0);
    if !s3.is_zero() {
        let a = class_rep(&(&s3 / &s2), mode)?;
        let c = sqrt(f, &(&s3 / &(&s2 * &a)))?;
        let y2 = vec_axpy(&frame.e(1), &(&alpha / &s2), &e0);
        let y3 = vec_scale(&c, &vec_axpy(&frame.e(2), &(&alpha3 / &s3), &e0));
        return Ok(vec![cand_a("L6_8", a, some(vec![e0, y2, y3], n))]);
    }
    if !s2.is_zero() {
        let y2 = vec_axpy(&frame.e(1), &(&alpha / &s2), &e0);
        let name = if alpha3.is_zero() { "L6_6" } else { "L6_7" };
        return Ok(vec![cand(name, some(vec![e0, y2], n))]);
    }
    // only z1 z4, z1 z5 terms: rotate so that they become a single z1 z4
    let second = if alpha.is_zero() {
        vec![f.one(), f.zero()]
    } else {
        vec![f.zero(), f.one()]
    };
    let g = Matrix::from_rows(f, 2, &[vec![alpha, alpha3], second]);
    let change = frame.pair_change(&g, 1, 3);
    frame.apply(&change)?;
    let name = if frame.coef(5, 1, 2).is_zero() { "L6_5" } else { "L6_9" };
    Ok(vec![cand(name, some(vec![frame.e(0), frame.e(1)], n))])
}

/// Sub-algebra `L3+A1` (`dz4 = z1z2`); `dz5`, `dz6` both involve `z4`.
fn case_3_1_2(frame: &mut Frame, mode: FieldMode) -> Result<Vec<Candidate>> {
    let n = frame.n();
    let f = frame.field();
    let (v5, v6) = (frame.contract(4, 3, 3), frame.contract(5, 3, 3));
    let det = &(&v5[0] * &v6[1]) - &(&v5[1] * &v6[0]);
    let mut rows = vec![v5, v6, frame.e(2)];
    for i in 3..6 {
        rows.push(vec_scale(&det, &frame.e(i)));
    }
    frame.apply(&Matrix::from_rows(f, n, &rows))?;
    let (w5, w6) = (frame.contract(4, 2, 2), frame.contract(5, 2, 2));
    let phi = Matrix::from_rows(f, 2, &[vec![w5[0].clone(), w6[0].clone()], vec![w5[1].clone(), w6[1].clone()]]);
    let half = &phi.trace() / &f.from_i64(2);
    let psi = phi.add(&Matrix::identity(f, 2).scale(&-half));
    let (e0, e1) = (frame.e(0), frame.e(1));
    let lift = |v: &[Scalar]| vec_axpy(&vec_scale(&v[0], &e0), &v[1], &e1);
    if psi.is_zero() {
        return Ok(vec![cand("L5_5+A1", some(vec![e0.clone(), e1.clone()], n))]);
    }
    let delta = -psi.det();
    if delta.is_zero() {
        let k = lift(&psi.kernel()[0]);
        let other = if vec_is_zero(&psi.col(0)) { e1.clone() } else { e0.clone() };
        return Ok(vec![cand("L6_11", some(vec![k, other], n))]);
    }
    if f.is_square(&delta) {
        let r = f.sqrt(&delta).expect("square");
        let eig = |x: &Scalar| lift(&psi.add(&Matrix::identity(f, 2).scale(&-x.clone())).kernel()[0]);
        let (p, m) = (eig(&r), eig(&-r.clone()));
        return Ok(vec![
            cand("L6_10", some(vec![m.clone(), p.clone()], n)),
            cand("L6_10", some(vec![p, m], n)),
        ]);
    }
    let a = class_rep(&delta, mode)?;
    let t = sqrt(f, &(&a * &delta))?.inv().expect("nonzero");
    let img = lift(&psi.col(0));
    let mut out = Vec::new();
    for s in [t.clone(), -t] {
        out.push(cand_a("L6_12", a.clone(), some(vec![e0.clone(), vec_scale(&s, &img)], n)));
    }
    Ok(out)
}
