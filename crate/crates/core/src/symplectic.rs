//! Invariant symplectic forms: closed 2-forms `ω` with `ω^{n/2} ≠ 0`.
//!
//! Writing `ω = Σ t_i β_i` over a basis of `Z²`, `ω^{n/2}` is a form of
//! degree `n/2` in the `t_i` times the volume form. It vanishes identically
//! exactly when no symplectic form exists; otherwise a small-integer witness
//! exists and is found by a bounded search.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::MinimalAlgebra;
use crate::error::{Error, Result};
use crate::field::{Field, FieldMode, Scalar};
use crate::multilinear::ExteriorElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SymplecticVerdict {
    Witness(ExteriorElement),
    /// `ω^{n/2}` vanishes identically on `Z²`.
    None,
}

impl SymplecticVerdict {
    pub fn is_symplectic(&self) -> bool {
        matches!(self, SymplecticVerdict::Witness(_))
    }
}

/// `c(t)` with `(Σ t_i β_i)^k = c(t) · x_1⋯x_n`, `k = n/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaffianForm {
    pub basis: Vec<ExteriorElement>,
    /// Multisets `i_1 ≤ … ≤ i_k` of basis indices and their coefficients.
    pub coeffs: BTreeMap<Vec<usize>, Scalar>,
    field: Field,
}

impl PfaffianForm {
    pub fn degree(&self) -> usize {
        self.basis.first().map(|b| b.n() / 2).unwrap_or(0)
    }

    pub fn is_identically_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (ms, c) in &self.coeffs {
            let mut term = c.clone();
            for &i in ms {
                if t[i].is_zero() {
                    term = self.field.zero();
                    break;
                }
                term = &term * &t[i];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// `Σ t_i β_i`.
    pub fn form(&self, t: &[Scalar]) -> ExteriorElement {
        let n = self.basis.first().map(|b| b.n()).unwrap_or(0);
        self.basis
            .iter()
            .zip(t)
            .filter(|(_, c)| !c.is_zero())
            .fold(ExteriorElement::zero(n, 2), |acc, (b, c)| acc.add(&b.scale(c)))
    }
}

/// Coefficient of `x_1⋯x_n` in a top-degree form.
fn top_coefficient(e: &ExteriorElement, field: Field) -> Scalar {
    let n = e.n();
    let top: Vec<u8> = (0..n as u8).collect();
    e.coeff(&top).cloned().unwrap_or_else(|| field.zero())
}

fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(m, k - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for i in start..m {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

pub fn closed_two_forms(alg: &MinimalAlgebra) -> Vec<ExteriorElement> {
    let n = alg.n();
    alg.closed_two_forms()
        .basis()
        .iter()
        .map(|v| ExteriorElement::from_coords(n, 2, v))
        .collect()
}

pub fn pfaffian_form(alg: &MinimalAlgebra) -> Result<PfaffianForm> {
    let n = alg.n();
    if n % 2 == 1 || n == 0 {
        return Err(Error::BadDimension(n));
    }
    let field = alg.field();
    let basis = closed_two_forms(alg);
    let k = n / 2;
    let mut coeffs = BTreeMap::new();
    for ms in multisets(basis.len(), k) {
        let mut w = basis[ms[0]].clone();
        for &i in &ms[1..] {
            w = w.wedge(&basis[i])?;
            if w.is_zero() {
                break;
            }
        }
        let top = top_coefficient(&w, field);
        if top.is_zero() {
            continue;
        }
        let mut mult = factorial(k);
        let mut run = 1;
        for j in 1..=ms.len() {
            if j < ms.len() && ms[j] == ms[j - 1] {
                run += 1;
            } else {
                mult /= factorial(run);
                run = 1;
            }
        }
        let c = &top * &field.from_i64(mult);
        if !c.is_zero() {
            coeffs.insert(ms, c);
        }
    }
    Ok(PfaffianForm {
        basis,
        coeffs,
        field,
    })
}

/// `dω = 0` and `ω^{n/2} ≠ 0`.
pub fn is_symplectic_form(alg: &MinimalAlgebra, omega: &ExteriorElement) -> bool {
    let n = alg.n();
    if n % 2 == 1 || omega.degree() != 2 || !alg.d(omega).is_zero() {
        return false;
    }
    let mut w = omega.clone();
    for _ in 1..n / 2 {
        match w.wedge(omega) {
            Ok(x) => w = x,
            Err(_) => return false,
        }
    }
    !top_coefficient(&w, alg.field()).is_zero()
}

/// Necessary condition: some perfect matching of the generators has every
/// pair `x_a x_b` occurring in some closed 2-form.
pub fn matching_prefilter(alg: &MinimalAlgebra) -> bool {
    let n = alg.n();
    let basis = closed_two_forms(alg);
    let mut present = vec![vec![false; n]; n];
    for b in &basis {
        for (m, _) in b.terms() {
            present[m[0] as usize][m[1] as usize] = true;
        }
    }
    fn search(free: &mut Vec<usize>, present: &[Vec<bool>]) -> bool {
        if free.is_empty() {
            return true;
        }
        let a = free.remove(0);
        for idx in 0..free.len() {
            let b = free[idx];
            if present[a][b] {
                let b = free.remove(idx);
                let ok = search(free, present);
                free.insert(idx, b);
                if ok {
                    free.insert(0, a);
                    return true;
                }
            }
        }
        free.insert(0, a);
        false
    }
    n.is_multiple_of(2) && search(&mut (0..n).collect(), &present)
}

/// Digits of width `w` in search order: `1, −1, 2, −2, …`.
fn digits(field: Field, w: i64) -> Vec<Scalar> {
    (1..=w).flat_map(|k| [field.from_i64(k), field.from_i64(-k)]).collect()
}

fn combinations(m: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, s, &mut Vec::new(), &mut out);
    out
}

/// First point with `c(t) ≠ 0`, ordered by width, then support size, then
/// support (lexicographic), then values.
fn search(pf: &PfaffianForm, max_width: i64, max_support: usize) -> Option<Vec<Scalar>> {
    let m = pf.basis.len();
    let field = pf.field;
    for w in 1..=max_width {
        let ds = digits(field, w);
        let wide = |i: usize| (i / 2 + 1) as i64 == w;
        for s in 1..=max_support.min(m) {
            for support in combinations(m, s) {
                for code in 0..ds.len().pow(s as u32) {
                    let mut idx = vec![0usize; s];
                    let mut c = code;
                    for slot in idx.iter_mut().rev() {
                        *slot = c % ds.len();
                        c /= ds.len();
                    }
                    if !idx.iter().any(|&i| wide(i)) {
                        continue;
                    }
                    let mut t = vec![field.zero(); m];
                    for (j, &i) in support.iter().zip(&idx) {
                        t[*j] = ds[i].clone();
                    }
                    if !pf.eval(&t).is_zero() {
                        return Some(t);
                    }
                }
            }
        }
    }
    None
}

pub fn decide_symplectic(alg: &MinimalAlgebra) -> Result<SymplecticVerdict> {
    alg.validate()?;
    let pf = pfaffian_form(alg)?;
    if pf.is_identically_zero() {
        return Ok(SymplecticVerdict::None);
    }
    let k = pf.degree();
    let (width, support) = match alg.mode {
        FieldMode::Fp(p) => (((p - 1) / 2) as i64, k),
        // some monomial has at most k variables; restricted there, the form has
        // a non-root on any grid with more than k values per variable
        _ => ((k as i64 + 1) / 2 + 1, k),
    };
    match search(&pf, width, support) {
        Some(t) => {
            let omega = pf.form(&t);
            if !is_symplectic_form(alg, &omega) {
                return Err(Error::Internal("witness failed verification".into()));
            }
            Ok(SymplecticVerdict::Witness(omega))
        }
        None => Err(Error::UnsupportedMode(format!(
            "{}: nonzero top-power form with no point found; non-existence is not certified",
            alg.mode
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{canonical_model, ClassLabel};

    fn model(name: &str) -> MinimalAlgebra {
        canonical_model(&ClassLabel::parse(name, FieldMode::R).unwrap(), FieldMode::R).unwrap()
    }

    fn form(terms: &[(usize, usize, i64)]) -> ExteriorElement {
        let f = Field::Rational;
        terms.iter().fold(ExteriorElement::zero(6, 2), |acc, &(i, j, c)| {
            acc.add(&ExteriorElement::monomial(6, &[i - 1, j - 1], f.from_i64(c)))
        })
    }

    fn cube_coefficient(omega: &ExteriorElement) -> Scalar {
        let w = omega.wedge(omega).unwrap().wedge(omega).unwrap();
        top_coefficient(&w, Field::Rational)
    }

    #[test]
    fn darboux_cube_and_l69_example() {
        let q = Field::Rational;
        assert_eq!(cube_coefficient(&form(&[(1, 2, 1), (3, 4, 1), (5, 6, 1)])), q.from_i64(6));
        let omega = form(&[(1, 6, 1), (2, 5, 2), (3, 4, 1)]);
        assert_eq!(cube_coefficient(&omega), q.from_i64(12));
        assert!(is_symplectic_form(&model("L6_9"), &omega));
    }

    #[test]
    fn l55_a1_closed_forms_and_zero_cubic() {
        let m = model("L5_5+A1");
        let z2 = m.closed_two_forms();
        assert_eq!(z2.dim(), 8);
        let listed = [
            form(&[(1, 2, 1)]),
            form(&[(1, 3, 1)]),
            form(&[(2, 3, 1)]),
            form(&[(1, 4, 1)]),
            form(&[(2, 4, 1)]),
            form(&[(1, 5, 1)]),
            form(&[(2, 5, 1), (1, 6, 1)]),
            form(&[(2, 6, 1)]),
        ];
        for b in &listed {
            assert!(z2.contains(&b.coords(Field::Rational)), "{b}");
        }
        assert!(pfaffian_form(&m).unwrap().is_identically_zero());
        assert_eq!(decide_symplectic(&m).unwrap(), SymplecticVerdict::None);
    }

    #[test]
    fn l612_closed_forms() {
        assert_eq!(model("L6_12[a=-1]").closed_two_forms().dim(), 8);
    }

    #[test]
    fn witness_for_a6_and_prefilter_agrees() {
        let v = decide_symplectic(&model("A6")).unwrap();
        assert!(v.is_symplectic());
        for name in ["L5_1+A1", "L6_3", "L6_7", "L6_20", "L6_22", "L6_9", "L6_4"] {
            let m = model(name);
            let verdict = decide_symplectic(&m).unwrap();
            if !matching_prefilter(&m) {
                assert!(!verdict.is_symplectic(), "{name}");
            }
        }
    }

    #[test]
    fn four_dimensional_warm_up() {
        let l3a1 = MinimalAlgebra::from_terms(FieldMode::Q, &[&[], &[], &[], &[(1, 2, 1)]]).unwrap();
        assert!(decide_symplectic(&l3a1).unwrap().is_symplectic());
        let l4 = MinimalAlgebra::from_terms(FieldMode::Q, &[&[], &[], &[(1, 2, 1)], &[(1, 3, 1)]]).unwrap();
        assert!(decide_symplectic(&l4).unwrap().is_symplectic());
    }

    #[test]
    fn finite_field_witness() {
        let m = model("L6_9").with_mode(FieldMode::Fp(5)).unwrap();
        assert!(decide_symplectic(&m).unwrap().is_symplectic());
    }
}
