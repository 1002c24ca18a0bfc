//! Classification into canonical forms.
//!
//! The algebra is first put in a basis adapted to its filtration. The
//! sub-algebra on `W_{m−1}` is classified recursively, and a recipe for the
//! signature then reads off the remaining invariants and solves for an
//! explicit isomorphism onto the canonical model.

pub mod assemble;
pub mod cases;
pub mod registry;

pub use assemble::assemble;
pub use registry::{canonical_model, enumerate_classes, instantiate, ClassLabel, Enumeration, REGISTRY};

use crate::algebra::MinimalAlgebra;
use crate::error::{Error, Result};
use crate::field::{rational_class_in_mode, square_class, FieldMode, Scalar};
use crate::multilinear::Matrix;
use cases::Frame;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub label: ClassLabel,
    /// Rows are the target generators in input coordinates.
    pub isomorphism: Matrix,
    /// `input.pushforward(isomorphism)`. Over ℝ and ℂ this is the ℚ-model
    /// the input is rationally isomorphic to.
    pub target: MinimalAlgebra,
}

/// Modes in which the actual computation happens: ℝ and ℂ inputs have
/// rational coefficients, so they are classified over ℚ and then collapsed.
fn working_mode(mode: FieldMode) -> FieldMode {
    match mode {
        FieldMode::R | FieldMode::C => FieldMode::Q,
        m => m,
    }
}

pub fn classify(alg: &MinimalAlgebra) -> Result<Classification> {
    let mode = alg.mode.validate()?;
    let n = alg.n();
    if n > 6 {
        return Err(Error::BadDimension(n));
    }
    alg.validate()?;
    let wmode = working_mode(mode);
    let work = alg.with_mode(wmode)?;
    let (name, param, mut iso) = classify_in(&work)?;
    let target = match registry::lookup(&name) {
        Some(spec) => instantiate(spec, wmode, param.as_ref())?,
        None => MinimalAlgebra::abelian(wmode, n),
    };
    if work == target {
        iso = Matrix::identity(work.field(), n);
    }
    if work.pushforward(&iso)? != target {
        return Err(Error::Internal(format!("isomorphism check failed for {name}")));
    }
    let label = collapse(&name, param.as_ref(), mode)?;
    Ok(Classification {
        label,
        isomorphism: iso,
        target: target.with_mode(mode)?,
    })
}

/// The label of a working-mode result under the semantics of `mode`.
fn collapse(name: &str, param: Option<&Scalar>, mode: FieldMode) -> Result<ClassLabel> {
    let Some(a) = param else {
        return ClassLabel::fixed(name);
    };
    let class = match a.as_rational() {
        Some(q) => rational_class_in_mode(q, mode)?,
        None => square_class(a, mode)?,
    };
    if class.is_trivial() {
        match name {
            "L6_2" => return ClassLabel::fixed("L3+L3"),
            "L6_12" => return ClassLabel::fixed("L6_10"),
            _ => {}
        }
    }
    ClassLabel::with_parameter(name, Some(class))
}

fn block_diag(p: &Matrix, n: usize) -> Matrix {
    let mut m = Matrix::identity(p.field, n);
    for i in 0..p.rows {
        for j in 0..p.cols {
            m.set(i, j, p.get(i, j).clone());
        }
    }
    m
}

/// Returns model name, parameter value and isomorphism in the working mode.
fn classify_in(alg: &MinimalAlgebra) -> Result<(String, Option<Scalar>, Matrix)> {
    let n = alg.n();
    let field = alg.field();
    if n <= 1 {
        return Ok((registry::abelian_name(n), None, Matrix::identity(field, n)));
    }
    let filt = alg.filtration()?;
    let sig = filt.signature.clone();
    if !registry::signatures(n).contains(&sig.as_slice()) {
        return Err(Error::UnreachableSignature(sig));
    }
    if sig.len() == 1 {
        return Ok((registry::abelian_name(n), None, Matrix::identity(field, n)));
    }
    let mut frame = Frame::new(alg.pushforward(&filt.adapted_basis)?);
    let s = n - sig[sig.len() - 1];
    let sub_diffs = frame.alg.diffs[..s]
        .iter()
        .map(|d| d.restrict(s).ok_or_else(|| Error::Internal("filtration not adapted".into())))
        .collect::<Result<Vec<_>>>()?;
    let sub = MinimalAlgebra::new(alg.mode, sub_diffs)?;
    let (sub_name, _, sub_iso) = classify_in(&sub)?;
    frame.apply(&block_diag(&sub_iso, n))?;

    for c in cases::candidates(&mut frame, &sig, Some(&sub_name))? {
        let spec = registry::lookup(c.name).expect("registered model");
        let target = instantiate(spec, alg.mode, c.parameter.as_ref())?;
        if let Some(p) = assemble(&frame.alg, &target, &c.fixed) {
            let iso = p.mul(&frame.acc).mul(&filt.adapted_basis);
            return Ok((c.name.to_string(), c.parameter, iso));
        }
    }
    Err(Error::Internal(format!("no isomorphism found for signature {sig:?}")))
}

/// Whether two algebras have the same class under the semantics of `mode`.
pub fn homotopy_equivalent(a: &MinimalAlgebra, b: &MinimalAlgebra, mode: FieldMode) -> Result<bool> {
    let la = classify(&a.with_mode(mode)?)?.label;
    let lb = classify(&b.with_mode(mode)?)?.label;
    Ok(la == lb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(field: Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        loop {
            let rows: Vec<Vec<Scalar>> = (0..n)
                .map(|_| (0..n).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect())
                .collect();
            let m = Matrix::from_rows(field, n, &rows);
            if m.is_invertible() {
                return m;
            }
        }
    }

    fn check_all(mode: FieldMode, params: &[i64], scrambles: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = mode.field();
        for spec in REGISTRY {
            let values: Vec<Option<Scalar>> = match spec.family {
                None => vec![None],
                Some(_) => params.iter().map(|&a| Some(f.from_i64(a))).collect(),
            };
            for a in values {
                let model = instantiate(spec, mode, a.as_ref()).unwrap();
                let expected = collapse(spec.name, a.as_ref(), mode).ok();
                for k in 0..=scrambles {
                    let alg = if k == 0 {
                        model.clone()
                    } else {
                        model.pushforward(&random_invertible(f, model.n(), &mut rng)).unwrap()
                    };
                    let c = classify(&alg).unwrap_or_else(|e| panic!("{} {:?} k={k}: {e}\n{}", spec.name, a, alg));
                    if let Some(exp) = &expected {
                        assert_eq!(&c.label, exp, "{} a={:?} scramble {k}", spec.name, a);
                    }
                    assert_eq!(alg.pushforward(&c.isomorphism).unwrap(), c.target);
                }
            }
        }
    }

    #[test]
    fn registry_models_over_q() {
        check_all(FieldMode::Q, &[-1, 2, 3, -5, 6], 5);
    }

    #[test]
    fn registry_models_over_f5_and_f7() {
        check_all(FieldMode::Fp(5), &[2], 3);
        check_all(FieldMode::Fp(7), &[3, 5], 3);
    }
}
