//! Verification harness: seeded basis scrambles, invariant fingerprints that
//! do not go through the classifier, and the exhaustive dimension-3 census
//! over 𝔽₃.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::MinimalAlgebra;
use crate::bivector::{self, PencilVerdict};
use crate::classify::{self, registry, ClassLabel};
use crate::error::{Error, Result};
use crate::field::{Field, FieldMode, Scalar};
use crate::multilinear::{ExteriorElement, Matrix, Subspace};
use crate::symplectic;

/// A random invertible matrix with entries in `{−3..3}`.
pub fn random_invertible(field: Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
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

/// Pushforward under a seeded random change of basis; returns the matrix too.
pub fn scramble(alg: &MinimalAlgebra, seed: u64) -> Result<(MinimalAlgebra, Matrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_invertible(alg.field(), alg.n(), &mut rng);
    Ok((alg.pushforward(&g)?, g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub signature: Vec<usize>,
    pub betti: Vec<usize>,
    /// `dim d(W_k)` for each filtration step.
    pub image_dims: Vec<usize>,
    /// `None` when undecided (finite fields, nonzero form without a witness).
    pub symplectic: Option<bool>,
    /// Square class of the pencil discriminant, for signature `(4,2)`.
    pub parameter_class: Option<String>,
}

pub fn fingerprint(alg: &MinimalAlgebra) -> Result<Fingerprint> {
    alg.validate()?;
    let n = alg.n();
    let field = alg.field();
    let filt = alg.filtration()?;
    let d1 = alg.d_matrix(1);
    let image_dims = filt.subspaces.iter().map(|w| w.image(&d1.matrix).dim()).collect();
    let symplectic = if n.is_multiple_of(2) && n > 0 {
        match symplectic::decide_symplectic(alg) {
            Ok(v) => Some(v.is_symplectic()),
            Err(Error::UnsupportedMode(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        Some(false)
    };
    let parameter_class = if filt.signature == [4, 2] {
        let w1 = &filt.subspaces[0];
        let b = alg.pushforward(&filt.adapted_basis)?;
        let w = Subspace::span(field, n, &Matrix::identity(field, n).row_vecs()[..w1.dim()]);
        match bivector::pencil_invariant(&b.diffs[4], &b.diffs[5], &w, alg.mode)?.verdict {
            PencilVerdict::Empty(c) => Some(c.representative.to_string()),
            _ => None,
        }
    } else {
        None
    };
    Ok(Fingerprint {
        signature: filt.signature,
        betti: alg.betti().0,
        image_dims,
        symplectic,
        parameter_class,
    })
}

/// One record of the dimension-3 census.
#[derive(Clone, Debug, Serialize)]
pub struct CensusRecord {
    pub index: usize,
    pub algebra: serde_json::Value,
    pub label: String,
    pub fingerprint_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub tables: usize,
    pub valid: usize,
    pub counts: BTreeMap<String, usize>,
    pub records: Vec<CensusRecord>,
}

impl Census {
    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect()
    }
}

/// Every table `dx_i = Σ_{j<k} c^i_{jk} x_j x_k` over 𝔽₃ in three generators.
pub fn enumerate_dim3_f3() -> Result<Census> {
    let mode = FieldMode::Fp(3);
    let field = mode.field();
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut counts = BTreeMap::new();
    let mut records = Vec::new();
    let mut fingerprints: BTreeMap<String, Fingerprint> = BTreeMap::new();
    let total = 3usize.pow(9);
    for code in 0..total {
        let mut c = code;
        let mut diffs = Vec::with_capacity(3);
        for _ in 0..3 {
            let mut e = ExteriorElement::zero(3, 2);
            for &(j, k) in &pairs {
                let v = (c % 3) as i64;
                c /= 3;
                if v != 0 {
                    e = e.add(&ExteriorElement::monomial(3, &[j, k], field.from_i64(v)));
                }
            }
            diffs.push(e);
        }
        let alg = MinimalAlgebra::new(mode, diffs)?;
        if alg.validate().is_err() {
            continue;
        }
        let label = classify::classify(&alg)?.label.to_string();
        let canonical = match fingerprints.get(&label) {
            Some(f) => f.clone(),
            None => {
                let m = classify::canonical_model(&ClassLabel::parse(&label, mode)?, mode)?;
                let f = fingerprint(&m)?;
                fingerprints.insert(label.clone(), f.clone());
                f
            }
        };
        let fingerprint_matches = fingerprint(&alg)? == canonical;
        *counts.entry(label.clone()).or_insert(0) += 1;
        records.push(CensusRecord {
            index: code,
            algebra: alg.to_json(),
            label,
            fingerprint_matches,
        });
    }
    Ok(Census {
        tables: total,
        valid: records.len(),
        counts,
        records,
    })
}

/// One randomized invariance trial.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub mode: FieldMode,
    pub model: String,
    pub classified: Option<String>,
    pub error: Option<String>,
    pub fingerprint_matches: bool,
    pub label_matches: bool,
    pub unreachable_signature: bool,
}

/// Labels of every canonical model of dimension `n` in `mode`, with
/// parameters drawn from `params` when the mode has infinitely many classes.
pub fn sample_labels(mode: FieldMode, n: usize, params: &[i64]) -> Result<Vec<ClassLabel>> {
    let en = registry::enumerate_classes(mode, n)?;
    let mut out = en.labels;
    for fam in en.families {
        for &a in params {
            let label = format!("{fam}[a={a}]");
            match ClassLabel::parse(&label, mode) {
                Ok(l) if !out.contains(&l) => out.push(l),
                _ => {}
            }
        }
    }
    Ok(out)
}

/// Scrambles random models of dimension `n` and checks that the fingerprint
/// and the classified label survive.
pub fn run_trials(mode: FieldMode, n: usize, trials: usize, seed: u64) -> Result<Vec<TrialRecord>> {
    let labels = sample_labels(mode, n, &[-1, 2, 3, 5, -6])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let label = &labels[rng.gen_range(0..labels.len())];
        let trial_seed: u64 = rng.gen();
        let model = classify::canonical_model(label, mode)?;
        let (alg, _) = scramble(&model, trial_seed)?;
        let fingerprint_matches = fingerprint(&alg)? == fingerprint(&model)?;
        let (classified, error, unreachable) = match classify::classify(&alg) {
            Ok(c) => (Some(c.label.to_string()), None, false),
            Err(e) => (None, Some(e.to_string()), matches!(e, Error::UnreachableSignature(_))),
        };
        out.push(TrialRecord {
            trial,
            seed: trial_seed,
            mode,
            model: label.to_string(),
            label_matches: classified.as_deref() == Some(&label.to_string()),
            classified,
            error,
            fingerprint_matches,
            unreachable_signature: unreachable,
        });
    }
    Ok(out)
}

pub fn trials_to_jsonl(records: &[TrialRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
        .collect()
}
