//! Canonical models in dimensions 2 to 6.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::algebra::MinimalAlgebra;
use crate::error::{Error, Result};
use crate::field::{square_class, ClassCount, FieldMode, Scalar, SquareClass};
use crate::multilinear::ExteriorElement;

/// A structure-constant coefficient: an integer, or the family parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coef {
    N(i64),
    A,
}

/// Which parameter classes a family admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `a ∈ Λ`
    AnyClass,
    /// `a ∈ Λ − {1}`
    NonTrivial,
}

pub type Term = (usize, usize, Coef);

#[derive(Debug)]
pub struct ModelSpec {
    pub name: &'static str,
    pub signature: &'static [usize],
    /// `diffs[i]` lists the terms of `dx_{i+1}` (1-based indices).
    pub diffs: &'static [&'static [Term]],
    pub family: Option<Family>,
}

impl ModelSpec {
    pub fn dim(&self) -> usize {
        self.diffs.len()
    }
}

use Coef::{A, N};

const fn t(i: usize, j: usize) -> Term {
    (i, j, N(1))
}

macro_rules! model {
    ($name:expr, [$($s:expr),*], [$($d:expr),*]) => {
        ModelSpec { name: $name, signature: &[$($s),*], diffs: &[$($d),*], family: None }
    };
    ($name:expr, [$($s:expr),*], [$($d:expr),*], $fam:expr) => {
        ModelSpec { name: $name, signature: &[$($s),*], diffs: &[$($d),*], family: Some($fam) }
    };
}

/// Every canonical model, by dimension and then in table order.
pub static REGISTRY: &[ModelSpec] = &[
    model!("A2", [2], [&[], &[]]),
    model!("A3", [3], [&[], &[], &[]]),
    model!("L3", [2, 1], [&[], &[], &[t(1, 2)]]),
    model!("A4", [4], [&[], &[], &[], &[]]),
    model!("L3+A1", [3, 1], [&[], &[], &[], &[t(1, 2)]]),
    model!("L4", [2, 1, 1], [&[], &[], &[t(1, 2)], &[t(1, 3)]]),
    model!("A5", [5], [&[], &[], &[], &[], &[]]),
    model!("L3+A2", [4, 1], [&[], &[], &[], &[], &[t(1, 2)]]),
    model!("L5_1", [4, 1], [&[], &[], &[], &[], &[t(1, 2), t(3, 4)]]),
    model!("L5_2", [3, 2], [&[], &[], &[], &[t(1, 2)], &[t(1, 3)]]),
    model!("L4+A1", [3, 1, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 4)]]),
    model!("L5_3", [3, 1, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 4), t(2, 3)]]),
    model!("L5_5", [2, 1, 2], [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(2, 3)]]),
    model!("L5_4", [2, 1, 1, 1], [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4)]]),
    model!("L5_6", [2, 1, 1, 1], [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4), t(2, 3)]]),
    model!("A6", [6], [&[], &[], &[], &[], &[], &[]]),
    model!("L3+A3", [5, 1], [&[], &[], &[], &[], &[], &[t(1, 2)]]),
    model!("L5_1+A1", [5, 1], [&[], &[], &[], &[], &[], &[t(1, 2), t(3, 4)]]),
    model!("L5_2+A1", [4, 2], [&[], &[], &[], &[], &[t(1, 2)], &[t(1, 3)]]),
    model!("L3+L3", [4, 2], [&[], &[], &[], &[], &[t(1, 2)], &[t(3, 4)]]),
    model!("L6_1", [4, 2], [&[], &[], &[], &[], &[t(1, 2)], &[t(1, 3), t(2, 4)]]),
    model!(
        "L6_2",
        [4, 2],
        [&[], &[], &[], &[], &[t(1, 3), (2, 4, A)], &[t(1, 4), t(2, 3)]],
        Family::NonTrivial
    ),
    model!("L4+A2", [4, 1, 1], [&[], &[], &[], &[], &[t(1, 2)], &[t(1, 5)]]),
    model!("L6_3", [4, 1, 1], [&[], &[], &[], &[], &[t(1, 2)], &[t(1, 5), t(3, 4)]]),
    model!("L5_3+A1", [4, 1, 1], [&[], &[], &[], &[], &[t(1, 2)], &[t(1, 5), t(2, 3)]]),
    model!("L6_4", [3, 3], [&[], &[], &[], &[t(1, 2)], &[t(1, 3)], &[t(2, 3)]]),
    model!("L6_5", [3, 2, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4)]]),
    model!("L6_6", [3, 2, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 3)], &[t(2, 4)]]),
    model!("L6_7", [3, 2, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 5), t(2, 4)]]),
    model!(
        "L6_8",
        [3, 2, 1],
        [&[], &[], &[], &[t(1, 2)], &[t(1, 3)], &[t(2, 4), (3, 5, A)]],
        Family::AnyClass
    ),
    model!("L6_9", [3, 2, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4), t(2, 3)]]),
    model!("L5_5+A1", [3, 1, 2], [&[], &[], &[], &[t(1, 2)], &[t(1, 4)], &[t(2, 4)]]),
    model!("L6_10", [3, 1, 2], [&[], &[], &[], &[t(1, 2)], &[t(1, 4)], &[t(2, 3), t(2, 4)]]),
    model!("L6_11", [3, 1, 2], [&[], &[], &[], &[t(1, 2)], &[t(1, 4)], &[t(1, 3), t(2, 4)]]),
    model!(
        "L6_12",
        [3, 1, 2],
        [&[], &[], &[], &[t(1, 2)], &[t(1, 4), t(2, 3)], &[t(1, 3), (2, 4, A)]],
        Family::NonTrivial
    ),
    model!("L5_4+A1", [3, 1, 1, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 4)], &[t(1, 5)]]),
    model!("L6_13", [3, 1, 1, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 4)], &[t(1, 5), t(2, 3)]]),
    model!("L5_6+A1", [3, 1, 1, 1], [&[], &[], &[], &[t(1, 2)], &[t(1, 4)], &[t(1, 5), t(2, 4)]]),
    model!(
        "L6_14",
        [3, 1, 1, 1],
        [&[], &[], &[], &[t(1, 2)], &[t(1, 4)], &[t(1, 5), t(2, 3), t(2, 4)]]
    ),
    model!(
        "L6_15",
        [3, 1, 1, 1],
        [&[], &[], &[], &[t(1, 2)], &[t(1, 4), t(2, 3)], &[t(1, 5), (3, 4, N(-1))]]
    ),
    model!("L6_16", [2, 1, 2, 1], [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(2, 3)], &[t(1, 4)]]),
    model!(
        "L6_17",
        [2, 1, 2, 1],
        [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(2, 3)], &[t(1, 4), (2, 5, A)]],
        Family::AnyClass
    ),
    model!("L6_18", [2, 1, 1, 1, 1], [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4)], &[t(1, 5)]]),
    model!(
        "L6_19",
        [2, 1, 1, 1, 1],
        [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4)], &[t(1, 5), t(2, 3)]]
    ),
    model!(
        "L6_20",
        [2, 1, 1, 1, 1],
        [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4)], &[t(2, 5), (3, 4, N(-1))]]
    ),
    model!(
        "L6_21",
        [2, 1, 1, 1, 1],
        [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4), t(2, 3)], &[t(1, 5), t(2, 4)]]
    ),
    model!(
        "L6_22",
        [2, 1, 1, 1, 1],
        [&[], &[], &[t(1, 2)], &[t(1, 3)], &[t(1, 4), t(2, 3)], &[t(2, 5), (3, 4, N(-1))]]
    ),
];

pub fn lookup(name: &str) -> Option<&'static ModelSpec> {
    REGISTRY.iter().find(|m| m.name == name)
}

/// Label of the abelian algebra in dimension `n` (covers `n = 0, 1`).
pub fn abelian_name(n: usize) -> String {
    format!("A{n}")
}

/// Signatures that occur, per dimension.
pub fn signatures(n: usize) -> Vec<&'static [usize]> {
    let mut out: Vec<&'static [usize]> = Vec::new();
    for m in REGISTRY.iter().filter(|m| m.dim() == n) {
        if !out.contains(&m.signature) {
            out.push(m.signature);
        }
    }
    out
}

/// A classification label: model name, optional parameter class, signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassLabel {
    pub name: String,
    pub parameter: Option<SquareClass>,
    pub signature: Vec<usize>,
}

impl ClassLabel {
    pub fn fixed(name: &str) -> Result<Self> {
        Self::with_parameter(name, None)
    }

    pub fn with_parameter(name: &str, parameter: Option<SquareClass>) -> Result<Self> {
        if let Some(n) = name.strip_prefix('A').and_then(|d| d.parse::<usize>().ok()) {
            if n <= 1 && parameter.is_none() {
                return Ok(ClassLabel {
                    name: name.to_string(),
                    parameter,
                    signature: if n == 0 { vec![] } else { vec![1] },
                });
            }
        }
        let spec = lookup(name).ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
        match (spec.family, &parameter) {
            (None, Some(_)) => {
                return Err(Error::ParameterNotAllowed(format!("{name} has no parameter")))
            }
            (Some(_), None) => {
                return Err(Error::ParameterNotAllowed(format!("{name} needs a parameter")))
            }
            (Some(Family::NonTrivial), Some(a)) if a.is_trivial() => {
                return Err(Error::ParameterNotAllowed(format!(
                    "{name} requires a nontrivial square class"
                )))
            }
            _ => {}
        }
        Ok(ClassLabel {
            name: name.to_string(),
            parameter,
            signature: spec.signature.to_vec(),
        })
    }

    pub fn spec(&self) -> Option<&'static ModelSpec> {
        lookup(&self.name)
    }

    /// Parses `"L6_8[a=-1]"` in the given mode.
    pub fn parse(s: &str, mode: FieldMode) -> Result<Self> {
        let s = s.trim();
        let (name, param) = match s.split_once('[') {
            None => (s, None),
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(']')
                    .and_then(|r| r.trim().strip_prefix("a="))
                    .ok_or_else(|| Error::Parse(format!("bad label {s:?}")))?;
                let a = Scalar::parse_in(inner, mode.field())?;
                (name, Some(square_class(&a, mode)?))
            }
        };
        Self::with_parameter(name, param)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.parameter {
            None => write!(f, "{}", self.name),
            Some(a) => write!(f, "{}[a={}]", self.name, a.representative),
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, FieldMode::Q)
    }
}

/// The registry differentials with the parameter set to its representative.
pub fn canonical_model(label: &ClassLabel, mode: FieldMode) -> Result<MinimalAlgebra> {
    let mode = mode.validate()?;
    if let Some(n) = label.name.strip_prefix('A').and_then(|d| d.parse::<usize>().ok()) {
        if n <= 1 {
            return Ok(MinimalAlgebra::abelian(mode, n));
        }
    }
    let spec = label
        .spec()
        .ok_or_else(|| Error::UnknownLabel(label.name.clone()))?;
    // re-normalize the parameter under this mode's semantics
    let parameter = match &label.parameter {
        None => None,
        Some(c) => Some(square_class(&mode.field().coerce(&c.representative)?, mode)?),
    };
    let label = ClassLabel::with_parameter(&label.name, parameter)?;
    let a = label.parameter.as_ref().map(|c| c.representative.clone());
    instantiate(spec, mode, a.as_ref())
}

/// Builds a model from its spec with an explicit parameter value.
pub fn instantiate(spec: &ModelSpec, mode: FieldMode, a: Option<&Scalar>) -> Result<MinimalAlgebra> {
    let n = spec.dim();
    let field = mode.field();
    let mut diffs = Vec::with_capacity(n);
    for terms in spec.diffs {
        let mut e = ExteriorElement::zero(n, 2);
        for &(i, j, c) in terms.iter() {
            let c = match c {
                N(k) => field.from_i64(k),
                A => field.coerce(
                    a.ok_or_else(|| Error::ParameterNotAllowed(format!("{} needs a parameter", spec.name)))?,
                )?,
            };
            e = e.add(&ExteriorElement::monomial(n, &[i - 1, j - 1], c));
        }
        diffs.push(e);
    }
    MinimalAlgebra::new(mode, diffs)
}

/// Result of [`enumerate_classes`]: concrete labels, plus families listed
/// symbolically when the mode has infinitely many square classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub labels: Vec<ClassLabel>,
    pub families: Vec<&'static str>,
    pub count: ClassCount,
}

pub fn enumerate_classes(mode: FieldMode, n: usize) -> Result<Enumeration> {
    let mode = mode.validate()?;
    if !(2..=6).contains(&n) {
        return Err(Error::BadDimension(n));
    }
    let classes = SquareClass::all(mode);
    let mut labels = Vec::new();
    let mut families = Vec::new();
    for spec in REGISTRY.iter().filter(|m| m.dim() == n) {
        match (spec.family, &classes) {
            (None, _) => labels.push(ClassLabel::fixed(spec.name)?),
            (Some(_), None) => families.push(spec.name),
            (Some(fam), Some(cs)) => {
                for c in cs {
                    if fam == Family::NonTrivial && c.is_trivial() {
                        continue;
                    }
                    labels.push(ClassLabel::with_parameter(spec.name, Some(c.clone()))?);
                }
            }
        }
    }
    let count = if families.is_empty() {
        ClassCount::Finite(labels.len())
    } else {
        ClassCount::Infinite
    };
    Ok(Enumeration {
        labels,
        families,
        count,
    })
}
