//! The exterior algebra on `n` degree-one generators.
//!
//! Generators are 0-based internally and printed 1-based (`x1`, `x2`, …).
//! Monomials are strictly increasing index tuples, ordered lexicographically.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::matrix::{zero_vec, Vector};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

pub type Monomial = Vec<u8>;

/// All degree-`d` monomials in `n` generators, in lexicographic order.
pub fn monomials(n: usize, d: usize) -> Vec<Monomial> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d <= n {
        rec(0, n, d, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

/// Position of a monomial in [`monomials`]`(n, d)`.
pub fn monomial_index(n: usize, m: &[u8]) -> usize {
    // combinatorial number system over the lexicographic listing
    let d = m.len();
    let mut idx = 0;
    let mut prev = 0usize;
    for (k, &i) in m.iter().enumerate() {
        for j in prev..i as usize {
            idx += binom(n - j - 1, d - k - 1);
        }
        prev = i as usize + 1;
    }
    idx
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Product of two monomials: `None` if they share an index, else the sorted
/// monomial and whether the sorting permutation is odd.
pub fn wedge_monomials(a: &[u8], b: &[u8]) -> Option<(Monomial, bool)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut m: Monomial = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    Some((m, inversions % 2 == 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExteriorElement {
    n: usize,
    degree: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl ExteriorElement {
    pub fn zero(n: usize, degree: usize) -> Self {
        ExteriorElement {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `c · x_{i1}…x_{id}` for any index order (sign adjusted, repeated index gives 0).
    pub fn monomial(n: usize, indices: &[usize], c: Scalar) -> Self {
        let mut out = Self::zero(n, indices.len());
        let mut m: Monomial = Vec::with_capacity(indices.len());
        let mut odd = false;
        for &i in indices {
            assert!(i < n, "generator index out of range");
            match wedge_monomials(&m, &[i as u8]) {
                Some((mm, s)) => {
                    m = mm;
                    odd ^= s;
                }
                None => return out,
            }
        }
        out.add_term(m, if odd { -c } else { c });
        out
    }

    pub fn generator(field: Field, n: usize, i: usize) -> Self {
        Self::monomial(n, &[i], field.one())
    }

    /// Degree-one element `Σ v_i x_i`.
    pub fn from_vector(v: &[Scalar]) -> Self {
        Self::from_coords(v.len(), 1, v)
    }

    /// Element with the given coordinates in the lexicographic monomial basis.
    pub fn from_coords(n: usize, degree: usize, coords: &[Scalar]) -> Self {
        let basis = monomials(n, degree);
        assert_eq!(basis.len(), coords.len(), "coordinate length mismatch");
        let mut out = Self::zero(n, degree);
        for (m, c) in basis.into_iter().zip(coords) {
            if !c.is_zero() {
                out.terms.insert(m, c.clone());
            }
        }
        out
    }

    pub fn coords(&self, field: Field) -> Vector {
        let mut v = zero_vec(field, binom(self.n, self.degree));
        for (m, c) in &self.terms {
            v[monomial_index(self.n, m)] = c.clone();
        }
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u8]) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// Coefficient of `x_i x_j` (any order, sign adjusted) in a 2-form.
    pub fn coeff2(&self, field: Field, i: usize, j: usize) -> Scalar {
        if i == j {
            return field.zero();
        }
        let (a, b, s) = if i < j { (i, j, false) } else { (j, i, true) };
        let c = self
            .terms
            .get(&vec![a as u8, b as u8])
            .cloned()
            .unwrap_or_else(|| field.zero());
        if s {
            -c
        } else {
            c
        }
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.degree), (other.n, other.degree), "degree mismatch in sum");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(m.clone(), c * x);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.n, other.n, "ambient mismatch in wedge");
        let d = self.degree + other.degree;
        if d > self.n {
            return Err(Error::DegreeOverflow(self.degree, other.degree, self.n));
        }
        let mut out = Self::zero(self.n, d);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((m, odd)) = wedge_monomials(a, b) {
                    let p = x * y;
                    out.add_term(m, if odd { -p } else { p });
                }
            }
        }
        Ok(out)
    }

    /// Algebra substitution `x_i ↦ Σ_j images[i][j] x_j`.
    pub fn substitute(&self, images: &[Vector]) -> Self {
        let n = images.first().map_or(self.n, |v| v.len());
        let lin: Vec<ExteriorElement> = images.iter().map(|v| Self::from_vector(v)).collect();
        let mut out = Self::zero(n, self.degree);
        for (m, c) in &self.terms {
            let mut acc: Option<ExteriorElement> = None;
            for &i in m {
                let f = &lin[i as usize];
                acc = Some(match acc {
                    None => f.clone(),
                    Some(a) => a.wedge(f).expect("substitution stays in range"),
                });
            }
            let term = match acc {
                Some(a) => a.scale(c),
                None => {
                    let mut e = Self::zero(n, 0);
                    e.add_term(Vec::new(), c.clone());
                    e
                }
            };
            out = out.add(&term);
        }
        out
    }

    /// The same element in the first `s` generators, if it only involves those.
    pub fn restrict(&self, s: usize) -> Option<Self> {
        if self.terms.keys().any(|m| m.iter().any(|&i| i as usize >= s)) {
            return None;
        }
        Some(ExteriorElement {
            n: s,
            degree: self.degree,
            terms: self.terms.clone(),
        })
    }

    /// Converts every coefficient into `field`.
    pub fn coerce(&self, field: Field) -> Result<Self> {
        let mut out = Self::zero(self.n, self.degree);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), field.coerce(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mono: String = m.iter().map(|i| format!("x{}", i + 1)).collect();
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if k > 0 {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            if c.is_one() || (neg && body == "1") {
                if mono.is_empty() {
                    write!(f, "1")?;
                }
            } else if body.contains(' ') || body.contains('/') {
                write!(f, "({body})")?;
            } else {
                write!(f, "{body}")?;
            }
            write!(f, "{mono}")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    indices: Vec<usize>,
    coeff: &'a Scalar,
}

impl Serialize for ExteriorElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermJson {
                indices: m.iter().map(|&i| i as usize + 1).collect(),
                coeff: c,
            })?;
        }
        seq.end()
    }
}
