//! Minimal algebras and their dual Lie algebras: validation, conversion, the
//! intrinsic filtration `W_1 ⊆ W_2 ⊆ …`, closed 2-forms and Betti numbers.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldMode, Scalar};
use crate::multilinear::matrix::{unit_vec, vec_is_zero};
use crate::multilinear::{binom, monomials, ExteriorElement, LinearMap, Matrix, Subspace, Vector};

/// `(ΛV, d)` with `V` in degree one: `diffs[i] = dx_{i+1}` is a 2-form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinimalAlgebra {
    pub mode: FieldMode,
    pub diffs: Vec<ExteriorElement>,
}

/// Structure constants `[X_j, X_k] = Σ_i a^i_{jk} X_i`, stored for `j < k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub n: usize,
    pub mode: FieldMode,
    pub brackets: BTreeMap<(usize, usize), Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationResult {
    pub subspaces: Vec<Subspace>,
    pub signature: Vec<usize>,
    /// Row `j` holds the new generator `y_j` in old coordinates; rows are
    /// grouped by filtration level.
    pub adapted_basis: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn is_poincare_symmetric(&self) -> bool {
        let n = self.0.len();
        (0..n).all(|k| self.0[k] == self.0[n - 1 - k])
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Closed 2-forms and a complement of the exact ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2Classes {
    pub closed: Subspace,
    pub exact: Subspace,
    pub representatives: Vec<Vector>,
}

impl MinimalAlgebra {
    /// Builds an algebra, coercing coefficients into the mode's field.
    pub fn new(mode: FieldMode, diffs: Vec<ExteriorElement>) -> Result<Self> {
        let mode = mode.validate()?;
        let n = diffs.len();
        let field = mode.field();
        let diffs = diffs
            .into_iter()
            .map(|d| {
                if d.n() != n || d.degree() != 2 {
                    return Err(Error::Parse(format!(
                        "differential {d} is not a 2-form in {n} generators"
                    )));
                }
                d.coerce(field)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MinimalAlgebra { mode, diffs })
    }

    /// Shorthand: `terms[i]` lists `(j, k, c)` with `dx_{i+1} = Σ c·x_j x_k`
    /// (1-based `j`, `k`).
    pub fn from_terms(mode: FieldMode, terms: &[&[(usize, usize, i64)]]) -> Result<Self> {
        let n = terms.len();
        let field = mode.field();
        let diffs = terms
            .iter()
            .map(|ts| {
                ts.iter().fold(ExteriorElement::zero(n, 2), |acc, &(j, k, c)| {
                    acc.add(&ExteriorElement::monomial(n, &[j - 1, k - 1], field.from_i64(c)))
                })
            })
            .collect();
        Self::new(mode, diffs)
    }

    pub fn abelian(mode: FieldMode, n: usize) -> Self {
        MinimalAlgebra {
            mode,
            diffs: vec![ExteriorElement::zero(n, 2); n],
        }
    }

    pub fn n(&self) -> usize {
        self.diffs.len()
    }

    pub fn field(&self) -> Field {
        self.mode.field()
    }

    /// Same differentials, different field semantics (arithmetic must agree).
    pub fn with_mode(&self, mode: FieldMode) -> Result<Self> {
        Self::new(mode, self.diffs.clone())
    }

    /// `d(Σ v_i x_i) = Σ v_i dx_i`.
    pub fn d1(&self, v: &[Scalar]) -> ExteriorElement {
        let n = self.n();
        v.iter()
            .zip(&self.diffs)
            .fold(ExteriorElement::zero(n, 2), |acc, (c, dx)| {
                if c.is_zero() {
                    acc
                } else {
                    acc.add(&dx.scale(c))
                }
            })
    }

    /// `d` extended as a derivation to `Λ^k`.
    pub fn d(&self, e: &ExteriorElement) -> ExteriorElement {
        let n = self.n();
        let k = e.degree();
        let mut out = ExteriorElement::zero(n, k + 1);
        if k + 1 > n {
            return out;
        }
        for (m, c) in e.terms() {
            for r in 0..m.len() {
                let rest: Vec<usize> = m
                    .iter()
                    .enumerate()
                    .filter(|&(s, _)| s != r)
                    .map(|(_, &i)| i as usize)
                    .collect();
                let rest = ExteriorElement::monomial(n, &rest, c.clone());
                let mut t = self.diffs[m[r] as usize].wedge(&rest).expect("degree in range");
                if r % 2 == 1 {
                    t = t.neg();
                }
                out = out.add(&t);
            }
        }
        out
    }

    /// Matrix of `d: Λ^k → Λ^{k+1}` in the lexicographic monomial bases.
    pub fn d_matrix(&self, k: usize) -> LinearMap {
        let n = self.n();
        let field = self.field();
        let rows = binom(n, k + 1);
        let cols: Vec<Vector> = monomials(n, k)
            .iter()
            .map(|m| {
                let idx: Vec<usize> = m.iter().map(|&i| i as usize).collect();
                let e = ExteriorElement::monomial(n, &idx, field.one());
                self.d(&e).coords(field)
            })
            .collect();
        if cols.is_empty() {
            return LinearMap::new(Matrix::zeros(field, rows, 0));
        }
        LinearMap::new(Matrix::from_cols(field, rows, &cols))
    }

    /// Checks `d² = 0` and nilpotency.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for (i, dx) in self.diffs.iter().enumerate() {
            let dd = self.d(dx);
            if let Some((m, _)) = dd.terms().next() {
                return Err(Error::NotClosed {
                    generator: i + 1,
                    triple: (m[0] as usize + 1, m[1] as usize + 1, m[2] as usize + 1),
                });
            }
            debug_assert_eq!(dx.n(), n);
        }
        self.filtration().map(|_| ())
    }

    /// The maximal filtration `W_1 = ker d ∩ V`, `W_k = d⁻¹(Λ²W_{k−1})`.
    pub fn filtration(&self) -> Result<FiltrationResult> {
        let n = self.n();
        let field = self.field();
        let d1 = self.d_matrix(1);
        let mut subspaces = Vec::new();
        let mut current = Subspace::zero(field, n);
        loop {
            let wedge_sq = lambda2(&current, n);
            let next = d1.preimage(&wedge_sq);
            if next.dim() == current.dim() {
                break;
            }
            subspaces.push(next.clone());
            current = next;
        }
        if current.dim() < n {
            return Err(Error::NotNilpotent {
                reached: current.dim(),
                n,
            });
        }
        let mut signature = Vec::new();
        let mut rows = Vec::new();
        let mut prev = Subspace::zero(field, n);
        for w in &subspaces {
            let comp = prev.complement_in(w);
            signature.push(comp.len());
            rows.extend(comp);
            prev = w.clone();
        }
        let adapted_basis = Matrix::from_rows(field, n, &rows);
        Ok(FiltrationResult {
            subspaces,
            signature,
            adapted_basis,
        })
    }

    /// The algebra in the generators `y_j = Σ_i p[j][i] x_i`.
    pub fn pushforward(&self, p: &Matrix) -> Result<MinimalAlgebra> {
        let q = p
            .inverse()
            .ok_or_else(|| Error::Internal("change of basis is singular".into()))?;
        let images: Vec<Vector> = q.row_vecs();
        let diffs = (0..self.n())
            .map(|j| self.d1(&p.row(j)).substitute(&images))
            .collect();
        Ok(MinimalAlgebra {
            mode: self.mode,
            diffs,
        })
    }

    pub fn closed_two_forms(&self) -> Subspace {
        self.d_matrix(2).kernel()
    }

    pub fn h2_classes(&self) -> H2Classes {
        let closed = self.closed_two_forms();
        let exact = self.d_matrix(1).image();
        let representatives = exact.complement_in(&closed);
        H2Classes {
            closed,
            exact,
            representatives,
        }
    }

    pub fn betti(&self) -> BettiVector {
        let n = self.n();
        let ranks: Vec<usize> = (0..=n).map(|k| self.d_matrix(k).rank()).collect();
        BettiVector(
            (0..=n)
                .map(|k| binom(n, k) - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
                .collect(),
        )
    }

    pub fn to_lie(&self) -> LieAlgebra {
        let n = self.n();
        let field = self.field();
        let mut brackets = BTreeMap::new();
        for j in 0..n {
            for k in j + 1..n {
                let v: Vector = self.diffs.iter().map(|dx| -dx.coeff2(field, j, k)).collect();
                if !vec_is_zero(&v) {
                    brackets.insert((j, k), v);
                }
            }
        }
        LieAlgebra {
            n,
            mode: self.mode,
            brackets,
        }
    }

    pub fn to_json(&self) -> Value {
        let field = self.field();
        let n = self.n();
        let diffs: Vec<Value> = self
            .diffs
            .iter()
            .map(|dx| {
                let mut terms = Vec::new();
                for j in 0..n {
                    for k in j + 1..n {
                        let c = dx.coeff2(field, j, k);
                        if !c.is_zero() {
                            terms.push(json!({"i": j + 1, "j": k + 1, "c": c.to_string()}));
                        }
                    }
                }
                Value::Array(terms)
            })
            .collect();
        json!({"field": self.mode.to_string(), "dim": n, "diffs": diffs})
    }

    /// Parses the JSON schema, either `diffs` or `brackets`; `mode`
    /// overrides the document's `field` when given.
    pub fn from_json(v: &Value, mode: Option<FieldMode>) -> Result<Self> {
        let mode = match (mode, v.get("field")) {
            (Some(m), _) => m,
            (None, Some(Value::String(s))) => s.parse()?,
            (None, None) => FieldMode::Q,
            (None, Some(other)) => return Err(Error::Parse(format!("bad field {other}"))),
        };
        if v.get("brackets").is_some() {
            return LieAlgebra::from_json(v, mode)?.to_minimal();
        }
        let field = mode.field();
        let diffs = v
            .get("diffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"diffs\" or \"brackets\"".into()))?;
        let n = json_dim(v, diffs.len())?;
        if diffs.len() != n {
            return Err(Error::Parse(format!("dim {n} but {} differentials", diffs.len())));
        }
        let mut out = Vec::with_capacity(n);
        for entry in diffs {
            let terms = entry
                .as_array()
                .ok_or_else(|| Error::Parse("differential must be a list".into()))?;
            let mut e = ExteriorElement::zero(n, 2);
            for t in terms {
                let i = json_index(t, "i", n)?;
                let j = json_index(t, "j", n)?;
                let c = json_scalar(t, field)?;
                e = e.add(&ExteriorElement::monomial(n, &[i, j], c));
            }
            out.push(e);
        }
        Self::new(mode, out)
    }
}

fn json_dim(v: &Value, fallback: usize) -> Result<usize> {
    match v.get("dim") {
        None => Ok(fallback),
        Some(d) => d
            .as_u64()
            .map(|d| d as usize)
            .ok_or_else(|| Error::Parse(format!("bad dim {d}"))),
    }
}

fn json_index(t: &Value, key: &str, n: usize) -> Result<usize> {
    let i = t
        .get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse(format!("term {t} lacks index {key:?}")))? as usize;
    if i == 0 || i > n {
        return Err(Error::Parse(format!("index {i} out of range 1..={n}")));
    }
    Ok(i - 1)
}

fn json_scalar(t: &Value, field: Field) -> Result<Scalar> {
    match t.get("c") {
        None => Ok(field.one()),
        Some(Value::String(s)) => Ok(Scalar::parse_in(s, field)?),
        Some(Value::Number(x)) if x.is_i64() => Ok(field.from_i64(x.as_i64().unwrap())),
        Some(other) => Err(Error::Parse(format!("bad coefficient {other}"))),
    }
}

/// `Λ²W` inside the coordinate space of `Λ²V`.
pub fn lambda2(w: &Subspace, n: usize) -> Subspace {
    let field = w.field();
    let b = w.basis();
    let mut vecs = Vec::new();
    for a in 0..b.len() {
        for c in a + 1..b.len() {
            let e = ExteriorElement::from_vector(&b[a])
                .wedge(&ExteriorElement::from_vector(&b[c]))
                .expect("degree two");
            vecs.push(e.coords(field));
        }
    }
    Subspace::span(field, binom(n, 2), &vecs)
}

impl LieAlgebra {
    pub fn bracket(&self, j: usize, k: usize) -> Vector {
        let field = self.mode.field();
        if j == k {
            return vec![field.zero(); self.n];
        }
        let (a, b, neg) = if j < k { (j, k, false) } else { (k, j, true) };
        match self.brackets.get(&(a, b)) {
            Some(v) if neg => v.iter().map(|x| -x).collect(),
            Some(v) => v.clone(),
            None => vec![field.zero(); self.n],
        }
    }

    fn bracket_vec(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        let field = self.mode.field();
        let mut out = vec![field.zero(); self.n];
        for (j, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in v.iter().enumerate() {
                if b.is_zero() || j == k {
                    continue;
                }
                let c = a * b;
                for (o, x) in out.iter_mut().zip(self.bracket(j, k)) {
                    *o = &*o + &(&c * &x);
                }
            }
        }
        out
    }

    /// First triple `(j, k, l)` (0-based) violating the Jacobi identity.
    pub fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let field = self.mode.field();
        let e = |i| unit_vec(field, self.n, i);
        for j in 0..self.n {
            for k in j + 1..self.n {
                for l in k + 1..self.n {
                    let t1 = self.bracket_vec(&self.bracket(j, k), &e(l));
                    let t2 = self.bracket_vec(&self.bracket(k, l), &e(j));
                    let t3 = self.bracket_vec(&self.bracket(l, j), &e(k));
                    let s: Vector = t1.iter().zip(&t2).zip(&t3).map(|((a, b), c)| a + b + c.clone()).collect();
                    if !vec_is_zero(&s) {
                        return Some((j, k, l));
                    }
                }
            }
        }
        None
    }

    /// `dx_i = −Σ_{j<k} a^i_{jk} x_j x_k`.
    pub fn to_minimal(&self) -> Result<MinimalAlgebra> {
        if let Some((j, k, l)) = self.jacobi_failure() {
            let dual = self.to_minimal_unchecked();
            let generator = dual
                .diffs
                .iter()
                .position(|dx| !dual.d(dx).is_zero())
                .map_or(0, |i| i + 1);
            return Err(Error::NotClosed {
                generator,
                triple: (j + 1, k + 1, l + 1),
            });
        }
        let a = self.to_minimal_unchecked();
        a.filtration()?;
        Ok(a)
    }

    pub fn to_minimal_unchecked(&self) -> MinimalAlgebra {
        let n = self.n;
        let mut diffs = vec![ExteriorElement::zero(n, 2); n];
        for (&(j, k), v) in &self.brackets {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    diffs[i] = diffs[i].add(&ExteriorElement::monomial(n, &[j, k], -c));
                }
            }
        }
        MinimalAlgebra {
            mode: self.mode,
            diffs,
        }
    }

    pub fn from_json(v: &Value, mode: FieldMode) -> Result<Self> {
        let field = mode.field();
        let list = v
            .get("brackets")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("\"brackets\" must be a list".into()))?;
        let n = match v.get("dim") {
            Some(_) => json_dim(v, 0)?,
            None => return Err(Error::Parse("bracket input needs \"dim\"".into())),
        };
        let mut brackets: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for t in list {
            let j = json_index(t, "j", n)?;
            let k = json_index(t, "k", n)?;
            let i = json_index(t, "i", n)?;
            let mut c = json_scalar(t, field)?;
            if j == k {
                return Err(Error::Parse(format!("bracket [X{0},X{0}] must vanish", j + 1)));
            }
            let key = if j < k { (j, k) } else { (k, j) };
            if j > k {
                c = -c;
            }
            let entry = brackets.entry(key).or_insert_with(|| vec![field.zero(); n]);
            entry[i] = &entry[i] + &c;
        }
        brackets.retain(|_, v| !vec_is_zero(v));
        Ok(LieAlgebra { n, mode, brackets })
    }
}

impl fmt::Display for MinimalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, dx)| format!("dx{}={}", i + 1, dx))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(terms: &[&[(usize, usize, i64)]]) -> MinimalAlgebra {
        MinimalAlgebra::from_terms(FieldMode::Q, terms).unwrap()
    }

    #[test]
    fn heisenberg_from_brackets() {
        let v = json!({"field": "Q", "dim": 3, "brackets": [{"j": 1, "k": 2, "i": 3, "c": "-1"}]});
        let a = MinimalAlgebra::from_json(&v, None).unwrap();
        assert_eq!(a.diffs[2].to_string(), "x1x2");
        assert_eq!(a.to_lie().to_minimal().unwrap(), a);
    }

    #[test]
    fn kernel_of_d_on_l3() {
        let l3 = alg(&[&[], &[], &[(1, 2, 1)]]);
        let f = l3.filtration().unwrap();
        assert_eq!(f.signature, vec![2, 1]);
        let q = Field::Rational;
        assert_eq!(
            f.subspaces[0],
            Subspace::span(q, 3, &[unit_vec(q, 3, 0), unit_vec(q, 3, 1)])
        );
    }

    #[test]
    fn preimage_for_l4() {
        let l4 = alg(&[&[], &[], &[(1, 2, 1)], &[(1, 3, 1)]]);
        let q = Field::Rational;
        let w3 = Subspace::span(q, 4, &[unit_vec(q, 4, 0), unit_vec(q, 4, 1), unit_vec(q, 4, 2)]);
        assert_eq!(l4.d_matrix(1).preimage(&lambda2(&w3, 4)).dim(), 4);
        assert_eq!(l4.filtration().unwrap().signature, vec![2, 1, 1]);
    }

    #[test]
    fn non_nilpotent_and_non_closed() {
        let bad = alg(&[&[], &[(1, 2, 1)]]);
        assert_eq!(bad.validate(), Err(Error::NotNilpotent { reached: 1, n: 2 }));
        let nc = alg(&[&[], &[], &[(1, 2, 1)], &[(3, 4, 1)]]);
        assert!(matches!(nc.validate(), Err(Error::NotClosed { generator: 4, .. })));
    }

    #[test]
    fn betti_abelian_and_l6_22() {
        let a6 = MinimalAlgebra::abelian(FieldMode::Q, 6);
        assert_eq!(a6.betti().0, vec![1, 6, 15, 20, 15, 6, 1]);
        let l622 = alg(&[&[], &[], &[(1, 2, 1)], &[(1, 3, 1)], &[(1, 4, 1), (2, 3, 1)], &[(2, 5, 1), (3, 4, -1)]]);
        l622.validate().unwrap();
        assert_eq!(l622.betti().0, vec![1, 2, 2, 2, 2, 2, 1]);
        assert_eq!(l622.filtration().unwrap().signature, vec![2, 1, 1, 1, 1]);
    }

    #[test]
    fn d_squared_vanishes() {
        let l622 = alg(&[&[], &[], &[(1, 2, 1)], &[(1, 3, 1)], &[(1, 4, 1), (2, 3, 1)], &[(2, 5, 1), (3, 4, -1)]]);
        for k in 0..5 {
            let c = l622.d_matrix(k + 1).matrix.mul(&l622.d_matrix(k).matrix);
            assert!(c.is_zero());
        }
    }

    #[test]
    fn json_roundtrip() {
        let l4 = alg(&[&[], &[], &[(1, 2, 1)], &[(1, 3, 1)]]);
        let back = MinimalAlgebra::from_json(&l4.to_json(), None).unwrap();
        assert_eq!(back, l4);
    }
}
