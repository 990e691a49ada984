//! Exact linear algebra over ℚⁿ: subspaces as flats, dot-product
//! orthogonality.
//!
//! Subspaces are kept as reduced row-echelon bases with no zero rows, so
//! equality and hashing are structural. No floating point is used anywhere.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, ParseError, Result};
use crate::ospace::{self, AxiomReport, OSpace};

pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector {
    coords: Vec<Rational>,
}

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalVector {
            coords: coords.iter().map(|&c| Rational::from_integer(c.into())).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        RationalVector {
            coords: vec![Rational::zero(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A linear subspace of ℚⁿ in canonical form: reduced row echelon, pivots
/// equal to one, no zero rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Subspace { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Subspace { dim, basis }
    }

    /// Span of `vectors` in ℚ^`dim`.
    pub fn span(dim: usize, vectors: &[RationalVector]) -> Result<Self> {
        for v in vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: v.dim(),
                });
            }
        }
        Ok(Self::from_rows(dim, vectors.iter().map(|v| v.coords.clone()).collect()))
    }

    fn from_rows(dim: usize, mut rows: Vec<Vec<Rational>>) -> Self {
        rref(&mut rows, dim);
        Subspace { dim, basis: rows }
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<RationalVector> {
        self.basis.iter().cloned().map(RationalVector::new).collect()
    }

    /// All vectors orthogonal to every basis vector: the nullspace of the
    /// basis matrix.
    pub fn orth(&self) -> Subspace {
        Subspace::from_rows(self.dim, nullspace(&self.basis, self.dim))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::from_rows(self.dim, rows)
    }

    /// Vectors satisfying the constraints of both `A^⊥` and `B^⊥`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let constraints: Vec<Vec<Rational>> = self.orth().basis.into_iter().chain(other.orth().basis).collect();
        Subspace::from_rows(self.dim, nullspace(&constraints, self.dim))
    }

    /// `self ⊆ other`, by comparing ranks.
    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        other.sum(self).rank() == other.rank()
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.coords.clone());
        rank(&mut rows, self.dim) == self.rank()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Subspace literal syntax: `span[(1,0),(0,1/2)]`, printed from the canonical
/// basis.
impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("span[")?;
        for (i, v) in self.basis().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Brings `rows` to reduced row echelon form in place and drops zero rows.
fn rref(rows: &mut Vec<Vec<Rational>>, cols: usize) {
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= &factor * p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
}

fn rank(rows: &mut Vec<Vec<Rational>>, cols: usize) -> usize {
    rref(rows, cols);
    rows.len()
}

/// Basis of `{ v | row · v = 0 for every row }`.
fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    rref(&mut m, cols);
    let pivots: Vec<usize> = m
        .iter()
        .map(|r| r.iter().position(|v| !v.is_zero()).expect("rref drops zero rows"))
        .collect();
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// ℚⁿ with dot-product orthogonality. The family 𝓕 is every subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSpace {
    n: usize,
    sample_budget: usize,
}

pub const DEFAULT_SAMPLE_BUDGET: usize = 200;

impl RationalSpace {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_budget(n, DEFAULT_SAMPLE_BUDGET)
    }

    pub fn with_budget(n: usize, sample_budget: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(RationalSpace { n, sample_budget })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn sample_budget(&self) -> usize {
        self.sample_budget
    }

    pub fn span(&self, vectors: &[RationalVector]) -> Result<Subspace> {
        Subspace::span(self.n, vectors)
    }

    /// `span` over integer coordinates. Panics on a dimension mismatch.
    pub fn span_ints(&self, vectors: &[&[i64]]) -> Subspace {
        let vs: Vec<RationalVector> = vectors.iter().map(|v| RationalVector::from_ints(v)).collect();
        self.span(&vs).expect("vector length must match the ambient dimension")
    }

    /// Projection by the literal formula, rejecting mismatched dimensions.
    pub fn project_subspace(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.project(a, b))
    }

    pub fn check(&self, a: &Subspace) -> Result<()> {
        if a.dim != self.n {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: a.dim,
            })
        } else {
            Ok(())
        }
    }

    /// Deterministic sample: coordinates drawn from
    /// `{−2, −1, 0, 1, 2} / {1, 2}` in lexicographic order, zero vector
    /// skipped, at most `sample_budget` vectors.
    pub fn sample_vectors(&self) -> Vec<RationalVector> {
        let mut values: Vec<Rational> = Vec::new();
        for num in -2i64..=2 {
            for den in 1i64..=2 {
                let v = Rational::new(num.into(), den.into());
                if !values.contains(&v) {
                    values.push(v);
                }
            }
        }
        values.sort();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.n];
        loop {
            let v = RationalVector::new(idx.iter().map(|&i| values[i].clone()).collect());
            if !v.is_zero() {
                if out.len() == self.sample_budget {
                    break;
                }
                out.push(v);
            }
            let mut pos = self.n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < values.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
        out
    }

    /// Sampled axiom check. S and Z hold structurally over ℚ and are also
    /// confirmed on the sample; F is checked on `flats`; O quantifies over
    /// the sample; A is exact because the union of the rays `{a} ⊗ B` over
    /// `a ∈ A` is the subspace spanned by the projections of a basis of `A`.
    pub fn check_axioms_sampled(&self, flats: &[Subspace]) -> AxiomReport {
        ospace::check_axioms(self, &self.sample_vectors(), flats)
    }
}

impl OSpace for RationalSpace {
    type Flat = Subspace;
    type State = RationalVector;

    fn orthogonal(&self, x: &RationalVector, y: &RationalVector) -> bool {
        x.dot(y).is_zero()
    }

    fn singleton(&self, x: &RationalVector) -> Subspace {
        Subspace::from_rows(self.n, vec![x.coords.clone()])
    }

    fn contains(&self, a: &Subspace, x: &RationalVector) -> bool {
        a.contains(x)
    }

    fn complement(&self, a: &Subspace) -> Subspace {
        a.orth()
    }

    fn top(&self) -> Subspace {
        Subspace::full(self.n)
    }

    fn intersect(&self, a: &Subspace, b: &Subspace) -> Subspace {
        a.intersect(b)
    }

    fn union(&self, a: &Subspace, b: &Subspace) -> Subspace {
        a.sum(b)
    }

    fn is_subset(&self, a: &Subspace, b: &Subspace) -> bool {
        a.is_subspace_of(b)
    }

    fn empty(&self) -> Subspace {
        Subspace::zero(self.n)
    }

    fn generators(&self, a: &Subspace) -> Vec<RationalVector> {
        a.basis()
    }

    fn family_is_total(&self) -> bool {
        true
    }

    fn closure(&self, a: &Subspace) -> Subspace {
        a.orth().orth()
    }
}

/// The standard five-flat family on ℚ²: zero, both axes, the diagonal, and
/// the whole plane.
pub fn standard_q2_flats() -> Vec<Subspace> {
    let space = RationalSpace::new(2).expect("dimension 2");
    vec![
        Subspace::zero(2),
        space.span_ints(&[&[1, 0]]),
        space.span_ints(&[&[0, 1]]),
        space.span_ints(&[&[1, 1]]),
        Subspace::full(2),
    ]
}

fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("invalid numerator `{num}`"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("invalid denominator `{den}`"))?;
    if den.is_zero() {
        return Err("zero denominator".to_string());
    }
    Ok(Rational::new(num, den))
}

/// Parses a vector literal `(p/q, r, …)`.
pub fn parse_vector(text: &str) -> std::result::Result<RationalVector, ParseError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| ParseError::new(format!("expected `(…)` vector, found `{text}`")))?;
    if inner.is_empty() {
        return Err(ParseError::new("vector has no coordinates"));
    }
    inner
        .split(',')
        .map(parse_rational)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(RationalVector::new)
        .map_err(ParseError::new)
}

/// Parses `span[(…),(…)]` in ℚ^`dim`. Whitespace is ignored.
///
/// ```text
/// subspace := "span" "[" [ vector { "," vector } ] "]"
/// vector   := "(" rational { "," rational } ")"
/// rational := ["-"] digits [ "/" digits ]
/// ```
pub fn parse_subspace(text: &str, dim: usize) -> std::result::Result<Subspace, ParseError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix("span[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(format!("expected `span[…]`, found `{text}`")))?;
    let mut vectors = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let end = rest
            .find(')')
            .ok_or_else(|| ParseError::new("unterminated vector in span literal"))?;
        let v = parse_vector(&rest[..=end])?;
        if v.dim() != dim {
            return Err(ParseError::new(format!(
                "vector {v} has dimension {}, expected {dim}",
                v.dim()
            )));
        }
        vectors.push(v);
        rest = &rest[end + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(ParseError::new("trailing comma in span literal"));
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(ParseError::new(format!("unexpected `{rest}` in span literal")));
        }
    }
    Ok(Subspace::span(dim, &vectors).expect("dimensions checked"))
}
