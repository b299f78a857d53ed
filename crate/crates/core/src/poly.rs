//! Dense univariate polynomials over a field, integer polynomials, and the
//! textual polynomial grammar.
//!
//! Grammar: a `+`-separated list of terms, each `[c*]x[^e]` or `c`, where `c`
//! is a non-negative integer (reduced mod `p`) or `B<k>` (the `k`-th power of
//! the declared coefficient subfield's generator, or of the field generator
//! when no subfield is declared). Whitespace is ignored.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SubfieldHandle};

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(n) => Some(n),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Coefficient token of the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffToken {
    Int(u64),
    Beta(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: CoeffToken,
    pub exponent: usize,
}

/// Tokenizes a polynomial string into its terms, in order of appearance.
pub fn parse_terms(text: &str) -> Result<Vec<Term>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    compact.split('+').map(parse_term).collect()
}

fn parse_term(term: &str) -> Result<Term> {
    let bad = || Error::Parse(format!("bad term {term:?}"));
    if term.is_empty() {
        return Err(bad());
    }
    let (coeff_text, monomial) = match term.split_once('*') {
        Some((c, x)) => (Some(c), Some(x)),
        None if term.starts_with('x') => (None, Some(term)),
        None => (Some(term), None),
    };
    let coeff = match coeff_text {
        None => CoeffToken::Int(1),
        Some(c) => parse_coeff(c).ok_or_else(bad)?,
    };
    let exponent = match monomial {
        None => 0,
        Some("x") => 1,
        Some(x) => {
            let e = x.strip_prefix("x^").ok_or_else(bad)?;
            parse_digits(e).ok_or_else(bad)? as usize
        }
    };
    Ok(Term { coeff, exponent })
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_coeff(c: &str) -> Option<CoeffToken> {
    match c.strip_prefix('B') {
        Some(k) => parse_digits(k).map(CoeffToken::Beta),
        None => parse_digits(c).map(CoeffToken::Int),
    }
}

/// Parses a polynomial with plain integer coefficients into a dense vector
/// (low degree first). `B<k>` coefficients are rejected.
pub fn parse_integer_coeffs(text: &str) -> Result<Vec<u64>> {
    let terms = parse_terms(text)?;
    let top = terms.iter().map(|t| t.exponent).max().unwrap_or(0);
    let mut out = vec![0u64; top + 1];
    for t in terms {
        match t.coeff {
            CoeffToken::Int(c) => out[t.exponent] += c,
            CoeffToken::Beta(_) => {
                return Err(Error::Parse(
                    "B<k> coefficients need a field context".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// Dense polynomial over a [`Field`], low degree first, no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self} over F_{})", self.field.q())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let c_text = self.field.display(c);
            match (i, c_text.as_str()) {
                (0, _) => write!(f, "{c_text}")?,
                (1, "1") => write!(f, "x")?,
                (1, _) => write!(f, "{c_text}*x")?,
                (_, "1") => write!(f, "x^{i}")?,
                _ => write!(f, "{c_text}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &Field, c: FieldElement) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    /// `c * x^e`.
    pub fn monomial(field: &Field, c: FieldElement, e: usize) -> Poly {
        let mut coeffs = vec![field.zero(); e + 1];
        coeffs[e] = c;
        Poly::from_coeffs(field, coeffs)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, field.one(), 1)
    }

    /// Panics if a coefficient belongs to another field.
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<FieldElement>) -> Poly {
        for &c in &coeffs {
            assert!(field.contains(c), "coefficient from a different field");
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Integer coefficients mapped into the prime field.
    pub fn from_ints(field: &Field, ints: &[i64]) -> Poly {
        Poly::from_coeffs(field, ints.iter().map(|&c| field.from_int(c)).collect())
    }

    /// Sum of `c * x^e` over the given terms.
    pub fn from_terms(field: &Field, terms: &[(usize, FieldElement)]) -> Poly {
        let top = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![field.zero(); top + 1];
        for &(e, c) in terms {
            coeffs[e] = field.add(coeffs[e], c);
        }
        Poly::from_coeffs(field, coeffs)
    }

    /// Parses the polynomial grammar. `B<k>` is `beta^k` of `coeff_field`,
    /// or of the field generator when `coeff_field` is `None`.
    pub fn parse(field: &Field, text: &str, coeff_field: Option<&SubfieldHandle>) -> Result<Poly> {
        let beta = coeff_field.map_or_else(|| field.generator(), |s| s.beta());
        let terms: Vec<(usize, FieldElement)> = parse_terms(text)?
            .into_iter()
            .map(|t| {
                let c = match t.coeff {
                    CoeffToken::Int(n) => field.from_int((n % field.p()) as i64),
                    CoeffToken::Beta(k) => field.pow(beta, k),
                };
                (t.exponent, c)
            })
            .collect();
        Ok(Poly::from_terms(field, &terms))
    }

    /// `h_k(x) = x^{k-1} + ... + x + 1`.
    pub fn geom(k: usize, field: &Field) -> Result<Poly> {
        if k == 0 {
            return Err(Error::InvalidParameters("h_k needs k >= 1".into()));
        }
        Ok(Poly::from_coeffs(field, vec![field.one(); k]))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> Vec<(usize, FieldElement)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
            .collect()
    }

    fn same_field(&self, other: &Poly) {
        assert!(
            self.field == other.field,
            "polynomials over different fields"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.field.add(self.coeff(i), other.coeff(i)))
            .collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Poly::from_coeffs(f, out)
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Same as [`Poly::pow`] but reducing mod `x^q - x` after every product.
    pub fn pow_as_function(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.reduce_mod_xq_minus_x();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).reduce_mod_xq_minus_x();
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).reduce_mod_xq_minus_x();
            }
        }
        acc
    }

    /// `x^r * self`.
    pub fn shift(&self, r: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); r];
        coeffs.extend_from_slice(&self.coeffs);
        Poly::from_coeffs(&self.field, coeffs)
    }

    /// `self(inner)` by Horner's rule.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.same_field(inner);
        let mut acc = Poly::zero(&self.field);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(&self.field, c));
        }
        acc
    }

    /// `self(x^v)`: coefficient `i` moves to position `i * v`.
    pub fn compose_power(&self, v: usize) -> Result<Poly> {
        if v == 0 {
            return Err(Error::InvalidParameters(
                "inner exponent must be at least 1".into(),
            ));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut coeffs = vec![self.field.zero(); (self.coeffs.len() - 1) * v + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * v] = c;
        }
        Ok(Poly::from_coeffs(&self.field, coeffs))
    }

    /// Remainder modulo `x^d - 1`.
    pub fn reduce_mod_cyclo(&self, d: usize) -> Result<Poly> {
        if d == 0 {
            return Err(Error::InvalidParameters("d must be at least 1".into()));
        }
        let f = &self.field;
        let mut coeffs = vec![f.zero(); d.min(self.coeffs.len())];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i % d] = f.add(coeffs[i % d], c);
        }
        Ok(Poly::from_coeffs(f, coeffs))
    }

    /// Remainder modulo `x^q - x`: the unique polynomial of degree `< q`
    /// inducing the same map on `F_q`.
    pub fn reduce_mod_xq_minus_x(&self) -> Poly {
        let q = self.field.q() as usize;
        if self.coeffs.len() <= q {
            return self.clone();
        }
        let f = &self.field;
        let mut coeffs = vec![f.zero(); q];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = if i == 0 { 0 } else { (i - 1) % (q - 1) + 1 };
            coeffs[j] = f.add(coeffs[j], c);
        }
        Poly::from_coeffs(f, coeffs)
    }

    /// Horner evaluation. Panics if `z` belongs to another field.
    pub fn eval(&self, z: FieldElement) -> FieldElement {
        let f = &self.field;
        assert!(f.contains(z), "evaluation point from a different field");
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, z), c))
    }

    pub fn try_eval(&self, z: FieldElement) -> Result<FieldElement> {
        self.field.ensure(z)?;
        Ok(self.eval(z))
    }

    /// Term-by-term evaluation; equal to [`Poly::eval`], faster for sparse
    /// polynomials of large degree.
    pub fn eval_sparse(&self, terms: &[(usize, FieldElement)], z: FieldElement) -> FieldElement {
        let f = &self.field;
        terms.iter().fold(f.zero(), |acc, &(e, c)| {
            f.add(acc, f.mul(c, f.pow(z, e as u64)))
        })
    }

    /// A root of `self` in `μ_d`, if one exists.
    pub fn has_root_in_mu(&self, d: u64) -> Result<Option<FieldElement>> {
        Ok(self
            .field
            .mu(d)?
            .into_iter()
            .find(|&z| self.eval(z).is_zero()))
    }

    /// Whether every coefficient lies in the given subfield; returns the
    /// first offending coefficient otherwise.
    pub fn check_coefficients_in(&self, sub: &SubfieldHandle) -> Result<()> {
        match self.coeffs.iter().find(|&&c| !sub.contains(&self.field, c)) {
            None => Ok(()),
            Some(&c) => Err(Error::CoefficientOutsideSubfield(self.field.display(c))),
        }
    }
}

/// Polynomial with integer coefficients, low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn parse(text: &str) -> Result<IntPoly> {
        let dense = parse_integer_coeffs(text)?;
        Ok(IntPoly::new(dense.into_iter().map(BigInt::from).collect()))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Reduction of the coefficients into the prime field of `field`.
    pub fn to_field(&self, field: &Field) -> Poly {
        let p = BigInt::from(field.p());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r: BigInt = ((c % &p) + &p) % &p;
                let r: i64 = r.try_into().expect("residue fits in i64");
                field.from_int(r)
            })
            .collect();
        Poly::from_coeffs(field, coeffs)
    }

    pub fn monic_linear(root: BigInt) -> IntPoly {
        IntPoly::new(vec![-root, BigInt::one()])
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}
