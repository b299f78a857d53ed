//! Prime and extension fields `F_{p^m}` with `p^m <= 2^20`.
//!
//! A field is described by an irreducible monic modulus over `F_p`. Elements
//! are coefficient vectors in the modulus root, packed little-endian into a
//! base-`p` integer (`c_0 + c_1 p + ... + c_{m-1} p^{m-1}`). The packed value
//! is also the enumeration order used for generator selection.
//!
//! Multiplication, inversion and powering go through exp/log tables built
//! from the dense arithmetic once the generator is known. The dense
//! polynomial routines stay available as `mul_reference`/`pow_reference`
//! and are what the tables are checked against.

use std::fmt;
use std::ops::Deref;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{factorize, is_prime, prime_power};
use crate::error::{Error, Result};

/// Hard cap on the field order.
pub const MAX_ORDER: u64 = 1 << 20;

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

/// An element of one particular field. Only meaningful together with the
/// [`FieldDesc`] that produced it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    field: u64,
    repr: u32,
}

impl FieldElement {
    /// Packed base-`p` coefficient value.
    pub fn repr(self) -> u32 {
        self.repr
    }

    pub fn field_id(self) -> u64 {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.repr == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}@{}", self.repr, self.field)
    }
}

/// Immutable description of `F_q`, `q = p^m`.
pub struct FieldDesc {
    id: u64,
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    factors: Vec<(u64, u32)>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Shared handle to a [`FieldDesc`]; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldDesc>);

impl Deref for Field {
    type Target = FieldDesc;

    fn deref(&self) -> &FieldDesc {
        &self.0
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `F_{p^m}`. Without a modulus, the lexicographically smallest
    /// monic irreducible of degree `m` is used, comparing coefficients
    /// low-degree first.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if m < 1 {
            return Err(Error::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(Error::CompositeCharacteristic(p));
        }
        let q = (p as u128).pow(m);
        if q > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u64;

        let modulus = match modulus {
            Some(given) => {
                if given.len() != m as usize + 1 || given[m as usize] % p != 1 {
                    return Err(Error::BadModulus { expected: m });
                }
                let reduced: Vec<u64> = given.iter().map(|c| c % p).collect();
                if !fp_poly::is_irreducible(&reduced, p) {
                    return Err(Error::ReducibleModulus(fp_poly::render(&reduced)));
                }
                reduced
            }
            None => smallest_irreducible(p, m),
        };

        let factors = factorize(q - 1);
        let mut desc = FieldDesc {
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
            p,
            m,
            q,
            modulus,
            factors,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        desc.generator = desc.find_generator();
        desc.build_tables();
        Ok(Field(Arc::new(desc)))
    }

    /// Builds the field of order `q` with the default modulus.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q).ok_or(Error::InvalidParameters(format!(
            "{q} is not a prime power"
        )))?;
        Field::new(p, m, None)
    }

    /// Parses a field specification `"p^m"` (or a bare prime `"p"`) and an
    /// optional modulus written in the polynomial grammar.
    pub fn parse(spec: &str, modulus: Option<&str>) -> Result<Field> {
        let (p, m) = parse_field_spec(spec)?;
        match modulus {
            None => Field::new(p, m, None),
            Some(text) => {
                let coeffs = crate::poly::parse_integer_coeffs(text)?;
                Field::new(p, m, Some(&coeffs))
            }
        }
    }
}

/// Parses `"p^m"` or `"p"`.
pub fn parse_field_spec(spec: &str) -> Result<(u64, u32)> {
    let spec: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad field specification {spec:?}"));
    let (p, m) = match spec.split_once('^') {
        Some((p, m)) => (p, m),
        None => (spec.as_str(), "1"),
    };
    let p = p.parse::<u64>().map_err(|_| bad())?;
    let m = m.parse::<u32>().map_err(|_| bad())?;
    Ok((p, m))
}

fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    let count = p.pow(m as u32);
    for index in 0..count {
        // c_0 is the most significant digit of the enumeration index.
        let mut coeffs = vec![0u64; m + 1];
        let mut rest = index;
        for i in (0..m).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[m] = 1;
        if fp_poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldDesc {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Prime factorization of `q - 1`.
    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn generator(&self) -> FieldElement {
        self.elem(self.generator)
    }

    fn elem(&self, repr: u32) -> FieldElement {
        FieldElement {
            field: self.id,
            repr,
        }
    }

    #[inline]
    fn check(&self, x: FieldElement) {
        assert_eq!(x.field, self.id, "element belongs to a different field");
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.field == self.id
    }

    /// Returns `x` unchanged if it belongs to this field.
    pub fn ensure(&self, x: FieldElement) -> Result<FieldElement> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Element with the given coefficients in the modulus root.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameters(format!(
                "coefficient vector {coeffs:?} is not an element of F_{}",
                self.q
            )));
        }
        Ok(self.elem(self.pack(coeffs)))
    }

    /// Element with the given packed value.
    pub fn from_repr(&self, repr: u32) -> Result<FieldElement> {
        if repr as u64 >= self.q {
            return Err(Error::InvalidParameters(format!(
                "{repr} is not a packed element of F_{}",
                self.q
            )));
        }
        Ok(self.elem(repr))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        self.check(x);
        self.unpack(x.repr)
    }

    /// All `q` elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q as u32).map(move |r| self.elem(r))
    }

    pub fn is_in_prime_field(&self, x: FieldElement) -> bool {
        self.check(x);
        (x.repr as u64) < self.p
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        self.elem(self.add_repr(x.repr, y.repr))
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.check(x);
        if self.p == 2 {
            return x;
        }
        let mut digits = self.unpack(x.repr);
        for c in digits.iter_mut() {
            *c = (self.p - *c) % self.p;
        }
        self.elem(self.pack(&digits))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        if x.repr == 0 || y.repr == 0 {
            return self.zero();
        }
        let n = self.q - 1;
        let l = (self.log[x.repr as usize] as u64 + self.log[y.repr as usize] as u64) % n;
        self.elem(self.exp[l as usize])
    }

    pub fn try_add(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.add(self.ensure(x)?, self.ensure(y)?))
    }

    pub fn try_mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(self.ensure(x)?, self.ensure(y)?))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        self.ensure(x)?;
        if x.repr == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.q - 1;
        let l = (n - self.log[x.repr as usize] as u64) % n;
        Ok(self.elem(self.exp[l as usize]))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e`; exponents of nonzero bases are reduced mod `q - 1`.
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        self.check(x);
        if x.repr == 0 {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let n = self.q - 1;
        let l = (self.log[x.repr as usize] as u128 * (e % n) as u128) % n as u128;
        self.elem(self.exp[l as usize])
    }

    /// `x^e` for a signed exponent; `0^e` with `e < 0` is an error.
    pub fn pow_signed(&self, x: FieldElement, e: i64) -> Result<FieldElement> {
        self.ensure(x)?;
        if e >= 0 {
            return Ok(self.pow(x, e as u64));
        }
        if x.repr == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = (self.q - 1) as i64;
        Ok(self.pow(x, e.rem_euclid(n) as u64))
    }

    /// Discrete logarithm to the base of the stored generator.
    pub fn log(&self, x: FieldElement) -> Option<u64> {
        self.check(x);
        if x.repr == 0 {
            None
        } else {
            Some(self.log[x.repr as usize] as u64)
        }
    }

    /// Dense polynomial product reduced by the modulus, without tables.
    pub fn mul_reference(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        self.elem(self.mul_dense(x.repr, y.repr))
    }

    /// Square-and-multiply over [`FieldDesc::mul_reference`], exponent
    /// reduced mod `q - 1` for nonzero bases.
    pub fn pow_reference(&self, x: FieldElement, e: u64) -> FieldElement {
        self.check(x);
        let e = if x.repr == 0 { e } else { e % (self.q - 1) };
        self.elem(self.pow_dense(x.repr, e))
    }

    /// The group `μ_d` of `d`-th roots of unity, as `g^{k(q-1)/d}` for
    /// `k = 0..d`.
    pub fn mu(&self, d: u64) -> Result<Vec<FieldElement>> {
        let step = self.mu_step(d)?;
        Ok((0..d)
            .map(|k| self.elem(self.exp[(k * step) as usize]))
            .collect())
    }

    /// The generator `g^{(q-1)/d}` of `μ_d`.
    pub fn mu_generator(&self, d: u64) -> Result<FieldElement> {
        let step = self.mu_step(d)?;
        Ok(self.elem(self.exp[step as usize % (self.q as usize - 1)]))
    }

    fn mu_step(&self, d: u64) -> Result<u64> {
        let n = self.q - 1;
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::NotDivisor { d, n });
        }
        Ok(n / d)
    }

    /// The subfield of order `q0`.
    pub fn subfield(&self, q0: u64) -> Result<SubfieldHandle> {
        let m0 = match prime_power(q0) {
            Some((p0, m0)) if p0 == self.p && self.m.is_multiple_of(m0) => m0,
            _ => return Err(Error::BadSubfield(q0)),
        };
        let step = (self.q - 1) / (q0 - 1);
        let beta = self.pow(self.generator(), step);
        let handle = SubfieldHandle {
            q0,
            m0,
            beta,
            field: self.id,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(q0 ^ (self.q << 20));
        for _ in 0..64 {
            let x = self.pow(beta, rng.gen_range(0..q0 - 1));
            let y = self.pow(beta, rng.gen_range(0..q0 - 1));
            assert!(
                handle.contains(self, self.add(x, y)),
                "subfield of order {q0} not closed under addition"
            );
        }
        Ok(handle)
    }

    /// Renders an element: prime-field elements as integers, others as
    /// `B<k>` with `k` the logarithm to the stored generator.
    pub fn display(&self, x: FieldElement) -> String {
        self.check(x);
        if (x.repr as u64) < self.p {
            x.repr.to_string()
        } else {
            format!("B{}", self.log[x.repr as usize])
        }
    }

    fn unpack(&self, mut repr: u32) -> Vec<u64> {
        let mut out = vec![0u64; self.m as usize];
        for c in out.iter_mut() {
            *c = repr as u64 % self.p;
            repr = (repr as u64 / self.p) as u32;
        }
        out
    }

    fn pack(&self, coeffs: &[u64]) -> u32 {
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c) as u32
    }

    fn add_repr(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out as u32
    }

    fn mul_dense(&self, a: u32, b: u32) -> u32 {
        let prod = fp_poly::mul(&self.unpack(a), &self.unpack(b), self.p);
        let mut reduced = fp_poly::rem(&prod, &self.modulus, self.p);
        reduced.resize(self.m as usize, 0);
        self.pack(&reduced)
    }

    fn pow_dense(&self, base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_dense(acc, b);
            }
            b = self.mul_dense(b, b);
            e >>= 1;
        }
        acc
    }

    fn is_primitive_dense(&self, repr: u32) -> bool {
        if repr == 0 {
            return false;
        }
        let n = self.q - 1;
        self.pow_dense(repr, n) == 1
            && self
                .factors
                .iter()
                .all(|&(l, _)| self.pow_dense(repr, n / l) != 1)
    }

    // Candidates 1, 2, ..., p-1 first, then the rest in packed order.
    fn find_generator(&self) -> u32 {
        (1..self.q as u32)
            .find(|&r| self.is_primitive_dense(r))
            .expect("the multiplicative group is cyclic")
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![0u32; self.q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp.push(cur);
            log[cur as usize] = i as u32;
            cur = self.mul_dense(cur, self.generator);
        }
        debug_assert_eq!(cur, 1);
        self.exp = exp;
        self.log = log;
    }
}

/// The subfield `F_{q0}` of a field, generated multiplicatively by
/// `beta = g^{(q-1)/(q0-1)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubfieldHandle {
    q0: u64,
    m0: u32,
    beta: FieldElement,
    field: u64,
}

impl SubfieldHandle {
    pub fn q0(&self) -> u64 {
        self.q0
    }

    /// Degree of the subfield over the prime field.
    pub fn degree(&self) -> u32 {
        self.m0
    }

    pub fn beta(&self) -> FieldElement {
        self.beta
    }

    /// `[F_q : F_{q0}]`, i.e. the `m` in `q = q0^m`.
    pub fn relative_degree(&self, field: &FieldDesc) -> u32 {
        field.m() / self.m0
    }

    /// Membership via `z^{q0} = z`.
    pub fn contains(&self, field: &FieldDesc, z: FieldElement) -> bool {
        assert_eq!(self.field, field.id(), "subfield of a different field");
        field.pow(z, self.q0) == z
    }

    /// `{0} ∪ {beta^i}`.
    pub fn elements(&self, field: &FieldDesc) -> Vec<FieldElement> {
        let mut out = vec![field.zero()];
        out.extend((0..self.q0 - 1).map(|i| field.pow(self.beta, i)));
        out
    }
}

/// Polynomials over `F_p` as coefficient vectors, low degree first. Used
/// for modulus selection and the dense reference arithmetic.
mod fp_poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let (mut acc, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let f = trim(f.to_vec());
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p);
        let mut r = trim(a.to_vec());
        while r.len() > df {
            let shift = r.len() - 1 - df;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &fi) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * fi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), f, p);
            }
            b = rem(&mul(&b, &b, p), f, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or: `f` of degree `m` is irreducible iff
    /// `gcd(x^{p^i} - x, f) = 1` for `1 <= i <= m/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        let m = f.len().saturating_sub(1);
        if m == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut frob = rem(&x, &f, p);
        for _ in 1..=m / 2 {
            frob = pow_mod(&frob, p, &f, p);
            let g = gcd(&sub(&frob, &x, p), &f, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    pub fn render(f: &[u64]) -> String {
        let mut terms = Vec::new();
        for (i, &c) in f.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, _) => format!("{c}*x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{c}*x^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

}
