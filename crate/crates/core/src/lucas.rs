//! The sequence `a_n = Σ_{t=1}^{(d-1)/2} (2cos(π(2t-1)/d))^n` for odd `d`,
//! exactly over the integers and in `F_q`, and the binomial criterion stated
//! in terms of its period mod `p`.
//!
//! Exact values come from the power sum over the `d`-th roots of `-1`:
//!
//! ```text
//! 2 a_n = Σ_{η^d = -1, η ≠ -1} (η + 1/η)^n
//!       = (-1)^n d Σ_{0 <= k <= n, d | n-2k} C(n, k) - (-2)^n
//! ```
//!
//! using `Σ_{η^d=-1} η^j = (-1)^j d [d | j]`. No floating point is involved.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::gcd;
use crate::criteria::{Criterion, CriterionResult, Witness};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::poly::IntPoly;

/// Odd `d >= 3`, optionally with a field `F_q` (`q` odd, `2d | q - 1`) for
/// computations mod `p`.
#[derive(Clone, Debug)]
pub struct LucasParams {
    d: u64,
    field: Option<Field>,
}

impl LucasParams {
    pub fn new(d: u64) -> Result<LucasParams> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidParameters(format!(
                "d must be odd and at least 3, got {d}"
            )));
        }
        Ok(LucasParams { d, field: None })
    }

    pub fn with_field(d: u64, field: &Field) -> Result<LucasParams> {
        let mut params = LucasParams::new(d)?;
        let n = field.q() - 1;
        if field.p() == 2 || !n.is_multiple_of(2 * d) {
            return Err(Error::NotDivisor { d: 2 * d, n });
        }
        params.field = Some(field.clone());
        Ok(params)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn field(&self) -> Option<&Field> {
        self.field.as_ref()
    }
}

/// `2 a_n`, before halving.
pub fn lucas_twice(params: &LucasParams, n: u64) -> BigInt {
    let d = params.d as i64;
    let mut lacunary = BigUint::zero();
    let mut binom = BigUint::one();
    for k in 0..=n {
        if (n as i64 - 2 * k as i64).rem_euclid(d) == 0 {
            lacunary += &binom;
        }
        binom = binom * (n - k) / (k + 1);
    }
    let sign = if n.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let minus_two_pow = BigInt::from(-2).pow(n as u32);
    sign * BigInt::from(d) * BigInt::from(lacunary) - minus_two_pow
}

/// Exact `a_n`.
pub fn lucas_exact(params: &LucasParams, n: u64) -> BigInt {
    let twice = lucas_twice(params, n);
    let (half, rem) = twice.div_rem(&BigInt::from(2));
    assert!(rem.is_zero(), "2 a_n is odd for d = {}, n = {n}", params.d);
    half
}

/// The values `η + 1/η` for `η^d = -1`, `η ≠ -1`, each listed once per `η`.
fn half_sums(field: &Field, d: u64) -> Result<Vec<FieldElement>> {
    let zeta = field.mu_generator(2 * d)?;
    Ok((1..2 * d)
        .step_by(2)
        .filter(|&j| j != d)
        .map(|j| {
            let eta = field.pow(zeta, j);
            field.add(eta, field.inv(eta).expect("root of unity"))
        })
        .collect())
}

fn half_power_sum(field: &Field, betas: &[FieldElement], n: u64) -> FieldElement {
    let sum = betas
        .iter()
        .fold(field.zero(), |acc, &b| field.add(acc, field.pow(b, n)));
    field.div(sum, field.from_int(2)).expect("q is odd")
}

/// `a_n` computed in `F_q` as `(1/2) Σ (η + 1/η)^n` over `η^d = -1`,
/// `η ≠ -1`. Lies in the prime field and equals `a_n mod p`.
pub fn lucas_mod_p(params: &LucasParams, n: u64) -> Result<FieldElement> {
    let field = params.field.as_ref().ok_or_else(|| {
        Error::InvalidParameters("no field attached to the sequence parameters".into())
    })?;
    let betas = half_sums(field, params.d)?;
    Ok(half_power_sum(field, &betas, n))
}

/// Characteristic polynomial `Π_t (x - 2cos(π(2t-1)/d))` with integer
/// coefficients, from the power sums `a_1..a_D` by Newton's identities.
pub fn characteristic_polynomial(params: &LucasParams) -> IntPoly {
    let order = ((params.d - 1) / 2) as usize;
    let power_sums: Vec<BigInt> = (1..=order as u64).map(|n| lucas_exact(params, n)).collect();
    // k e_k = Σ_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i
    let mut elem = vec![BigInt::one()];
    for k in 1..=order {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &elem[k - i] * &power_sums[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k));
        assert!(
            rem.is_zero(),
            "elementary symmetric function is not integral"
        );
        elem.push(quot);
    }
    // coefficient of x^{D-k} is (-1)^k e_k
    let mut coeffs = vec![BigInt::zero(); order + 1];
    for (k, e) in elem.into_iter().enumerate() {
        coeffs[order - k] = if k % 2 == 0 { e } else { -e };
    }
    IntPoly::new(coeffs)
}

/// `a_0..a_{count-1}` by the linear recurrence with the characteristic
/// polynomial above, seeded with the exact `a_0..a_{D-1}`.
pub fn lucas_by_recurrence(params: &LucasParams, count: usize) -> Vec<BigInt> {
    let charpoly = characteristic_polynomial(params);
    let order = charpoly.coeffs().len() - 1;
    let mut seq: Vec<BigInt> = (0..order.min(count) as u64)
        .map(|n| lucas_exact(params, n))
        .collect();
    // x^D = -Σ_{j<D} c_j x^j
    while seq.len() < count {
        let n = seq.len();
        let mut next = BigInt::zero();
        for (j, c) in charpoly.coeffs()[..order].iter().enumerate() {
            next -= c * &seq[n - order + j];
        }
        seq.push(next);
    }
    seq
}

/// `(q, s, d, r, e)` with `sd = q - 1`, `gcd(r, s) = gcd(e, d) = 1`, `d`
/// odd and `r, e, s > 0`; the binomial is `x^r (1 + x^{es})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AWParams {
    pub q: u64,
    pub s: u64,
    pub d: u64,
    pub r: u64,
    pub e: u64,
}

impl AWParams {
    pub fn new(q: u64, s: u64, d: u64, r: u64, e: u64) -> Result<AWParams> {
        let bad = |why: String| Err(Error::InvalidParameters(why));
        if r == 0 || e == 0 || s == 0 {
            return bad("r, e and s must be positive".into());
        }
        if s.checked_mul(d) != Some(q.wrapping_sub(1)) || q < 2 {
            return bad(format!("s*d = {s}*{d} differs from q-1"));
        }
        if d.is_multiple_of(2) {
            return bad(format!("d = {d} is even"));
        }
        if gcd(r, s) != 1 || gcd(e, d) != 1 {
            return bad(format!(
                "gcd(r,s) = {}, gcd(e,d) = {}",
                gcd(r, s),
                gcd(e, d)
            ));
        }
        Ok(AWParams { q, s, d, r, e })
    }

    /// Normal form parameters of `x^r + x^u` over `F_q`, if it has one.
    pub fn from_binomial(q: u64, u: u64, r: u64) -> Result<AWParams> {
        if u <= r {
            return Err(Error::InvalidParameters("need u > r".into()));
        }
        let s = gcd(u - r, q - 1);
        AWParams::new(q, s, (q - 1) / s, r, (u - r) / s)
    }

    /// `u = r + es`.
    pub fn u(&self) -> u64 {
        self.r + self.e * self.s
    }

    /// Default periodicity window `[0, (d-1)/2)`.
    pub fn window(&self) -> u64 {
        (self.d - 1) / 2
    }
}

/// Sufficient condition for `x^r(1 + x^{es})` to permute `F_q`:
/// `gcd(2r+es, d) = 1`, `2^s ≡ 1 (mod p)` and `a_n ≡ a_{n+s} (mod p)` for
/// all `n`. Periodicity is checked on `n ∈ [0, (d-1)/2)`, which suffices
/// because the `(d-1)/2` values `η + 1/η` are distinct.
pub fn aw_criterion(field: &Field, params: &AWParams) -> Result<CriterionResult> {
    aw_criterion_with_window(field, params, params.window())
}

/// [`aw_criterion`] with the periodicity checked on `n ∈ [0, window)`.
pub fn aw_criterion_with_window(
    field: &Field,
    params: &AWParams,
    window: u64,
) -> Result<CriterionResult> {
    if field.q() != params.q {
        return Err(Error::InvalidParameters(format!(
            "parameters are for q = {}, field has q = {}",
            params.q,
            field.q()
        )));
    }
    let AWParams { s, d, r, e, .. } = *params;
    let p = field.p();
    let mut result = CriterionResult::new(Criterion::Aw, params.q)
        .with_param("s", s)
        .with_param("d", d)
        .with_param("r", r)
        .with_param("e", e)
        .with_param("u", params.u())
        .with_param("window", window);
    result.sufficient_only = true;

    if gcd(2 * r + e * s, d) != 1 {
        return Ok(result.hypothesis_failed(Witness::gcd("gcd(2r+es,d)", 2 * r + e * s, d)));
    }
    if pow_mod(2, s, p) != 1 % p {
        return Ok(result.hypothesis_failed(Witness::condition(format!("2^{s} is not 1 mod {p}"))));
    }
    if d > 1 {
        let betas = half_sums(field, d)?;
        for n in 0..window {
            let a_n = half_power_sum(field, &betas, n);
            let a_ns = half_power_sum(field, &betas, n + s);
            if a_n != a_ns {
                return Ok(result.hypothesis_failed(Witness::condition(format!(
                    "a_{n} differs from a_{} mod {p}",
                    n + s
                ))));
            }
        }
    }
    Ok(result.decided(true, None))
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Whether `(η + 1/η)^s = 1` for every `η ∈ μ_{2d}`, i.e. the binomial
/// criterion's hypothesis with `a = 1`. Requires the sequence criterion's
/// hypothesis to hold.
pub fn aw_implies_bin(field: &Field, params: &AWParams) -> Result<bool> {
    if !aw_criterion(field, params)?.hypothesis_ok {
        return Err(Error::InvalidParameters(
            "the periodicity hypothesis does not hold".into(),
        ));
    }
    Ok(field.mu(2 * params.d)?.into_iter().all(|eta| {
        let w = field.add(eta, field.inv(eta).expect("root of unity"));
        !w.is_zero() && field.pow(w, params.s) == field.one()
    }))
}
