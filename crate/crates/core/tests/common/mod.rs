//! Independent oracles shared by the integration tests. None of these go
//! through the library's tables, reductions or criteria.

#![allow(dead_code)]

use std::collections::HashSet;

use permpoly::{Field, FieldElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_element(field: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    field.from_repr(rng.gen_range(0..field.q()) as u32).unwrap()
}

pub fn random_nonzero(field: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    field.from_repr(rng.gen_range(1..field.q()) as u32).unwrap()
}

/// Schoolbook product of two coefficient vectors reduced by the field's
/// modulus, all in plain `u64` arithmetic mod `p`.
pub fn schoolbook_mul(field: &Field, x: FieldElement, y: FieldElement) -> FieldElement {
    let p = field.p();
    let m = field.m() as usize;
    let (a, b) = (field.coeffs(x), field.coeffs(y));
    let mut prod = vec![0u64; 2 * m];
    for i in 0..m {
        for j in 0..m {
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        }
    }
    let modulus = field.modulus();
    for top in (m..2 * m).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (k, &mk) in modulus.iter().enumerate() {
            let idx = top - m + k;
            prod[idx] = (prod[idx] + p * p - c * mk % p) % p;
        }
    }
    field.from_coeffs(&prod[..m]).unwrap()
}

/// Square-and-multiply on top of [`schoolbook_mul`].
pub fn schoolbook_pow(field: &Field, x: FieldElement, mut e: u64) -> FieldElement {
    let mut acc = field.one();
    let mut base = x;
    while e > 0 {
        if e & 1 == 1 {
            acc = schoolbook_mul(field, acc, base);
        }
        base = schoolbook_mul(field, base, base);
        e >>= 1;
    }
    acc
}

/// Injectivity on `F_q` by hashing every value.
pub fn permutes(field: &Field, f: impl Fn(FieldElement) -> FieldElement) -> bool {
    let values: HashSet<u32> = field.elements().map(|z| f(z).repr()).collect();
    values.len() as u64 == field.q()
}

/// Horner evaluation of a low-degree-first coefficient list.
pub fn horner(field: &Field, coeffs: &[FieldElement], z: FieldElement) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(field.zero(), |acc, &c| field.add(field.mul(acc, z), c))
}

/// `1 + y + ... + y^{k-1}` at a point.
pub fn geom_at(field: &Field, k: u64, y: FieldElement) -> FieldElement {
    let mut acc = field.zero();
    let mut pw = field.one();
    for _ in 0..k {
        acc = field.add(acc, pw);
        pw = field.mul(pw, y);
    }
    acc
}

/// Floating-point value of `Σ_{t=1}^{(d-1)/2} (2cos(π(2t-1)/d))^n`.
pub fn cosine_sum(d: u64, n: u32) -> f64 {
    (1..=(d - 1) / 2)
        .map(|t| {
            let angle = std::f64::consts::PI * (2 * t - 1) as f64 / d as f64;
            (2.0 * angle.cos()).powi(n as i32)
        })
        .sum()
}

/// Elements of the subfield of order `q0`, found as the roots of
/// `z^{q0} = z` by exhaustive evaluation.
pub fn subfield_elements(field: &Field, q0: u64) -> Vec<FieldElement> {
    field
        .elements()
        .filter(|&z| field.pow(z, q0) == z)
        .collect()
}

/// Orders of all subfields of `field`, ascending.
pub fn subfield_orders(field: &Field) -> Vec<u64> {
    (1..=field.m())
        .filter(|m0| field.m().is_multiple_of(*m0))
        .map(|m0| field.p().pow(m0))
        .collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn prime_powers_up_to(max: u64) -> Vec<u64> {
    (2..=max)
        .filter(|&q| {
            let p = (2..=q).find(|p| q % p == 0).unwrap();
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            r == 1
        })
        .collect()
}
