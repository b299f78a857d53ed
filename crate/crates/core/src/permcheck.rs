//! Ground-truth permutation testing, and the reduction of the `F_q` test for
//! `x^r h(x^s)` to a bijectivity test on `μ_d`, `sd = q - 1`.

use crate::arith::gcd;
use crate::criteria::{Criterion, CriterionResult, Witness};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::poly::Poly;

/// `f(x) = x^r h(x^s)` with `s d = q - 1`.
#[derive(Clone, Debug)]
pub struct CyclotomicForm {
    r: u64,
    d: u64,
    s: u64,
    h: Poly,
}

impl CyclotomicForm {
    pub fn new(r: u64, d: u64, h: Poly) -> Result<CyclotomicForm> {
        let n = h.field().q() - 1;
        if r == 0 {
            return Err(Error::InvalidParameters("r must be positive".into()));
        }
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::NotDivisor { d, n });
        }
        Ok(CyclotomicForm { r, d, s: n / d, h })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn field(&self) -> &Field {
        self.h.field()
    }

    /// `x^r h(x^s)`, reduced mod `x^q - x`.
    pub fn to_poly(&self) -> Poly {
        substitute(&self.h, self.r, self.s)
    }
}

/// `x^r h(x^v)` reduced mod `x^q - x`, built by placing each coefficient of
/// `h` directly at its reduced exponent.
pub fn substitute(h: &Poly, r: u64, v: u64) -> Poly {
    let field = h.field();
    let n = field.q() - 1;
    let reduce = |e: u64| {
        if e == 0 {
            0
        } else {
            ((e - 1) % n + 1) as usize
        }
    };
    let terms: Vec<(usize, FieldElement)> = h
        .terms()
        .into_iter()
        .map(|(i, c)| (reduce(r + i as u64 * v), c))
        .collect();
    Poly::from_terms(field, &terms)
}

struct Occupancy(Vec<u64>);

impl Occupancy {
    fn new(n: usize) -> Self {
        Occupancy(vec![0; n.div_ceil(64)])
    }

    /// Marks `i`; returns false if it was already marked.
    fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }
}

/// Whether `map` is injective on `F_q`, stopping at the first collision.
pub fn is_permutation_by(field: &Field, map: impl Fn(FieldElement) -> FieldElement) -> bool {
    let mut seen = Occupancy::new(field.q() as usize);
    field
        .elements()
        .all(|z| seen.insert(map(z).repr() as usize))
}

/// Evaluates `f` at every element of its field.
pub fn is_permutation_bruteforce(f: &Poly) -> bool {
    let field = f.field();
    let terms = f.terms();
    if terms.len() * 24 < f.coeffs().len() {
        is_permutation_by(field, |z| f.eval_sparse(&terms, z))
    } else {
        is_permutation_by(field, |z| f.eval(z))
    }
}

/// Whether `ζ ↦ ζ^r H(ζ)^s` permutes `μ_d`, with `H` given pointwise.
pub fn permutes_subgroup_by(
    field: &Field,
    r: u64,
    s: u64,
    d: u64,
    h_at: impl Fn(FieldElement) -> FieldElement,
) -> Result<bool> {
    let n = field.q() - 1;
    if s.checked_mul(d) != Some(n) {
        return Err(Error::InvalidParameters(format!(
            "s*d = {s}*{d} differs from q-1 = {n}"
        )));
    }
    let mut seen = Occupancy::new(d as usize);
    for zeta in field.mu(d)? {
        let hv = h_at(zeta);
        if hv.is_zero() {
            return Ok(false);
        }
        let value = field.mul(field.pow(zeta, r), field.pow(hv, s));
        let l = field.log(value).expect("nonzero");
        if !l.is_multiple_of(s) || !seen.insert((l / s) as usize) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `x^r h(x)^s` permutes `μ_d`.
pub fn permutes_subgroup(r: u64, h: &Poly, s: u64, d: u64, field: &Field) -> Result<bool> {
    field.ensure(h.coeff(0))?;
    permutes_subgroup_by(field, r, s, d, |z| h.eval(z))
}

/// `gcd(r, s) = 1` and `x^r h(x)^s` permutes `μ_d`: exactly when
/// `x^r h(x^s)` permutes `F_q`.
pub fn lwl_criterion(form: &CyclotomicForm) -> bool {
    gcd(form.r, form.s) == 1
        && permutes_subgroup_by(form.field(), form.r, form.s, form.d, |z| form.h.eval(z))
            .expect("form invariants hold")
}

fn form_params(result: CriterionResult, form: &CyclotomicForm) -> CriterionResult {
    result
        .with_param("r", form.r)
        .with_param("d", form.d)
        .with_param("s", form.s)
        .with_param("h", form.h.to_string())
}

/// [`lwl_criterion`] as a result record. The criterion has no hypothesis.
pub fn lwl_result(form: &CyclotomicForm) -> CriterionResult {
    let result = form_params(CriterionResult::new(Criterion::Lwl, form.field().q()), form);
    let g = gcd(form.r, form.s);
    if g != 1 {
        return result.decided(false, Some(Witness::gcd("gcd(r,s)", form.r, form.s)));
    }
    let ok = lwl_criterion(form);
    result.decided(ok, None)
}

/// Looks for `n` with `h(ζ)^s = ζ^n` on all of `μ_d`; when found, the
/// verdict is `gcd(r+n, d) = gcd(r, s) = 1`.
pub fn apply_criterion(form: &CyclotomicForm) -> CriterionResult {
    let field = form.field();
    let (r, d, s) = (form.r, form.d, form.s);
    let result = form_params(CriterionResult::new(Criterion::Apply, field.q()), form);

    // Discrete log of h(ζ0)^s at the generator ζ0 of μ_d, then verify.
    let zeta0 = field.mu_generator(d).expect("d divides q-1");
    let w = field.pow(form.h.eval(zeta0), s);
    let n = match field.log(w) {
        Some(l) if l % s == 0 => match (l / s) % d {
            0 => d,
            n => n,
        },
        _ => {
            return result.hypothesis_failed(Witness::element("zeta", field.display(zeta0)));
        }
    };
    for zeta in field.mu(d).expect("d divides q-1") {
        if field.pow(form.h.eval(zeta), s) != field.pow(zeta, n) {
            return result
                .with_param("n", n)
                .hypothesis_failed(Witness::element("zeta", field.display(zeta)));
        }
    }
    let result = result.with_param("n", n);
    if gcd(r + n, d) != 1 {
        return result.decided(false, Some(Witness::gcd("gcd(r+n,d)", r + n, d)));
    }
    if gcd(r, s) != 1 {
        return result.decided(false, Some(Witness::gcd("gcd(r,s)", r, s)));
    }
    result.decided(true, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, m: u32) -> Field {
        Field::new(p, m, None).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        let f3 = f(3, 1);
        assert!(is_permutation_bruteforce(
            &Poly::parse(&f3, "x^3+x", None).unwrap()
        ));
        let f5 = f(5, 1);
        assert!(!is_permutation_bruteforce(
            &Poly::parse(&f5, "x^2", None).unwrap()
        ));
        let f9 = f(3, 2);
        assert!(is_permutation_bruteforce(
            &Poly::parse(&f9, "x^9+x", None).unwrap()
        ));
        // Both evaluation paths agree on a sparse high-degree polynomial.
        let sparse = Poly::parse(&f9, "x^200+B3*x^17+x", None).unwrap();
        let dense_values: Vec<_> = f9.elements().map(|z| sparse.eval(z)).collect();
        let terms = sparse.terms();
        let sparse_values: Vec<_> = f9
            .elements()
            .map(|z| sparse.eval_sparse(&terms, z))
            .collect();
        assert_eq!(dense_values, sparse_values);
    }

    #[test]
    fn subgroup_examples() {
        let f9 = f(3, 2);
        let h = Poly::from_ints(&f9, &[1, 0, 1]);
        assert!(permutes_subgroup(1, &h, 4, 2, &f9).unwrap());
        let rooted = Poly::from_ints(&f9, &[1, 1]);
        assert!(!permutes_subgroup(1, &rooted, 4, 2, &f9).unwrap());
        assert!(permutes_subgroup(3, &Poly::one(&f9), 8, 1, &f9).unwrap());
        assert!(permutes_subgroup(1, &h, 3, 2, &f9).is_err());
    }

    #[test]
    fn lwl_examples() {
        let f9 = f(3, 2);
        let h = Poly::from_ints(&f9, &[1, 0, 1]);
        let form = CyclotomicForm::new(1, 2, h.clone()).unwrap();
        assert!(lwl_criterion(&form));
        assert!(is_permutation_bruteforce(
            &Poly::parse(&f9, "x^9+x", None).unwrap()
        ));
        assert!(is_permutation_bruteforce(&form.to_poly()));

        let form2 = CyclotomicForm::new(2, 2, h).unwrap();
        assert!(!lwl_criterion(&form2));
        let r = lwl_result(&form2);
        assert_eq!(r.verdict, Some(false));

        let id = CyclotomicForm::new(1, 8, Poly::one(&f9)).unwrap();
        assert!(lwl_criterion(&id));
        assert!(CyclotomicForm::new(1, 3, Poly::one(&f9)).is_err());
    }

    #[test]
    fn apply_examples() {
        let f9 = f(3, 2);
        let h = Poly::from_ints(&f9, &[1, 0, 1]);
        let res = apply_criterion(&CyclotomicForm::new(1, 2, h).unwrap());
        assert!(res.hypothesis_ok);
        assert_eq!(res.params["n"], 2);
        assert_eq!(res.verdict, Some(true));

        // Constant h = c with c^s = 1: n = d and the verdict is
        // gcd(r, d) = gcd(r, s) = 1.
        let f13 = f(13, 1);
        for d in [1u64, 2, 3, 4, 6, 12] {
            let s = 12 / d;
            for c in f13
                .elements()
                .skip(1)
                .filter(|&c| f13.pow(c, s) == f13.one())
            {
                for r in 1..8u64 {
                    let res = apply_criterion(
                        &CyclotomicForm::new(r, d, Poly::constant(&f13, c)).unwrap(),
                    );
                    assert!(res.hypothesis_ok);
                    assert_eq!(res.params["n"], d);
                    assert_eq!(res.verdict, Some(gcd(r, d) == 1 && gcd(r, s) == 1));
                }
            }
        }
    }

    #[test]
    fn apply_hypothesis_can_fail() {
        // Exhaustive over F_25, d = 4, h = x + c: find h whose values h(ζ)^s
        // follow no single power ζ^n, and confirm the criterion is silent.
        let f25 = f(5, 2);
        let mut silent = 0;
        for c in f25.elements() {
            let h = Poly::from_terms(&f25, &[(1, f25.one()), (0, c)]);
            let form = CyclotomicForm::new(1, 4, h.clone()).unwrap();
            let mu = f25.mu(4).unwrap();
            let matches_some_n =
                (1..=4).any(|n| mu.iter().all(|&z| f25.pow(h.eval(z), 6) == f25.pow(z, n)));
            let res = apply_criterion(&form);
            assert_eq!(res.hypothesis_ok, matches_some_n);
            if !matches_some_n {
                silent += 1;
                assert!(res.verdict.is_none());
            }
        }
        assert!(silent > 0);
    }

    #[test]
    fn substitute_matches_pointwise_definition() {
        let f9 = f(3, 2);
        let h = Poly::parse(&f9, "B2*x^3+x+2", None).unwrap();
        for (r, v) in [(1, 2), (3, 4), (5, 13), (2, 8)] {
            let p = substitute(&h, r, v);
            for z in f9.elements() {
                let expected = f9.mul(f9.pow(z, r), h.eval(f9.pow(z, v)));
                assert_eq!(p.eval(z), expected);
            }
        }
    }
}
