//! Certified permutation criteria for `x^r h(x^{(q-1)/d})`-shaped
//! polynomials and binomials.
//!
//! Each criterion reports whether its hypothesis holds and, only then, a
//! verdict. "Hypothesis fails" means the criterion is silent; it says
//! nothing about whether the polynomial permutes.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SubfieldHandle};
use crate::permcheck::{permutes_subgroup_by, substitute};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Lwl,
    Apply,
    Laigle,
    CorSpecial,
    Neg,
    CorSpecialneg,
    Bin,
    Multiterm,
    Aw,
}

impl Criterion {
    pub const ALL: [Criterion; 9] = [
        Criterion::Lwl,
        Criterion::Apply,
        Criterion::Laigle,
        Criterion::CorSpecial,
        Criterion::Neg,
        Criterion::CorSpecialneg,
        Criterion::Bin,
        Criterion::Multiterm,
        Criterion::Aw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Lwl => "lwl",
            Criterion::Apply => "apply",
            Criterion::Laigle => "laigle",
            Criterion::CorSpecial => "cor_special",
            Criterion::Neg => "neg",
            Criterion::CorSpecialneg => "cor_specialneg",
            Criterion::Bin => "bin",
            Criterion::Multiterm => "multiterm",
            Criterion::Aw => "aw",
        }
    }
}

/// Why a hypothesis failed or why the verdict is negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A field element, e.g. a root of `h` in `μ_d` or an `η` failing a scan.
    Element { role: String, value: String },
    /// A gcd condition that does not hold.
    Gcd {
        label: String,
        a: u64,
        b: u64,
        gcd: u64,
    },
    /// A failed congruence or structural condition.
    Condition { detail: String },
    /// The hypothesis quantifies over roots of unity outside `F_q`.
    Unscannable { detail: String },
}

impl Witness {
    pub fn element(role: &str, value: String) -> Witness {
        Witness::Element {
            role: role.to_string(),
            value,
        }
    }

    pub fn gcd(label: &str, a: u64, b: u64) -> Witness {
        Witness::Gcd {
            label: label.to_string(),
            a,
            b,
            gcd: gcd(a, b),
        }
    }

    pub fn condition(detail: impl Into<String>) -> Witness {
        Witness::Condition {
            detail: detail.into(),
        }
    }
}

/// Three-valued reading of a [`CriterionResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    HypothesisFails,
    Permutation,
    NonPermutation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub q: u64,
    pub params: Map<String, Value>,
    pub hypothesis_ok: bool,
    pub verdict: Option<bool>,
    pub witness: Option<Witness>,
    pub exact_subgroup_verdict: Option<bool>,
    pub discrepancy: Option<String>,
    /// The criterion only certifies permutations; it never certifies the
    /// opposite.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub sufficient_only: bool,
}

impl CriterionResult {
    pub fn new(criterion: Criterion, q: u64) -> CriterionResult {
        CriterionResult {
            criterion,
            q,
            params: Map::new(),
            hypothesis_ok: false,
            verdict: None,
            witness: None,
            exact_subgroup_verdict: None,
            discrepancy: None,
            sufficient_only: false,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> CriterionResult {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn hypothesis_failed(mut self, witness: Witness) -> CriterionResult {
        self.hypothesis_ok = false;
        self.verdict = None;
        self.witness = Some(witness);
        self
    }

    pub fn decided(mut self, verdict: bool, witness: Option<Witness>) -> CriterionResult {
        self.hypothesis_ok = true;
        self.verdict = Some(verdict);
        self.witness = witness;
        self
    }

    /// The verdict to trust: the exact subgroup test when present.
    pub fn authoritative_verdict(&self) -> Option<bool> {
        if !self.hypothesis_ok {
            return None;
        }
        self.exact_subgroup_verdict.or(self.verdict)
    }

    pub fn outcome(&self) -> Outcome {
        match self.authoritative_verdict() {
            None => Outcome::HypothesisFails,
            Some(true) => Outcome::Permutation,
            Some(false) => Outcome::NonPermutation,
        }
    }
}

/// Collects verdict conditions; the first failure becomes the witness.
struct Conditions {
    failure: Option<Witness>,
}

impl Conditions {
    fn new() -> Self {
        Conditions { failure: None }
    }

    fn require(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn gcd_is(&mut self, label: &str, a: u64, b: u64, want: u64) {
        self.require(gcd(a, b) == want, || Witness::gcd(label, a, b));
    }

    fn gcd_at_most(&mut self, label: &str, a: u64, b: u64, bound: u64) {
        self.require(gcd(a, b) <= bound, || Witness::gcd(label, a, b));
    }

    fn finish(self, result: CriterionResult) -> CriterionResult {
        match self.failure {
            None => result.decided(true, None),
            Some(w) => result.decided(false, Some(w)),
        }
    }
}

fn divisor_of_group_order(field: &Field, d: u64) -> Result<u64> {
    let n = field.q() - 1;
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, n });
    }
    Ok(n / d)
}

fn positive(name: &str, value: u64) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidParameters(format!("{name} must be positive")));
    }
    Ok(())
}

fn same_field(field: &Field, poly: &Poly) -> Result<()> {
    if poly.field() != field {
        return Err(Error::MixedFields);
    }
    Ok(())
}

/// `F_{q0} ⊆ F_q` and the exponent `m` with `q = q0^m`.
fn coefficient_subfield(field: &Field, q0: u64) -> Result<(SubfieldHandle, u32)> {
    let sub = field.subfield(q0)?;
    let m = sub.relative_degree(field);
    Ok((sub, m))
}

/// `q0 ≡ 1 (mod d)` and `d | m`.
fn split_hypothesis(q0: u64, m: u32, d: u64) -> Option<Witness> {
    if !(q0 - 1).is_multiple_of(d) {
        return Some(Witness::condition(format!(
            "q0 = {q0} is not 1 mod d = {d}"
        )));
    }
    if !(m as u64).is_multiple_of(d) {
        return Some(Witness::condition(format!(
            "d = {d} does not divide m = {m}"
        )));
    }
    None
}

/// `m` even and `q0 ≡ -1 (mod d)`.
fn inert_hypothesis(q0: u64, m: u32, d: u64, require_even: bool) -> Option<Witness> {
    if require_even && !m.is_multiple_of(2) {
        return Some(Witness::condition(format!("m = {m} is odd")));
    }
    if !(q0 + 1).is_multiple_of(d) {
        return Some(Witness::condition(format!(
            "q0 = {q0} is not -1 mod d = {d}"
        )));
    }
    None
}

/// `x^r h(x^{(q-1)/d})` with `h ∈ F_{q0}[x]`, `q = q0^m`,
/// `q0 ≡ 1 (mod d)`, `d | m`: permutes iff `gcd(r, (q-1)/d) = 1` and `h` has
/// no roots in `μ_d`.
pub fn thm_laigle(field: &Field, q0: u64, d: u64, r: u64, h: &Poly) -> Result<CriterionResult> {
    positive("r", r)?;
    let s = divisor_of_group_order(field, d)?;
    same_field(field, h)?;
    let (sub, m) = coefficient_subfield(field, q0)?;
    h.check_coefficients_in(&sub)?;

    let result = CriterionResult::new(Criterion::Laigle, field.q())
        .with_param("q0", q0)
        .with_param("m", m)
        .with_param("d", d)
        .with_param("r", r)
        .with_param("s", s)
        .with_param("h", h.to_string());
    if let Some(w) = split_hypothesis(q0, m, d) {
        return Ok(result.hypothesis_failed(w));
    }
    let mut conds = Conditions::new();
    conds.gcd_is("gcd(r,s)", r, s, 1);
    if let Some(root) = h.has_root_in_mu(d)? {
        conds.require(false, || Witness::element("root", field.display(root)));
    }
    Ok(conds.finish(result))
}

/// Parameters of `x^r h_k(x^{e(q-1)/d})^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecialParams {
    pub q0: u64,
    pub d: u64,
    pub e: u64,
    pub r: u64,
    pub k: u64,
    pub t: u64,
}

impl SpecialParams {
    fn validate(&self, field: &Field) -> Result<u64> {
        for (name, v) in [
            ("d", self.d),
            ("e", self.e),
            ("r", self.r),
            ("k", self.k),
            ("t", self.t),
        ] {
            positive(name, v)?;
        }
        let s = divisor_of_group_order(field, self.d)?;
        if gcd(self.d, self.e) != 1 {
            return Err(Error::InvalidParameters(format!(
                "gcd(d, e) = gcd({}, {}) is not 1",
                self.d, self.e
            )));
        }
        Ok(s)
    }

    /// `h_k(x^e)^t`, the `h` of the cyclotomic form with this `d`.
    pub fn inner(&self, field: &Field) -> Result<Poly> {
        self.validate(field)?;
        let hk = Poly::geom(self.k as usize, field)?;
        hk.pow(self.t).compose_power(self.e as usize)
    }

    /// `x^r h_k(x^{es})^t` reduced mod `x^q - x`.
    pub fn poly(&self, field: &Field) -> Result<Poly> {
        let s = self.validate(field)?;
        let hk_t = Poly::geom(self.k as usize, field)?.pow(self.t);
        Ok(substitute(&hk_t, self.r, self.e * s))
    }

    fn record(&self, result: CriterionResult, m: u32, s: u64) -> CriterionResult {
        result
            .with_param("q0", self.q0)
            .with_param("m", m)
            .with_param("d", self.d)
            .with_param("e", self.e)
            .with_param("r", self.r)
            .with_param("k", self.k)
            .with_param("t", self.t)
            .with_param("s", s)
    }
}

/// `x^r h_k(x^{e(q-1)/d})^t` under `q0 ≡ 1 (mod d)`, `d | m`: permutes iff
/// `gcd(k, pd) = gcd(r, (q-1)/d) = 1`.
pub fn cor_special(field: &Field, params: &SpecialParams) -> Result<CriterionResult> {
    let s = params.validate(field)?;
    let (_, m) = coefficient_subfield(field, params.q0)?;
    let result = params.record(CriterionResult::new(Criterion::CorSpecial, field.q()), m, s);
    if let Some(w) = split_hypothesis(params.q0, m, params.d) {
        return Ok(result.hypothesis_failed(w));
    }
    let mut conds = Conditions::new();
    conds.gcd_is("gcd(k,pd)", params.k, field.p() * params.d, 1);
    conds.gcd_is("gcd(r,s)", params.r, s, 1);
    Ok(conds.finish(result))
}

/// `x^r h_k(x^{e(q-1)/d})^t` under `m` even, `q0 ≡ -1 (mod d)`: permutes iff
/// `gcd(r,s) = gcd(k,pd) = 1` and `gcd(2r + (k-1)tes, 2d) = 2`.
pub fn cor_specialneg(field: &Field, params: &SpecialParams) -> Result<CriterionResult> {
    let s = params.validate(field)?;
    let (_, m) = coefficient_subfield(field, params.q0)?;
    let result = params.record(
        CriterionResult::new(Criterion::CorSpecialneg, field.q()),
        m,
        s,
    );
    if let Some(w) = inert_hypothesis(params.q0, m, params.d, true) {
        return Ok(result.hypothesis_failed(w));
    }
    let SpecialParams { d, e, r, k, t, .. } = *params;
    let mut conds = Conditions::new();
    conds.gcd_is("gcd(r,s)", r, s, 1);
    conds.gcd_is("gcd(k,pd)", k, field.p() * d, 1);
    conds.gcd_is("gcd(2r+(k-1)tes,2d)", 2 * r + (k - 1) * t * e * s, 2 * d, 2);
    Ok(conds.finish(result))
}

/// Parameters of `x^r h(x^v)` with `h = h_k^t · ĥ(h_ℓ^{d0})`.
#[derive(Clone, Debug)]
pub struct NegParams {
    pub q0: u64,
    pub t: u64,
    pub r: u64,
    pub v: u64,
    pub k: u64,
    pub l: u64,
    pub hhat: Poly,
}

/// Quantities derived from [`NegParams`] and the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NegDerived {
    pub s: u64,
    pub d: u64,
    pub d0: u64,
}

impl NegParams {
    pub fn derived(&self, field: &Field) -> Result<NegDerived> {
        for (name, v) in [("r", self.r), ("v", self.v), ("k", self.k), ("l", self.l)] {
            positive(name, v)?;
        }
        let n = field.q() - 1;
        let s = gcd(n, self.v);
        let d = n / s;
        let d0 = d / gcd(d, self.l - 1);
        Ok(NegDerived { s, d, d0 })
    }

    /// `h = h_k^t · ĥ(h_ℓ^{d0})`, reduced mod `x^q - x` (it is only ever
    /// evaluated at points of `F_q`).
    pub fn composite_h(&self, field: &Field) -> Result<Poly> {
        same_field(field, &self.hhat)?;
        let NegDerived { d0, .. } = self.derived(field)?;
        let hl_d0 = Poly::geom(self.l as usize, field)?.pow_as_function(d0);
        let mut inner = Poly::zero(field);
        for &c in self.hhat.coeffs().iter().rev() {
            inner = inner
                .mul(&hl_d0)
                .add(&Poly::constant(field, c))
                .reduce_mod_xq_minus_x();
        }
        let hk_t = Poly::geom(self.k as usize, field)?.pow_as_function(self.t);
        Ok(hk_t.mul(&inner).reduce_mod_xq_minus_x())
    }

    /// `x^r h(x^v)` reduced mod `x^q - x`.
    pub fn poly(&self, field: &Field) -> Result<Poly> {
        Ok(substitute(&self.composite_h(field)?, self.r, self.v))
    }
}

/// `x^r h(x^v)`, `h = h_k^t ĥ(h_ℓ^{d0})`, `ĥ ∈ F_{q0}[x]`, under `m` even and
/// `q0 ≡ -1 (mod d)`: permutes iff `gcd(r,s) = 1`,
/// `gcd(2r + (k-1)tv, 2d) = 2` and `h` has no roots in `μ_d`.
pub fn thm_neg(field: &Field, params: &NegParams) -> Result<CriterionResult> {
    neg_with_parity(field, params, true)
}

/// [`thm_neg`] without the requirement that `m` be even. The formula is
/// not guaranteed in that regime; this exists to hunt for its failures.
pub fn thm_neg_any_parity(field: &Field, params: &NegParams) -> Result<CriterionResult> {
    neg_with_parity(field, params, false)
}

fn neg_with_parity(
    field: &Field,
    params: &NegParams,
    require_even: bool,
) -> Result<CriterionResult> {
    let NegDerived { s, d, d0 } = params.derived(field)?;
    same_field(field, &params.hhat)?;
    let (sub, m) = coefficient_subfield(field, params.q0)?;
    params.hhat.check_coefficients_in(&sub)?;

    let result = CriterionResult::new(Criterion::Neg, field.q())
        .with_param("q0", params.q0)
        .with_param("m", m)
        .with_param("t", params.t)
        .with_param("r", params.r)
        .with_param("v", params.v)
        .with_param("k", params.k)
        .with_param("l", params.l)
        .with_param("hhat", params.hhat.to_string())
        .with_param("s", s)
        .with_param("d", d)
        .with_param("d0", d0)
        .with_param("parity_required", require_even);
    if let Some(w) = inert_hypothesis(params.q0, m, d, require_even) {
        return Ok(result.hypothesis_failed(w));
    }
    let NegParams { t, r, v, k, .. } = *params;
    let mut conds = Conditions::new();
    conds.gcd_is("gcd(r,s)", r, s, 1);
    conds.gcd_is("gcd(2r+(k-1)tv,2d)", 2 * r + (k - 1) * t * v, 2 * d, 2);
    let h = params.composite_h(field)?;
    if let Some(root) = h.has_root_in_mu(d)? {
        conds.require(false, || Witness::element("root", field.display(root)));
    }
    Ok(conds.finish(result))
}

/// `x^u + a x^r` with `u > r > 0`, `a ≠ 0`, and the derived
/// `s = gcd(u-r, q-1)`, `d = (q-1)/s`, `e = (u-r)/s`.
#[derive(Clone, Debug)]
pub struct BinomialForm {
    field: Field,
    pub u: u64,
    pub r: u64,
    pub a: FieldElement,
    pub s: u64,
    pub d: u64,
    pub e: u64,
}

impl BinomialForm {
    pub fn new(field: &Field, u: u64, r: u64, a: FieldElement) -> Result<BinomialForm> {
        if !(u > r && r > 0) {
            return Err(Error::InvalidParameters(format!(
                "need u > r > 0, got u = {u}, r = {r}"
            )));
        }
        field.ensure(a)?;
        if a.is_zero() {
            return Err(Error::InvalidParameters("a must be nonzero".into()));
        }
        let n = field.q() - 1;
        let s = gcd(u - r, n);
        Ok(BinomialForm {
            field: field.clone(),
            u,
            r,
            a,
            s,
            d: n / s,
            e: (u - r) / s,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `x^u + a x^r` reduced mod `x^q - x`.
    pub fn poly(&self) -> Poly {
        let inner = Poly::from_terms(
            &self.field,
            &[(self.e as usize, self.field.one()), (0, self.a)],
        );
        substitute(&inner, self.r, self.s)
    }

    /// `x^e + a`, the `h` with `x^u + a x^r = x^r h(x^s)`.
    pub fn inner(&self) -> Poly {
        Poly::from_terms(
            &self.field,
            &[(self.e as usize, self.field.one()), (0, self.a)],
        )
    }

    fn record(&self, criterion: Criterion) -> CriterionResult {
        CriterionResult::new(criterion, self.field.q())
            .with_param("u", self.u)
            .with_param("r", self.r)
            .with_param("a", self.field.display(self.a))
            .with_param("s", self.s)
            .with_param("d", self.d)
            .with_param("e", self.e)
    }
}

/// If `η + a/η ∈ μ_s` for every `η ∈ μ_{2d}`, then `x^u + a x^r` permutes iff
/// `-a ∉ μ_d`, `gcd(r, s) = 1` and `gcd(2d, u + r) <= 2`.
///
/// For odd `q` the scan needs `2d | q - 1`; otherwise the hypothesis is
/// reported as unscannable. For even `q`, `μ_{2d} = μ_d`.
pub fn thm_bin(form: &BinomialForm) -> CriterionResult {
    let field = &form.field;
    let (s, d, a) = (form.s, form.d, form.a);
    let result = form.record(Criterion::Bin);

    let scan_order = if field.p() == 2 { d } else { 2 * d };
    let etas = match field.mu(scan_order) {
        Ok(etas) => etas,
        Err(_) => {
            return result.hypothesis_failed(Witness::Unscannable {
                detail: format!("2d = {} does not divide q-1 = {}", 2 * d, field.q() - 1),
            })
        }
    };
    for eta in etas {
        let w = field.add(eta, field.div(a, eta).expect("eta is nonzero"));
        if w.is_zero() || field.pow(w, s) != field.one() {
            return result.hypothesis_failed(Witness::element("eta", field.display(eta)));
        }
    }

    let mut conds = Conditions::new();
    let minus_a = field.neg(a);
    conds.require(field.pow(minus_a, d) != field.one(), || {
        Witness::element("-a in mu_d", field.display(minus_a))
    });
    conds.gcd_is("gcd(r,s)", form.r, s, 1);
    conds.gcd_at_most("gcd(2d,u+r)", 2 * d, form.u + form.r, 2);
    conds.finish(result)
}

/// Parameters of `x^r h(x^{e(q-1)/d} + a)` with `h = x^t ĥ(x^d)`.
#[derive(Clone, Debug)]
pub struct MultitermParams {
    pub r: u64,
    pub e: u64,
    pub d: u64,
    pub t: u64,
    pub hhat: Poly,
    pub a: FieldElement,
}

impl MultitermParams {
    fn validate(&self, field: &Field) -> Result<u64> {
        for (name, v) in [("r", self.r), ("e", self.e), ("t", self.t)] {
            positive(name, v)?;
        }
        let s = divisor_of_group_order(field, self.d)?;
        if gcd(self.e, self.d) != 1 {
            return Err(Error::InvalidParameters(format!(
                "gcd(e, d) = gcd({}, {}) is not 1",
                self.e, self.d
            )));
        }
        same_field(field, &self.hhat)?;
        field.ensure(self.a)?;
        if self.a.is_zero() {
            return Err(Error::InvalidParameters("a must be nonzero".into()));
        }
        Ok(s)
    }

    /// `h(y) = y^t ĥ(y^d)` at a point.
    fn h_at(&self, field: &Field, y: FieldElement) -> FieldElement {
        field.mul(field.pow(y, self.t), self.hhat.eval(field.pow(y, self.d)))
    }

    /// `x^r h(x^{es} + a)` reduced mod `x^q - x`.
    pub fn poly(&self, field: &Field) -> Result<Poly> {
        let s = self.validate(field)?;
        let inner =
            substitute(&Poly::one(field), self.e * s, 1).add(&Poly::constant(field, self.a));
        let inner_d = inner.pow_as_function(self.d);
        let mut hhat_part = Poly::zero(field);
        for &c in self.hhat.coeffs().iter().rev() {
            hhat_part = hhat_part
                .mul(&inner_d)
                .add(&Poly::constant(field, c))
                .reduce_mod_xq_minus_x();
        }
        let h_of_inner = inner
            .pow_as_function(self.t)
            .mul(&hhat_part)
            .reduce_mod_xq_minus_x();
        Ok(substitute(&h_of_inner, self.r, 1))
    }
}

/// Multi-term generalization of [`thm_bin`]. Carries the stated verdict
/// `gcd(2r + et(q-1)/d, d) = 1 ∧ gcd(r, (q-1)/d) = 1` in `verdict`, and the
/// exact subgroup test in `exact_subgroup_verdict`; the latter is
/// authoritative and any disagreement is recorded in `discrepancy`.
pub fn thm_multiterm(field: &Field, params: &MultitermParams) -> Result<CriterionResult> {
    let s = params.validate(field)?;
    let MultitermParams { r, e, d, t, a, .. } = *params;
    let mut result = CriterionResult::new(Criterion::Multiterm, field.q())
        .with_param("r", r)
        .with_param("e", e)
        .with_param("d", d)
        .with_param("t", t)
        .with_param("hhat", params.hhat.to_string())
        .with_param("a", field.display(a))
        .with_param("s", s);

    // f = x^r H(x^s) with H(y) = h(y^e + a).
    let exact = gcd(r, s) == 1
        && permutes_subgroup_by(field, r, s, d, |z| {
            params.h_at(field, field.add(field.pow(z, e), a))
        })?;
    result.exact_subgroup_verdict = Some(exact);

    let scan_order = d * gcd(2, d);
    let etas = match field.mu(scan_order) {
        Ok(etas) => etas,
        Err(_) => {
            return Ok(result.hypothesis_failed(Witness::Unscannable {
                detail: format!("{scan_order} does not divide q-1 = {}", field.q() - 1),
            }))
        }
    };
    for eta in etas {
        let w = field.add(eta, field.div(a, eta).expect("eta is nonzero"));
        let first = !w.is_zero() && field.pow(w, t * s) == field.one();
        let y = params
            .hhat
            .eval(field.pow(field.add(field.pow(eta, 2 * e), a), d));
        let second = !y.is_zero() && field.pow(y, s) == field.one();
        if !(first && second) {
            return Ok(result.hypothesis_failed(Witness::element("eta", field.display(eta))));
        }
    }

    let mut conds = Conditions::new();
    conds.gcd_is("gcd(2r+ets,d)", 2 * r + e * t * s, d, 1);
    conds.gcd_is("gcd(r,s)", r, s, 1);
    let mut result = conds.finish(result);
    if result.verdict != Some(exact) {
        result.discrepancy = Some(format!(
            "stated gcd condition gives {}, exact subgroup test gives {exact}; gcd(2r+ets,2d) = {}",
            result.verdict.unwrap_or_default(),
            gcd(2 * r + e * t * s, 2 * d)
        ));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcheck::is_permutation_bruteforce;

    fn f(p: u64, m: u32) -> Field {
        Field::new(p, m, None).unwrap()
    }

    #[test]
    fn laigle_examples() {
        let f9 = f(3, 2);
        let h = Poly::from_ints(&f9, &[1, 0, 1]);
        let res = thm_laigle(&f9, 3, 2, 1, &h).unwrap();
        assert!(res.hypothesis_ok);
        assert_eq!(res.verdict, Some(true));
        assert!(is_permutation_bruteforce(
            &Poly::parse(&f9, "x^9+x", None).unwrap()
        ));

        let h = Poly::from_ints(&f9, &[1, 1]);
        let res = thm_laigle(&f9, 3, 2, 1, &h).unwrap();
        assert_eq!(res.verdict, Some(false));
        assert_eq!(res.witness, Some(Witness::element("root", "2".into())));

        let f27 = f(3, 3);
        let res = thm_laigle(&f27, 3, 13, 1, &Poly::one(&f27)).unwrap();
        assert!(!res.hypothesis_ok);
        let f81 = f(3, 4);
        assert!(
            !thm_laigle(&f81, 3, 5, 1, &Poly::one(&f81))
                .unwrap()
                .hypothesis_ok
        );
    }

    #[test]
    fn laigle_rejects_foreign_coefficients() {
        let f9 = f(3, 2);
        let h = Poly::parse(&f9, "B1*x+1", None).unwrap();
        assert!(matches!(
            thm_laigle(&f9, 3, 2, 1, &h),
            Err(Error::CoefficientOutsideSubfield(_))
        ));
        assert!(matches!(
            thm_laigle(&f9, 3, 3, 1, &Poly::one(&f9)),
            Err(Error::NotDivisor { .. })
        ));
    }

    #[test]
    fn cor_special_examples() {
        let f9 = f(3, 2);
        let base = SpecialParams {
            q0: 3,
            d: 2,
            e: 1,
            r: 1,
            k: 3,
            t: 1,
        };
        let res = cor_special(&f9, &base).unwrap();
        assert!(res.hypothesis_ok);
        assert_eq!(res.verdict, Some(false));

        let five = SpecialParams { k: 5, ..base };
        let res = cor_special(&f9, &five).unwrap();
        assert_eq!(res.verdict, Some(true));
        assert!(is_permutation_bruteforce(&five.poly(&f9).unwrap()));

        assert!(cor_special(&f9, &SpecialParams { e: 2, ..base }).is_err());
    }

    #[test]
    fn neg_examples() {
        let f9 = f(3, 2);
        let params = NegParams {
            q0: 3,
            t: 0,
            r: 1,
            v: 2,
            k: 1,
            l: 3,
            hhat: Poly::from_ints(&f9, &[1, 0, 1]),
        };
        let res = thm_neg(&f9, &params).unwrap();
        assert!(res.hypothesis_ok);
        assert_eq!(res.params["d"], 4);
        assert_eq!(res.params["d0"], 2);
        assert_eq!(res.verdict, Some(true));
        assert!(is_permutation_bruteforce(&params.poly(&f9).unwrap()));

        let f4 = f(2, 2);
        let params = NegParams {
            q0: 2,
            t: 1,
            r: 1,
            v: 1,
            k: 2,
            l: 1,
            hhat: Poly::one(&f4),
        };
        let res = thm_neg(&f4, &params).unwrap();
        assert!(res.hypothesis_ok);
        assert_eq!(res.verdict, Some(false));
        assert_eq!(params.poly(&f4).unwrap().to_string(), "x^2+x");
        assert!(!is_permutation_bruteforce(&params.poly(&f4).unwrap()));

        let f27 = f(3, 3);
        let params = NegParams {
            q0: 3,
            t: 1,
            r: 1,
            v: 13,
            k: 2,
            l: 1,
            hhat: Poly::one(&f27),
        };
        let res = thm_neg(&f27, &params).unwrap();
        assert!(!res.hypothesis_ok);
    }

    #[test]
    fn specialneg_examples() {
        let f9 = f(3, 2);
        let base = SpecialParams {
            q0: 3,
            d: 4,
            e: 1,
            r: 1,
            k: 5,
            t: 1,
        };
        let res = cor_specialneg(&f9, &base).unwrap();
        assert!(res.hypothesis_ok);
        assert_eq!(res.verdict, Some(true));
        assert!(is_permutation_bruteforce(&base.poly(&f9).unwrap()));

        let three = SpecialParams { k: 3, ..base };
        assert_eq!(cor_specialneg(&f9, &three).unwrap().verdict, Some(false));

        let f49 = f(7, 2);
        let res = cor_specialneg(
            &f49,
            &SpecialParams {
                q0: 7,
                d: 4,
                e: 1,
                r: 1,
                k: 2,
                t: 1,
            },
        )
        .unwrap();
        assert!(res.hypothesis_ok);
        assert!(cor_specialneg(&f9, &SpecialParams { e: 2, ..base }).is_err());
    }

    #[test]
    fn bin_examples() {
        let f9 = f(3, 2);
        let form = BinomialForm::new(&f9, 9, 1, f9.one()).unwrap();
        assert_eq!((form.s, form.d, form.e), (8, 1, 1));
        let res = thm_bin(&form);
        assert!(res.hypothesis_ok);
        assert_eq!(res.verdict, Some(true));
        assert!(is_permutation_bruteforce(&form.poly()));

        let f7 = f(7, 1);
        let form = BinomialForm::new(&f7, 3, 1, f7.one()).unwrap();
        let res = thm_bin(&form);
        assert!(!res.hypothesis_ok);
        assert_eq!(res.witness, Some(Witness::element("eta", "1".into())));

        // Every decided case agrees with brute force, and both verdicts occur.
        let mut seen = [false; 2];
        for field in [f(5, 1), f9.clone(), f(17, 1), f(2, 4)] {
            let n = field.q() - 1;
            for u in 2..=n {
                for r in 1..u {
                    for a in field.elements().skip(1) {
                        let form = BinomialForm::new(&field, u, r, a).unwrap();
                        if let Some(v) = thm_bin(&form).verdict {
                            assert_eq!(v, is_permutation_bruteforce(&form.poly()), "u={u} r={r}");
                            seen[v as usize] = true;
                        }
                    }
                }
            }
        }
        assert_eq!(seen, [true, true]);

        assert!(BinomialForm::new(&f9, 2, 2, f9.one()).is_err());
        assert!(BinomialForm::new(&f9, 3, 2, f9.zero()).is_err());
    }

    #[test]
    fn bin_reports_unscannable_for_odd_s() {
        // q = 7, u - r = 3: s = 3, d = 2, 2d = 4 does not divide 6.
        let f7 = f(7, 1);
        let res = thm_bin(&BinomialForm::new(&f7, 4, 1, f7.one()).unwrap());
        assert!(!res.hypothesis_ok);
        assert!(matches!(res.witness, Some(Witness::Unscannable { .. })));
    }

    #[test]
    fn multiterm_examples() {
        let f9 = f(3, 2);
        let params = MultitermParams {
            r: 1,
            e: 1,
            d: 1,
            t: 1,
            hhat: Poly::one(&f9),
            a: f9.one(),
        };
        let res = thm_multiterm(&f9, &params).unwrap();
        assert!(res.hypothesis_ok);
        assert_eq!(res.verdict, Some(true));
        assert_eq!(res.exact_subgroup_verdict, Some(true));
        assert!(res.discrepancy.is_none());
        // x^9 + x agrees with 2x as a function on F_9.
        assert_eq!(params.poly(&f9).unwrap().to_string(), "2*x");

        let f7 = f(7, 1);
        let params = MultitermParams {
            r: 1,
            e: 1,
            d: 3,
            t: 1,
            hhat: Poly::one(&f7),
            a: f7.one(),
        };
        let res = thm_multiterm(&f7, &params).unwrap();
        assert!(!res.hypothesis_ok);

        let params = MultitermParams {
            r: 2,
            e: 1,
            d: 1,
            t: 1,
            hhat: Poly::one(&f9),
            a: f9.one(),
        };
        let res = thm_multiterm(&f9, &params).unwrap();
        assert_eq!(res.verdict, Some(false));
        assert_eq!(res.exact_subgroup_verdict, Some(false));
        assert!(thm_multiterm(
            &f9,
            &MultitermParams {
                e: 2,
                d: 2,
                ..params
            }
        )
        .is_err());
    }

    #[test]
    fn serializes_to_flat_record() {
        let f9 = f(3, 2);
        let res = thm_bin(&BinomialForm::new(&f9, 9, 1, f9.one()).unwrap());
        let json = serde_json::to_value(&res).unwrap();
        let keys: Vec<&str> = json
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        for k in [
            "criterion",
            "q",
            "params",
            "hypothesis_ok",
            "verdict",
            "witness",
            "exact_subgroup_verdict",
            "discrepancy",
        ] {
            assert!(keys.contains(&k), "missing {k}");
        }
        assert_eq!(json["criterion"], "bin");
        assert_eq!(json["params"]["u"], 9);
    }
}
