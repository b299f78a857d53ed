//! Exhaustive census: every candidate polynomial of a family over every field
//! up to a bound, with each applicable criterion cross-checked against brute
//! force.
//!
//! Work is split into `(q, block)` units and evaluated on a dedicated thread
//! pool; results are merged in unit order, so the output does not depend on
//! the thread count.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{divisors, gcd, prime_powers_up_to};
use crate::criteria::{
    cor_special, cor_specialneg, thm_bin, thm_laigle, thm_multiterm, thm_neg, thm_neg_any_parity,
    BinomialForm, Criterion, CriterionResult, MultitermParams, NegParams, Outcome, SpecialParams,
};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, MAX_ORDER};
use crate::lucas::{aw_criterion, AWParams};
use crate::permcheck::{apply_criterion, is_permutation_bruteforce, lwl_result, CyclotomicForm};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Binomial,
    Cyclotomic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ASweep {
    /// Every `a ∈ F_q^*`.
    All,
    /// `a = 1` only.
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub max_q: u64,
    pub form: FormKind,
    pub a_sweep: ASweep,
    pub threads: usize,
}

/// Ranges of the cyclotomic family `x^r h_k(x^{e(q-1)/d})^t`.
pub const CYCLO_MAX_R: u64 = 10;
pub const CYCLO_MAX_K: u64 = 7;
pub const CYCLO_MAX_T: u64 = 3;
pub const CYCLO_MAX_E: u64 = 3;

#[derive(Clone, Debug, Serialize)]
pub struct CensusRecord {
    pub q: u64,
    pub p: u64,
    pub m: u32,
    pub form: FormKind,
    pub u: Option<u64>,
    pub r: u64,
    pub a: Option<String>,
    pub d: u64,
    pub s: u64,
    pub e: u64,
    pub k: Option<u64>,
    pub t: Option<u64>,
    pub poly: String,
    pub bruteforce: bool,
    pub results: Vec<CriterionResult>,
    /// Criteria whose hypothesis held, i.e. which decided this record.
    pub certifying: Vec<&'static str>,
}

impl CensusRecord {
    pub fn result(&self, criterion: Criterion) -> Option<&CriterionResult> {
        self.results.iter().find(|r| r.criterion == criterion)
    }
}

/// An expected, logged disagreement: the stated multi-term gcd formula
/// versus the exact subgroup test, or the parity-relaxed negative-case
/// formula versus brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub channel: &'static str,
    pub q: u64,
    pub q0: Option<u64>,
    pub d: u64,
    pub poly: String,
    pub detail: String,
}

/// A criterion whose hypothesis held but whose verdict contradicts brute
/// force. Any of these makes the census fail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inconsistency {
    pub q: u64,
    pub criterion: &'static str,
    pub poly: String,
    pub verdict: bool,
    pub bruteforce: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub fields: usize,
    pub records: usize,
    pub permutations: usize,
    /// Permutations certified, per criterion.
    pub certified: BTreeMap<&'static str, usize>,
    /// Records decided (hypothesis held), per criterion.
    pub decided: BTreeMap<&'static str, usize>,
    pub discrepancies: Vec<Discrepancy>,
    pub inconsistencies: Vec<Inconsistency>,
}

pub struct CensusReport {
    pub records: Vec<CensusRecord>,
    pub summary: Summary,
}

impl CensusReport {
    pub fn is_consistent(&self) -> bool {
        self.summary.inconsistencies.is_empty()
    }
}

struct UnitOutput {
    records: Vec<CensusRecord>,
    discrepancies: Vec<Discrepancy>,
}

pub fn run_search(config: &SearchConfig) -> Result<CensusReport> {
    if config.max_q > MAX_ORDER {
        return Err(Error::FieldTooLarge(config.max_q as u128));
    }
    let fields = prime_powers_up_to(config.max_q)
        .into_iter()
        .map(Field::with_order)
        .collect::<Result<Vec<_>>>()?;

    let mut units: Vec<(usize, u64)> = Vec::new();
    for (i, field) in fields.iter().enumerate() {
        let n = field.q() - 1;
        match config.form {
            FormKind::Binomial => units.extend((2..=n).map(|u| (i, u))),
            FormKind::Cyclotomic => units.extend(divisors(n).into_iter().map(|d| (i, d))),
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
    let outputs: Vec<UnitOutput> = pool.install(|| {
        units
            .par_iter()
            .map(|&(i, block)| match config.form {
                FormKind::Binomial => binomial_unit(&fields[i], block, config.a_sweep),
                FormKind::Cyclotomic => cyclotomic_unit(&fields[i], block),
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut summary = Summary {
        fields: fields.len(),
        ..Summary::default()
    };
    for out in outputs {
        records.extend(out.records);
        summary.discrepancies.extend(out.discrepancies);
    }
    for rec in &records {
        summary.records += 1;
        if rec.bruteforce {
            summary.permutations += 1;
        }
        for res in &rec.results {
            let name = res.criterion.name();
            match res.outcome() {
                Outcome::HypothesisFails => continue,
                Outcome::Permutation if rec.bruteforce => {
                    *summary.certified.entry(name).or_default() += 1;
                }
                _ => {}
            }
            *summary.decided.entry(name).or_default() += 1;
            let verdict = res.authoritative_verdict().expect("hypothesis held");
            if verdict != rec.bruteforce {
                summary.inconsistencies.push(Inconsistency {
                    q: rec.q,
                    criterion: name,
                    poly: rec.poly.clone(),
                    verdict,
                    bruteforce: rec.bruteforce,
                });
            }
        }
    }
    Ok(CensusReport { records, summary })
}

/// Subfield orders of `field`, ascending.
fn subfield_orders(field: &Field) -> Vec<u64> {
    (1..=field.m())
        .filter(|m0| field.m().is_multiple_of(*m0))
        .map(|m0| field.p().pow(m0))
        .collect()
}

/// The smallest `q0` for which `pick` reports a held hypothesis, else the
/// result for the smallest admissible `q0`.
fn best_over_subfields(
    orders: &[u64],
    mut pick: impl FnMut(u64) -> Option<CriterionResult>,
) -> Option<CriterionResult> {
    let mut fallback = None;
    for &q0 in orders {
        if let Some(res) = pick(q0) {
            if res.hypothesis_ok {
                return Some(res);
            }
            fallback.get_or_insert(res);
        }
    }
    fallback
}

fn subfields_containing(field: &Field, orders: &[u64], a: FieldElement) -> Vec<u64> {
    orders
        .iter()
        .copied()
        .filter(|&q0| field.pow(a, q0) == a)
        .collect()
}

/// Parity-relaxed negative-case formula against brute force, for every
/// subfield with odd relative degree.
fn neg_parity_hunt(
    field: &Field,
    orders: &[u64],
    base: &NegParams,
    bruteforce: bool,
    poly: &str,
    out: &mut Vec<Discrepancy>,
) {
    for &q0 in orders {
        let m = field.m() / q0.ilog(field.p());
        if m.is_multiple_of(2) {
            continue;
        }
        let params = NegParams {
            q0,
            hhat: base.hhat.clone(),
            ..*base
        };
        let Ok(res) = thm_neg_any_parity(field, &params) else {
            continue;
        };
        if res.hypothesis_ok && res.verdict != Some(bruteforce) {
            out.push(Discrepancy {
                channel: "neg_odd_m",
                q: field.q(),
                q0: Some(q0),
                d: res.params["d"].as_u64().unwrap_or_default(),
                poly: poly.to_string(),
                detail: format!(
                    "formula gives {:?}, brute force gives {bruteforce}",
                    res.verdict
                ),
            });
        }
    }
}

fn multiterm_discrepancy(field: &Field, res: &CriterionResult, poly: &str) -> Option<Discrepancy> {
    res.discrepancy
        .as_ref()
        .filter(|_| res.hypothesis_ok)
        .map(|detail| Discrepancy {
            channel: "multiterm",
            q: field.q(),
            q0: None,
            d: res.params["d"].as_u64().unwrap_or_default(),
            poly: poly.to_string(),
            detail: detail.clone(),
        })
}

/// The results for `x^r + a x^u`-type binomials that all criteria share.
fn binomial_criteria(
    field: &Field,
    orders: &[u64],
    form: &BinomialForm,
    bruteforce: bool,
    poly: &str,
    discrepancies: &mut Vec<Discrepancy>,
) -> Vec<CriterionResult> {
    let (u, r, a, d, e) = (form.u, form.r, form.a, form.d, form.e);
    let mut results = Vec::new();
    let cyc = CyclotomicForm::new(r, d, form.inner()).expect("d divides q-1");
    results.push(lwl_result(&cyc));
    results.push(apply_criterion(&cyc));

    let containing = subfields_containing(field, orders, a);
    let inner = form.inner();
    if let Some(res) =
        best_over_subfields(&containing, |q0| thm_laigle(field, q0, d, r, &inner).ok())
    {
        results.push(res);
    }

    if a == field.one() {
        let special = |q0| SpecialParams {
            q0,
            d,
            e,
            r,
            k: 2,
            t: 1,
        };
        if let Some(res) = best_over_subfields(orders, |q0| cor_special(field, &special(q0)).ok()) {
            results.push(res);
        }
        let neg = NegParams {
            q0: field.p(),
            t: 1,
            r,
            v: u - r,
            k: 2,
            l: 1,
            hhat: Poly::one(field),
        };
        let with_q0 = |q0| NegParams {
            q0,
            hhat: neg.hhat.clone(),
            ..neg
        };
        if let Some(res) = best_over_subfields(orders, |q0| thm_neg(field, &with_q0(q0)).ok()) {
            results.push(res);
        }
        neg_parity_hunt(field, orders, &neg, bruteforce, poly, discrepancies);
        if let Some(res) =
            best_over_subfields(orders, |q0| cor_specialneg(field, &special(q0)).ok())
        {
            results.push(res);
        }
    }

    results.push(thm_bin(form));

    let multi = MultitermParams {
        r,
        e,
        d,
        t: 1,
        hhat: Poly::one(field),
        a,
    };
    if let Ok(res) = thm_multiterm(field, &multi) {
        discrepancies.extend(multiterm_discrepancy(field, &res, poly));
        results.push(res);
    }

    if a == field.one() {
        if let Ok(params) = AWParams::from_binomial(field.q(), u, r) {
            if let Ok(res) = aw_criterion(field, &params) {
                results.push(res);
            }
        }
    }
    results
}

/// Brute force and every applicable criterion for one binomial, plus the
/// discrepancies it logs.
pub fn certify_binomial(form: &BinomialForm) -> (bool, Vec<CriterionResult>, Vec<Discrepancy>) {
    let field = form.field();
    let orders = subfield_orders(field);
    let poly_text = binomial_text(field, form.u, form.r, form.a);
    let bruteforce = is_permutation_bruteforce(&form.poly());
    let mut discrepancies = Vec::new();
    let results = binomial_criteria(
        field,
        &orders,
        form,
        bruteforce,
        &poly_text,
        &mut discrepancies,
    );
    (bruteforce, results, discrepancies)
}

fn binomial_unit(field: &Field, u: u64, sweep: ASweep) -> UnitOutput {
    let orders = subfield_orders(field);
    let coefficients: Vec<FieldElement> = match sweep {
        ASweep::All => field.elements().skip(1).collect(),
        ASweep::One => vec![field.one()],
    };
    let mut records = Vec::new();
    let mut discrepancies = Vec::new();
    for r in 1..u {
        for &a in &coefficients {
            let form = BinomialForm::new(field, u, r, a).expect("u > r > 0, a nonzero");
            let poly = form.poly();
            let poly_text = binomial_text(field, u, r, a);
            let bruteforce = is_permutation_bruteforce(&poly);
            let results = binomial_criteria(
                field,
                &orders,
                &form,
                bruteforce,
                &poly_text,
                &mut discrepancies,
            );
            records.push(CensusRecord {
                q: field.q(),
                p: field.p(),
                m: field.m(),
                form: FormKind::Binomial,
                u: Some(u),
                r,
                a: Some(field.display(a)),
                d: form.d,
                s: form.s,
                e: form.e,
                k: None,
                t: None,
                poly: poly_text,
                bruteforce,
                certifying: certifying(&results),
                results,
            });
        }
    }
    UnitOutput {
        records,
        discrepancies,
    }
}

fn binomial_text(field: &Field, u: u64, r: u64, a: FieldElement) -> String {
    let a_text = field.display(a);
    let low = match (r, a_text.as_str()) {
        (1, "1") => "x".to_string(),
        (1, _) => format!("{a_text}*x"),
        (_, "1") => format!("x^{r}"),
        _ => format!("{a_text}*x^{r}"),
    };
    format!("x^{u}+{low}")
}

fn certifying(results: &[CriterionResult]) -> Vec<&'static str> {
    results
        .iter()
        .filter(|r| r.hypothesis_ok)
        .map(|r| r.criterion.name())
        .collect()
}

/// Exponents `e <= CYCLO_MAX_E` coprime to `d` (just `1` when `d = 1`).
fn cyclo_exponents(d: u64) -> Vec<u64> {
    (1..=CYCLO_MAX_E.min(d.max(1)))
        .filter(|&e| gcd(e, d) == 1)
        .collect()
}

fn cyclotomic_unit(field: &Field, d: u64) -> UnitOutput {
    let orders = subfield_orders(field);
    let n = field.q() - 1;
    let s = n / d;
    let mut records = Vec::new();
    let mut discrepancies = Vec::new();
    for e in cyclo_exponents(d) {
        for k in 1..=CYCLO_MAX_K {
            for t in 1..=CYCLO_MAX_T {
                // h_1 = 1 makes e and t irrelevant.
                if k == 1 && (t > 1 || e > 1) {
                    continue;
                }
                for r in 1..=CYCLO_MAX_R {
                    let special = |q0| SpecialParams { q0, d, e, r, k, t };
                    let poly = special(field.p()).poly(field).expect("valid parameters");
                    let h = special(field.p()).inner(field).expect("valid parameters");
                    let poly_text = format!("x^{r}*h_{k}(x^{})^{t}", e * s);
                    let bruteforce = is_permutation_bruteforce(&poly);

                    let mut results = Vec::new();
                    let cyc = CyclotomicForm::new(r, d, h.clone()).expect("d divides q-1");
                    results.push(lwl_result(&cyc));
                    results.push(apply_criterion(&cyc));
                    results.extend(best_over_subfields(&orders, |q0| {
                        thm_laigle(field, q0, d, r, &h).ok()
                    }));
                    results.extend(best_over_subfields(&orders, |q0| {
                        cor_special(field, &special(q0)).ok()
                    }));
                    let neg = NegParams {
                        q0: field.p(),
                        t,
                        r,
                        v: e * s,
                        k,
                        l: 1,
                        hhat: Poly::one(field),
                    };
                    let with_q0 = |q0| NegParams {
                        q0,
                        hhat: neg.hhat.clone(),
                        ..neg
                    };
                    results.extend(best_over_subfields(&orders, |q0| {
                        thm_neg(field, &with_q0(q0)).ok()
                    }));
                    neg_parity_hunt(
                        field,
                        &orders,
                        &neg,
                        bruteforce,
                        &poly_text,
                        &mut discrepancies,
                    );
                    results.extend(best_over_subfields(&orders, |q0| {
                        cor_specialneg(field, &special(q0)).ok()
                    }));
                    if k == 2 && t == 1 {
                        let form = BinomialForm::new(field, r + e * s, r, field.one())
                            .expect("valid binomial");
                        results.push(thm_bin(&form));
                        let multi = MultitermParams {
                            r,
                            e,
                            d,
                            t: 1,
                            hhat: Poly::one(field),
                            a: field.one(),
                        };
                        if let Ok(res) = thm_multiterm(field, &multi) {
                            discrepancies.extend(multiterm_discrepancy(field, &res, &poly_text));
                            results.push(res);
                        }
                        if let Ok(params) = AWParams::from_binomial(field.q(), r + e * s, r) {
                            results.extend(aw_criterion(field, &params).ok());
                        }
                    }

                    records.push(CensusRecord {
                        q: field.q(),
                        p: field.p(),
                        m: field.m(),
                        form: FormKind::Cyclotomic,
                        u: None,
                        r,
                        a: None,
                        d,
                        s,
                        e,
                        k: Some(k),
                        t: Some(t),
                        poly: poly_text,
                        bruteforce,
                        certifying: certifying(&results),
                        results,
                    });
                }
            }
        }
    }
    UnitOutput {
        records,
        discrepancies,
    }
}

/// CSV columns, in order. Criterion columns hold `1`/`0` for a decided
/// verdict, `-` when the hypothesis failed and are empty when the criterion
/// does not apply to the record.
pub fn csv_header() -> String {
    let mut cols: Vec<&str> = vec!["q", "p", "m", "form", "u", "r", "a", "d", "s", "bruteforce"];
    cols.extend(Criterion::ALL.iter().map(|c| c.name()));
    cols.push("poly");
    cols.join(",")
}

fn csv_row(rec: &CensusRecord) -> String {
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut cols = vec![
        rec.q.to_string(),
        rec.p.to_string(),
        rec.m.to_string(),
        match rec.form {
            FormKind::Binomial => "binomial".to_string(),
            FormKind::Cyclotomic => "cyclotomic".to_string(),
        },
        opt(rec.u),
        rec.r.to_string(),
        rec.a.clone().unwrap_or_default(),
        rec.d.to_string(),
        rec.s.to_string(),
        u8::from(rec.bruteforce).to_string(),
    ];
    for c in Criterion::ALL {
        cols.push(match rec.result(c).map(CriterionResult::outcome) {
            None => String::new(),
            Some(Outcome::HypothesisFails) => "-".to_string(),
            Some(Outcome::Permutation) => "1".to_string(),
            Some(Outcome::NonPermutation) => "0".to_string(),
        });
    }
    cols.push(rec.poly.clone());
    cols.join(",")
}

pub fn write_records(
    records: &[CensusRecord],
    format: OutputFormat,
    out: &mut dyn Write,
) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", csv_header())?;
            for rec in records {
                writeln!(out, "{}", csv_row(rec))?;
            }
        }
        OutputFormat::Jsonl => {
            for rec in records {
                serde_json::to_writer(&mut *out, rec)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}
