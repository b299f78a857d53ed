//! Command-line front end. [`run`] takes the argument list and output
//! streams explicitly so that tests can drive it in-process.
//!
//! Exit codes: `0` success, `1` a criterion disagreed with brute force,
//! `2` usage or parse error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::census::{self, ASweep, FormKind, OutputFormat, SearchConfig};
use crate::criteria::{
    cor_special, cor_specialneg, thm_laigle, thm_multiterm, thm_neg, BinomialForm, CriterionResult,
    MultitermParams, NegParams, SpecialParams,
};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SubfieldHandle};
use crate::lucas::{aw_criterion, aw_implies_bin, lucas_exact, lucas_mod_p, AWParams, LucasParams};
use crate::permcheck::{apply_criterion, is_permutation_bruteforce, lwl_result, CyclotomicForm};
use crate::poly::Poly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "permpoly",
    version,
    about = "Permutation polynomials over small finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Brute-force permutation test of one polynomial.
    Check {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Run every applicable criterion on one polynomial and compare with
    /// brute force.
    Certify(CertifyArgs),
    /// Exhaustive census over all fields up to a bound.
    Search {
        #[arg(long)]
        max_q: u64,
        #[arg(long, value_enum, default_value = "binomial")]
        form: FormArg,
        #[arg(long, value_enum, default_value = "all")]
        a_sweep: SweepArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Terms a_0..a_n of the sequence attached to odd d.
    Lucas {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
        /// Also reduce in this field (needs 2d | q-1).
        #[arg(long)]
        field: Option<String>,
    },
    /// Sequence-periodicity criterion for x^r (1 + x^{e(q-1)/d}).
    Aw {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        e: u64,
    },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    field: String,
    #[arg(long)]
    modulus: Option<String>,
    /// Order of the subfield that `B<k>` coefficients refer to.
    #[arg(long)]
    coeff_field: Option<u64>,
    /// Binomial `x^u + a x^r`.
    #[arg(long)]
    u: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    d: Option<u64>,
    /// Cyclotomic `x^r h(x^{(q-1)/d})`.
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    e: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    /// Exponent of the inner power in the negative-case family.
    #[arg(long)]
    v: Option<u64>,
    #[arg(long)]
    hhat: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    Binomial,
    Cyclotomic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepArg {
    All,
    One,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Check {
            field,
            poly,
            modulus,
        } => cmd_check(&field, &poly, modulus.as_deref(), out),
        Command::Certify(args) => cmd_certify(&args, out),
        Command::Search {
            max_q,
            form,
            a_sweep,
            out: path,
            format,
            threads,
        } => {
            let config = SearchConfig {
                max_q,
                form: match form {
                    FormArg::Binomial => FormKind::Binomial,
                    FormArg::Cyclotomic => FormKind::Cyclotomic,
                },
                a_sweep: match a_sweep {
                    SweepArg::All => ASweep::All,
                    SweepArg::One => ASweep::One,
                },
                threads,
            };
            let format = match format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Jsonl => OutputFormat::Jsonl,
            };
            cmd_search(&config, &path, format, out)
        }
        Command::Lucas { d, n, field } => cmd_lucas(d, n, field.as_deref(), out),
        Command::Aw { q, d, r, e } => cmd_aw(q, d, r, e, out),
    }
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(out, "{value}").map_err(io_error)
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidParameters(format!("i/o: {e}"))
}

fn cmd_check(field: &str, poly: &str, modulus: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let field = Field::parse(field, modulus)?;
    let f = Poly::parse(&field, poly, None)?;
    let permutes = is_permutation_bruteforce(&f.reduce_mod_xq_minus_x());
    emit(
        out,
        &json!({ "q": field.q(), "poly": f.to_string(), "permutes": permutes }),
    )?;
    Ok(EXIT_OK)
}

fn require(name: &str, value: Option<u64>) -> Result<u64> {
    value.ok_or_else(|| Error::InvalidParameters(format!("--{name} is required for this form")))
}

/// A field element written as a constant of the polynomial grammar.
fn parse_element(field: &Field, text: &str, sub: Option<&SubfieldHandle>) -> Result<FieldElement> {
    let c = Poly::parse(field, text, sub)?;
    if c.degree().finite().unwrap_or(0) > 0 {
        return Err(Error::Parse(format!("{text:?} is not a constant")));
    }
    Ok(c.coeff(0))
}

fn cmd_certify(args: &CertifyArgs, out: &mut dyn Write) -> Result<i32> {
    let field = Field::parse(&args.field, args.modulus.as_deref())?;
    let sub = args.coeff_field.map(|q0| field.subfield(q0)).transpose()?;
    let parse = |text: &str| Poly::parse(&field, text, sub.as_ref());
    let q0_candidates = || -> Vec<u64> {
        match args.coeff_field {
            Some(q0) => vec![q0],
            None => (1..=field.m())
                .filter(|m0| field.m() % m0 == 0)
                .map(|m0| field.p().pow(m0))
                .collect(),
        }
    };

    let (poly, bruteforce, results) = if let Some(u) = args.u {
        let r = require("r", args.r)?;
        let a = match &args.a {
            Some(text) => parse_element(&field, text, sub.as_ref())?,
            None => field.one(),
        };
        let form = BinomialForm::new(&field, u, r, a)?;
        let (bruteforce, results, _) = census::certify_binomial(&form);
        (form.poly(), bruteforce, results)
    } else if let Some(v) = args.v {
        let hhat = match &args.hhat {
            Some(text) => parse(text)?,
            None => Poly::one(&field),
        };
        let base = NegParams {
            q0: field.p(),
            t: args.t.unwrap_or(1),
            r: require("r", args.r)?,
            v,
            k: require("k", args.k)?,
            l: args.l.unwrap_or(1),
            hhat,
        };
        let poly = base.poly(&field)?;
        let bruteforce = is_permutation_bruteforce(&poly);
        let mut first_err = None;
        let mut results = Vec::new();
        for q0 in q0_candidates() {
            let params = NegParams {
                q0,
                hhat: base.hhat.clone(),
                ..base
            };
            match thm_neg(&field, &params) {
                Ok(res) => results.push(res),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        if results.is_empty() {
            return Err(
                first_err.unwrap_or(Error::InvalidParameters("no coefficient subfield".into()))
            );
        }
        (poly, bruteforce, results)
    } else if let Some(hhat) = &args.hhat {
        let params = MultitermParams {
            r: require("r", args.r)?,
            e: args.e.unwrap_or(1),
            d: require("d", args.d)?,
            t: args.t.unwrap_or(1),
            hhat: parse(hhat)?,
            a: parse_element(&field, args.a.as_deref().unwrap_or("1"), sub.as_ref())?,
        };
        let poly = params.poly(&field)?;
        let bruteforce = is_permutation_bruteforce(&poly);
        (poly, bruteforce, vec![thm_multiterm(&field, &params)?])
    } else if let Some(k) = args.k {
        let d = require("d", args.d)?;
        let special = |q0| SpecialParams {
            q0,
            d,
            e: args.e.unwrap_or(1),
            r: args.r.unwrap_or(1),
            k,
            t: args.t.unwrap_or(1),
        };
        let base = special(field.p());
        let poly = base.poly(&field)?;
        let bruteforce = is_permutation_bruteforce(&poly);
        let cyc = CyclotomicForm::new(base.r, d, base.inner(&field)?)?;
        let mut results = vec![lwl_result(&cyc), apply_criterion(&cyc)];
        for q0 in q0_candidates() {
            results.push(cor_special(&field, &special(q0))?);
            results.push(cor_specialneg(&field, &special(q0))?);
        }
        (poly, bruteforce, results)
    } else if let Some(h) = &args.h {
        let h = parse(h)?;
        let r = require("r", args.r)?;
        let d = require("d", args.d)?;
        let cyc = CyclotomicForm::new(r, d, h.clone())?;
        let poly = cyc.to_poly();
        let bruteforce = is_permutation_bruteforce(&poly);
        let mut results = vec![lwl_result(&cyc), apply_criterion(&cyc)];
        for q0 in q0_candidates() {
            match thm_laigle(&field, q0, d, r, &h) {
                Ok(res) => results.push(res),
                // Coefficients outside a candidate subfield just rule it out.
                Err(Error::CoefficientOutsideSubfield(_)) if args.coeff_field.is_none() => {}
                Err(e) => return Err(e),
            }
        }
        (poly, bruteforce, results)
    } else {
        return Err(Error::InvalidParameters(
            "choose a form: --u (binomial), --v (negative case), --hhat (multi-term), \
             --k (special) or --h (cyclotomic)"
                .into(),
        ));
    };

    let agreement = results
        .iter()
        .filter_map(CriterionResult::authoritative_verdict)
        .all(|v| v == bruteforce);
    emit(
        out,
        &json!({
            "q": field.q(),
            "poly": poly.to_string(),
            "bruteforce": bruteforce,
            "results": results,
            "agreement": agreement,
        }),
    )?;
    Ok(if agreement {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    })
}

fn cmd_search(
    config: &SearchConfig,
    path: &PathBuf,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let report = census::run_search(config)?;
    let file = File::create(path).map_err(io_error)?;
    let mut writer = BufWriter::new(file);
    census::write_records(&report.records, format, &mut writer).map_err(io_error)?;
    writer.flush().map_err(io_error)?;
    let summary = serde_json::to_value(&report.summary).expect("summary serializes");
    emit(out, &summary)?;
    Ok(if report.is_consistent() {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    })
}

fn cmd_lucas(d: u64, n: u64, field: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let params = match field {
        Some(spec) => LucasParams::with_field(d, &Field::parse(spec, None)?)?,
        None => LucasParams::new(d)?,
    };
    for i in 0..=n {
        let a_n = lucas_exact(&params, i);
        // Printed as a bare JSON number whatever its size.
        let mut line = format!("{{\"d\":{d},\"n\":{i},\"a_n\":{a_n}");
        if let Some(f) = params.field() {
            let residue = lucas_mod_p(&params, i)?;
            line.push_str(&format!(",\"a_n_mod_p\":{}", f.display(residue)));
        }
        line.push('}');
        writeln!(out, "{line}").map_err(io_error)?;
    }
    Ok(EXIT_OK)
}

fn cmd_aw(q: u64, d: u64, r: u64, e: u64, out: &mut dyn Write) -> Result<i32> {
    if d == 0 || !(q - 1).is_multiple_of(d) {
        return Err(Error::NotDivisor {
            d,
            n: q.saturating_sub(1),
        });
    }
    let field = Field::with_order(q)?;
    let params = AWParams::new(q, (q - 1) / d, d, r, e)?;
    let result = aw_criterion(&field, &params)?;
    emit(
        out,
        &serde_json::to_value(&result).expect("result serializes"),
    )?;
    if result.hypothesis_ok && (q - 1).is_multiple_of(2 * d) {
        let implies = aw_implies_bin(&field, &params)?;
        emit(out, &json!({ "aw_implies_bin": implies }))?;
        if !implies {
            return Ok(EXIT_INCONSISTENT);
        }
    }
    Ok(EXIT_OK)
}
