//! Command-line front end. Every subcommand is a thin adapter over the
//! library; single results are JSON, tables are CSV or JSON.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::algebras::{
    algebras_isomorphic, automorphisms_bruteforce, is_valid_triple, oriented_automorphisms_bruteforce,
    oriented_isomorphic, type_of, AlgebraHom, FreeQuadraticAlgebra, Orientation,
};
use crate::error::{Error, Result};
use crate::forms::{reduce_posdef, TwistedForm};
use crate::glue::{parse_glue_input, verification_report};
use crate::picard::{class_group, form_to_ideal, ideal_to_form, pic_mod_conjugation, OrderIdeal, QuadraticOrder};
use crate::quadtype::AlgebraType;
use crate::ring::{RingElement, RingHandle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "quadalg", version, about = "Quadratic algebras, twisted forms and class groups")]
pub struct Cli {
    /// Output format; CSV is available for `table` only.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Read the JSON document argument of a subcommand from a file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a positive definite integral form `[a,b,c]`.
    Reduce { form: Option<String> },
    /// Compose two forms of discriminant `delta`.
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        q1: String,
        q2: String,
    },
    /// Reduced primitive forms of a negative discriminant.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
    },
    /// Class group modulo conjugation.
    Picmodconj {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
    },
    /// Type of the algebra `τ² + rτ + s`.
    Type {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        alg: String,
    },
    /// Natural type of a form.
    NaturalType {
        #[arg(long, default_value = "z")]
        ring: String,
        form: Option<String>,
    },
    /// Search for an isomorphism between two algebras.
    Iso {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        alg1: String,
        #[arg(long, allow_hyphen_values = true)]
        alg2: String,
    },
    /// Search for an orientation-preserving isomorphism.
    OrientedIso {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        alg1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        theta1: String,
        #[arg(long, allow_hyphen_values = true)]
        alg2: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        theta2: String,
    },
    /// Automorphisms of an algebra, orientation-preserving when `--theta` is given.
    Autos {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        alg: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
    },
    /// Whether `delta ≡ pitilde² mod 4`.
    ValidateTriple {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        pitilde: String,
    },
    /// Ideal attached to a primitive form.
    Form2ideal {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, allow_hyphen_values = true)]
        pitilde: Option<String>,
        form: Option<String>,
    },
    /// Reduced form attached to an invertible ideal given as JSON.
    Ideal2form { ideal: Option<String> },
    /// Validate glueing data and report every check.
    GlueCheck { data: Option<String> },
    /// Class numbers over a range of negative discriminants.
    Table {
        #[arg(long, allow_hyphen_values = true)]
        min: i64,
        #[arg(long, allow_hyphen_values = true)]
        max: i64,
    },
}

/// One row of the discriminant table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub delta: BigInt,
    pub pitilde: BigInt,
    pub h: usize,
    pub picmod: usize,
    pub reps: Vec<TwistedForm>,
}

/// Rows for every valid discriminant in `[min, max]`, in increasing order.
pub fn emit_table(min: i64, max: i64) -> Result<Vec<TableRow>> {
    if min > max || max >= 0 {
        return Err(Error::InvalidRange(format!("need min ≤ max < 0, got [{min}, {max}]")));
    }
    let mut rows = Vec::new();
    for d in min..=max {
        let delta = BigInt::from(d);
        let Ok(order) = QuadraticOrder::from_delta(delta.clone()) else {
            continue;
        };
        let g = class_group(&delta)?;
        rows.push(TableRow {
            pitilde: order.pitilde().clone(),
            h: g.h(),
            picmod: pic_mod_conjugation(&delta)?.len(),
            reps: g.reps,
            delta,
        });
    }
    Ok(rows)
}

fn table_json(rows: &[TableRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "delta": crate::ring::json_int(&r.delta),
                    "pitilde": crate::ring::json_int(&r.pitilde),
                    "h": r.h,
                    "picmod": r.picmod,
                    "reps": r.reps.iter().map(TwistedForm::coeffs_json).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn table_csv(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(["delta", "pitilde", "h", "picmod", "reps"]).map_err(io)?;
    for r in rows {
        let reps = r.reps.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        w.write_record([r.delta.to_string(), r.pitilde.to_string(), r.h.to_string(), r.picmod.to_string(), reps])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s}")))
}

fn parse_json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

/// An element given as JSON or as an expression such as `3/2` or `w`.
fn parse_element(ring: &RingHandle, s: &str) -> Result<RingElement> {
    match serde_json::from_str::<Value>(s) {
        Ok(v) => ring.element_from_json(&v),
        Err(_) => ring.parse_element(s),
    }
}

/// An algebra given as `r=…,s=…` or as a JSON object with `r` and `s`.
fn parse_algebra(ring: &RingHandle, s: &str) -> Result<FreeQuadraticAlgebra> {
    if s.trim_start().starts_with('{') {
        return FreeQuadraticAlgebra::from_json(ring, &parse_json(s)?);
    }
    let (mut r, mut sv) = (None, None);
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected r=…,s=… but got '{s}'")))?;
        let slot = match k.trim() {
            "r" => &mut r,
            "s" => &mut sv,
            other => return Err(Error::Parse(format!("unknown algebra field '{other}'"))),
        };
        *slot = Some(parse_element(ring, v)?);
    }
    match (r, sv) {
        (Some(r), Some(s)) => FreeQuadraticAlgebra::new(r, s),
        _ => Err(Error::Parse(format!("algebra needs both r and s: '{s}'"))),
    }
}

fn iso_json(hom: Option<AlgebraHom>) -> Value {
    match hom {
        Some(h) => json!({"isomorphic": true, "hom": h.to_json()}),
        None => json!({"isomorphic": false}),
    }
}

struct Ctx {
    input: Option<PathBuf>,
}

impl Ctx {
    fn document(&self, arg: Option<String>) -> Result<Value> {
        let text = match (arg, &self.input) {
            (Some(s), _) => s,
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?,
            (None, None) => return Err(Error::Parse("missing JSON argument (or --input FILE)".into())),
        };
        parse_json(&text)
    }

    fn form(&self, ring: &RingHandle, arg: Option<String>) -> Result<TwistedForm> {
        TwistedForm::from_json(ring, &self.document(arg)?)
    }
}

fn execute(cli: Cli) -> Result<(i32, String)> {
    let ctx = Ctx { input: cli.input };
    let z = RingHandle::integers();
    if cli.format == Format::Csv && !matches!(cli.command, Command::Table { .. }) {
        return Err(Error::Parse("CSV output is only available for table".into()));
    }
    let out = match cli.command {
        Command::Reduce { form } => reduce_posdef(&ctx.form(&z, form)?)?.coeffs_json(),
        Command::Compose { delta, q1, q2 } => {
            let g = class_group(&parse_int(&delta)?)?;
            let q1 = TwistedForm::from_json(&z, &parse_json(&q1)?)?;
            let q2 = TwistedForm::from_json(&z, &parse_json(&q2)?)?;
            g.compose(&q1, &q2)?.coeffs_json()
        }
        Command::Classgroup { delta } => class_group(&parse_int(&delta)?)?.to_json(),
        Command::Picmodconj { delta } => {
            let orbits = pic_mod_conjugation(&parse_int(&delta)?)?;
            json!({
                "count": orbits.len(),
                "orbits": orbits
                    .iter()
                    .map(|o| o.iter().map(TwistedForm::coeffs_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        }
        Command::Type { ring, alg } => {
            let ring = RingHandle::parse(&ring)?;
            type_of(&parse_algebra(&ring, &alg)?).to_json()
        }
        Command::NaturalType { ring, form } => {
            let ring = RingHandle::parse(&ring)?;
            ctx.form(&ring, form)?.natural_type().to_json()
        }
        Command::Iso { ring, alg1, alg2 } => {
            let ring = RingHandle::parse(&ring)?;
            iso_json(algebras_isomorphic(&parse_algebra(&ring, &alg1)?, &parse_algebra(&ring, &alg2)?)?)
        }
        Command::OrientedIso {
            ring,
            alg1,
            theta1,
            alg2,
            theta2,
        } => {
            let ring = RingHandle::parse(&ring)?;
            let t1 = Orientation::new(parse_element(&ring, &theta1)?)?;
            let t2 = Orientation::new(parse_element(&ring, &theta2)?)?;
            iso_json(oriented_isomorphic(
                &parse_algebra(&ring, &alg1)?,
                &t1,
                &parse_algebra(&ring, &alg2)?,
                &t2,
            )?)
        }
        Command::Autos { ring, alg, theta } => {
            let ring = RingHandle::parse(&ring)?;
            let c = parse_algebra(&ring, &alg)?;
            let autos = match theta {
                Some(t) => oriented_automorphisms_bruteforce(&c, &Orientation::new(parse_element(&ring, &t)?)?)?,
                None => automorphisms_bruteforce(&c)?,
            };
            json!({
                "count": autos.len(),
                "automorphisms": autos.iter().map(AlgebraHom::to_json).collect::<Vec<_>>(),
            })
        }
        Command::ValidateTriple { ring, delta, pitilde } => {
            let ring = RingHandle::parse(&ring)?;
            let t = AlgebraType::from_lift(parse_element(&ring, &delta)?, &parse_element(&ring, &pitilde)?)?;
            json!({"valid": is_valid_triple(&t)?})
        }
        Command::Form2ideal { delta, pitilde, form } => {
            let delta = parse_int(&delta)?;
            let order = match pitilde {
                Some(p) => QuadraticOrder::new(delta, parse_int(&p)?)?,
                None => QuadraticOrder::from_delta(delta)?,
            };
            form_to_ideal(&ctx.form(&z, form)?, &order)?.to_json()
        }
        Command::Ideal2form { ideal } => {
            reduce_posdef(&ideal_to_form(&OrderIdeal::from_json(&ctx.document(ideal)?)?)?)?.coeffs_json()
        }
        Command::GlueCheck { data } => {
            let (cover, cocycle, data) = parse_glue_input(&ctx.document(data)?)?;
            let report = verification_report(&cover, &cocycle, &data)?;
            let code = if report.iter().all(|c| c.ok) { 0 } else { 2 };
            let v = serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?;
            return Ok((code, format!("{v}\n")));
        }
        Command::Table { min, max } => {
            let rows = emit_table(min, max)?;
            return Ok(match cli.format {
                Format::Csv => (0, table_csv(&rows)?),
                Format::Json => (0, format!("{}\n", table_json(&rows))),
            });
        }
    };
    Ok((0, format!("{out}\n")))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => 1,
        _ => 2,
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code with the text for standard output and standard error.
pub fn run<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (2, String::new(), text)
            } else {
                (0, text, String::new())
            };
        }
    };
    match execute(cli) {
        Ok((code, out)) => (code, out, String::new()),
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> String {
        let (code, out, err) = run(std::iter::once("quadalg").chain(args.iter().copied()));
        assert_eq!(code, 0, "stderr: {err}");
        out
    }

    #[test]
    fn documented_examples() {
        assert_eq!(ok(&["classgroup", "--delta", "-44"]), "{\"h\":3,\"reps\":[[1,0,11],[3,2,4],[3,-2,4]]}\n");
        assert_eq!(ok(&["compose", "--delta", "-44", "[3,2,4]", "[3,2,4]"]), "[3,-2,4]\n");
        assert_eq!(
            ok(&["iso", "--ring", "zsqrt8", "--alg1", "r=0,s=-6", "--alg2", "r=w,s=-4"]),
            "{\"isomorphic\":false}\n"
        );
    }

    #[test]
    fn table_examples() {
        let rows = emit_table(-44, -44).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].h, rows[0].picmod), (3, 2));
        let rows = emit_table(-4, -3).unwrap();
        assert_eq!(rows.iter().map(|r| r.h).collect::<Vec<_>>(), vec![1, 1]);
        assert!(emit_table(-1, -1).unwrap().is_empty());
        assert!(matches!(emit_table(-3, -4), Err(Error::InvalidRange(_))));
        assert!(matches!(emit_table(-3, 0), Err(Error::InvalidRange(_))));
        assert_eq!(
            ok(&["table", "--min", "-44", "--max", "-44", "--format", "csv"]),
            "delta,pitilde,h,picmod,reps\n-44,0,3,2,\"[1,0,11] [3,2,4] [3,-2,4]\"\n"
        );
        assert_eq!(ok(&["table", "--min", "-1", "--max", "-1", "--format", "csv"]), "delta,pitilde,h,picmod,reps\n");
    }

    #[test]
    fn exit_codes() {
        let (code, out, err) = run(["quadalg", "table", "--min", "-3", "--max", "-4"]);
        assert_eq!((code, out.is_empty()), (2, true));
        assert!(err.contains("error"));
        assert_eq!(run(["quadalg", "frobnicate"]).0, 2);
        assert_eq!(run(["quadalg", "classgroup", "--delta", "-5"]).0, 2);
        assert_eq!(run(["quadalg", "classgroup", "--delta", "-44", "--format", "csv"]).0, 2);
    }
}
