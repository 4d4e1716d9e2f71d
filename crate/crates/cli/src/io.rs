//! JSON input and output shapes.
//!
//! Polynomials are read as
//! `{"nvars": 2, "terms": [{"exponent": [2, 0], "coeff": 1}, ...]}` or, for binary forms,
//! `{"binary": [c0, ..., c2d]}` with `c0` the coefficient of `s^2d`. Coefficients are JSON
//! numbers (float mode) or strings `"p/q"` (exact mode); the two cannot be mixed.

use std::path::Path;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};
use sosgram::gram::SymMatrix;
use sosgram::poly::{format_rational, parse_rational, AnyPolynomial, BinaryForm, Coeff, Monomial, Polynomial};
use sosgram::polytope::LatticePolytope;

use crate::CliError;

pub const ORDER: &str = "grlex";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermInput {
    exponent: Vec<u32>,
    coeff: Value,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolynomialInput {
    Sparse { nvars: usize, terms: Vec<TermInput> },
    Binary { binary: Vec<Value> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeInput {
    points: Vec<Vec<i64>>,
}

enum Scalar {
    Float(f64),
    Exact(BigRational),
}

fn scalar(v: &Value) -> Result<Scalar, CliError> {
    match v {
        Value::Number(n) => n.as_f64().map(Scalar::Float).ok_or_else(|| CliError::Input(format!("bad number {n}"))),
        Value::String(s) => {
            parse_rational(s).map(Scalar::Exact).ok_or_else(|| CliError::Input(format!("bad rational \"{s}\"")))
        }
        other => Err(CliError::Input(format!("coefficient must be a number or a \"p/q\" string, got {other}"))),
    }
}

fn build(nvars: usize, terms: Vec<(Vec<u32>, Value)>) -> Result<AnyPolynomial, CliError> {
    let parsed: Vec<(Vec<u32>, Scalar)> =
        terms.into_iter().map(|(e, c)| Ok((e, scalar(&c)?))).collect::<Result<_, CliError>>()?;
    let exact = parsed.iter().filter(|(_, c)| matches!(c, Scalar::Exact(_))).count();
    if exact != 0 && exact != parsed.len() {
        return Err(CliError::Input("mixed scalar modes: use either numbers or \"p/q\" strings".into()));
    }
    let poly = if exact > 0 {
        let terms = parsed.into_iter().map(|(e, c)| match c {
            Scalar::Exact(q) => (e, q),
            Scalar::Float(_) => unreachable!(),
        });
        AnyPolynomial::Rational(Polynomial::from_terms(nvars, terms)?)
    } else {
        let terms = parsed.into_iter().map(|(e, c)| match c {
            Scalar::Float(x) => (e, x),
            Scalar::Exact(_) => unreachable!(),
        });
        AnyPolynomial::Float(Polynomial::from_terms(nvars, terms)?)
    };
    Ok(poly)
}

pub fn parse_polynomial(text: &str) -> Result<AnyPolynomial, CliError> {
    let input: PolynomialInput = serde_json::from_str(text).map_err(|e| CliError::Input(format!("polynomial: {e}")))?;
    match input {
        PolynomialInput::Sparse { nvars, terms } => build(nvars, terms.into_iter().map(|t| (t.exponent, t.coeff)).collect()),
        PolynomialInput::Binary { binary } => {
            if binary.is_empty() {
                return Err(CliError::Input("binary form needs at least one coefficient".into()));
            }
            let deg = binary.len() as u32 - 1;
            build(2, binary.into_iter().enumerate().map(|(k, c)| (vec![deg - k as u32, k as u32], c)).collect())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_polynomial(path: &Path) -> Result<AnyPolynomial, CliError> {
    parse_polynomial(&read(path)?)
}

pub fn read_binary_form(path: &Path) -> Result<BinaryForm, CliError> {
    Ok(BinaryForm::from_polynomial(&read_polynomial(path)?.to_f64())?)
}

pub fn parse_polytope(text: &str) -> Result<LatticePolytope, CliError> {
    let input: PolytopeInput = serde_json::from_str(text).map_err(|e| CliError::Input(format!("polytope: {e}")))?;
    Ok(LatticePolytope::from_points(&input.points)?)
}

pub fn read_polytope(path: &Path) -> Result<LatticePolytope, CliError> {
    parse_polytope(&read(path)?)
}

pub trait CoeffJson {
    fn to_json(&self) -> Value;
}

impl CoeffJson for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl CoeffJson for BigRational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

impl CoeffJson for Complex64 {
    fn to_json(&self) -> Value {
        json!({"re": self.re, "im": self.im})
    }
}

pub fn polynomial<C: Coeff + CoeffJson>(p: &Polynomial<C>) -> Value {
    let terms: Vec<Value> = p.terms().map(|(m, c)| json!({"exponent": m.exps(), "coeff": c.to_json()})).collect();
    json!({"nvars": p.nvars(), "order": ORDER, "terms": terms})
}

pub fn polynomials<C: Coeff + CoeffJson>(ps: &[Polynomial<C>]) -> Value {
    Value::Array(ps.iter().map(polynomial).collect())
}

pub fn monomials(ms: &[Monomial]) -> Value {
    json!(ms.iter().map(Monomial::exps).collect::<Vec<_>>())
}

pub fn matrix<C: Coeff + CoeffJson>(a: &SymMatrix<C>) -> Value {
    Value::Array(a.rows().iter().map(|r| Value::Array(r.iter().map(CoeffJson::to_json).collect())).collect())
}
