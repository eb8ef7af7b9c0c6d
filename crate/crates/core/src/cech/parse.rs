use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::bundle::VectorBundle;
use super::scheme::{ChartSpec, CoveredScheme};
use crate::error::{Error, Result};
use crate::rings::{is_prime, LaurentPoly, Matrix, Scalar};

/// Parse a Laurent polynomial such as `3*z^-2 - 1/2*x*y + (1+z)^2`.
///
/// Variables are looked up in `names`; juxtaposition `3z` multiplies, and
/// exponents may be written `x^-1` or `x^(-1)`.
pub fn parse_laurent<S: Scalar>(
    src: &str,
    names: &[String],
    params: &S::Params,
) -> Result<LaurentPoly<S>> {
    let mut p = Parser {
        src,
        chars: src.char_indices().collect(),
        pos: 0,
        names,
        params,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e + LaurentPoly::zero_in(names.len()))
}

struct Parser<'a, S: Scalar> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    names: &'a [String],
    params: &'a S::Params,
}

impl<S: Scalar> Parser<'_, S> {
    fn error(&self, message: &str) -> Error {
        let at = self.chars.get(self.pos).map_or(self.src.len(), |c| c.0);
        Error::Parse {
            location: format!("{:?} at byte {at}", self.src),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn n(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<LaurentPoly<S>> {
        let mut acc = LaurentPoly::zero_in(self.n());
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                break;
            };
            let t = self.term()?;
            acc = if neg { acc - t } else { acc + t };
            first = false;
            if !matches!(self.peek(), Some('+') | Some('-')) {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly<S>> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Some(c) if c.is_alphabetic() || c == '(' => acc = acc * self.factor()?,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        s.parse().ok()
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let v = self
            .digits()
            .ok_or_else(|| self.error("expected an integer exponent"))?;
        if paren && !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        let v = i64::try_from(&v).map_err(|_| self.error("exponent too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self, base: LaurentPoly<S>) -> Result<LaurentPoly<S>> {
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        base.pow_i(e)
            .ok_or_else(|| self.error("negative power of a non-unit"))
    }

    fn factor(&mut self) -> Result<LaurentPoly<S>> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                self.power(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().expect("digit");
                let mut c = S::from_bigint(self.params, &num);
                if self.eat('/') {
                    let den = self
                        .digits()
                        .ok_or_else(|| self.error("expected a denominator"))?;
                    let inv = S::from_bigint(self.params, &den)
                        .try_inverse()
                        .ok_or_else(|| self.error("denominator is not invertible in the base"))?;
                    c = c * inv;
                }
                self.power(LaurentPoly::constant(self.n(), c))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.1.is_alphanumeric() || c.1 == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                let i = self.names.iter().position(|n| *n == name).ok_or_else(|| {
                    self.pos = start;
                    self.error(&format!("unknown variable {name:?}"))
                })?;
                self.power(LaurentPoly::var(self.params, self.n(), i))
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

/// The base ring of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BaseRepr", into = "String")]
pub enum Base {
    Z,
    Q,
    Fp(u64),
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "Z" | "ZZ" => return Ok(Base::Z),
            "Q" | "QQ" => return Ok(Base::Q),
            _ => {}
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix("GF"))
            .or_else(|| t.strip_prefix('F'))
            .map(|d| d.trim_matches(|c| c == '(' || c == ')'));
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) if is_prime(p) => Ok(Base::Fp(p)),
            Some(p) => Err(Error::InvalidArgument(format!("{p} is not prime"))),
            None => Err(Error::Parse {
                location: format!("base {s:?}"),
                message: "expected Z, Q or F<p>".into(),
            }),
        }
    }
}

/// `"Z"`, `"Q"`, `"F5"` or `{"Fp": 5}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum BaseRepr {
    Name(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

impl TryFrom<BaseRepr> for Base {
    type Error = Error;

    fn try_from(r: BaseRepr) -> Result<Self> {
        match r {
            BaseRepr::Name(s) => s.parse(),
            BaseRepr::Prime { fp } if is_prime(fp) => Ok(Base::Fp(fp)),
            BaseRepr::Prime { fp } => Err(Error::InvalidArgument(format!("{fp} is not prime"))),
        }
    }
}

impl From<Base> for String {
    fn from(b: Base) -> String {
        b.to_string()
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Z => write!(f, "Z"),
            Base::Q => write!(f, "Q"),
            Base::Fp(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartDoc {
    pub vars: Vec<String>,
    #[serde(default)]
    pub inverted: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingDoc {
    pub from: usize,
    pub to: usize,
    /// Chart-`from` coordinates as monomials in chart-`to` coordinates.
    pub images: Vec<String>,
}

/// A built-in name (`P1`, `P2`, `Pn`, `A1`) or explicit charts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemeSpec {
    Named(String),
    Custom {
        #[serde(default)]
        name: Option<String>,
        charts: Vec<ChartDoc>,
        #[serde(default)]
        gluings: Vec<GluingDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: usize,
    pub to: usize,
    /// Entries in chart-`from` coordinates.
    pub matrix: Vec<Vec<String>>,
}

/// `"O(d)"` on projective space or explicit transitions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BundleSpec {
    Shorthand(String),
    Explicit {
        rank: usize,
        transitions: Vec<TransitionDoc>,
    },
}

/// Input document: `{ "base", "scheme", "bundles" }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub base: Base,
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub bundles: BTreeMap<String, BundleSpec>,
}

impl Document {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn build_scheme<S: Scalar>(&self, params: S::Params) -> Result<Arc<CoveredScheme<S>>> {
        build_scheme(&self.scheme, params).map(Arc::new)
    }

    pub fn build_bundle<S: Scalar>(
        &self,
        scheme: &Arc<CoveredScheme<S>>,
        name: &str,
    ) -> Result<VectorBundle<S>> {
        let spec = self
            .bundles
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no bundle named {name:?}")))?;
        build_bundle(spec, scheme)
    }
}

fn build_scheme<S: Scalar>(spec: &SchemeSpec, params: S::Params) -> Result<CoveredScheme<S>> {
    match spec {
        SchemeSpec::Named(n) => {
            if n == "A1" {
                return Ok(CoveredScheme::affine_line(params));
            }
            let dim = n
                .strip_prefix('P')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| Error::InvalidScheme(format!("unknown scheme {n:?}")))?;
            CoveredScheme::projective(params, dim)
        }
        SchemeSpec::Custom {
            name,
            charts,
            gluings,
        } => {
            let specs: Vec<ChartSpec> = charts
                .iter()
                .map(|c| {
                    for v in &c.inverted {
                        if !c.vars.contains(v) {
                            return Err(Error::InvalidScheme(format!("inverted {v:?} is not a chart variable")));
                        }
                    }
                    Ok(ChartSpec {
                        names: c.vars.clone(),
                        inverted: c.vars.iter().map(|v| c.inverted.contains(v)).collect(),
                    })
                })
                .collect::<Result<_>>()?;
            let mut glue = Vec::new();
            for g in gluings {
                let target = specs.get(g.to).ok_or_else(|| {
                    Error::InvalidScheme(format!("gluing to missing chart {}", g.to))
                })?;
                let rows = g
                    .images
                    .iter()
                    .map(|s| {
                        let f: LaurentPoly<S> = parse_laurent(s, &target.names, &params)?;
                        match f.as_monomial() {
                            Some((e, c)) if *c == S::from_i64(&params, 1) => Ok(e.clone()),
                            _ => Err(Error::InvalidScheme(format!(
                                "gluing image {s:?} is not a monomial with coefficient 1"
                            ))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                glue.push((g.from, g.to, rows));
            }
            CoveredScheme::custom(name.clone().unwrap_or_else(|| "custom".into()), params, specs, glue)
        }
    }
}

fn build_bundle<S: Scalar>(spec: &BundleSpec, scheme: &Arc<CoveredScheme<S>>) -> Result<VectorBundle<S>> {
    match spec {
        BundleSpec::Shorthand(s) => {
            let d = s
                .trim()
                .strip_prefix("O(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|d| d.trim().parse::<i64>().ok())
                .ok_or_else(|| Error::Parse {
                    location: format!("bundle {s:?}"),
                    message: "expected O(d) or explicit transitions".into(),
                })?;
            VectorBundle::line_bundle_o(scheme.clone(), d)
        }
        BundleSpec::Explicit { rank, transitions } => {
            let mut trans = BTreeMap::new();
            for t in transitions {
                if t.from >= scheme.num_charts() || t.to >= scheme.num_charts() {
                    return Err(Error::InvalidBundle(format!("transition ({},{}) names a missing chart", t.from, t.to)));
                }
                let names = scheme.chart_names(t.from);
                let rows = t
                    .matrix
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|s| parse_laurent(s, names, scheme.params()))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if rows.len() != *rank || rows.iter().any(|r| r.len() != *rank) {
                    return Err(Error::InvalidBundle(format!(
                        "transition ({},{}) is not {rank}x{rank}",
                        t.from, t.to
                    )));
                }
                trans.insert((t.from, t.to), Matrix::from_rows(rows));
            }
            VectorBundle::from_first_chart(scheme.clone(), *rank, trans)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Zn;
    use num_rational::BigRational;

    type Q = BigRational;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_laurent_expressions() {
        let n = names(&["x", "y"]);
        let f: LaurentPoly<Q> = parse_laurent("3*x^-2 - 1/2*x*y + 2y", &n, &()).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(
            f.coefficient(&[1, 1]),
            Some(&Q::new(BigInt::from(-1), BigInt::from(2)))
        );
        let g: LaurentPoly<Q> = parse_laurent("(x + 1)^2", &n, &()).unwrap();
        assert_eq!(g, parse_laurent("x^2 + 2*x + 1", &n, &()).unwrap());
        let h: LaurentPoly<Q> = parse_laurent("x^(-1) * x", &n, &()).unwrap();
        assert_eq!(h, parse_laurent("1", &n, &()).unwrap());
        let m: LaurentPoly<Zn> = parse_laurent("1/2*x", &n, &5).unwrap();
        assert_eq!(m.coefficient(&[1, 0]), Some(&Zn::new(3, 5)));
    }

    #[test]
    fn parse_errors_carry_locations() {
        let n = names(&["x"]);
        for bad in ["x +", "q", "x^", "(x", "1/2"] {
            let r: Result<LaurentPoly<BigInt>> = parse_laurent(bad, &n, &());
            assert!(matches!(r, Err(Error::Parse { .. })), "{bad}");
        }
        let r: Result<LaurentPoly<Q>> = parse_laurent("(1 + x)^-1", &n, &());
        assert!(matches!(r, Err(Error::Parse { .. })));
    }

    #[test]
    fn base_names() {
        assert_eq!("Q".parse::<Base>().unwrap(), Base::Q);
        assert_eq!("F5".parse::<Base>().unwrap(), Base::Fp(5));
        assert_eq!("F_7".parse::<Base>().unwrap(), Base::Fp(7));
        assert_eq!("Fp:5".parse::<Base>().unwrap(), Base::Fp(5));
        assert!(matches!("F6".parse::<Base>(), Err(Error::InvalidArgument(_))));
        assert!("R".parse::<Base>().is_err());
    }

    #[test]
    fn document_round_trip() {
        let json = r#"{
            "base": "Q",
            "scheme": {"charts": [{"vars": ["z"]}, {"vars": ["w"]}],
                       "gluings": [{"from": 0, "to": 1, "images": ["w^-1"]}]},
            "bundles": {
                "L": {"rank": 1, "transitions": [{"from": 0, "to": 1, "matrix": [["z^-3"]]}]},
                "M": "O(2)"
            }
        }"#;
        let doc = Document::from_json(json).unwrap();
        let x = doc.build_scheme::<Q>(()).unwrap();
        let l = doc.build_bundle(&x, "L").unwrap();
        assert_eq!(l.transition(0, 1, 1)[(0, 0)].as_monomial().unwrap().0, &vec![3]);
        // the custom line is not recognised as projective space
        assert!(doc.build_bundle(&x, "M").is_err());
        let again: Document = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(again, doc);

        let p1 = Document::from_json(r#"{"base": "F3", "scheme": "P1", "bundles": {"M": "O(2)"}}"#).unwrap();
        assert_eq!(p1.base, Base::Fp(3));
        let x = p1.build_scheme::<Zn>(3).unwrap();
        assert_eq!(p1.build_bundle(&x, "M").unwrap().rank(), 1);
        assert!(matches!(Document::from_json("{"), Err(Error::Parse { .. })));
    }
}
