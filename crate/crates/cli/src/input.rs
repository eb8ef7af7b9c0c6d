//! Loading schemes, bases and bundle expressions from the command line.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use detchern::cech::{Base, CoveredScheme, Document, SchemeSpec, VectorBundle};
use detchern::{Error, Result, Scalar};

/// Where the scheme comes from: a built-in name or an input document.
#[derive(Clone, Debug)]
pub struct Source {
    pub label: String,
    pub doc: Document,
}

impl Source {
    pub fn load(scheme: Option<&str>, input: Option<&Path>, base: Option<&str>) -> Result<Self> {
        let base = base.map(str::parse::<Base>).transpose()?;
        let (label, mut doc) = match (scheme, input) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidArgument("give either --scheme or --input, not both".into()))
            }
            (None, None) => return Err(Error::InvalidArgument("missing --scheme or --input".into())),
            (Some(name), None) => {
                if !is_builtin(name) {
                    return Err(Error::InvalidScheme(format!(
                        "unknown scheme {name:?}; built-ins are P1, P2, Pn and A1"
                    )));
                }
                let doc = Document {
                    base: Base::Q,
                    scheme: SchemeSpec::Named(name.to_string()),
                    bundles: BTreeMap::new(),
                };
                (name.to_string(), doc)
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                    location: path.display().to_string(),
                    message: e.to_string(),
                })?;
                let doc = Document::from_json(&text).map_err(|e| match e {
                    Error::Parse { location, message } => Error::Parse {
                        location: format!("{}: {location}", path.display()),
                        message,
                    },
                    other => other,
                })?;
                let label = match &doc.scheme {
                    SchemeSpec::Named(n) => n.clone(),
                    SchemeSpec::Custom { name, .. } => name.clone().unwrap_or_else(|| "custom".into()),
                };
                (label, doc)
            }
        };
        if let Some(b) = base {
            doc.base = b;
        }
        Ok(Source { label, doc })
    }

    pub fn base(&self) -> Base {
        self.doc.base
    }

    pub fn scheme<S: Scalar>(&self, params: S::Params) -> Result<Arc<CoveredScheme<S>>> {
        self.doc.build_scheme(params)
    }
}

fn is_builtin(name: &str) -> bool {
    name == "A1" || name.strip_prefix('P').is_some_and(|d| d.parse::<usize>().is_ok())
}

/// One summand of a bundle expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summand {
    Line(i64),
    Trivial(usize),
    Named(String),
}

/// `"O(a)+O(b)"`, `"trivial:r"` or a document bundle name, joined by `+`.
pub fn parse_bundle_expr(src: &str) -> Result<Vec<Summand>> {
    let bad = |msg: &str| Error::Parse {
        location: format!("bundle {src:?}"),
        message: msg.into(),
    };
    let mut out = Vec::new();
    for part in split_top_level(src) {
        let t = part.trim();
        if t.is_empty() {
            return Err(bad("empty summand"));
        }
        if let Some(inner) = t.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let d = inner
                .trim()
                .parse::<i64>()
                .map_err(|_| bad("expected an integer twist in O(d)"))?;
            out.push(Summand::Line(d));
        } else if let Some(r) = t.strip_prefix("trivial:") {
            let r = r.trim().parse::<usize>().map_err(|_| bad("expected trivial:<rank>"))?;
            if r == 0 {
                return Err(bad("trivial bundle of rank 0"));
            }
            out.push(Summand::Trivial(r));
        } else if t.chars().all(|c| c.is_alphanumeric() || c == '_') {
            out.push(Summand::Named(t.to_string()));
        } else {
            return Err(bad("expected O(d), trivial:r or a bundle name"));
        }
    }
    Ok(out)
}

fn split_top_level(src: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&src[start..]);
    parts
}

pub fn build_bundle<S: Scalar>(
    source: &Source,
    scheme: &Arc<CoveredScheme<S>>,
    expr: &str,
) -> Result<Arc<VectorBundle<S>>> {
    let mut acc: Option<VectorBundle<S>> = None;
    for s in parse_bundle_expr(expr)? {
        let b = match s {
            Summand::Line(d) => VectorBundle::line_bundle_o(scheme.clone(), d)?,
            Summand::Trivial(r) => VectorBundle::trivial(scheme.clone(), r)?,
            Summand::Named(n) => source.doc.build_bundle(scheme, &n)?,
        };
        acc = Some(match acc {
            None => b,
            Some(a) => a.direct_sum(&b)?,
        });
    }
    acc.map(Arc::new)
        .ok_or_else(|| Error::InvalidBundle(format!("empty bundle expression {expr:?}")))
}
