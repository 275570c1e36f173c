//! Line-oriented text format for symbols.
//!
//! ```text
//! # comment
//! square   = blaschke 1,0 0,0 0,0
//! psi      = moebius 0.5,0
//! shifted  = affine 0.5 0.5,0
//! composed = moebius 0.5,0 | poly 0,0 0,0 1,0
//! ```
//!
//! Each line holds an optional `name =` prefix and one or more records joined
//! by `|`, read as composition (`outer | inner`, right-associative). Records:
//!
//! * `identity`
//! * `blaschke ROT ZERO...`
//! * `poly C0 C1 ...` (ascending coefficients)
//! * `moebius A [ROT]`
//! * `affine R S` (`R` real)
//!
//! Complex values are written `re,im`; a bare real is accepted too.

use std::fmt;

use num_complex::Complex;
use thiserror::Error;

use super::{Symbol, SymbolSpec};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct NamedSymbol<T> {
    pub name: String,
    pub symbol: Symbol<T>,
}

fn fmt_c<T: Real>(f: &mut fmt::Formatter<'_>, z: &Complex<T>) -> fmt::Result {
    write!(f, "{},{}", z.re, z.im)
}

impl<T: Real> fmt::Display for SymbolSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FiniteBlaschke { zeros, rotation } => {
                write!(f, "blaschke ")?;
                fmt_c(f, rotation)?;
                for z in zeros {
                    write!(f, " ")?;
                    fmt_c(f, z)?;
                }
                Ok(())
            }
            Self::PolynomialMap { coefficients } => {
                let is_identity = coefficients.len() == 2
                    && coefficients[0] == Complex::new(T::zero(), T::zero())
                    && coefficients[1] == Complex::new(T::one(), T::zero());
                if is_identity {
                    return write!(f, "identity");
                }
                write!(f, "poly")?;
                for c in coefficients {
                    write!(f, " ")?;
                    fmt_c(f, c)?;
                }
                Ok(())
            }
            Self::Moebius { a, rotation } => {
                write!(f, "moebius ")?;
                fmt_c(f, a)?;
                write!(f, " ")?;
                fmt_c(f, rotation)
            }
            Self::AffineContraction { scale, offset } => {
                write!(f, "affine {scale} ")?;
                fmt_c(f, offset)
            }
            Self::Composition { outer, inner } => {
                if matches!(**outer, Self::Composition { .. }) {
                    // composition is associative; print the flattened chain
                    let mut parts = Vec::new();
                    flatten(self, &mut parts);
                    let strs: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                    return write!(f, "{}", strs.join(" | "));
                }
                write!(f, "{outer} | {inner}")
            }
        }
    }
}

fn flatten<'a, T>(spec: &'a SymbolSpec<T>, out: &mut Vec<&'a SymbolSpec<T>>) {
    match spec {
        SymbolSpec::Composition { outer, inner } => {
            flatten(outer, out);
            flatten(inner, out);
        }
        leaf => out.push(leaf),
    }
}

impl<T: Real> fmt::Display for Symbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec().fmt(f)
    }
}

fn real<T: Real>(tok: &str) -> Result<T, String> {
    let x: f64 = tok.trim().parse().map_err(|_| format!("`{tok}` is not a number"))?;
    if !x.is_finite() {
        return Err(format!("`{tok}` is not finite"));
    }
    Ok(T::lit(x))
}

fn complex<T: Real>(tok: &str) -> Result<Complex<T>, String> {
    match tok.split_once(',') {
        Some((re, im)) => Ok(Complex::new(real(re)?, real(im)?)),
        None => Ok(Complex::new(real(tok)?, T::zero())),
    }
}

fn record<T: Real>(text: &str) -> Result<SymbolSpec<T>, String> {
    let mut toks = text.split_whitespace();
    let keyword = toks.next().ok_or("empty record")?;
    let args: Vec<&str> = toks.collect();
    let complexes = |xs: &[&str]| xs.iter().map(|t| complex::<T>(t)).collect::<Result<Vec<_>, _>>();
    let arity = |lo: usize, hi: usize| {
        if args.len() < lo || args.len() > hi {
            Err(format!("`{keyword}` takes {lo}..={hi} arguments, got {}", args.len()))
        } else {
            Ok(())
        }
    };
    match keyword {
        "identity" => {
            arity(0, 0)?;
            Ok(SymbolSpec::PolynomialMap {
                coefficients: vec![Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())],
            })
        }
        "blaschke" => {
            if args.len() < 2 {
                return Err("`blaschke` needs a rotation and at least one zero".into());
            }
            Ok(SymbolSpec::FiniteBlaschke {
                rotation: complex(args[0])?,
                zeros: complexes(&args[1..])?,
            })
        }
        "poly" => {
            if args.is_empty() {
                return Err("`poly` needs coefficients".into());
            }
            Ok(SymbolSpec::PolynomialMap {
                coefficients: complexes(&args)?,
            })
        }
        "moebius" => {
            arity(1, 2)?;
            Ok(SymbolSpec::Moebius {
                a: complex(args[0])?,
                rotation: match args.get(1) {
                    Some(r) => complex(r)?,
                    None => Complex::new(T::one(), T::zero()),
                },
            })
        }
        "affine" => {
            arity(2, 2)?;
            Ok(SymbolSpec::AffineContraction {
                scale: real(args[0])?,
                offset: complex(args[1])?,
            })
        }
        other => Err(format!("unknown symbol kind `{other}`")),
    }
}

fn spec_from_line<T: Real>(text: &str) -> Result<SymbolSpec<T>, String> {
    let mut parts = text
        .split('|')
        .map(record::<T>)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .rev();
    let innermost = parts.next().ok_or("empty symbol")?;
    Ok(parts.fold(innermost, |inner, outer| SymbolSpec::Composition {
        outer: Box::new(outer),
        inner: Box::new(inner),
    }))
}

fn split_name(text: &str) -> Result<(Option<&str>, &str), String> {
    match text.split_once('=') {
        Some((name, rest)) => {
            let name = name.trim();
            let valid = !name.is_empty()
                && name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
            if !valid {
                return Err(format!("invalid symbol name `{name}`"));
            }
            Ok((Some(name), rest))
        }
        None => Ok((None, text)),
    }
}

/// Parses a single symbol expression (no name, no comment).
pub fn parse_symbol<T: Real>(text: &str) -> Result<Symbol<T>, ParseError> {
    let err = |message: String| ParseError { line: 1, message };
    let spec = spec_from_line(text.trim()).map_err(err)?;
    Symbol::new(spec).map_err(|e| err(e.to_string()))
}

/// Parses a symbol file: one symbol per line, blank lines and `#` comments
/// ignored. Unnamed symbols are named after their expression.
pub fn parse_symbol_list<T: Real>(text: &str) -> Result<Vec<NamedSymbol<T>>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ParseError { line: idx + 1, message };
        let (name, body) = split_name(line).map_err(err)?;
        let spec = spec_from_line(body.trim()).map_err(err)?;
        let symbol = Symbol::new(spec).map_err(|e| err(e.to_string()))?;
        out.push(NamedSymbol {
            name: name.map_or_else(|| symbol.to_string(), str::to_owned),
            symbol,
        });
    }
    Ok(out)
}
