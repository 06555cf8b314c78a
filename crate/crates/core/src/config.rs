//! Flat key=value configuration files.
//!
//! Two file kinds share the format: module descriptors (`p=3`, `e=1`,
//! `m=2`, `mode=ratfunc`, `phi_t = t*T + T^3`, optional `modulus`) and
//! experiment files (`module = ...`, `gamma = [(1, g)]`, `X = ["y - g*x"]`,
//! `B = 6`, `nmax = 8`, optional `a`, `decomposition`, `places`).
//!
//! Values are scalars or one level of list nesting `[...]`; list items
//! split on top-level commas only, so tuples and quoted strings pass
//! through intact.  `#` starts a comment outside quotes.  Structural
//! problems are reported as [`Error::Config`] with the file line.

use std::sync::Arc;

use crate::basefield::{FFElem, FieldElement, FieldSpec, Mode, Place, RatFunc};
use crate::drinfeld::{DrinfeldModule, FqPoly};
use crate::error::Error;
use crate::mordell::{CosetDecomposition, CosetPart, Variety};
use crate::ore::OrePoly;
use crate::parse::{parse_element, parse_fq_poly, parse_mpoly, parse_ore, parse_point};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Value {
    Scalar(String),
    List(Vec<String>),
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: Value,
    line: usize,
}

fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Split on `sep` at paren depth 0 outside quotes.
fn split_top_level(s: &str, sep: char, line: usize) -> crate::Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut in_quote = false;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '"' => {
                in_quote = !in_quote;
                cur.push(c);
            }
            '(' | '[' if !in_quote => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' if !in_quote => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Config(format!(
                        "line {line}: unbalanced closing bracket"
                    )));
                }
                cur.push(c);
            }
            c if c == sep && depth == 0 && !in_quote => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(c),
        }
    }
    if in_quote {
        return Err(Error::Config(format!("line {line}: unterminated quote")));
    }
    if depth != 0 {
        return Err(Error::Config(format!("line {line}: unbalanced brackets")));
    }
    out.push(cur.trim().to_string());
    Ok(out)
}

fn unquote(s: &str, line: usize) -> crate::Result<String> {
    if let Some(rest) = s.strip_prefix('"') {
        let Some(inner) = rest.strip_suffix('"') else {
            return Err(Error::Config(format!("line {line}: unterminated quote")));
        };
        if inner.contains('"') {
            return Err(Error::Config(format!(
                "line {line}: quotes may not nest inside a quoted value"
            )));
        }
        Ok(inner.to_string())
    } else {
        Ok(s.to_string())
    }
}

fn parse_entries(text: &str) -> crate::Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = strip_comment(raw).trim();
        if s.is_empty() {
            continue;
        }
        let Some((key, value)) = s.split_once('=') else {
            return Err(Error::Config(format!(
                "line {line}: expected `key = value`"
            )));
        };
        let key = key.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Config(format!("line {line}: invalid key `{key}`")));
        }
        if out.iter().any(|e| e.key == key) {
            return Err(Error::Config(format!("line {line}: duplicate key `{key}`")));
        }
        let value = value.trim();
        let value = if let Some(inner) = value.strip_prefix('[') {
            let Some(inner) = inner.strip_suffix(']') else {
                return Err(Error::Config(format!(
                    "line {line}: list value must close with `]`"
                )));
            };
            let items = if inner.trim().is_empty() {
                Vec::new()
            } else {
                split_top_level(inner, ',', line)?
                    .into_iter()
                    .map(|item| unquote(&item, line))
                    .collect::<crate::Result<Vec<_>>>()?
            };
            Value::List(items)
        } else {
            Value::Scalar(unquote(value, line)?)
        };
        out.push(Entry {
            key: key.to_string(),
            value,
            line,
        });
    }
    Ok(out)
}

fn take<'a>(entries: &'a [Entry], key: &str) -> Option<&'a Entry> {
    entries.iter().find(|e| e.key == key)
}

fn scalar<'a>(e: &'a Entry) -> crate::Result<&'a str> {
    match &e.value {
        Value::Scalar(s) => Ok(s),
        Value::List(_) => Err(Error::Config(format!(
            "line {}: `{}` must be a scalar, not a list",
            e.line, e.key
        ))),
    }
}

fn list<'a>(e: &'a Entry) -> crate::Result<&'a [String]> {
    match &e.value {
        Value::List(v) => Ok(v),
        Value::Scalar(_) => Err(Error::Config(format!(
            "line {}: `{}` must be a list `[...]`",
            e.line, e.key
        ))),
    }
}

fn required<'a>(entries: &'a [Entry], key: &str, what: &str) -> crate::Result<&'a Entry> {
    take(entries, key)
        .ok_or_else(|| Error::Config(format!("{what} is missing the required key `{key}`")))
}

fn int_value<T: std::str::FromStr>(e: &Entry) -> crate::Result<T> {
    scalar(e)?.parse::<T>().map_err(|_| {
        Error::Config(format!(
            "line {}: `{}` must be an integer, found `{}`",
            e.line,
            e.key,
            scalar(e).unwrap_or_default()
        ))
    })
}

/// Rewrap a sub-parser error with the file line and the key it came from.
fn anchor(e: Error, key: &str, line: usize) -> Error {
    Error::Config(format!("line {line}: in `{key}`: {e}"))
}

// ---------------------------------------------------------------------------
// module descriptors
// ---------------------------------------------------------------------------

/// A parsed module descriptor file; the φ_t expression stays textual until
/// a host field is fixed by [`ModuleDescriptor::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDescriptor {
    pub p: u64,
    pub e: u32,
    pub m: u32,
    pub mode: Mode,
    /// Optional F_p coordinates of the modulus, ascending.
    pub modulus: Option<Vec<u64>>,
    pub phi_t_src: String,
}

impl ModuleDescriptor {
    pub fn parse(text: &str) -> crate::Result<Self> {
        let entries = parse_entries(text)?;
        for e in &entries {
            if !matches!(e.key.as_str(), "p" | "e" | "m" | "mode" | "modulus" | "phi_t") {
                return Err(Error::Config(format!(
                    "line {}: unknown module descriptor key `{}`",
                    e.line, e.key
                )));
            }
        }
        let mode_entry = required(&entries, "mode", "module descriptor")?;
        let mode = match scalar(mode_entry)? {
            "ratfunc" => Mode::RatFunc,
            "finite" => Mode::Finite,
            other => {
                return Err(Error::Config(format!(
                    "line {}: mode must be `ratfunc` or `finite`, found `{other}`",
                    mode_entry.line
                )))
            }
        };
        let modulus = match take(&entries, "modulus") {
            None => None,
            Some(e) => Some(
                list(e)?
                    .iter()
                    .map(|s| {
                        s.trim().parse::<u64>().map_err(|_| {
                            Error::Config(format!(
                                "line {}: modulus coefficients must be integers",
                                e.line
                            ))
                        })
                    })
                    .collect::<crate::Result<Vec<_>>>()?,
            ),
        };
        Ok(ModuleDescriptor {
            p: int_value(required(&entries, "p", "module descriptor")?)?,
            e: int_value(required(&entries, "e", "module descriptor")?)?,
            m: int_value(required(&entries, "m", "module descriptor")?)?,
            mode,
            modulus,
            phi_t_src: scalar(required(&entries, "phi_t", "module descriptor")?)?.to_string(),
        })
    }

    pub fn spec(&self) -> crate::Result<Arc<FieldSpec>> {
        match &self.modulus {
            Some(coeffs) => FieldSpec::with_modulus(self.p, self.e, self.m, self.mode, coeffs.clone()),
            None => FieldSpec::new(self.p, self.e, self.m, self.mode),
        }
    }

    /// Build the Drinfeld module over the element type matching `mode`.
    pub fn build<C: FieldElement>(&self) -> crate::Result<DrinfeldModule<C>> {
        if C::mode() != self.mode {
            return Err(Error::ModeMismatch {
                required: self.mode.name(),
                actual: C::mode().name(),
            });
        }
        let spec = self.spec()?;
        let phi_t: OrePoly<C> = parse_ore(&spec, &self.phi_t_src)?;
        DrinfeldModule::new(phi_t)
    }

    /// Canonical echo of the descriptor with φ_t re-rendered from its
    /// parsed form.
    pub fn canonical(&self) -> crate::Result<String> {
        let spec = self.spec()?;
        let phi_t = match self.mode {
            Mode::RatFunc => parse_ore::<RatFunc>(&spec, &self.phi_t_src)?.to_string(),
            Mode::Finite => parse_ore::<FFElem>(&spec, &self.phi_t_src)?.to_string(),
        };
        let mut out = format!(
            "p = {}\ne = {}\nm = {}\nmode = {}\n",
            self.p,
            self.e,
            self.m,
            self.mode.name()
        );
        if let Some(coeffs) = &self.modulus {
            let items: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("modulus = [{}]\n", items.join(", ")));
        }
        out.push_str(&format!("phi_t = {phi_t}\n"));
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// experiment files
// ---------------------------------------------------------------------------

/// A parsed experiment file.  Expression fields stay textual; the typed
/// builders resolve them once the module's host field is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Experiment {
    /// Module descriptor reference: a preset name or a file path.
    pub module: String,
    pub gamma_src: Vec<String>,
    pub x_src: Vec<String>,
    pub b: u32,
    pub nmax: u32,
    pub a_src: Option<String>,
    pub decomposition_src: Option<Vec<String>>,
    pub places_src: Option<Vec<String>>,
}

impl Experiment {
    pub fn parse(text: &str) -> crate::Result<Self> {
        let entries = parse_entries(text)?;
        for e in &entries {
            if !matches!(
                e.key.as_str(),
                "module" | "gamma" | "X" | "B" | "nmax" | "a" | "decomposition" | "places"
            ) {
                return Err(Error::Config(format!(
                    "line {}: unknown experiment key `{}`",
                    e.line, e.key
                )));
            }
        }
        Ok(Experiment {
            module: scalar(required(&entries, "module", "experiment file")?)?.to_string(),
            gamma_src: list(required(&entries, "gamma", "experiment file")?)?.to_vec(),
            x_src: match take(&entries, "X") {
                Some(e) => list(e)?.to_vec(),
                None => Vec::new(),
            },
            b: int_value(required(&entries, "B", "experiment file")?)?,
            nmax: match take(&entries, "nmax") {
                Some(e) => int_value(e)?,
                None => 8,
            },
            a_src: match take(&entries, "a") {
                Some(e) => Some(scalar(e)?.to_string()),
                None => None,
            },
            decomposition_src: match take(&entries, "decomposition") {
                Some(e) => Some(list(e)?.to_vec()),
                None => None,
            },
            places_src: match take(&entries, "places") {
                Some(e) => Some(list(e)?.to_vec()),
                None => None,
            },
        })
    }

    /// Generator tuples; all must share one arity, which fixes the
    /// ambient dimension.
    pub fn gamma_points<C: FieldElement>(
        &self,
        spec: &Arc<FieldSpec>,
    ) -> crate::Result<Vec<Vec<C>>> {
        if self.gamma_src.is_empty() {
            return Err(Error::Config(
                "experiment needs at least one generator in `gamma` to fix the ambient dimension"
                    .into(),
            ));
        }
        let mut out = Vec::new();
        for src in &self.gamma_src {
            let pt = parse_point::<C>(spec, src).map_err(|e| anchor(e, "gamma", 0))?;
            if let Some(first) = out.first() {
                let first: &Vec<C> = first;
                if first.len() != pt.len() {
                    return Err(Error::Config(format!(
                        "generators of mixed arity in `gamma`: {} and {}",
                        first.len(),
                        pt.len()
                    )));
                }
            }
            out.push(pt);
        }
        Ok(out)
    }

    /// The variety cut out by the `X` equations in `nvars` variables;
    /// no equations denote the whole space.
    pub fn variety<C: FieldElement>(
        &self,
        spec: &Arc<FieldSpec>,
        nvars: usize,
    ) -> crate::Result<Variety<C>> {
        let mut eqs = Vec::new();
        for src in &self.x_src {
            eqs.push(parse_mpoly::<C>(spec, nvars, src).map_err(|e| anchor(e, "X", 0))?);
        }
        Variety::new(spec, nvars, eqs)
    }

    /// The candidate coset decomposition, when one is declared.  Each part
    /// reads `translate | gen; gen; ... | n0` (the middle field may be
    /// empty).
    pub fn decomposition<C: FieldElement>(
        &self,
        spec: &Arc<FieldSpec>,
    ) -> crate::Result<Option<CosetDecomposition<C>>> {
        let Some(parts_src) = &self.decomposition_src else {
            return Ok(None);
        };
        let mut parts = Vec::new();
        for src in parts_src {
            let fields = split_top_level(src, '|', 0)?;
            if fields.len() != 3 {
                return Err(Error::Config(format!(
                    "decomposition part must read `translate | generators | n0`, found `{src}`"
                )));
            }
            let translate =
                parse_point::<C>(spec, &fields[0]).map_err(|e| anchor(e, "decomposition", 0))?;
            let gens = if fields[1].trim().is_empty() {
                Vec::new()
            } else {
                split_top_level(&fields[1], ';', 0)?
                    .iter()
                    .map(|s| parse_point::<C>(spec, s))
                    .collect::<crate::Result<Vec<_>>>()
                    .map_err(|e| anchor(e, "decomposition", 0))?
            };
            let period: u32 = fields[2].trim().parse().map_err(|_| {
                Error::Config(format!(
                    "decomposition period must be an integer, found `{}`",
                    fields[2].trim()
                ))
            })?;
            parts.push(CosetPart::new(translate, gens, period)?);
        }
        Ok(Some(CosetDecomposition::new(parts)))
    }

    /// The places to scan: finite-part centers.
    pub fn places(&self, spec: &Arc<FieldSpec>) -> crate::Result<Option<Vec<Place>>> {
        let Some(src) = &self.places_src else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for s in src {
            let c: FFElem = parse_element(spec, s).map_err(|e| anchor(e, "places", 0))?;
            out.push(Place::new(c));
        }
        Ok(Some(out))
    }

    /// The optional F_q[t] operand `a`.
    pub fn a_poly(&self, spec: &Arc<FieldSpec>) -> crate::Result<Option<FqPoly>> {
        match &self.a_src {
            None => Ok(None),
            Some(src) => Ok(Some(
                parse_fq_poly(spec, src).map_err(|e| anchor(e, "a", 0))?,
            )),
        }
    }
}
