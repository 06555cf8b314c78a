//! Expression parsers for the textual syntaxes used by descriptor files
//! and the CLI: field elements, twisted polynomials, F_q[t] polynomials,
//! λ-polynomials, and multivariate variety equations.
//!
//! One tokenizer feeds all of them; every error is an [`Error::Parse`]
//! carrying the line and column of the offending token.  The grammars
//! accept exactly what the corresponding `Display` implementations print,
//! so values round-trip through their canonical text form.

use std::marker::PhantomData;
use std::sync::Arc;

use crate::basefield::{FFElem, FieldElement, FieldSpec};
use crate::drinfeld::FqPoly;
use crate::error::Error;
use crate::lambda::{LambdaPoly, LambdaWord};
use crate::mordell::MPoly;
use crate::ore::OrePoly;

// ---------------------------------------------------------------------------
// tokenizer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("`{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

fn parse_err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

fn tokenize(src: &str) -> crate::Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    chars.next();
                    col += 1;
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(v as u64))
                        .ok_or_else(|| parse_err(pos, "integer literal too large"))?;
                }
                out.push((Tok::Int(n), pos));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), pos));
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    other => return Err(parse_err(pos, format!("unexpected character `{other}`"))),
                };
                chars.next();
                col += 1;
                out.push((tok, pos));
            }
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(Tok, Pos)],
    i: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [(Tok, Pos)]) -> Self {
        let end = toks
            .last()
            .map(|(t, p)| Pos {
                line: p.line,
                col: p.col + t.describe().len().saturating_sub(2).max(1),
            })
            .unwrap_or(Pos { line: 1, col: 1 });
        Cursor { toks, i: 0, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> crate::Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            let found = self
                .peek()
                .map(|t| t.describe())
                .unwrap_or_else(|| "end of input".into());
            Err(parse_err(
                self.pos(),
                format!("expected {}, found {found}", tok.describe()),
            ))
        }
    }

    fn expect_end(&self) -> crate::Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(parse_err(
                self.pos(),
                format!("unexpected {} after the expression", t.describe()),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// generic expression parsing
// ---------------------------------------------------------------------------

/// The operations a value type must provide to be parsed by the shared
/// `+ - * / ^` grammar.  Methods report failures as plain messages; the
/// driver attaches source positions.
trait Algebra {
    type V: Clone;
    fn int(&self, n: u64) -> Result<Self::V, String>;
    fn ident(&self, name: &str) -> Result<Self::V, String>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, String>;
    fn pow(&self, a: &Self::V, e: u64) -> Result<Self::V, String>;
}

fn parse_expr<A: Algebra>(alg: &A, cur: &mut Cursor<'_>) -> crate::Result<A::V> {
    let mut acc = parse_term(alg, cur)?;
    loop {
        if cur.eat(&Tok::Plus) {
            let t = parse_term(alg, cur)?;
            acc = alg.add(&acc, &t);
        } else if cur.eat(&Tok::Minus) {
            let t = parse_term(alg, cur)?;
            acc = alg.sub(&acc, &t);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term<A: Algebra>(alg: &A, cur: &mut Cursor<'_>) -> crate::Result<A::V> {
    let mut acc = parse_factor(alg, cur)?;
    loop {
        if cur.eat(&Tok::Star) {
            let f = parse_factor(alg, cur)?;
            acc = alg.mul(&acc, &f);
        } else if cur.peek() == Some(&Tok::Slash) {
            let pos = cur.pos();
            cur.next();
            let f = parse_factor(alg, cur)?;
            acc = alg.div(&acc, &f).map_err(|m| parse_err(pos, m))?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_factor<A: Algebra>(alg: &A, cur: &mut Cursor<'_>) -> crate::Result<A::V> {
    if cur.eat(&Tok::Minus) {
        let f = parse_factor(alg, cur)?;
        return Ok(alg.neg(&f));
    }
    let mut v = parse_primary(alg, cur)?;
    while cur.peek() == Some(&Tok::Caret) {
        let pos = cur.pos();
        cur.next();
        let e = parse_exponent(cur)?;
        v = alg.pow(&v, e).map_err(|m| parse_err(pos, m))?;
    }
    Ok(v)
}

fn parse_exponent(cur: &mut Cursor<'_>) -> crate::Result<u64> {
    match cur.peek() {
        Some(Tok::Int(n)) => {
            let n = *n;
            cur.next();
            Ok(n)
        }
        _ => Err(parse_err(
            cur.pos(),
            "exponent must be a nonnegative integer",
        )),
    }
}

fn parse_primary<A: Algebra>(alg: &A, cur: &mut Cursor<'_>) -> crate::Result<A::V> {
    let pos = cur.pos();
    match cur.next() {
        Some(Tok::Int(n)) => alg.int(n).map_err(|m| parse_err(pos, m)),
        Some(Tok::Ident(name)) => alg.ident(&name).map_err(|m| parse_err(pos, m)),
        Some(Tok::LParen) => {
            let v = parse_expr(alg, cur)?;
            cur.expect(Tok::RParen)?;
            Ok(v)
        }
        Some(t) => Err(parse_err(pos, format!("unexpected {}", t.describe()))),
        None => Err(parse_err(pos, "unexpected end of input")),
    }
}

// ---------------------------------------------------------------------------
// concrete algebras
// ---------------------------------------------------------------------------

fn generator(spec: &Arc<FieldSpec>) -> Result<FFElem, String> {
    if spec.fdeg() < 2 {
        return Err("the finite part is a prime field and has no generator g".into());
    }
    let mut coords = vec![0u64; spec.fdeg()];
    coords[1] = 1;
    Ok(FFElem::from_coords(spec, coords))
}

struct ElemAlg<'s, C> {
    spec: &'s Arc<FieldSpec>,
    _c: PhantomData<C>,
}

impl<'s, C: FieldElement> ElemAlg<'s, C> {
    fn new(spec: &'s Arc<FieldSpec>) -> Self {
        ElemAlg {
            spec,
            _c: PhantomData,
        }
    }
}

impl<C: FieldElement> Algebra for ElemAlg<'_, C> {
    type V = C;

    fn int(&self, n: u64) -> Result<C, String> {
        Ok(C::embed(FFElem::from_int(self.spec, (n % self.spec.p()) as i64)))
    }

    fn ident(&self, name: &str) -> Result<C, String> {
        match name {
            "g" => generator(self.spec).map(C::embed),
            "t" => C::transcendental(self.spec)
                .map_err(|_| "t is only available over the rational function field".into()),
            other => Err(format!("unknown symbol `{other}`")),
        }
    }

    fn add(&self, a: &C, b: &C) -> C {
        a.add(b)
    }

    fn sub(&self, a: &C, b: &C) -> C {
        a.sub(b)
    }

    fn neg(&self, a: &C) -> C {
        a.neg()
    }

    fn mul(&self, a: &C, b: &C) -> C {
        a.mul(b)
    }

    fn div(&self, a: &C, b: &C) -> Result<C, String> {
        a.div(b).map_err(|_| "division by zero".into())
    }

    fn pow(&self, a: &C, e: u64) -> Result<C, String> {
        Ok(a.pow(e))
    }
}

struct OreAlg<'s, C> {
    elems: ElemAlg<'s, C>,
}

impl<C: FieldElement> Algebra for OreAlg<'_, C> {
    type V = OrePoly<C>;

    fn int(&self, n: u64) -> Result<OrePoly<C>, String> {
        Ok(OrePoly::constant(self.elems.int(n)?))
    }

    fn ident(&self, name: &str) -> Result<OrePoly<C>, String> {
        if name == "T" {
            Ok(OrePoly::tau(self.elems.spec))
        } else {
            Ok(OrePoly::constant(self.elems.ident(name)?))
        }
    }

    fn add(&self, a: &OrePoly<C>, b: &OrePoly<C>) -> OrePoly<C> {
        a.add(b)
    }

    fn sub(&self, a: &OrePoly<C>, b: &OrePoly<C>) -> OrePoly<C> {
        a.sub(b)
    }

    fn neg(&self, a: &OrePoly<C>) -> OrePoly<C> {
        a.neg()
    }

    fn mul(&self, a: &OrePoly<C>, b: &OrePoly<C>) -> OrePoly<C> {
        a.mul(b)
    }

    fn div(&self, a: &OrePoly<C>, b: &OrePoly<C>) -> Result<OrePoly<C>, String> {
        // division never crosses τ: both sides must be scalars
        if a.deg().unwrap_or(0) > 0 || b.deg().unwrap_or(0) > 0 {
            return Err("`/` only divides scalar coefficients, not twisted polynomials".into());
        }
        let c = self.elems.div(&a.coeff(0), &b.coeff(0))?;
        Ok(OrePoly::constant(c))
    }

    fn pow(&self, a: &OrePoly<C>, e: u64) -> Result<OrePoly<C>, String> {
        Ok(a.pow(e))
    }
}

struct FqAlg<'s> {
    spec: &'s Arc<FieldSpec>,
}

impl Algebra for FqAlg<'_> {
    type V = FqPoly;

    fn int(&self, n: u64) -> Result<FqPoly, String> {
        Ok(FqPoly::from_ints(self.spec, &[(n % self.spec.p()) as i64]))
    }

    fn ident(&self, name: &str) -> Result<FqPoly, String> {
        match name {
            "t" => Ok(FqPoly::t(self.spec)),
            "g" => {
                let g = generator(self.spec)?;
                FqPoly::new(self.spec, vec![g]).map_err(|e| e.to_string())
            }
            other => Err(format!("unknown symbol `{other}` in an F_q[t] polynomial")),
        }
    }

    fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.add(b)
    }

    fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.sub(b)
    }

    fn neg(&self, a: &FqPoly) -> FqPoly {
        a.neg()
    }

    fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.mul(b)
    }

    fn div(&self, _a: &FqPoly, _b: &FqPoly) -> Result<FqPoly, String> {
        Err("there is no division in F_q[t] expressions".into())
    }

    fn pow(&self, a: &FqPoly, e: u64) -> Result<FqPoly, String> {
        Ok(a.pow(e))
    }
}

struct MPolyAlg<'s, C> {
    nvars: usize,
    elems: ElemAlg<'s, C>,
}

impl<C: FieldElement> MPolyAlg<'_, C> {
    fn constant(&self, c: C) -> MPoly<C> {
        MPoly::constant(self.elems.spec, self.nvars, c)
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        if self.nvars <= 3 {
            match name {
                "x" => return Some(0),
                "y" => return Some(1),
                "z" => return Some(2),
                _ => {}
            }
        }
        name.strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .and_then(|k| (k >= 1).then(|| k - 1))
    }
}

impl<C: FieldElement> Algebra for MPolyAlg<'_, C> {
    type V = MPoly<C>;

    fn int(&self, n: u64) -> Result<MPoly<C>, String> {
        Ok(self.constant(self.elems.int(n)?))
    }

    fn ident(&self, name: &str) -> Result<MPoly<C>, String> {
        if let Some(j) = self.var_index(name) {
            return if j < self.nvars {
                Ok(MPoly::var(self.elems.spec, self.nvars, j).expect("checked index"))
            } else {
                Err(format!(
                    "variable `{name}` is out of range: the variety has {} variables",
                    self.nvars
                ))
            };
        }
        Ok(self.constant(self.elems.ident(name)?))
    }

    fn add(&self, a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
        a.add(b)
    }

    fn sub(&self, a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
        a.sub(b)
    }

    fn neg(&self, a: &MPoly<C>) -> MPoly<C> {
        a.neg()
    }

    fn mul(&self, a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
        a.mul(b)
    }

    fn div(&self, a: &MPoly<C>, b: &MPoly<C>) -> Result<MPoly<C>, String> {
        let constant = b
            .terms()
            .try_fold(None, |acc, (exp, c)| {
                if exp.iter().all(|&e| e == 0) && acc.is_none() {
                    Ok(Some(c.clone()))
                } else {
                    Err(())
                }
            })
            .map_err(|_| "`/` only divides by constants in variety equations".to_string())?;
        match constant {
            None => Err("division by zero".into()),
            Some(c) => {
                let inv = c.inv().map_err(|_| "division by zero".to_string())?;
                Ok(a.scale(&inv))
            }
        }
    }

    fn pow(&self, a: &MPoly<C>, e: u64) -> Result<MPoly<C>, String> {
        if e > 256 {
            return Err("exponent too large for a variety equation".into());
        }
        let mut acc = self.constant(C::one(self.elems.spec));
        for _ in 0..e {
            acc = acc.mul(a);
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------------

/// Parse a field element: integers, `g`, `t`, `+ - * / ^`, parentheses.
pub fn parse_element<C: FieldElement>(spec: &Arc<FieldSpec>, src: &str) -> crate::Result<C> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks);
    let alg = ElemAlg::<C>::new(spec);
    let v = parse_expr(&alg, &mut cur)?;
    cur.expect_end()?;
    Ok(v)
}

/// Parse a twisted polynomial: coefficients in element syntax plus the
/// atom `T` for τ, e.g. `t*T + T^3`.
pub fn parse_ore<C: FieldElement>(spec: &Arc<FieldSpec>, src: &str) -> crate::Result<OrePoly<C>> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks);
    let alg = OreAlg {
        elems: ElemAlg::<C>::new(spec),
    };
    let v = parse_expr(&alg, &mut cur)?;
    cur.expect_end()?;
    Ok(v)
}

/// Parse a polynomial in F_q[t] (operand syntax for φ_a).
pub fn parse_fq_poly(spec: &Arc<FieldSpec>, src: &str) -> crate::Result<FqPoly> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks);
    let alg = FqAlg { spec };
    let v = parse_expr(&alg, &mut cur)?;
    cur.expect_end()?;
    Ok(v)
}

/// Parse a variety equation in `nvars` variables (`x, y, z` for up to
/// three, `x1, x2, ...` in general).
pub fn parse_mpoly<C: FieldElement>(
    spec: &Arc<FieldSpec>,
    nvars: usize,
    src: &str,
) -> crate::Result<MPoly<C>> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks);
    let alg = MPolyAlg {
        nvars,
        elems: ElemAlg::<C>::new(spec),
    };
    let v = parse_expr(&alg, &mut cur)?;
    cur.expect_end()?;
    Ok(v)
}

/// Parse a point: either a bare element or a tuple `(a, b, ...)`.
pub fn parse_point<C: FieldElement>(spec: &Arc<FieldSpec>, src: &str) -> crate::Result<Vec<C>> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks);
    let alg = ElemAlg::<C>::new(spec);
    // a tuple must close with `)` at the very end; otherwise the leading
    // paren was just grouping inside a single element
    let is_tuple = toks.first().map(|(t, _)| t) == Some(&Tok::LParen)
        && toks.last().map(|(t, _)| t) == Some(&Tok::RParen)
        && toks.iter().any(|(t, _)| t == &Tok::Comma);
    if !is_tuple {
        let v = parse_expr(&alg, &mut cur)?;
        cur.expect_end()?;
        return Ok(vec![v]);
    }
    cur.expect(Tok::LParen)?;
    let mut out = vec![parse_expr(&alg, &mut cur)?];
    while cur.eat(&Tok::Comma) {
        out.push(parse_expr(&alg, &mut cur)?);
    }
    cur.expect(Tok::RParen)?;
    cur.expect_end()?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// λ-polynomials
// ---------------------------------------------------------------------------

/// Parse a λ-polynomial: `L0`, `L1`, ... are λ-letters, `F` is τ₀,
/// juxtaposition composes, and `*` attaches an element coefficient on the
/// left, e.g. `t * L1 L0 F^2`.  Words must be in normal form: all letters
/// before any `F` power.
pub fn parse_lambda(spec: &Arc<FieldSpec>, src: &str) -> crate::Result<LambdaPoly> {
    let toks = tokenize(src)?;
    let mut cur = Cursor::new(&toks);
    let mut acc = LambdaPoly::zero(spec)?;
    let mut negate = cur.eat(&Tok::Minus);
    loop {
        let term = parse_lambda_term(spec, &mut cur)?;
        acc = acc.add(&if negate { term.neg() } else { term });
        if cur.eat(&Tok::Plus) {
            negate = false;
        } else if cur.eat(&Tok::Minus) {
            negate = true;
        } else {
            cur.expect_end()?;
            return Ok(acc);
        }
    }
}

fn parse_lambda_term(spec: &Arc<FieldSpec>, cur: &mut Cursor<'_>) -> crate::Result<LambdaPoly> {
    use crate::basefield::RatFunc;
    let elems = ElemAlg::<RatFunc>::new(spec);
    let mut coeff = RatFunc::one(spec);
    let mut indices: Vec<u8> = Vec::new();
    let mut frob: u32 = 0;
    let mut seen_any = false;
    let mut seen_letter = false;
    let mut seen_frob = false;
    loop {
        let pos = cur.pos();
        match cur.peek().cloned() {
            Some(Tok::Ident(name)) if name.starts_with('L') && name[1..].parse::<u8>().is_ok() => {
                if seen_frob {
                    return Err(parse_err(
                        pos,
                        "λ-letters cannot follow F: words are written letters-first",
                    ));
                }
                let idx: u8 = name[1..].parse().expect("checked");
                if u64::from(idx) >= spec.p() {
                    return Err(parse_err(
                        pos,
                        format!("λ-index {} out of range: the index set is 0..{}", idx, spec.p()),
                    ));
                }
                cur.next();
                let reps = maybe_exponent(cur)?;
                for _ in 0..reps {
                    indices.push(idx);
                }
                seen_any = true;
                seen_letter = true;
            }
            Some(Tok::Ident(name)) if name == "F" => {
                cur.next();
                let reps = maybe_exponent(cur)?;
                frob += u32::try_from(reps)
                    .map_err(|_| parse_err(pos, "Frobenius exponent too large"))?;
                seen_any = true;
                seen_letter = true;
                seen_frob = true;
            }
            Some(Tok::Int(_)) | Some(Tok::LParen) | Some(Tok::Ident(_)) => {
                if seen_letter {
                    return Err(parse_err(
                        pos,
                        "coefficients must precede the λ-letters of a term",
                    ));
                }
                let f = parse_factor(&elems, cur)?;
                coeff = coeff.mul(&f);
                seen_any = true;
                // allow `c / d` between scalar factors
                while cur.peek() == Some(&Tok::Slash) {
                    let pos = cur.pos();
                    cur.next();
                    let d = parse_factor(&elems, cur)?;
                    coeff = coeff
                        .div(&d)
                        .map_err(|_| parse_err(pos, "division by zero"))?;
                }
            }
            Some(Tok::Star) => {
                cur.next(); // separator between factors
            }
            _ => break,
        }
    }
    if !seen_any {
        return Err(parse_err(cur.pos(), "expected a λ-term"));
    }
    let word = LambdaWord::new(indices, frob);
    LambdaPoly::from_word(spec, word, coeff)
}

fn maybe_exponent(cur: &mut Cursor<'_>) -> crate::Result<u64> {
    if cur.eat(&Tok::Caret) {
        parse_exponent(cur)
    } else {
        Ok(1)
    }
}
