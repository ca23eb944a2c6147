//! Line-oriented text formats for manifold files, map files, and
//! point literals.
//!
//! Manifold grammar: a `vars z1 … zn` line, an optional
//! `base (a1, …, an)` line (default: the origin), then `rho<k>: <expr>`
//! lines numbered consecutively from 1. Map grammar is the same with
//! `f<k>:` component lines. Expressions use the declared variables,
//! `~zj` for the conjugate placeholder (manifolds only), literals
//! `p/q` and `i`, operators `+ - * ^` with parentheses; `^` binds
//! tightest and takes a nonnegative integer exponent.
//!
//! Invariants
//! - every error carries the 1-based line/column and the offending
//!   token text
//! - a returned manifold is validated: reality symmetry, base
//!   membership, and genericity at the base are all checked here
//! - map germs are ambient polynomials recentred at the declared base;
//!   the germ order is the maximum total degree of the components
//! - `parse` after `serialize` reproduces an equal spec or germ

use crjet_core::gauss::{self, GaussRat};
use crjet_core::geometry::ManifoldSpec;
use crjet_core::germ::MapGerm;
use crjet_core::series::{Multidegree, TruncatedSeries};
use std::fmt;

/// Hard ceiling on the total degree of any parsed polynomial; inputs
/// past this point signal a typo rather than a workload.
const MAX_DEGREE: u32 = 512;

// ---------------------------------------------------------------------
// Errors.

/// A parse-time failure, pinned to the offending token.
#[derive(Clone, Debug)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {} (at `{}`)",
            self.line, self.column, self.message, self.token
        )
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = std::result::Result<T, ParseError>;

fn err<T>(line: usize, column: usize, token: &str, message: impl Into<String>) -> PResult<T> {
    Err(ParseError {
        line,
        column,
        token: token.to_string(),
        message: message.into(),
    })
}

// ---------------------------------------------------------------------
// Lexer.

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Tilde,
    LParen,
    RParen,
    Comma,
    Colon,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
    text: String,
}

fn lex_line(line_no: usize, src: &str) -> PResult<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Int(text.clone()),
                line: line_no,
                column,
                text,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Ident(text.clone()),
                line: line_no,
                column,
                text,
            });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '~' => Tok::Tilde,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            other => {
                return err(
                    line_no,
                    column,
                    &other.to_string(),
                    "unexpected character",
                )
            }
        };
        out.push(Spanned {
            tok,
            line: line_no,
            column,
            text: c.to_string(),
        });
        i += 1;
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Expressions.

#[derive(Clone, Debug)]
enum Expr {
    Lit(GaussRat),
    /// Index into the full variable space the expression is evaluated
    /// in (conjugate placeholders land in the upper block).
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// What identifiers are allowed to mean inside an expression.
#[derive(Clone, Copy)]
enum VarContext<'a> {
    /// `name` -> z-index, `~name` -> n + z-index.
    Manifold { names: &'a [String] },
    /// `name` -> z-index; conjugate placeholders are an error.
    Map { names: &'a [String] },
    /// Constants only (point literals).
    Constant,
}

struct ExprParser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    ctx: VarContext<'a>,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'a Spanned> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn end_column(&self) -> usize {
        self.toks
            .last()
            .map(|t| t.column + t.text.chars().count())
            .unwrap_or(1)
    }

    fn fail<T>(&self, message: impl Into<String>) -> PResult<T> {
        match self.peek() {
            Some(t) => err(t.line, t.column, &t.text, message),
            None => err(self.line, self.end_column(), "end of line", message),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.unary()?;
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Star)) {
            self.bump();
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Expr> {
        let base = self.primary()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.bump();
            let e = match self.peek() {
                Some(t) => match &t.tok {
                    Tok::Int(digits) => {
                        let e: u32 = digits.parse().map_err(|_| ParseError {
                            line: t.line,
                            column: t.column,
                            token: t.text.clone(),
                            message: "exponent does not fit in 32 bits".into(),
                        })?;
                        self.bump();
                        e
                    }
                    _ => return self.fail("exponent must be a nonnegative integer"),
                },
                None => return self.fail("exponent must be a nonnegative integer"),
            };
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = match self.peek() {
            Some(t) => t,
            None => return self.fail("expected an operand"),
        };
        match &t.tok {
            Tok::Int(numer) => {
                self.bump();
                // `p` or `p/q`; the slash is part of the literal.
                if matches!(self.peek().map(|u| &u.tok), Some(Tok::Slash)) {
                    self.bump();
                    match self.peek() {
                        Some(u) => match &u.tok {
                            Tok::Int(denom) => {
                                if denom.chars().all(|c| c == '0') {
                                    return self.fail("zero denominator");
                                }
                                let lit = gauss_from_decimal(numer, denom);
                                self.bump();
                                Ok(Expr::Lit(lit))
                            }
                            _ => self.fail("expected a denominator after `/`"),
                        },
                        None => self.fail("expected a denominator after `/`"),
                    }
                } else {
                    Ok(Expr::Lit(gauss_from_decimal(numer, "1")))
                }
            }
            Tok::Ident(name) if name == "i" => {
                self.bump();
                Ok(Expr::Lit(gauss::i_unit()))
            }
            Tok::Ident(name) => {
                let e = self.resolve(name, false, t)?;
                self.bump();
                Ok(e)
            }
            Tok::Tilde => {
                let tilde = t;
                self.bump();
                match self.peek() {
                    Some(u) => match &u.tok {
                        Tok::Ident(name) if name == "i" => err(
                            tilde.line,
                            tilde.column,
                            "~i",
                            "the literal `i` cannot carry a conjugate marker",
                        ),
                        Tok::Ident(name) => {
                            let e = self.resolve(name, true, u)?;
                            self.bump();
                            Ok(e)
                        }
                        _ => self.fail("`~` must be followed by a variable name"),
                    },
                    None => self.fail("`~` must be followed by a variable name"),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                match self.peek().map(|u| &u.tok) {
                    Some(Tok::RParen) => {
                        self.bump();
                        Ok(inner)
                    }
                    _ => self.fail("expected `)`"),
                }
            }
            _ => self.fail("expected an operand"),
        }
    }

    fn resolve(&self, name: &str, conjugate: bool, at: &Spanned) -> PResult<Expr> {
        let token = if conjugate {
            format!("~{name}")
        } else {
            name.to_string()
        };
        match self.ctx {
            VarContext::Manifold { names } => match names.iter().position(|v| v == name) {
                Some(j) if conjugate => Ok(Expr::Var(names.len() + j)),
                Some(j) => Ok(Expr::Var(j)),
                None => err(at.line, at.column, &token, "unknown variable"),
            },
            VarContext::Map { names } => {
                if conjugate {
                    return err(
                        at.line,
                        at.column,
                        &token,
                        "conjugate placeholders are not allowed in map components",
                    );
                }
                match names.iter().position(|v| v == name) {
                    Some(j) => Ok(Expr::Var(j)),
                    None => err(at.line, at.column, &token, "unknown variable"),
                }
            }
            VarContext::Constant => err(
                at.line,
                at.column,
                &token,
                "variables are not allowed in a point literal",
            ),
        }
    }
}

fn gauss_from_decimal(numer: &str, denom: &str) -> GaussRat {
    use num_bigint_shim::*;
    ratio_from_strs(numer, denom)
}

/// Build `p/q` from decimal digit strings without pulling the bigint
/// crates into this crate's dependency list.
mod num_bigint_shim {
    use crjet_core::gauss::{self, GaussRat};

    pub fn ratio_from_strs(numer: &str, denom: &str) -> GaussRat {
        // Digits only (the lexer guarantees it); fold into a GaussRat
        // via exact arithmetic on the re-exported types.
        let mut acc = gauss::zero();
        let ten = gauss::from_int(10);
        for ch in numer.chars() {
            let digit = gauss::from_int(i64::from(ch as u8 - b'0'));
            acc = &(&acc * &ten) + &digit;
        }
        let mut den = gauss::zero();
        for ch in denom.chars() {
            let digit = gauss::from_int(i64::from(ch as u8 - b'0'));
            den = &(&den * &ten) + &digit;
        }
        &acc / &den
    }
}

fn degree_bound(e: &Expr) -> u32 {
    match e {
        Expr::Lit(_) => 0,
        Expr::Var(_) => 1,
        Expr::Neg(a) => degree_bound(a),
        Expr::Add(a, b) | Expr::Sub(a, b) => degree_bound(a).max(degree_bound(b)),
        Expr::Mul(a, b) => degree_bound(a).saturating_add(degree_bound(b)),
        Expr::Pow(a, k) => degree_bound(a).saturating_mul(*k),
    }
}

fn eval_series(e: &Expr, nvars: usize, order: u32) -> TruncatedSeries {
    match e {
        Expr::Lit(c) => TruncatedSeries::constant(nvars, order, c.clone()),
        Expr::Var(j) => TruncatedSeries::variable(nvars, order, *j),
        Expr::Neg(a) => eval_series(a, nvars, order).neg(),
        Expr::Add(a, b) => eval_series(a, nvars, order).add(&eval_series(b, nvars, order)),
        Expr::Sub(a, b) => eval_series(a, nvars, order).add(&eval_series(b, nvars, order).neg()),
        Expr::Mul(a, b) => eval_series(a, nvars, order).mul(&eval_series(b, nvars, order)),
        Expr::Pow(a, k) => {
            let base = eval_series(a, nvars, order);
            let mut acc = TruncatedSeries::constant(nvars, order, gauss::one());
            for _ in 0..*k {
                acc = acc.mul(&base);
            }
            acc
        }
    }
}

fn eval_constant(e: &Expr) -> GaussRat {
    match e {
        Expr::Lit(c) => c.clone(),
        Expr::Var(_) => unreachable!("constant contexts reject variables at resolution"),
        Expr::Neg(a) => -&eval_constant(a),
        Expr::Add(a, b) => &eval_constant(a) + &eval_constant(b),
        Expr::Sub(a, b) => &eval_constant(a) - &eval_constant(b),
        Expr::Mul(a, b) => &eval_constant(a) * &eval_constant(b),
        Expr::Pow(a, k) => {
            let base = eval_constant(a);
            let mut acc = gauss::one();
            for _ in 0..*k {
                acc = &acc * &base;
            }
            acc
        }
    }
}

// ---------------------------------------------------------------------
// Statement-level parsing.

fn parse_vars_line(toks: &[Spanned], line: usize) -> PResult<Vec<String>> {
    let mut names = Vec::new();
    for t in &toks[1..] {
        match &t.tok {
            Tok::Ident(name) => {
                if name == "i" {
                    return err(
                        t.line,
                        t.column,
                        name,
                        "`i` denotes the imaginary unit and cannot be a variable",
                    );
                }
                if names.iter().any(|v| v == name) {
                    return err(t.line, t.column, name, "duplicate variable name");
                }
                names.push(name.clone());
            }
            _ => return err(t.line, t.column, &t.text, "expected a variable name"),
        }
    }
    if names.is_empty() {
        return err(line, 1, "vars", "at least one variable is required");
    }
    Ok(names)
}

fn parse_tuple(p: &mut ExprParser<'_>) -> PResult<Vec<GaussRat>> {
    match p.peek().map(|t| &t.tok) {
        Some(Tok::LParen) => {
            p.bump();
        }
        _ => return p.fail("expected `(`"),
    }
    let mut out = vec![eval_constant(&p.expr()?)];
    loop {
        match p.peek().map(|t| &t.tok) {
            Some(Tok::Comma) => {
                p.bump();
                out.push(eval_constant(&p.expr()?));
            }
            Some(Tok::RParen) => {
                p.bump();
                return Ok(out);
            }
            _ => return p.fail("expected `,` or `)`"),
        }
    }
}

/// Split a component head like `rho3` into its index, checking the
/// prefix.
fn component_index(name: &str, prefix: &str, at: &Spanned) -> PResult<usize> {
    let digits = match name.strip_prefix(prefix) {
        Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => d,
        _ => {
            return err(
                at.line,
                at.column,
                name,
                format!("expected `vars`, `base`, or `{prefix}<k>:`"),
            )
        }
    };
    match digits.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => err(at.line, at.column, name, "component index must be >= 1"),
    }
}

struct ParsedFile {
    names: Vec<String>,
    base: Vec<GaussRat>,
    comps: Vec<(Expr, usize)>,
}

/// Shared statement loop for both file kinds; `prefix` is `rho` or `f`.
fn parse_file(text: &str, prefix: &str, manifold: bool) -> PResult<ParsedFile> {
    let mut names: Option<Vec<String>> = None;
    let mut base: Option<Vec<GaussRat>> = None;
    let mut comps: Vec<(Expr, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let toks = lex_line(line_no, raw)?;
        let head = &toks[0];
        match &head.tok {
            Tok::Ident(word) if word == "vars" => {
                if names.is_some() {
                    return err(head.line, head.column, "vars", "duplicate `vars` line");
                }
                if base.is_some() || !comps.is_empty() {
                    return err(head.line, head.column, "vars", "`vars` must come first");
                }
                names = Some(parse_vars_line(&toks, line_no)?);
            }
            Tok::Ident(word) if word == "base" => {
                let declared = match &names {
                    Some(v) => v,
                    None => {
                        return err(
                            head.line,
                            head.column,
                            "base",
                            "declare `vars` before the base point",
                        )
                    }
                };
                if base.is_some() {
                    return err(head.line, head.column, "base", "duplicate `base` line");
                }
                if !comps.is_empty() {
                    return err(
                        head.line,
                        head.column,
                        "base",
                        "the base point must precede the component lines",
                    );
                }
                let mut p = ExprParser {
                    toks: &toks[1..],
                    pos: 0,
                    line: line_no,
                    ctx: VarContext::Constant,
                };
                let point = parse_tuple(&mut p)?;
                if p.peek().is_some() {
                    return p.fail("trailing input after the base point");
                }
                if point.len() != declared.len() {
                    return err(
                        head.line,
                        head.column,
                        "base",
                        format!(
                            "base point has {} components but {} variables are declared",
                            point.len(),
                            declared.len()
                        ),
                    );
                }
                base = Some(point);
            }
            Tok::Ident(word) => {
                let declared = match &names {
                    Some(v) => v,
                    None => {
                        return err(
                            head.line,
                            head.column,
                            word,
                            "declare `vars` before any component",
                        )
                    }
                };
                let k = component_index(word, prefix, head)?;
                if k != comps.len() + 1 {
                    return err(
                        head.line,
                        head.column,
                        word,
                        format!(
                            "components must be numbered consecutively; expected `{prefix}{}`",
                            comps.len() + 1
                        ),
                    );
                }
                match toks.get(1).map(|t| &t.tok) {
                    Some(Tok::Colon) => {}
                    _ => {
                        return err(
                            head.line,
                            head.column + word.chars().count(),
                            word,
                            format!("expected `:` after `{word}`"),
                        )
                    }
                }
                let ctx = if manifold {
                    VarContext::Manifold { names: declared }
                } else {
                    VarContext::Map { names: declared }
                };
                let mut p = ExprParser {
                    toks: &toks[2..],
                    pos: 0,
                    line: line_no,
                    ctx,
                };
                if p.peek().is_none() {
                    return err(head.line, head.column, word, "empty polynomial");
                }
                let e = p.expr()?;
                if p.peek().is_some() {
                    return p.fail("trailing input after the polynomial");
                }
                if degree_bound(&e) > MAX_DEGREE {
                    return err(
                        head.line,
                        head.column,
                        word,
                        format!("total degree exceeds the supported bound {MAX_DEGREE}"),
                    );
                }
                comps.push((e, line_no));
            }
            _ => {
                return err(
                    head.line,
                    head.column,
                    &head.text,
                    "a statement starts with `vars`, `base`, or a component name",
                )
            }
        }
    }
    let names = match names {
        Some(v) => v,
        None => return err(1, 1, "", "missing `vars` declaration"),
    };
    if comps.is_empty() {
        return err(
            1,
            1,
            "",
            format!("the file declares no `{prefix}<k>:` components"),
        );
    }
    let n = names.len();
    Ok(ParsedFile {
        base: base.unwrap_or_else(|| vec![gauss::zero(); n]),
        names,
        comps,
    })
}

/// Evaluate component expressions into series over `nvars` variables,
/// all trimmed to one tight common order: the maximum actual total
/// degree (at least 1). The tight order is what makes
/// serialize-then-parse reproduce an equal object.
fn eval_components(comps: &[(Expr, usize)], nvars: usize) -> Vec<TruncatedSeries> {
    let bound = comps
        .iter()
        .map(|(e, _)| degree_bound(e))
        .max()
        .unwrap_or(0)
        .max(1);
    let raw: Vec<TruncatedSeries> = comps
        .iter()
        .map(|(e, _)| eval_series(e, nvars, bound))
        .collect();
    let order = raw.iter().map(TruncatedSeries::max_degree).max().unwrap_or(0).max(1);
    raw.into_iter().map(|s| s.truncated(order)).collect()
}

// ---------------------------------------------------------------------
// Public entry points.

/// A parsed, validated manifold together with its declared variable
/// names (kept for reports and serialization).
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldFile {
    pub names: Vec<String>,
    pub spec: ManifoldSpec,
}

/// A parsed map file: ambient polynomial components recentred at the
/// declared base point.
#[derive(Clone, Debug, PartialEq)]
pub struct MapFile {
    pub names: Vec<String>,
    pub germ: MapGerm,
}

pub fn parse_manifold(text: &str) -> PResult<ManifoldFile> {
    let file = parse_file(text, "rho", true)?;
    let n = file.names.len();
    if file.comps.len() > n {
        let line = file.comps[n].1;
        return err(
            line,
            1,
            &format!("rho{}", n + 1),
            format!("{} defining polynomials exceed the ambient dimension {n}", file.comps.len()),
        );
    }
    let rho = eval_components(&file.comps, 2 * n);
    let spec = ManifoldSpec::new(n, file.base, rho);
    match spec.validate() {
        Ok(v) if v.is_generic => Ok(ManifoldFile {
            names: file.names,
            spec,
        }),
        Ok(v) => {
            let line = file.comps[0].1;
            err(
                line,
                1,
                "rho1",
                format!(
                    "manifold is not generic at the base point: holomorphic differentials have rank {} < {}",
                    v.holo_rank,
                    spec.d()
                ),
            )
        }
        Err(e) => {
            // Attach the core diagnosis to the component it names.
            let index = match &e {
                crjet_core::error::Error::RealityViolation { index, .. } => *index,
                crjet_core::error::Error::BaseNotOnManifold { index, .. } => *index,
                _ => 1,
            };
            let line = file.comps.get(index - 1).map(|c| c.1).unwrap_or(1);
            err(line, 1, &format!("rho{index}"), e.to_string())
        }
    }
}

pub fn parse_map(text: &str) -> PResult<MapFile> {
    let file = parse_file(text, "f", false)?;
    let n = file.names.len();
    let comps = eval_components(&file.comps, n);
    let germ = MapGerm::new(vec![gauss::zero(); n], comps).recenter_exact(file.base);
    Ok(MapFile {
        names: file.names,
        germ,
    })
}

/// Parse a point literal `(c1, …, cm)` whose components are constant
/// expressions (`1/3`, `-2`, `1/2+1/2*i`, …).
pub fn parse_point(text: &str) -> PResult<Vec<GaussRat>> {
    let toks = lex_line(1, text)?;
    let mut p = ExprParser {
        toks: &toks,
        pos: 0,
        line: 1,
        ctx: VarContext::Constant,
    };
    let point = parse_tuple(&mut p)?;
    if p.peek().is_some() {
        return p.fail("trailing input after the point");
    }
    Ok(point)
}

// ---------------------------------------------------------------------
// Serialization (the inverse direction, used by reports and the
// round-trip property).

/// A coefficient atom for expression output: parenthesized whenever the
/// canonical text contains an interior sign that would otherwise change
/// the parse (`1/2-1/3*i` must not split at the `-`).
fn coeff_atom(c: &GaussRat) -> String {
    let text = gauss::fmt_gauss(c);
    let interior_sign = text
        .chars()
        .skip(1)
        .any(|ch| ch == '+' || ch == '-');
    if interior_sign {
        format!("({text})")
    } else {
        text
    }
}

fn monomial_expr(md: &Multidegree, names: &[String]) -> String {
    let parts: Vec<String> = md
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| {
            if e == 1 {
                names[j].clone()
            } else {
                format!("{}^{}", names[j], e)
            }
        })
        .collect();
    parts.join("*")
}

/// Render a polynomial series as a grammar-valid expression, terms in
/// the series' graded-lexicographic order.
fn series_expr(s: &TruncatedSeries, names: &[String]) -> String {
    let terms: Vec<String> = s
        .terms()
        .map(|(md, c)| {
            let mono = monomial_expr(md, names);
            if mono.is_empty() {
                coeff_atom(c)
            } else {
                format!("{} * {}", coeff_atom(c), mono)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub fn manifold_to_text(file: &ManifoldFile) -> String {
    let n = file.spec.n();
    let mut expr_names = file.names.clone();
    expr_names.extend(file.names.iter().map(|v| format!("~{v}")));
    let mut out = format!("vars {}\n", file.names.join(" "));
    out.push_str(&format!("base {}\n", point_text(file.spec.base())));
    for (j, rho) in file.spec.rho().iter().enumerate() {
        debug_assert_eq!(rho.nvars(), 2 * n);
        out.push_str(&format!("rho{}: {}\n", j + 1, series_expr(rho, &expr_names)));
    }
    out
}

pub fn map_to_text(file: &MapFile) -> String {
    let n = file.names.len();
    let ambient = file.germ.recenter_exact(vec![gauss::zero(); n]);
    let mut out = format!("vars {}\n", file.names.join(" "));
    out.push_str(&format!("base {}\n", point_text(file.germ.base())));
    for (j, comp) in ambient.components().iter().enumerate() {
        out.push_str(&format!("f{}: {}\n", j + 1, series_expr(comp, &file.names)));
    }
    out
}

/// Format a point so that [`parse_point`] reads it back exactly.
pub fn point_text(p: &[GaussRat]) -> String {
    gauss::fmt_point(p)
}
