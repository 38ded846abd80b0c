//! Polynomial expression grammar.
//!
//! ```text
//! poly   := ['+' | '-'] term (('+' | '-') term)*
//! term   := [coeff '*'] factor ('*' factor)* | coeff
//! factor := var ['^' nat]
//! coeff  := nat | 'g' ['^' nat]
//! var    := 'x' nat | 'x' | 'y' | 'z'
//! ```
//!
//! `g` is the field generator; integers are reduced into the prime field.
//! Pure constants move to the right-hand side: `x^4 + y^4 - 1` is the
//! equation `x^4 + y^4 = 1`.

use std::fmt;
use std::sync::Arc;

use crate::gf::{FieldCtx, FieldElement};
use crate::poly::{SparsePoly, Term};

/// Exponents at or above this are rejected unless configured otherwise.
pub const DEFAULT_EXPONENT_CAP: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset into the source.
    pub position: usize,
    pub message: String,
    pub source: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} at column {}", self.message, self.position + 1)?;
        writeln!(f, "  {}", self.source)?;
        write!(f, "  {}^", " ".repeat(self.position))
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coeff {
    Int(u64),
    /// `g^k`
    GenPow(u64),
}

/// A signed monomial as written: coefficient, then `(variable index, exponent)`
/// factors with variables numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprTerm {
    pub negated: bool,
    pub coeff: Option<Coeff>,
    pub factors: Vec<(usize, u64)>,
    position: usize,
}

/// A parsed expression, not yet tied to a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyExpr {
    pub source: String,
    pub terms: Vec<ExprTerm>,
    /// Signed pure constants, in source order.
    pub constants: Vec<(bool, Coeff)>,
}

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub exponent_cap: u64,
    /// Ambient variable count; defaults to the largest index used.
    pub n_vars: Option<usize>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { exponent_cap: DEFAULT_EXPONENT_CAP, n_vars: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Num(u64),
    Var(usize),
    Gen,
    Plus,
    Minus,
    Star,
    Caret,
    End,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    source: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(source: &'a str) -> Self {
        Lexer { chars: source.chars().collect(), pos: 0, source }
    }

    fn error(&self, position: usize, message: impl Into<String>) -> ParseError {
        ParseError { position, message: message.into(), source: self.source.to_owned() }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.chars.get(self.pos).and_then(|c| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as u64))
                .ok_or_else(|| self.error(start, "number too large"))?;
            self.pos += 1;
        }
        Ok(value)
    }

    /// Next token and its starting column.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.chars.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        self.pos += 1;
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            'g' => Tok::Gen,
            'y' => Tok::Var(2),
            'z' => Tok::Var(3),
            'x' => {
                if self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    let idx = self.number()?;
                    if idx == 0 {
                        return Err(self.error(start, "variables are numbered from x1"));
                    }
                    Tok::Var(idx as usize)
                } else {
                    Tok::Var(1)
                }
            }
            c if c.is_ascii_digit() => {
                self.pos -= 1;
                Tok::Num(self.number()?)
            }
            other => return Err(self.error(start, format!("unexpected character '{other}'"))),
        };
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
    cap: u64,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        (self.tok, self.at) = self.lex.next()?;
        Ok(())
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.lex.error(self.at, message)
    }

    fn exponent(&mut self) -> Result<u64, ParseError> {
        if self.tok != Tok::Caret {
            return Ok(1);
        }
        self.bump()?;
        match self.tok {
            Tok::Num(e) => {
                if e >= self.cap {
                    return Err(self.error(format!("exponent {e} exceeds the cap {}", self.cap)));
                }
                self.bump()?;
                Ok(e)
            }
            Tok::Minus => Err(self.error("negative exponents are not allowed")),
            _ => Err(self.error("expected a non-negative integer exponent")),
        }
    }

    fn factor(&mut self) -> Result<(usize, u64), ParseError> {
        match self.tok {
            Tok::Var(i) => {
                self.bump()?;
                Ok((i, self.exponent()?))
            }
            _ => Err(self.error("expected a variable")),
        }
    }

    fn coeff(&mut self) -> Result<Option<Coeff>, ParseError> {
        match self.tok {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Some(Coeff::Int(v)))
            }
            Tok::Gen => {
                self.bump()?;
                let k = self.exponent()?;
                Ok(Some(Coeff::GenPow(k)))
            }
            _ => Ok(None),
        }
    }

    fn term(&mut self, negated: bool, expr: &mut PolyExpr) -> Result<(), ParseError> {
        let position = self.at;
        let coeff = self.coeff()?;
        let mut factors = Vec::new();
        match coeff {
            Some(c) if self.tok != Tok::Star => {
                expr.constants.push((negated, c));
                return Ok(());
            }
            Some(_) => {
                self.bump()?;
                factors.push(self.factor()?);
            }
            None => factors.push(self.factor()?),
        }
        while self.tok == Tok::Star {
            self.bump()?;
            factors.push(self.factor()?);
        }
        expr.terms.push(ExprTerm { negated, coeff, factors, position });
        Ok(())
    }

    fn poly(&mut self) -> Result<PolyExpr, ParseError> {
        let mut expr = PolyExpr { source: self.lex.source.to_owned(), terms: Vec::new(), constants: Vec::new() };
        if self.tok == Tok::End {
            return Err(self.error("empty polynomial"));
        }
        let mut negated = false;
        if matches!(self.tok, Tok::Plus | Tok::Minus) {
            negated = self.tok == Tok::Minus;
            self.bump()?;
        }
        loop {
            self.term(negated, &mut expr)?;
            match self.tok {
                Tok::Plus | Tok::Minus => {
                    negated = self.tok == Tok::Minus;
                    self.bump()?;
                }
                Tok::End => return Ok(expr),
                _ => return Err(self.error("expected '+', '-' or end of input")),
            }
        }
    }
}

/// Parses an expression without reference to any field.
pub fn parse_expr(text: &str, opts: &ParseOptions) -> Result<PolyExpr, ParseError> {
    let mut p = Parser { lex: Lexer::new(text), tok: Tok::End, at: 0, cap: opts.exponent_cap };
    p.bump()?;
    p.poly()
}

fn coeff_value(ctx: &FieldCtx, c: Coeff) -> FieldElement {
    match c {
        Coeff::Int(v) => ctx.from_int((v % ctx.p()) as i64),
        Coeff::GenPow(k) => ctx.antilog(k),
    }
}

impl PolyExpr {
    pub fn max_var(&self) -> usize {
        self.terms.iter().flat_map(|t| t.factors.iter().map(|&(i, _)| i)).max().unwrap_or(0)
    }

    /// Interprets the expression in `ctx`.
    pub fn to_poly(&self, ctx: Arc<FieldCtx>, opts: &ParseOptions) -> Result<SparsePoly, ParseError> {
        let err = |position, message: String| ParseError { position, message, source: self.source.clone() };
        let max_var = self.max_var();
        let n_vars = match opts.n_vars {
            Some(n) if n < max_var => return Err(err(0, format!("expression uses x{max_var} but only {n} variables were requested"))),
            Some(n) => n,
            None => max_var,
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut c = t.coeff.map_or(FieldElement::ONE, |c| coeff_value(&ctx, c));
            if t.negated {
                c = ctx.neg(c);
            }
            if c.is_zero() {
                return Err(err(t.position, "coefficient reduces to 0 in the field".to_owned()));
            }
            let mut exps = vec![0u64; n_vars];
            for &(i, e) in &t.factors {
                exps[i - 1] = exps[i - 1].checked_add(e).ok_or_else(|| err(t.position, "exponent overflow".to_owned()))?;
            }
            terms.push(Term::new(c, exps));
        }
        // sum of constants on the left; the equation's right side is its negation
        let lhs = self.constants.iter().fold(FieldElement::ZERO, |acc, &(neg, c)| {
            let v = coeff_value(&ctx, c);
            if neg {
                ctx.sub(acc, v)
            } else {
                ctx.add(acc, v)
            }
        });
        let b = ctx.neg(lhs);
        SparsePoly::new(ctx, n_vars, terms, b).map_err(|e| err(0, e.to_string()))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Int(v) => write!(f, "{v}"),
            Coeff::GenPow(k) => write!(f, "g^{k}"),
        }
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sign = |f: &mut fmt::Formatter<'_>, negated: bool| -> fmt::Result {
            let s = match (first, negated) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            first = false;
            f.write_str(s)
        };
        for t in &self.terms {
            sign(f, t.negated)?;
            if let Some(c) = t.coeff {
                write!(f, "{c}*")?;
            }
            for (k, &(i, e)) in t.factors.iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                write!(f, "x{i}^{e}")?;
            }
        }
        for &(negated, c) in &self.constants {
            sign(f, negated)?;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses `text` as a polynomial over `ctx`.
pub fn parse_poly(text: &str, ctx: Arc<FieldCtx>) -> Result<SparsePoly, ParseError> {
    parse_poly_with(text, ctx, &ParseOptions::default())
}

pub fn parse_poly_with(text: &str, ctx: Arc<FieldCtx>, opts: &ParseOptions) -> Result<SparsePoly, ParseError> {
    parse_expr(text, opts)?.to_poly(ctx, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(p: u64, m: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, m, None).unwrap())
    }

    #[test]
    fn quartic_sum() {
        let g = parse_poly("x^4 + y^4", field(3, 4)).unwrap();
        assert!(g.is_diagonal());
        assert_eq!(g.term_count(), 2);
        assert!(g.constant().is_zero());
    }

    #[test]
    fn generator_coefficients_and_constant() {
        let ctx = field(2, 8);
        let g = parse_poly("g*x^17 + g^18*y^17 - 1", ctx.clone()).unwrap();
        assert_eq!(g.term_count(), 2);
        assert_eq!(g.constant(), FieldElement::ONE);
        assert_eq!(g.terms()[0].coeff, ctx.gen_pow(1));
        assert_eq!(g.terms()[1].coeff, ctx.gen_pow(18));
        assert_eq!(g.terms()[1].exponents, vec![0, 17]);
    }

    #[test]
    fn indexed_variables_full_polynomial() {
        let f = parse_poly("x1^6*x2^2*x3 + x1*x2^7*x3^11", field(2, 4)).unwrap();
        assert_eq!(f.n_vars(), 3);
        assert!(f.is_full());
        assert_eq!(f.terms()[0].exponents, vec![6, 2, 1]);
        assert_eq!(f.terms()[1].exponents, vec![1, 7, 11]);
    }

    #[test]
    fn integers_reduce_mod_p_and_signs_apply() {
        let ctx = field(31, 1);
        let f = parse_poly("-11*x + 36*y - 2", ctx.clone()).unwrap();
        assert_eq!(f.terms()[0].coeff, ctx.from_int(-11));
        assert_eq!(f.terms()[1].coeff, ctx.from_int(5));
        // "... - 2 = 0" is "... = 2"
        assert_eq!(f.constant(), ctx.from_int(2));
        let g = parse_poly("x^7 + 2*x^7*y^21 - g", field(3, 6)).unwrap();
        assert_eq!(g.constant(), g.ctx().generator());
    }

    #[test]
    fn errors_carry_positions() {
        let ctx = field(5, 1);
        let e = parse_poly("x^4 + ", ctx.clone()).unwrap_err();
        assert_eq!(e.position, 6);
        let e = parse_poly("x^-1", ctx.clone()).unwrap_err();
        assert_eq!(e.position, 2);
        assert!(e.message.contains("negative"));
        let e = parse_poly("x*(y+1)", ctx.clone()).unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_poly("5*x", ctx.clone()).unwrap_err();
        assert!(e.message.contains("reduces to 0"));
        let e = parse_poly("x y", ctx.clone()).unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_expr("x^99", &ParseOptions { exponent_cap: 50, n_vars: None }).unwrap_err();
        assert!(e.message.contains("cap"));
        assert!(parse_poly("", ctx.clone()).is_err());
        assert!(parse_poly("x0", ctx).is_err());
        let shown = e.to_string();
        assert!(shown.ends_with("  ^"), "{shown}");
    }

    #[test]
    fn requested_variable_count() {
        let opts = ParseOptions { n_vars: Some(3), ..Default::default() };
        let g = parse_poly_with("x^5 + y^5", field(2, 4), &opts).unwrap();
        assert_eq!(g.n_vars(), 3);
        let opts = ParseOptions { n_vars: Some(1), ..Default::default() };
        assert!(parse_poly_with("x^5 + y^5", field(2, 4), &opts).is_err());
    }

    #[test]
    fn sparse_poly_display_round_trips() {
        let ctx = field(3, 6);
        let f = parse_poly("x^7 + 2*x^7*y^21 - g", ctx.clone()).unwrap();
        let again = parse_poly(&f.to_string(), ctx).unwrap();
        assert_eq!(again, f);
    }

    fn arb_coeff() -> impl Strategy<Value = Coeff> {
        prop_oneof![(1u64..50).prop_map(Coeff::Int), (0u64..50).prop_map(Coeff::GenPow)]
    }

    fn arb_expr() -> impl Strategy<Value = PolyExpr> {
        let term = (any::<bool>(), proptest::option::of(arb_coeff()), prop::collection::vec((1usize..5, 0u64..30), 1..4));
        (prop::collection::vec(term, 0..4), prop::collection::vec((any::<bool>(), arb_coeff()), 0..2))
            .prop_filter("non-empty", |(t, c)| !t.is_empty() || !c.is_empty())
            .prop_map(|(terms, constants)| PolyExpr {
                source: String::new(),
                terms: terms
                    .into_iter()
                    .map(|(negated, coeff, factors)| ExprTerm { negated, coeff, factors, position: 0 })
                    .collect(),
                constants,
            })
    }

    fn shape(e: &PolyExpr) -> (Vec<(bool, Option<Coeff>, Vec<(usize, u64)>)>, Vec<(bool, Coeff)>) {
        (
            e.terms.iter().map(|t| (t.negated, t.coeff, t.factors.clone())).collect(),
            e.constants.clone(),
        )
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(expr in arb_expr()) {
            let text = expr.to_string();
            let back = parse_expr(&text, &ParseOptions::default()).unwrap();
            prop_assert_eq!(shape(&back), shape(&expr));
        }
    }
}
