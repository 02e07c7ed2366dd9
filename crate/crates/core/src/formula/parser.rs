//! Recursive-descent parser for the formula text format:
//!
//! ```text
//! input   := "vars" ident ("," ident)* ";" formula
//! formula := conj ("\/" conj)*
//! conj    := unit ("/\" unit)*
//! unit    := "~" unit | "(" formula ")" | poly rel poly
//! rel     := "<" | "<=" | ">" | ">=" | "=" | "/="
//! ```
//!
//! Polynomials use integer coefficients, `+`, `-`, optional `*` and `^`
//! with positive integer exponents; juxtaposition multiplies (`16y`).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Formula, Node, Relation};
use crate::polynomial::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UndeclaredVariable(String),
    DuplicateVariable(String),
    NonIntegerCoefficient,
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UndeclaredVariable(v) => write!(f, "undeclared variable `{v}`"),
            ParseErrorKind::DuplicateVariable(v) => write!(f, "variable `{v}` declared twice"),
            ParseErrorKind::NonIntegerCoefficient => f.write_str("non-integer coefficient"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Comma,
    Semi,
    LParen,
    RParen,
    And,
    Or,
    Not,
    Rel(Relation),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("`{s}`"),
            Tok::Int(n) => alloc::format!("`{n}`"),
            Tok::Plus => "`+`".to_string(),
            Tok::Minus => "`-`".to_string(),
            Tok::Star => "`*`".to_string(),
            Tok::Caret => "`^`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::And => "`/\\`".to_string(),
            Tok::Or => "`\\/`".to_string(),
            Tok::Not => "`~`".to_string(),
            Tok::Rel(r) => alloc::format!("`{}`", r.symbol()),
            Tok::End => "end of input".to_string(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    let err = |line, column, kind| ParseError { line, column, kind };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let next = chars.get(i + 1).copied();
        let mut advance = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                column += 1;
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j < chars.len() && chars[j] == '.' {
                    return Err(err(tl, tc, ParseErrorKind::NonIntegerCoefficient));
                }
                if j + 1 < chars.len() && chars[j] == '/' && chars[j + 1].is_ascii_digit() {
                    return Err(err(tl, tc, ParseErrorKind::NonIntegerCoefficient));
                }
                advance = j - start;
                let digits: String = chars[start..j].iter().collect();
                Tok::Int(digits.parse().expect("decimal digits"))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                advance = j - start;
                Tok::Ident(chars[start..j].iter().collect())
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '~' => Tok::Not,
            '/' if next == Some('\\') => {
                advance = 2;
                Tok::And
            }
            '/' if next == Some('=') => {
                advance = 2;
                Tok::Rel(Relation::Ne)
            }
            '/' if next.is_some_and(|n| n.is_ascii_digit()) => {
                return Err(err(tl, tc, ParseErrorKind::NonIntegerCoefficient));
            }
            '\\' if next == Some('/') => {
                advance = 2;
                Tok::Or
            }
            '<' if next == Some('=') => {
                advance = 2;
                Tok::Rel(Relation::Le)
            }
            '>' if next == Some('=') => {
                advance = 2;
                Tok::Rel(Relation::Ge)
            }
            '<' => Tok::Rel(Relation::Lt),
            '>' => Tok::Rel(Relation::Gt),
            '=' => Tok::Rel(Relation::Eq),
            '.' => return Err(err(tl, tc, ParseErrorKind::NonIntegerCoefficient)),
            other => {
                return Err(err(
                    tl,
                    tc,
                    ParseErrorKind::Syntax(alloc::format!("unexpected character `{other}`")),
                ))
            }
        };
        out.push(Spanned {
            tok,
            line: tl,
            column: tc,
        });
        i += advance;
        column += advance;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            kind,
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = self.peek().describe();
        self.error_here(ParseErrorKind::Syntax(alloc::format!(
            "expected {wanted}, found {found}"
        )))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn header(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == "vars" => {
                self.bump();
            }
            _ => return Err(self.unexpected("`vars`")),
        }
        loop {
            match self.peek().clone() {
                Tok::Ident(name) => {
                    if self.vars.contains(&name) {
                        return Err(self.error_here(ParseErrorKind::DuplicateVariable(name)));
                    }
                    self.bump();
                    self.vars.push(name);
                }
                _ => return Err(self.unexpected("a variable name")),
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::Semi => {
                    self.bump();
                    return Ok(());
                }
                _ => return Err(self.unexpected("`,` or `;`")),
            }
        }
    }

    fn formula(&mut self) -> Result<Node, ParseError> {
        let mut parts = alloc::vec![self.conj()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conj()?);
        }
        Ok(Node::or(parts))
    }

    fn conj(&mut self) -> Result<Node, ParseError> {
        let mut parts = alloc::vec![self.unit()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unit()?);
        }
        Ok(Node::and(parts))
    }

    fn unit(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unit()?.negate())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => {
                let lhs = self.poly()?;
                let rel = match self.peek() {
                    Tok::Rel(r) => *r,
                    _ => return Err(self.unexpected("a relation")),
                };
                self.bump();
                let rhs = self.poly()?;
                Ok(Node::atom(&lhs - &rhs, rel))
            }
        }
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            let negative = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
        }
    }

    /// A product of factors, optionally preceded by unary signs.
    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut negative = false;
        loop {
            match self.peek() {
                Tok::Minus => negative = !negative,
                Tok::Plus => {}
                _ => break,
            }
            self.bump();
        }
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                }
                Tok::Ident(_) | Tok::Int(_) => {}
                _ => break,
            }
            acc = &acc * &self.factor()?;
        }
        Ok(if negative { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let n = self.vars.len();
        let base = match self.peek().clone() {
            Tok::Int(c) => {
                self.bump();
                Poly::constant(n, c)
            }
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => {
                    self.bump();
                    Poly::var(n, i)
                }
                None => return Err(self.error_here(ParseErrorKind::UndeclaredVariable(name))),
            },
            _ => return Err(self.unexpected("a number or variable")),
        };
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(e) => match e.to_u32() {
                Some(e) if e > 0 => {
                    self.bump();
                    Ok(base.pow(e))
                }
                _ => Err(self.error_here(ParseErrorKind::Syntax(
                    "exponent must be a positive integer".to_string(),
                ))),
            },
            _ => Err(self.unexpected("an exponent")),
        }
    }
}

/// Parses `vars x, y; <formula>`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        vars: Vec::new(),
    };
    p.header()?;
    let body = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("`/\\`, `\\/` or end of input"));
    }
    Ok(Formula::new(p.vars, body))
}

/// Parses a polynomial in the given variables, e.g. `x^2 + y^2 - 1`.
pub fn parse_poly<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Poly, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        vars: vars.iter().map(|v| v.as_ref().into()).collect(),
    };
    let poly = p.poly()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("`+`, `-` or end of input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Atom;
    use alloc::vec;
    use proptest::prelude::*;

    fn atom_of(f: &Formula, i: usize) -> Atom {
        f.atoms()[i].clone()
    }

    #[test]
    fn polynomial_text_round_trip() {
        let vars = ["x", "y"];
        let f = parse_poly("16y - 16x^2 - 8x - 1", &vars).unwrap();
        assert_eq!(parse_poly(&f.to_text(&vars), &vars).unwrap(), f);
        assert!(parse_poly("z + 1", &vars).is_err());
        assert!(parse_poly("x > 1", &vars).is_err());
    }

    #[test]
    fn negation_pushed_to_atom() {
        let f = parse_formula("vars x, y; ~(x = 0) \\/ y >= 1").unwrap();
        match f.body() {
            Node::Or(parts) => assert_eq!(parts.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(atom_of(&f, 0).relation(), Relation::Ne);
        assert_eq!(atom_of(&f, 1).relation(), Relation::Ge);
        assert_eq!(atom_of(&f, 1).poly().to_text(&["x", "y"]), "y-1");
    }

    #[test]
    fn constants_fold() {
        let f = parse_formula("vars x; 0 < 1").unwrap();
        assert_eq!(f.body(), &Node::True);
        let g = parse_formula("vars x; x > 0 /\\ 2 < 1").unwrap();
        assert_eq!(g.body(), &Node::False);
    }

    #[test]
    fn operators_and_juxtaposition() {
        let f = parse_formula("vars x, y; 3x y^2 - 2*x^3 + -1 < x").unwrap();
        assert_eq!(atom_of(&f, 0).poly().to_text(&["x", "y"]), "3x*y^2-2x^3-x-1");
        let g = parse_formula("vars a; -a > 0").unwrap();
        assert_eq!(atom_of(&g, 0).poly().to_text(&["a"]), "a");
        assert_eq!(atom_of(&g, 0).relation(), Relation::Lt);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("vars x;\n  x + z > 0").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        assert_eq!(e.kind, ParseErrorKind::UndeclaredVariable("z".into()));
        let e = parse_formula("vars x; 1.5x > 0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonIntegerCoefficient);
        let e = parse_formula("vars x; x/2 > 0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonIntegerCoefficient);
        let e = parse_formula("vars x; x > ").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.column), (1, 13));
        let e = parse_formula("x > 0").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_formula("vars x, x; x > 0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateVariable("x".into()));
        let e = parse_formula("vars x; (x > 0").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        let e = parse_formula("vars x; x^0 > 0").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn print_parse_examples() {
        for text in [
            "vars x, y; 16y - 16x^2 - 8x - 1 > 0 /\\ x^2 + y^2 - 1 > 0",
            "vars x, y; (x > 0 \\/ y < 0) /\\ ~(x*y = 1 /\\ y /= 2)",
            "vars x; 0 < 1",
            "vars x; 1 < 0",
            "vars u, v, w; u - v <= w^3 \\/ (w > 0 /\\ (u > 1 \\/ v > 1))",
        ] {
            let f = parse_formula(text).unwrap();
            let printed = f.to_text();
            let again = parse_formula(&printed).unwrap();
            assert_eq!(again, f, "{printed}");
            assert_eq!(again.to_text(), printed);
        }
    }

    fn arb_poly_text() -> impl Strategy<Value = String> {
        let term = (-9i64..10, 0u32..3, 0u32..3).prop_map(|(c, a, b)| {
            let mut s = alloc::format!("{c}");
            if a > 0 {
                s += &alloc::format!("*x^{a}");
            }
            if b > 0 {
                s += &alloc::format!("*y^{b}");
            }
            s
        });
        proptest::collection::vec(term, 1..4).prop_map(|ts| ts.join(" + "))
    }

    fn arb_formula_text() -> impl Strategy<Value = String> {
        let rel = prop_oneof![Just("<"), Just("<="), Just(">"), Just(">="), Just("="), Just("/=")];
        let leaf = (arb_poly_text(), rel, arb_poly_text()).prop_map(|(a, r, b)| alloc::format!("{a} {r} {b}"));
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|f| alloc::format!("~({f})")),
                proptest::collection::vec(inner.clone(), 2..4).prop_map(|fs| alloc::format!("({})", fs.join(" /\\ "))),
                proptest::collection::vec(inner, 2..4).prop_map(|fs| alloc::format!("({})", fs.join(" \\/ "))),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_print_roundtrip(body in arb_formula_text()) {
            let f = parse_formula(&alloc::format!("vars x, y; {body}")).unwrap();
            let again = parse_formula(&f.to_text()).unwrap();
            prop_assert_eq!(&again, &f);
        }

        #[test]
        fn negation_complements_truth(body in arb_formula_text(), a in -5i64..5, b in -5i64..5) {
            let f = parse_formula(&alloc::format!("vars x, y; {body}")).unwrap();
            let g = parse_formula(&alloc::format!("vars x, y; ~({body})")).unwrap();
            let point = vec![
                crate::polynomial::Rational::from_integer(a.into()),
                crate::polynomial::Rational::from_integer(b.into()),
            ];
            prop_assert_eq!(f.evaluate(&point), !g.evaluate(&point));
        }
    }
}
