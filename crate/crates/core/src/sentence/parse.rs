//! Recursive-descent parser for the sentence grammar.
//!
//! Precedence, loosest first: `->` (right-associative), `\/`, `&`, `!`.
//! `+` is left-associative and binds tighter than `<=` and `=`. A quantifier
//! body extends to the end of the enclosing group.

use std::fmt;

use thiserror::Error;

use super::ast::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound variable `{name}` at {line}:{column}")]
    Unbound {
        name: String,
        line: usize,
        column: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Exists,
    Forall,
    Dot,
    LParen,
    RParen,
    Zero,
    One,
    Ident(String),
    Plus,
    Le,
    Eq,
    Bang,
    Amp,
    Or,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Exists => "exists",
            Tok::Forall => "forall",
            Tok::Dot => ".",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Zero => "0",
            Tok::One => "1",
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Plus => "+",
            Tok::Le => "<=",
            Tok::Eq => "=",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Or => "\\/",
            Tok::Arrow => "->",
            Tok::Eof => "end of input",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let mut adv = 1;
        match c {
            '\n' => {
                line += 1;
                col = 0;
            }
            c if c.is_whitespace() => {}
            '.' => out.push((Tok::Dot, pos)),
            '(' => out.push((Tok::LParen, pos)),
            ')' => out.push((Tok::RParen, pos)),
            '0' => out.push((Tok::Zero, pos)),
            '1' => out.push((Tok::One, pos)),
            '+' => out.push((Tok::Plus, pos)),
            '=' => out.push((Tok::Eq, pos)),
            '!' => out.push((Tok::Bang, pos)),
            '&' => out.push((Tok::Amp, pos)),
            '<' if chars.get(i + 1) == Some(&'=') => {
                out.push((Tok::Le, pos));
                adv = 2;
            }
            '\\' if chars.get(i + 1) == Some(&'/') => {
                out.push((Tok::Or, pos));
                adv = 2;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, pos));
                adv = 2;
            }
            c if c.is_ascii_lowercase() => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_lowercase() || chars[j].is_ascii_digit() || chars[j] == '_')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    _ => Tok::Ident(word),
                };
                out.push((tok, pos));
                adv = j - i;
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        }
        i += adv;
        col += adv;
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> Pos {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.here(), format!("expected {want}, found {}", self.peek())))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let (q, _) = self.bump();
                let mut vars = Vec::new();
                while let Tok::Ident(v) = self.peek().clone() {
                    self.bump();
                    vars.push(v);
                }
                if vars.is_empty() {
                    return Err(syntax(
                        self.here(),
                        format!("expected a variable after {q}, found {}", self.peek()),
                    ));
                }
                self.expect(Tok::Dot)?;
                let body = Box::new(self.formula()?);
                Ok(match q {
                    Tok::Exists => Formula::Exists(vars, body),
                    _ => Formula::Forall(vars, body),
                })
            }
            Tok::LParen => {
                // either a parenthesised formula or a term starting with `(`
                let save = self.pos;
                if let Ok(atom) = self.atom() {
                    return Ok(atom);
                }
                self.pos = save;
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Le => {
                self.bump();
                Ok(Formula::Leq(lhs, self.term()?))
            }
            Tok::Eq => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            other => Err(syntax(self.here(), format!("expected `<=` or `=`, found {other}"))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_primary()?;
        while *self.peek() == Tok::Plus {
            let plus = self.here();
            self.bump();
            let rhs = self.term_primary().map_err(|_| {
                syntax(plus, format!("dangling `+`: expected a term, found {}", self.peek()))
            })?;
            t = Term::join(t, rhs);
        }
        Ok(t)
    }

    fn term_primary(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(Term::One)
            }
            Tok::Ident(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(syntax(self.here(), format!("expected a term, found {other}"))),
        }
    }
}

/// Parses a sentence; free variables are rejected.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let f = parse_formula(text)?;
    check_bound(text, &f)?;
    Ok(f)
}

/// Parses a formula that may have free variables.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.here(), format!("unexpected {}", p.peek())));
    }
    Ok(f)
}

fn check_bound(text: &str, f: &Formula) -> Result<(), ParseError> {
    let Some(name) = f.free_vars().into_iter().next() else {
        return Ok(());
    };
    // first token position naming the variable
    let toks = lex(text)?;
    let pos = toks
        .iter()
        .find(|(t, _)| *t == Tok::Ident(name.clone()))
        .map(|(_, p)| *p)
        .unwrap_or(Pos { line: 1, column: 1 });
    Err(ParseError::Unbound {
        name,
        line: pos.line,
        column: pos.column,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_sentences() {
        assert_eq!(
            parse("exists x . x = x").unwrap(),
            Formula::exists(&["x"], Formula::Eq(Term::var("x"), Term::var("x")))
        );
        assert_eq!(
            parse("forall y . y <= 1").unwrap(),
            Formula::forall(&["y"], Formula::Leq(Term::var("y"), Term::One))
        );
    }

    #[test]
    fn dangling_join() {
        let err = parse("exists x . x + ").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 1,
                column: 14,
                message: "dangling `+`: expected a term, found `end of input`".into()
            }
        );
    }

    #[test]
    fn unbound_variable() {
        let err = parse("exists x . x <= y").unwrap_err();
        assert!(matches!(err, ParseError::Unbound { ref name, column: 17, .. } if name == "y"));
    }

    #[test]
    fn precedence_and_scope() {
        let f = parse("exists x . !(x = 0) & forall y . y <= x -> y = 0 \\/ y = x").unwrap();
        let expected = Formula::exists(
            &["x"],
            Formula::and(
                Formula::not(Formula::Eq(Term::var("x"), Term::Zero)),
                Formula::forall(
                    &["y"],
                    Formula::implies(
                        Formula::Leq(Term::var("y"), Term::var("x")),
                        Formula::or(
                            Formula::Eq(Term::var("y"), Term::Zero),
                            Formula::Eq(Term::var("y"), Term::var("x")),
                        ),
                    ),
                ),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parenthesised_terms_and_formulas() {
        let f = parse_formula("(x + y) + z = 1 & (x <= y)").unwrap();
        assert_eq!(f.to_string(), "x + y + z = 1 & x <= y");
        let f = parse_formula("x + (y + z) = 1").unwrap();
        assert_eq!(f.to_string(), "x + (y + z) = 1");
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "exists x y . x + y = 1 & !(x = 1) & !(y = 1)",
            "forall x . exists y . (x <= y & !(x = y)) \\/ x = 1",
            "!(forall x . exists y . !(x <= y))",
            "(exists x . x = 0) & (forall y . y <= 1)",
            "a <= b -> b <= a -> a = b",
        ] {
            let f = parse_formula(s).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{s}");
        }
    }
}
