//! Text front end for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/')? factor)*
//! factor := ('+' | '-') factor | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies, so `2x^2y` reads as `2*x^2*y`. Division is only
//! allowed by nonzero constants, which is how `p/q` coefficients are written.
//! Negative powers are only allowed on single terms.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{default_vars, Monomial, Poly};
use crate::error::{Error, Result};
use crate::exactla::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits parse"))));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((
                pos,
                Tok::Ident(chars[start..i].iter().map(|x| x.1).collect()),
            ));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let divisor = self.factor()?;
                    let c = constant_value(&divisor).filter(|c| !c.is_zero());
                    let Some(c) = c else {
                        return Err(Error::Syntax {
                            pos,
                            msg: "division is only allowed by a nonzero constant".into(),
                        });
                    };
                    acc = acc.scale(&c.recip());
                }
                Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(-&self.factor()?)
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let pos = self.pos();
        let Some(Tok::Int(e)) = self.peek().cloned() else {
            return self.err("expected an integer exponent");
        };
        self.at += 1;
        let e: u32 = e.try_into().map_err(|_| Error::Syntax {
            pos,
            msg: "exponent too large".into(),
        })?;
        if !negative {
            return Ok(base.pow(e));
        }
        if base.num_terms() != 1 {
            return Err(Error::Syntax {
                pos,
                msg: "negative powers are only allowed on a single term".into(),
            });
        }
        let (m, c) = base.terms().next().expect("one term");
        let inv = Monomial::new(m.exponents().iter().map(|x| -x * e as i32).collect());
        let coeff = num_traits::pow(c.recip(), e as usize);
        Ok(Poly::term(inv, coeff))
    }

    fn atom(&mut self) -> Result<Poly> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                Ok(Poly::constant(self.n(), Rational::from_integer(v)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                self.variable_product(&name, pos)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    /// A name is a declared variable, or a run of single-letter variables
    /// such as `xy`.
    fn variable_product(&self, name: &str, pos: usize) -> Result<Poly> {
        let n = self.n();
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Ok(Poly::var(n, i));
        }
        let mut acc = Poly::constant(n, Rational::one());
        for ch in name.chars() {
            let Some(i) = self.vars.iter().position(|v| *v == ch.to_string()) else {
                return Err(Error::UnknownVariable {
                    name: name.to_string(),
                    pos,
                });
            };
            acc = &acc * &Poly::var(n, i);
        }
        Ok(acc)
    }
}

fn constant_value(p: &Poly) -> Option<Rational> {
    match p.num_terms() {
        0 => Some(Rational::zero()),
        1 => {
            let (m, c) = p.terms().next()?;
            (m.degree() == 0 && m.exponents().iter().all(|&e| e == 0)).then(|| c.clone())
        }
        _ => None,
    }
}

/// Parses `text` as a polynomial in the given variables.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly> {
    if vars.is_empty() {
        return Err(Error::Input("empty variable list".into()));
    }
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        vars,
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Parses with the conventional names `x, y, z` (or `x1 … xn`) for `n`
/// variables.
pub fn parse_poly_auto(text: &str, n: usize) -> Result<Poly> {
    parse_poly(text, &default_vars(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::qf;

    fn xyz() -> Vec<String> {
        default_vars(3)
    }

    #[test]
    fn parses_examples() {
        let f = parse_poly("x^5+y^4*z+x^4*y", &xyz()).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert!(parse_poly("0", &xyz()).unwrap().is_zero());
        assert!(parse_poly("x*y - y*x", &xyz()).unwrap().is_zero());
        let g = parse_poly("2x^2y - 3/5*z", &xyz()).unwrap();
        assert_eq!(g.coeff(&Monomial::new(vec![2, 1, 0])), crate::exactla::q(2));
        assert_eq!(g.coeff(&Monomial::new(vec![0, 0, 1])), qf(-3, 5));
        let l = parse_poly("(1/5)*x^3*y^-1", &xyz()).unwrap();
        assert_eq!(l.coeff(&Monomial::new(vec![3, -1, 0])), qf(1, 5));
        assert_eq!(
            parse_poly("(x+y)^2", &xyz()).unwrap(),
            parse_poly("x^2 + 2xy + y^2", &xyz()).unwrap()
        );
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(
            parse_poly("x + w", &xyz()),
            Err(Error::UnknownVariable { pos: 4, .. })
        ));
        assert!(matches!(
            parse_poly("x +", &xyz()),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_poly("x / y", &xyz()),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("(x+y)^-1", &xyz()),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("x $ y", &xyz()),
            Err(Error::Syntax { pos: 2, .. })
        ));
    }

    #[test]
    fn canonical_text_round_trips() {
        let vars = xyz();
        for text in [
            "x^5 + x^4*y + y^4*z",
            "-3/5*x^2*y^3 + 7*z - 1",
            "x^3*y^-1",
            "0",
        ] {
            let p = parse_poly(text, &vars).unwrap();
            assert_eq!(p.display(&vars).to_string(), text);
        }
    }
}
