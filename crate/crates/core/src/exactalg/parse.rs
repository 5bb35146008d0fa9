//! Text grammar for polynomials.
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := ['+' | '-'] factor ('*' factor)*
//! factor := int ['/' int] | var ['^' int]
//! var    := 'x' int | 'c_' int | 'x' | 'y' | 'z' | 'w'
//! ```
//!
//! Variables are 1-based: `x1` and `c_1` both denote variable 0. The bare
//! letters `x, y, z, w` are shorthands for `x1..x4`. Whitespace is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Monomial, Polynomial};

/// Parses `text` into a polynomial. With `nvars = None` the number of
/// variables is the largest index mentioned; otherwise every index must fit.
pub fn parse_polynomial<F: Field>(text: &str, nvars: Option<usize>) -> Result<Polynomial<F>> {
    let mut p = Parser::new(text);
    let terms = p.poly()?;
    let needed = terms
        .iter()
        .filter_map(|(m, _)| m.max_var())
        .max()
        .map_or(0, |v| v + 1);
    let n = match nvars {
        Some(n) if needed > n => {
            return Err(Error::VariableOutOfRange {
                index: needed - 1,
                nvars: n,
            })
        }
        Some(n) => n,
        None => needed,
    };
    let mut out = Polynomial::zero(n);
    for (m, c) in terms {
        let c = F::from_rational(&c).ok_or_else(|| {
            Error::invalid(format!(
                "coefficient {c} is not defined in the field {}",
                F::tag()
            ))
        })?;
        out.add_term(m, c);
    }
    Ok(out)
}

struct Parser {
    chars: Vec<(char, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Self {
        let mut chars = Vec::new();
        let (mut line, mut col) = (1, 1);
        for ch in text.chars() {
            if ch == '\n' {
                line += 1;
                col = 1;
                continue;
            }
            if !ch.is_whitespace() {
                chars.push((ch, line, col));
            }
            col += 1;
        }
        Parser {
            chars,
            pos: 0,
            end: (line, col),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.0)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self
            .chars
            .get(self.pos)
            .map_or(self.end, |&(_, l, c)| (l, c));
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn poly(&mut self) -> Result<Vec<(Monomial, BigRational)>> {
        if self.peek().is_none() {
            return Err(self.error("empty polynomial"));
        }
        let mut terms = vec![self.term(true)?];
        while let Some(ch) = self.peek() {
            if ch != '+' && ch != '-' {
                return Err(self.error(format!("unexpected `{ch}`")));
            }
            terms.push(self.term(false)?);
        }
        Ok(terms)
    }

    fn term(&mut self, first: bool) -> Result<(Monomial, BigRational)> {
        let mut negative = false;
        match self.peek() {
            Some('+') => self.pos += 1,
            Some('-') => {
                negative = true;
                self.pos += 1;
            }
            _ if !first => return Err(self.error("expected `+` or `-`")),
            _ => {}
        }
        let mut coeff = BigRational::one();
        let mut mono = Monomial::one();
        loop {
            match self.factor()? {
                Factor::Scalar(c) => coeff *= c,
                Factor::Var(v, e) => mono = mono.mul(&Monomial::var_pow(v, e)),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if negative {
            coeff = -coeff;
        }
        Ok((mono, coeff))
    }

    fn factor(&mut self) -> Result<Factor> {
        match self.peek() {
            Some(ch) if ch.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den == BigInt::from(0) {
                        return Err(self.error("zero denominator"));
                    }
                    Ok(Factor::Scalar(BigRational::new(num, den)))
                } else {
                    Ok(Factor::Scalar(BigRational::from_integer(num)))
                }
            }
            Some(ch) if ch.is_ascii_alphabetic() => {
                let v = self.variable()?;
                let e = if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.integer()?;
                    u32::try_from(&e).map_err(|_| self.error("exponent too large"))?
                } else {
                    1
                };
                Ok(Factor::Var(v, e))
            }
            Some(ch) => Err(self.error(format!("unexpected `{ch}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().map(|c| c.0).collect()
    }

    fn integer(&mut self) -> Result<BigInt> {
        let s = self.digits();
        if s.is_empty() {
            return Err(self.error("expected an integer"));
        }
        Ok(s.parse().expect("digits parse"))
    }

    fn variable(&mut self) -> Result<usize> {
        let start = self.pos;
        let letter = self.peek().expect("checked by caller");
        self.pos += 1;
        if letter == 'c' && self.peek() == Some('_') {
            self.pos += 1;
        }
        let digits = self.digits();
        let index = if digits.is_empty() {
            match letter {
                'x' => Some(0),
                'y' => Some(1),
                'z' => Some(2),
                'w' => Some(3),
                _ => None,
            }
        } else if letter == 'x' || letter == 'c' {
            digits
                .parse::<usize>()
                .ok()
                .filter(|&i| i >= 1)
                .map(|i| i - 1)
        } else {
            None
        };
        match index {
            Some(i) => Ok(i),
            None => {
                self.pos = start;
                Err(self.error("unknown variable (use x1.., c_1.., or x, y, z, w)"))
            }
        }
    }
}

enum Factor {
    Scalar(BigRational),
    Var(usize, u32),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Fp;

    type Q = BigRational;

    #[test]
    fn parses_and_prints() {
        let p: Polynomial<Q> = parse_polynomial("3/4*x1^2 - x2 + 2", None).unwrap();
        assert_eq!(p.nvars(), 2);
        assert_eq!(p.to_string(), "3/4*x1^2 - x2 + 2");
        let again: Polynomial<Q> = parse_polynomial(&p.to_string(), Some(2)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn aliases_and_whitespace() {
        let a: Polynomial<Fp<2>> = parse_polynomial("x^3 + x^2 * y + y ^ 3", None).unwrap();
        let b: Polynomial<Fp<2>> = parse_polynomial("x1^3+x1^2*x2+x2^3", None).unwrap();
        assert_eq!(a, b);
        let c: Polynomial<Q> = parse_polynomial("c_1*c_3 - 1/4*c_2^2", None).unwrap();
        assert_eq!(c.nvars(), 3);
    }

    #[test]
    fn reports_positions() {
        let err = parse_polynomial::<Q>("x1^", None).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Parse {
                    line: 1,
                    column: 4,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_polynomial::<Q>("x1 +\n  q2", None).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Parse {
                    line: 2,
                    column: 3,
                    ..
                }
            ),
            "{err:?}"
        );
        assert!(parse_polynomial::<Q>("x0", None).is_err());
        assert!(parse_polynomial::<Q>("x3", Some(2)).is_err());
        assert!(parse_polynomial::<Fp<3>>("1/3*x1", None).is_err());
    }
}
