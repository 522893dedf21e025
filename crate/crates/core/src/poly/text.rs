//! Text form of polynomials: `+`/`-` separated terms `c*x^k`, `x^k`, `c`.

use std::fmt;

use super::Poly;
use crate::error::{parse_err, Result};
use crate::field::{Fe, FieldSpec};

impl fmt::Display for Poly {
    /// Terms in descending degree with coefficients as field literals, e.g.
    /// `x^3+4*x`. The zero polynomial prints as `0`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let lit = self.field.format_element(c);
            match (k, c == Fe::ONE) {
                (0, _) => write!(out, "{lit}")?,
                (1, true) => write!(out, "x")?,
                (1, false) => write!(out, "{lit}*x")?,
                (_, true) => write!(out, "x^{k}")?,
                (_, false) => write!(out, "{lit}*x^{k}")?,
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let chars = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Cursor {
            chars,
            pos: 0,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.text.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<(usize, String)> {
        let start = self.offset();
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.pos += 1;
        }
        (!s.is_empty()).then_some((start, s))
    }
}

impl Poly {
    /// Parses the text form, e.g. `"x^9+x^5-x^4+x^3+x^2"` or
    /// `"[0,1]*x^2+2*x"`. Integer coefficients map through `Z → F_p`;
    /// repeated degrees are summed.
    pub fn parse(field: &FieldSpec, text: &str) -> Result<Poly> {
        let mut cur = Cursor::new(text);
        let mut coeffs: Vec<Fe> = Vec::new();
        if cur.peek().is_none() {
            return Err(parse_err(0, "empty polynomial"));
        }
        let mut first = true;
        while cur.peek().is_some() {
            let negative = match cur.peek() {
                Some('+') => {
                    cur.bump();
                    false
                }
                Some('-') | Some('\u{2212}') => {
                    cur.bump();
                    true
                }
                _ if first => false,
                _ => return Err(parse_err(cur.offset(), "expected '+' or '-'")),
            };
            first = false;
            let (c, k) = parse_term(field, &mut cur)?;
            let c = if negative { field.neg(c) } else { c };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Fe::ZERO);
            }
            coeffs[k] = field.add(coeffs[k], c);
        }
        Ok(Poly::new(field, coeffs))
    }
}

fn parse_term(field: &FieldSpec, cur: &mut Cursor<'_>) -> Result<(Fe, usize)> {
    let start = cur.offset();
    let coeff = match cur.peek() {
        Some('[') => {
            let open = cur.pos;
            while let Some(c) = cur.bump() {
                if c == ']' {
                    break;
                }
            }
            let lit: String = cur.chars[open..cur.pos.min(cur.chars.len())]
                .iter()
                .map(|&(_, c)| c)
                .collect();
            if !lit.ends_with(']') {
                return Err(parse_err(start, "unterminated element literal"));
            }
            Some(
                field
                    .parse_element(&lit)
                    .map_err(|e| parse_err(start, e.to_string()))?,
            )
        }
        Some(c) if c.is_ascii_digit() => {
            let (_, s) = cur.digits().expect("peeked a digit");
            let n: i64 = s
                .parse()
                .map_err(|_| parse_err(start, format!("coefficient {s} too large")))?;
            Some(field.from_int(n))
        }
        _ => None,
    };
    let has_x = match (coeff.is_some(), cur.peek()) {
        (true, Some('*')) => {
            cur.bump();
            if cur.peek() != Some('x') {
                return Err(parse_err(cur.offset(), "expected 'x' after '*'"));
            }
            cur.bump();
            true
        }
        (_, Some('x')) => {
            cur.bump();
            true
        }
        (true, _) => false,
        (false, _) => return Err(parse_err(start, "expected a coefficient or 'x'")),
    };
    let c = coeff.unwrap_or(Fe::ONE);
    if !has_x {
        return Ok((c, 0));
    }
    if cur.eat('^') {
        let at = cur.offset();
        let (_, s) = cur
            .digits()
            .ok_or_else(|| parse_err(at, "expected an exponent after '^'"))?;
        let k: usize = s
            .parse()
            .map_err(|_| parse_err(at, format!("exponent {s} too large")))?;
        if k > 1 << 20 {
            return Err(parse_err(at, format!("exponent {k} too large")));
        }
        Ok((c, k))
    } else {
        Ok((c, 1))
    }
}
