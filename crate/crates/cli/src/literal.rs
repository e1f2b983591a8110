//! Decimal Gaussian-integer literals and renderings.
//!
//! Accepted forms: `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i`, `a+i`, `a-i`, with
//! an optional leading sign. `−` (U+2212) is read as `-`. Components are
//! unbounded.

use gausshappy::digits::magnitude_digits;
use gausshappy::{Base, GaussianInt};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} at position {position}: {message}")]
pub struct ParseError {
    pub input: String,
    /// Character offset of the offending symbol.
    pub position: usize,
    pub message: &'static str,
}

struct Cursor<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn fail(&self, message: &'static str) -> ParseError {
        ParseError {
            input: self.input.to_string(),
            position: self.pos,
            message,
        }
    }

    /// `+1`, `-1`, or `None` if no sign is present.
    fn sign(&mut self) -> Option<i8> {
        let s = match self.peek()? {
            '+' => 1,
            '-' | '\u{2212}' => -1,
            _ => return None,
        };
        self.pos += 1;
        Some(s)
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        Some(text.parse().expect("ascii digits"))
    }

    fn eat_i(&mut self) -> bool {
        if self.peek() == Some('i') {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

fn signed(sign: Option<i8>, magnitude: BigInt) -> BigInt {
    if sign == Some(-1) {
        -magnitude
    } else {
        magnitude
    }
}

pub fn parse_gaussian(input: &str) -> Result<GaussianInt, ParseError> {
    let mut c = Cursor {
        input,
        chars: input.chars().collect(),
        pos: 0,
    };
    if c.chars.is_empty() {
        return Err(c.fail("empty literal"));
    }
    let lead = c.sign();
    let first = c.digits();
    if c.eat_i() {
        // Pure imaginary: `bi`, `i`, `-i`.
        let im = signed(lead, first.unwrap_or_else(|| BigInt::from(1)));
        return finish(c, GaussianInt::new(0, im));
    }
    let Some(first) = first else {
        return Err(c.fail("expected a digit or 'i'"));
    };
    let re = signed(lead, first);
    if c.peek().is_none() {
        return Ok(GaussianInt::new(re, 0));
    }
    let Some(sign) = c.sign() else {
        return Err(c.fail("expected '+', '-' or 'i'"));
    };
    let im = c.digits().unwrap_or_else(|| BigInt::from(1));
    if !c.eat_i() {
        return Err(c.fail("expected 'i'"));
    }
    finish(c, GaussianInt::new(re, signed(Some(sign), im)))
}

fn finish(c: Cursor<'_>, z: GaussianInt) -> Result<GaussianInt, ParseError> {
    match c.peek() {
        None => Ok(z),
        Some(_) => Err(c.fail("unexpected trailing input")),
    }
}

/// Canonical decimal rendering; inverse of [`parse_gaussian`].
pub fn render(z: &GaussianInt) -> String {
    z.to_string()
}

/// Magnitude of `n` written in base `B`: ordinary digits `0-9a-z` up to base
/// 36, otherwise decimal digit values separated by `:` in parentheses.
fn radix_magnitude(n: &BigUint, base: Base) -> String {
    let b = base.get();
    if b <= 36 {
        n.to_str_radix(b)
    } else {
        let digits: Vec<String> = magnitude_digits(n, base)
            .iter()
            .rev()
            .map(u32::to_string)
            .collect();
        if digits.is_empty() {
            return "0".into();
        }
        format!("({})", digits.join(":"))
    }
}

/// Rendering with both components written in base `B`, following the same
/// layout rules as [`render`].
pub fn render_digits(z: &GaussianInt, base: Base) -> String {
    let (re, im) = (z.re(), z.im());
    let re_text = radix_magnitude(re.magnitude(), base);
    let im_text = if im.magnitude().is_one() {
        String::new()
    } else {
        radix_magnitude(im.magnitude(), base)
    };
    let re_neg = re.sign() == Sign::Minus;
    let im_neg = im.sign() == Sign::Minus;
    match (re.sign() == Sign::NoSign, im.sign() == Sign::NoSign) {
        (true, true) => "0".into(),
        (false, true) => format!("{}{re_text}", if re_neg { "-" } else { "" }),
        (true, false) => format!("{}{im_text}i", if im_neg { "-" } else { "" }),
        (false, false) => format!(
            "{}{re_text}{}{im_text}i",
            if re_neg { "-" } else { "" },
            if im_neg { "-" } else { "+" }
        ),
    }
}
