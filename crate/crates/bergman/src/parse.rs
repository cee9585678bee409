//! Text descriptors for test functions:
//!
//! ```text
//! poly n=2 {(2,0):1.0, (1,1):-0.5i}
//! kernel n=2 a=(0.5,0) s=3.5 scale=1
//! ```
//!
//! Errors carry the line/column of the offending character.

use num_complex::Complex64;

use crate::ball::CPoint;
use crate::error::{Error, Result};
use crate::holo::HoloFunction;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
            line,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.error(format!(
                "expected `{}`, found `{}`",
                c as char, got as char
            ))),
            None => Err(self.error(format!("expected `{}`, found end of input", c as char))),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'-' || c == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| self.error(format!("bad integer: {e}")))
    }

    fn real(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| self.error(format!("bad number: {e}")))
    }

    /// Complex literal: `1.5`, `-0.5i`, `i`, `-i`, `1+2i`, `2-i`.
    fn complex(&mut self) -> Result<Complex64> {
        self.skip_ws();
        let first = self.signed_component()?;
        self.skip_ws();
        match (first, self.peek()) {
            ((re, false), Some(b'+') | Some(b'-')) => {
                let (mag, imag) = self.signed_component()?;
                if !imag {
                    return Err(self.error("second component of a complex literal must end in i"));
                }
                Ok(Complex64::new(re, mag))
            }
            ((im, true), _) => Ok(Complex64::new(0.0, im)),
            ((re, false), _) => Ok(Complex64::new(re, 0.0)),
        }
    }

    /// One signed component, returning (value, had-trailing-i).
    fn signed_component(&mut self) -> Result<(f64, bool)> {
        self.skip_ws();
        let sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1.0
            }
            Some(b'+') => {
                self.pos += 1;
                1.0
            }
            _ => 1.0,
        };
        // bare `i` / `-i`
        if self.peek() == Some(b'i') {
            self.pos += 1;
            return Ok((sign, true));
        }
        let mag = self.real()?;
        if self.peek() == Some(b'i') {
            self.pos += 1;
            Ok((sign * mag, true))
        } else {
            Ok((sign * mag, false))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

/// Parses one function descriptor. `line` seeds error positions when the
/// descriptor came from a larger file.
pub fn parse_function(src: &str, line: usize) -> Result<HoloFunction> {
    let mut cur = Cursor::new(src, line);
    let kind = cur.word();
    let f = match kind.as_str() {
        "poly" => parse_poly(&mut cur)?,
        "kernel" => parse_kernel(&mut cur)?,
        other => {
            return Err(cur.error(format!(
                "unknown function kind `{other}`; expected `poly` or `kernel`"
            )))
        }
    };
    if !cur.at_end() {
        return Err(cur.error("trailing input after descriptor"));
    }
    Ok(f)
}

fn parse_dim(cur: &mut Cursor) -> Result<usize> {
    if !cur.eat_keyword("n=") {
        return Err(cur.error("expected `n=<dimension>`"));
    }
    let n = cur.uint()? as usize;
    if n == 0 {
        return Err(cur.error("dimension must be >= 1"));
    }
    Ok(n)
}

fn parse_poly(cur: &mut Cursor) -> Result<HoloFunction> {
    let n = parse_dim(cur)?;
    cur.expect(b'{')?;
    let mut terms: Vec<(Vec<u32>, Complex64)> = Vec::new();
    loop {
        cur.skip_ws();
        if cur.peek() == Some(b'}') {
            cur.bump();
            break;
        }
        cur.expect(b'(')?;
        let mut m = vec![cur.uint()?];
        loop {
            cur.skip_ws();
            match cur.peek() {
                Some(b',') => {
                    cur.bump();
                    m.push(cur.uint()?);
                }
                Some(b')') => {
                    cur.bump();
                    break;
                }
                _ => return Err(cur.error("expected `,` or `)` in multi-index")),
            }
        }
        if m.len() != n {
            return Err(cur.error(format!(
                "multi-index has {} entries but n={n}",
                m.len()
            )));
        }
        cur.expect(b':')?;
        let coeff = cur.complex()?;
        terms.push((m, coeff));
        cur.skip_ws();
        if cur.peek() == Some(b',') {
            cur.bump();
        }
    }
    if terms.is_empty() {
        return Err(cur.error("polynomial needs at least one term"));
    }
    Ok(HoloFunction::Polynomial { n, terms })
}

fn parse_kernel(cur: &mut Cursor) -> Result<HoloFunction> {
    let n = parse_dim(cur)?;
    if !cur.eat_keyword("a=") {
        return Err(cur.error("expected `a=(<coords>)`"));
    }
    cur.expect(b'(')?;
    let mut coords = vec![cur.complex()?];
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(b',') => {
                cur.bump();
                coords.push(cur.complex()?);
            }
            Some(b')') => {
                cur.bump();
                break;
            }
            _ => return Err(cur.error("expected `,` or `)` in center coordinates")),
        }
    }
    if coords.len() != n {
        return Err(cur.error(format!("center has {} coordinates but n={n}", coords.len())));
    }
    let center = CPoint::new(coords);
    if !center.is_interior() {
        return Err(cur.error("kernel center must lie strictly inside the ball"));
    }
    if !cur.eat_keyword("s=") {
        return Err(cur.error("expected `s=<exponent>`"));
    }
    let s = cur.real()?;
    if !(s > 0.0) {
        return Err(cur.error("kernel exponent must be positive"));
    }
    let scale = if cur.eat_keyword("scale=") {
        cur.complex()?
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(HoloFunction::kernel_power(center, s, scale))
}
