//! LL(1) recursive descent over bytes. Arity and ranges are checked as soon
//! as a call closes, so every error carries the byte offset of its cause.

use super::{Arg, Builtin, Expr};
use crate::error::{Error, Result};

/// Parses one expression; trailing input other than whitespace is an error.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), text, pos: 0 };
    let expr = p.call()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected("end of input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Number,
    Expr,
    NumberOrText,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Number => "number",
            Kind::Expr => "expression",
            Kind::NumberOrText => "number or string",
        }
    }
}

fn describe_arg(arg: &Arg) -> &'static str {
    match arg {
        Arg::Number(_) => "number",
        Arg::Text(_) => "string",
        Arg::Expr(_) => "expression",
    }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Describes whatever sits at the cursor, for error messages.
    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(_) => {
                let ch = self.text[self.pos..].chars().next().expect("char boundary");
                if ch.is_ascii_alphabetic() || ch == '_' {
                    let end = self.ident_end(self.pos);
                    format!("identifier '{}'", &self.text[self.pos..end])
                } else {
                    format!("'{ch}'")
                }
            }
        }
    }

    fn unexpected(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
            found: self.found(),
        }
    }

    fn ident_end(&self, start: usize) -> usize {
        let mut end = start;
        while end < self.src.len() && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_') {
            end += 1;
        }
        end
    }

    fn expect(&mut self, byte: u8, expected: &str) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn call(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
            _ => return Err(self.unexpected("function name")),
        }
        let end = self.ident_end(start);
        let name = &self.text[start..end];
        let builtin = Builtin::from_name(name).ok_or_else(|| Error::Parse {
            offset: start,
            expected: "function name".to_string(),
            found: format!("unknown function '{name}'"),
        })?;
        self.pos = end;
        self.expect(b'(', "'('")?;

        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b')') {
            self.pos += 1;
        } else {
            loop {
                self.skip_ws();
                let at = self.pos;
                let arg = self.arg()?;
                args.push((arg, at));
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.unexpected("',' or ')'")),
                }
            }
        }
        check_call(builtin, start, &args)?;
        Ok(Expr::new(builtin, args.into_iter().map(|(a, _)| a).collect()))
    }

    fn arg(&mut self) -> Result<Arg> {
        match self.peek() {
            Some(b'"') => self.string().map(Arg::Text),
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' || c == b'.' => self.number().map(Arg::Number),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.call().map(Arg::Expr),
            _ => Err(self.unexpected("number, string or expression")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let mut i = self.pos;
        let digits = |i: &mut usize, src: &[u8]| {
            let s = *i;
            while *i < src.len() && src[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        if matches!(self.src.get(i), Some(b'-' | b'+')) {
            i += 1;
        }
        let mut mantissa = digits(&mut i, self.src);
        if self.src.get(i) == Some(&b'.') {
            i += 1;
            mantissa += digits(&mut i, self.src);
        }
        if mantissa == 0 {
            self.pos = i;
            return Err(self.unexpected("digit"));
        }
        if matches!(self.src.get(i), Some(b'e' | b'E')) {
            i += 1;
            if matches!(self.src.get(i), Some(b'-' | b'+')) {
                i += 1;
            }
            if digits(&mut i, self.src) == 0 {
                self.pos = i;
                return Err(self.unexpected("exponent digit"));
            }
        }
        let literal = &self.text[start..i];
        let value: f64 = literal.parse().map_err(|_| Error::Parse {
            offset: start,
            expected: "number".to_string(),
            found: format!("'{literal}'"),
        })?;
        if !value.is_finite() {
            return Err(Error::Range {
                offset: start,
                message: format!("number {literal} overflows a 64-bit float"),
            });
        }
        self.pos = i;
        Ok(value)
    }

    fn string(&mut self) -> Result<String> {
        self.pos += 1;
        let mut out = String::new();
        loop {
            let Some(ch) = self.text[self.pos..].chars().next() else {
                return Err(self.unexpected("'\"'"));
            };
            self.pos += ch.len_utf8();
            match ch {
                '"' => return Ok(out),
                '\\' => {
                    let esc = self.peek();
                    match esc {
                        Some(b'"') => out.push('"'),
                        Some(b'\\') => out.push('\\'),
                        Some(b'n') => out.push('\n'),
                        Some(b't') => out.push('\t'),
                        _ => return Err(self.unexpected("escape sequence")),
                    }
                    self.pos += 1;
                }
                c => out.push(c),
            }
        }
    }
}

fn arity(b: Builtin) -> (usize, Option<usize>) {
    use Builtin::*;
    match b {
        Gumbel | FreeExp => (0, Some(0)),
        Frechet | Weibull | Pareto | BetaLaw | Lambda | Chi | ChiInv | Tocl | Tobool | Dirac => (1, Some(1)),
        Dagum | Cpc | Cpf | Maxc | Maxf | Maxb | Powc | Powf | Powb | Bn | Truncate => (2, Some(2)),
        Prelimit => (3, Some(3)),
        Scale => (2, Some(3)),
        Empirical => (1, None),
    }
}

fn kind(b: Builtin, i: usize) -> Kind {
    use Builtin::*;
    match (b, i) {
        (Cpc | Cpf | Prelimit, 1) => Kind::Expr,
        (Maxc | Maxf | Maxb, _) => Kind::Expr,
        (Powc | Powf | Powb | Bn | Scale | Truncate, 0) => Kind::Expr,
        (Lambda | Chi | ChiInv | Tocl | Tobool, _) => Kind::Expr,
        (Empirical, 0) => Kind::NumberOrText,
        _ => Kind::Number,
    }
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        "argument"
    } else {
        "arguments"
    }
}

fn check_call(b: Builtin, offset: usize, args: &[(Arg, usize)]) -> Result<()> {
    let n = args.len();
    let (min, max) = arity(b);
    let mut expected = match max {
        Some(m) if m == min => format!("{min} {}", plural(min)),
        Some(m) => format!("{min} or {m} arguments"),
        None => format!("at least {min} {}", plural(min)),
    };
    let mut bad = n < min || max.is_some_and(|m| n > m);
    if b == Builtin::Empirical && matches!(args.first(), Some((Arg::Text(_), _))) && n != 1 {
        expected = "1 argument when given a path".to_string();
        bad = true;
    }
    if bad {
        return Err(Error::Arity {
            offset,
            name: b.name().to_string(),
            expected,
            found: n,
        });
    }
    for (i, (arg, at)) in args.iter().enumerate() {
        let want = kind(b, i);
        let ok = matches!(
            (want, arg),
            (Kind::Number, Arg::Number(_))
                | (Kind::Expr, Arg::Expr(_))
                | (Kind::NumberOrText, Arg::Number(_) | Arg::Text(_))
        );
        if !ok {
            return Err(Error::Parse {
                offset: *at,
                expected: format!("{} as argument {} of {}", want.describe(), i + 1, b.name()),
                found: describe_arg(arg).to_string(),
            });
        }
        if let Arg::Number(v) = arg {
            if let Some(message) = range_violation(b, i, *v, args) {
                return Err(Error::Range { offset: *at, message });
            }
        }
    }
    Ok(())
}

fn range_violation(b: Builtin, i: usize, v: f64, args: &[(Arg, usize)]) -> Option<String> {
    use Builtin::*;
    let name = b.name();
    let fail = |what: &str| Some(format!("{name}: {what}, got {v}"));
    match (b, i) {
        (Frechet | Weibull | Pareto | BetaLaw, 0) | (Dagum, 1) if v <= 0.0 => fail("index must be > 0"),
        (Dagum, 0) if v <= 0.0 => fail("scale lambda must be > 0"),
        (Cpc | Cpf | Prelimit, 0) if v < 0.0 => fail("intensity lambda must be >= 0"),
        (Prelimit, 2) => {
            let lambda = match args[0].0 {
                Arg::Number(l) => l,
                _ => 0.0,
            };
            if (v - v.round()).abs() > 1e-9 {
                fail("N must be an integer")
            } else if v.round() < 1.0 || v.round() < lambda {
                fail("N must be >= max(1, lambda)")
            } else {
                None
            }
        }
        (Powc, 1) if v <= 0.0 => fail("classical power t must be > 0"),
        (Powf, 1) if v < 1.0 => fail("free power t must be >= 1"),
        (Powb, 1) if v < 0.0 => fail("Boolean power t must be >= 0"),
        (Bn, 1) if v < 0.0 => fail("time t must be >= 0"),
        (Scale, 1) if v <= 0.0 => fail("scale a must be > 0"),
        _ => None,
    }
}
