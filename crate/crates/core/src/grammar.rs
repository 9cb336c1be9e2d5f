//! Tokenizer shared by the symbol and weight description grammars.
//!
//! A description is a prefix expression: `name arg arg ...`, where an
//! argument is a bare word, a parenthesized sub-expression, or a bracketed
//! comma-separated list.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Word(String),
    Open,
    Close,
    OpenList,
    CloseList,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub token: Token,
    pub pos: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut word_start: Option<usize> = None;
    let flush = |out: &mut Vec<Spanned>, start: &mut Option<usize>, end: usize| {
        if let Some(s) = start.take() {
            out.push(Spanned { token: Token::Word(text[s..end].to_string()), pos: s });
        }
    };
    for (i, ch) in text.char_indices() {
        let single = match ch {
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            '[' => Some(Token::OpenList),
            ']' => Some(Token::CloseList),
            ',' => Some(Token::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            flush(&mut out, &mut word_start, i);
            out.push(Spanned { token: tok, pos: i });
        } else if ch.is_whitespace() {
            flush(&mut out, &mut word_start, i);
        } else if word_start.is_none() {
            word_start = Some(i);
        }
    }
    flush(&mut out, &mut word_start, text.len());
    Ok(out)
}

/// Cursor over a token stream.
pub struct Cursor<'a> {
    tokens: &'a [Spanned],
    at: usize,
    end_pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(tokens: &'a [Spanned], end_pos: usize) -> Self {
        Self { tokens, at: 0, end_pos }
    }

    pub fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end_pos, |t| t.pos)
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|t| &t.token)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.at).map(|t| &t.token);
        self.at += 1;
        t
    }

    pub fn at_end(&self) -> bool {
        self.at >= self.tokens.len()
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos(), msg: msg.into() }
    }

    pub fn expect(&mut self, want: Token) -> Result<()> {
        let pos = self.pos();
        match self.next() {
            Some(t) if *t == want => Ok(()),
            other => Err(Error::Parse { pos, msg: format!("expected {want:?}, found {other:?}") }),
        }
    }

    pub fn word(&mut self) -> Result<String> {
        let pos = self.pos();
        match self.next() {
            Some(Token::Word(w)) => Ok(w.clone()),
            other => Err(Error::Parse { pos, msg: format!("expected a word, found {other:?}") }),
        }
    }

    pub fn real(&mut self) -> Result<f64> {
        let pos = self.pos();
        let w = self.word()?;
        parse_real(&w).ok_or(Error::Parse { pos, msg: format!("not a real number: {w}") })
    }

    pub fn complex(&mut self) -> Result<Complex64> {
        let pos = self.pos();
        let w = self.word()?;
        parse_complex(&w).ok_or(Error::Parse { pos, msg: format!("not a complex number: {w}") })
    }

    /// `[a, b, ...]` of complex numbers.
    pub fn complex_list(&mut self) -> Result<Vec<Complex64>> {
        self.expect(Token::OpenList)?;
        let mut out = Vec::new();
        if self.peek() == Some(&Token::CloseList) {
            self.next();
            return Ok(out);
        }
        loop {
            out.push(self.complex()?);
            let pos = self.pos();
            match self.next() {
                Some(Token::Comma) => {}
                Some(Token::CloseList) => return Ok(out),
                other => return Err(Error::Parse { pos, msg: format!("expected , or ], found {other:?}") }),
            }
        }
    }
}

pub fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}

/// Accepts `1.5`, `-2i`, `i`, `0.5+0.3i`, `1e-3-2e-1i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let (re, im) = match split {
            Some(i) => (parse_real(&body[..i])?, &body[i..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other)?,
        };
        Some(Complex64::new(re, im))
    } else {
        parse_real(s).map(|re| Complex64::new(re, 0.0))
    }
}

/// Formats a complex number in the grammar's literal syntax.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 || z.im.is_sign_negative() {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5+0i"), Some(Complex64::new(0.5, 0.0)));
        assert_eq!(parse_complex("-0.5i"), Some(Complex64::new(0.0, -0.5)));
        assert_eq!(parse_complex("i"), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3-2e-1i"), Some(Complex64::new(1e-3, -0.2)));
        assert_eq!(parse_complex("0.3"), Some(Complex64::new(0.3, 0.0)));
        assert_eq!(parse_complex("x"), None);
        assert_eq!(parse_complex("nan"), None);
    }

    #[test]
    fn format_roundtrip() {
        for z in [Complex64::new(0.5, -0.25), Complex64::new(-1.0, 2.0), Complex64::new(0.1, 0.0)] {
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
    }

    #[test]
    fn tokens() {
        let t = tokenize("compose (mobius 0.3) [1, -2i]").unwrap();
        let kinds: Vec<_> = t.iter().map(|s| s.token.clone()).collect();
        assert_eq!(kinds[0], Token::Word("compose".into()));
        assert_eq!(kinds[1], Token::Open);
        assert_eq!(kinds[4], Token::Close);
        assert_eq!(kinds[5], Token::OpenList);
        assert_eq!(kinds.len(), 10);
    }
}
