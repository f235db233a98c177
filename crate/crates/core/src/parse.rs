//! Reader for the generator shorthand, e.g. `a^3 b a^3 b a^3 b^2` or `(b^3 a)^6`.
//!
//! ```text
//! word := item*
//! item := atom ('^' integer)?
//! atom := 'a' | 'b' | 'A' | 'B' | '1' | '(' word ')'
//! ```
//!
//! Whitespace may separate tokens anywhere except inside an integer. Error
//! offsets are byte offsets into the input.

use crate::error::{Error, Result};
use crate::mcg::TwistWord;

pub fn parse_word(text: &str) -> Result<TwistWord> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let w = p.word(0)?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected ')'"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn word(&mut self, depth: usize) -> Result<TwistWord> {
        let mut acc = TwistWord::empty();
        loop {
            match self.peek() {
                None => {
                    if depth > 0 {
                        return Err(self.error("missing ')'"));
                    }
                    return Ok(acc);
                }
                Some(b')') => {
                    if depth == 0 {
                        return Err(self.error("unexpected ')'"));
                    }
                    return Ok(acc);
                }
                Some(_) => {
                    let item = self.item(depth)?;
                    acc = acc.then(&item);
                }
            }
        }
    }

    fn item(&mut self, depth: usize) -> Result<TwistWord> {
        let atom = match self.peek() {
            Some(b'a' | b'A') => {
                self.pos += 1;
                TwistWord::a(1)
            }
            Some(b'b' | b'B') => {
                self.pos += 1;
                TwistWord::b(1)
            }
            Some(b'1') => {
                self.pos += 1;
                TwistWord::empty()
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.word(depth + 1)?;
                if self.peek() != Some(b')') {
                    return Err(Error::Syntax {
                        offset: open,
                        message: "unbalanced '('".into(),
                    });
                }
                self.pos += 1;
                inner
            }
            _ => return Err(self.error("expected 'a', 'b', '1' or '('")),
        };
        if self.peek() != Some(b'^') {
            return Ok(atom);
        }
        self.pos += 1;
        let k = self.integer()?;
        Ok(if k > 0 {
            atom.pow(k as u32)
        } else {
            atom.inverse().pow(k.unsigned_abs() as u32)
        })
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let k: i64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "exponent out of range".into(),
        })?;
        if k == 0 {
            return Err(Error::Syntax {
                offset: start,
                message: "exponent 0 is not allowed".into(),
            });
        }
        if k.unsigned_abs() > u32::MAX as u64 {
            return Err(Error::Syntax {
                offset: start,
                message: "exponent out of range".into(),
            });
        }
        Ok(k)
    }
}
