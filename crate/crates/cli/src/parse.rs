//! Word syntax.
//!
//! ```text
//! word  := term*
//! term  := atom ('^' exp)*
//! atom  := letter | '1' | '(' word ')' | '[' word ',' word ']'
//! exp   := ['-'] digits | '(' word ')'
//! ```
//!
//! `x^n` is a power, `x^(w)` is the conjugate `w⁻¹ x w` and `[u, v]` is
//! `u⁻¹ v⁻¹ u v`. Whitespace is ignored.

use dehn_core::words::{commutator, Gen, Word};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown generator `{gen}` at offset {offset}")]
    UnknownGenerator { gen: char, offset: usize },
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    seen: &'a mut Vec<(char, usize)>,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<char> {
        while self
            .chars
            .get(self.pos)
            .is_some_and(|(_, c)| c.is_whitespace())
        {
            self.pos += 1;
        }
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i)
    }

    fn error<T>(&mut self, message: impl Into<String>) -> Result<T, ParseError> {
        self.peek();
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut w = Word::empty();
        while let Some(c) = self.peek() {
            if matches!(c, ')' | ']' | ',') {
                break;
            }
            w = w.concat(&self.term()?);
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            if self.peek() == Some('(') {
                self.pos += 1;
                let by = self.word()?;
                self.expect(')')?;
                base = base.conjugate(&by);
            } else {
                base = base.power(self.integer()?);
            }
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.offset();
        let mut text = String::new();
        if self.peek() == Some('-') {
            text.push('-');
            self.pos += 1;
        }
        while let Some(&(_, c)) = self.chars.get(self.pos).filter(|(_, c)| c.is_ascii_digit()) {
            text.push(c);
            self.pos += 1;
        }
        text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: "expected an integer exponent or `(`".into(),
        })
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                Ok(commutator(&u, &v))
            }
            Some('1') => {
                self.pos += 1;
                Ok(Word::empty())
            }
            Some(c) if c.is_alphabetic() => {
                self.seen.push((c, self.offset()));
                self.pos += 1;
                Ok(Word::gen(Gen(c)))
            }
            Some(c) => self.error(format!("unexpected `{c}`")),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses `text` and checks that every generator lies in `alphabet`.
pub fn parse_word(text: &str, alphabet: &[Gen]) -> Result<Word, ParseError> {
    let mut seen = Vec::new();
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        len: text.len(),
        seen: &mut seen,
    };
    let w = p.word()?;
    if let Some(c) = p.peek() {
        return p.error(format!("unexpected `{c}`"));
    }
    if let Some(&(gen, offset)) = seen.iter().find(|(c, _)| !alphabet.contains(&Gen(*c))) {
        return Err(ParseError::UnknownGenerator { gen, offset });
    }
    // Merge runs like `t t` into `t^2`; nothing cancels.
    Ok(Word::from_letters(&w.letters()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dehn_core::words::{commutator_word, A, S, T};

    const ABC: [Gen; 3] = [A, S, T];

    #[test]
    fn sugar() {
        let w = parse_word("[a, a^(t^3)]", &ABC).unwrap();
        assert!(w.free_eq(&commutator_word(3)));
        let w = parse_word("a^-1 t^2", &ABC).unwrap();
        assert_eq!(w, Word::from_syllables([(A, -1), (T, 2)]));
        assert_eq!(parse_word(" 1 ", &ABC).unwrap(), Word::empty());
        assert!(parse_word("(st)^2", &ABC)
            .unwrap()
            .free_eq(&Word::from_syllables([(S, 1), (T, 1), (S, 1), (T, 1)])));
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_word("[x,y", &ABC),
            Err(ParseError::Syntax {
                offset: 4,
                message: "expected `]`".into()
            })
        );
        assert_eq!(
            parse_word("a b", &ABC),
            Err(ParseError::UnknownGenerator {
                gen: 'b',
                offset: 2
            })
        );
        assert!(matches!(
            parse_word("a^", &ABC),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_word("a)", &ABC),
            Err(ParseError::Syntax { offset: 1, .. })
        ));
    }
}
