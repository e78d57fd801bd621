//! Tokenizer shared by the form syntax, the problem DSL and the file formats.

use crate::error::{ParseError, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const SYMBOLS: [&str; 17] = [
    ":=", ">=", "<=", "(", ")", ",", ";", "|", ":", "*", "+", "-", "/", "=", "{", "}", "~",
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    tokenize_at(src, 1)
}

/// Tokenizes `src` reporting positions as if it started on `first_line`.
pub fn tokenize_at(src: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: first_line + ln,
                col: i + 1,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    pos,
                });
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                out.push(Token {
                    tok: Tok::Num(chars[start..i].iter().collect()),
                    pos,
                });
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Token {
                        tok: Tok::Sym(s),
                        pos,
                    });
                    i += s.chars().count();
                }
                None => return Err(ParseError::new(pos, format!("unexpected character `{c}`"))),
            }
        }
    }
    Ok(out)
}

/// Cursor over a token stream.
pub struct Cursor<'a> {
    toks: &'a [Token],
    at: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        let end = toks
            .last()
            .map(|t| Pos {
                line: t.pos.line,
                col: t.pos.col + 1,
            })
            .unwrap_or(Pos { line: 1, col: 1 });
        Cursor { toks, at: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.at + k).map(|t| &t.tok)
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|t| t.pos).unwrap_or(self.end)
    }

    pub fn is_done(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.at);
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Pos), ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.at += 1;
                Ok((s.clone(), pos))
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let found = match self.peek() {
            Some(Tok::Ident(s)) | Some(Tok::Num(s)) => format!(", found `{s}`"),
            Some(Tok::Sym(s)) => format!(", found `{s}`"),
            None => ", found end of input".to_string(),
        };
        ParseError::new(self.pos(), format!("{}{found}", msg.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = tokenize("copy V' := copy(B | A) # note\n  H(A) >= 3/2").unwrap();
        assert_eq!(toks[1].tok, Tok::Ident("V'".into()));
        assert_eq!(toks[2].tok, Tok::Sym(":="));
        let ge = toks.iter().find(|t| t.tok == Tok::Sym(">=")).unwrap();
        assert_eq!(ge.pos, Pos { line: 2, col: 8 });
        assert!(tokenize("H(A) @").is_err());
    }
}
