use std::fmt;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Coh,
    Let,
    Ident(String),
    Star,
    Arrow,
    Colon,
    Equals,
    At,
    LParen,
    RParen,
    Underscore,
    /// Numerals never occur in the grammar; they are lexed so that
    /// `op { 1 }` reaches the meta-operation check.
    Number(String),
    // Only lexed so that meta-operation syntax gets a dedicated diagnostic.
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Coh => f.write_str("`coh`"),
            Tok::Let => f.write_str("`let`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::At => f.write_str("`@`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Underscore => f.write_str("`_`"),
            Tok::Number(n) => write!(f, "numeral `{n}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexError {
    pub pos: Pos,
    pub found: char,
}

pub fn lex(text: &str) -> Result<Vec<(Pos, Tok)>, LexError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, col: 1 };
    while let Some(&c) = chars.peek() {
        let start = pos;
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                pos.line += 1;
                pos.col = 1;
            } else {
                pos.col += 1;
            }
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
                word.push(c);
                bump(&mut chars);
            }
            let tok = match word.as_str() {
                "coh" => Tok::Coh,
                "let" => Tok::Let,
                "_" => Tok::Underscore,
                _ if word.starts_with(|c: char| c.is_ascii_digit()) => Tok::Number(word),
                _ => Tok::Ident(word),
            };
            out.push((start, tok));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '*' => Tok::Star,
            ':' => Tok::Colon,
            '=' => Tok::Equals,
            '@' => Tok::At,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '-' if chars.peek() == Some(&'>') => {
                bump(&mut chars);
                Tok::Arrow
            }
            _ => return Err(LexError { pos: start, found: c }),
        };
        out.push((start, tok));
    }
    out.push((pos, Tok::Eof));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = lex("coh id (x : *) : x -> x # trailing\nlet").unwrap();
        let kinds: Vec<_> = toks.iter().map(|(_, t)| t.clone()).collect();
        assert_eq!(
            kinds,
            [
                Tok::Coh,
                Tok::Ident("id".into()),
                Tok::LParen,
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::Star,
                Tok::RParen,
                Tok::Colon,
                Tok::Ident("x".into()),
                Tok::Arrow,
                Tok::Ident("x".into()),
                Tok::Let,
                Tok::Eof,
            ]
        );
        assert_eq!(toks[11].0, Pos { line: 2, col: 1 });
        assert_eq!(toks[9].0, Pos { line: 1, col: 20 });
    }

    #[test]
    fn stray_characters() {
        assert_eq!(lex("coh a ; b").unwrap_err().pos, Pos { line: 1, col: 7 });
        assert!(lex("x - y").is_err());
        assert_eq!(lex("9lives").unwrap()[0].1, Tok::Number("9lives".into()));
    }
}
