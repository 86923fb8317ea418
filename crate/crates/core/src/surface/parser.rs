use std::fmt;

use super::lexer::{lex, Pos, Tok};
use super::SurfaceError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceExpr {
    Ident(String),
    /// `head a b c`; with `explicit`, written `@head …` and binding every
    /// variable of the head's context positionally.
    App {
        head: String,
        args: Vec<SurfaceExpr>,
        explicit: bool,
    },
    Arrow(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Star,
}

/// `(x y z : ty)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub names: Vec<String>,
    pub ty: SurfaceExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceDecl {
    Coh { name: String, params: Vec<Binder>, ty: SurfaceExpr },
    Let { name: String, params: Vec<Binder>, ty: Option<SurfaceExpr>, body: SurfaceExpr },
}

impl SurfaceDecl {
    pub fn name(&self) -> &str {
        match self {
            SurfaceDecl::Coh { name, .. } | SurfaceDecl::Let { name, .. } => name,
        }
    }

    pub fn params(&self) -> &[Binder] {
        match self {
            SurfaceDecl::Coh { params, .. } | SurfaceDecl::Let { params, .. } => params,
        }
    }
}

pub fn parse(text: &str) -> Result<Vec<SurfaceDecl>, SurfaceError> {
    Ok(parse_spanned(text)?.into_iter().map(|(_, d)| d).collect())
}

/// Like [`parse`], keeping the position of each declaration keyword.
pub fn parse_spanned(text: &str) -> Result<Vec<(Pos, SurfaceDecl)>, SurfaceError> {
    let toks = lex(text).map_err(|e| SurfaceError::Syntax {
        pos: e.pos,
        expected: "a token".into(),
        found: format!("character `{}`", e.found),
    })?;
    reject_meta_operations(&toks)?;
    let mut p = Parser { toks, at: 0 };
    let mut out = Vec::new();
    while p.peek() != &Tok::Eof {
        out.push(p.decl()?);
    }
    Ok(out)
}

/// Suspension-free CaTT only: opposites, inverses and functorialisation are
/// reported before any other syntax error.
fn reject_meta_operations(toks: &[(Pos, Tok)]) -> Result<(), SurfaceError> {
    for (i, (pos, tok)) in toks.iter().enumerate() {
        let what = match tok {
            Tok::Ident(s) if s == "op" && matches!(toks.get(i + 1), Some((_, Tok::LBrace))) => "opposite `op { … }`",
            Tok::LBrace | Tok::RBrace => "opposite `op { … }`",
            Tok::LBracket | Tok::RBracket => "functorialisation `[ … ]`",
            _ => continue,
        };
        return Err(SurfaceError::MetaOperation { pos: *pos, what: what.into() });
    }
    Ok(())
}

struct Parser {
    toks: Vec<(Pos, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].1
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> SurfaceError {
        SurfaceError::Syntax { pos: self.pos(), expected: expected.into(), found: self.peek().to_string() }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), SurfaceError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, SurfaceError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn decl(&mut self) -> Result<(Pos, SurfaceDecl), SurfaceError> {
        let pos = self.pos();
        match self.next() {
            Tok::Coh => {
                let name = self.ident("a coherence name")?;
                let params = self.binders()?;
                self.expect(Tok::Colon, "`:` before the coherence type")?;
                let ty = self.ty()?;
                Ok((pos, SurfaceDecl::Coh { name, params, ty }))
            }
            Tok::Let => {
                let name = self.ident("a definition name")?;
                let params = self.binders()?;
                let ty = if *self.peek() == Tok::Colon {
                    self.next();
                    Some(self.ty()?)
                } else {
                    None
                };
                self.expect(Tok::Equals, "`=` before the definition body")?;
                let body = self.term()?;
                Ok((pos, SurfaceDecl::Let { name, params, ty, body }))
            }
            tok => Err(SurfaceError::Syntax { pos, expected: "`coh` or `let`".into(), found: tok.to_string() }),
        }
    }

    fn binders(&mut self) -> Result<Vec<Binder>, SurfaceError> {
        let mut out = Vec::new();
        while *self.peek() == Tok::LParen {
            self.next();
            let mut names = vec![self.ident("a variable name")?];
            while let Tok::Ident(_) = self.peek() {
                names.push(self.ident("a variable name")?);
            }
            self.expect(Tok::Colon, "`:` in a binder")?;
            let ty = self.ty()?;
            self.expect(Tok::RParen, "`)` closing the binder")?;
            out.push(Binder { names, ty });
        }
        Ok(out)
    }

    fn ty(&mut self) -> Result<SurfaceExpr, SurfaceError> {
        if *self.peek() == Tok::Star {
            self.next();
            return Ok(SurfaceExpr::Star);
        }
        if !self.starts_term() {
            return Err(self.error("a type (`*` or `u -> v`)"));
        }
        let src = self.term()?;
        self.expect(Tok::Arrow, "`->` in an arrow type")?;
        let tgt = self.term()?;
        Ok(SurfaceExpr::Arrow(Box::new(src), Box::new(tgt)))
    }

    fn starts_term(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::At | Tok::Underscore)
    }

    fn term(&mut self) -> Result<SurfaceExpr, SurfaceError> {
        let explicit = *self.peek() == Tok::At;
        if explicit {
            self.next();
        }
        match self.peek() {
            Tok::Ident(_) => {
                let head = self.ident("a name")?;
                let mut args = Vec::new();
                while matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::Underscore) {
                    // `(x : ...` cannot start an argument; leave it to the caller.
                    if *self.peek() == Tok::LParen && matches!(self.peek_at(2), Tok::Colon) {
                        break;
                    }
                    args.push(self.atom()?);
                }
                if args.is_empty() && !explicit {
                    Ok(SurfaceExpr::Ident(head))
                } else {
                    Ok(SurfaceExpr::App { head, args, explicit })
                }
            }
            _ if explicit => Err(self.error("a name after `@`")),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<SurfaceExpr, SurfaceError> {
        match self.peek() {
            Tok::Ident(_) => Ok(SurfaceExpr::Ident(self.ident("a name")?)),
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Underscore => Err(SurfaceError::Syntax {
                pos: self.pos(),
                expected: "an explicit argument (holes `_` are not supported)".into(),
                found: "`_`".into(),
            }),
            _ => Err(self.error("a term")),
        }
    }
}

fn write_arg(f: &mut fmt::Formatter<'_>, e: &SurfaceExpr) -> fmt::Result {
    match e {
        SurfaceExpr::Ident(x) => write!(f, "{x}"),
        _ => write!(f, "({e})"),
    }
}

impl fmt::Display for SurfaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceExpr::Ident(x) => write!(f, "{x}"),
            SurfaceExpr::Star => f.write_str("*"),
            SurfaceExpr::Arrow(s, t) => write!(f, "{s} -> {t}"),
            SurfaceExpr::App { head, args, explicit } => {
                if *explicit {
                    f.write_str("@")?;
                }
                f.write_str(head)?;
                for a in args {
                    f.write_str(" ")?;
                    write_arg(f, a)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.names.join(" "), self.ty)
    }
}

impl fmt::Display for SurfaceDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kw, name, params) = match self {
            SurfaceDecl::Coh { name, params, .. } => ("coh", name, params),
            SurfaceDecl::Let { name, params, .. } => ("let", name, params),
        };
        write!(f, "{kw} {name}")?;
        for b in params {
            write!(f, " {b}")?;
        }
        match self {
            SurfaceDecl::Coh { ty, .. } => write!(f, " : {ty}"),
            SurfaceDecl::Let { ty, body, .. } => {
                if let Some(ty) = ty {
                    write!(f, " : {ty}")?;
                }
                write!(f, " = {body}")
            }
        }
    }
}
