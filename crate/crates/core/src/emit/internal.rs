//! The internal format: fully parenthesized prefix notation.
//!
//! ```text
//! ty ::= Type | (El tm) | (Id ty tm tm) | (Pi (x ty) ty)
//! tm ::= x | (refl ty tm) | (J ty tm (x y e) ty tm) | (lam (x ty) tm) | (app tm tm)
//! file ::= ";; catt2hott internal v1" (def name ty tm)*
//! ```

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use super::names::Namer;
use crate::hott::{HTerm, HType, Hint, JElim};

pub const HEADER: &str = ";; catt2hott internal v1";

pub const KEYWORDS: [&str; 9] = ["Pi", "lam", "Id", "refl", "J", "Type", "El", "app", "def"];

fn free_names(tys: &[&HType], tms: &[&HTerm]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for ty in tys {
        ty.collect_free(&mut out);
    }
    for tm in tms {
        tm.collect_free(&mut out);
    }
    out.into_iter().map(|n| n.to_string()).collect()
}

pub fn print_term(t: &HTerm) -> String {
    let mut p = Printer { out: String::new(), names: Namer::new(&KEYWORDS, free_names(&[], &[t])) };
    p.tm(t);
    p.out
}

pub fn print_type(ty: &HType) -> String {
    let mut p = Printer { out: String::new(), names: Namer::new(&KEYWORDS, free_names(&[ty], &[])) };
    p.ty(ty);
    p.out
}

/// `(def name ty tm)`
pub fn print_def(name: &str, ty: &HType, tm: &HTerm) -> String {
    format!("(def {name} {} {})", print_type(ty), print_term(tm))
}

struct Printer<'a> {
    out: String,
    names: Namer<'a>,
}

impl Printer<'_> {
    fn ty(&mut self, ty: &HType) {
        match ty {
            HType::Universe => self.out.push_str("Type"),
            HType::El(t) => {
                self.out.push_str("(El ");
                self.tm(t);
                self.out.push(')');
            }
            HType::Id(a, u, v) => {
                self.out.push_str("(Id ");
                self.ty(a);
                self.out.push(' ');
                self.tm(u);
                self.out.push(' ');
                self.tm(v);
                self.out.push(')');
            }
            HType::Pi(h, a, b) => {
                self.out.push_str("(Pi (");
                let mut dom = String::new();
                std::mem::swap(&mut dom, &mut self.out);
                self.ty(a);
                std::mem::swap(&mut dom, &mut self.out);
                let x = self.names.bind(h);
                let _ = write!(self.out, "{x} {dom}) ");
                self.ty(b);
                self.names.unbind(1);
                self.out.push(')');
            }
        }
    }

    fn tm(&mut self, t: &HTerm) {
        match t {
            HTerm::Free(x) => self.out.push_str(x),
            HTerm::Bound(i) => {
                let name = self.names.lookup(*i).to_owned();
                self.out.push_str(&name);
            }
            HTerm::Refl(a, u) => {
                self.out.push_str("(refl ");
                self.ty(a);
                self.out.push(' ');
                self.tm(u);
                self.out.push(')');
            }
            HTerm::J(j) => {
                let JElim { ty, point, hints, motive, base } = &**j;
                self.out.push_str("(J ");
                self.ty(ty);
                self.out.push(' ');
                self.tm(point);
                let bound: Vec<String> = hints.iter().map(|h| self.names.bind(h)).collect();
                let _ = write!(self.out, " ({}) ", bound.join(" "));
                self.ty(motive);
                self.names.unbind(3);
                self.out.push(' ');
                self.tm(base);
                self.out.push(')');
            }
            HTerm::Lam(h, a, b) => {
                self.out.push_str("(lam (");
                let mut dom = String::new();
                std::mem::swap(&mut dom, &mut self.out);
                self.ty(a);
                std::mem::swap(&mut dom, &mut self.out);
                let x = self.names.bind(h);
                let _ = write!(self.out, "{x} {dom}) ");
                self.tm(b);
                self.names.unbind(1);
                self.out.push(')');
            }
            HTerm::App(f, a) => {
                self.out.push_str("(app ");
                self.tm(f);
                self.out.push(' ');
                self.tm(a);
                self.out.push(')');
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("internal format, offset {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Sexp {
    Atom(usize, String),
    List(usize, Vec<Sexp>),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Atom(o, _) | Sexp::List(o, _) => *o,
        }
    }
}

fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut stack: Vec<(usize, Vec<Sexp>)> = vec![(0, Vec::new())];
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            ';' => while chars.next_if(|(_, c)| *c != '\n').is_some() {},
            '(' => stack.push((i, Vec::new())),
            ')' => {
                let (start, items) = stack
                    .pop()
                    .filter(|_| !stack.is_empty())
                    .ok_or_else(|| ParseError { offset: i, expected: "no unmatched `)`".into() })?;
                stack.last_mut().expect("outer level").1.push(Sexp::List(start, items));
            }
            c if c.is_whitespace() => {}
            _ => {
                let mut atom = String::from(c);
                while let Some((_, c)) = chars.next_if(|(_, c)| !c.is_whitespace() && !"();".contains(*c)) {
                    atom.push(c);
                }
                stack.last_mut().expect("a level").1.push(Sexp::Atom(i, atom));
            }
        }
    }
    if stack.len() != 1 {
        return Err(ParseError { offset: text.len(), expected: "`)`".into() });
    }
    Ok(stack.pop().expect("outer level").1)
}

struct Reader {
    scope: Vec<String>,
}

fn err<T>(s: &Sexp, expected: &str) -> Result<T, ParseError> {
    Err(ParseError { offset: s.offset(), expected: expected.into() })
}

impl Reader {
    fn name(&self, s: &Sexp) -> Result<String, ParseError> {
        match s {
            Sexp::Atom(_, a) if !KEYWORDS.contains(&a.as_str()) => Ok(a.clone()),
            _ => err(s, "a variable name"),
        }
    }

    fn binder(&mut self, s: &Sexp) -> Result<(String, HType), ParseError> {
        match s {
            Sexp::List(_, items) if items.len() == 2 => {
                let x = self.name(&items[0])?;
                let ty = self.ty(&items[1])?;
                Ok((x, ty))
            }
            _ => err(s, "a binder `(x T)`"),
        }
    }

    fn ty(&mut self, s: &Sexp) -> Result<HType, ParseError> {
        match s {
            Sexp::Atom(_, a) if a == "Type" => Ok(HType::Universe),
            Sexp::List(_, items) => match (items.first(), items.len()) {
                (Some(Sexp::Atom(_, k)), 2) if k == "El" => Ok(HType::el(self.tm(&items[1])?)),
                (Some(Sexp::Atom(_, k)), 4) if k == "Id" => {
                    Ok(HType::id(self.ty(&items[1])?, self.tm(&items[2])?, self.tm(&items[3])?))
                }
                (Some(Sexp::Atom(_, k)), 3) if k == "Pi" => {
                    let (x, dom) = self.binder(&items[1])?;
                    self.scope.push(x.clone());
                    let cod = self.ty(&items[2]);
                    self.scope.pop();
                    Ok(HType::Pi(Hint::named(&x), Box::new(dom), Box::new(cod?)))
                }
                _ => err(s, "a type"),
            },
            _ => err(s, "a type"),
        }
    }

    fn tm(&mut self, s: &Sexp) -> Result<HTerm, ParseError> {
        match s {
            Sexp::Atom(..) => {
                let x = self.name(s)?;
                Ok(match self.scope.iter().rev().position(|y| *y == x) {
                    Some(i) => HTerm::Bound(i),
                    None => HTerm::free(&x),
                })
            }
            Sexp::List(_, items) => match (items.first(), items.len()) {
                (Some(Sexp::Atom(_, k)), 3) if k == "refl" => Ok(HTerm::refl(self.ty(&items[1])?, self.tm(&items[2])?)),
                (Some(Sexp::Atom(_, k)), 3) if k == "app" => Ok(HTerm::app(self.tm(&items[1])?, self.tm(&items[2])?)),
                (Some(Sexp::Atom(_, k)), 3) if k == "lam" => {
                    let (x, dom) = self.binder(&items[1])?;
                    self.scope.push(x.clone());
                    let body = self.tm(&items[2]);
                    self.scope.pop();
                    Ok(HTerm::Lam(Hint::named(&x), Box::new(dom), Box::new(body?)))
                }
                (Some(Sexp::Atom(_, k)), 6) if k == "J" => {
                    let ty = self.ty(&items[1])?;
                    let point = self.tm(&items[2])?;
                    let Sexp::List(_, bs) = &items[3] else {
                        return err(&items[3], "three motive binders `(x y e)`");
                    };
                    if bs.len() != 3 {
                        return err(&items[3], "three motive binders `(x y e)`");
                    }
                    let names = bs.iter().map(|b| self.name(b)).collect::<Result<Vec<_>, _>>()?;
                    self.scope.extend(names.iter().cloned());
                    let motive = self.ty(&items[4]);
                    self.scope.truncate(self.scope.len() - 3);
                    let base = self.tm(&items[5])?;
                    let hints = [Hint::named(&names[0]), Hint::named(&names[1]), Hint::named(&names[2])];
                    Ok(HTerm::j(ty, point, hints, motive?, base))
                }
                _ => err(s, "a term"),
            },
        }
    }
}

pub fn parse_term(text: &str) -> Result<HTerm, ParseError> {
    match read_all(text)?.as_slice() {
        [s] => Reader { scope: Vec::new() }.tm(s),
        _ => Err(ParseError { offset: 0, expected: "exactly one term".into() }),
    }
}

pub fn parse_type(text: &str) -> Result<HType, ParseError> {
    match read_all(text)?.as_slice() {
        [s] => Reader { scope: Vec::new() }.ty(s),
        _ => Err(ParseError { offset: 0, expected: "exactly one type".into() }),
    }
}

/// Reads back a whole emitted file: `(name, type, term)` per definition.
pub fn parse_file(text: &str) -> Result<Vec<(String, HType, HTerm)>, ParseError> {
    if !text.starts_with(HEADER) {
        return Err(ParseError { offset: 0, expected: format!("the header `{HEADER}`") });
    }
    let mut out = Vec::new();
    for s in read_all(text)? {
        let Sexp::List(_, items) = &s else {
            return err(&s, "a definition");
        };
        match items.as_slice() {
            [Sexp::Atom(_, k), Sexp::Atom(_, name), ty, tm] if k == "def" => {
                let mut r = Reader { scope: Vec::new() };
                out.push((name.clone(), r.ty(ty)?, r.tm(tm)?));
            }
            _ => return err(&s, "`(def name type term)`"),
        }
    }
    Ok(out)
}
