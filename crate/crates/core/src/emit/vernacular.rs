//! Coq-style vernacular: a fixed preamble defining `El` and a based `J`,
//! then one `Definition` per translated entry.

use std::collections::BTreeSet;

use super::names::Namer;
use crate::hott::{HTerm, HType, JElim};

pub const PREAMBLE: &str = "\
(* catt2hott vernacular v1 *)
Definition El (B : Type) : Type := B.

Definition J (A : Type) (u : A) (P : forall (v : A), @eq A u v -> Type)
  (p : P u (@eq_refl A u)) (v : A) (e : @eq A u v) : P v e :=
  match e in @eq _ _ w return P w e with
  | eq_refl => p
  end.
";

/// Words that cannot be bound locally without breaking the output.
const RESERVED: [&str; 24] = [
    "El",
    "J",
    "eq",
    "eq_refl",
    "Type",
    "Prop",
    "Set",
    "Definition",
    "forall",
    "fun",
    "match",
    "with",
    "end",
    "in",
    "return",
    "let",
    "as",
    "if",
    "then",
    "else",
    "fix",
    "cofix",
    "Theorem",
    "Qed",
];

/// Prelude constants a top-level definition must not redefine.
const PRELUDE_NAMES: [&str; 22] = [
    "id", "nat", "bool", "true", "false", "unit", "tt", "prod", "pair", "fst", "snd", "list", "nil", "cons", "option",
    "Some", "None", "not", "and", "or", "True", "False",
];

/// The emitted name for a definition: reserved and prelude names get a
/// trailing underscore.
pub fn definition_name(name: &str) -> String {
    if RESERVED.contains(&name) || PRELUDE_NAMES.contains(&name) {
        format!("{name}_")
    } else {
        name.to_owned()
    }
}

pub fn definition(name: &str, ty: &HType, tm: &HTerm) -> String {
    format!("Definition {} : {} :=\n  {}.\n", definition_name(name), print_type(ty), print_term(tm))
}

fn free_of(ty: Option<&HType>, tm: Option<&HTerm>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if let Some(ty) = ty {
        ty.collect_free(&mut out);
    }
    if let Some(tm) = tm {
        tm.collect_free(&mut out);
    }
    out.into_iter().map(|n| n.to_string()).collect()
}

pub fn print_type(ty: &HType) -> String {
    Printer { names: Namer::new(&RESERVED, free_of(Some(ty), None)) }.ty(ty)
}

pub fn print_term(tm: &HTerm) -> String {
    Printer { names: Namer::new(&RESERVED, free_of(None, Some(tm))) }.tm(tm)
}

struct Printer<'a> {
    names: Namer<'a>,
}

fn is_atomic_tm(t: &HTerm) -> bool {
    matches!(t, HTerm::Free(_) | HTerm::Bound(_))
}

impl Printer<'_> {
    fn ty(&mut self, ty: &HType) -> String {
        match ty {
            HType::Universe => "Type".into(),
            HType::El(t) => format!("El {}", self.arg(t)),
            HType::Id(a, u, v) => format!("@eq {} {} {}", self.ty_arg(a), self.arg(u), self.arg(v)),
            HType::Pi(h, a, b) => {
                let dom = self.ty(a);
                let x = self.names.bind(h);
                let cod = self.ty(b);
                self.names.unbind(1);
                format!("forall ({x} : {dom}), {cod}")
            }
        }
    }

    fn ty_arg(&mut self, ty: &HType) -> String {
        match ty {
            HType::Universe => "Type".into(),
            _ => format!("({})", self.ty(ty)),
        }
    }

    fn arg(&mut self, t: &HTerm) -> String {
        if is_atomic_tm(t) {
            self.tm(t)
        } else {
            format!("({})", self.tm(t))
        }
    }

    fn tm(&mut self, t: &HTerm) -> String {
        match t {
            HTerm::Free(x) => x.to_string(),
            HTerm::Bound(i) => self.names.lookup(*i).to_owned(),
            HTerm::Refl(a, u) => format!("@eq_refl {} {}", self.ty_arg(a), self.arg(u)),
            HTerm::J(j) => {
                let JElim { ty, point, hints, motive, base } = &**j;
                let a = self.ty_arg(ty);
                let u = self.arg(point);
                // The based eliminator takes the motive with x' already fixed to u.
                let based = motive.instantiate(2, point);
                let y = self.names.bind(&hints[1]);
                let e = self.names.bind(&hints[2]);
                let body = self.ty(&based);
                self.names.unbind(2);
                let p = self.arg(base);
                format!("J {a} {u} (fun ({y} : {}) ({e} : @eq {a} {u} {y}) => {body}) {p}", strip_parens(&a))
            }
            HTerm::Lam(h, a, b) => {
                let dom = self.ty(a);
                let x = self.names.bind(h);
                let body = self.tm(b);
                self.names.unbind(1);
                format!("fun ({x} : {dom}) => {body}")
            }
            HTerm::App(f, a) => {
                let head = match &**f {
                    HTerm::Lam(..) => format!("({})", self.tm(f)),
                    _ => self.tm(f),
                };
                format!("{head} {}", self.arg(a))
            }
        }
    }
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hott::Hint;

    fn el_b() -> HType {
        HType::el(HTerm::free("%B"))
    }

    #[test]
    fn projection() {
        let ty = HType::pi("%B", HType::Universe, HType::pi("x", el_b(), el_b()));
        let tm = HTerm::lam("%B", HType::Universe, HTerm::lam("x", el_b(), HTerm::free("x")));
        assert_eq!(
            definition("proj", &ty, &tm),
            "Definition proj : forall (B : Type), forall (x : El B), El B :=\n  fun (B : Type) => fun (x : El B) => x.\n"
        );
    }

    #[test]
    fn based_motive() {
        let motive = HType::id(el_b(), HTerm::Bound(2), HTerm::Bound(1));
        let j =
            HTerm::j(el_b(), HTerm::free("x"), [Hint::none(), Hint::none(), Hint::none()], motive, HTerm::free("p"));
        let t = HTerm::app(HTerm::app(j, HTerm::free("y")), HTerm::free("f"));
        assert_eq!(print_term(&t), "J (El %B) x (fun (v0 : El %B) (v1 : @eq (El %B) x v0) => @eq (El %B) x v0) p y f");
    }

    #[test]
    fn reserved_names() {
        assert_eq!(definition_name("id"), "id_");
        assert_eq!(definition_name("J"), "J_");
        assert_eq!(definition_name("comp"), "comp");
        let t = HTerm::lam("El", el_b(), HTerm::free("q"));
        assert_eq!(print_term(&t), "fun (El1 : El %B) => q");
    }
}
