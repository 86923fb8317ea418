use std::collections::BTreeSet;

use crate::hott::Hint;

/// Chooses display names for binders so that printing is injective on
/// α-classes: a binder never reuses a name that is in scope, free in the
/// printed term, or reserved by the output language.
pub(crate) struct Namer<'a> {
    reserved: &'a [&'a str],
    free: BTreeSet<String>,
    scope: Vec<String>,
    generated: usize,
}

impl<'a> Namer<'a> {
    pub fn new(reserved: &'a [&'a str], free: BTreeSet<String>) -> Namer<'a> {
        Namer { reserved, free, scope: Vec::new(), generated: 0 }
    }

    fn taken(&self, name: &str) -> bool {
        self.reserved.contains(&name) || self.free.contains(name) || self.scope.iter().any(|s| s == name)
    }

    /// Pushes a binder and returns its display name.
    pub fn bind(&mut self, hint: &Hint) -> String {
        let name = match hint.as_str().map(sanitize).filter(|s| !s.is_empty()) {
            Some(base) => {
                let mut name = base.clone();
                let mut k = 1;
                while self.taken(&name) {
                    name = format!("{base}{k}");
                    k += 1;
                }
                name
            }
            None => loop {
                let name = format!("v{}", self.generated);
                self.generated += 1;
                if !self.taken(&name) {
                    break name;
                }
            },
        };
        self.scope.push(name.clone());
        name
    }

    pub fn unbind(&mut self, n: usize) {
        self.scope.truncate(self.scope.len() - n);
    }

    /// Display name of de Bruijn index `i`.
    pub fn lookup(&self, i: usize) -> &str {
        &self.scope[self.scope.len() - 1 - i]
    }
}

/// Binder hints may carry reserved-namespace markers (`%B`); drop them.
fn sanitize(s: &str) -> String {
    s.chars().filter(|c| c.is_ascii_alphanumeric() || *c == '_').collect()
}
