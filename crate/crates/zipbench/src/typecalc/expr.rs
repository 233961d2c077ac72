use std::collections::BTreeSet;
use std::error::Error;
use std::fmt;
use std::str::FromStr;

/// A regular type expression: polynomial functors plus explicit recursion.
///
/// `Mu(x, body)` is the least fixed point binding `x` in `body`. `List` is
/// kept primitive rather than being unfolded into its `Mu` encoding because
/// derivatives produce lists; [`expand_lists`](expand_lists) rewrites it
/// away when a test wants the encoded form.
///
/// The derived `Ord` is the canonical total order used by normalization:
/// constructor tag first (declaration order below), fields next.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Zero,
    One,
    Var(String),
    Sum(Box<TypeExpr>, Box<TypeExpr>),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Mu(String, Box<TypeExpr>),
    List(Box<TypeExpr>),
}

use TypeExpr::*;

impl TypeExpr {
    pub fn var(name: impl Into<String>) -> TypeExpr {
        Var(name.into())
    }

    pub fn sum(l: TypeExpr, r: TypeExpr) -> TypeExpr {
        Sum(Box::new(l), Box::new(r))
    }

    pub fn prod(l: TypeExpr, r: TypeExpr) -> TypeExpr {
        Prod(Box::new(l), Box::new(r))
    }

    pub fn mu(binder: impl Into<String>, body: TypeExpr) -> TypeExpr {
        Mu(binder.into(), Box::new(body))
    }

    pub fn list(elem: TypeExpr) -> TypeExpr {
        List(Box::new(elem))
    }

    /// Does `var` occur free in this expression?
    pub fn contains_free(&self, var: &str) -> bool {
        match self {
            Zero | One => false,
            Var(v) => v == var,
            Sum(l, r) | Prod(l, r) => l.contains_free(var) || r.contains_free(var),
            Mu(b, body) => b != var && body.contains_free(var),
            List(e) => e.contains_free(var),
        }
    }

    /// All free variables, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn walk(e: &TypeExpr, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match e {
                Zero | One => {}
                Var(v) => {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.clone());
                    }
                }
                Sum(l, r) | Prod(l, r) => {
                    walk(l, bound, out);
                    walk(r, bound, out);
                }
                Mu(b, body) => {
                    bound.push(b.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                List(inner) => walk(inner, bound, out),
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Pick a name based on `base` that makes `taken` false, by appending
/// primes. Deterministic, so renamed output is stable.
pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut candidate = format!("{base}'");
    while taken(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Rewrite every `List(e)` into its fixed-point encoding
/// `mu t. 1 + e * t` with a binder fresh for `e`. Used by oracle tests that
/// want to compare against the primitive-free form.
pub fn expand_lists(expr: &TypeExpr) -> TypeExpr {
    match expr {
        Zero => Zero,
        One => One,
        Var(v) => Var(v.clone()),
        Sum(l, r) => TypeExpr::sum(expand_lists(l), expand_lists(r)),
        Prod(l, r) => TypeExpr::prod(expand_lists(l), expand_lists(r)),
        Mu(b, body) => TypeExpr::mu(b.clone(), expand_lists(body)),
        List(e) => {
            let elem = expand_lists(e);
            let binder = fresh_name("t", |n| elem.contains_free(n));
            let body = TypeExpr::sum(One, TypeExpr::prod(elem, TypeExpr::var(&binder)));
            TypeExpr::mu(binder, body)
        }
    }
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

impl fmt::Display for TypeExpr {
    /// S-expression form, the same syntax [`FromStr`] accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Zero => write!(f, "0"),
            One => write!(f, "1"),
            Var(v) => write!(f, "{v}"),
            Sum(l, r) => write!(f, "(+ {l} {r})"),
            Prod(l, r) => write!(f, "(* {l} {r})"),
            Mu(b, body) => write!(f, "(mu {b} {body})"),
            List(e) => write!(f, "(list {e})"),
        }
    }
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl Error for ParseError {}

#[derive(Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Plus,
    Star,
    Word(String),
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let mut it = input.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '(' => {
                it.next();
                toks.push((pos, Tok::LParen));
            }
            ')' => {
                it.next();
                toks.push((pos, Tok::RParen));
            }
            '+' => {
                it.next();
                toks.push((pos, Tok::Plus));
            }
            '*' => {
                it.next();
                toks.push((pos, Tok::Star));
            }
            '0' | '1' => {
                it.next();
                toks.push((pos, Tok::Word(c.to_string())));
            }
            c if is_ident_start(c) => {
                let mut word = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if is_ident_continue(c) {
                        word.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                toks.push((pos, Tok::Word(word)));
            }
            other => {
                return Err(ParseError {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        let pos = self
            .toks
            .get(self.at)
            .map(|&(p, _)| p)
            .unwrap_or(self.input_len);
        ParseError {
            pos,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Result<&'a Tok, ParseError> {
        match self.toks.get(self.at) {
            Some((_, t)) => {
                self.at += 1;
                Ok(t)
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.next()? {
            Tok::RParen => Ok(()),
            _ => {
                self.at -= 1;
                Err(self.err("expected ')'"))
            }
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.next()? {
            Tok::Word(w) if w != "0" && w != "1" && w != "mu" && w != "list" => Ok(w.clone()),
            _ => {
                self.at -= 1;
                Err(self.err(format!("expected {what}")))
            }
        }
    }

    fn expr(&mut self) -> Result<TypeExpr, ParseError> {
        match self.next()? {
            Tok::Word(w) => match w.as_str() {
                "0" => Ok(Zero),
                "1" => Ok(One),
                "mu" | "list" => {
                    self.at -= 1;
                    Err(self.err(format!("keyword '{w}' cannot stand alone")))
                }
                _ => Ok(Var(w.clone())),
            },
            Tok::LParen => {
                let e = match self.next()? {
                    Tok::Plus => {
                        let l = self.expr()?;
                        let r = self.expr()?;
                        TypeExpr::sum(l, r)
                    }
                    Tok::Star => {
                        let l = self.expr()?;
                        let r = self.expr()?;
                        TypeExpr::prod(l, r)
                    }
                    Tok::Word(w) if w == "mu" => {
                        let binder = self.ident("a binder name after 'mu'")?;
                        let body = self.expr()?;
                        TypeExpr::mu(binder, body)
                    }
                    Tok::Word(w) if w == "list" => {
                        let e = self.expr()?;
                        TypeExpr::list(e)
                    }
                    _ => {
                        self.at -= 1;
                        return Err(self.err("expected '+', '*', 'mu' or 'list' after '('"));
                    }
                };
                self.expect_rparen()?;
                Ok(e)
            }
            _ => {
                self.at -= 1;
                Err(self.err("expected an expression"))
            }
        }
    }
}

impl FromStr for TypeExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let toks = tokenize(s)?;
        let mut p = Parser {
            toks: &toks,
            at: 0,
            input_len: s.len(),
        };
        let e = p.expr()?;
        if p.at != p.toks.len() {
            return Err(p.err("trailing input after expression"));
        }
        Ok(e)
    }
}
