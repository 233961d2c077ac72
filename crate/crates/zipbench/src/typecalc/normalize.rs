use std::fmt;

use super::expr::TypeExpr;

/// A [`TypeExpr`] in canonical shape: a sorted sum of sorted products of
/// atoms, where an atom is a variable, a `mu` with canonical body, or a
/// `list` of a canonical element.
///
/// Canonicalization flattens nested sums and products, drops `+ 0` and
/// `* 1`, collapses any product containing `0`, distributes products over
/// sums, and orders operands by the derived total order on [`TypeExpr`]
/// (constructor tag, then fields). Chains rebuild right-nested. Repeated
/// terms are kept: a doubled context type really does have two summands.
///
/// One rewrite crosses constructors: a body of the exact shape
/// `1 + e * x` (up to order, `x` the binder, `e` free of it) makes
/// `mu x. 1 + e * x` the list type over `e`, and it canonicalizes to
/// `list e`. Derivatives produce lists in this spelled-out form, and
/// equality checks want the two spellings identified.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm(TypeExpr);

impl NormalForm {
    pub fn as_expr(&self) -> &TypeExpr {
        &self.0
    }

    pub fn into_expr(self) -> TypeExpr {
        self.0
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn normalize(expr: &TypeExpr) -> NormalForm {
    NormalForm(canonical(expr))
}

fn canonical(expr: &TypeExpr) -> TypeExpr {
    rebuild_sum(terms_of(expr))
}

/// Sum-of-products view: a list of terms, each term a list of atom factors.
/// The empty term list is `0`; an empty factor list is `1`.
fn terms_of(expr: &TypeExpr) -> Vec<Vec<TypeExpr>> {
    use TypeExpr::*;
    match expr {
        Zero => Vec::new(),
        One => vec![Vec::new()],
        Var(v) => vec![vec![Var(v.clone())]],
        Sum(l, r) => {
            let mut terms = terms_of(l);
            terms.extend(terms_of(r));
            terms
        }
        Prod(l, r) => {
            let left = terms_of(l);
            let right = terms_of(r);
            let mut terms = Vec::with_capacity(left.len() * right.len());
            for a in &left {
                for b in &right {
                    let mut factors = a.clone();
                    factors.extend(b.iter().cloned());
                    terms.push(factors);
                }
            }
            terms
        }
        Mu(binder, body) => vec![vec![mu_atom(binder, body)]],
        List(e) => vec![vec![TypeExpr::list(canonical(e))]],
    }
}

/// Canonicalize a `mu` body and recognize the list pattern.
fn mu_atom(binder: &str, body: &TypeExpr) -> TypeExpr {
    let terms = sorted(terms_of(body));
    if let Some(elem) = match_list_body(binder, &terms) {
        return TypeExpr::list(rebuild_product(elem));
    }
    TypeExpr::mu(binder.to_string(), rebuild_sum_sorted(terms))
}

/// `[[], [e..., binder, e...]]` with the binder occurring exactly once and
/// the remaining factors free of it: the list functor over those factors.
fn match_list_body(binder: &str, terms: &[Vec<TypeExpr>]) -> Option<Vec<TypeExpr>> {
    if terms.len() != 2 || !terms[0].is_empty() {
        return None;
    }
    let rec = TypeExpr::var(binder);
    let hits = terms[1].iter().filter(|f| **f == rec).count();
    if hits != 1 {
        return None;
    }
    let rest: Vec<TypeExpr> = terms[1].iter().filter(|f| **f != rec).cloned().collect();
    if rest.iter().any(|f| f.contains_free(binder)) {
        return None;
    }
    Some(rest)
}

fn sorted(mut terms: Vec<Vec<TypeExpr>>) -> Vec<Vec<TypeExpr>> {
    for term in &mut terms {
        term.sort();
    }
    terms.sort();
    terms
}

fn rebuild_sum(terms: Vec<Vec<TypeExpr>>) -> TypeExpr {
    rebuild_sum_sorted(sorted(terms))
}

fn rebuild_sum_sorted(terms: Vec<Vec<TypeExpr>>) -> TypeExpr {
    let mut products: Vec<TypeExpr> = terms.into_iter().map(rebuild_product).collect();
    match products.len() {
        0 => TypeExpr::Zero,
        1 => products.pop().unwrap(),
        _ => products
            .into_iter()
            .rev()
            .reduce(|acc, t| TypeExpr::sum(t, acc))
            .unwrap(),
    }
}

fn rebuild_product(factors: Vec<TypeExpr>) -> TypeExpr {
    let mut factors = factors;
    match factors.len() {
        0 => TypeExpr::One,
        1 => factors.pop().unwrap(),
        _ => factors
            .into_iter()
            .rev()
            .reduce(|acc, f| TypeExpr::prod(f, acc))
            .unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> TypeExpr {
        s.parse().unwrap()
    }

    fn nf(s: &str) -> String {
        normalize(&parse(s)).to_string()
    }

    #[test]
    fn units_and_zeros() {
        assert_eq!(nf("(+ a 0)"), "a");
        assert_eq!(nf("(* a 1)"), "a");
        assert_eq!(nf("(* a 0)"), "0");
        assert_eq!(nf("(+ 0 0)"), "0");
        assert_eq!(nf("(* 1 1)"), "1");
    }

    #[test]
    fn commutes_and_flattens() {
        assert_eq!(nf("(+ b a)"), nf("(+ a b)"));
        assert_eq!(nf("(* b a)"), nf("(* a b)"));
        assert_eq!(nf("(+ (+ a b) c)"), nf("(+ a (+ b c))"));
        assert_eq!(nf("(* (* a b) c)"), nf("(* a (* b c))"));
    }

    #[test]
    fn keeps_duplicate_terms() {
        assert_eq!(nf("(+ a a)"), "(+ a a)");
        assert_eq!(nf("(* a a)"), "(* a a)");
    }

    #[test]
    fn distributes_products_over_sums() {
        assert_eq!(nf("(* (+ a b) c)"), "(+ (* a c) (* b c))");
        assert_eq!(nf("(* (+ a a) (* x x))"), "(+ (* a (* x x)) (* a (* x x)))");
    }

    #[test]
    fn sorts_atoms_by_constructor_then_content() {
        assert_eq!(nf("(+ (list a) (+ x 1))"), "(+ 1 (+ x (list a)))");
        assert_eq!(nf("(* (mu t (* t t)) b)"), "(* b (mu t (* t t)))");
    }

    #[test]
    fn normalizes_under_binders() {
        assert_eq!(nf("(mu t (* t (+ b a)))"), "(mu t (+ (* a t) (* b t)))");
        assert_eq!(nf("(list (+ a 0))"), "(list a)");
    }

    #[test]
    fn folds_list_shaped_mu() {
        assert_eq!(nf("(mu t (+ 1 (* a t)))"), "(list a)");
        assert_eq!(nf("(mu t (+ (* t a) 1))"), "(list a)");
        assert_eq!(nf("(mu t (+ 1 t))"), "(list 1)");
        assert_eq!(nf("(mu t (+ 1 (* a (* b t))))"), "(list (* a b))");
    }

    #[test]
    fn leaves_non_list_mu_alone() {
        // Binder used twice: a tree, not a list.
        assert_eq!(nf("(mu t (+ 1 (* t t)))"), "(mu t (+ 1 (* t t)))");
        // Binder under a second mu: not the plain list shape.
        assert_eq!(
            nf("(mu t (+ 1 (mu u (+ t u))))"),
            "(mu t (+ 1 (mu u (+ t u))))"
        );
        // No unit summand.
        assert_eq!(nf("(mu t (+ a (* b t)))"), "(mu t (+ a (* b t)))");
    }

    #[test]
    fn idempotent_on_samples() {
        let cases = [
            "(* (+ a b) (+ c (* d 0)))",
            "(mu t (+ 1 (* a t)))",
            "(list (* (+ a b) c))",
            "(+ (* x (* a x)) (+ (* x x) 1))",
        ];
        for case in cases {
            let once = normalize(&parse(case));
            let twice = normalize(once.as_expr());
            assert_eq!(once, twice, "normalize not idempotent on {case}");
        }
    }
}
