use std::error::Error;
use std::fmt;

use super::expr::{fresh_name, TypeExpr};

/// Capture-avoiding substitution of `replacement` for free occurrences of
/// `var`. Binders that would capture a free variable of the replacement are
/// renamed with primes; renaming is deterministic, so output is stable.
pub fn substitute(expr: &TypeExpr, var: &str, replacement: &TypeExpr) -> TypeExpr {
    use TypeExpr::*;
    match expr {
        Zero => Zero,
        One => One,
        Var(v) => {
            if v == var {
                replacement.clone()
            } else {
                Var(v.clone())
            }
        }
        Sum(l, r) => TypeExpr::sum(
            substitute(l, var, replacement),
            substitute(r, var, replacement),
        ),
        Prod(l, r) => TypeExpr::prod(
            substitute(l, var, replacement),
            substitute(r, var, replacement),
        ),
        Mu(binder, body) => {
            if binder == var {
                // The binder shadows the substitution variable.
                Mu(binder.clone(), body.clone())
            } else if body.contains_free(var) && replacement.contains_free(binder) {
                // Substituting under this binder would capture; rename it.
                let fresh = fresh_name(binder, |candidate| {
                    replacement.contains_free(candidate)
                        || body.contains_free(candidate)
                        || candidate == var
                });
                let renamed = substitute(body, binder, &TypeExpr::var(&fresh));
                TypeExpr::mu(fresh, substitute(&renamed, var, replacement))
            } else {
                TypeExpr::mu(binder.clone(), substitute(body, var, replacement))
            }
        }
        List(e) => TypeExpr::list(substitute(e, var, replacement)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffError {
    /// Differentiation reached a second recursion binder while already
    /// inside the fixed-point rule. One layer of that rule is supported.
    UnsupportedNesting { binder: String },
}

impl fmt::Display for DiffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffError::UnsupportedNesting { binder } => write!(
                f,
                "unsupported nesting: differentiation under 'mu {binder}' \
                 would need a second application of the fixed-point rule"
            ),
        }
    }
}

impl Error for DiffError {}

/// The derivative of `expr` with respect to `var`: the type of one-hole
/// contexts of `var` positions. Applied structurally, with no normalization:
///
/// * constants and other variables differentiate to `0`, `var` itself to `1`;
/// * sums differentiate pointwise;
/// * products follow the Leibniz rule;
/// * `mu y. F` becomes `[mu y. F / y] dF/dvar * list([mu y. F / y] dF/dy)`:
///   the context of a hole inside one unrolling, paired with the path of
///   unrollings above it;
/// * `list e` uses the collapsed form of the same rule,
///   `de/dvar * list e * list e`: element context plus the lists on either
///   side of the focused element.
///
/// A `mu` whose body does not use `var` contributes no holes and
/// differentiates directly to `0`; that keeps variable-free subterms from
/// tripping the nesting limit below.
///
/// One layer of the fixed-point rule is supported. If computing either
/// derivative for a `mu` runs into a second `mu` that itself needs the rule,
/// the result is an `UnsupportedNesting` error rather than a wrong answer.
pub fn differentiate(expr: &TypeExpr, var: &str) -> Result<TypeExpr, DiffError> {
    diff(expr, var, false)
}

fn diff(expr: &TypeExpr, var: &str, inside_mu_rule: bool) -> Result<TypeExpr, DiffError> {
    use TypeExpr::*;
    Ok(match expr {
        Zero | One => Zero,
        Var(v) => {
            if v == var {
                One
            } else {
                Zero
            }
        }
        Sum(l, r) => TypeExpr::sum(diff(l, var, inside_mu_rule)?, diff(r, var, inside_mu_rule)?),
        Prod(l, r) => {
            let dl = diff(l, var, inside_mu_rule)?;
            let dr = diff(r, var, inside_mu_rule)?;
            TypeExpr::sum(
                TypeExpr::prod(dl, (**r).clone()),
                TypeExpr::prod((**l).clone(), dr),
            )
        }
        Mu(binder, body) => {
            if !expr.contains_free(var) {
                Zero
            } else if inside_mu_rule {
                return Err(DiffError::UnsupportedNesting {
                    binder: binder.clone(),
                });
            } else {
                // binder != var here, since var is free in the whole mu.
                let d_var = diff(body, var, true)?;
                let d_rec = diff(body, binder, true)?;
                TypeExpr::prod(
                    substitute(&d_var, binder, expr),
                    TypeExpr::list(substitute(&d_rec, binder, expr)),
                )
            }
        }
        List(e) => {
            let de = diff(e, var, inside_mu_rule)?;
            TypeExpr::prod(
                TypeExpr::prod(de, TypeExpr::list((**e).clone())),
                TypeExpr::list((**e).clone()),
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> TypeExpr {
        s.parse().unwrap()
    }

    // -----------------------------------------------------------------------
    // substitution
    // -----------------------------------------------------------------------

    #[test]
    fn substitute_hits_free_occurrences_only() {
        let e = parse("(* x (mu x (+ x y)))");
        let got = substitute(&e, "x", &parse("(+ 1 1)"));
        assert_eq!(got, parse("(* (+ 1 1) (mu x (+ x y)))"));
    }

    #[test]
    fn substitute_renames_capturing_binder() {
        // Replacing y with x under "mu x" must not capture the new x.
        let e = parse("(mu x (+ x y))");
        let got = substitute(&e, "y", &parse("x"));
        assert_eq!(got, parse("(mu x' (+ x' x))"));
    }

    #[test]
    fn substitute_rename_skips_taken_primes() {
        // x' is already free in the body, so the rename steps past it.
        let e = parse("(mu x (+ x (+ x' y)))");
        let got = substitute(&e, "y", &parse("x"));
        assert_eq!(got, parse("(mu x'' (+ x'' (+ x' x)))"));
    }

    #[test]
    fn substitute_leaves_unrelated_binders_alone() {
        let e = parse("(mu z (+ z y))");
        let got = substitute(&e, "y", &parse("(* a a)"));
        assert_eq!(got, parse("(mu z (+ z (* a a)))"));
    }

    // -----------------------------------------------------------------------
    // differentiation, structural results
    // -----------------------------------------------------------------------

    #[test]
    fn base_rules() {
        assert_eq!(differentiate(&parse("0"), "x").unwrap(), TypeExpr::Zero);
        assert_eq!(differentiate(&parse("1"), "x").unwrap(), TypeExpr::Zero);
        assert_eq!(differentiate(&parse("y"), "x").unwrap(), TypeExpr::Zero);
        assert_eq!(differentiate(&parse("x"), "x").unwrap(), TypeExpr::One);
    }

    #[test]
    fn sum_and_product_rules_are_structural() {
        let d = differentiate(&parse("(* a x)"), "x").unwrap();
        // Leibniz form, not simplified.
        assert_eq!(d, parse("(+ (* 0 x) (* a 1))"));

        let d = differentiate(&parse("(+ x x)"), "x").unwrap();
        assert_eq!(d, parse("(+ 1 1)"));
    }

    #[test]
    fn mu_rule_single_layer() {
        // d/da (mu x. 1 + x*(a*x)): one unrolling context times the path.
        let t = parse("(mu x (+ 1 (* x (* a x))))");
        let d = differentiate(&t, "a").unwrap();
        // Spot-check the shape: product whose right factor is a list.
        match &d {
            TypeExpr::Prod(_, r) => assert!(matches!(**r, TypeExpr::List(_))),
            other => panic!("expected a product, got {other}"),
        }
        // The recursion variable is gone: every x was substituted away.
        assert!(!d.contains_free("x"));
        assert!(d.contains_free("a"));
    }

    #[test]
    fn mu_without_the_variable_is_zero() {
        let t = parse("(mu x (+ 1 x))");
        assert_eq!(differentiate(&t, "a").unwrap(), TypeExpr::Zero);
        // Differentiating by the binder name: no free occurrence either.
        assert_eq!(differentiate(&t, "x").unwrap(), TypeExpr::Zero);
    }

    #[test]
    fn nested_mu_is_rejected() {
        // Differentiating the outer mu needs the rule for the inner one too.
        let t = parse("(mu x (+ 1 (* x (mu y (+ a (* y y))))))");
        let err = differentiate(&t, "a").unwrap_err();
        assert_eq!(
            err,
            DiffError::UnsupportedNesting {
                binder: "y".into()
            }
        );
        assert!(err.to_string().contains("unsupported nesting"));
    }

    #[test]
    fn sibling_mus_are_fine() {
        // Two mus side by side each get their own single layer.
        let t = parse("(+ (mu x (+ 1 (* a x))) (mu y (+ 1 (* a (* a y)))))");
        assert!(differentiate(&t, "a").is_ok());
    }

    #[test]
    fn var_free_inner_mu_does_not_trip_nesting() {
        // The inner mu does not mention a, so it contributes zero holes and
        // no second rule application is needed.
        let t = parse("(mu x (+ (mu y (+ 1 y)) (* a x)))");
        assert!(differentiate(&t, "a").is_ok());
    }

    #[test]
    fn list_rule() {
        let d = differentiate(&parse("(list a)"), "a").unwrap();
        assert_eq!(d, parse("(* (* 1 (list a)) (list a))"));
    }
}
