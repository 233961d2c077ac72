use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;

use super::expr::TypeExpr;

/// Result of a finite-model count.
///
/// `stabilized` is true when every fixed-point iteration hit a repeated
/// value within its unroll budget; the count is then the exact cardinality
/// of the type. An unstabilized count is still the well-defined cap-bounded
/// approximation, just not a cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cardinality {
    pub count: u64,
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountError {
    /// The count does not fit in 64 bits.
    Overflow,
    /// A free variable had no cardinality in the environment.
    UnboundVar(String),
}

impl fmt::Display for CountError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountError::Overflow => write!(f, "inhabitant count overflowed 64 bits"),
            CountError::UnboundVar(v) => {
                write!(f, "free variable '{v}' has no cardinality in the environment")
            }
        }
    }
}

impl Error for CountError {}

/// Count inhabitants over finite carriers for the free variables.
///
/// `Mu` (and `List`, its special case) is approximated by iterating its
/// body from the empty set, `size_cap + 1` evaluations at most, each round
/// feeding the previous count back in. For a list that means lengths up to
/// `size_cap`; for the usual tree shape, unrolling depth up to `size_cap`.
/// Iteration stops early when a round reproduces the previous count, and
/// that early stop is what `stabilized` reports.
pub fn count_inhabitants(
    expr: &TypeExpr,
    env: &BTreeMap<String, u64>,
    size_cap: u32,
) -> Result<Cardinality, CountError> {
    let mut scratch = env.clone();
    count(expr, &mut scratch, size_cap)
}

fn count(
    expr: &TypeExpr,
    env: &mut BTreeMap<String, u64>,
    cap: u32,
) -> Result<Cardinality, CountError> {
    use TypeExpr::*;
    match expr {
        Zero => Ok(Cardinality {
            count: 0,
            stabilized: true,
        }),
        One => Ok(Cardinality {
            count: 1,
            stabilized: true,
        }),
        Var(v) => match env.get(v) {
            Some(&n) => Ok(Cardinality {
                count: n,
                stabilized: true,
            }),
            None => Err(CountError::UnboundVar(v.clone())),
        },
        Sum(l, r) => {
            let a = count(l, env, cap)?;
            let b = count(r, env, cap)?;
            Ok(Cardinality {
                count: a.count.checked_add(b.count).ok_or(CountError::Overflow)?,
                stabilized: a.stabilized && b.stabilized,
            })
        }
        Prod(l, r) => {
            let a = count(l, env, cap)?;
            let b = count(r, env, cap)?;
            Ok(Cardinality {
                count: a.count.checked_mul(b.count).ok_or(CountError::Overflow)?,
                stabilized: a.stabilized && b.stabilized,
            })
        }
        Mu(binder, body) => {
            let saved = env.get(binder).copied();
            let mut current = 0u64;
            let mut fixed = false;
            let mut inner_stable = true;
            for _ in 0..=cap {
                env.insert(binder.clone(), current);
                let step = match count(body, env, cap) {
                    Ok(s) => s,
                    Err(e) => {
                        restore(env, binder, saved);
                        return Err(e);
                    }
                };
                inner_stable &= step.stabilized;
                if step.count == current {
                    fixed = true;
                    break;
                }
                current = step.count;
            }
            restore(env, binder, saved);
            Ok(Cardinality {
                count: current,
                stabilized: fixed && inner_stable,
            })
        }
        List(e) => {
            // list e = mu t. 1 + e * t, iterated directly.
            let elem = count(e, env, cap)?;
            let mut current = 0u64;
            let mut fixed = false;
            for _ in 0..=cap {
                let step = elem
                    .count
                    .checked_mul(current)
                    .and_then(|x| x.checked_add(1))
                    .ok_or(CountError::Overflow)?;
                if step == current {
                    fixed = true;
                    break;
                }
                current = step;
            }
            Ok(Cardinality {
                count: current,
                stabilized: fixed && elem.stabilized,
            })
        }
    }
}

fn restore(env: &mut BTreeMap<String, u64>, binder: &str, saved: Option<u64>) {
    match saved {
        Some(v) => env.insert(binder.to_string(), v),
        None => env.remove(binder),
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> TypeExpr {
        s.parse().unwrap()
    }

    fn env(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn polynomial_counts() {
        let e = parse("(+ 1 (+ (* a a) (* a (* a a))))");
        let c = count_inhabitants(&e, &env(&[("a", 2)]), 4).unwrap();
        assert_eq!(c.count, 1 + 4 + 8);
        assert!(c.stabilized);
    }

    #[test]
    fn unbound_var_is_an_error() {
        let e = parse("(* a b)");
        assert_eq!(
            count_inhabitants(&e, &env(&[("a", 2)]), 4),
            Err(CountError::UnboundVar("b".into()))
        );
    }

    #[test]
    fn tree_unrolling_depth_4() {
        // Binary trees of height at most 4: 1, 2, 5, 26, 677.
        let tree = parse("(mu x (+ 1 (* x (* a x))))");
        let c = count_inhabitants(&tree, &env(&[("a", 1)]), 4).unwrap();
        assert_eq!(c.count, 677);
        assert!(!c.stabilized);

        let c3 = count_inhabitants(&tree, &env(&[("a", 1)]), 3).unwrap();
        assert_eq!(c3.count, 26);
    }

    #[test]
    fn list_lengths_up_to_cap() {
        let e = parse("(list a)");
        let c = count_inhabitants(&e, &env(&[("a", 2)]), 4).unwrap();
        // 1 + 2 + 4 + 8 + 16
        assert_eq!(c.count, 31);
        assert!(!c.stabilized);
    }

    #[test]
    fn list_and_its_mu_encoding_agree() {
        let prim = parse("(list a)");
        let encoded = parse("(mu t (+ 1 (* a t)))");
        for card in 0..4u64 {
            for cap in 0..6u32 {
                let a = count_inhabitants(&prim, &env(&[("a", card)]), cap).unwrap();
                let b = count_inhabitants(&encoded, &env(&[("a", card)]), cap).unwrap();
                assert_eq!(a, b, "card {card} cap {cap}");
            }
        }
    }

    #[test]
    fn degenerate_fixed_points_stabilize() {
        // Lists over an empty element type: only the empty list.
        let c = count_inhabitants(&parse("(list a)"), &env(&[("a", 0)]), 4).unwrap();
        assert_eq!(c.count, 1);
        assert!(c.stabilized);

        // mu x. x has no inhabitants, and 0 is already a fixed point.
        let c = count_inhabitants(&parse("(mu x x)"), &env(&[]), 4).unwrap();
        assert_eq!(c.count, 0);
        assert!(c.stabilized);

        // A mu that ignores its binder is just its body.
        let c = count_inhabitants(&parse("(mu x (+ 1 1))"), &env(&[]), 1).unwrap();
        assert_eq!(c.count, 2);
        assert!(c.stabilized);
        // With cap 0 there is no second round to observe the repeat.
        let c = count_inhabitants(&parse("(mu x (+ 1 1))"), &env(&[]), 0).unwrap();
        assert_eq!(c.count, 2);
        assert!(!c.stabilized);
    }

    #[test]
    fn shadowed_binder_uses_inner_binding() {
        // The outer a = 3 is shadowed by the mu binder inside its body.
        let e = parse("(* a (mu a (+ 1 1)))");
        let c = count_inhabitants(&e, &env(&[("a", 3)]), 4).unwrap();
        assert_eq!(c.count, 6);
    }

    #[test]
    fn overflow_is_reported() {
        let e = parse("(mu x (+ 1 (* x (* x (* a x)))))");
        assert_eq!(
            count_inhabitants(&e, &env(&[("a", 1000)]), 10),
            Err(CountError::Overflow)
        );
    }
}
