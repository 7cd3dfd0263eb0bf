//! Formulas of the reachability language.
//!
//! The core syntax has exactly five constructors: atoms, negation,
//! conjunction, the interior modality `[]` and the reachability modality
//! `gamma(phi, psi)`. Everything else the parser accepts (`<>`, `|`, `->`,
//! `<->`, `T`, `F`, `pi`) is rewritten into the core on the way in.

mod adequate;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use adequate::{
    adequate_closure, check_adequate, hat_extension, single_negation, subformulas,
    AdequacyViolation, AdequateSet,
};
pub use parse::{parse, ParseError, ParseErrorKind};

/// Reserved atom used to encode the constants `T` and `F`.
///
/// User input may not mention it and valuations never contain it; it always
/// evaluates to the empty set.
pub const TRUTH_ATOM: &str = "__t";

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(Arc<str>),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Reach(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Arc::new(f))
    }

    pub fn reach(a: Formula, b: Formula) -> Formula {
        Formula::Reach(Arc::new(a), Arc::new(b))
    }

    /// `T`, encoded as `~(__t & ~__t)`.
    pub fn top() -> Formula {
        Formula::not(Formula::bottom())
    }

    /// `F`, encoded as `__t & ~__t`.
    pub fn bottom() -> Formula {
        let t = Formula::atom(TRUTH_ATOM);
        Formula::and(t.clone(), Formula::not(t))
    }

    /// `<>f` as `~[]~f`.
    pub fn diamond(f: Formula) -> Formula {
        Formula::not(Formula::boxed(Formula::not(f)))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    /// `a -> b` as `~(a & ~b)`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// The path-component box `pi f`, i.e. `~gamma(T, ~f)`.
    pub fn pi(f: Formula) -> Formula {
        Formula::not(Formula::reach(Formula::top(), Formula::not(f)))
    }

    /// Left-nested conjunction; the empty conjunction is `T`.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Left-nested disjunction; the empty disjunction is `F`.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Not(inner) if inner.is_bottom())
    }

    pub fn is_bottom(&self) -> bool {
        match self {
            Formula::And(a, b) => match (&**a, &**b) {
                (Formula::Atom(x), Formula::Not(y)) => {
                    &**x == TRUTH_ATOM && matches!(&**y, Formula::Atom(z) if &**z == TRUTH_ATOM)
                }
                _ => false,
            },
            _ => false,
        }
    }

    /// Returns `phi` when `self` has the shape `~[]~phi`.
    pub fn as_diamond(&self) -> Option<&Formula> {
        match self {
            Formula::Not(b) => match &**b {
                Formula::Box(n) => match &**n {
                    Formula::Not(phi) => Some(phi),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Immediate subterms.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Not(f) | Formula::Box(f) => vec![f],
            Formula::And(a, b) | Formula::Reach(a, b) => vec![a, b],
        }
    }

    /// Atom names occurring in the formula, the reserved atom excluded.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) if &**name != TRUTH_ATOM => {
                out.insert(name.to_string());
            }
            Formula::Atom(_) => {}
            _ => self.children().into_iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn mentions_reach(&self) -> bool {
        matches!(self, Formula::Reach(..)) || self.children().into_iter().any(Formula::mentions_reach)
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        if self.is_top() {
            return f.write_str("T");
        }
        if self.is_bottom() {
            return f.write_str("F");
        }
        match self {
            Formula::Atom(name) => f.write_str(name),
            Formula::Not(inner) => {
                f.write_str("~")?;
                inner.write_prec(f, PREC_UNARY)
            }
            Formula::Box(inner) => {
                f.write_str("[]")?;
                inner.write_prec(f, PREC_UNARY)
            }
            Formula::And(a, b) => {
                let wrap = prec > PREC_AND;
                if wrap {
                    f.write_str("(")?;
                }
                a.write_prec(f, PREC_AND)?;
                f.write_str(" & ")?;
                b.write_prec(f, PREC_AND + 1)?;
                if wrap {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Reach(a, b) => {
                f.write_str("gamma(")?;
                a.write_prec(f, 0)?;
                f.write_str(", ")?;
                b.write_prec(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

const PREC_AND: u8 = 1;
const PREC_UNARY: u8 = 3;

/// Canonical printing: core syntax only, apart from `T`/`F` for the encoded
/// constants. Re-parsing the output yields the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Canonical string form of a formula.
pub fn print(f: &Formula) -> String {
    f.to_string()
}
