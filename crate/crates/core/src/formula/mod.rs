//! Quantifier-free Tarski formulas over `Z[x1..xn]`.
//!
//! Formulas are kept in negation normal form with flattened conjunctions
//! and disjunctions and constants folded away, so structurally equal
//! formulas compare equal and printing then parsing is the identity.

mod parser;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::polynomial::{factor_set, Poly, Rational};

pub use parser::{parse_formula, parse_poly, ParseError, ParseErrorKind};

/// Sign condition of an atom `p rel 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Relation {
    pub fn holds(self, sign: Ordering) -> bool {
        match self {
            Relation::Lt => sign == Ordering::Less,
            Relation::Le => sign != Ordering::Greater,
            Relation::Gt => sign == Ordering::Greater,
            Relation::Ge => sign != Ordering::Less,
            Relation::Eq => sign == Ordering::Equal,
            Relation::Ne => sign != Ordering::Equal,
        }
    }

    /// The relation satisfied by `-p` exactly when `p` satisfies `self`.
    pub fn mirrored(self) -> Relation {
        match self {
            Relation::Lt => Relation::Gt,
            Relation::Le => Relation::Ge,
            Relation::Gt => Relation::Lt,
            Relation::Ge => Relation::Le,
            r => r,
        }
    }

    /// Logical negation.
    pub fn negated(self) -> Relation {
        match self {
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Gt => Relation::Le,
            Relation::Ge => Relation::Lt,
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Ne => "/=",
        }
    }
}

/// `poly rel 0` with `poly` nonconstant, primitive and with positive
/// iterated leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    poly: Poly,
    rel: Relation,
}

impl Atom {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    pub fn holds_at(&self, point: &[Rational]) -> bool {
        self.rel.holds(self.poly.sign_at(point))
    }
}

/// Formula body in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Atom(Atom),
    And(Vec<Node>),
    Or(Vec<Node>),
}

impl Node {
    /// Normalized atom `lhs rel 0`; constant polynomials fold to a truth
    /// value.
    pub fn atom(lhs: Poly, rel: Relation) -> Node {
        if let Some(c) = lhs.constant_value() {
            let sign = c.cmp(&num_bigint::BigInt::from(0));
            return if rel.holds(sign) { Node::True } else { Node::False };
        }
        let (poly, flipped) = lhs.normalize_signed();
        let rel = if flipped { rel.mirrored() } else { rel };
        Node::Atom(Atom { poly, rel })
    }

    pub fn and(parts: Vec<Node>) -> Node {
        Self::junction(parts, true)
    }

    pub fn or(parts: Vec<Node>) -> Node {
        Self::junction(parts, false)
    }

    fn junction(parts: Vec<Node>, is_and: bool) -> Node {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match (p, is_and) {
                (Node::True, true) | (Node::False, false) => {}
                (Node::False, true) => return Node::False,
                (Node::True, false) => return Node::True,
                (Node::And(inner), true) | (Node::Or(inner), false) => flat.extend(inner),
                (other, _) => flat.push(other),
            }
        }
        match flat.len() {
            0 if is_and => Node::True,
            0 => Node::False,
            1 => flat.pop().expect("one element"),
            _ if is_and => Node::And(flat),
            _ => Node::Or(flat),
        }
    }

    pub fn negate(self) -> Node {
        match self {
            Node::True => Node::False,
            Node::False => Node::True,
            Node::Atom(a) => Node::Atom(Atom {
                poly: a.poly,
                rel: a.rel.negated(),
            }),
            Node::And(parts) => Node::or(parts.into_iter().map(Node::negate).collect()),
            Node::Or(parts) => Node::and(parts.into_iter().map(Node::negate).collect()),
        }
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Node::Atom(a) => out.push(a),
            Node::And(parts) | Node::Or(parts) => {
                for p in parts {
                    p.collect_atoms(out);
                }
            }
            Node::True | Node::False => {}
        }
    }

    /// Three-valued evaluation; `values` gives each atom's truth (in
    /// left-to-right order) or `None` when unknown.
    fn eval3(&self, values: &[Option<bool>], next: &mut usize) -> Option<bool> {
        match self {
            Node::True => Some(true),
            Node::False => Some(false),
            Node::Atom(_) => {
                let v = values[*next];
                *next += 1;
                v
            }
            Node::And(parts) => {
                let mut result = Some(true);
                for p in parts {
                    match p.eval3(values, next) {
                        Some(false) => result = Some(false),
                        None if result == Some(true) => result = None,
                        _ => {}
                    }
                }
                result
            }
            Node::Or(parts) => {
                let mut result = Some(false);
                for p in parts {
                    match p.eval3(values, next) {
                        Some(true) => result = Some(true),
                        None if result == Some(false) => result = None,
                        _ => {}
                    }
                }
                result
            }
        }
    }

    fn write<S: AsRef<str>>(&self, f: &mut fmt::Formatter<'_>, names: &[S], nested: bool) -> fmt::Result {
        match self {
            Node::True => f.write_str("0 = 0"),
            Node::False => f.write_str("1 = 0"),
            Node::Atom(a) => write!(f, "{} {} 0", a.poly.to_text(names), a.rel.symbol()),
            Node::And(parts) | Node::Or(parts) => {
                let sep = if matches!(self, Node::And(_)) { " /\\ " } else { " \\/ " };
                if nested {
                    f.write_str("(")?;
                }
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    p.write(f, names, true)?;
                }
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A set of polynomials in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FactorSet(BTreeSet<Poly>);

impl FactorSet {
    pub fn new() -> Self {
        FactorSet(BTreeSet::new())
    }

    pub fn insert(&mut self, p: Poly) -> bool {
        self.0.insert(p)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Poly> {
        self.0.iter()
    }

    pub fn union(&self, other: &FactorSet) -> FactorSet {
        FactorSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &FactorSet) -> FactorSet {
        FactorSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &FactorSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Elements of level strictly below `level`.
    pub fn below_level(&self, level: usize) -> FactorSet {
        self.0.iter().filter(|p| p.level() < level).cloned().collect()
    }
}

impl FromIterator<Poly> for FactorSet {
    fn from_iter<I: IntoIterator<Item = Poly>>(iter: I) -> Self {
        FactorSet(iter.into_iter().collect())
    }
}

impl IntoIterator for FactorSet {
    type Item = Poly;
    type IntoIter = alloc::collections::btree_set::IntoIter<Poly>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a FactorSet {
    type Item = &'a Poly;
    type IntoIter = alloc::collections::btree_set::Iter<'a, Poly>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// How Split chooses the polynomials to make sign-invariant next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum QPolicy {
    /// Every factor of the formula not yet sign-invariant.
    Full,
    /// A minimal set of atoms whose signs at the sample decide the formula.
    #[default]
    Greedy,
}

/// A formula together with its declared variables (in level order) and the
/// factor data derived from its atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    variables: Vec<String>,
    body: Node,
    atom_factors: Vec<Vec<Poly>>,
    factors: FactorSet,
}

impl Formula {
    pub fn new(variables: Vec<String>, body: Node) -> Formula {
        let mut atoms = Vec::new();
        body.collect_atoms(&mut atoms);
        let polys: Vec<Poly> = atoms.iter().map(|a| a.poly.clone()).collect();
        let all = factor_set(&polys).expect("atom polynomials are nonzero");
        let atom_factors = polys
            .iter()
            .map(|p| {
                all.iter()
                    .filter(|f| p.exact_div(f).is_some())
                    .cloned()
                    .collect()
            })
            .collect();
        Formula {
            variables,
            body,
            atom_factors,
            factors: all.into_iter().collect(),
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn dimension(&self) -> usize {
        self.variables.len()
    }

    pub fn body(&self) -> &Node {
        &self.body
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.body.collect_atoms(&mut out);
        out
    }

    /// Irreducible (univariate) or squarefree-basis (multivariate) factors
    /// of all atom polynomials.
    pub fn factors(&self) -> &FactorSet {
        &self.factors
    }

    pub fn evaluate(&self, point: &[Rational]) -> bool {
        let values: Vec<Option<bool>> = self
            .atoms()
            .iter()
            .map(|a| Some(a.holds_at(point)))
            .collect();
        self.body
            .eval3(&values, &mut 0)
            .expect("all atoms are known")
    }

    fn pinned_by(&self, set: &FactorSet) -> Vec<bool> {
        self.atom_factors
            .iter()
            .map(|fs| fs.iter().all(|f| set.contains(f)))
            .collect()
    }

    /// Three-valued evaluation at `point` where only atoms all of whose
    /// factors lie in `set` are known; `None` if that does not decide the
    /// formula.
    pub fn decided_by(&self, point: &[Rational], set: &FactorSet) -> Option<bool> {
        let values: Vec<Option<bool>> = self
            .atoms()
            .iter()
            .zip(self.pinned_by(set))
            .map(|(a, k)| k.then(|| a.holds_at(point)))
            .collect();
        self.body.eval3(&values, &mut 0)
    }

    /// Polynomials whose sign-invariance (together with that of `p`)
    /// decides the formula near `alpha`. Empty exactly when `p` already
    /// suffices.
    pub fn choose_q(&self, alpha: &[Rational], p: &FactorSet, policy: QPolicy) -> FactorSet {
        let atoms = self.atoms();
        let pinned = self.pinned_by(p);
        let values: Vec<bool> = atoms.iter().map(|a| a.holds_at(alpha)).collect();
        let eval = |known: &[bool]| -> Option<bool> {
            let v: Vec<Option<bool>> = values
                .iter()
                .zip(known)
                .map(|(&v, &k)| k.then_some(v))
                .collect();
            self.body.eval3(&v, &mut 0)
        };
        if eval(&pinned).is_some() {
            return FactorSet::new();
        }
        if policy == QPolicy::Full {
            return self.factors.difference(p);
        }
        let mut candidates: Vec<usize> = (0..atoms.len()).filter(|&i| !pinned[i]).collect();
        candidates.sort_by_key(|&i| (atoms[i].poly.level(), atoms[i].poly.total_degree(), i));
        let mut known = pinned.clone();
        let mut chosen = Vec::new();
        for i in candidates {
            known[i] = true;
            chosen.push(i);
            if eval(&known).is_some() {
                break;
            }
        }
        for j in (0..chosen.len()).rev() {
            let i = chosen[j];
            known[i] = false;
            if eval(&known).is_some() {
                chosen.remove(j);
            } else {
                known[i] = true;
            }
        }
        chosen
            .iter()
            .flat_map(|&i| self.atom_factors[i].iter())
            .filter(|f| !p.contains(f))
            .cloned()
            .collect()
    }

    /// Canonical text, e.g. `vars x, y; -16x^2+16y-8x-1 > 0 /\ x^2+y^2-1 > 0`.
    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }

    /// Body text only.
    pub fn body_text(&self) -> String {
        alloc::format!("{}", BodyDisplay(self))
    }
}

struct BodyDisplay<'a>(&'a Formula);

impl fmt::Display for BodyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.body.write(f, &self.0.variables, false)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vars {}; {}", self.variables.join(", "), BodyDisplay(self))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::polynomial::test_util::*;
    use alloc::vec;

    pub fn example() -> Formula {
        parse_formula("vars x, y; 16y - 16x^2 - 8x - 1 > 0 /\\ x^2 + y^2 - 1 > 0").unwrap()
    }

    fn set(ps: &[Poly]) -> FactorSet {
        ps.iter().cloned().collect()
    }

    #[test]
    fn example_structure() {
        let f = example();
        match f.body() {
            Node::And(parts) => {
                assert_eq!(parts.len(), 2);
                assert_eq!(parts[0], Node::Atom(Atom { poly: f1(), rel: Relation::Gt }));
                assert_eq!(parts[1], Node::Atom(Atom { poly: f2(), rel: Relation::Gt }));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(f.factors(), &set(&[f1(), f2()]));
    }

    #[test]
    fn evaluation_examples() {
        let f = example();
        assert!(!f.evaluate(&[q(0, 1), q(0, 1)]));
        assert!(f.evaluate(&[q(-3, 2), q(2, 1)]));
        assert!(!f.evaluate(&[q(0, 1), q(1, 2)]));
    }

    #[test]
    fn factor_examples() {
        let g = parse_formula("vars x; x^2-1 > 0").unwrap();
        let want = set(&[p(1, &[(&[1], 1), (&[0], -1)]), p(1, &[(&[1], 1), (&[0], 1)])]);
        assert_eq!(g.factors(), &want);
        let t = parse_formula("vars x; 0 < 1").unwrap();
        assert!(t.factors().is_empty());
        assert_eq!(t.body(), &Node::True);
    }

    #[test]
    fn greedy_choice_examples() {
        let f = example();
        let q0 = f.choose_q(&[q(0, 1), q(0, 1)], &FactorSet::new(), QPolicy::Greedy);
        assert_eq!(q0, set(&[f1()]));
        let q1 = f.choose_q(&[q(0, 1), q(1, 2)], &set(&[f1()]), QPolicy::Greedy);
        assert_eq!(q1, set(&[f2()]));
        let all = set(&[f1(), f2(), f3(), f4(), f5()]);
        for policy in [QPolicy::Greedy, QPolicy::Full] {
            assert!(f.choose_q(&[q(7, 3), q(-1, 5)], &all, policy).is_empty());
        }
        let full = f.choose_q(&[q(0, 1), q(0, 1)], &FactorSet::new(), QPolicy::Full);
        assert_eq!(full, set(&[f1(), f2()]));
    }

    #[test]
    fn greedy_prunes_to_minimal() {
        // the second disjunct alone decides; the first is tried first
        let f = parse_formula("vars x, y; y > 0 \\/ x^2 + 1 > 0").unwrap();
        let got = f.choose_q(&[q(0, 1), q(-1, 1)], &FactorSet::new(), QPolicy::Greedy);
        assert_eq!(got, set(&[p(2, &[(&[2, 0], 1), (&[0, 0], 1)])]));
    }

    #[test]
    fn relations() {
        for r in [Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge, Relation::Eq, Relation::Ne] {
            for s in [Ordering::Less, Ordering::Equal, Ordering::Greater] {
                assert_eq!(r.negated().holds(s), !r.holds(s));
                assert_eq!(r.mirrored().holds(s.reverse()), r.holds(s));
            }
        }
    }

    #[test]
    fn junctions_fold_and_flatten() {
        let a = Node::atom(Poly::var(1, 0), Relation::Gt);
        let b = Node::atom(Poly::var(1, 0), Relation::Lt);
        assert_eq!(Node::and(vec![Node::True, a.clone()]), a);
        assert_eq!(Node::and(vec![Node::False, a.clone()]), Node::False);
        assert_eq!(
            Node::or(vec![a.clone(), Node::or(vec![b.clone(), a.clone()])]),
            Node::Or(vec![a.clone(), b.clone(), a.clone()])
        );
        assert_eq!(Node::or(vec![]), Node::False);
        assert_eq!(Node::atom(Poly::var(1, 0).scale(&(-2).into()), Relation::Le), Node::atom(Poly::var(1, 0), Relation::Ge));
    }
}
