use super::world::{Vocabulary, World, WorldSet};

/// Propositional formula over a vocabulary; atoms are referenced by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Classical satisfaction at a single world.
    pub fn satisfied_by(&self, world: World, atoms: usize) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => world.satisfies_atom(*a, atoms),
            Formula::Not(f) => !f.satisfied_by(world, atoms),
            Formula::And(a, b) => a.satisfied_by(world, atoms) && b.satisfied_by(world, atoms),
            Formula::Or(a, b) => a.satisfied_by(world, atoms) || b.satisfied_by(world, atoms),
            Formula::Implies(a, b) => !a.satisfied_by(world, atoms) || b.satisfied_by(world, atoms),
            Formula::Iff(a, b) => a.satisfied_by(world, atoms) == b.satisfied_by(world, atoms),
        }
    }

    /// `Mod(f)`, computed bottom-up with set operations.
    pub fn models(&self, vocab: &Vocabulary) -> WorldSet {
        let n = vocab.len();
        match self {
            Formula::True => WorldSet::full(n),
            Formula::False => WorldSet::empty(n),
            Formula::Atom(a) => {
                assert!(*a < n, "atom index {a} outside vocabulary");
                WorldSet::from_worlds(n, vocab.worlds().filter(|w| w.satisfies_atom(*a, n)))
            }
            Formula::Not(f) => f.models(vocab).complement(),
            Formula::And(a, b) => a.models(vocab).intersection(&b.models(vocab)),
            Formula::Or(a, b) => a.models(vocab).union(&b.models(vocab)),
            Formula::Implies(a, b) => a.models(vocab).complement().union(&b.models(vocab)),
            Formula::Iff(a, b) => {
                let (ma, mb) = (a.models(vocab), b.models(vocab));
                ma.intersection(&mb).union(&ma.union(&mb).complement())
            }
        }
    }

    pub fn entails(&self, other: &Formula, vocab: &Vocabulary) -> bool {
        self.models(vocab).is_subset(&other.models(vocab))
    }

    pub fn equivalent(&self, other: &Formula, vocab: &Vocabulary) -> bool {
        self.models(vocab) == other.models(vocab)
    }

    /// Highest atom index referenced, if any.
    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Atom(a) => Some(*a),
            Formula::Not(f) => f.max_atom(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.max_atom().max(b.max_atom())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            Formula::True | Formula::False | Formula::Atom(_) => 6,
        }
    }

    /// Renders in the ASCII surface syntax accepted by
    /// [`parse_formula`](super::parse_formula), with only the parentheses the
    /// precedence rules require.
    pub fn render(&self, vocab: &Vocabulary) -> String {
        let mut out = String::new();
        self.write(vocab, &mut out);
        out
    }

    fn write_child(&self, child: &Formula, parenthesize: bool, vocab: &Vocabulary, out: &mut String) {
        if parenthesize {
            out.push('(');
            child.write(vocab, out);
            out.push(')');
        } else {
            child.write(vocab, out);
        }
    }

    fn write(&self, vocab: &Vocabulary, out: &mut String) {
        let p = self.precedence();
        let (a, b, op, right_assoc) = match self {
            Formula::True => return out.push_str("true"),
            Formula::False => return out.push_str("false"),
            Formula::Atom(i) => return out.push_str(&vocab.atoms()[*i]),
            Formula::Not(f) => {
                out.push('!');
                return self.write_child(f, f.precedence() < p, vocab, out);
            }
            Formula::And(a, b) => (a, b, " & ", false),
            Formula::Or(a, b) => (a, b, " | ", false),
            Formula::Implies(a, b) => (a, b, " -> ", true),
            Formula::Iff(a, b) => (a, b, " <-> ", false),
        };
        let (left_paren, right_paren) = if right_assoc {
            (a.precedence() <= p, b.precedence() < p)
        } else {
            (a.precedence() < p, b.precedence() <= p)
        };
        self.write_child(a, left_paren, vocab, out);
        out.push_str(op);
        self.write_child(b, right_paren, vocab, out);
    }
}
