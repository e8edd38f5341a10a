//! Vocabularies, worlds, world sets and propositional formulas.
//!
//! Worlds are numbered in descending truth-vector order: over `⟨q,r⟩`
//! index 0 is `11`, index 1 is `10`, index 2 is `01` and index 3 is `00`.
//! Every rendering of a world is its truth vector, first atom leftmost.

mod formula;
mod parser;
mod world;

pub use formula::Formula;
pub use parser::parse_formula;
pub use world::{Vocabulary, World, WorldSet, MAX_ATOMS};

/// `φ_w`: the conjunction of literals true exactly at `w`.
pub fn world_formula(world: World, vocab: &Vocabulary) -> Formula {
    let n = vocab.len();
    (0..n)
        .map(|atom| {
            if world.satisfies_atom(atom, n) {
                Formula::Atom(atom)
            } else {
                Formula::not(Formula::Atom(atom))
            }
        })
        .reduce(Formula::and)
        .expect("vocabulary has at least one atom")
}

/// A formula whose models are exactly `set`: `⊥` for the empty set, `⊤` for
/// the whole universe, otherwise the disjunction of world formulas in
/// ascending world index.
pub fn formula_of_world_set(set: &WorldSet, vocab: &Vocabulary) -> Formula {
    if set.is_empty() {
        return Formula::False;
    }
    if set.len() == vocab.world_count() {
        return Formula::True;
    }
    set.iter()
        .map(|w| world_formula(w, vocab))
        .reduce(Formula::or)
        .expect("non-empty set")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr() -> Vocabulary {
        Vocabulary::new(["q", "r"]).unwrap()
    }

    fn book_mag() -> Vocabulary {
        Vocabulary::new(["book", "mag"]).unwrap()
    }

    fn set(vocab: &Vocabulary, worlds: &[&str]) -> WorldSet {
        WorldSet::from_worlds(
            vocab.len(),
            worlds.iter().map(|w| vocab.world(w).unwrap()),
        )
    }

    #[test]
    fn world_formulas_identify_their_world() {
        let v = book_mag();
        let cases = [("10", "book & !mag"), ("00", "!book & !mag"), ("11", "book & mag")];
        for (w, expected) in cases {
            let world = v.world(w).unwrap();
            let f = world_formula(world, &v);
            assert_eq!(f.render(&v), expected);
            assert_eq!(f.models(&v), set(&v, &[w]));
        }
    }

    #[test]
    fn formula_of_world_set_examples() {
        let v = book_mag();
        let f = formula_of_world_set(&set(&v, &["10", "01"]), &v);
        assert_eq!(f.render(&v), "book & !mag | !book & mag");
        assert_eq!(f.models(&v), set(&v, &["10", "01"]));
        assert_eq!(formula_of_world_set(&WorldSet::empty(2), &v), Formula::False);
        assert_eq!(formula_of_world_set(&WorldSet::full(2), &v), Formula::True);
    }

    #[test]
    fn formula_of_world_set_is_exact_for_every_subset() {
        for n in 1..=4 {
            let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
            let v = Vocabulary::new(names).unwrap();
            for s in WorldSet::all_subsets(n).unwrap() {
                assert_eq!(formula_of_world_set(&s, &v).models(&v), s);
            }
        }
    }

    #[test]
    fn models_of_examples() {
        let v = qr();
        let nq = parse_formula("!q", &v).unwrap();
        assert_eq!(nq.models(&v), set(&v, &["01", "00"]));
        assert!(Formula::False.models(&v).is_empty());
        let bm = book_mag();
        let f = parse_formula("book & !mag", &bm).unwrap();
        assert_eq!(f.models(&bm), set(&bm, &["10"]));
    }

    #[test]
    fn entailment_and_equivalence() {
        let v = qr();
        let p = |s| parse_formula(s, &v).unwrap();
        assert!(p("q & r").entails(&p("q"), &v));
        assert!(p("!q").equivalent(&p("!q | false"), &v));
        assert!(!p("q").entails(&p("q & r"), &v));
    }
}
