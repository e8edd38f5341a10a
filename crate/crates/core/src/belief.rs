//! Exact belief states over the full world universe, Bayesian conditioning,
//! and the JSON state-file format.

use std::fmt;
use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use crate::error::{EdiError, Result};
use crate::logic::{Formula, Vocabulary, World, WorldSet};
use crate::rational::{parse_rational, to_decimal_string, to_fraction_string, Rational};

/// A probability distribution over every world of an `atoms`-atom
/// vocabulary. Entries are indexed by world index, so the vector reads in
/// the familiar `⟨11,10,01,00⟩` order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BeliefState {
    atoms: usize,
    probs: Vec<Rational>,
}

impl BeliefState {
    /// Validates length, non-negativity and an exact total of 1.
    pub fn new(atoms: usize, probs: Vec<Rational>) -> Result<Self> {
        if probs.len() != 1 << atoms {
            return Err(EdiError::InvalidBeliefState(format!(
                "expected {} probabilities for {atoms} atoms, got {}",
                1usize << atoms,
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(EdiError::InvalidBeliefState(format!(
                "negative probability {}",
                to_fraction_string(p)
            )));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(EdiError::InvalidBeliefState(format!(
                "probabilities sum to {}, not 1",
                to_fraction_string(&total)
            )));
        }
        Ok(BeliefState { atoms, probs })
    }

    pub fn point_mass(atoms: usize, world: World) -> Self {
        let mut probs = vec![Rational::zero(); 1 << atoms];
        probs[world.index()] = Rational::one();
        BeliefState { atoms, probs }
    }

    pub fn uniform(atoms: usize) -> Self {
        let n = 1i64 << atoms;
        BeliefState {
            atoms,
            probs: vec![crate::rational::ratio(1, n); n as usize],
        }
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn world_count(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, w: World) -> &Rational {
        &self.probs[w.index()]
    }

    /// `b(α)` for a model set.
    pub fn mass(&self, set: &WorldSet) -> Rational {
        set.iter().map(|w| &self.probs[w.index()]).sum()
    }

    /// `W^b`: worlds with strictly positive probability.
    pub fn support(&self) -> WorldSet {
        WorldSet::from_worlds(
            self.atoms,
            self.probs
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_positive())
                .map(|(i, _)| World::from_index(i)),
        )
    }

    /// Bayesian conditioning on a model set.
    pub fn condition(&self, evidence: &WorldSet) -> Result<BeliefState> {
        let total = self.mass(evidence);
        if total.is_zero() {
            return Err(EdiError::ConditioningUndefined);
        }
        let probs = self
            .probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if evidence.contains(World::from_index(i)) {
                    p / &total
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(BeliefState { atoms: self.atoms, probs })
    }

    /// All distributions whose entries are multiples of `1/denominator`, in
    /// lexicographically descending order of the probability vector. Point
    /// masses are always included.
    pub fn grid(atoms: usize, denominator: u32) -> Result<Vec<BeliefState>> {
        if denominator == 0 {
            return Err(EdiError::InvalidParameter("grid denominator must be positive".into()));
        }
        let worlds = 1usize << atoms;
        let mut out = Vec::new();
        let mut counts = vec![0u32; worlds];
        fn fill(
            slot: usize,
            remaining: u32,
            counts: &mut Vec<u32>,
            den: u32,
            atoms: usize,
            out: &mut Vec<BeliefState>,
        ) {
            if slot + 1 == counts.len() {
                counts[slot] = remaining;
                let probs = counts
                    .iter()
                    .map(|&c| crate::rational::ratio(c as i64, den as i64))
                    .collect();
                out.push(BeliefState { atoms, probs });
                return;
            }
            for c in (0..=remaining).rev() {
                counts[slot] = c;
                fill(slot + 1, remaining - c, counts, den, atoms, out);
            }
        }
        fill(0, denominator, &mut counts, denominator, atoms, &mut out);
        Ok(out)
    }

    /// Probabilities keyed by truth vector, in world-index order.
    pub fn to_json(&self, vocab: &Vocabulary) -> Value {
        let mut probs = Map::new();
        for (i, p) in self.probs.iter().enumerate() {
            probs.insert(
                World::from_index(i).truth_vector(self.atoms),
                Value::String(to_fraction_string(p)),
            );
        }
        let mut root = Map::new();
        root.insert(
            "atoms".into(),
            Value::Array(vocab.atoms().iter().cloned().map(Value::String).collect()),
        );
        root.insert("probabilities".into(), Value::Object(probs));
        Value::Object(root)
    }

    /// Just the `{"11": "p", …}` map.
    pub fn probabilities_json(&self) -> Value {
        let mut probs = Map::new();
        for (i, p) in self.probs.iter().enumerate() {
            probs.insert(
                World::from_index(i).truth_vector(self.atoms),
                Value::String(to_fraction_string(p)),
            );
        }
        Value::Object(probs)
    }

    /// Parses the state-file JSON. Missing worlds default to 0.
    pub fn from_json(value: &Value) -> Result<(Vocabulary, BeliefState)> {
        let bad = |m: &str| EdiError::InvalidBeliefState(m.to_string());
        let atoms = value
            .get("atoms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `atoms` array"))?
            .iter()
            .map(|a| a.as_str().map(str::to_string).ok_or_else(|| bad("atom names must be strings")))
            .collect::<Result<Vec<_>>>()?;
        let vocab = Vocabulary::new(atoms)?;
        let n = vocab.len();
        let table = value
            .get("probabilities")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing `probabilities` object"))?;
        let mut probs = vec![Rational::zero(); vocab.world_count()];
        let mut seen = WorldSet::empty(n);
        for (key, raw) in table {
            let w = World::from_truth_vector(key, n)?;
            if seen.contains(w) {
                return Err(bad(&format!("world {key} listed twice")));
            }
            seen.insert(w);
            let text = match raw {
                Value::String(s) => s.clone(),
                Value::Number(num) => num.to_string(),
                _ => return Err(bad(&format!("probability of {key} must be a string"))),
            };
            probs[w.index()] = parse_rational(&text)?;
        }
        let state = BeliefState::new(n, probs)?;
        Ok((vocab, state))
    }

    pub fn load(path: &Path) -> Result<(Vocabulary, BeliefState)> {
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text)?;
        Self::from_json(&value)
    }

    /// `⟨0, 0, 0.46, 0.54⟩`-style rendering with decimal entries.
    pub fn to_decimal_tuple(&self, sig: usize) -> String {
        let parts: Vec<String> = self.probs.iter().map(|p| to_decimal_string(p, sig)).collect();
        format!("⟨{}⟩", parts.join(", "))
    }
}

impl fmt::Display for BeliefState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(to_fraction_string).collect();
        write!(f, "⟨{}⟩", parts.join(", "))
    }
}

impl fmt::Debug for BeliefState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `b(α)`.
pub fn mass(b: &BeliefState, a: &Formula, vocab: &Vocabulary) -> Rational {
    b.mass(&a.models(vocab))
}

pub fn bayesian_conditioning(b: &BeliefState, a: &Formula, vocab: &Vocabulary) -> Result<BeliefState> {
    b.condition(&a.models(vocab))
}

/// Probabilistic expansion `b⁺_α`, identified with Bayesian conditioning.
pub fn expansion(b: &BeliefState, a: &Formula, vocab: &Vocabulary) -> Result<BeliefState> {
    bayesian_conditioning(b, a, vocab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn state(atoms: usize, ps: &[(i64, i64)]) -> BeliefState {
        BeliefState::new(atoms, ps.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    fn km() -> (Vocabulary, BeliefState) {
        (
            Vocabulary::new(["book", "mag"]).unwrap(),
            state(2, &[(0, 1), (1, 2), (1, 2), (0, 1)]),
        )
    }

    #[test]
    fn construction_is_exact() {
        assert!(BeliefState::new(2, vec![ratio(3, 10), ratio(7, 10), int(0), int(0)]).is_ok());
        let err = BeliefState::new(2, vec![ratio(3, 10), ratio(7, 10), ratio(1, 1_000_000), int(0)]);
        assert!(matches!(err, Err(EdiError::InvalidBeliefState(_))));
        assert!(BeliefState::new(2, vec![int(2), int(-1), int(0), int(0)]).is_err());
        assert!(BeliefState::new(2, vec![int(1)]).is_err());
    }

    #[test]
    fn mass_examples() {
        let (v, b) = km();
        assert_eq!(mass(&b, &parse_formula("book", &v).unwrap(), &v), ratio(1, 2));
        assert_eq!(mass(&b, &Formula::True, &v), int(1));
        let qr = Vocabulary::new(["q", "r"]).unwrap();
        let b37 = state(2, &[(3, 10), (7, 10), (0, 1), (0, 1)]);
        assert_eq!(mass(&b37, &parse_formula("!q", &qr).unwrap(), &qr), int(0));
    }

    #[test]
    fn conditioning_examples() {
        let (v, b) = km();
        let book = parse_formula("book", &v).unwrap();
        assert_eq!(bayesian_conditioning(&b, &book, &v).unwrap(), state(2, &[(0, 1), (1, 1), (0, 1), (0, 1)]));
        let qr = Vocabulary::new(["q", "r"]).unwrap();
        let certain = BeliefState::point_mass(2, qr.world("11").unwrap());
        let qandr = parse_formula("q & r", &qr).unwrap();
        assert_eq!(bayesian_conditioning(&certain, &qandr, &qr).unwrap(), certain);
        let b37 = state(2, &[(3, 10), (7, 10), (0, 1), (0, 1)]);
        let nq = parse_formula("!q", &qr).unwrap();
        assert!(matches!(
            bayesian_conditioning(&b37, &nq, &qr),
            Err(EdiError::ConditioningUndefined)
        ));
        assert_eq!(expansion(&b, &book, &v).unwrap(), bayesian_conditioning(&b, &book, &v).unwrap());
    }

    #[test]
    fn support_examples() {
        let (_, b) = km();
        assert_eq!(b.support().truth_vectors(), ["10", "01"]);
        let qr = Vocabulary::new(["q", "r"]).unwrap();
        assert_eq!(BeliefState::point_mass(2, qr.world("11").unwrap()).support().truth_vectors(), ["11"]);
        let b37 = state(2, &[(3, 10), (7, 10), (0, 1), (0, 1)]);
        assert_eq!(b37.support().truth_vectors(), ["11", "10"]);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(BeliefState::grid(2, 4).unwrap().len(), 35);
        assert_eq!(BeliefState::grid(3, 2).unwrap().len(), 36);
        let g = BeliefState::grid(2, 4).unwrap();
        assert_eq!(g[0], BeliefState::point_mass(2, World::from_index(0)));
        for w in 0..4 {
            assert!(g.contains(&BeliefState::point_mass(2, World::from_index(w))));
        }
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let text = r#"{"atoms": ["q","r"], "probabilities": {"11":"3/10","10":"0.7"}}"#;
        let (v, b) = BeliefState::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(v.atoms(), ["q", "r"]);
        assert_eq!(b, state(2, &[(3, 10), (7, 10), (0, 1), (0, 1)]));
        let json = b.to_json(&v);
        assert_eq!(
            serde_json::to_string(&json).unwrap(),
            r#"{"atoms":["q","r"],"probabilities":{"11":"3/10","10":"7/10","01":"0","00":"0"}}"#
        );
        let bad = r#"{"atoms": ["q","r"], "probabilities": {"11":"3/10","10":"0.6"}}"#;
        assert!(BeliefState::from_json(&serde_json::from_str(bad).unwrap()).is_err());
        let bad_key = r#"{"atoms": ["q","r"], "probabilities": {"111":"1"}}"#;
        assert!(BeliefState::from_json(&serde_json::from_str(bad_key).unwrap()).is_err());
    }

    fn arb_state() -> impl Strategy<Value = BeliefState> {
        prop::collection::vec(0u32..6, 8).prop_filter_map("all zero", |w| {
            let total: u32 = w.iter().sum();
            (total > 0).then(|| {
                BeliefState::new(3, w.iter().map(|&x| ratio(x as i64, total as i64)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn conditioning_is_idempotent(b in arb_state(), mask in 1u64..256) {
            let e = WorldSet::from_mask(3, mask);
            if let Ok(once) = b.condition(&e) {
                prop_assert_eq!(once.condition(&e).unwrap(), once);
            }
        }

        #[test]
        fn mass_is_additive_on_disjoint_sets(b in arb_state(), m1 in 0u64..256, m2 in 0u64..256) {
            let a = WorldSet::from_mask(3, m1);
            let c = WorldSet::from_mask(3, m2 & !m1);
            prop_assert_eq!(b.mass(&a.union(&c)), b.mass(&a) + b.mass(&c));
        }
    }
}
