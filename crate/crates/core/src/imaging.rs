//! Expected Distance Imaging and the direct imaging operators it generalizes.

use num_traits::{One, Zero};

use crate::belief::BeliefState;
use crate::error::{EdiError, Result};
use crate::logic::{World, WorldSet};
use crate::metric::PseudoDistance;
use crate::rational::Rational;
use crate::weights::WeightFunction;

/// A posterior together with the normalizer that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeResult {
    pub posterior: BeliefState,
    pub gamma: Rational,
    pub operator: String,
    pub evidence: WorldSet,
}

/// Unnormalized EDI mass per world: `Σ_{w'} b(w')·δ(α,w,w')` for evidence
/// worlds, 0 elsewhere.
pub fn edi_masses(b: &BeliefState, evidence: &WorldSet, f: &WeightFunction) -> Result<Vec<Rational>> {
    if evidence.is_empty() {
        return Err(EdiError::EmptyEvidence);
    }
    let table = f.bind(evidence, b)?;
    let worlds = b.world_count();
    let mut out = vec![Rational::zero(); worlds];
    for w in evidence.iter() {
        let mut acc = Rational::zero();
        for (j, p) in b.probs().iter().enumerate() {
            if !p.is_zero() {
                acc += p * table.get(w, World::from_index(j));
            }
        }
        out[w.index()] = acc;
    }
    Ok(out)
}

/// `b EDI α` under weight function `f`.
pub fn edi(b: &BeliefState, evidence: &WorldSet, f: &WeightFunction) -> Result<ChangeResult> {
    let masses = edi_masses(b, evidence, f)?;
    let gamma: Rational = masses.iter().sum();
    if gamma.is_zero() {
        return Err(EdiError::DegenerateNormalization);
    }
    let posterior = BeliefState::new(b.atoms(), masses.iter().map(|m| m / &gamma).collect())?;
    Ok(ChangeResult {
        posterior,
        gamma,
        operator: format!("edi[{}]", f.name()),
        evidence: evidence.clone(),
    })
}

/// Bayesian conditioning packaged as a change result; `gamma` is `b(α)`.
pub fn conditioning(b: &BeliefState, evidence: &WorldSet) -> Result<ChangeResult> {
    if evidence.is_empty() {
        return Err(EdiError::EmptyEvidence);
    }
    Ok(ChangeResult {
        posterior: b.condition(evidence)?,
        gamma: b.mass(evidence),
        operator: "bc".into(),
        evidence: evidence.clone(),
    })
}

/// Lewis imaging: every world hands its whole mass to its unique closest
/// evidence world under `base` with index tie-breaking.
pub fn lewis_imaging(b: &BeliefState, evidence: &WorldSet, base: &PseudoDistance) -> Result<ChangeResult> {
    let mut probs = vec![Rational::zero(); b.world_count()];
    for (j, p) in b.probs().iter().enumerate() {
        let target = base.li_closest(evidence, World::from_index(j))?;
        probs[target.index()] += p;
    }
    Ok(ChangeResult {
        posterior: BeliefState::new(b.atoms(), probs)?,
        gamma: Rational::one(),
        operator: "li".into(),
        evidence: evidence.clone(),
    })
}

/// Generalized imaging: every world splits its mass evenly over its closest
/// evidence worlds.
pub fn generalized_imaging(b: &BeliefState, evidence: &WorldSet, d: &PseudoDistance) -> Result<ChangeResult> {
    let mut probs = vec![Rational::zero(); b.world_count()];
    for (j, p) in b.probs().iter().enumerate() {
        let min = d.min_worlds(evidence, World::from_index(j))?;
        let share = p / Rational::from_integer((min.len() as i64).into());
        for w in min.iter() {
            probs[w.index()] += &share;
        }
    }
    Ok(ChangeResult {
        posterior: BeliefState::new(b.atoms(), probs)?,
        gamma: Rational::one(),
        operator: "gi".into(),
        evidence: evidence.clone(),
    })
}

/// Applies EDI `t` times in sequence, re-binding `f` to each intermediate
/// state.
pub fn iterate(b: &BeliefState, evidence: &WorldSet, f: &WeightFunction, t: usize) -> Result<Vec<ChangeResult>> {
    if t == 0 {
        return Err(EdiError::InvalidParameter("iteration count must be at least 1".into()));
    }
    let mut out: Vec<ChangeResult> = Vec::with_capacity(t);
    let mut current = b.clone();
    for _ in 0..t {
        let r = edi(&current, evidence, f)?;
        current = r.posterior.clone();
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;
    use std::sync::Arc;

    use super::*;
    use crate::logic::{parse_formula, Vocabulary};
    use crate::rational::{int, ratio};
    use crate::weights::{
        bc_weight, dct_rev_weight, dct_upd_weight, dfr_weight, gi_weight, li_weight, rcp_weight, zero_weight,
        WeightTable,
    };
    use proptest::prelude::*;

    fn state(ps: &[(i64, i64)]) -> BeliefState {
        let atoms = ps.len().trailing_zeros() as usize;
        BeliefState::new(atoms, ps.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    fn models(v: &Vocabulary, text: &str) -> WorldSet {
        parse_formula(text, v).unwrap().models(v)
    }

    fn hamming2() -> Arc<PseudoDistance> {
        Arc::new(PseudoDistance::hamming(2))
    }

    fn b37() -> BeliefState {
        state(&[(3, 10), (7, 10), (0, 1), (0, 1)])
    }

    fn b10() -> BeliefState {
        state(&[(1, 1), (0, 1), (0, 1), (0, 1)])
    }

    fn km() -> BeliefState {
        state(&[(0, 1), (1, 2), (1, 2), (0, 1)])
    }

    #[test]
    fn reciprocal_examples() {
        let v = Vocabulary::new(["q", "r"]).unwrap();
        let nq = models(&v, "!q");
        let f = rcp_weight(hamming2(), int(1)).unwrap();
        let r = edi(&b37(), &nq, &f).unwrap();
        assert_eq!(r.posterior, state(&[(0, 1), (0, 1), (23, 50), (27, 50)]));
        assert_eq!(r.gamma, ratio(5, 6));
        assert_eq!(edi(&b10(), &nq, &f).unwrap().posterior, state(&[(0, 1), (0, 1), (3, 5), (2, 5)]));
    }

    #[test]
    fn difference_examples() {
        let v = Vocabulary::new(["q", "r"]).unwrap();
        let nq = models(&v, "!q");
        let f = dfr_weight(hamming2(), int(1)).unwrap();
        assert_eq!(edi(&b37(), &nq, &f).unwrap().posterior, state(&[(0, 1), (0, 1), (13, 30), (17, 30)]));
        assert_eq!(edi(&b10(), &nq, &f).unwrap().posterior, state(&[(0, 1), (0, 1), (2, 3), (1, 3)]));
    }

    #[test]
    fn generalized_imaging_examples() {
        let v = Vocabulary::new(["q", "r"]).unwrap();
        let nq = models(&v, "!q");
        let d = PseudoDistance::hamming(2);
        let r = generalized_imaging(&b37(), &nq, &d).unwrap();
        assert_eq!(r.posterior, state(&[(0, 1), (0, 1), (3, 10), (7, 10)]));
        assert_eq!(r.gamma, int(1));
        assert_eq!(generalized_imaging(&b10(), &nq, &d).unwrap().posterior, state(&[(0, 1), (0, 1), (1, 1), (0, 1)]));
        let on_a = state(&[(0, 1), (0, 1), (1, 4), (3, 4)]);
        assert_eq!(generalized_imaging(&on_a, &nq, &d).unwrap().posterior, on_a);
    }

    #[test]
    fn lewis_imaging_examples() {
        let v = Vocabulary::new(["book", "mag"]).unwrap();
        let d = PseudoDistance::hamming(2);
        let book = models(&v, "book");
        let r = lewis_imaging(&km(), &book, &d).unwrap();
        assert_eq!(r.posterior, state(&[(1, 2), (1, 2), (0, 1), (0, 1)]));
        assert_eq!(r.gamma, int(1));
        let on_a = state(&[(1, 3), (2, 3), (0, 1), (0, 1)]);
        assert_eq!(lewis_imaging(&on_a, &book, &d).unwrap().posterior, on_a);
        let nq = models(&v, "!book");
        assert_eq!(lewis_imaging(&b10(), &nq, &d).unwrap().posterior, state(&[(0, 1), (0, 1), (1, 1), (0, 1)]));
    }

    #[test]
    fn revision_scenario() {
        let v = Vocabulary::new(["book", "mag"]).unwrap();
        let book = models(&v, "book");
        let zero = zero_weight(dfr_weight(hamming2(), int(1)).unwrap());
        // 11 collects (1/2)(2/3) from 01; 10 keeps 1/2 and collects (1/2)(1/3).
        assert_eq!(edi(&km(), &book, &zero).unwrap().posterior, state(&[(1, 3), (2, 3), (0, 1), (0, 1)]));
        let dct = dct_rev_weight(rcp_weight(hamming2(), int(1)).unwrap());
        assert_eq!(edi(&km(), &book, &dct).unwrap().posterior, state(&[(0, 1), (1, 1), (0, 1), (0, 1)]));
        let not_book = models(&v, "!book");
        let dct = dct_rev_weight(dfr_weight(hamming2(), ratio(1, 10)).unwrap());
        let steps = iterate(&b37(), &not_book, &dct, 3).unwrap();
        assert_eq!(steps[0].posterior, state(&[(0, 1), (0, 1), (1, 3), (2, 3)]));
        assert_eq!(steps[1].posterior, steps[0].posterior);
        assert_eq!(steps[2].posterior, steps[0].posterior);
    }

    #[test]
    fn update_scenario() {
        let v = Vocabulary::new(["book", "mag"]).unwrap();
        let not_book = models(&v, "!book");
        let f = dct_upd_weight(dfr_weight(hamming2(), ratio(1, 10)).unwrap()).unwrap();
        let steps = iterate(&b37(), &not_book, &f, 2).unwrap();
        assert_eq!(steps[0].posterior, state(&[(0, 1), (0, 1), (1, 3), (2, 3)]));
        assert_eq!(steps[1].posterior, state(&[(0, 1), (0, 1), (43, 96), (53, 96)]));
    }

    #[test]
    fn degenerate_normalization() {
        // Only 00 satisfies the evidence, the prior sits on 11, and the
        // weight from 11 to 00 is zero.
        let v = Vocabulary::new(["q", "r"]).unwrap();
        let alpha = models(&v, "!q & !r");
        let f = WeightFunction::new("pathological", BTreeSet::new(), false, true, |_, _| {
            Ok(Arc::new(WeightTable::from_fn(2, |w, u| {
                Ok(if w == u {
                    int(1)
                } else if (w.index(), u.index()) == (3, 0) || (w.index(), u.index()) == (0, 3) {
                    int(0)
                } else {
                    ratio(1, 2)
                })
            })?))
        });
        assert!(matches!(edi(&b10(), &alpha, &f), Err(EdiError::DegenerateNormalization)));
        assert!(matches!(edi(&b10(), &WorldSet::empty(2), &f), Err(EdiError::EmptyEvidence)));
    }

    #[test]
    fn iterate_rejects_zero_steps() {
        let f = bc_weight(2);
        assert!(iterate(&b10(), &WorldSet::full(2), &f, 0).is_err());
    }

    fn arb_state(atoms: usize) -> impl Strategy<Value = BeliefState> {
        prop::collection::vec(0u32..5, 1 << atoms).prop_filter_map("all zero", move |w| {
            let total: u32 = w.iter().sum();
            (total > 0).then(|| {
                BeliefState::new(atoms, w.iter().map(|&x| ratio(x as i64, total as i64)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn posterior_is_a_state_on_the_evidence(b in arb_state(3), mask in 1u64..256, eta in 1i64..5) {
            let d = Arc::new(PseudoDistance::hamming(3));
            let a = WorldSet::from_mask(3, mask);
            for f in [rcp_weight(d.clone(), ratio(1, eta)).unwrap(), dfr_weight(d.clone(), ratio(eta, 3)).unwrap()] {
                let r = edi(&b, &a, &f).unwrap();
                prop_assert_eq!(r.posterior.mass(&a), int(1));
                prop_assert!(r.gamma > Rational::zero());
            }
        }

        #[test]
        fn direct_imaging_has_unit_gamma(b in arb_state(3), mask in 1u64..256) {
            let d = PseudoDistance::hamming(3);
            let a = WorldSet::from_mask(3, mask);
            prop_assert_eq!(lewis_imaging(&b, &a, &d).unwrap().gamma, int(1));
            prop_assert_eq!(generalized_imaging(&b, &a, &d).unwrap().gamma, int(1));
        }

        #[test]
        fn edi_reproduces_direct_operators(b in arb_state(3), mask in 1u64..256) {
            let d = Arc::new(PseudoDistance::hamming(3));
            let a = WorldSet::from_mask(3, mask);
            let li = li_weight(d.clone(), int(0)).unwrap();
            prop_assert_eq!(edi(&b, &a, &li).unwrap().posterior, lewis_imaging(&b, &a, &d).unwrap().posterior);
            let gi = gi_weight(d.clone());
            prop_assert_eq!(edi(&b, &a, &gi).unwrap().posterior, generalized_imaging(&b, &a, &d).unwrap().posterior);
            if b.mass(&a) > Rational::zero() {
                prop_assert_eq!(edi(&b, &a, &bc_weight(3)).unwrap().posterior, b.condition(&a).unwrap());
            }
        }

        #[test]
        fn two_world_gap_contracts_geometrically(b in arb_state(2), pair in 0usize..6, eta in 1i64..4) {
            let (u, v) = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)][pair];
            let (u, v) = (World::new(u, 2).unwrap(), World::new(v, 2).unwrap());
            let a = WorldSet::from_worlds(2, [u, v]);
            let f = rcp_weight(hamming2(), ratio(1, eta)).unwrap();
            let c = f.eval(&a, u, v, &b).unwrap();
            let factor = (int(1) - &c) / (int(1) + &c);
            let steps = iterate(&b, &a, &f, 6).unwrap();
            let gap = |s: &BeliefState| {
                let g = s.prob(u) - s.prob(v);
                if g < Rational::zero() { -g } else { g }
            };
            let first = gap(&steps[0].posterior);
            let mut expected = first;
            for s in &steps[1..] {
                expected *= &factor;
                prop_assert_eq!(gap(&s.posterior), expected.clone());
            }
        }
    }
}
