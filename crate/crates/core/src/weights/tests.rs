use super::*;
use crate::classical::{dalal_revision, pma_update, ClassicalKind};
use crate::logic::{parse_formula, Vocabulary};
use crate::rational::ratio;

fn ham(n: usize) -> Arc<PseudoDistance> {
    Arc::new(PseudoDistance::hamming(n))
}

fn w(v: &Vocabulary, s: &str) -> World {
    v.world(s).unwrap()
}

fn set(v: &Vocabulary, worlds: &[&str]) -> WorldSet {
    WorldSet::from_worlds(v.len(), worlds.iter().map(|s| v.world(s).unwrap()))
}

fn state(ps: &[(i64, i64)]) -> BeliefState {
    let atoms = ps.len().trailing_zeros() as usize;
    BeliefState::new(atoms, ps.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
}

#[test]
fn rcp_values() {
    let v = Vocabulary::new(["q", "r"]).unwrap();
    let f = rcp_weight(ham(2), int(1)).unwrap();
    let (a, b) = (WorldSet::full(2), BeliefState::uniform(2));
    assert_eq!(f.eval(&a, w(&v, "01"), w(&v, "11"), &b).unwrap(), ratio(1, 2));
    assert_eq!(f.eval(&a, w(&v, "00"), w(&v, "11"), &b).unwrap(), ratio(1, 3));
    assert_eq!(f.eval(&a, w(&v, "10"), w(&v, "10"), &b).unwrap(), int(1));
    assert!(matches!(rcp_weight(ham(2), int(0)), Err(EdiError::InvalidParameter(_))));
    assert!(matches!(rcp_weight(ham(2), int(-1)), Err(EdiError::InvalidParameter(_))));
}

#[test]
fn dfr_values() {
    let v = Vocabulary::new(["q", "r"]).unwrap();
    let (a, b) = (WorldSet::full(2), BeliefState::uniform(2));
    let f = dfr_weight(ham(2), int(1)).unwrap();
    assert_eq!(f.eval(&a, w(&v, "01"), w(&v, "11"), &b).unwrap(), ratio(2, 3));
    assert_eq!(f.eval(&a, w(&v, "11"), w(&v, "11"), &b).unwrap(), int(1));
    let f = dfr_weight(ham(2), ratio(1, 10)).unwrap();
    assert_eq!(f.eval(&a, w(&v, "01"), w(&v, "10"), &b).unwrap(), ratio(1, 21));
    assert!(dfr_weight(ham(2), int(0)).is_err());
}

#[test]
fn bc_values() {
    let v = Vocabulary::new(["q", "r"]).unwrap();
    let (a, b) = (WorldSet::full(2), BeliefState::uniform(2));
    let f = bc_weight(2);
    assert_eq!(f.eval(&a, w(&v, "11"), w(&v, "11"), &b).unwrap(), int(1));
    assert_eq!(f.eval(&a, w(&v, "11"), w(&v, "10"), &b).unwrap(), int(0));
    for x in v.worlds() {
        for y in v.worlds().filter(|&y| y != x) {
            assert_eq!(f.eval(&a, x, y, &b).unwrap(), int(0));
        }
    }
}

#[test]
fn li_values() {
    let v = Vocabulary::new(["q", "r"]).unwrap();
    let nq = parse_formula("!q", &v).unwrap().models(&v);
    let b = BeliefState::uniform(2);
    let f = li_weight(ham(2), int(0)).unwrap();
    assert_eq!(f.eval(&nq, w(&v, "01"), w(&v, "11"), &b).unwrap(), int(1));
    assert_eq!(f.eval(&nq, w(&v, "00"), w(&v, "11"), &b).unwrap(), int(0));
    let g = li_weight(ham(2), ratio(1, 4)).unwrap();
    for src in v.worlds() {
        assert_eq!(g.eval(&nq, w(&v, "11"), src, &b).unwrap(), ratio(1, 4));
    }
    assert!(li_weight(ham(2), ratio(3, 2)).is_err());
    assert!(li_weight(ham(2), int(-1)).is_err());
}

#[test]
fn gi_values() {
    let v = Vocabulary::new(["q", "r"]).unwrap();
    let nq = parse_formula("!q", &v).unwrap().models(&v);
    let b = BeliefState::uniform(2);
    let f = gi_weight(ham(2));
    assert_eq!(f.eval(&nq, w(&v, "01"), w(&v, "11"), &b).unwrap(), int(1));
    assert_eq!(f.eval(&nq, w(&v, "10"), w(&v, "10"), &b).unwrap(), int(1));
    // Distance that only looks at q: both ¬q worlds are equally close to 11.
    let q_only = Arc::new(PseudoDistance::from_fn(2, |x, y| (x.satisfies_atom(0, 2) != y.satisfies_atom(0, 2)) as i64));
    assert_eq!(q_only.min_worlds(&nq, w(&v, "11")).unwrap(), nq);
    let g = gi_weight(q_only);
    assert_eq!(g.eval(&nq, w(&v, "01"), w(&v, "11"), &b).unwrap(), ratio(1, 2));
    assert!(matches!(f.bind(&WorldSet::empty(2), &b), Err(EdiError::EmptyEvidence)));
}

#[test]
fn zero_values() {
    let v = Vocabulary::new(["book", "mag"]).unwrap();
    let book = parse_formula("book", &v).unwrap().models(&v);
    let b = BeliefState::uniform(2);
    let f = zero_weight(dfr_weight(ham(2), int(1)).unwrap());
    assert_eq!(f.eval(&book, w(&v, "11"), w(&v, "01"), &b).unwrap(), ratio(2, 3));
    assert_eq!(f.eval(&book, w(&v, "11"), w(&v, "10"), &b).unwrap(), int(0));
    for x in v.worlds() {
        assert_eq!(f.eval(&book, x, x, &b).unwrap(), int(1));
    }
}

#[test]
fn retentive_wrapper_matches_zero_wrapper_for_identity_weights() {
    let f = retentive_weight(rcp_weight(ham(2), int(1)).unwrap());
    let g = zero_weight(rcp_weight(ham(2), int(1)).unwrap());
    let b = BeliefState::uniform(2);
    for mask in 1..16 {
        let a = WorldSet::from_mask(2, mask);
        assert_eq!(f.bind(&a, &b).unwrap(), g.bind(&a, &b).unwrap());
    }
}

#[test]
fn dct_rev_values() {
    let v = Vocabulary::new(["book", "mag"]).unwrap();
    let book = parse_formula("book", &v).unwrap().models(&v);
    let km = state(&[(0, 1), (1, 2), (1, 2), (0, 1)]);
    let f = dct_rev_weight(rcp_weight(ham(2), int(1)).unwrap());
    assert_eq!(f.eval(&book, w(&v, "10"), w(&v, "01"), &km).unwrap(), int(0));
    assert_eq!(f.eval(&book, w(&v, "10"), w(&v, "10"), &km).unwrap(), int(1));
    let b37 = state(&[(3, 10), (7, 10), (0, 1), (0, 1)]);
    let not_book = parse_formula("!book", &v).unwrap().models(&v);
    let g = dct_rev_weight(dfr_weight(ham(2), ratio(1, 10)).unwrap());
    assert_eq!(g.eval(&not_book, w(&v, "01"), w(&v, "11"), &b37).unwrap(), ratio(11, 21));
    for x in v.worlds() {
        assert_eq!(g.eval(&not_book, x, x, &b37).unwrap(), int(1));
        assert_eq!(f.eval(&book, x, x, &km).unwrap(), int(1));
    }
}

fn scenario(kind: ClassicalKind) -> (Vocabulary, WorldSet, BeliefState, ClassicalOperator) {
    let v = Vocabulary::numbered(3).unwrap();
    let support = set(&v, &["101", "001", "000"]);
    let alpha = set(&v, &["111", "110", "011", "010"]);
    let result = set(&v, &["111", "011", "010"]);
    let mut probs = vec![int(0); 8];
    for x in support.iter() {
        probs[x.index()] = ratio(1, 3);
    }
    let prior = BeliefState::new(3, probs).unwrap();
    let fallback = match kind {
        ClassicalKind::Revision => dalal_revision(ham(3)),
        ClassicalKind::Update => pma_update(ham(3)),
    };
    let op = ClassicalOperator::table(kind, vec![(support, alpha.clone(), result)], fallback).unwrap();
    (v, alpha, prior, op)
}

#[test]
fn cls_rev_scenario_values() {
    let (v, alpha, prior, op) = scenario(ClassicalKind::Revision);
    let f = cls_rev_weight(op, retentive_weight(rcp_weight(ham(3), int(1)).unwrap()));
    assert_eq!(f.eval(&alpha, w(&v, "010"), w(&v, "000"), &prior).unwrap(), ratio(1, 2));
    assert_eq!(f.eval(&alpha, w(&v, "110"), w(&v, "010"), &prior).unwrap(), int(0));
    assert_eq!(f.eval(&alpha, w(&v, "000"), w(&v, "010"), &prior).unwrap(), int(0));
    for x in v.worlds() {
        assert_eq!(f.eval(&alpha, x, x, &prior).unwrap(), int(1));
    }
}

#[test]
fn cls_upd_scenario_values() {
    let (v, alpha, prior, op) = scenario(ClassicalKind::Update);
    let f = cls_upd_weight(op, rcp_weight(ham(3), int(1)).unwrap());
    assert_eq!(f.eval(&alpha, w(&v, "010"), w(&v, "000"), &prior).unwrap(), ratio(1, 2));
    assert_eq!(f.eval(&alpha, w(&v, "110"), w(&v, "010"), &prior).unwrap(), int(0));
    for x in v.worlds() {
        assert_eq!(f.eval(&alpha, x, x, &prior).unwrap(), int(1));
    }
}

#[test]
fn dct_upd_acceptance() {
    assert!(dct_upd_weight(dfr_weight(ham(2), ratio(1, 10)).unwrap()).is_ok());
    assert!(dct_upd_weight(rcp_weight(ham(2), int(1)).unwrap()).is_ok());
    assert!(matches!(dct_upd_weight(bc_weight(2)), Err(EdiError::RejectedWeight(_))));
    assert!(matches!(
        dct_upd_weight(dct_rev_weight(rcp_weight(ham(2), int(1)).unwrap())),
        Err(EdiError::RejectedWeight(_))
    ));
}

#[test]
fn all_weights_stay_in_unit_interval() {
    let d = ham(2);
    let rcp = rcp_weight(d.clone(), int(1)).unwrap();
    let fs = vec![
        rcp.clone(),
        dfr_weight(d.clone(), ratio(1, 10)).unwrap(),
        bc_weight(2),
        li_weight(d.clone(), ratio(1, 2)).unwrap(),
        gi_weight(d.clone()),
        zero_weight(rcp.clone()),
        dct_rev_weight(rcp.clone()),
        cls_rev_weight(dalal_revision(d.clone()), retentive_weight(rcp.clone())),
        cls_upd_weight(pma_update(d.clone()), rcp.clone()),
    ];
    for b in BeliefState::grid(2, 2).unwrap() {
        for mask in 1..16 {
            let a = WorldSet::from_mask(2, mask);
            for f in &fs {
                let t = f.bind(&a, &b).unwrap();
                assert!(t.values.iter().all(in_unit_interval), "{}", f.name());
            }
        }
    }
}

#[test]
fn property_names_round_trip() {
    for p in Property::ALL {
        assert_eq!(p.as_str().parse::<Property>().unwrap(), p);
    }
    assert!("inversity".parse::<Property>().is_err());
}

mod checker {
    use super::*;

    fn full_suite(n: usize) -> Vec<WorldSet> {
        WorldSet::non_empty_subsets(n).unwrap().collect()
    }

    fn check(f: &WeightFunction, n: usize) -> PropertyReport {
        check_weight_properties(f, &PseudoDistance::hamming(n), &full_suite(n), &BeliefState::grid(n, 2).unwrap())
            .unwrap()
    }

    fn assert_chain(r: &PropertyReport) {
        if r.holds(Property::EquiDistance) {
            assert!(r.holds(Property::Symmetry) && r.holds(Property::WeakInversity), "{r}");
        }
        if r.holds(Property::Identity) && r.holds(Property::StrictInversity) {
            assert!(r.holds(Property::Faithfulness), "{r}");
        }
        assert!(!(r.holds(Property::ERelaxed) && r.holds(Property::Retention)), "{r}");
        for p in Property::ALL {
            assert_eq!(r.holds(p), r.witness(p).is_none());
        }
    }

    #[test]
    fn rcp_profile() {
        let r = check(&rcp_weight(ham(2), int(1)).unwrap(), 2);
        for p in Property::ALL {
            assert_eq!(r.holds(p), p != Property::Retention, "{p}: {r}");
        }
        assert_chain(&r);
    }

    #[test]
    fn bc_profile_and_witness() {
        let r = check(&bc_weight(2), 2);
        for p in [
            Property::InverseDistance,
            Property::EquiDistance,
            Property::Faithfulness,
            Property::Retention,
        ] {
            assert!(r.holds(p), "{p}");
        }
        assert!(!r.holds(Property::StrictInversity));
        let wit = r.witness(Property::StrictInversity).unwrap();
        let v = Vocabulary::new(["q", "r"]).unwrap();
        assert_eq!(wit.worlds, vec![w(&v, "11"), w(&v, "00"), w(&v, "11"), w(&v, "10")]);
        assert_eq!(wit.distances, vec![2, 1]);
        assert_chain(&r);
    }

    #[test]
    fn every_instantiation_satisfies_the_implication_chain() {
        let d = ham(2);
        let rcp = rcp_weight(d.clone(), int(1)).unwrap();
        for f in [
            dfr_weight(d.clone(), ratio(1, 10)).unwrap(),
            li_weight(d.clone(), int(0)).unwrap(),
            gi_weight(d.clone()),
            zero_weight(rcp.clone()),
            dct_rev_weight(rcp.clone()),
            cls_rev_weight(dalal_revision(d.clone()), retentive_weight(rcp.clone())),
            cls_upd_weight(pma_update(d.clone()), rcp.clone()),
        ] {
            let r = check(&f, 2);
            assert_chain(&r);
            for p in f.declared() {
                assert!(r.holds(*p), "{} declares {p} but {r}", f.name());
            }
        }
    }

    #[test]
    fn suite_size_is_bounded() {
        let f = bc_weight(5);
        let r = check_weight_properties(&f, &PseudoDistance::hamming(5), &[WorldSet::full(5)], &[BeliefState::uniform(5)]);
        assert!(matches!(r, Err(EdiError::SuiteTooLarge(_))));
    }

    #[test]
    fn report_json_is_ordered() {
        let r = check(&bc_weight(2), 2);
        let json = r.to_json();
        let keys: Vec<&String> = json["properties"].as_object().unwrap().keys().collect();
        assert_eq!(keys[0], "non-negativity");
        assert_eq!(json["properties"]["strict-inversity"]["verdict"], "violated");
        assert_eq!(json["properties"]["retention"]["verdict"], "holds-on-suite");
    }
}
