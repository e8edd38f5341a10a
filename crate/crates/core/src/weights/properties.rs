//! Exhaustive checking of weight-function properties over a finite suite of
//! evidence sets and prior belief states.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{Property, WeightFunction, WeightTable};
use crate::belief::BeliefState;
use crate::error::{EdiError, Result};
use crate::logic::{World, WorldSet};
use crate::metric::PseudoDistance;
use crate::rational::{to_fraction_string, Rational};

const BASIC: usize = 10;

/// A concrete violation: the evidence set and prior the weight was bound to,
/// and the world tuple the property fails on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub evidence: WorldSet,
    pub prior: BeliefState,
    /// One, two or four worlds, in the order the property quantifies them.
    pub worlds: Vec<World>,
    /// The weights of `(worlds[0], worlds[1])` and, for the inversity
    /// properties, `(worlds[2], worlds[3])`.
    pub values: Vec<Rational>,
    /// Reference distances of the same pairs.
    pub distances: Vec<i64>,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        let atoms = self.evidence.atoms();
        json!({
            "evidence": self.evidence.truth_vectors(),
            "prior": self.prior.probabilities_json(),
            "worlds": self.worlds.iter().map(|w| w.truth_vector(atoms)).collect::<Vec<_>>(),
            "values": self.values.iter().map(to_fraction_string).collect::<Vec<_>>(),
            "distances": self.distances,
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms = self.evidence.atoms();
        let worlds: Vec<String> = self.worlds.iter().map(|w| w.truth_vector(atoms)).collect();
        let values: Vec<String> = self.values.iter().map(to_fraction_string).collect();
        write!(
            f,
            "evidence {} prior {} worlds ({}) weights [{}] distances {:?}",
            self.evidence,
            self.prior,
            worlds.join(","),
            values.join(", "),
            self.distances
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Per-property verdicts for one weight function over one suite.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub weight: String,
    pub atoms: usize,
    pub evidence_sets: usize,
    pub priors: usize,
    pub verdicts: BTreeMap<Property, Verdict>,
}

impl PropertyReport {
    pub fn holds(&self, p: Property) -> bool {
        self.verdicts[&p].holds
    }

    pub fn witness(&self, p: Property) -> Option<&Witness> {
        self.verdicts[&p].witness.as_ref()
    }

    pub fn to_json(&self) -> Value {
        let mut properties = Map::new();
        for (p, v) in &self.verdicts {
            let mut entry = Map::new();
            entry.insert(
                "verdict".into(),
                Value::String(if v.holds { "holds-on-suite" } else { "violated" }.into()),
            );
            if let Some(w) = &v.witness {
                entry.insert("witness".into(), w.to_json());
            }
            properties.insert(p.as_str().into(), Value::Object(entry));
        }
        json!({
            "weight": self.weight,
            "atoms": self.atoms,
            "suite": {"evidence_sets": self.evidence_sets, "priors": self.priors},
            "properties": Value::Object(properties),
        })
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} over {} atoms ({} evidence sets, {} priors)",
            self.weight, self.atoms, self.evidence_sets, self.priors
        )?;
        for (p, v) in &self.verdicts {
            if v.holds {
                writeln!(f, "  {:<17} holds-on-suite", p.as_str())?;
            } else {
                writeln!(f, "  {:<17} violated", p.as_str())?;
                if let Some(w) = &v.witness {
                    writeln!(f, "    {w}")?;
                }
            }
        }
        Ok(())
    }
}

type Found = [Option<Vec<World>>; BASIC];

fn find_violations(table: &WeightTable, d: &PseudoDistance, evidence: &WorldSet, postulates: bool) -> Found {
    let n = table.worlds();
    let worlds: Vec<World> = (0..n).map(World::from_index).collect();
    let mut found: Found = Default::default();
    let mut note = |p: Property, tuple: &[World]| {
        let slot = &mut found[p as usize];
        if slot.is_none() {
            *slot = Some(tuple.to_vec());
        }
    };
    let one = Rational::one();
    for &w in &worlds {
        for &v in &worlds {
            let x = table.get(w, v);
            let (win, vin) = (evidence.contains(w), evidence.contains(v));
            if postulates {
                if x.is_negative() {
                    note(Property::NonNegativity, &[w, v]);
                }
                if w == v && !x.is_one() {
                    note(Property::Identity, &[w]);
                }
                if x != table.get(v, w) {
                    note(Property::Symmetry, &[w, v]);
                }
                if w != v && *x >= one {
                    note(Property::Faithfulness, &[w, v]);
                }
            }
            if win && vin && x.is_zero() {
                note(Property::ERelaxed, &[w, v]);
            }
            if win && !vin && x.is_zero() {
                note(Property::NeRelaxed, &[w, v]);
            }
            if win && vin && w != v && !x.is_zero() {
                note(Property::Retention, &[w, v]);
            }
        }
    }
    if postulates {
        // Rank the distinct weights so the quadruple scan compares integers.
        let mut distinct: Vec<&Rational> = table.values.iter().collect();
        distinct.sort();
        distinct.dedup();
        let rank: Vec<usize> = table
            .values
            .iter()
            .map(|x| distinct.binary_search(&x).expect("value is present"))
            .collect();
        let pairs: Vec<(World, World)> = worlds.iter().flat_map(|&a| worlds.iter().map(move |&b| (a, b))).collect();
        let dist: Vec<i64> = pairs.iter().map(|&(a, b)| d.get(a, b)).collect();
        let (mut weak, mut strict, mut equi) = (false, false, false);
        'outer: for (i, &(a, b)) in pairs.iter().enumerate() {
            for (j, &(c, e)) in pairs.iter().enumerate() {
                let (dp, dq, rp, rq) = (dist[i], dist[j], rank[i], rank[j]);
                if !weak && dp >= dq && rp > rq {
                    weak = true;
                    note(Property::WeakInversity, &[a, b, c, e]);
                }
                if !strict && dp > dq && rp >= rq {
                    strict = true;
                    note(Property::StrictInversity, &[a, b, c, e]);
                }
                if !equi && dp == dq && rp != rq {
                    equi = true;
                    note(Property::EquiDistance, &[a, b, c, e]);
                }
                if weak && strict && equi {
                    break 'outer;
                }
            }
        }
    }
    found
}

fn basic_property(i: usize) -> Property {
    Property::ALL[i]
}

/// Checks every property of `f` over all world tuples, for each evidence
/// set in `evidence` and each prior in `priors`.
///
/// Inversity and equi-distance compare weights against the reference
/// distance `d`. Postulates 1–7 are checked on the first evidence set only
/// when `f` ignores evidence, and only the first prior is used when `f`
/// ignores the prior. The witness for each violated property is the first
/// violating tuple in suite order, then lexicographic world order.
pub fn check_weight_properties(
    f: &WeightFunction,
    d: &PseudoDistance,
    evidence: &[WorldSet],
    priors: &[BeliefState],
) -> Result<PropertyReport> {
    let atoms = d.atoms();
    if atoms > 4 {
        return Err(EdiError::SuiteTooLarge(format!(
            "property checks are exhaustive over world quadruples; {atoms} atoms exceeds the limit of 4"
        )));
    }
    if evidence.is_empty() || priors.is_empty() {
        return Err(EdiError::InvalidParameter("the suite needs at least one evidence set and one prior".into()));
    }
    if let Some(e) = evidence.iter().find(|e| e.atoms() != atoms || e.is_empty()) {
        return Err(EdiError::InvalidParameter(format!("bad evidence set {e} in suite")));
    }
    if priors.iter().any(|b| b.atoms() != atoms) {
        return Err(EdiError::VocabularyMismatch("prior over a different vocabulary".into()));
    }
    let prior_count = if f.prior_independent() { 1 } else { priors.len() };
    let cells: Vec<(usize, usize)> = (0..evidence.len())
        .flat_map(|e| (0..prior_count).map(move |p| (e, p)))
        .collect();
    let results: Vec<Found> = cells
        .par_iter()
        .map(|&(e, p)| {
            let table = f.bind(&evidence[e], &priors[p])?;
            let postulates = !(f.evidence_independent() && e > 0);
            Ok(find_violations(&table, d, &evidence[e], postulates))
        })
        .collect::<Result<_>>()?;

    let mut first: [Option<(usize, Vec<World>)>; BASIC] = Default::default();
    for (cell, found) in results.into_iter().enumerate() {
        for (i, tuple) in found.into_iter().enumerate() {
            if first[i].is_none() {
                if let Some(t) = tuple {
                    first[i] = Some((cell, t));
                }
            }
        }
    }

    let mut verdicts = BTreeMap::new();
    for (i, entry) in first.into_iter().enumerate() {
        let witness = match entry {
            None => None,
            Some((cell, worlds)) => {
                let (e, p) = cells[cell];
                let table = f.bind(&evidence[e], &priors[p])?;
                let pairs: Vec<(World, World)> = match worlds.len() {
                    1 => vec![(worlds[0], worlds[0])],
                    2 => vec![(worlds[0], worlds[1])],
                    _ => vec![(worlds[0], worlds[1]), (worlds[2], worlds[3])],
                };
                Some(Witness {
                    evidence: evidence[e].clone(),
                    prior: priors[p].clone(),
                    values: pairs.iter().map(|&(a, b)| table.get(a, b).clone()).collect(),
                    distances: pairs.iter().map(|&(a, b)| d.get(a, b)).collect(),
                    worlds,
                })
            }
        };
        verdicts.insert(basic_property(i), Verdict { holds: witness.is_none(), witness });
    }
    for derived in [Property::InverseDistance, Property::Relaxed] {
        let failing = derived.components().iter().find(|c| !verdicts[*c].holds);
        let verdict = match failing {
            None => Verdict { holds: true, witness: None },
            Some(c) => Verdict { holds: false, witness: verdicts[c].witness.clone() },
        };
        verdicts.insert(derived, verdict);
    }
    debug_assert!(
        !(evidence.iter().any(|e| e.len() > 1)
            && verdicts[&Property::ERelaxed].holds
            && verdicts[&Property::Retention].holds),
        "e-relaxation and retention are mutually exclusive"
    );
    Ok(PropertyReport {
        weight: f.name().to_string(),
        atoms,
        evidence_sets: evidence.len(),
        priors: prior_count,
        verdicts,
    })
}
