//! Exhaustive checks of the probabilistic revision and update postulates on
//! a grid of belief states and every satisfiable piece of evidence.
//!
//! Quantification over formulas is realized over model sets. Where a
//! postulate quantifies over `ψ ⊨ φ` with an additive comparison (P⋄5) or
//! over arbitrary φ with a support comparison (P⋄6b), singleton sets are
//! checked instead, which is equivalent.
//!
//! Instances whose needed operator output is not a belief state are skipped
//! everywhere except P∘1/P⋄3, which report them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::belief::BeliefState;
use crate::error::{EdiError, Result};
use crate::logic::{formula_of_world_set, parse_formula, world_formula, Formula, Vocabulary, WorldSet};
use crate::operators::Operator;
use crate::rational::{to_fraction_string, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Postulate {
    Prev1,
    Prev2,
    Prev3,
    Prev4,
    Prev5,
    Prev6,
    Pupd1,
    Pupd2a,
    Pupd2b,
    Pupd2c,
    Pupd3,
    Pupd4,
    Pupd5,
    Pupd6a,
    Pupd6b,
    Pupd7,
}

impl Postulate {
    pub const REVISION: [Postulate; 6] = [
        Postulate::Prev1,
        Postulate::Prev2,
        Postulate::Prev3,
        Postulate::Prev4,
        Postulate::Prev5,
        Postulate::Prev6,
    ];

    pub const UPDATE: [Postulate; 10] = [
        Postulate::Pupd1,
        Postulate::Pupd2a,
        Postulate::Pupd2b,
        Postulate::Pupd2c,
        Postulate::Pupd3,
        Postulate::Pupd4,
        Postulate::Pupd5,
        Postulate::Pupd6a,
        Postulate::Pupd6b,
        Postulate::Pupd7,
    ];

    pub const REVISION_CORE: [Postulate; 3] = [Postulate::Prev1, Postulate::Prev2, Postulate::Prev3];
    pub const UPDATE_CORE: [Postulate; 3] = [Postulate::Pupd1, Postulate::Pupd3, Postulate::Pupd4];

    pub fn id(self) -> &'static str {
        match self {
            Postulate::Prev1 => "Prev1",
            Postulate::Prev2 => "Prev2",
            Postulate::Prev3 => "Prev3",
            Postulate::Prev4 => "Prev4",
            Postulate::Prev5 => "Prev5",
            Postulate::Prev6 => "Prev6",
            Postulate::Pupd1 => "Pupd1",
            Postulate::Pupd2a => "Pupd2a",
            Postulate::Pupd2b => "Pupd2b",
            Postulate::Pupd2c => "Pupd2c",
            Postulate::Pupd3 => "Pupd3",
            Postulate::Pupd4 => "Pupd4",
            Postulate::Pupd5 => "Pupd5",
            Postulate::Pupd6a => "Pupd6a",
            Postulate::Pupd6b => "Pupd6b",
            Postulate::Pupd7 => "Pupd7",
        }
    }

    /// Conventional symbol, e.g. `P∘1` or `P⋄2a`.
    pub fn symbol(self) -> String {
        let id = self.id();
        if let Some(rest) = id.strip_prefix("Prev") {
            format!("P∘{rest}")
        } else {
            format!("P⋄{}", &id[4..])
        }
    }

    pub fn is_core(self) -> bool {
        Self::REVISION_CORE.contains(&self) || Self::UPDATE_CORE.contains(&self)
    }
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Violated,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds-on-suite",
            Status::Violated => "violated",
            Status::NotApplicable => "not-applicable",
        }
    }
}

/// A concrete instance on which a postulate fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostulateWitness {
    pub prior: BeliefState,
    /// The evidence and auxiliary sets, by role (`alpha`, `beta`, `phi`, …).
    pub sets: Vec<(&'static str, WorldSet)>,
    /// The syntactic variant of `alpha` that was used, for P∘3/P⋄4.
    pub variant: Option<String>,
    pub detail: String,
}

impl PostulateWitness {
    pub fn set(&self, role: &str) -> Option<&WorldSet> {
        self.sets.iter().find(|(r, _)| *r == role).map(|(_, s)| s)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("prior".into(), self.prior.probabilities_json());
        for (role, set) in &self.sets {
            m.insert((*role).into(), json!(set.truth_vectors()));
        }
        if let Some(v) = &self.variant {
            m.insert("variant".into(), Value::String(v.clone()));
        }
        m.insert("detail".into(), Value::String(self.detail.clone()));
        Value::Object(m)
    }
}

impl fmt::Display for PostulateWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b = {}", self.prior)?;
        for (role, set) in &self.sets {
            write!(f, ", {role} = {set}")?;
        }
        if let Some(v) = &self.variant {
            write!(f, ", variant `{v}`")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct PostulateVerdict {
    pub status: Status,
    /// Instances whose premise held and were therefore checked.
    pub instances: u64,
    pub witness: Option<PostulateWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteDescriptor {
    pub atoms: usize,
    pub grid_denominator: u32,
    pub states: usize,
    pub evidence_sets: usize,
    pub syntactic_variants: usize,
}

#[derive(Clone, Debug)]
pub struct PostulateReport {
    pub operator: String,
    pub suite: SuiteDescriptor,
    pub verdicts: BTreeMap<Postulate, PostulateVerdict>,
}

impl PostulateReport {
    pub fn status(&self, p: Postulate) -> Status {
        self.verdicts[&p].status
    }

    pub fn witness(&self, p: Postulate) -> Option<&PostulateWitness> {
        self.verdicts[&p].witness.as_ref()
    }

    /// Core postulates of this report's family that were violated.
    pub fn core_violations(&self) -> Vec<Postulate> {
        self.verdicts
            .iter()
            .filter(|(p, v)| p.is_core() && v.status == Status::Violated)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let suite = json!({
            "atoms": self.suite.atoms,
            "grid_denominator": self.suite.grid_denominator,
            "states": self.suite.states,
            "evidence_sets": self.suite.evidence_sets,
            "syntactic_variants": self.suite.syntactic_variants,
        });
        let mut postulates = Map::new();
        for (p, v) in &self.verdicts {
            let mut entry = Map::new();
            entry.insert("verdict".into(), Value::String(v.status.as_str().into()));
            entry.insert("instances".into(), json!(v.instances));
            if let Some(w) = &v.witness {
                entry.insert("witness".into(), w.to_json());
            }
            entry.insert("suite".into(), suite.clone());
            postulates.insert(p.id().into(), Value::Object(entry));
        }
        json!({
            "operator": self.operator,
            "suite": suite,
            "postulates": Value::Object(postulates),
        })
    }
}

impl fmt::Display for PostulateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} on {} states × {} evidence sets ({} atoms, grid 1/{})",
            self.operator, self.suite.states, self.suite.evidence_sets, self.suite.atoms, self.suite.grid_denominator
        )?;
        for (p, v) in &self.verdicts {
            let core = if p.is_core() { " (core)" } else { "" };
            writeln!(f, "  {:<6} {:<15} {} instances{core}", p.symbol(), v.status.as_str(), v.instances)?;
            if let Some(w) = &v.witness {
                writeln!(f, "         {w}")?;
            }
        }
        Ok(())
    }
}

/// The belief-state grid of a suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub denominator: u32,
}

impl SuiteConfig {
    /// Denominator 4 up to two atoms, 2 for three.
    pub fn default_for(atoms: usize) -> Self {
        SuiteConfig { denominator: if atoms <= 2 { 4 } else { 2 } }
    }
}

/// Equivalent renderings of a model set: DNF, its double negation, DNF ∧ ⊤
/// and CNF. The first entry is the canonical one.
pub fn syntactic_variants(set: &WorldSet, vocab: &Vocabulary) -> Vec<String> {
    let dnf = formula_of_world_set(set, vocab);
    let cnf = set
        .complement()
        .iter()
        .map(|w| {
            let lits: Vec<Formula> = match world_formula(w, vocab) {
                f @ (Formula::Atom(_) | Formula::Not(_)) => vec![f],
                f => conjuncts(f),
            };
            lits.into_iter()
                .map(|l| match l {
                    Formula::Not(inner) => *inner,
                    other => Formula::not(other),
                })
                .reduce(Formula::or)
                .expect("at least one literal")
        })
        .reduce(Formula::and)
        .unwrap_or(Formula::True);
    vec![
        dnf.render(vocab),
        Formula::not(Formula::not(dnf.clone())).render(vocab),
        Formula::and(dnf, Formula::True).render(vocab),
        cnf.render(vocab),
    ]
}

fn conjuncts(f: Formula) -> Vec<Formula> {
    match f {
        Formula::And(a, b) => {
            let mut v = conjuncts(*a);
            v.extend(conjuncts(*b));
            v
        }
        other => vec![other],
    }
}

fn ensure_suite(vocab: &Vocabulary) -> Result<usize> {
    let n = vocab.len();
    if n > 3 {
        return Err(EdiError::SuiteTooLarge(format!(
            "postulate suites enumerate sets of evidence sets; {n} atoms exceeds the limit of 3"
        )));
    }
    Ok(n)
}

/// Checks P∘1–P∘6.
pub fn check_revision(op: &Operator, vocab: &Vocabulary, cfg: &SuiteConfig) -> Result<PostulateReport> {
    run_suite(op, vocab, cfg, &Postulate::REVISION)
}

/// Checks P⋄1–P⋄7 including the 2a/2b/2c and 6a/6b variants.
pub fn check_update(op: &Operator, vocab: &Vocabulary, cfg: &SuiteConfig) -> Result<PostulateReport> {
    run_suite(op, vocab, cfg, &Postulate::UPDATE)
}

#[derive(Default)]
struct Tally {
    instances: u64,
    witness: Option<PostulateWitness>,
}

impl Tally {
    fn fail(&mut self, make: impl FnOnce() -> PostulateWitness) {
        if self.witness.is_none() {
            self.witness = Some(make());
        }
    }
}

type Outcome = Result<Vec<Rational>, &'static str>;

fn validity(raw: &Outcome) -> Option<String> {
    match raw {
        Err(name) => Some(format!("operator failed with {name}")),
        Ok(v) => {
            if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| x.is_negative()) {
                return Some(format!("entry {i} is negative ({})", to_fraction_string(x)));
            }
            let total: Rational = v.iter().sum();
            (!total.is_one()).then(|| format!("entries sum to {}", to_fraction_string(&total)))
        }
    }
}

fn run(op: &Operator, b: &BeliefState, set: &WorldSet) -> Outcome {
    op.raw(b, set).map_err(|e| e.name())
}

fn render(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(to_fraction_string).collect();
    format!("⟨{}⟩", parts.join(", "))
}

fn mass(v: &[Rational], mask: u64) -> Rational {
    v.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, x)| x)
        .sum()
}

fn run_suite(op: &Operator, vocab: &Vocabulary, cfg: &SuiteConfig, which: &[Postulate]) -> Result<PostulateReport> {
    let n = ensure_suite(vocab)?;
    let states = BeliefState::grid(n, cfg.denominator)?;
    let worlds = 1usize << n;
    let masks: Vec<u64> = (1..1u64 << worlds).collect();
    let variants: Vec<Vec<String>> = masks
        .iter()
        .map(|&m| syntactic_variants(&WorldSet::from_mask(n, m), vocab))
        .collect();
    let per_state: Vec<Vec<Tally>> = states
        .par_iter()
        .map(|b| check_state(op, vocab, b, &variants, which))
        .collect::<Result<_>>()?;
    let mut verdicts = BTreeMap::new();
    for (k, &p) in which.iter().enumerate() {
        let mut instances = 0;
        let mut witness = None;
        for tallies in &per_state {
            instances += tallies[k].instances;
            if witness.is_none() {
                witness = tallies[k].witness.clone();
            }
        }
        let status = if witness.is_some() {
            Status::Violated
        } else if instances == 0 {
            Status::NotApplicable
        } else {
            Status::Holds
        };
        verdicts.insert(p, PostulateVerdict { status, instances, witness });
    }
    Ok(PostulateReport {
        operator: op.name(),
        suite: SuiteDescriptor {
            atoms: n,
            grid_denominator: cfg.denominator,
            states: states.len(),
            evidence_sets: masks.len(),
            syntactic_variants: variants.first().map_or(0, Vec::len),
        },
        verdicts,
    })
}

/// Integer arithmetic over a common denominator.
trait Scalar: Clone + Ord + Send + Sync + num_traits::Num {
    fn from_big(b: &BigInt) -> Self;
}

impl Scalar for i128 {
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("checked to fit")
    }
}

impl Scalar for BigInt {
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }
}

struct View<T> {
    l: T,
    prior: Vec<T>,
    prior_sums: Vec<T>,
    post: Vec<Option<Vec<T>>>,
    sums: Vec<Option<Vec<T>>>,
}

fn subset_sums<T: Scalar>(v: &[T]) -> Vec<T> {
    let size = 1usize << v.len();
    let mut out = vec![T::zero(); size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        out[mask] = out[mask & (mask - 1)].clone() + v[low].clone();
    }
    out
}

fn view<T: Scalar>(l: &BigInt, prior: &[Rational], valid: &[Option<&Vec<Rational>>]) -> View<T> {
    let scale = |v: &[Rational]| -> Vec<T> {
        v.iter()
            .map(|x| T::from_big(&(x.numer() * (l / x.denom()))))
            .collect()
    };
    let prior_scaled = scale(prior);
    let post: Vec<Option<Vec<T>>> = valid.iter().map(|v| v.map(|v| scale(v))).collect();
    let sums = post.iter().map(|v| v.as_ref().map(|v| subset_sums(v))).collect();
    View {
        l: T::from_big(l),
        prior_sums: subset_sums(&prior_scaled),
        prior: prior_scaled,
        post,
        sums,
    }
}

#[allow(clippy::needless_range_loop)]
fn check_state(
    op: &Operator,
    vocab: &Vocabulary,
    b: &BeliefState,
    variants: &[Vec<String>],
    which: &[Postulate],
) -> Result<Vec<Tally>> {
    let n = vocab.len();
    let worlds = 1usize << n;
    let size = 1usize << worlds;
    let set = |m: u64| WorldSet::from_mask(n, m);
    let mut tallies: Vec<Tally> = which.iter().map(|_| Tally::default()).collect();
    let slot = |p: Postulate| which.iter().position(|&q| q == p);

    // Raw outputs, computed through the canonical rendering of each set.
    let mut raw: Vec<Outcome> = vec![Err("EmptyEvidence"); size];
    for (k, texts) in variants.iter().enumerate() {
        let mask = k + 1;
        let models = parse_formula(&texts[0], vocab)?.models(vocab);
        debug_assert_eq!(models, set(mask as u64));
        raw[mask] = run(op, b, &models);
    }

    for p in [Postulate::Prev1, Postulate::Pupd3] {
        if let Some(i) = slot(p) {
            for mask in 1..size {
                tallies[i].instances += 1;
                if let Some(detail) = validity(&raw[mask]) {
                    tallies[i].fail(|| PostulateWitness {
                        prior: b.clone(),
                        sets: vec![("alpha", set(mask as u64))],
                        variant: None,
                        detail,
                    });
                }
            }
        }
    }

    for p in [Postulate::Prev3, Postulate::Pupd4] {
        if let Some(i) = slot(p) {
            for (k, texts) in variants.iter().enumerate() {
                let mask = k + 1;
                for text in &texts[1..] {
                    tallies[i].instances += 1;
                    let models = parse_formula(text, vocab)?.models(vocab);
                    let other = run(op, b, &models);
                    if other != raw[mask] {
                        tallies[i].fail(|| PostulateWitness {
                            prior: b.clone(),
                            sets: vec![("alpha", set(mask as u64))],
                            variant: Some(text.clone()),
                            detail: format!("`{}` gives {:?}, `{text}` gives {:?}", texts[0], raw[mask], other),
                        });
                    }
                }
            }
        }
    }

    let valid: Vec<Option<&Vec<Rational>>> = raw
        .iter()
        .map(|r| match r {
            Ok(v) if validity(r).is_none() => Some(v),
            _ => None,
        })
        .collect();
    let mut l = BigInt::one();
    for x in b.probs().iter().chain(valid.iter().flatten().flat_map(|v| v.iter())) {
        l = l.lcm(x.denom());
    }
    if l.bits() < 60 {
        let v = view::<i128>(&l, b.probs(), &valid);
        check_semantic(&v, b, &valid, n, which, &mut tallies);
    } else {
        let v = view::<BigInt>(&l, b.probs(), &valid);
        check_semantic(&v, b, &valid, n, which, &mut tallies);
    }
    Ok(tallies)
}

fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    // Ascending non-empty submasks.
    let mut sub = 0usize;
    std::iter::from_fn(move || {
        sub = (sub.wrapping_sub(mask)) & mask;
        (sub != 0).then_some(sub)
    })
}

// Masks double as world-set encodings, so index loops are intentional.
#[allow(clippy::needless_range_loop)]
fn check_semantic<T: Scalar>(
    v: &View<T>,
    b: &BeliefState,
    raw: &[Option<&Vec<Rational>>],
    n: usize,
    which: &[Postulate],
    tallies: &mut [Tally],
) {
    let worlds = 1usize << n;
    let size = 1usize << worlds;
    let set = |m: usize| WorldSet::from_mask(n, m as u64);
    let zero = T::zero();
    let witness = |sets: Vec<(&'static str, WorldSet)>, detail: String| PostulateWitness {
        prior: b.clone(),
        sets,
        variant: None,
        detail,
    };
    let valid = |a: usize| v.post[a].as_ref().zip(v.sums[a].as_ref());

    for (i, &p) in which.iter().enumerate() {
        let t = &mut tallies[i];
        match p {
            Postulate::Prev2 | Postulate::Pupd1 => {
                for a in 1..size {
                    if let Some((_, s)) = valid(a) {
                        t.instances += 1;
                        if s[a] != v.l {
                            t.fail(|| {
                                witness(
                                    vec![("alpha", set(a))],
                                    format!("mass of alpha is {}", to_fraction_string(&mass(raw[a].unwrap(), a as u64))),
                                )
                            });
                        }
                    }
                }
            }
            Postulate::Prev4 => {
                for a in 1..size {
                    let Some((post, _)) = valid(a) else { continue };
                    let ba = &v.prior_sums[a];
                    if *ba <= zero {
                        continue;
                    }
                    t.instances += 1;
                    let ok = (0..worlds).all(|w| {
                        if a >> w & 1 == 1 {
                            post[w].clone() * ba.clone() == v.prior[w].clone() * v.l.clone()
                        } else {
                            post[w] == zero
                        }
                    });
                    if !ok {
                        t.fail(|| {
                            let bc = b.condition(&set(a)).expect("positive mass");
                            witness(
                                vec![("alpha", set(a))],
                                format!("result {} differs from expansion {}", render(raw[a].unwrap()), bc),
                            )
                        });
                    }
                }
            }
            Postulate::Prev5 => {
                for a in 1..size {
                    let Some((post, s)) = valid(a) else { continue };
                    for beta in 1..size {
                        let sb = &s[beta];
                        if *sb <= zero {
                            continue;
                        }
                        let g = a & beta;
                        let Some((pg, _)) = (g != 0).then(|| valid(g)).flatten() else { continue };
                        t.instances += 1;
                        let ok = (0..worlds).all(|w| {
                            let rhs = if beta >> w & 1 == 1 { post[w].clone() * v.l.clone() } else { zero.clone() };
                            pg[w].clone() * sb.clone() == rhs
                        });
                        if !ok {
                            t.fail(|| {
                                let expanded = BeliefState::new(n, raw[a].unwrap().clone())
                                    .and_then(|s| s.condition(&set(beta)))
                                    .map(|s| s.to_string())
                                    .unwrap_or_default();
                                witness(
                                    vec![("alpha", set(a)), ("beta", set(beta))],
                                    format!(
                                        "revising by alpha & beta gives {}, expanding the alpha-revision by beta gives {}",
                                        render(raw[g].unwrap()),
                                        expanded
                                    ),
                                )
                            });
                        }
                    }
                }
            }
            Postulate::Prev6 => {
                for a in 1..size {
                    let Some((_, s)) = valid(a) else { continue };
                    for beta in submasks(a) {
                        t.instances += 1;
                        if s[beta] < v.prior_sums[beta] {
                            t.fail(|| {
                                witness(
                                    vec![("alpha", set(a)), ("beta", set(beta))],
                                    format!(
                                        "revised mass of beta {} < prior mass {}",
                                        to_fraction_string(&mass(raw[a].unwrap(), beta as u64)),
                                        to_fraction_string(&b.mass(&set(beta)))
                                    ),
                                )
                            });
                        }
                    }
                }
            }
            Postulate::Pupd2a => {
                for a in 1..size {
                    let Some((post, _)) = valid(a) else { continue };
                    if v.prior_sums[a] != v.l {
                        continue;
                    }
                    t.instances += 1;
                    if *post != v.prior {
                        t.fail(|| {
                            witness(
                                vec![("alpha", set(a))],
                                format!("b(alpha) = 1 but the result is {}", render(raw[a].unwrap())),
                            )
                        });
                    }
                }
            }
            Postulate::Pupd2b | Postulate::Pupd2c => {
                let iff = p == Postulate::Pupd2b;
                for a in 1..size {
                    let Some((_, s)) = valid(a) else { continue };
                    for phi in submasks(a) {
                        let before = v.prior_sums[phi] > zero;
                        if !iff && !before {
                            continue;
                        }
                        t.instances += 1;
                        let after = s[phi] > zero;
                        if before != after {
                            t.fail(|| {
                                witness(
                                    vec![("alpha", set(a)), ("phi", set(phi))],
                                    format!(
                                        "b(phi) = {} but the result gives phi {}",
                                        to_fraction_string(&b.mass(&set(phi))),
                                        to_fraction_string(&mass(raw[a].unwrap(), phi as u64))
                                    ),
                                )
                            });
                        }
                    }
                }
            }
            Postulate::Pupd5 => {
                for a in 1..size {
                    let Some((post, _)) = valid(a) else { continue };
                    for phi in 1..size {
                        let g = a & phi;
                        if g == 0 {
                            continue;
                        }
                        let Some((pg, _)) = valid(g) else { continue };
                        t.instances += 1;
                        if let Some(w) = (0..worlds).find(|&w| phi >> w & 1 == 1 && pg[w] < post[w]) {
                            t.fail(|| {
                                witness(
                                    vec![("alpha", set(a)), ("phi", set(phi)), ("psi", set(1 << w))],
                                    format!(
                                        "updating by alpha & phi gives psi {}, by alpha alone {}",
                                        to_fraction_string(&raw[g].unwrap()[w]),
                                        to_fraction_string(&raw[a].unwrap()[w])
                                    ),
                                )
                            });
                        }
                    }
                }
            }
            Postulate::Pupd6a | Postulate::Pupd6b => {
                let strong = p == Postulate::Pupd6a;
                for a1 in 1..size {
                    let Some((p1, s1)) = valid(a1) else { continue };
                    for a2 in 1..size {
                        let Some((p2, s2)) = valid(a2) else { continue };
                        if s1[a2] != v.l || s2[a1] != v.l {
                            continue;
                        }
                        t.instances += 1;
                        let sets = || vec![("alpha1", set(a1)), ("alpha2", set(a2))];
                        if strong {
                            if p1 != p2 {
                                t.fail(|| {
                                    witness(
                                        sets(),
                                        format!("results {} and {}", render(raw[a1].unwrap()), render(raw[a2].unwrap())),
                                    )
                                });
                            }
                        } else if let Some(w) = (0..worlds).find(|&w| (p1[w] > zero) != (p2[w] > zero)) {
                            t.fail(|| {
                                let mut s = sets();
                                s.push(("phi", set(1 << w)));
                                witness(
                                    s,
                                    format!("results {} and {}", render(raw[a1].unwrap()), render(raw[a2].unwrap())),
                                )
                            });
                        }
                    }
                }
            }
            Postulate::Pupd7 => {
                if !v.prior.contains(&v.l) {
                    continue;
                }
                for a1 in 1..size {
                    let Some((_, s1)) = valid(a1) else { continue };
                    for a2 in 1..size {
                        let Some((_, s2)) = valid(a2) else { continue };
                        let Some((_, su)) = valid(a1 | a2) else { continue };
                        for phi in 1..size {
                            t.instances += 1;
                            let (x, y, z) = (&s1[phi], &s2[phi], &su[phi]);
                            let lo = if x < y { x } else { y };
                            if lo > z || *z > x.clone() + y.clone() {
                                t.fail(|| {
                                    let m = |a: usize| to_fraction_string(&mass(raw[a].unwrap(), phi as u64));
                                    witness(
                                        vec![("alpha1", set(a1)), ("alpha2", set(a2)), ("phi", set(phi))],
                                        format!(
                                            "phi gets {} and {} separately but {} under the disjunction",
                                            m(a1),
                                            m(a2),
                                            m(a1 | a2)
                                        ),
                                    )
                                });
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }
}

/// Re-runs a single witnessed instance directly against the operator and
/// reports whether the violation reproduces.
pub fn replay(op: &Operator, vocab: &Vocabulary, p: Postulate, w: &PostulateWitness) -> Result<bool> {
    let b = &w.prior;
    let get = |role: &str| {
        w.set(role)
            .cloned()
            .ok_or_else(|| EdiError::InvalidParameter(format!("witness lacks `{role}`")))
    };
    let state = |set: &WorldSet| -> Option<BeliefState> {
        let raw = op.raw(b, set).ok()?;
        BeliefState::new(b.atoms(), raw).ok()
    };
    Ok(match p {
        Postulate::Prev1 | Postulate::Pupd3 => state(&get("alpha")?).is_none(),
        Postulate::Prev3 | Postulate::Pupd4 => {
            let text = w
                .variant
                .as_ref()
                .ok_or_else(|| EdiError::InvalidParameter("witness lacks a variant".into()))?;
            let models = parse_formula(text, vocab)?.models(vocab);
            run(op, b, &get("alpha")?) != run(op, b, &models)
        }
        Postulate::Prev2 | Postulate::Pupd1 => {
            let a = get("alpha")?;
            state(&a).is_some_and(|s| !s.mass(&a).is_one())
        }
        Postulate::Prev4 => {
            let a = get("alpha")?;
            b.mass(&a).is_positive() && state(&a).is_some_and(|s| s != b.condition(&a).expect("positive mass"))
        }
        Postulate::Prev5 => {
            let (a, beta) = (get("alpha")?, get("beta")?);
            match (state(&a), state(&a.intersection(&beta))) {
                (Some(s), Some(g)) if s.mass(&beta).is_positive() => g != s.condition(&beta)?,
                _ => false,
            }
        }
        Postulate::Prev6 => {
            let (a, beta) = (get("alpha")?, get("beta")?);
            beta.is_subset(&a) && state(&a).is_some_and(|s| s.mass(&beta) < b.mass(&beta))
        }
        Postulate::Pupd2a => {
            let a = get("alpha")?;
            b.mass(&a).is_one() && state(&a).is_some_and(|s| &s != b)
        }
        Postulate::Pupd2b | Postulate::Pupd2c => {
            let (a, phi) = (get("alpha")?, get("phi")?);
            let before = b.mass(&phi).is_positive();
            phi.is_subset(&a)
                && (p == Postulate::Pupd2b || before)
                && state(&a).is_some_and(|s| s.mass(&phi).is_positive() != before)
        }
        Postulate::Pupd5 => {
            let (a, phi, psi) = (get("alpha")?, get("phi")?, get("psi")?);
            let g = a.intersection(&phi);
            !g.is_empty()
                && psi.is_subset(&phi)
                && match (state(&g), state(&a)) {
                    (Some(x), Some(y)) => x.mass(&psi) < y.mass(&psi),
                    _ => false,
                }
        }
        Postulate::Pupd6a | Postulate::Pupd6b => {
            let (a1, a2) = (get("alpha1")?, get("alpha2")?);
            match (state(&a1), state(&a2)) {
                (Some(x), Some(y)) if x.mass(&a2).is_one() && y.mass(&a1).is_one() => {
                    if p == Postulate::Pupd6a {
                        x != y
                    } else {
                        let phi = get("phi")?;
                        x.mass(&phi).is_positive() != y.mass(&phi).is_positive()
                    }
                }
                _ => false,
            }
        }
        Postulate::Pupd7 => {
            let (a1, a2, phi) = (get("alpha1")?, get("alpha2")?, get("phi")?);
            let certain = b.probs().iter().any(|x| x.is_one());
            match (state(&a1), state(&a2), state(&a1.union(&a2))) {
                (Some(x), Some(y), Some(u)) if certain => {
                    let (mx, my, mu) = (x.mass(&phi), y.mass(&phi), u.mass(&phi));
                    mx.clone().min(my.clone()) > mu || mu > mx + my
                }
                _ => false,
            }
        }
    })
}
