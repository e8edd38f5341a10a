//! Weight functions `δ(α, w, w')` and the standard instantiations.
//!
//! A weight function is bound to a piece of evidence and a prior belief
//! state, producing a full `W × W` table. Entry `(w, w')` is the share of
//! `w'`'s prior mass collected by the target world `w`.

mod properties;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::belief::BeliefState;
use crate::classical::ClassicalOperator;
use crate::error::{EdiError, Result};
use crate::logic::{World, WorldSet};
use crate::metric::PseudoDistance;
use crate::rational::{int, to_fraction_string, Rational};

pub use properties::{check_weight_properties, PropertyReport, Verdict, Witness};

/// The ι-postulates plus relaxation and retention. The last two variants are
/// conjunctions of the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    NonNegativity,
    Identity,
    Symmetry,
    WeakInversity,
    StrictInversity,
    EquiDistance,
    Faithfulness,
    ERelaxed,
    NeRelaxed,
    Retention,
    InverseDistance,
    Relaxed,
}

pub type PropertySet = BTreeSet<Property>;

impl Property {
    pub const ALL: [Property; 12] = [
        Property::NonNegativity,
        Property::Identity,
        Property::Symmetry,
        Property::WeakInversity,
        Property::StrictInversity,
        Property::EquiDistance,
        Property::Faithfulness,
        Property::ERelaxed,
        Property::NeRelaxed,
        Property::Retention,
        Property::InverseDistance,
        Property::Relaxed,
    ];

    /// Postulates 1–7.
    pub const POSTULATES: [Property; 7] = [
        Property::NonNegativity,
        Property::Identity,
        Property::Symmetry,
        Property::WeakInversity,
        Property::StrictInversity,
        Property::EquiDistance,
        Property::Faithfulness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::NonNegativity => "non-negativity",
            Property::Identity => "identity",
            Property::Symmetry => "symmetry",
            Property::WeakInversity => "weak-inversity",
            Property::StrictInversity => "strict-inversity",
            Property::EquiDistance => "equi-distance",
            Property::Faithfulness => "faithfulness",
            Property::ERelaxed => "e-relaxed",
            Property::NeRelaxed => "n-e-relaxed",
            Property::Retention => "retention",
            Property::InverseDistance => "inverse-distance",
            Property::Relaxed => "relaxed",
        }
    }

    /// The properties a derived property is the conjunction of.
    pub fn components(self) -> &'static [Property] {
        match self {
            Property::InverseDistance => &[
                Property::NonNegativity,
                Property::Identity,
                Property::Symmetry,
                Property::WeakInversity,
            ],
            Property::Relaxed => &[Property::ERelaxed, Property::NeRelaxed],
            _ => &[],
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = EdiError;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| EdiError::InvalidParameter(format!("unknown property `{s}`")))
    }
}

fn props(list: &[Property]) -> PropertySet {
    list.iter().copied().collect()
}

/// Whether `set` contains `p`, expanding derived properties.
pub fn declares(set: &PropertySet, p: Property) -> bool {
    set.contains(&p) || (!p.components().is_empty() && p.components().iter().all(|c| set.contains(c)))
}

/// A `W × W` table of weights for one evidence set and prior.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightTable {
    worlds: usize,
    values: Vec<Rational>,
}

impl WeightTable {
    pub fn from_fn(atoms: usize, mut f: impl FnMut(World, World) -> Result<Rational>) -> Result<Self> {
        let worlds = 1usize << atoms;
        let mut values = Vec::with_capacity(worlds * worlds);
        for i in 0..worlds {
            for j in 0..worlds {
                values.push(f(World::from_index(i), World::from_index(j))?);
            }
        }
        Ok(WeightTable { worlds, values })
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    /// `δ(α, w, w')`.
    pub fn get(&self, w: World, source: World) -> &Rational {
        &self.values[w.index() * self.worlds + source.index()]
    }
}

impl fmt::Debug for WeightTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.values.chunks(self.worlds) {
            let cells: Vec<String> = row.iter().map(to_fraction_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

type Binder = dyn Fn(&WorldSet, &BeliefState) -> Result<Arc<WeightTable>> + Send + Sync;

/// A named weight function with the properties it is known to satisfy.
#[derive(Clone)]
pub struct WeightFunction {
    name: String,
    declared: PropertySet,
    evidence_independent: bool,
    prior_independent: bool,
    binder: Arc<Binder>,
}

impl WeightFunction {
    /// Wraps an arbitrary binder. `declared` is trusted as given.
    pub fn new(
        name: impl Into<String>,
        declared: PropertySet,
        evidence_independent: bool,
        prior_independent: bool,
        binder: impl Fn(&WorldSet, &BeliefState) -> Result<Arc<WeightTable>> + Send + Sync + 'static,
    ) -> Self {
        WeightFunction {
            name: name.into(),
            declared,
            evidence_independent,
            prior_independent,
            binder: Arc::new(binder),
        }
    }

    /// A weight depending only on the world pair.
    pub fn pairwise(
        name: impl Into<String>,
        declared: PropertySet,
        atoms: usize,
        f: impl Fn(World, World) -> Rational,
    ) -> Self {
        let table = Arc::new(WeightTable::from_fn(atoms, |w, v| Ok(f(w, v))).expect("infallible"));
        WeightFunction::new(name, declared, true, true, move |_, _| Ok(table.clone()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared(&self) -> &PropertySet {
        &self.declared
    }

    pub fn declares(&self, p: Property) -> bool {
        declares(&self.declared, p)
    }

    pub fn evidence_independent(&self) -> bool {
        self.evidence_independent
    }

    pub fn prior_independent(&self) -> bool {
        self.prior_independent
    }

    /// The full weight table for evidence `evidence` and prior `prior`.
    pub fn bind(&self, evidence: &WorldSet, prior: &BeliefState) -> Result<Arc<WeightTable>> {
        if evidence.atoms() != prior.atoms() {
            return Err(EdiError::VocabularyMismatch(format!(
                "evidence over {} atoms, prior over {}",
                evidence.atoms(),
                prior.atoms()
            )));
        }
        (self.binder)(evidence, prior)
    }

    /// `δ(α, w, w')` evaluated against `prior`.
    pub fn eval(&self, evidence: &WorldSet, w: World, source: World, prior: &BeliefState) -> Result<Rational> {
        Ok(self.bind(evidence, prior)?.get(w, source).clone())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightFunction({})", self.name)
    }
}

fn check_eta(eta: &Rational) -> Result<()> {
    if !eta.is_positive() {
        return Err(EdiError::InvalidParameter(format!(
            "eta must be positive, got {}",
            to_fraction_string(eta)
        )));
    }
    Ok(())
}

fn distance_based(d: &PseudoDistance) -> PropertySet {
    let mut set = props(&[
        Property::NonNegativity,
        Property::Identity,
        Property::Symmetry,
        Property::WeakInversity,
        Property::StrictInversity,
        Property::EquiDistance,
        Property::ERelaxed,
        Property::NeRelaxed,
    ]);
    if d.faithful() {
        set.insert(Property::Faithfulness);
    }
    set
}

/// `δ^rcp = η / (d(w,w') + η)`.
pub fn rcp_weight(d: Arc<PseudoDistance>, eta: Rational) -> Result<WeightFunction> {
    check_eta(&eta)?;
    let name = format!("rcp(eta={})", to_fraction_string(&eta));
    Ok(WeightFunction::pairwise(name, distance_based(&d), d.atoms(), |w, v| {
        &eta / (int(d.get(w, v)) + &eta)
    }))
}

/// `δ^dfr = (d^max + η − d(w,w')) / (d^max + η)`.
pub fn dfr_weight(d: Arc<PseudoDistance>, eta: Rational) -> Result<WeightFunction> {
    check_eta(&eta)?;
    let name = format!("dfr(eta={})", to_fraction_string(&eta));
    let top = int(d.d_max()) + &eta;
    Ok(WeightFunction::pairwise(name, distance_based(&d), d.atoms(), |w, v| {
        (&top - int(d.get(w, v))) / &top
    }))
}

/// `δ^BC`: 1 on the diagonal, 0 elsewhere.
pub fn bc_weight(atoms: usize) -> WeightFunction {
    let declared = props(&[
        Property::NonNegativity,
        Property::Identity,
        Property::Symmetry,
        Property::WeakInversity,
        Property::EquiDistance,
        Property::Faithfulness,
        Property::Retention,
    ]);
    WeightFunction::pairwise("bc", declared, atoms, |w, v| if w == v { int(1) } else { int(0) })
}

/// `δ^LI`: `x` off the evidence, 1 from each world to its unique closest
/// evidence world, 0 otherwise.
pub fn li_weight(base: Arc<PseudoDistance>, x: Rational) -> Result<WeightFunction> {
    if x.is_negative() || x > Rational::one() {
        return Err(EdiError::InvalidParameter(format!(
            "x must lie in [0,1], got {}",
            to_fraction_string(&x)
        )));
    }
    let name = format!("li(x={})", to_fraction_string(&x));
    let declared = props(&[Property::NonNegativity, Property::Retention]);
    Ok(WeightFunction::new(name, declared, false, true, move |evidence, _| {
        let closest: Vec<World> = (0..1usize << base.atoms())
            .map(|i| base.li_closest(evidence, World::from_index(i)))
            .collect::<Result<_>>()?;
        Ok(Arc::new(WeightTable::from_fn(base.atoms(), |w, v| {
            Ok(if !evidence.contains(w) {
                x.clone()
            } else if closest[v.index()] == w {
                int(1)
            } else {
                int(0)
            })
        })?))
    }))
}

/// `δ^GI`: each world splits its mass evenly over its closest evidence
/// worlds; non-evidence worlds keep weight 1 to themselves.
pub fn gi_weight(d: Arc<PseudoDistance>) -> WeightFunction {
    let mut declared = props(&[Property::NonNegativity]);
    if d.faithful() {
        declared.extend([Property::Identity, Property::Retention]);
    }
    WeightFunction::new("gi", declared, false, true, move |evidence, _| {
        let mins: Vec<WorldSet> = (0..1usize << d.atoms())
            .map(|i| d.min_worlds(evidence, World::from_index(i)))
            .collect::<Result<_>>()?;
        Ok(Arc::new(WeightTable::from_fn(d.atoms(), |w, v| {
            let m = &mins[v.index()];
            Ok(if w == v && !evidence.contains(w) {
                int(1)
            } else if m.contains(w) {
                Rational::new(1.into(), (m.len() as i64).into())
            } else {
                int(0)
            })
        })?))
    })
}

fn wrapped_declared(inner: &WeightFunction, keep: &[Property], add: &[Property]) -> PropertySet {
    let mut set: PropertySet = keep.iter().copied().filter(|&p| inner.declares(p)).collect();
    set.extend(add.iter().copied());
    set
}

fn zero_table(inner: &WeightTable, evidence: &WorldSet, atoms: usize) -> Result<WeightTable> {
    WeightTable::from_fn(atoms, |w, v| {
        Ok(if w == v {
            int(1)
        } else if !evidence.contains(w) || !evidence.contains(v) {
            inner.get(w, v).clone()
        } else {
            int(0)
        })
    })
}

/// `δ^{=0}`: identity on the diagonal, the inner weight whenever either
/// world lies off the evidence, and 0 between distinct evidence worlds.
pub fn zero_weight(inner: WeightFunction) -> WeightFunction {
    let declared = wrapped_declared(
        &inner,
        &[Property::NonNegativity, Property::Symmetry, Property::Faithfulness, Property::NeRelaxed],
        &[Property::Identity, Property::Retention],
    );
    let name = format!("zero[{}]", inner.name());
    let indep = inner.prior_independent();
    WeightFunction::new(name, declared, false, indep, move |evidence, prior| {
        let t = inner.bind(evidence, prior)?;
        Ok(Arc::new(zero_table(&t, evidence, prior.atoms())?))
    })
}

/// `0` between distinct evidence worlds, the inner weight elsewhere. With an
/// inner weight satisfying identity this coincides with [`zero_weight`].
pub fn retentive_weight(inner: WeightFunction) -> WeightFunction {
    let declared = wrapped_declared(
        &inner,
        &[
            Property::NonNegativity,
            Property::Identity,
            Property::Symmetry,
            Property::Faithfulness,
            Property::NeRelaxed,
        ],
        &[Property::Retention],
    );
    let name = format!("retentive[{}]", inner.name());
    let indep = inner.prior_independent();
    WeightFunction::new(name, declared, false, indep, move |evidence, prior| {
        let t = inner.bind(evidence, prior)?;
        Ok(Arc::new(WeightTable::from_fn(prior.atoms(), |w, v| {
            Ok(if w != v && evidence.contains(w) && evidence.contains(v) {
                int(0)
            } else {
                t.get(w, v).clone()
            })
        })?))
    })
}

/// `δ^DctRev`: `δ^BC` when the prior gives the evidence positive mass,
/// `δ^{=0}` over `inner` otherwise.
pub fn dct_rev_weight(inner: WeightFunction) -> WeightFunction {
    let declared = wrapped_declared(
        &inner,
        &[Property::Symmetry, Property::Faithfulness],
        &[Property::NonNegativity, Property::Identity, Property::Retention],
    );
    let name = format!("dct-rev[{}]", inner.name());
    WeightFunction::new(name, declared, false, false, move |evidence, prior| {
        let atoms = prior.atoms();
        if prior.mass(evidence).is_positive() {
            return Ok(Arc::new(WeightTable::from_fn(atoms, |w, v| {
                Ok(if w == v { int(1) } else { int(0) })
            })?));
        }
        let t = inner.bind(evidence, prior)?;
        Ok(Arc::new(zero_table(&t, evidence, atoms)?))
    })
}

fn classical_weight(prefix: &str, op: ClassicalOperator, inner: WeightFunction, declared: PropertySet) -> WeightFunction {
    let name = format!("{prefix}[{},{}]", op.name(), inner.name());
    WeightFunction::new(name, declared, false, false, move |evidence, prior| {
        let selected = op.apply_to_state(prior, evidence)?;
        let t = inner.bind(evidence, prior)?;
        Ok(Arc::new(WeightTable::from_fn(prior.atoms(), |w, v| {
            Ok(if w == v {
                int(1)
            } else if selected.contains(w) {
                t.get(w, v).clone()
            } else {
                int(0)
            })
        })?))
    })
}

/// `δ^ClsRev`: the inner weight restricted to targets chosen by a classical
/// revision of the prior's support.
pub fn cls_rev_weight(rev: ClassicalOperator, inner: WeightFunction) -> WeightFunction {
    let declared = wrapped_declared(
        &inner,
        &[Property::NonNegativity, Property::Faithfulness, Property::Retention],
        &[Property::Identity],
    );
    classical_weight("cls-rev", rev, inner, declared)
}

/// `δ^ClsUpd`: as [`cls_rev_weight`] with a classical update.
pub fn cls_upd_weight(upd: ClassicalOperator, inner: WeightFunction) -> WeightFunction {
    let declared = wrapped_declared(
        &inner,
        &[Property::NonNegativity, Property::Faithfulness],
        &[Property::Identity],
    );
    classical_weight("cls-upd", upd, inner, declared)
}

/// `δ^DctUpd`: accepts any relaxed inverse-distance weight unchanged.
pub fn dct_upd_weight(inner: WeightFunction) -> Result<WeightFunction> {
    let missing: Vec<&str> = [Property::InverseDistance, Property::Relaxed]
        .iter()
        .flat_map(|p| p.components())
        .filter(|&&p| !inner.declares(p))
        .map(|p| p.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(EdiError::RejectedWeight(format!(
            "{} does not declare {}",
            inner.name(),
            missing.join(", ")
        )));
    }
    let name = format!("dct-upd[{}]", inner.name());
    Ok(inner.renamed(name))
}

/// Whether a rational lies in `[0, 1]`.
pub fn in_unit_interval(x: &Rational) -> bool {
    !x.is_negative() && x <= &Rational::one()
}

#[cfg(test)]
mod tests;
