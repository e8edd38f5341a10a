//! Classical revision and update over model sets, as consumed by the
//! classical-then-probabilistic weight functions.

use std::fmt;
use std::sync::Arc;

use crate::belief::BeliefState;
use crate::error::{EdiError, Result};
use crate::logic::WorldSet;
use crate::metric::PseudoDistance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalKind {
    Revision,
    Update,
}

#[derive(Clone)]
enum Rule {
    Dalal(Arc<PseudoDistance>),
    Pma(Arc<PseudoDistance>),
    Table {
        entries: Vec<(WorldSet, WorldSet, WorldSet)>,
        fallback: Box<ClassicalOperator>,
    },
}

/// A classical belief change operator acting on model sets.
#[derive(Clone)]
pub struct ClassicalOperator {
    kind: ClassicalKind,
    rule: Rule,
}

/// Dalal revision: the evidence worlds at globally minimal distance from
/// the base.
pub fn dalal_revision(d: Arc<PseudoDistance>) -> ClassicalOperator {
    ClassicalOperator { kind: ClassicalKind::Revision, rule: Rule::Dalal(d) }
}

/// PMA/Winslett update: each base world picks its own closest evidence
/// worlds, and the picks are united.
pub fn pma_update(d: Arc<PseudoDistance>) -> ClassicalOperator {
    ClassicalOperator { kind: ClassicalKind::Update, rule: Rule::Pma(d) }
}

impl ClassicalOperator {
    /// An operator that answers from a fixed table of
    /// `(base, evidence) → result` entries and defers to `fallback` elsewhere.
    /// Used to pin down scenarios where the result is simply stipulated.
    pub fn table(
        kind: ClassicalKind,
        entries: Vec<(WorldSet, WorldSet, WorldSet)>,
        fallback: ClassicalOperator,
    ) -> Result<Self> {
        for (_, evidence, result) in &entries {
            if !result.is_subset(evidence) {
                return Err(EdiError::InvalidParameter(format!(
                    "table result {result} is not inside its evidence {evidence}"
                )));
            }
        }
        Ok(ClassicalOperator {
            kind,
            rule: Rule::Table { entries, fallback: Box::new(fallback) },
        })
    }

    pub fn kind(&self) -> ClassicalKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.rule {
            Rule::Dalal(_) => "dalal",
            Rule::Pma(_) => "pma",
            Rule::Table { .. } => "table",
        }
    }

    /// Result model set of changing `base` by `evidence`. An empty base is
    /// treated as no prior commitment and yields the evidence itself.
    pub fn apply(&self, base: &WorldSet, evidence: &WorldSet) -> Result<WorldSet> {
        if evidence.is_empty() {
            return Err(EdiError::EmptyEvidence);
        }
        if base.is_empty() {
            return Ok(evidence.clone());
        }
        match &self.rule {
            Rule::Dalal(d) => {
                let dist = |w| base.iter().map(|v| d.get(w, v)).min().expect("base is non-empty");
                let best = evidence.iter().map(dist).min().expect("evidence is non-empty");
                Ok(WorldSet::from_worlds(
                    evidence.atoms(),
                    evidence.iter().filter(|&w| dist(w) == best),
                ))
            }
            Rule::Pma(d) => {
                let mut out = WorldSet::empty(evidence.atoms());
                for v in base.iter() {
                    out = out.union(&d.min_worlds(evidence, v)?);
                }
                Ok(out)
            }
            Rule::Table { entries, fallback } => entries
                .iter()
                .find(|(b, e, _)| b == base && e == evidence)
                .map(|(_, _, r)| Ok(r.clone()))
                .unwrap_or_else(|| fallback.apply(base, evidence)),
        }
    }

    /// `Mod(ψ^b ∘ α)` (or `⋄`), with `ψ^b` the support of `b`.
    pub fn apply_to_state(&self, b: &BeliefState, evidence: &WorldSet) -> Result<WorldSet> {
        self.apply(&b.support(), evidence)
    }
}

impl fmt::Debug for ClassicalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassicalOperator({:?}, {})", self.kind, self.name())
    }
}
