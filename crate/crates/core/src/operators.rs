//! Named belief change operators, shared by the postulate checker and the
//! command line.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::belief::BeliefState;
use crate::classical::{dalal_revision, pma_update};
use crate::error::{EdiError, Result};
use crate::imaging::{conditioning, edi, edi_masses, generalized_imaging, lewis_imaging, ChangeResult};
use crate::logic::WorldSet;
use crate::metric::PseudoDistance;
use crate::rational::Rational;
use crate::weights::{
    cls_rev_weight, cls_upd_weight, dct_rev_weight, dct_upd_weight, dfr_weight, rcp_weight, retentive_weight,
    WeightFunction,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorName {
    Bc,
    Li,
    Gi,
    EdiRcp,
    EdiDfr,
    ClsRev,
    DctRev,
    ClsUpd,
    DctUpd,
}

impl OperatorName {
    pub const ALL: [OperatorName; 9] = [
        OperatorName::Bc,
        OperatorName::Li,
        OperatorName::Gi,
        OperatorName::EdiRcp,
        OperatorName::EdiDfr,
        OperatorName::ClsRev,
        OperatorName::DctRev,
        OperatorName::ClsUpd,
        OperatorName::DctUpd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorName::Bc => "bc",
            OperatorName::Li => "li",
            OperatorName::Gi => "gi",
            OperatorName::EdiRcp => "edi-rcp",
            OperatorName::EdiDfr => "edi-dfr",
            OperatorName::ClsRev => "cls-rev",
            OperatorName::DctRev => "dct-rev",
            OperatorName::ClsUpd => "cls-upd",
            OperatorName::DctUpd => "dct-upd",
        }
    }
}

impl FromStr for OperatorName {
    type Err = EdiError;

    fn from_str(s: &str) -> Result<Self> {
        OperatorName::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| EdiError::UnknownOperator(s.to_string()))
    }
}

impl fmt::Display for OperatorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The distance-based weight used inside composite operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerKind {
    Rcp,
    Dfr,
}

impl FromStr for InnerKind {
    type Err = EdiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rcp" => Ok(InnerKind::Rcp),
            "dfr" => Ok(InnerKind::Dfr),
            _ => Err(EdiError::InvalidParameter(format!("unknown inner weight `{s}` (expected rcp or dfr)"))),
        }
    }
}

pub fn inner_weight(kind: InnerKind, d: Arc<PseudoDistance>, eta: Rational) -> Result<WeightFunction> {
    match kind {
        InnerKind::Rcp => rcp_weight(d, eta),
        InnerKind::Dfr => dfr_weight(d, eta),
    }
}

/// A belief change operator over model-set evidence.
#[derive(Clone, Debug)]
pub enum Operator {
    Conditioning,
    Lewis(Arc<PseudoDistance>),
    Generalized(Arc<PseudoDistance>),
    Edi(WeightFunction),
    /// EDI without the final division by γ. Not a belief change operator;
    /// it exists to confirm the postulate checker notices.
    Unnormalized(WeightFunction),
}

impl Operator {
    /// Builds a named operator. Classical revision is Dalal's and classical
    /// update is PMA, both over `d`; the revision inner weight is made
    /// retentive first.
    pub fn build(name: OperatorName, inner: InnerKind, eta: Rational, d: Arc<PseudoDistance>) -> Result<Operator> {
        let inner = || inner_weight(inner, d.clone(), eta.clone());
        Ok(match name {
            OperatorName::Bc => Operator::Conditioning,
            OperatorName::Li => Operator::Lewis(d.clone()),
            OperatorName::Gi => Operator::Generalized(d.clone()),
            OperatorName::EdiRcp => Operator::Edi(rcp_weight(d.clone(), eta.clone())?),
            OperatorName::EdiDfr => Operator::Edi(dfr_weight(d.clone(), eta.clone())?),
            OperatorName::ClsRev => {
                Operator::Edi(cls_rev_weight(dalal_revision(d.clone()), retentive_weight(inner()?)))
            }
            OperatorName::DctRev => Operator::Edi(dct_rev_weight(inner()?)),
            OperatorName::ClsUpd => Operator::Edi(cls_upd_weight(pma_update(d.clone()), inner()?)),
            OperatorName::DctUpd => Operator::Edi(dct_upd_weight(inner()?)?),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Operator::Conditioning => "bc".into(),
            Operator::Lewis(_) => "li".into(),
            Operator::Generalized(_) => "gi".into(),
            Operator::Edi(f) => format!("edi[{}]", f.name()),
            Operator::Unnormalized(f) => format!("unnormalized-edi[{}]", f.name()),
        }
    }

    pub fn apply(&self, b: &BeliefState, evidence: &WorldSet) -> Result<ChangeResult> {
        match self {
            Operator::Conditioning => conditioning(b, evidence),
            Operator::Lewis(d) => lewis_imaging(b, evidence, d),
            Operator::Generalized(d) => generalized_imaging(b, evidence, d),
            Operator::Edi(f) => edi(b, evidence, f),
            Operator::Unnormalized(_) => {
                let raw = self.raw(b, evidence)?;
                Ok(ChangeResult {
                    posterior: BeliefState::new(b.atoms(), raw)?,
                    gamma: num_traits::One::one(),
                    operator: self.name(),
                    evidence: evidence.clone(),
                })
            }
        }
    }

    /// The operator's output vector, without insisting that it is a belief
    /// state.
    pub fn raw(&self, b: &BeliefState, evidence: &WorldSet) -> Result<Vec<Rational>> {
        match self {
            Operator::Unnormalized(f) => edi_masses(b, evidence, f),
            _ => Ok(self.apply(b, evidence)?.posterior.probs().to_vec()),
        }
    }

    pub fn iterate(&self, b: &BeliefState, evidence: &WorldSet, t: usize) -> Result<Vec<ChangeResult>> {
        if t == 0 {
            return Err(EdiError::InvalidParameter("iteration count must be at least 1".into()));
        }
        let mut out: Vec<ChangeResult> = Vec::with_capacity(t);
        let mut current = b.clone();
        for _ in 0..t {
            let r = self.apply(&current, evidence)?;
            current = r.posterior.clone();
            out.push(r);
        }
        Ok(out)
    }
}
