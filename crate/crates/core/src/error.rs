use std::fmt;

use serde::Serialize;

/// The axiom or contract a [`Violation`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    // rings
    AdditiveAssociativity,
    AdditiveCommutativity,
    AdditiveIdentity,
    AdditiveInverse,
    MultiplicativeAssociativity,
    LeftDistributivity,
    RightDistributivity,
    UnitLaw,
    Commutativity,
    // semigroupoids
    ProductOnNonComposable,
    MissingProduct,
    SourceOfProduct,
    RangeOfProduct,
    Associativity,
    InverseShape,
    InverseLaw,
    InverseNotUnique,
    InverseOfProduct,
    InverseInvolution,
    IdempotentsCommute,
    OrderCompatibility,
    Multiplicativity,
    Rigidity,
    // actions
    IdealProperty,
    DomainIdeal,
    RangeIdeal,
    PartialIsomorphism,
    InverseCompatibility,
    ExtensionLaw,
    ActionAssociativity,
    CongruenceShape,
    CongruenceProduct,
    GermTransitivity,
    // bundles and algebras
    RankMismatch,
    BundleAssociativity,
    CentralTwist,
    AlgebraAssociativity,
    GradedClosure,
    DomainNotIdeal,
    ActionMultiplicativity,
    FiberIntertwining,
    FiberInvertibility,
    TransportCocycle,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        match s.as_ref().and_then(|v| v.as_str()) {
            Some(name) => f.write_str(name),
            None => write!(f, "{self:?}"),
        }
    }
}

/// One failed axiom together with the smallest tuple that exhibits it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub witness: Vec<String>,
    pub detail: String,
}

impl Violation {
    pub fn new(rule: Rule, witness: Vec<String>, detail: impl Into<String>) -> Self {
        Violation { rule, witness, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at ({}): {}", self.rule, self.witness.join(", "), self.detail)
    }
}

/// Outcome of an exhaustive axiom check. Empty `violations` means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport { subject: subject.into(), violations: Vec::new() }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    /// Turns a non-empty report into `Err(Error::Invalid)`.
    pub fn into_result(self) -> Result<(), Error> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "{}: valid", self.subject);
        }
        write!(f, "{}: {} violation(s)", self.subject, self.violations.len())?;
        for v in &self.violations {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: wrong shapes, unknown ids, out-of-range indices.
    #[error("structural error: {0}")]
    Structural(String),
    /// Well-formed input that violates an axiom.
    #[error("{0}")]
    Invalid(ValidationReport),
    /// The requested computation is not available for this ring or structure.
    #[error("capability error: {0}")]
    Capability(String),
    /// A construction declined to run on inputs outside its hypotheses.
    #[error("refused: {0}")]
    Refused(ValidationReport),
    /// A self-check disagreed with itself; always an implementation bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    /// A theorem certificate failed, with the counterexample in the message.
    #[error("certification failed: {0}")]
    Certification(String),
    /// Error raised inside a named pipeline stage.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn refused(subject: &str, v: Violation) -> Self {
        let mut r = ValidationReport::new(subject);
        r.push(v);
        Error::Refused(r)
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// Strips stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn report(&self) -> Option<&ValidationReport> {
        match self.root() {
            Error::Invalid(r) | Error::Refused(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_capability(&self) -> bool {
        matches!(self.root(), Error::Capability(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Attaches a stage tag to any error in a result.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}
