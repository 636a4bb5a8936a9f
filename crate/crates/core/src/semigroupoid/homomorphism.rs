use std::sync::Arc;

use super::{ArrowId, FiniteSemigroupoid};
use crate::error::{Error, Result, Rule, ValidationReport, Violation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    name: String,
    source: Arc<FiniteSemigroupoid>,
    target: Arc<FiniteSemigroupoid>,
    map: Vec<ArrowId>,
    /// Smallest non-composable pair whose images compose, if any.
    non_rigid: Option<(ArrowId, ArrowId)>,
}

/// Checks multiplicativity on every composable pair and decides rigidity.
pub fn validate_homomorphism(
    name: impl Into<String>,
    source: Arc<FiniteSemigroupoid>,
    target: Arc<FiniteSemigroupoid>,
    map: Vec<ArrowId>,
) -> Result<Homomorphism> {
    let name = name.into();
    let n = source.arrow_count();
    if map.len() != n || map.iter().any(|&b| b >= target.arrow_count()) {
        return Err(Error::structural(format!("homomorphism {name} must map each of the {n} source arrows")));
    }
    let nm = |a: ArrowId| source.arrow_name(a).to_string();
    let mut report = ValidationReport::new(format!("homomorphism {name}"));
    for &(a, b) in source.composable_pairs() {
        let ab = source.prod(a, b).expect("validated semigroupoid");
        let image = target.prod(map[a], map[b]);
        if image != Some(map[ab]) {
            let shown = image.map_or("undefined".to_string(), |c| target.arrow_name(c).to_string());
            report.push(Violation::new(
                Rule::Multiplicativity,
                vec![nm(a), nm(b)],
                format!(
                    "φ({}·{}) = {} but φ({})·φ({}) = {}",
                    nm(a),
                    nm(b),
                    target.arrow_name(map[ab]),
                    nm(a),
                    nm(b),
                    shown
                ),
            ));
            break;
        }
    }
    report.into_result()?;
    let non_rigid = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| !source.composable(a, b) && target.composable(map[a], map[b]));
    Ok(Homomorphism { name, source, target, map, non_rigid })
}

impl Homomorphism {
    pub fn identity(g: Arc<FiniteSemigroupoid>) -> Homomorphism {
        let map = g.arrows().collect();
        Homomorphism { name: format!("id_{}", g.name()), source: g.clone(), target: g, map, non_rigid: None }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<FiniteSemigroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSemigroupoid> {
        &self.target
    }

    pub fn apply(&self, a: ArrowId) -> ArrowId {
        self.map[a]
    }

    pub fn map(&self) -> &[ArrowId] {
        &self.map
    }

    pub fn is_rigid(&self) -> bool {
        self.non_rigid.is_none()
    }

    pub fn rigidity_witness(&self) -> Option<(ArrowId, ArrowId)> {
        self.non_rigid
    }

    /// Refuses with the non-rigid witness pair for callers that need rigidity.
    pub fn require_rigid(&self) -> Result<()> {
        match self.non_rigid {
            None => Ok(()),
            Some((a, b)) => {
                let (x, y) = (self.source.arrow_name(a), self.source.arrow_name(b));
                Err(Error::refused(
                    &format!("homomorphism {}", self.name),
                    Violation::new(
                        Rule::Rigidity,
                        vec![x.to_string(), y.to_string()],
                        format!("({x}, {y}) is not composable but its image is"),
                    ),
                ))
            }
        }
    }
}
