use std::sync::Arc;

use serde::Serialize;

use crate::bundles::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::rings::{solve_linear, Elem, Matrix, Span};

/// A linear map between two presentations, given by the images of the source basis.
#[derive(Clone, Debug)]
pub struct LinearMapOnBasis {
    name: String,
    source: Arc<AlgebraPresentation>,
    target: Arc<AlgebraPresentation>,
    images: Vec<Vec<Elem>>,
    inverse: Option<Vec<Vec<Elem>>>,
}

/// Outcome of one exhaustive check inside a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn pass(name: &str) -> Check {
        Check { name: name.into(), passed: true, witness: None, detail: String::new() }
    }

    pub fn fail(name: &str, witness: Vec<String>, detail: String) -> Check {
        Check { name: name.into(), passed: false, witness: Some(witness), detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSummary {
    pub rank: usize,
    pub kernel_rank: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub map: String,
    pub source: String,
    pub target: String,
    pub source_rank: usize,
    pub target_rank: usize,
    pub checks: Vec<Check>,
    /// Absent when the ring has no linear-algebra backend.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearSummary>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    /// `Err(Certification)` naming the first failed check.
    pub fn require(&self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(Error::Certification(format!(
                "{}: {} failed at ({}): {}",
                self.map,
                c.name,
                c.witness.clone().unwrap_or_default().join(", "),
                c.detail
            ))),
        }
    }
}

impl LinearMapOnBasis {
    pub fn new(
        name: impl Into<String>,
        source: Arc<AlgebraPresentation>,
        target: Arc<AlgebraPresentation>,
        images: Vec<Vec<Elem>>,
        inverse: Option<Vec<Vec<Elem>>>,
    ) -> Result<LinearMapOnBasis> {
        let name = name.into();
        if source.ring() != target.ring() {
            return Err(Error::structural(format!("map {name}: source and target rings differ")));
        }
        if images.len() != source.rank() || images.iter().any(|v| v.len() != target.rank()) {
            return Err(Error::structural(format!(
                "map {name}: images must be {} vectors of length {}",
                source.rank(),
                target.rank()
            )));
        }
        if let Some(inv) = &inverse {
            if inv.len() != target.rank() || inv.iter().any(|v| v.len() != source.rank()) {
                return Err(Error::structural(format!("map {name}: inverse has the wrong shape")));
            }
        }
        Ok(LinearMapOnBasis { name, source, target, images, inverse })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<AlgebraPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgebraPresentation> {
        &self.target
    }

    pub fn images(&self) -> &[Vec<Elem>] {
        &self.images
    }

    pub fn inverse(&self) -> Option<&[Vec<Elem>]> {
        self.inverse.as_deref()
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        combine(self.source.ring(), v, &self.images, self.target.rank())
    }

    pub fn apply_inverse(&self, w: &[Elem]) -> Option<Vec<Elem>> {
        self.inverse.as_ref().map(|inv| combine(self.source.ring(), w, inv, self.source.rank()))
    }

    /// Matrix with the images as columns.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(&self.images, self.target.rank()).expect("shapes checked at construction")
    }

    /// The map with source and target swapped; needs a declared inverse.
    pub fn inverted(&self, name: impl Into<String>) -> Option<LinearMapOnBasis> {
        let inv = self.inverse.clone()?;
        Some(LinearMapOnBasis {
            name: name.into(),
            source: self.target.clone(),
            target: self.source.clone(),
            images: inv,
            inverse: Some(self.images.clone()),
        })
    }

    fn check_multiplicative(&self) -> Check {
        let (s, t) = (&*self.source, &*self.target);
        for i in 0..s.rank() {
            for j in 0..s.rank() {
                let left = self.apply(&s.basis_product(i, j));
                let right = t.mul(&self.images[i], &self.images[j]);
                if left != right {
                    let r = s.ring();
                    return Check::fail(
                        "multiplicative",
                        vec![s.label(i).into(), s.label(j).into()],
                        format!("map(u·v) = {} but map(u)·map(v) = {}", r.vec_display(&left), r.vec_display(&right)),
                    );
                }
            }
        }
        Check::pass("multiplicative")
    }

    fn check_inverse(&self) -> Vec<Check> {
        let Some(inv) = &self.inverse else { return Vec::new() };
        let (s, t) = (&*self.source, &*self.target);
        let ring = s.ring();
        let mut out = Vec::new();
        let left = (0..s.rank()).find(|&i| combine(ring, &self.images[i], inv, s.rank()) != s.unit_vec(i));
        out.push(match left {
            None => Check::pass("inverse-after-map"),
            Some(i) => Check::fail("inverse-after-map", vec![s.label(i).into()], "inverse(map(u)) != u".into()),
        });
        let right = (0..t.rank()).find(|&j| self.apply(&inv[j]) != t.unit_vec(j));
        out.push(match right {
            None => Check::pass("map-after-inverse"),
            Some(j) => Check::fail("map-after-inverse", vec![t.label(j).into()], "map(inverse(w)) != w".into()),
        });
        out
    }

    /// Degree preservation, compared by arrow name in the two grading semigroupoids.
    fn check_degrees(&self) -> Option<Check> {
        let (s, t) = (&*self.source, &*self.target);
        let (gs, gt) = (s.grading()?, t.grading()?);
        if gs.semigroupoid.arrow_names() != gt.semigroupoid.arrow_names() {
            return None;
        }
        let ring = s.ring();
        for i in 0..s.rank() {
            let di = gs.degrees[i];
            if let Some(l) = (0..t.rank()).find(|&l| !ring.is_zero(&self.images[i][l]) && gt.degrees[l] != di) {
                return Some(Check::fail(
                    "graded",
                    vec![s.label(i).into(), t.label(l).into()],
                    format!(
                        "{} has degree {} but its image meets {} of degree {}",
                        s.label(i),
                        gs.semigroupoid.arrow_name(di),
                        t.label(l),
                        gt.semigroupoid.arrow_name(gt.degrees[l])
                    ),
                ));
            }
        }
        Some(Check::pass("graded"))
    }

    fn linear_summary(&self) -> Result<Option<LinearSummary>> {
        let ring = self.source.ring();
        if !ring.supports_linear_algebra() {
            return Ok(None);
        }
        let sol = solve_linear(&self.matrix(), ring)?;
        let n = self.target.rank();
        let image = Span::new(ring, n, sol.image.clone())?;
        let surjective = (0..n).all(|j| image.contains(&ring.unit_vec(n, j)));
        Ok(Some(LinearSummary {
            rank: sol.rank,
            kernel_rank: sol.kernel.len(),
            injective: sol.kernel.is_empty(),
            surjective,
        }))
    }

    /// Runs every applicable check: multiplicativity on all basis pairs,
    /// both composites with the declared inverse, degrees, and (when the ring
    /// allows it) bijectivity by linear algebra.
    pub fn certify(&self) -> Result<Certificate> {
        self.certify_as(true)
    }

    /// As `certify`, but only surjectivity is demanded of the linear check.
    pub fn certify_surjection(&self) -> Result<Certificate> {
        self.certify_as(false)
    }

    fn certify_as(&self, bijective: bool) -> Result<Certificate> {
        let mut checks = vec![self.check_multiplicative()];
        checks.extend(self.check_inverse());
        checks.extend(self.check_degrees());
        let linear = self.linear_summary()?;
        if let Some(l) = &linear {
            let (name, ok) =
                if bijective { ("bijective", l.injective && l.surjective) } else { ("surjective", l.surjective) };
            checks.push(if ok {
                Check::pass(name)
            } else {
                Check::fail(name, Vec::new(), format!("kernel rank {}, surjective {}", l.kernel_rank, l.surjective))
            });
        }
        Ok(Certificate {
            map: self.name.clone(),
            source: self.source.name().to_string(),
            target: self.target.name().to_string(),
            source_rank: self.source.rank(),
            target_rank: self.target.rank(),
            checks,
            linear,
        })
    }
}

fn combine(ring: &crate::rings::Ring, coeffs: &[Elem], columns: &[Vec<Elem>], len: usize) -> Vec<Elem> {
    let mut out = ring.zero_vec(len);
    for (c, col) in coeffs.iter().zip(columns) {
        if !ring.is_zero(c) {
            ring.axpy(&mut out, c, col);
        }
    }
    out
}
