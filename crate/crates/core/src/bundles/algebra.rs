use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result, Rule, ValidationReport, Violation};
use crate::rings::{Elem, Ring, Span};
use crate::semigroupoid::{ArrowId, FiniteSemigroupoid};

/// Sparse coordinates `(basis index, coefficient)` with nonzero coefficients.
pub type SparseProduct = Vec<(usize, Elem)>;

/// Largest basis accepted for an algebra presentation.
pub const MAX_ALGEBRA_RANK: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub semigroupoid: Arc<FiniteSemigroupoid>,
    pub degrees: Vec<ArrowId>,
}

/// A free R-module with a labeled basis and a bilinear product given by
/// structure constants, optionally graded by a semigroupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    name: String,
    ring: Ring,
    labels: Vec<String>,
    products: Vec<SparseProduct>,
    grading: Option<Grading>,
    provenance: String,
}

fn sparse(ring: &Ring, dense: Vec<Elem>) -> SparseProduct {
    dense.into_iter().enumerate().filter(|(_, c)| !ring.is_zero(c)).collect()
}

impl AlgebraPresentation {
    /// Builds the table from `product(i, j)`, the dense coordinates of `e_i e_j`.
    pub fn from_dense(
        name: impl Into<String>,
        ring: &Ring,
        labels: Vec<String>,
        mut product: impl FnMut(usize, usize) -> Result<Vec<Elem>>,
    ) -> Result<AlgebraPresentation> {
        let n = labels.len();
        if n > MAX_ALGEBRA_RANK {
            return Err(Error::structural(format!("algebra rank {n} exceeds {MAX_ALGEBRA_RANK}")));
        }
        let mut products = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = product(i, j)?;
                if v.len() != n {
                    return Err(Error::internal(format!("product of basis {i} and {j} has length {}", v.len())));
                }
                products.push(sparse(ring, v));
            }
        }
        Ok(AlgebraPresentation {
            name: name.into(),
            ring: ring.clone(),
            labels,
            products,
            grading: None,
            provenance: String::new(),
        })
    }

    /// Builds from explicit sparse products, one list per ordered basis pair.
    pub fn from_sparse(
        name: impl Into<String>,
        ring: &Ring,
        labels: Vec<String>,
        products: Vec<SparseProduct>,
    ) -> Result<AlgebraPresentation> {
        let name = name.into();
        let n = labels.len();
        if n > MAX_ALGEBRA_RANK {
            return Err(Error::structural(format!("algebra {name}: rank {n} exceeds {MAX_ALGEBRA_RANK}")));
        }
        if products.len() != n * n {
            return Err(Error::structural(format!("algebra {name}: expected {} basis products", n * n)));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::structural(format!("algebra {name}: duplicate basis label {l}")));
        }
        let mut clean = Vec::with_capacity(products.len());
        for p in products {
            let mut dense = ring.zero_vec(n);
            for (l, c) in p {
                if l >= n || !ring.contains(&c) {
                    return Err(Error::structural(format!("algebra {name}: product coordinate out of range")));
                }
                dense[l] = ring.add(&dense[l], &c);
            }
            clean.push(sparse(ring, dense));
        }
        Ok(AlgebraPresentation {
            name,
            ring: ring.clone(),
            labels,
            products: clean,
            grading: None,
            provenance: String::new(),
        })
    }

    pub fn with_grading(mut self, grading: Grading) -> Result<AlgebraPresentation> {
        if grading.degrees.len() != self.rank()
            || grading.degrees.iter().any(|&d| d >= grading.semigroupoid.arrow_count())
        {
            return Err(Error::structural(format!("algebra {}: degree map does not match the basis", self.name)));
        }
        self.grading = Some(grading);
        Ok(self)
    }

    pub fn without_grading(mut self) -> AlgebraPresentation {
        self.grading = None;
        self
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> AlgebraPresentation {
        self.provenance = note.into();
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> AlgebraPresentation {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn degree(&self, i: usize) -> Option<ArrowId> {
        self.grading.as_ref().map(|g| g.degrees[i])
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn sparse_product(&self, i: usize, j: usize) -> &SparseProduct {
        &self.products[i * self.rank() + j]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Elem> {
        let mut out = self.ring.zero_vec(self.rank());
        for (l, c) in self.sparse_product(i, j) {
            out[*l] = c.clone();
        }
        out
    }

    pub fn unit_vec(&self, i: usize) -> Vec<Elem> {
        self.ring.unit_vec(self.rank(), i)
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let ring = &self.ring;
        let mut out = ring.zero_vec(self.rank());
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !ring.is_zero(c)) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !ring.is_zero(c)) {
                let xy = ring.mul(xi, yj);
                for (l, c) in self.sparse_product(i, j) {
                    out[*l] = ring.add(&out[*l], &ring.mul(&xy, c));
                }
            }
        }
        out
    }

    /// Basis elements of degree `g`.
    pub fn homogeneous(&self, g: ArrowId) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.degree(i) == Some(g)).collect()
    }

    pub fn check_associativity(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("algebra {}", self.name));
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for l in 0..n {
                    let left = self.mul(&ij, &self.unit_vec(l));
                    let right = self.mul(&self.unit_vec(i), &self.basis_product(j, l));
                    if left != right {
                        let w = vec![self.labels[i].clone(), self.labels[j].clone(), self.labels[l].clone()];
                        report.push(Violation::new(
                            Rule::AlgebraAssociativity,
                            w.clone(),
                            format!(
                                "({}·{})·{} = {} but {}·({}·{}) = {}",
                                w[0],
                                w[1],
                                w[2],
                                self.ring.vec_display(&left),
                                w[0],
                                w[1],
                                w[2],
                                self.ring.vec_display(&right)
                            ),
                        ));
                        return report;
                    }
                }
            }
        }
        report
    }

    /// `A_g A_h ⊆ A_{gh}` for composable degrees and `A_g A_h = 0` otherwise.
    pub fn check_graded_closure(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("grading of {}", self.name));
        let Some(gr) = &self.grading else { return report };
        let g = &*gr.semigroupoid;
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                let (di, dj) = (gr.degrees[i], gr.degrees[j]);
                let want = g.prod(di, dj);
                if let Some((l, _)) = self.sparse_product(i, j).iter().find(|(l, _)| Some(gr.degrees[*l]) != want) {
                    let target = want.map_or("0".to_string(), |d| format!("degree {}", g.arrow_name(d)));
                    report.push(Violation::new(
                        Rule::GradedClosure,
                        vec![self.labels[i].clone(), self.labels[j].clone(), self.labels[*l].clone()],
                        format!(
                            "{}·{} has a component along {} of degree {}, expected {}",
                            self.labels[i],
                            self.labels[j],
                            self.labels[*l],
                            g.arrow_name(gr.degrees[*l]),
                            target
                        ),
                    ));
                    return report;
                }
            }
        }
        report
    }

    pub fn validate(&self) -> Result<()> {
        self.check_associativity().into_result()?;
        self.check_graded_closure().into_result()
    }

    /// Same ring, basis labels and structure constants; names and notes are ignored.
    pub fn same_table(&self, other: &AlgebraPresentation) -> bool {
        self.ring == other.ring && self.labels == other.labels && self.products == other.products
    }

    pub fn to_json(&self) -> Value {
        let n = self.rank();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = self.sparse_product(i, j);
                if !p.is_empty() {
                    let terms: Vec<Value> =
                        p.iter().map(|(l, c)| json!([self.labels[*l], self.ring.elem_to_json(c)])).collect();
                    products.push(json!([self.labels[i], self.labels[j], terms]));
                }
            }
        }
        let mut v = json!({
            "id": self.name,
            "basis": self.labels,
            "products": products,
        });
        if let Some(g) = &self.grading {
            v["grading"] = json!(g.semigroupoid.name());
            let degrees: serde_json::Map<String, Value> =
                (0..n).map(|i| (self.labels[i].clone(), json!(g.semigroupoid.arrow_name(g.degrees[i])))).collect();
            v["degrees"] = Value::Object(degrees);
        }
        if !self.provenance.is_empty() {
            v["note"] = json!(self.provenance);
        }
        v
    }
}

/// Smallest two-sided ideal containing `generators`, as a span.
pub fn ideal_closure(algebra: &AlgebraPresentation, generators: Vec<Vec<Elem>>) -> Result<Span> {
    let ring = algebra.ring();
    if !ring.supports_linear_algebra() {
        return Err(Error::capability(format!("ideal closure is not available over {}", ring.describe())));
    }
    let n = algebra.rank();
    let mut span = Span::new(ring, n, generators)?;
    loop {
        let mut extra: Vec<Vec<Elem>> = Vec::new();
        for v in span.basis() {
            for e in 0..n {
                let e = algebra.unit_vec(e);
                for w in [algebra.mul(&e, v), algebra.mul(v, &e)] {
                    if !span.contains(&w) && !extra.contains(&w) {
                        extra.push(w);
                    }
                }
            }
        }
        if extra.is_empty() {
            return Ok(span);
        }
        span = span.extended(extra)?;
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::semigroupoid::{samples, validate_semigroupoid};

    /// `R[ℤ/2]` on basis `u, g`, graded by ℤ/2.
    pub fn group_algebra_z2(ring: &Ring) -> AlgebraPresentation {
        let z2 = Arc::new(validate_semigroupoid(&samples::z2()).unwrap());
        AlgebraPresentation::from_dense("Rz2", ring, vec!["u".into(), "g".into()], |i, j| Ok(ring.unit_vec(2, i ^ j)))
            .unwrap()
            .with_grading(Grading { semigroupoid: z2, degrees: vec![0, 1] })
            .unwrap()
    }

    /// 2×2 matrix units `e11, e12, e21, e22`, graded by the pair groupoid.
    pub fn matrix_units(ring: &Ring) -> AlgebraPresentation {
        let p2 = Arc::new(validate_semigroupoid(&samples::pair_groupoid(2)).unwrap());
        let labels = ["e11", "e12", "e21", "e22"].map(String::from).to_vec();
        AlgebraPresentation::from_dense("M2", ring, labels, |p, q| {
            let (i, j, k, l) = (p / 2, p % 2, q / 2, q % 2);
            Ok(if j == k { ring.unit_vec(4, i * 2 + l) } else { ring.zero_vec(4) })
        })
        .unwrap()
        .with_grading(Grading { semigroupoid: p2, degrees: vec![0, 1, 2, 3] })
        .unwrap()
    }
}
