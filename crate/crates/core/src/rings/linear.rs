//! Kernels, images and spans. Fields (ℚ, ℤ/p) use row reduction; ℤ and
//! composite ℤ/n go through the Smith normal form of an integer lift.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::snf::smith_normal_form;
use super::{Elem, Matrix, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    /// Rank of the image (number of non-trivial invariant factors over ℤ/n).
    pub rank: usize,
    /// Pivot columns of the reduced row echelon form (fields only).
    pub pivots: Vec<usize>,
    /// Non-trivial invariant factors of the image (ℤ and composite ℤ/n only).
    pub invariant_factors: Vec<BigInt>,
    pub kernel: Vec<Vec<Elem>>,
    pub image: Vec<Vec<Elem>>,
}

fn unsupported(ring: &Ring) -> Error {
    Error::capability(format!("linear algebra is not available over {}", ring.describe()))
}

/// Reduced row echelon form of `rows` (each of length `cols`) over a field.
fn rref(ring: &Ring, mut rows: Vec<Vec<Elem>>, cols: usize) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !ring.is_zero(&rows[i][c])) else { continue };
        rows.swap(r, p);
        let inv = ring.inverse(&rows[r][c]).expect("nonzero element of a field is invertible");
        rows[r] = ring.vec_scale(&inv, &rows[r]);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !ring.is_zero(&row[c]) {
                let k = ring.neg(&row[c]);
                ring.axpy(row, &k, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

fn lift_rows(ring: &Ring, m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| ring.lift(x)).collect()).collect()
}

/// `[m | n·I]` when `n > 0`, else `m` itself.
fn augmented(rows: Vec<Vec<BigInt>>, n: u64) -> Vec<Vec<BigInt>> {
    if n == 0 {
        return rows;
    }
    let r = rows.len();
    rows.into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..r).map(|j| if i == j { BigInt::from(n) } else { BigInt::zero() }));
            row
        })
        .collect()
}

/// Image lattice data: basis vectors `u⁻¹ eᵢ · dᵢ` reduced by the modulus.
fn lattice_image(ring: &Ring, u_inv: &[Vec<BigInt>], diag: &[BigInt], n: u64) -> (Vec<Vec<Elem>>, Vec<BigInt>) {
    let mut basis = Vec::new();
    let mut factors = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if n > 0 && d.is_multiple_of(&BigInt::from(n)) {
            continue;
        }
        let v: Vec<Elem> = u_inv.iter().map(|row| ring.from_bigint(&(&row[i] * d))).collect();
        if !ring.vec_is_zero(&v) {
            basis.push(v);
            factors.push(d.clone());
        }
    }
    (basis, factors)
}

/// Rank profile, kernel basis and image basis of `m` acting on column vectors.
pub fn solve_linear(m: &Matrix, ring: &Ring) -> Result<LinearSolution> {
    if !ring.supports_linear_algebra() {
        return Err(unsupported(ring));
    }
    let (r, c) = (m.rows(), m.cols());
    if ring.is_field() {
        let rows: Vec<Vec<Elem>> = (0..r).map(|i| m.row(i).to_vec()).collect();
        let (red, pivots) = rref(ring, rows, c);
        let kernel = (0..c)
            .filter(|f| !pivots.contains(f))
            .map(|f| {
                let mut v = ring.zero_vec(c);
                v[f] = ring.one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = ring.neg(&red[k][f]);
                }
                v
            })
            .collect();
        let image = pivots.iter().map(|&p| m.column(p)).collect();
        return Ok(LinearSolution { rank: pivots.len(), pivots, invariant_factors: Vec::new(), kernel, image });
    }
    let n = ring.lattice_modulus().ok_or_else(|| unsupported(ring))?;
    let a = augmented(lift_rows(ring, m), n);
    let width = if n == 0 { c } else { c + r };
    let s = smith_normal_form(&a, r, width);
    let (image, invariant_factors) = lattice_image(ring, &s.u_inv, &s.diag, n);
    let candidates: Vec<Vec<Elem>> = (s.rank()..width)
        .map(|j| (0..c).map(|i| ring.from_bigint(&s.v[i][j])).collect::<Vec<_>>())
        .filter(|v| !ring.vec_is_zero(v))
        .collect();
    let kernel = if n == 0 { candidates } else { Span::new(ring, c, candidates)?.basis().to_vec() };
    Ok(LinearSolution { rank: image.len(), pivots: Vec::new(), invariant_factors, kernel, image })
}

#[derive(Clone, Debug)]
enum Backend {
    Field { pivots: Vec<usize> },
    Lattice { u: Vec<Vec<BigInt>>, diag: Vec<BigInt> },
}

/// A finitely generated submodule of `R^dim` with decidable membership.
#[derive(Clone, Debug)]
pub struct Span {
    ring: Ring,
    dim: usize,
    basis: Vec<Vec<Elem>>,
    backend: Backend,
}

impl Span {
    pub fn new(ring: &Ring, dim: usize, generators: Vec<Vec<Elem>>) -> Result<Span> {
        if !ring.supports_linear_algebra() {
            return Err(unsupported(ring));
        }
        if generators.iter().any(|g| g.len() != dim) {
            return Err(Error::structural(format!("span generators must have length {dim}")));
        }
        if ring.is_field() {
            let (basis, pivots) = rref(ring, generators, dim);
            return Ok(Span { ring: ring.clone(), dim, basis, backend: Backend::Field { pivots } });
        }
        let n = ring.lattice_modulus().ok_or_else(|| unsupported(ring))?;
        // columns are the generators
        let cols = generators.len();
        let rows: Vec<Vec<BigInt>> = (0..dim).map(|i| generators.iter().map(|g| ring.lift(&g[i])).collect()).collect();
        let a = augmented(rows, n);
        let width = if n == 0 { cols } else { cols + dim };
        let s = smith_normal_form(&a, dim, width);
        let (basis, _) = lattice_image(ring, &s.u_inv, &s.diag, n);
        Ok(Span { ring: ring.clone(), dim, basis, backend: Backend::Lattice { u: s.u, diag: s.diag } })
    }

    pub fn zero(ring: &Ring, dim: usize) -> Result<Span> {
        Span::new(ring, dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generators in canonical form: reduced echelon rows over a field,
    /// Smith-adapted generators otherwise.
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Dimension over a field; minimal number of generators over ℤ/n.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let ring = &self.ring;
        match &self.backend {
            Backend::Field { pivots } => {
                let mut w = v.to_vec();
                for (row, &p) in self.basis.iter().zip(pivots) {
                    if !ring.is_zero(&w[p]) {
                        let k = ring.neg(&w[p]);
                        ring.axpy(&mut w, &k, row);
                    }
                }
                ring.vec_is_zero(&w)
            }
            Backend::Lattice { u, diag } => {
                let lifted: Vec<BigInt> = v.iter().map(|x| ring.lift(x)).collect();
                u.iter().enumerate().all(|(i, row)| {
                    let w: BigInt = row.iter().zip(&lifted).map(|(a, b)| a * b).sum();
                    match diag.get(i) {
                        Some(d) => w.is_multiple_of(d),
                        None => w.is_zero(),
                    }
                })
            }
        }
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Span) -> bool {
        self.dim == other.dim && self.contains_span(other) && other.contains_span(self)
    }

    /// Span of `self` together with `extra`.
    pub fn extended(&self, extra: Vec<Vec<Elem>>) -> Result<Span> {
        let mut gens = self.basis.clone();
        gens.extend(extra);
        Span::new(&self.ring, self.dim, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(ring: &Ring, v: &[i64]) -> Vec<Elem> {
        v.iter().map(|&x| ring.from_int(x)).collect()
    }

    fn mat(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| ints(ring, r)).collect(), cols).unwrap()
    }

    #[test]
    fn identity_over_q() {
        let q = Ring::rationals();
        let s = solve_linear(&Matrix::identity(&q, 3), &q).unwrap();
        assert!(s.kernel.is_empty());
        assert_eq!(s.rank, 3);
    }

    #[test]
    fn two_over_z4() {
        let r = Ring::zmod(4);
        let s = solve_linear(&mat(&r, &[&[2]]), &r).unwrap();
        assert_eq!(s.kernel, vec![ints(&r, &[2])]);
        // oracle: the image is {2x mod 4}
        let image = Span::new(&r, 1, s.image.clone()).unwrap();
        for x in 0..4 {
            assert_eq!(image.contains(&ints(&r, &[x])), x % 2 == 0);
        }
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn ones_over_z5() {
        let r = Ring::zmod(5);
        let s = solve_linear(&mat(&r, &[&[1, 1], &[1, 1]]), &r).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.kernel, vec![ints(&r, &[-1, 1])]);
    }

    #[test]
    fn integer_kernel_and_image() {
        let z = Ring::integers();
        let m = mat(&z, &[&[2, 4, 6], &[1, 2, 3]]);
        let s = solve_linear(&m, &z).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.kernel.len(), 2);
        for k in &s.kernel {
            assert!(z.vec_is_zero(&m.mul_vec(&z, k)));
        }
        let image = Span::new(&z, 2, s.image.clone()).unwrap();
        assert!(image.contains(&ints(&z, &[2, 1])));
        assert!(!image.contains(&ints(&z, &[1, 1])));
    }

    #[test]
    fn table_rings_are_refused() {
        let spec = super::super::RingSpec::Table(super::super::TableSpec {
            elements: vec!["0".into(), "1".into()],
            add: vec![vec![0, 1], vec![1, 0]],
            mul: vec![vec![0, 0], vec![0, 1]],
            zero: 0,
            one: 1,
            commutative: true,
        });
        let ring = Ring::from_spec(&spec).unwrap();
        let m = Matrix::identity(&ring, 1);
        assert!(solve_linear(&m, &ring).unwrap_err().is_capability());
    }

    #[test]
    fn span_membership_z6() {
        let r = Ring::zmod(6);
        let s = Span::new(&r, 2, vec![ints(&r, &[2, 0]), ints(&r, &[0, 3])]).unwrap();
        assert!(s.contains(&ints(&r, &[4, 3])));
        assert!(!s.contains(&ints(&r, &[1, 0])));
        assert!(!s.contains(&ints(&r, &[0, 1])));
        // ℤ/3 ⊕ ℤ/2 is cyclic, generated by (2, 3)
        assert_eq!(s.rank(), 1);
        assert!(s.contains(&ints(&r, &[2, 3])));
    }
}
