//! Smith normal form over ℤ with both transforms and the inverse of the row transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `u · a · v = diag(d₁, …, d_rank, 0, …)` with `d₁ | d₂ | …`, all `dᵢ > 0`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub diag: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let s = m[src].clone();
            for (x, y) in m[dst].iter_mut().zip(&s) {
                *x += k * y;
            }
        }
        // inverse: col[src] -= k · col[dst]
        for row in &mut self.u_inv {
            let d = row[dst].clone();
            row[src] -= k * d;
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let s = row[src].clone();
                row[dst] += k * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -x.clone();
            }
        }
        for row in &mut self.u_inv {
            row[i] = -row[i].clone();
        }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn smith_normal_form(a: &[Vec<BigInt>], rows: usize, cols: usize) -> SmithForm {
    let mut w = Work { a: a.to_vec(), u: identity(rows), u_inv: identity(rows), v: identity(cols) };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.add_row(i, t, &-q);
                clean &= w.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.add_col(j, t, &-q);
                clean &= w.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let p = w.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
            if let Some(i) = bad {
                w.add_row(t, i, &BigInt::one());
                continue;
            }
            break;
        }
        if w.a[t][t].is_zero() {
            break;
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        diag.push(w.a[t][t].clone());
    }
    SmithForm { u: w.u, u_inv: w.u_inv, v: w.v, diag }
}
