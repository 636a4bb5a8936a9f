use super::{ArrowId, FiniteSemigroupoid, VertexId};
use crate::error::Result;

/// Componentwise product; arrow `(a, b)` has id `a · |B| + b`.
pub fn direct_product(a: &FiniteSemigroupoid, b: &FiniteSemigroupoid) -> Result<FiniteSemigroupoid> {
    let (na, nb) = (a.arrow_count(), b.arrow_count());
    let (va, vb) = (a.vertex_count(), b.vertex_count());
    let vertices = (0..va)
        .flat_map(|x| (0..vb).map(move |y| (x, y)))
        .map(|(x, y)| format!("({},{})", a.vertex_name(x), b.vertex_name(y)))
        .collect();
    let pairs: Vec<(ArrowId, ArrowId)> = (0..na).flat_map(|x| (0..nb).map(move |y| (x, y))).collect();
    let arrows = pairs.iter().map(|&(x, y)| format!("({},{})", a.arrow_name(x), b.arrow_name(y))).collect();
    let src = pairs.iter().map(|&(x, y)| a.src(x) * vb + b.src(y)).collect();
    let rng = pairs.iter().map(|&(x, y)| a.rng(x) * vb + b.rng(y)).collect();
    FiniteSemigroupoid::build(format!("{}x{}", a.name(), b.name()), vertices, arrows, src, rng, |p, q| {
        let (x1, y1) = pairs[p];
        let (x2, y2) = pairs[q];
        Some(a.prod(x1, x2)? * nb + b.prod(y1, y2)?)
    })
}

/// Units per vertex and two-sided inverses of a groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidTables {
    pub units: Vec<ArrowId>,
    pub inverse: Vec<ArrowId>,
}

impl FiniteSemigroupoid {
    /// Unit and inverse tables, or a description of the first obstruction.
    pub fn groupoid_tables(&self) -> std::result::Result<GroupoidTables, String> {
        let mut units = Vec::with_capacity(self.vertex_count());
        for v in 0..self.vertex_count() {
            let unit = self.arrows().find(|&u| {
                self.src(u) == v
                    && self.rng(u) == v
                    && self.arrows().all(|a| {
                        (self.rng(a) != v || self.prod(u, a) == Some(a))
                            && (self.src(a) != v || self.prod(a, u) == Some(a))
                    })
            });
            match unit {
                Some(u) => units.push(u),
                None => return Err(format!("vertex {} has no identity arrow", self.vertex_name(v))),
            }
        }
        let mut inverse = Vec::with_capacity(self.arrow_count());
        for a in self.arrows() {
            let inv = self
                .arrows()
                .find(|&b| self.prod(a, b) == Some(units[self.rng(a)]) && self.prod(b, a) == Some(units[self.src(a)]));
            match inv {
                Some(b) => inverse.push(b),
                None => return Err(format!("arrow {} has no two-sided inverse", self.arrow_name(a))),
            }
        }
        Ok(GroupoidTables { units, inverse })
    }
}

/// Searches for an isomorphism `a → b`; returns arrow and vertex maps.
pub fn find_isomorphism(a: &FiniteSemigroupoid, b: &FiniteSemigroupoid) -> Option<(Vec<ArrowId>, Vec<VertexId>)> {
    if a.arrow_count() != b.arrow_count()
        || a.vertex_count() != b.vertex_count()
        || a.composable_pairs().len() != b.composable_pairs().len()
    {
        return None;
    }
    let n = a.arrow_count();
    let mut amap = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut vmap = vec![usize::MAX; a.vertex_count()];
    let mut vused = vec![false; b.vertex_count()];
    if !extend(a, b, 0, &mut amap, &mut used, &mut vmap, &mut vused) {
        return None;
    }
    let mut free = (0..b.vertex_count()).filter(|&w| !vused[w]);
    for v in vmap.iter_mut().filter(|v| **v == usize::MAX) {
        *v = free.next()?;
    }
    Some((amap, vmap))
}

fn bind(vmap: &mut [VertexId], vused: &mut [bool], v: VertexId, w: VertexId, undo: &mut Vec<VertexId>) -> bool {
    if vmap[v] == usize::MAX {
        if vused[w] {
            return false;
        }
        vmap[v] = w;
        vused[w] = true;
        undo.push(v);
        true
    } else {
        vmap[v] == w
    }
}

fn extend(
    a: &FiniteSemigroupoid,
    b: &FiniteSemigroupoid,
    x: ArrowId,
    amap: &mut [ArrowId],
    used: &mut [bool],
    vmap: &mut [VertexId],
    vused: &mut [bool],
) -> bool {
    if x == a.arrow_count() {
        return true;
    }
    for y in 0..b.arrow_count() {
        if used[y] {
            continue;
        }
        let mut undo = Vec::new();
        let ok = bind(vmap, vused, a.src(x), b.src(y), &mut undo) && bind(vmap, vused, a.rng(x), b.rng(y), &mut undo);
        if ok {
            amap[x] = y;
            used[y] = true;
            if consistent(a, b, x, amap) && extend(a, b, x + 1, amap, used, vmap, vused) {
                return true;
            }
            used[y] = false;
            amap[x] = usize::MAX;
        }
        for v in undo {
            vused[vmap[v]] = false;
            vmap[v] = usize::MAX;
        }
    }
    false
}

/// Products among already-assigned arrows agree.
fn consistent(a: &FiniteSemigroupoid, b: &FiniteSemigroupoid, x: ArrowId, amap: &[ArrowId]) -> bool {
    (0..=x).all(|z| {
        [(x, z), (z, x)].iter().all(|&(p, q)| match a.prod(p, q) {
            Some(r) if r <= x => b.prod(amap[p], amap[q]) == Some(amap[r]),
            Some(_) => b.prod(amap[p], amap[q]).is_some(),
            None => b.prod(amap[p], amap[q]).is_none(),
        })
    })
}
