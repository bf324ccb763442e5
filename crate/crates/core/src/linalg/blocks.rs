//! Decoupled index blocks of a square matrix.
//!
//! Two indices share a block when they are linked through nonzero entries in
//! either direction. After a permutation the matrix is block diagonal, so
//! exponentials, inverses, spectra and singular values factor over blocks.

use super::matrix::CMat;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    n: usize,
    groups: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Blocks {
    pub fn of<T: Real>(a: &CMat<T>) -> Self {
        assert!(a.is_square(), "block analysis needs a square matrix");
        let n = a.rows();
        let mut parent: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for (j, z) in a.row(i).iter().enumerate() {
                if i != j && (z.re != T::zero() || z.im != T::zero()) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut slot = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }
        Self { n, groups }
    }

    /// One block spanning everything.
    pub fn whole(n: usize) -> Self {
        Self {
            n,
            groups: vec![(0..n).collect()],
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.len() <= 1
    }

    pub fn largest(&self) -> usize {
        self.groups.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Original indices in block-concatenated order.
    pub fn order(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }

    pub fn split<T: Real>(&self, a: &CMat<T>) -> Vec<CMat<T>> {
        self.groups.iter().map(|g| a.principal(g)).collect()
    }

    /// Scatters per-block matrices back into original indexing.
    pub fn assemble<T: Real>(&self, blocks: &[CMat<T>]) -> CMat<T> {
        let mut out = CMat::zeros(self.n, self.n);
        for (g, b) in self.groups.iter().zip(blocks) {
            for (r, &i) in g.iter().enumerate() {
                for (c, &j) in g.iter().enumerate() {
                    out[(i, j)] = b[(r, c)];
                }
            }
        }
        out
    }
}
