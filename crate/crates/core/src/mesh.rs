//! Uniform time meshes and the sample paths living on them.

use crate::error::{config, Result};

/// Uniform grid `t_j = t0 + j * dt`, `j = 0..=n`, on `[t0, tf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeMesh {
    t0: f64,
    tf: f64,
    n: usize,
    dt: f64,
}

impl TimeMesh {
    pub fn new(t0: f64, tf: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return config("mesh needs at least one step (n = 0)");
        }
        if !(t0.is_finite() && tf.is_finite()) || tf <= t0 {
            return config(format!("mesh interval [{t0}, {tf}] is empty or not finite"));
        }
        Ok(Self {
            t0,
            tf,
            n,
            dt: (tf - t0) / n as f64,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn tf(&self) -> f64 {
        self.tf
    }

    /// Number of steps `N`; the mesh has `N + 1` nodes.
    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Node `j`, computed by multiplication so it does not depend on traversal order.
    /// The last node is pinned to `tf`.
    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        debug_assert!(j <= self.n);
        if j == self.n {
            self.tf
        } else {
            self.t0 + j as f64 * self.dt
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n + 1).map(move |j| self.node(j))
    }

    /// The mesh with `n / factor` steps over the same interval.
    pub fn coarsened(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.n.is_multiple_of(factor) {
            return config(format!(
                "coarsening factor {factor} does not divide mesh steps {}",
                self.n
            ));
        }
        Self::new(self.t0, self.tf, self.n / factor)
    }
}

/// Convenience constructor mirroring [`TimeMesh::new`].
pub fn make_mesh(t0: f64, tf: f64, n: usize) -> Result<TimeMesh> {
    TimeMesh::new(t0, tf, n)
}

/// Values of a `dim`-dimensional process at every node of a mesh, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    mesh: TimeMesh,
    dim: usize,
    values: Vec<f64>,
}

impl SamplePath {
    /// Builds a path from row-major values (`mesh.len()` rows of `dim` entries).
    pub fn new(mesh: TimeMesh, dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return config("path dimension must be positive");
        }
        if values.len() != mesh.len() * dim {
            return config(format!(
                "path has {} values, expected {} nodes x {dim}",
                values.len(),
                mesh.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return config("path contains non-finite values");
        }
        Ok(Self { mesh, dim, values })
    }

    /// Scalar path from one value per node.
    pub fn scalar(mesh: TimeMesh, values: Vec<f64>) -> Result<Self> {
        Self::new(mesh, 1, values)
    }

    pub(crate) fn from_parts_unchecked(mesh: TimeMesh, dim: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), mesh.len() * dim);
        Self { mesh, dim, values }
    }

    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.mesh.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.dim..(j + 1) * self.dim]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    /// Component `c` as a scalar series.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.rows().map(|r| r[c]).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Subsamples every `factor`-th node; no interpolation is performed.
    pub fn coarsen(&self, factor: usize) -> Result<SamplePath> {
        let mesh = self.mesh.coarsened(factor)?;
        let mut values = Vec::with_capacity(mesh.len() * self.dim);
        for j in 0..mesh.len() {
            values.extend_from_slice(self.row(j * factor));
        }
        Ok(Self::from_parts_unchecked(mesh, self.dim, values))
    }

    /// Applies `f` to each row, producing a path of dimension `dim`.
    pub fn map_rows(&self, dim: usize, mut f: impl FnMut(&[f64], &mut [f64])) -> SamplePath {
        let mut values = vec![0.0; self.len() * dim];
        for (src, dst) in self.rows().zip(values.chunks_exact_mut(dim)) {
            f(src, dst);
        }
        Self::from_parts_unchecked(self.mesh, dim, values)
    }

    /// Stacks scalar or vector paths on the same mesh into one path.
    pub fn stack(paths: &[SamplePath]) -> Result<SamplePath> {
        let Some(first) = paths.first() else {
            return config("cannot stack an empty list of paths");
        };
        if paths.iter().any(|p| p.mesh != first.mesh) {
            return config("stacked paths must share a mesh");
        }
        let dim: usize = paths.iter().map(|p| p.dim).sum();
        let mut values = Vec::with_capacity(first.len() * dim);
        for j in 0..first.len() {
            for p in paths {
                values.extend_from_slice(p.row(j));
            }
        }
        Ok(Self::from_parts_unchecked(first.mesh, dim, values))
    }
}

/// Subsamples `path` by `factor`; see [`SamplePath::coarsen`].
pub fn coarsen(path: &SamplePath, factor: usize) -> Result<SamplePath> {
    path.coarsen(factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quarter_mesh_nodes() {
        let m = make_mesh(0.0, 1.0, 4).unwrap();
        let nodes: Vec<f64> = m.nodes().collect();
        assert_eq!(nodes, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn table_step_sizes() {
        assert_eq!(make_mesh(0.0, 1.0, 16).unwrap().dt(), 0.0625);
        assert_eq!(make_mesh(0.0, 2.0, 512).unwrap().dt(), 0.00390625);
    }

    #[test]
    fn rejects_bad_meshes() {
        assert!(matches!(make_mesh(0.0, 1.0, 0), Err(crate::Error::Config(_))));
        assert!(make_mesh(1.0, 1.0, 4).is_err());
        assert!(make_mesh(2.0, 1.0, 4).is_err());
        assert!(make_mesh(0.0, f64::NAN, 4).is_err());
    }

    #[test]
    fn coarsen_subsamples() {
        let m = make_mesh(0.0, 1.0, 4).unwrap();
        let p = SamplePath::scalar(m, vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let c = coarsen(&p, 2).unwrap();
        assert_eq!(c.values(), &[1.0, 3.0, 5.0]);
        assert_eq!(c.mesh().tf(), 1.0);
        assert_eq!(coarsen(&p, 1).unwrap(), p);
        assert!(coarsen(&p, 3).is_err());
        assert!(coarsen(&p, 0).is_err());
    }

    #[test]
    fn coarsen_large_factor_matches_loop() {
        let m = make_mesh(0.0, 1.0, 65536).unwrap();
        let vals: Vec<f64> = (0..=65536).map(|j| (j as f64).sqrt()).collect();
        let p = SamplePath::scalar(m, vals.clone()).unwrap();
        let c = coarsen(&p, 4096).unwrap();
        assert_eq!(c.mesh().steps(), 16);
        let mut expected = Vec::new();
        let mut idx = 0;
        while idx < vals.len() {
            expected.push(vals[idx]);
            idx += 4096;
        }
        assert_eq!(c.values(), expected.as_slice());
    }

    #[test]
    fn stack_interleaves_rows() {
        let m = make_mesh(0.0, 1.0, 2).unwrap();
        let a = SamplePath::scalar(m, vec![1.0, 2.0, 3.0]).unwrap();
        let b = SamplePath::new(m, 2, vec![10.0, 11.0, 20.0, 21.0, 30.0, 31.0]).unwrap();
        let s = SamplePath::stack(&[a, b]).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.row(1), &[2.0, 20.0, 21.0]);
    }

    #[test]
    fn rejects_inconsistent_paths() {
        let m = make_mesh(0.0, 1.0, 2).unwrap();
        assert!(SamplePath::scalar(m, vec![1.0, 2.0]).is_err());
        assert!(SamplePath::scalar(m, vec![1.0, f64::INFINITY, 2.0]).is_err());
    }

    fn ulps_apart(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    proptest! {
        #[test]
        fn node_spacing_is_dt(t0 in -10.0f64..10.0, len in 0.01f64..100.0, n in 1usize..5000) {
            let m = make_mesh(t0, t0 + len, n).unwrap();
            prop_assert_eq!(m.node(0), t0);
            prop_assert!(ulps_apart(m.node(n), t0 + len) == 0);
            for j in 0..n {
                let gap = m.node(j + 1) - m.node(j);
                prop_assert!(gap > 0.0);
                // the subtraction of nodes of size |t0|+len loses bits relative to dt
                let scale = (t0.abs() + len) / m.dt();
                prop_assert!((gap - m.dt()).abs() <= 4.0 * f64::EPSILON * m.dt() * scale.max(1.0));
            }
        }

        #[test]
        fn coarsen_composes(a_exp in 0u32..4, b_exp in 0u32..4, extra in 0u32..3) {
            let a = 1usize << a_exp;
            let b = 1usize << b_exp;
            let n = a * b * (1 << extra);
            let m = make_mesh(0.0, 1.0, n).unwrap();
            let p = SamplePath::scalar(m, (0..=n).map(|j| j as f64 * 0.5).collect()).unwrap();
            let twice = p.coarsen(a).unwrap().coarsen(b).unwrap();
            prop_assert_eq!(twice, p.coarsen(a * b).unwrap());
        }
    }
}
