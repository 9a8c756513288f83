//! Dense complex matrices with the eigensolver and factorizations used
//! throughout the crate. Self-contained: cyclic Jacobi for Hermitian
//! eigenproblems (robust and dependency-free at the dimensions we target,
//! <= 4096) and Householder QR for unitary sampling.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-9;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |i, j| self.at(j, i).conj())
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    dst[j] += a * orow[j];
                }
            }
        }
        out
    }

    /// U A U^dagger.
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        u.mul(self).mul(&u.adjoint())
    }

    pub fn add_assign(&mut self, other: &CMatrix) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
    }

    pub fn scale(&mut self, s: Complex64) {
        for a in self.data.iter_mut() {
            *a *= s;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max |A_ij - conj(A_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn require_hermitian(&self) -> Result<()> {
        let dev = self.hermiticity_defect();
        let scale = 1.0 + self.max_abs();
        if dev > HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        Ok(())
    }

    /// ||U^dagger U - I||_F.
    pub fn unitarity_defect(&self) -> f64 {
        let mut prod = self.adjoint().mul(self);
        for i in 0..self.dim {
            prod[(i, i)] -= Complex64::new(1.0, 0.0);
        }
        prod.frob_norm()
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigvals(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let (vals, _) = jacobi(self, false);
        Ok(vals)
    }

    /// Eigenvalues (ascending) and matching eigenvector columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, CMatrix)> {
        self.require_hermitian()?;
        let (vals, vecs) = jacobi(self, true);
        Ok((vals, vecs.expect("vectors requested")))
    }

    /// tr(e^{scale * A}) for Hermitian A. May overflow to +inf; see
    /// `trace_exp_log` for the always-finite form.
    pub fn trace_exp(&self, scale: f64) -> Result<f64> {
        let (value, _) = self.trace_exp_log(scale)?;
        Ok(value)
    }

    /// (tr(e^{scale*A}), ln tr(e^{scale*A})). The log form factors out the
    /// largest eigenvalue, so it stays finite when the plain value overflows.
    pub fn trace_exp_log(&self, scale: f64) -> Result<(f64, f64)> {
        let vals = self.eigvals()?;
        Ok(trace_exp_from_eigvals(&vals, scale))
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

pub fn trace_exp_from_eigvals(vals: &[f64], scale: f64) -> (f64, f64) {
    let m = vals
        .iter()
        .map(|&l| scale * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = vals.iter().map(|&l| (scale * l - m).exp()).sum();
    let log = m + sum.ln();
    (log.exp(), log)
}

/// Cyclic Jacobi with threshold skipping. Returns ascending eigenvalues and
/// optionally the accumulated eigenvector columns.
fn jacobi(a: &CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    let n = a.dim;
    let mut m = a.clone();
    // Symmetrize exactly so rounding in the input cannot bias the sweep.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (m.at(i, j) + m.at(j, i).conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
        let d = m.at(i, i).re;
        m[(i, i)] = Complex64::new(d, 0.0);
    }
    let mut v = want_vectors.then(|| CMatrix::identity(n));

    let frob = m.frob_norm().max(f64::MIN_POSITIVE);
    let stop = 1e-30 * frob * frob;
    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m.at(i, j).norm_sqr();
            }
        }
        if off <= stop {
            break;
        }
        let threshold = (off / (n * n) as f64).sqrt() * 0.1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.at(p, q);
                let mag = apq.norm();
                if mag <= threshold {
                    continue;
                }
                let app = m.at(p, p).re;
                let aqq = m.at(q, q).re;
                let omega = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A' = R^dagger A R with R[p][p]=c, R[p][q]=s*omega,
                // R[q][p]=-s*conj(omega), R[q][q]=c.
                let somega = s * omega;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m.at(k, p);
                    let akq = m.at(k, q);
                    let new_kp = c * akp - somega.conj() * akq;
                    let new_kq = somega * akp + c * akq;
                    m[(k, p)] = new_kp;
                    m[(k, q)] = new_kq;
                    m[(p, k)] = new_kp.conj();
                    m[(q, k)] = new_kq.conj();
                }
                m[(p, p)] = Complex64::new(app - t * mag, 0.0);
                m[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);

                if let Some(vm) = v.as_mut() {
                    for k in 0..n {
                        let vkp = vm.at(k, p);
                        let vkq = vm.at(k, q);
                        vm[(k, p)] = c * vkp - somega.conj() * vkq;
                        vm[(k, q)] = somega * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.at(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vecs = v.map(|vm| {
        let mut sorted = CMatrix::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for k in 0..n {
                sorted[(k, new_col)] = vm.at(k, old_col);
            }
        }
        sorted
    });
    (vals, vecs)
}

/// Householder QR. Returns (Q, diag(R)); Q has orthonormal columns and
/// A = Q R with R upper triangular.
pub fn householder_qr(a: &CMatrix) -> (CMatrix, Vec<Complex64>) {
    let n = a.dim;
    let mut r = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n {
        // Build the reflector annihilating r[k+1.., k].
        let mut norm2: f64 = 0.0;
        for i in k..n {
            norm2 += r.at(i, k).norm_sqr();
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r.at(k, k);
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        // v = x - alpha e1
        let mut v: Vec<Complex64> = (k..n).map(|i| r.at(i, k)).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // r <- (I - beta v v^dagger) r ; q <- q (I - beta v v^dagger)
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, i) in (k..n).enumerate() {
                dot += v[idx].conj() * r.at(i, j);
            }
            dot *= beta;
            for (idx, i) in (k..n).enumerate() {
                let delta = dot * v[idx];
                r[(i, j)] -= delta;
            }
        }
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, j) in (k..n).enumerate() {
                dot += q.at(i, j) * v[idx];
            }
            dot *= beta;
            for (idx, j) in (k..n).enumerate() {
                let delta = dot * v[idx].conj();
                q[(i, j)] -= delta;
            }
        }
    }
    let rdiag: Vec<Complex64> = (0..n).map(|i| r.at(i, i)).collect();
    (q, rdiag)
}

/// Connected components of the nonzero off-diagonal pattern. Each component
/// is a sorted list of row/column indices; traces of matrix functions split
/// over these blocks, which keeps large sparse models affordable.
pub fn offdiag_components(a: &CMatrix) -> Vec<Vec<usize>> {
    let n = a.dim;
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut comp = vec![root];
        seen[root] = true;
        let mut queue = vec![root];
        while let Some(i) = queue.pop() {
            for j in 0..n {
                if !seen[j] && i != j && a.at(i, j).norm_sqr() != 0.0 {
                    seen[j] = true;
                    comp.push(j);
                    queue.push(j);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

pub fn submatrix(a: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), |i, j| a.at(idx[i], idx[j]))
}
