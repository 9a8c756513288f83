//! Permutation matrix representation: H = D_0 + sum_j D_j P_j with each P_j
//! a fixed-point-free permutation (for spin-1/2, an X-flip mask) and each
//! D_j a diagonal operator stored as a polynomial in Z strings.
//!
//! Convention: a Y letter splits as Y = (-i) Z X, so its site contributes
//! the X bit to the permutation mask and a (-i)-weighted Z bit to the
//! diagonal polynomial. Any consistent choice works; this one is pinned by
//! the dense round-trip tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CMatrix;
use crate::pauli::PauliSum;
use crate::DENSE_CAP;

/// Diagonal operator sum_S h_S prod_{l in S} Z_l with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ZPolynomial {
    /// (z_mask, coefficient), masks distinct and sorted.
    terms: Vec<(u64, Complex64)>,
}

impl ZPolynomial {
    pub fn new(terms: impl IntoIterator<Item = (u64, Complex64)>) -> Self {
        use std::collections::BTreeMap;
        let mut merged: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (m, c) in terms {
            *merged.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        ZPolynomial {
            terms: merged
                .into_iter()
                .filter(|(_, c)| c.norm_sqr() != 0.0)
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(u64, Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Union of Z-string supports.
    pub fn support(&self) -> u64 {
        self.terms.iter().fold(0, |acc, (m, _)| acc | m)
    }

    /// Eigenvalue on basis state z: sum_S h_S prod_{l in S} alpha_l with
    /// alpha_l = +1 when bit l of z is 0, else -1.
    pub fn eval(&self, z: u64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(mask, coeff) in &self.terms {
            if (z & mask).count_ones() % 2 == 0 {
                acc += coeff;
            } else {
                acc -= coeff;
            }
        }
        acc
    }
}

/// One off-diagonal entry D_j P_j.
#[derive(Clone, Debug, PartialEq)]
pub struct PmrTerm {
    pub x_mask: u64,
    pub d: ZPolynomial,
}

/// H = D_0 + sum_j D_j P_j.
#[derive(Clone, Debug, PartialEq)]
pub struct PmrForm {
    n_spins: usize,
    d0: ZPolynomial,
    offdiag: Vec<PmrTerm>,
}

impl PmrForm {
    /// Group the Pauli terms of `h` by X-flip mask. Exact: the dense
    /// reconstruction equals `h.to_dense()` entrywise.
    pub fn decompose(h: &PauliSum) -> PmrForm {
        use std::collections::BTreeMap;
        let mut groups: BTreeMap<u64, Vec<(u64, Complex64)>> = BTreeMap::new();
        for t in h.terms() {
            let y_count = (t.x_mask & t.z_mask).count_ones();
            let phase = match y_count % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, -1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, 1.0),
            };
            groups
                .entry(t.x_mask)
                .or_default()
                .push((t.z_mask, phase * t.coeff));
        }
        let mut d0 = ZPolynomial::new([]);
        let mut offdiag = Vec::new();
        for (x_mask, zterms) in groups {
            let d = ZPolynomial::new(zterms);
            if d.is_zero() {
                continue;
            }
            if x_mask == 0 {
                d0 = d;
            } else {
                offdiag.push(PmrTerm { x_mask, d });
            }
        }
        PmrForm {
            n_spins: h.n_spins(),
            d0,
            offdiag,
        }
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn d0(&self) -> &ZPolynomial {
        &self.d0
    }

    pub fn offdiag(&self) -> &[PmrTerm] {
        &self.offdiag
    }

    pub fn x_masks(&self) -> Vec<u64> {
        self.offdiag.iter().map(|t| t.x_mask).collect()
    }

    /// Diagonal energy E_z = <z|D_0|z> (real for Hermitian input).
    pub fn energy(&self, z: u64) -> f64 {
        self.d0.eval(z).re
    }

    /// Apply permutation j to z and evaluate the edge weight
    /// w = <z'|D_j P_j|z> = d_j(z') with z' = z XOR x_mask_j.
    pub fn edge_weight(&self, j: usize, z: u64) -> (u64, Complex64) {
        let term = &self.offdiag[j];
        let zp = z ^ term.x_mask;
        (zp, term.d.eval(zp))
    }

    /// Dense reconstruction D_0 + sum_j D_j P_j.
    pub fn to_dense(&self) -> Result<CMatrix> {
        if self.n_spins > DENSE_CAP {
            return Err(Error::SizeGuard {
                what: "dense matrix spins",
                size: self.n_spins,
                cap: DENSE_CAP,
            });
        }
        let dim = 1usize << self.n_spins;
        let mut m = CMatrix::zeros(dim);
        for z in 0..dim as u64 {
            m[(z as usize, z as usize)] = self.d0.eval(z);
            for j in 0..self.offdiag.len() {
                let (zp, w) = self.edge_weight(j, z);
                m[(zp as usize, z as usize)] += w;
            }
        }
        Ok(m)
    }

    /// JSON dump: {"n": .., "d0": [[mask, re, im], ..],
    ///             "off": [{"p_mask": .., "d": [[mask, re, im], ..]}, ..]}
    pub fn to_json(&self) -> String {
        use crate::report::{fmt_f64, JsonBuf};
        let zpoly = |p: &ZPolynomial| -> String {
            let items: Vec<String> = p
                .terms()
                .iter()
                .map(|(m, c)| format!("[{},{},{}]", m, fmt_f64(c.re), fmt_f64(c.im)))
                .collect();
            format!("[{}]", items.join(","))
        };
        let mut buf = JsonBuf::new();
        buf.open();
        buf.field_raw("n", &self.n_spins.to_string());
        buf.field_raw("d0", &zpoly(&self.d0));
        let offs: Vec<String> = self
            .offdiag
            .iter()
            .map(|t| format!("{{\"p_mask\":{},\"d\":{}}}", t.x_mask, zpoly(&t.d)))
            .collect();
        buf.field_raw("off", &format!("[{}]", offs.join(",")));
        buf.close();
        buf.finish()
    }
}
