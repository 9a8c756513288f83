//! Pauli-string Hamiltonians on N spin-1/2 sites.
//!
//! A term is a real coefficient times a product of single-site Pauli
//! operators, encoded as an (x_mask, z_mask) pair: bit l set in x_mask means
//! the site carries X or Y, set in z_mask means Z or Y, set in both means Y.
//! Real coefficients on Hermitian strings keep every sum Hermitian by
//! construction.
//!
//! Basis convention, fixed throughout the crate: basis state index z is a
//! binary word with spin 0 as the least significant bit, and bit l = 0 means
//! spin-up, i.e. Z_l eigenvalue +1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CMatrix;
use crate::DENSE_CAP;

/// Per-site Pauli symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

/// One real-weighted Pauli string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub x_mask: u64,
    pub z_mask: u64,
}

impl PauliTerm {
    pub fn letter(&self, site: usize) -> PauliOp {
        match (self.x_mask >> site & 1, self.z_mask >> site & 1) {
            (0, 0) => PauliOp::I,
            (1, 0) => PauliOp::X,
            (1, 1) => PauliOp::Y,
            (0, 1) => PauliOp::Z,
            _ => unreachable!(),
        }
    }

    /// <z'|P|z> for this string with z' = z XOR x_mask, where P is the
    /// Hermitian product of site operators (Y carries its usual +-i
    /// elements). The coefficient is not included.
    pub fn amplitude(&self, z: u64) -> Complex64 {
        let zp = z ^ self.x_mask;
        // Writing P = (-i)^{#Y} (Z-part)(X-part) evaluates the Z-part on
        // z' = z ^ x_mask.
        let y_count = (self.x_mask & self.z_mask).count_ones();
        let minus_ones = (zp & self.z_mask).count_ones();
        let sign = if minus_ones % 2 == 0 { 1.0 } else { -1.0 };
        let phase = match y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        phase * sign
    }
}

/// Hamiltonian as a merged, deduplicated list of Pauli terms.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_spins: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(n_spins: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        if n_spins == 0 || n_spins > 63 {
            return Err(Error::Invalid(format!(
                "n_spins must be in 1..=63, got {n_spins}"
            )));
        }
        let mut sum = PauliSum {
            n_spins,
            terms: Vec::new(),
        };
        for t in terms {
            sum.add_term(t)?;
        }
        sum.normalize();
        Ok(sum)
    }

    pub fn zero(n_spins: usize) -> Self {
        PauliSum::new(n_spins, []).expect("valid spin count")
    }

    fn add_term(&mut self, t: PauliTerm) -> Result<()> {
        if !t.coeff.is_finite() {
            return Err(Error::Invalid("non-finite coefficient".into()));
        }
        let site_bits = (1u64 << self.n_spins) - 1;
        if t.x_mask & !site_bits != 0 || t.z_mask & !site_bits != 0 {
            return Err(Error::Invalid("term touches sites beyond n_spins".into()));
        }
        self.terms.push(t);
        Ok(())
    }

    /// Merge duplicate letter patterns, drop zeros, sort canonically.
    fn normalize(&mut self) {
        use std::collections::HashMap;
        let mut merged: HashMap<(u64, u64), f64> = HashMap::new();
        for t in &self.terms {
            *merged.entry((t.x_mask, t.z_mask)).or_insert(0.0) += t.coeff;
        }
        self.terms = merged
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|((x, z), c)| PauliTerm {
                coeff: c,
                x_mask: x,
                z_mask: z,
            })
            .collect();
        self.terms.sort_by_key(|t| (t.x_mask, t.z_mask));
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_spins != other.n_spins {
            return Err(Error::DimMismatch(format!(
                "{} vs {} spins",
                self.n_spins, other.n_spins
            )));
        }
        PauliSum::new(
            self.n_spins,
            self.terms.iter().chain(other.terms.iter()).copied(),
        )
    }

    /// Dense 2^N x 2^N matrix in the fixed basis ordering.
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
        for t in &self.terms {
            for z in 0..dim as u64 {
                let zp = z ^ t.x_mask;
                m[(zp as usize, z as usize)] += t.coeff * t.amplitude(z);
            }
        }
        Ok(m)
    }

    /// Project a dense Hermitian matrix onto the Pauli basis. Inverse of
    /// `to_dense`; coefficients below `drop_tol` are discarded.
    pub fn from_dense(m: &CMatrix, n_spins: usize, drop_tol: f64) -> Result<PauliSum> {
        if 1usize << n_spins != m.dim() {
            return Err(Error::DimMismatch(format!(
                "matrix dim {} is not 2^{n_spins}",
                m.dim()
            )));
        }
        m.require_hermitian()?;
        let dim = m.dim();
        let mut terms = Vec::new();
        let site_bits = (1u64 << n_spins) - 1;
        for x_mask in 0..=site_bits {
            for z_mask in 0..=site_bits {
                let probe = PauliTerm {
                    coeff: 1.0,
                    x_mask,
                    z_mask,
                };
                // tr(P H) / dim; row z' of P pairs with H[z'][z] at z' = z ^ x.
                let mut acc = Complex64::new(0.0, 0.0);
                for z in 0..dim as u64 {
                    let zp = z ^ x_mask;
                    acc += probe.amplitude(z).conj() * m.at(zp as usize, z as usize);
                }
                let coeff = acc.re / dim as f64;
                if coeff.abs() > drop_tol {
                    terms.push(PauliTerm {
                        coeff,
                        x_mask,
                        z_mask,
                    });
                }
            }
        }
        PauliSum::new(n_spins, terms)
    }

    /// Conjugation by the X-string with the given mask: coefficients of
    /// terms anticommuting with it (odd overlap of the mask with Y/Z
    /// letters) flip sign.
    pub fn conjugate_xstring(&self, mask: u64) -> PauliSum {
        let terms = self.terms.iter().map(|t| {
            let flips = (mask & t.z_mask).count_ones();
            PauliTerm {
                coeff: if flips % 2 == 0 { t.coeff } else { -t.coeff },
                ..*t
            }
        });
        PauliSum::new(self.n_spins, terms).expect("masked conjugation preserves validity")
    }

    /// Conjugation by per-site Z rotations exp(-i alpha_l Z_l / 2), which
    /// maps X -> cos(a) X + sin(a) Y and Y -> cos(a) Y - sin(a) X on site l.
    pub fn conjugate_rz(&self, angles: &[f64]) -> Result<PauliSum> {
        if angles.len() != self.n_spins {
            return Err(Error::DimMismatch(format!(
                "{} angles for {} spins",
                angles.len(),
                self.n_spins
            )));
        }
        let mut terms: Vec<PauliTerm> = Vec::new();
        for t in &self.terms {
            // Expand site by site; each rotated X/Y site doubles the string.
            let mut partial: Vec<PauliTerm> = vec![*t];
            for (site, &a) in angles.iter().enumerate() {
                if a == 0.0 || t.x_mask >> site & 1 == 0 {
                    continue;
                }
                let (c, s) = (a.cos(), a.sin());
                let mut next = Vec::with_capacity(partial.len() * 2);
                for p in partial {
                    let is_y = p.z_mask >> site & 1 == 1;
                    // X -> cX + sY ; Y -> cY - sX
                    next.push(PauliTerm {
                        coeff: p.coeff * c,
                        ..p
                    });
                    next.push(PauliTerm {
                        coeff: p.coeff * if is_y { -s } else { s },
                        x_mask: p.x_mask,
                        z_mask: p.z_mask ^ (1 << site),
                    });
                }
                partial = next;
            }
            terms.extend(partial);
        }
        PauliSum::new(self.n_spins, terms)
    }

    /// Canonical text form (see the module grammar); parse(serialize(h)) is
    /// the identity.
    pub fn serialize(&self) -> String {
        let mut out = format!("N={}\n", self.n_spins);
        for t in &self.terms {
            out.push_str(&format!("{}", t.coeff));
            for site in 0..self.n_spins {
                match t.letter(site) {
                    PauliOp::I => {}
                    op => out.push_str(&format!(" {:?}{}", op, site)),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Conjugate a dense Hermitian matrix by the diagonal unitary
/// diag(e^{i phi_z}): entry (i, j) picks up e^{i (phi_i - phi_j)}.
pub fn conjugate_diagonal(h: &CMatrix, phases: &[f64]) -> Result<CMatrix> {
    if phases.len() != h.dim() {
        return Err(Error::DimMismatch(format!(
            "{} phases for dim {}",
            phases.len(),
            h.dim()
        )));
    }
    Ok(CMatrix::from_fn(h.dim(), |i, j| {
        h.at(i, j) * Complex64::from_polar(1.0, phases[i] - phases[j])
    }))
}

/// Parse the line-oriented Hamiltonian grammar:
///
/// ```text
/// line    := comment | decl | term
/// comment := "#" ...
/// decl    := "N=" integer          (exactly once, first non-comment line)
/// term    := coefficient { " " letter site-index }*
/// letter  := "X" | "Y" | "Z"
/// ```
///
/// A term with no letters is an identity shift. Duplicate letter patterns
/// merge additively.
pub fn parse_hamiltonian(text: &str) -> Result<PauliSum> {
    let mut n_spins: Option<usize> = None;
    let mut terms: Vec<PauliTerm> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if let Some(rest) = s.strip_prefix("N=") {
            if n_spins.is_some() {
                return Err(Error::Parse {
                    line,
                    msg: "duplicate N declaration".into(),
                });
            }
            let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid spin count '{rest}'"),
            })?;
            if n == 0 || n > 63 {
                return Err(Error::Parse {
                    line,
                    msg: format!("spin count {n} out of range 1..=63"),
                });
            }
            n_spins = Some(n);
            continue;
        }
        let n = n_spins.ok_or(Error::Parse {
            line,
            msg: "term before N declaration".into(),
        })?;
        let mut tokens = s.split_whitespace();
        let coeff_tok = tokens.next().expect("nonempty line");
        let coeff: f64 = coeff_tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid real coefficient '{coeff_tok}'"),
        })?;
        if !coeff.is_finite() {
            return Err(Error::Parse {
                line,
                msg: format!("non-finite coefficient '{coeff_tok}'"),
            });
        }
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        let mut seen = 0u64;
        for tok in tokens {
            if tok.len() < 2 || !tok.is_char_boundary(1) {
                return Err(Error::Parse {
                    line,
                    msg: format!("malformed token '{tok}'"),
                });
            }
            let (letter, idx_str) = tok.split_at(1);
            let site: usize = idx_str.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid site index in '{tok}'"),
            })?;
            if site >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("site index out of range: {site} >= N={n}"),
                });
            }
            if seen >> site & 1 == 1 {
                return Err(Error::Parse {
                    line,
                    msg: format!("site {site} repeated within a term"),
                });
            }
            seen |= 1 << site;
            match letter {
                "X" => x_mask |= 1 << site,
                "Y" => {
                    x_mask |= 1 << site;
                    z_mask |= 1 << site;
                }
                "Z" => z_mask |= 1 << site,
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("malformed token '{tok}' (letter must be X, Y or Z)"),
                    })
                }
            }
        }
        terms.push(PauliTerm {
            coeff,
            x_mask,
            z_mask,
        });
    }
    let n = n_spins.ok_or(Error::Parse {
        line: 0,
        msg: "missing N declaration".into(),
    })?;
    PauliSum::new(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent dense oracle built from explicit 2x2 Kronecker factors.
    fn kron_oracle(h: &PauliSum) -> CMatrix {
        let n = h.n_spins();
        let dim = 1usize << n;
        let single = |op: PauliOp| -> [[Complex64; 2]; 2] {
            let z = |re: f64, im: f64| Complex64::new(re, im);
            match op {
                PauliOp::I => [[z(1., 0.), z(0., 0.)], [z(0., 0.), z(1., 0.)]],
                PauliOp::X => [[z(0., 0.), z(1., 0.)], [z(1., 0.), z(0., 0.)]],
                PauliOp::Y => [[z(0., 0.), z(0., -1.)], [z(0., 1.), z(0., 0.)]],
                PauliOp::Z => [[z(1., 0.), z(0., 0.)], [z(0., 0.), z(-1., 0.)]],
            }
        };
        let mut out = CMatrix::zeros(dim);
        for t in h.terms() {
            for row in 0..dim {
                for col in 0..dim {
                    let mut amp = Complex64::new(t.coeff, 0.0);
                    for site in 0..n {
                        let m = single(t.letter(site));
                        amp *= m[row >> site & 1][col >> site & 1];
                        if amp.norm_sqr() == 0.0 {
                            break;
                        }
                    }
                    out[(row, col)] += amp;
                }
            }
        }
        out
    }

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        assert_eq!(a.dim(), b.dim());
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                assert!(
                    (a.at(i, j) - b.at(i, j)).norm() <= tol,
                    "entry ({i},{j}): {} vs {}",
                    a.at(i, j),
                    b.at(i, j)
                );
            }
        }
    }

    #[test]
    fn parse_basic() {
        let h = parse_hamiltonian("N=2\n-1.0 X0 X1").unwrap();
        assert_eq!(h.n_spins(), 2);
        assert_eq!(h.terms().len(), 1);
        let t = h.terms()[0];
        assert_eq!(t.coeff, -1.0);
        assert_eq!((t.letter(0), t.letter(1)), (PauliOp::X, PauliOp::X));
    }

    #[test]
    fn parse_merges_duplicates() {
        let h = parse_hamiltonian("N=1\n0.5 Y0\n0.5 Y0").unwrap();
        assert_eq!(h.terms().len(), 1);
        assert_eq!(h.terms()[0].coeff, 1.0);
        assert_eq!(h.terms()[0].letter(0), PauliOp::Y);
    }

    #[test]
    fn parse_rejects_out_of_range_site() {
        let err = parse_hamiltonian("N=2\n1.0 X0 X5").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("out of range"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicate_decl_and_bad_coeff() {
        assert!(matches!(
            parse_hamiltonian("N=2\nN=3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_hamiltonian("N=2\n1+2i X0"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn serialize_roundtrip_fixed_point() {
        let h = parse_hamiltonian("N=3\n# comment\n0.25 Z2\n-1 X0 Y1\n0.125\n").unwrap();
        let s1 = h.serialize();
        let h2 = parse_hamiltonian(&s1).unwrap();
        assert_eq!(h, h2);
        assert_eq!(s1, h2.serialize());
    }

    #[test]
    fn dense_single_site_examples() {
        let z0 = parse_hamiltonian("N=1\n1.0 Z0")
            .unwrap()
            .to_dense()
            .unwrap();
        assert_eq!(z0.at(0, 0).re, 1.0);
        assert_eq!(z0.at(1, 1).re, -1.0);
        let x0 = parse_hamiltonian("N=1\n1.0 X0")
            .unwrap()
            .to_dense()
            .unwrap();
        assert_eq!(x0.at(0, 1).re, 1.0);
        assert_eq!(x0.at(1, 0).re, 1.0);
    }

    #[test]
    fn dense_matches_kron_oracle() {
        let h = parse_hamiltonian("N=2\n1.0 X0 X1").unwrap();
        let d = h.to_dense().unwrap();
        assert_close(&d, &kron_oracle(&h), 0.0);
        // anti-diagonal ones
        for (i, j) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
            assert_eq!(d.at(i, j).re, 1.0);
        }
        let mixed =
            parse_hamiltonian("N=3\n0.7 Y0 Z1\n-0.3 X1 Y2\n1.1 Z0 Z2\n0.4 Y0 Y1 Y2").unwrap();
        assert_close(&mixed.to_dense().unwrap(), &kron_oracle(&mixed), 1e-15);
    }

    #[test]
    fn from_dense_inverts_to_dense() {
        let h = parse_hamiltonian("N=3\n0.7 Y0 Z1\n-0.3 X1 Y2\n1.1 Z0 Z2\n0.2").unwrap();
        let d = h.to_dense().unwrap();
        let back = PauliSum::from_dense(&d, 3, 1e-12).unwrap();
        assert_eq!(h.terms().len(), back.terms().len());
        for (a, b) in h.terms().iter().zip(back.terms().iter()) {
            assert_eq!((a.x_mask, a.z_mask), (b.x_mask, b.z_mask));
            assert!((a.coeff - b.coeff).abs() < 1e-12);
        }
    }

    #[test]
    fn xstring_conjugation_examples() {
        let h = parse_hamiltonian("N=1\n1.0 Z0").unwrap();
        let c = h.conjugate_xstring(1);
        assert_eq!(c.terms()[0].coeff, -1.0);
        let hx = parse_hamiltonian("N=1\n1.0 X0").unwrap();
        assert_eq!(hx.conjugate_xstring(1), hx);
        let h2 = parse_hamiltonian("N=3\n0.7 Y0 Z1\n-0.3 X1 Y2").unwrap();
        assert_eq!(h2.conjugate_xstring(0), h2);
        // involution
        assert_eq!(h2.conjugate_xstring(0b101).conjugate_xstring(0b101), h2);
    }

    #[test]
    fn diagonal_conjugation_preserves_magnitudes_and_spectrum() {
        let h = parse_hamiltonian("N=2\n1.0 X0\n0.5 Y1\n0.25 Z0 Z1").unwrap();
        let d = h.to_dense().unwrap();
        let phases: Vec<f64> = (0..4).map(|i| 0.37 * (i * i) as f64).collect();
        let c = conjugate_diagonal(&d, &phases).unwrap();
        for i in 0..4 {
            assert_eq!(c.at(i, i), d.at(i, i));
            for j in 0..4 {
                assert!((c.at(i, j).norm() - d.at(i, j).norm()).abs() < 1e-14);
            }
        }
        let ev_a = d.eigvals().unwrap();
        let ev_b = c.eigvals().unwrap();
        for (a, b) in ev_a.iter().zip(ev_b.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
        // identity phases leave H untouched
        let same = conjugate_diagonal(&d, &[0.0; 4]).unwrap();
        assert_close(&same, &d, 0.0);
        // 1-qubit X with phases (0, pi) -> -X
        let x = parse_hamiltonian("N=1\n1.0 X0")
            .unwrap()
            .to_dense()
            .unwrap();
        let minus_x = conjugate_diagonal(&x, &[0.0, std::f64::consts::PI]).unwrap();
        assert!((minus_x.at(0, 1).re + 1.0).abs() < 1e-15);
        assert!((minus_x.at(1, 0).re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rz_conjugation_matches_dense() {
        let h = parse_hamiltonian("N=2\n1.0 X0 X1\n0.5 Z0\n-0.7 Y0").unwrap();
        let angles = [0.4, -1.1];
        let rotated = h.conjugate_rz(&angles).unwrap();
        // dense oracle: U = prod exp(-i a Z/2)
        let dim = 4;
        let mut u = CMatrix::zeros(dim);
        for z in 0..dim as u64 {
            let mut phi = 0.0;
            for (site, a) in angles.iter().enumerate() {
                let zeig = if z >> site & 1 == 0 { 1.0 } else { -1.0 };
                phi += -0.5 * a * zeig;
            }
            u[(z as usize, z as usize)] = Complex64::from_polar(1.0, phi);
        }
        let want = h.to_dense().unwrap().conjugate_by(&u);
        assert_close(&rotated.to_dense().unwrap(), &want, 1e-14);
    }
}
