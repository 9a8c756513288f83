//! Construction of the named spin models studied by the diagnostics:
//! the triangular-ladder Heisenberg model with sign defects, two families
//! of sparse diagonal-times-X models, their hard-to-stoquastize variant,
//! the modified Heisenberg model with imaginary single-Z diagonals, and
//! two-local triangle instances.

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm};

/// Named model selector for the CLI front end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelName {
    HeisenbergLadder,
    H1,
    H2,
    HHard,
    TildeHeis,
}

impl std::str::FromStr for ModelName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisenberg_ladder" => Ok(ModelName::HeisenbergLadder),
            "h1" => Ok(ModelName::H1),
            "h2" => Ok(ModelName::H2),
            "h_hard" => Ok(ModelName::HHard),
            "tilde_heis" => Ok(ModelName::TildeHeis),
            other => Err(Error::Invalid(format!("unknown model '{other}'"))),
        }
    }
}

/// Geometry plus named parameters for model construction.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub name: ModelName,
    /// Spin count (ladder models); square-lattice models take it from `lattice`.
    pub n_spins: usize,
    pub lattice: Option<(usize, usize)>,
    /// Number of defect diagonals (ladder) spread over the diagonal slots.
    pub defects: usize,
    pub periodic: bool,
    /// Per-edge or per-site couplings; empty means model defaults.
    pub params: Vec<f64>,
}

impl ModelSpec {
    pub fn build(&self) -> Result<PauliSum> {
        match self.name {
            ModelName::HeisenbergLadder => {
                let geo = LadderGeometry::new(self.n_spins, self.periodic)?;
                let slots = geo.diagonals.len();
                heisenberg_ladder(&geo, &default_defect_slots(slots, self.defects))
            }
            ModelName::H1 => {
                let (w, h) = self.square()?;
                let edges = square_lattice_edges(w, h);
                let j = self.edge_params(edges.len(), 1.0)?;
                h1(w * h, &edges, &j)
            }
            ModelName::H2 => {
                let (w, h) = self.square()?;
                let j = self.site_params(w * h, 1.0)?;
                h2(w * h, &square_lattice_neighbors(w, h), &j)
            }
            ModelName::HHard => {
                let (w, h) = self.square()?;
                let n = w * h;
                let (a, b, c) = if self.params.is_empty() {
                    (vec![1.0; n], vec![0.5; n], vec![0.0; n])
                } else if self.params.len() == 3 {
                    (
                        vec![self.params[0]; n],
                        vec![self.params[1]; n],
                        vec![self.params[2]; n],
                    )
                } else {
                    return Err(Error::Invalid(
                        "h_hard expects 0 or 3 params (a, b, c)".into(),
                    ));
                };
                h_hard(n, &square_lattice_neighbors(w, h), &a, &b, &c)
            }
            ModelName::TildeHeis => {
                let geo = LadderGeometry::new(self.n_spins, self.periodic)?;
                let edges = geo.all_edges();
                let (h0, h1v) = if self.params.is_empty() {
                    (vec![1.0; edges.len()], vec![0.5; edges.len()])
                } else if self.params.len() == 2 {
                    (
                        vec![self.params[0]; edges.len()],
                        vec![self.params[1]; edges.len()],
                    )
                } else {
                    return Err(Error::Invalid(
                        "tilde_heis expects 0 or 2 params (h0, h1)".into(),
                    ));
                };
                tilde_heis(self.n_spins, &edges, &h0, &h1v, None)
            }
        }
    }

    fn square(&self) -> Result<(usize, usize)> {
        self.lattice
            .ok_or_else(|| Error::Invalid("model requires --lattice WxH".into()))
    }

    fn edge_params(&self, n_edges: usize, default: f64) -> Result<Vec<f64>> {
        if self.params.is_empty() {
            Ok(vec![default; n_edges])
        } else if self.params.len() == 1 {
            Ok(vec![self.params[0]; n_edges])
        } else if self.params.len() == n_edges {
            Ok(self.params.clone())
        } else {
            Err(Error::Invalid(format!(
                "expected 1 or {n_edges} couplings, got {}",
                self.params.len()
            )))
        }
    }

    fn site_params(&self, n_sites: usize, default: f64) -> Result<Vec<f64>> {
        if self.params.is_empty() {
            Ok(vec![default; n_sites])
        } else if self.params.len() == 1 {
            Ok(vec![self.params[0]; n_sites])
        } else if self.params.len() == n_sites {
            Ok(self.params.clone())
        } else {
            Err(Error::Invalid(format!(
                "expected 1 or {n_sites} site couplings, got {}",
                self.params.len()
            )))
        }
    }
}

/// Triangular ladder: two legs of N/2 sites, rungs between them, and one
/// diagonal per plaquette, so every consecutive rung pair closes two
/// triangles. Open boundaries by default; `periodic` closes the legs and
/// adds the wrap diagonal.
#[derive(Clone, Debug)]
pub struct LadderGeometry {
    pub n_spins: usize,
    pub rungs: Vec<(usize, usize)>,
    pub legs: Vec<(usize, usize)>,
    /// Defect-eligible diagonal edges, in slot order along the ladder.
    pub diagonals: Vec<(usize, usize)>,
}

impl LadderGeometry {
    pub fn new(n_spins: usize, periodic: bool) -> Result<Self> {
        if n_spins < 4 || n_spins % 2 != 0 {
            return Err(Error::Invalid(format!(
                "ladder needs an even spin count >= 4, got {n_spins}"
            )));
        }
        let l = n_spins / 2;
        let a = |i: usize| i;
        let b = |i: usize| l + i;
        let rungs: Vec<(usize, usize)> = (0..l).map(|i| (a(i), b(i))).collect();
        let mut legs: Vec<(usize, usize)> = (0..l - 1)
            .map(|i| (a(i), a(i + 1)))
            .chain((0..l - 1).map(|i| (b(i), b(i + 1))))
            .collect();
        let mut diagonals: Vec<(usize, usize)> = (0..l - 1).map(|i| (a(i), b(i + 1))).collect();
        if periodic && l > 2 {
            legs.push((a(l - 1), a(0)));
            legs.push((b(l - 1), b(0)));
            diagonals.push((a(l - 1), b(0)));
        }
        Ok(LadderGeometry {
            n_spins,
            rungs,
            legs,
            diagonals,
        })
    }

    pub fn all_edges(&self) -> Vec<(usize, usize)> {
        self.rungs
            .iter()
            .chain(self.legs.iter())
            .chain(self.diagonals.iter())
            .copied()
            .collect()
    }

    /// Edge triples forming triangles (used to cross-check generators).
    pub fn plaquettes(&self) -> Vec<[(usize, usize); 3]> {
        let l = self.n_spins / 2;
        let mut out = Vec::new();
        for i in 0..l - 1 {
            // (A_i, B_i, B_{i+1}) and (A_i, A_{i+1}, B_{i+1})
            out.push([(i, l + i), (l + i, l + i + 1), (i, l + i + 1)]);
            out.push([(i, i + 1), (i + 1, l + i + 1), (i, l + i + 1)]);
        }
        out
    }
}

/// Spread `n_defects` defect slots evenly over the available diagonal slots;
/// a single defect lands in the middle of the ladder.
pub fn default_defect_slots(slots: usize, n_defects: usize) -> Vec<usize> {
    if n_defects == 0 || slots == 0 {
        return Vec::new();
    }
    if n_defects == 1 {
        return vec![slots / 2];
    }
    let mut out: Vec<usize> = (0..n_defects)
        .map(|k| ((k + 1) * slots / (n_defects + 1)).min(slots - 1))
        .collect();
    out.dedup();
    out
}

/// Heisenberg dot product on one edge: c * (X_i X_j + Y_i Y_j + Z_i Z_j).
fn heis_edge(terms: &mut Vec<PauliTerm>, i: usize, j: usize, c: f64) {
    let (bi, bj) = (1u64 << i, 1u64 << j);
    terms.push(PauliTerm {
        coeff: c,
        x_mask: bi | bj,
        z_mask: 0,
    });
    terms.push(PauliTerm {
        coeff: c,
        x_mask: bi | bj,
        z_mask: bi | bj,
    });
    terms.push(PauliTerm {
        coeff: c,
        x_mask: 0,
        z_mask: bi | bj,
    });
}

/// Equal-weight Heisenberg model on the triangular ladder with coefficient
/// -1 on every edge; each diagonal slot listed in `defect_slots` has its
/// coupling flipped to +1 (a coefficient-2 dot product added on top of the
/// base -1).
pub fn heisenberg_ladder(geo: &LadderGeometry, defect_slots: &[usize]) -> Result<PauliSum> {
    for &s in defect_slots {
        if s >= geo.diagonals.len() {
            return Err(Error::Invalid(format!(
                "defect slot {s} out of range (have {} diagonals)",
                geo.diagonals.len()
            )));
        }
    }
    let mut terms = Vec::new();
    for &(i, j) in geo.rungs.iter().chain(geo.legs.iter()) {
        heis_edge(&mut terms, i, j, -1.0);
    }
    for (slot, &(i, j)) in geo.diagonals.iter().enumerate() {
        let c = if defect_slots.contains(&slot) {
            1.0
        } else {
            -1.0
        };
        heis_edge(&mut terms, i, j, c);
    }
    PauliSum::new(geo.n_spins, terms)
}

pub fn square_lattice_edges(w: usize, h: usize) -> Vec<(usize, usize)> {
    let site = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((site(x, y), site(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((site(x, y), site(x, y + 1)));
            }
        }
    }
    edges
}

pub fn square_lattice_neighbors(w: usize, h: usize) -> Vec<Vec<usize>> {
    let n = w * h;
    let mut nbrs = vec![Vec::new(); n];
    for (i, j) in square_lattice_edges(w, h) {
        nbrs[i].push(j);
        nbrs[j].push(i);
    }
    nbrs
}

/// H1 = sum over edges of J_e [(1 + Z_j) X_i + (1 + Z_i) X_j].
pub fn h1(n_spins: usize, edges: &[(usize, usize)], j: &[f64]) -> Result<PauliSum> {
    if j.len() != edges.len() {
        return Err(Error::Invalid(format!(
            "expected {} couplings, got {}",
            edges.len(),
            j.len()
        )));
    }
    let mut terms = Vec::new();
    for (&(a, b), &c) in edges.iter().zip(j.iter()) {
        for (flip, ctrl) in [(a, b), (b, a)] {
            terms.push(PauliTerm {
                coeff: c,
                x_mask: 1 << flip,
                z_mask: 0,
            });
            terms.push(PauliTerm {
                coeff: c,
                x_mask: 1 << flip,
                z_mask: 1 << ctrl,
            });
        }
    }
    PauliSum::new(n_spins, terms)
}

/// H2 = sum over sites of J_i (prod over neighbors Z_j) X_i.
pub fn h2(n_spins: usize, neighbors: &[Vec<usize>], j: &[f64]) -> Result<PauliSum> {
    if j.len() != n_spins || neighbors.len() != n_spins {
        return Err(Error::Invalid("per-site couplings required".into()));
    }
    let mut terms = Vec::new();
    for i in 0..n_spins {
        let mut z_mask = 0u64;
        for &nb in &neighbors[i] {
            z_mask ^= 1 << nb;
        }
        terms.push(PauliTerm {
            coeff: j[i],
            x_mask: 1 << i,
            z_mask,
        });
    }
    PauliSum::new(n_spins, terms)
}

/// Hard-to-stoquastize family: per site, D_i X_i with
/// D_i = a_i + i b_i Z_i + c_i prod over neighbors Z_j.
/// The imaginary single-Z piece lands on a real-coefficient Y string:
/// i b Z_i X_i = -b Y_i.
pub fn h_hard(
    n_spins: usize,
    neighbors: &[Vec<usize>],
    a: &[f64],
    b: &[f64],
    c: &[f64],
) -> Result<PauliSum> {
    if a.len() != n_spins || b.len() != n_spins || c.len() != n_spins {
        return Err(Error::Invalid("per-site a, b, c required".into()));
    }
    let mut terms = Vec::new();
    for i in 0..n_spins {
        let bi = 1u64 << i;
        terms.push(PauliTerm {
            coeff: a[i],
            x_mask: bi,
            z_mask: 0,
        });
        terms.push(PauliTerm {
            coeff: -b[i],
            x_mask: bi,
            z_mask: bi,
        });
        let mut z_mask = 0u64;
        for &nb in &neighbors[i] {
            z_mask ^= 1 << nb;
        }
        terms.push(PauliTerm {
            coeff: c[i],
            x_mask: bi,
            z_mask,
        });
    }
    PauliSum::new(n_spins, terms)
}

/// Modified Heisenberg model: diagonal part plus, per edge,
/// [h0 (Z_i Z_j - 1) + i h1 (Z_i + Z_j)] X_i X_j, expanded into real
/// Pauli strings:
///   h0 (Z_i Z_j - 1) X_i X_j = -h0 (X_i X_j + Y_i Y_j)
///   i h1 (Z_i + Z_j) X_i X_j = -h1 (Y_i X_j + X_i Y_j)
/// The default diagonal is the Heisenberg -sum Z_i Z_j over the same edges;
/// pass `diagonal` to replace it.
pub fn tilde_heis(
    n_spins: usize,
    edges: &[(usize, usize)],
    h0: &[f64],
    h1: &[f64],
    diagonal: Option<&PauliSum>,
) -> Result<PauliSum> {
    if h0.len() != edges.len() || h1.len() != edges.len() {
        return Err(Error::Invalid("per-edge h0, h1 required".into()));
    }
    let mut terms = Vec::new();
    for (e, &(i, j)) in edges.iter().enumerate() {
        let (bi, bj) = (1u64 << i, 1u64 << j);
        terms.push(PauliTerm {
            coeff: -h0[e],
            x_mask: bi | bj,
            z_mask: 0,
        });
        terms.push(PauliTerm {
            coeff: -h0[e],
            x_mask: bi | bj,
            z_mask: bi | bj,
        });
        terms.push(PauliTerm {
            coeff: -h1[e],
            x_mask: bi | bj,
            z_mask: bi,
        });
        terms.push(PauliTerm {
            coeff: -h1[e],
            x_mask: bi | bj,
            z_mask: bj,
        });
    }
    let off = PauliSum::new(n_spins, terms)?;
    match diagonal {
        Some(d) => off.add(d),
        None => {
            let mut diag = Vec::new();
            for &(i, j) in edges {
                diag.push(PauliTerm {
                    coeff: -1.0,
                    x_mask: 0,
                    z_mask: (1 << i) | (1 << j),
                });
            }
            off.add(&PauliSum::new(n_spins, diag)?)
        }
    }
}

/// Per-edge parameters of a two-local diagonal
/// D = h0 + i (h1 Z_i + h2 Z_j) + h3 Z_i Z_j attached to X_i X_j.
#[derive(Clone, Copy, Debug)]
pub struct TwoLocalEdge {
    pub i: usize,
    pub j: usize,
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

/// Sum of D_e X_i X_j terms for two-local edges, expanded to real strings:
///   h0 X X ; i h1 Z_i X_i X_j = -h1 Y_i X_j ; i h2 Z_j -> -h2 X_i Y_j ;
///   h3 Z Z X X = -h3 Y Y.
pub fn two_local_sum(n_spins: usize, edges: &[TwoLocalEdge]) -> Result<PauliSum> {
    let mut terms = Vec::new();
    for e in edges {
        let (bi, bj) = (1u64 << e.i, 1u64 << e.j);
        terms.push(PauliTerm {
            coeff: e.h0,
            x_mask: bi | bj,
            z_mask: 0,
        });
        terms.push(PauliTerm {
            coeff: -e.h1,
            x_mask: bi | bj,
            z_mask: bi,
        });
        terms.push(PauliTerm {
            coeff: -e.h2,
            x_mask: bi | bj,
            z_mask: bj,
        });
        terms.push(PauliTerm {
            coeff: -e.h3,
            x_mask: bi | bj,
            z_mask: bi | bj,
        });
    }
    PauliSum::new(n_spins, terms)
}

/// Three two-local edges on spins {0,1,2} forming a triangle.
pub fn triangle_2local(edges: &[TwoLocalEdge; 3]) -> Result<PauliSum> {
    two_local_sum(3, edges)
}

/// XX-only triangle: H = c (X0X1 + X1X2 + X0X2). Ferromagnetic (c = -1) is
/// sign-free; antiferromagnetic (c = +1) has phase-pi triangles.
pub fn xx_triangle(c: f64) -> PauliSum {
    PauliSum::new(
        3,
        [0b011u64, 0b110u64, 0b101u64].map(|m| PauliTerm {
            coeff: c,
            x_mask: m,
            z_mask: 0,
        }),
    )
    .expect("static model")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::CMatrix;
    use crate::pauli::parse_hamiltonian;
    use num_complex::Complex64;

    fn assert_dense_eq(a: &PauliSum, b: &CMatrix, tol: f64) {
        let d = a.to_dense().unwrap();
        assert_eq!(d.dim(), b.dim());
        for i in 0..d.dim() {
            for j in 0..d.dim() {
                assert!(
                    (d.at(i, j) - b.at(i, j)).norm() <= tol,
                    "({i},{j}): {} vs {}",
                    d.at(i, j),
                    b.at(i, j)
                );
            }
        }
    }

    #[test]
    fn ladder_edge_signs() {
        let geo = LadderGeometry::new(4, false).unwrap();
        let h = heisenberg_ladder(&geo, &[]).unwrap();
        // every edge contributes -XX, -YY, -ZZ
        for t in h.terms() {
            assert_eq!(t.coeff, -1.0);
        }
        // N=4 ladder: 2 rungs + 2 legs + 1 diagonal = 5 edges, 3 strings each
        assert_eq!(h.terms().len(), 15);
    }

    #[test]
    fn defect_flips_diagonal_coupling() {
        let geo = LadderGeometry::new(6, false).unwrap();
        let h = heisenberg_ladder(&geo, &[1]).unwrap();
        let (i, j) = geo.diagonals[1];
        let mask = (1u64 << i) | (1 << j);
        let t = h
            .terms()
            .iter()
            .find(|t| t.x_mask == mask && t.z_mask == 0)
            .unwrap();
        assert_eq!(t.coeff, 1.0);
        let (i0, j0) = geo.diagonals[0];
        let healthy = h
            .terms()
            .iter()
            .find(|t| t.x_mask == ((1 << i0) | (1 << j0)) && t.z_mask == 0)
            .unwrap();
        assert_eq!(healthy.coeff, -1.0);
    }

    #[test]
    fn tilde_heis_single_edge_matches_dense_oracle() {
        // One edge (0,1), h0 = 1, h1 = 0: off-diagonal is -XX - YY
        let h = tilde_heis(2, &[(0, 1)], &[1.0], &[0.0], None).unwrap();
        let want = parse_hamiltonian("N=2\n-1 X0 X1\n-1 Y0 Y1\n-1 Z0 Z1").unwrap();
        assert_dense_eq(&h, &want.to_dense().unwrap(), 1e-15);

        // General h1: dense oracle from the explicit D * XX action
        let (h0v, h1v) = (0.8, 0.6);
        let h = tilde_heis(2, &[(0, 1)], &[h0v], &[h1v], None).unwrap();
        let dim = 4usize;
        let mut want = CMatrix::zeros(dim);
        let zeig = |state: u64, s: u64| if state >> s & 1 == 0 { 1.0 } else { -1.0 };
        for z in 0..dim as u64 {
            let zp = z ^ 0b11;
            // <z'| D XX |z> = D(z') since XX flips first
            let d = Complex64::new(h0v * (zeig(zp, 0) * zeig(zp, 1) - 1.0), 0.0)
                + Complex64::new(0.0, h1v * (zeig(zp, 0) + zeig(zp, 1)));
            want[(zp as usize, z as usize)] += d;
            let idx = z as usize;
            want[(idx, idx)] += Complex64::new(-zeig(z, 0) * zeig(z, 1), 0.0);
        }
        assert_dense_eq(&h, &want, 1e-15);
    }

    #[test]
    fn h_hard_degenerate_reduces_to_transverse_field() {
        let nbrs = square_lattice_neighbors(2, 2);
        let a = [1.0, 2.0, 3.0, 4.0];
        let h = h_hard(4, &nbrs, &a, &[0.0; 4], &[0.0; 4]).unwrap();
        assert_eq!(h.terms().len(), 4);
        for t in h.terms() {
            assert_eq!(t.z_mask, 0);
            assert_eq!(t.x_mask.count_ones(), 1);
            let site = t.x_mask.trailing_zeros() as usize;
            assert_eq!(t.coeff, a[site]);
        }
    }

    #[test]
    fn h_hard_is_hermitian_dense() {
        let nbrs = square_lattice_neighbors(2, 2);
        let h = h_hard(4, &nbrs, &[2.0; 4], &[1.0; 4], &[1.0; 4]).unwrap();
        let d = h.to_dense().unwrap();
        assert!(d.hermiticity_defect() == 0.0);
    }

    #[test]
    fn models_hermitian_for_random_params() {
        let mut rng = crate::numerics::RandomStream::new(31);
        for _ in 0..10 {
            let geo = LadderGeometry::new(6, false).unwrap();
            let edges = geo.all_edges();
            let h0: Vec<f64> = edges.iter().map(|_| rng.uniform_in(0.5, 2.0)).collect();
            let h1: Vec<f64> = edges.iter().map(|_| rng.uniform_in(0.1, 1.0)).collect();
            let h = tilde_heis(6, &edges, &h0, &h1, None).unwrap();
            assert!(h.to_dense().unwrap().hermiticity_defect() < 1e-12);

            let nbrs = square_lattice_neighbors(3, 2);
            let a: Vec<f64> = (0..6).map(|_| rng.normal()).collect();
            let b: Vec<f64> = (0..6).map(|_| rng.normal()).collect();
            let c: Vec<f64> = (0..6).map(|_| rng.normal()).collect();
            let h = h_hard(6, &nbrs, &a, &b, &c).unwrap();
            assert!(h.to_dense().unwrap().hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn plaquette_masks_close() {
        let geo = LadderGeometry::new(8, false).unwrap();
        for tri in geo.plaquettes() {
            let xor = tri
                .iter()
                .fold(0u64, |acc, &(i, j)| acc ^ (1 << i) ^ (1 << j));
            assert_eq!(xor, 0);
        }
    }

    #[test]
    fn defect_slot_spread() {
        assert_eq!(default_defect_slots(5, 1), vec![2]);
        assert_eq!(default_defect_slots(6, 2), vec![2, 4]);
        assert!(default_defect_slots(5, 0).is_empty());
    }
}
