//! Computational state graph: vertices are basis states, directed edges the
//! nonzero off-diagonal matrix elements, weighted by <z'|D_j P_j|z>.
//! Fundamental cycles are the chordless closed walks on this graph; their
//! weights and phases drive the sign-problem diagnostics.

use num_complex::Complex64;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numerics::gf2_circuits;
use crate::pmr::PmrForm;

#[derive(Clone, Copy, Debug)]
pub struct GraphEdge {
    pub to: u32,
    pub perm: usize,
    pub weight: Complex64,
}

/// One connected component of the state graph, reached from a root state.
/// States are sorted ascending; for every directed edge the reverse edge
/// exists with the conjugate weight.
#[derive(Clone, Debug)]
pub struct StateGraph {
    n_spins: usize,
    states: Vec<u64>,
    index: HashMap<u64, u32>,
    adj: Vec<Vec<GraphEdge>>,
}

/// Chordless closed walk with its weight and shifted phase
/// theta = arg((-1)^q * weight), which vanishes exactly on sign-free cycles.
#[derive(Clone, Debug)]
pub struct FundamentalCycle {
    pub start: u64,
    pub indices: Vec<usize>,
    pub weight: Complex64,
    pub phase: f64,
}

impl FundamentalCycle {
    pub fn q(&self) -> usize {
        self.indices.len()
    }

    /// Contribution |weight| * (1 - cos theta) to the cycle-phase indicator.
    pub fn severity(&self) -> f64 {
        self.weight.norm() * (1.0 - self.phase.cos())
    }

    pub fn csv_row(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        format!(
            "{},{},{},{},{},{}",
            self.start,
            self.q(),
            idx.join(";"),
            crate::report::csv_f64(self.weight.re),
            crate::report::csv_f64(self.weight.im),
            crate::report::csv_f64(self.phase),
        )
    }
}

pub const CYCLE_DUMP_HEADER: &str = "start,q,indices,weight_re,weight_im,phase";

pub fn cycle_phase(q: usize, weight: Complex64) -> f64 {
    let signed = if q % 2 == 0 { weight } else { -weight };
    signed.im.atan2(signed.re)
}

impl StateGraph {
    /// Breadth-first closure of `root` under all permutation masks. Edges
    /// with weight exactly zero are omitted (they break adjacency). Refuses
    /// when the component exceeds `cap` states.
    pub fn build(p: &PmrForm, root: u64, cap: usize) -> Result<StateGraph> {
        if root >> p.n_spins() != 0 {
            return Err(Error::Invalid(format!(
                "root state {root} outside {}-spin space",
                p.n_spins()
            )));
        }
        let mut states = vec![root];
        let mut seen: HashMap<u64, ()> = HashMap::new();
        seen.insert(root, ());
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(z) = queue.pop_front() {
            for j in 0..p.offdiag().len() {
                let (zp, w) = p.edge_weight(j, z);
                if w.norm_sqr() == 0.0 || seen.contains_key(&zp) {
                    continue;
                }
                if states.len() >= cap {
                    return Err(Error::SizeGuard {
                        what: "state-graph component",
                        size: states.len() + 1,
                        cap,
                    });
                }
                seen.insert(zp, ());
                states.push(zp);
                queue.push_back(zp);
            }
        }
        states.sort_unstable();
        let index: HashMap<u64, u32> = states
            .iter()
            .enumerate()
            .map(|(i, &z)| (z, i as u32))
            .collect();
        let mut adj = vec![Vec::new(); states.len()];
        for (i, &z) in states.iter().enumerate() {
            for j in 0..p.offdiag().len() {
                let (zp, w) = p.edge_weight(j, z);
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                if let Some(&t) = index.get(&zp) {
                    adj[i].push(GraphEdge {
                        to: t,
                        perm: j,
                        weight: w,
                    });
                }
            }
        }
        Ok(StateGraph {
            n_spins: p.n_spins(),
            states,
            index,
            adj,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, z: u64) -> bool {
        self.index.contains_key(&z)
    }

    fn adjacent(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].iter().any(|e| e.to == b)
    }

    /// Max over state pairs of the shortest unweighted path length within
    /// this component.
    pub fn diameter(&self) -> usize {
        let n = self.len();
        let mut best = 0usize;
        let mut dist = vec![u32::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            dist.iter_mut().for_each(|d| *d = u32::MAX);
            dist[s] = 0;
            queue.clear();
            queue.push_back(s as u32);
            while let Some(u) = queue.pop_front() {
                for e in &self.adj[u as usize] {
                    if dist[e.to as usize] == u32::MAX {
                        dist[e.to as usize] = dist[u as usize] + 1;
                        queue.push_back(e.to);
                    }
                }
            }
            for &d in &dist {
                if d != u32::MAX {
                    best = best.max(d as usize);
                }
            }
        }
        best
    }

    /// All chordless closed walks of length 2..=q_max, one canonical
    /// representative each (lexicographically smallest start state; the
    /// smaller of the two orientations). Walks revisit no state; repeated
    /// permutation indices are allowed. `work_cap` bounds the DFS steps.
    pub fn enumerate_cycles(&self, q_max: usize, work_cap: u64) -> Result<Vec<FundamentalCycle>> {
        if q_max < 2 {
            return Err(Error::Invalid("q_max must be >= 2".into()));
        }
        let mut out = Vec::new();
        let mut work: u64 = 0;
        let mut visited: Vec<u32> = Vec::new();
        let mut seq: Vec<usize> = Vec::new();
        for s in 0..self.len() as u32 {
            visited.clear();
            visited.push(s);
            seq.clear();
            self.dfs_cycles(
                s,
                s,
                Complex64::new(1.0, 0.0),
                false,
                q_max,
                &mut visited,
                &mut seq,
                &mut out,
                &mut work,
                work_cap,
            )?;
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_cycles(
        &self,
        start: u32,
        at: u32,
        weight: Complex64,
        must_close: bool,
        q_max: usize,
        visited: &mut Vec<u32>,
        seq: &mut Vec<usize>,
        out: &mut Vec<FundamentalCycle>,
        work: &mut u64,
        work_cap: u64,
    ) -> Result<()> {
        for e in &self.adj[at as usize] {
            *work += 1;
            if *work > work_cap {
                return Err(Error::Budget(format!(
                    "cycle enumeration exceeded {work_cap} steps; raise the cap or lower q_max"
                )));
            }
            if e.to == start {
                if seq.len() >= 1 {
                    let q = seq.len() + 1;
                    let w = weight * e.weight;
                    seq.push(e.perm);
                    // canonical orientation: keep the lexicographically
                    // smaller of (seq, reversed seq)
                    let rev: Vec<usize> = seq.iter().rev().copied().collect();
                    if *seq <= rev {
                        out.push(FundamentalCycle {
                            start: self.states[start as usize],
                            indices: seq.clone(),
                            weight: w,
                            phase: cycle_phase(q, w),
                        });
                    }
                    seq.pop();
                }
                continue;
            }
            if must_close || seq.len() + 1 >= q_max {
                continue;
            }
            // only states above the start are explored, making the minimal
            // state the canonical representative
            if e.to <= start || visited.contains(&e.to) {
                continue;
            }
            // chordless: the new state may touch no earlier state except its
            // predecessor; adjacency to the start forces closure next step
            let interior = if visited.len() >= 2 {
                &visited[1..visited.len() - 1]
            } else {
                &visited[0..0]
            };
            if interior.iter().any(|&v| self.adjacent(e.to, v)) {
                continue;
            }
            let touches_start = visited.len() > 1 && self.adjacent(e.to, start);
            visited.push(e.to);
            seq.push(e.perm);
            self.dfs_cycles(
                start,
                e.to,
                weight * e.weight,
                touches_start,
                q_max,
                visited,
                seq,
                out,
                work,
                work_cap,
            )?;
            seq.pop();
            visited.pop();
        }
        Ok(())
    }

    /// Weight of an explicit closed walk from `z`, or None if any edge
    /// vanishes or the walk does not close.
    pub fn walk_weight(&self, p: &PmrForm, z: u64, indices: &[usize]) -> Option<Complex64> {
        let mut cur = z;
        let mut w = Complex64::new(1.0, 0.0);
        for &j in indices {
            let (zp, ew) = p.edge_weight(j, cur);
            if ew.norm_sqr() == 0.0 {
                return None;
            }
            w *= ew;
            cur = zp;
        }
        (cur == z).then_some(w)
    }
}

/// Minimal identity-equivalent permutation multisets for the X-masks of `p`
/// (binary-matroid circuits), including the involution pairs [j, j].
pub fn fundamental_generators(p: &PmrForm, max_len: usize) -> Vec<Vec<usize>> {
    let masks = p.x_masks();
    if masks.is_empty() {
        return Vec::new();
    }
    gf2_circuits(&masks, max_len)
}

/// Build one graph per connected component of the full 2^N state space.
pub fn all_components(p: &PmrForm, cap: usize) -> Result<Vec<StateGraph>> {
    let dim: u64 = 1 << p.n_spins();
    let mut seen = vec![false; dim as usize];
    let mut out = Vec::new();
    for z in 0..dim {
        if seen[z as usize] {
            continue;
        }
        let g = StateGraph::build(p, z, cap)?;
        for &s in g.states() {
            seen[s as usize] = true;
        }
        out.push(g);
    }
    Ok(out)
}

/// Default cycle-length cap: min(2N, 12).
pub fn default_q_max(n_spins: usize) -> usize {
    (2 * n_spins).min(12)
}

pub const DEFAULT_WORK_CAP: u64 = 20_000_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::pauli::parse_hamiltonian;
    use crate::pmr::PmrForm;

    fn graph_of(text: &str, root: u64) -> StateGraph {
        let h = parse_hamiltonian(text).unwrap();
        StateGraph::build(&PmrForm::decompose(&h), root, 1 << 12).unwrap()
    }

    #[test]
    fn single_x_graph() {
        let g = graph_of("N=1\n1.0 X0", 0);
        assert_eq!(g.states(), &[0, 1]);
        assert_eq!(g.adj[0].len(), 1);
        assert_eq!(g.adj[1].len(), 1);
        assert_eq!(g.diameter(), 1);
    }

    #[test]
    fn diagonal_hamiltonian_has_isolated_states() {
        let g = graph_of("N=2\n1.0 Z0 Z1", 0);
        assert_eq!(g.states(), &[0]);
        assert_eq!(g.diameter(), 0);
    }

    #[test]
    fn heisenberg_triangle_component_is_magnetization_sector() {
        // -sum (XX + YY + ZZ) on a 3-site triangle
        let mut terms = Vec::new();
        for (i, j) in [(0usize, 1usize), (1, 2), (0, 2)] {
            let t = models::tilde_heis(3, &[(i, j)], &[1.0], &[0.0], None).unwrap();
            terms.extend(t.terms().iter().copied());
        }
        let h = crate::pauli::PauliSum::new(3, terms).unwrap();
        let p = PmrForm::decompose(&h);
        let g = StateGraph::build(&p, 0b001, 4096).unwrap();
        // brute-force reachability oracle on the dense matrix
        let d = h.to_dense().unwrap();
        let mut reach = vec![false; 8];
        reach[1] = true;
        loop {
            let mut changed = false;
            for a in 0..8 {
                for b in 0..8 {
                    if a != b && reach[a] && !reach[b] && d.at(a, b).norm_sqr() != 0.0 {
                        reach[b] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let want: Vec<u64> = (0..8u64).filter(|&z| reach[z as usize]).collect();
        assert_eq!(g.states(), &want[..]);
        // single-excitation sector of 3 spins
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn two_cycle_weight_is_norm_squared() {
        let g = graph_of("N=1\n-0.7 X0", 0);
        let cycles = g.enumerate_cycles(4, 1 << 20).unwrap();
        assert_eq!(cycles.len(), 1);
        let c = &cycles[0];
        assert_eq!(c.q(), 2);
        assert!((c.weight.re - 0.49).abs() < 1e-15);
        assert!(c.phase.abs() < 1e-12);
    }

    #[test]
    fn ferro_triangle_cycles_are_sign_free() {
        let p = PmrForm::decompose(&models::xx_triangle(-1.0));
        let g = StateGraph::build(&p, 0, 4096).unwrap();
        let cycles = g.enumerate_cycles(6, 1 << 22).unwrap();
        let three: Vec<_> = cycles.iter().filter(|c| c.q() == 3).collect();
        assert!(!three.is_empty());
        for c in three {
            assert!((c.weight.re + 1.0).abs() < 1e-12); // product of three -1 edges
            assert!(c.phase.abs() < 1e-12); // theta = arg(-(-1)) = 0
        }
    }

    #[test]
    fn antiferro_triangle_cycles_violate() {
        let p = PmrForm::decompose(&models::xx_triangle(1.0));
        let g = StateGraph::build(&p, 0, 4096).unwrap();
        let cycles = g.enumerate_cycles(6, 1 << 22).unwrap();
        let three: Vec<_> = cycles.iter().filter(|c| c.q() == 3).collect();
        assert!(!three.is_empty());
        for c in three {
            assert!((c.weight.re - 1.0).abs() < 1e-12);
            assert!((c.phase.abs() - std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn four_cycles_with_repeated_indices_found() {
        // two overlapping XX edges: (0,1) and (1,2); masks 011 and 110.
        let h = parse_hamiltonian("N=3\n1.0 X0 X1\n1.0 X1 X2").unwrap();
        let p = PmrForm::decompose(&h);
        let g = StateGraph::build(&p, 0, 4096).unwrap();
        let cycles = g.enumerate_cycles(6, 1 << 22).unwrap();
        // the (0,1,0,1) walk visits 4 distinct states, chordless
        assert!(
            cycles.iter().any(|c| c.q() == 4),
            "{:?}",
            cycles.iter().map(|c| c.q()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn cycle_mask_closure_invariant() {
        let h = parse_hamiltonian("N=4\n1.0 X0 X1\n0.6 X1 X2\n0.8 X2 X3\n-0.4 X0 Y3\n0.5 Y1")
            .unwrap();
        let p = PmrForm::decompose(&h);
        let masks = p.x_masks();
        let g = StateGraph::build(&p, 0, 4096).unwrap();
        for c in g.enumerate_cycles(8, 1 << 24).unwrap() {
            let xor = c.indices.iter().fold(0u64, |acc, &j| acc ^ masks[j]);
            assert_eq!(xor, 0, "open walk {:?}", c.indices);
            // weight recomputed along the walk agrees
            let w = g.walk_weight(&p, c.start, &c.indices).unwrap();
            assert!((w - c.weight).norm() < 1e-12);
            // reversed orientation conjugates the weight
            let rev: Vec<usize> = c.indices.iter().rev().copied().collect();
            let wr = g.walk_weight(&p, c.start, &rev).unwrap();
            assert!((wr - c.weight.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn concatenation_multiplies_weights() {
        let h = parse_hamiltonian("N=3\n1.0 X0 X1\n0.6 X1 X2\n0.5 Z0\n0.25 Z1 Z2").unwrap();
        let p = PmrForm::decompose(&h);
        let g = StateGraph::build(&p, 0, 4096).unwrap();
        // two identity-equivalent sequences joined at the same state
        let a = [0usize, 0];
        let b = [1usize, 1];
        let joined = [0usize, 0, 1, 1];
        let wa = g.walk_weight(&p, 0, &a).unwrap();
        let wb = g.walk_weight(&p, 0, &b).unwrap();
        let wj = g.walk_weight(&p, 0, &joined).unwrap();
        assert!((wj - wa * wb).norm() < 1e-14);
    }

    #[test]
    fn hypercube_diameter_is_n() {
        for n in 2..=5usize {
            let text = format!(
                "N={}\n{}",
                n,
                (0..n)
                    .map(|i| format!("1.0 X{i}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            let g = graph_of(&text, 0);
            assert_eq!(g.len(), 1 << n);
            assert_eq!(g.diameter(), n);
        }
    }

    #[test]
    fn generators_triangle_and_chain() {
        let p = PmrForm::decompose(&models::xx_triangle(1.0));
        let gens = fundamental_generators(&p, 6);
        assert!(gens.contains(&vec![0, 1, 2]));
        assert_eq!(gens.len(), 4);

        let chain = parse_hamiltonian("N=3\n1.0 X0 X1\n1.0 X1 X2").unwrap();
        let gens = fundamental_generators(&PmrForm::decompose(&chain), 6);
        assert_eq!(gens, vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn ladder_generators_include_every_plaquette() {
        let geo = models::LadderGeometry::new(6, false).unwrap();
        let h = models::heisenberg_ladder(&geo, &[]).unwrap();
        let p = PmrForm::decompose(&h);
        let masks = p.x_masks();
        let gens = fundamental_generators(&p, 6);
        for tri in geo.plaquettes() {
            let tri_masks: Vec<u64> = tri
                .iter()
                .map(|&(i, j)| (1u64 << i) | (1u64 << j))
                .collect();
            let mut idx: Vec<usize> = tri_masks
                .iter()
                .map(|m| masks.iter().position(|x| x == m).unwrap())
                .collect();
            idx.sort_unstable();
            assert!(gens.contains(&idx), "plaquette {idx:?} missing");
        }
    }

    #[test]
    fn component_cap_refusal() {
        let text = format!(
            "N=5\n{}",
            (0..5)
                .map(|i| format!("1.0 X{i}"))
                .collect::<Vec<_>>()
                .join("\n")
        );
        let h = parse_hamiltonian(&text).unwrap();
        let p = PmrForm::decompose(&h);
        match StateGraph::build(&p, 0, 16) {
            Err(Error::SizeGuard { size, cap, .. }) => {
                assert!(size > 16 && cap == 16);
            }
            other => panic!("expected size guard, got {other:?}"),
        }
    }

    #[test]
    fn canonical_representatives_unique() {
        let h = parse_hamiltonian("N=3\n1.0 X0 X1\n0.6 X1 X2\n0.8 X0 X2").unwrap();
        let p = PmrForm::decompose(&h);
        let g = StateGraph::build(&p, 0, 4096).unwrap();
        let cycles = g.enumerate_cycles(6, 1 << 22).unwrap();
        let mut keys: Vec<(u64, Vec<usize>)> = cycles
            .iter()
            .map(|c| (c.start, c.indices.clone()))
            .collect();
        let before = keys.len();
        keys.sort();
        keys.dedup();
        assert_eq!(before, keys.len());
    }
}
