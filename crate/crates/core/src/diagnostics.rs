//! Sign-problem functionals.
//!
//! * `f_stoq`: Frobenius distance of the off-diagonal from entrywise
//!   non-positivity (zero exactly for stoquastic matrices).
//! * `f_vgp`: sum over fundamental cycles of |weight| (1 - cos theta) with
//!   theta = arg((-1)^q weight); zero exactly when every cycle phase
//!   satisfies the sign-free condition. The (-1)^q shift is absorbed into
//!   theta so that "f_vgp = 0 iff sign-free" holds for odd cycles too.
//! * `f_eta`: tr e^{eta |H_off|} - tr e^{-eta H_off}, the trace gap that
//!   vanishes iff the cycle condition holds.
//! * `m_map` / `cal_f`: the bosonized matrix M(X) = |X_off| - diag(X) and
//!   F_H(U) = tr e^{M(U H U^dagger)}; tr e^{-beta H} / tr e^{beta M(H)} is
//!   the exact average sign.
//!
//! Traces split over connected components of the off-diagonal pattern, so
//! sparse models stay affordable well past the naive dense limit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{self, FundamentalCycle, StateGraph};
use crate::numerics::{offdiag_components, submatrix, CMatrix};
use crate::pauli::PauliSum;
use crate::pmr::PmrForm;
use crate::report::JsonBuf;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_ETA: f64 = 1.0;

/// || |H_off| - (-H_off) ||_F: zero iff every off-diagonal entry is real
/// and non-positive.
pub fn f_stoq(h: &CMatrix) -> Result<f64> {
    h.require_hermitian()?;
    let mut acc = 0.0;
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            if i == j {
                continue;
            }
            let v = h.at(i, j);
            let dev = Complex64::new(v.norm() + v.re, v.im);
            acc += dev.norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

/// Same functional evaluated straight off the permutation representation.
pub fn f_stoq_sum(p: &PmrForm) -> f64 {
    let dim: u64 = 1 << p.n_spins();
    let mut acc = 0.0;
    for z in 0..dim {
        for j in 0..p.offdiag().len() {
            let (_, w) = p.edge_weight(j, z);
            if w.norm_sqr() == 0.0 {
                continue;
            }
            let dev = Complex64::new(w.norm() + w.re, w.im);
            acc += dev.norm_sqr();
        }
    }
    acc.sqrt()
}

/// Cycle-phase indicator over an enumerated cycle list; length-2 cycles are
/// excluded (their weights are non-negative by construction).
pub fn f_vgp(cycles: &[FundamentalCycle]) -> f64 {
    cycles
        .iter()
        .filter(|c| c.q() >= 3)
        .map(|c| c.severity())
        .sum()
}

/// M(X) = |X_off| - diag(X).
pub fn m_map(h: &CMatrix) -> Result<CMatrix> {
    h.require_hermitian()?;
    Ok(CMatrix::from_fn(h.dim(), |i, j| {
        if i == j {
            -h.at(i, i)
        } else {
            Complex64::new(h.at(i, j).norm(), 0.0)
        }
    }))
}

fn logsumexp(logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + logs.iter().map(|&l| (l - m).exp()).sum::<f64>().ln()
}

/// log tr e^{scale * A}, splitting over off-diagonal components.
fn log_trace_exp(a: &CMatrix, scale: f64) -> Result<f64> {
    let comps = offdiag_components(a);
    let mut logs = Vec::with_capacity(comps.len());
    for comp in comps {
        if comp.len() == 1 {
            logs.push(scale * a.at(comp[0], comp[0]).re);
        } else {
            let sub = submatrix(a, &comp);
            let (_, log) = sub.trace_exp_log(scale)?;
            logs.push(log);
        }
    }
    Ok(logsumexp(&logs))
}

/// tr e^{eta |H_off|} - tr e^{-eta H_off}; non-negative, zero iff the
/// Hamiltonian is sign-free in this basis.
pub fn f_eta(h: &CMatrix, eta: f64) -> Result<f64> {
    if eta < 0.0 {
        return Err(Error::Invalid(format!("eta must be >= 0, got {eta}")));
    }
    h.require_hermitian()?;
    let off = CMatrix::from_fn(h.dim(), |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else {
            h.at(i, j)
        }
    });
    let comps = offdiag_components(&off);
    let mut acc = 0.0;
    for comp in comps {
        if comp.len() == 1 {
            continue; // e^0 - e^0
        }
        let sub = submatrix(&off, &comp);
        let abs_sub = CMatrix::from_fn(sub.dim(), |i, j| Complex64::new(sub.at(i, j).norm(), 0.0));
        let plus: f64 = abs_sub
            .eigvals()?
            .iter()
            .map(|&l| (eta * l).exp())
            .sum::<f64>();
        let minus: f64 = sub
            .eigvals()?
            .iter()
            .map(|&l| (-eta * l).exp())
            .sum::<f64>();
        acc += plus - minus;
    }
    Ok(acc)
}

/// F_H(U) = tr e^{M(U H U^dagger)}. Rejects non-unitary U.
pub fn cal_f(h: &CMatrix, u: &CMatrix) -> Result<f64> {
    if u.dim() != h.dim() {
        return Err(Error::DimMismatch(format!(
            "U dim {} vs H dim {}",
            u.dim(),
            h.dim()
        )));
    }
    let defect = u.unitarity_defect();
    if defect > 1e-10 {
        return Err(Error::NotUnitary(defect));
    }
    let rotated = h.conjugate_by(u);
    let m = m_map(&rotated)?;
    Ok(log_trace_exp(&m, 1.0)?.exp())
}

/// Exact average sign tr e^{-beta H} / tr e^{beta M(H)}; lies in (0, 1]
/// and equals 1 iff f_eta(H, beta) = 0.
pub fn exact_avg_sign(h: &CMatrix, beta: f64) -> Result<f64> {
    if beta <= 0.0 {
        return Err(Error::Invalid(format!("beta must be > 0, got {beta}")));
    }
    let m = m_map(h)?;
    let log_num = log_trace_exp(h, -beta)?;
    let log_den = log_trace_exp(&m, beta)?;
    Ok((log_num - log_den).exp())
}

// --- permutation-representation paths (no global dense matrix) ---

/// Dense block of the full Hamiltonian restricted to `states`.
fn sub_full(p: &PmrForm, states: &[u64]) -> CMatrix {
    let index: std::collections::HashMap<u64, usize> = states
        .iter()
        .enumerate()
        .map(|(i, &z)| (z, i))
        .collect();
    let mut m = CMatrix::zeros(states.len());
    for (i, &z) in states.iter().enumerate() {
        m[(i, i)] = Complex64::new(p.energy(z), 0.0);
        for j in 0..p.offdiag().len() {
            let (zp, w) = p.edge_weight(j, z);
            if w.norm_sqr() == 0.0 {
                continue;
            }
            if let Some(&t) = index.get(&zp) {
                m[(t, i)] += w;
            }
        }
    }
    m
}

fn block_logs(p: &PmrForm, cap: usize) -> Result<Vec<CMatrix>> {
    let comps = graph::all_components(p, cap)?;
    Ok(comps.iter().map(|g| sub_full(p, g.states())).collect())
}

/// `exact_avg_sign` evaluated blockwise from the permutation form; handles
/// models whose full dense matrix would be too large to build.
pub fn exact_avg_sign_sum(h: &PauliSum, beta: f64, state_cap: usize) -> Result<f64> {
    if beta <= 0.0 {
        return Err(Error::Invalid(format!("beta must be > 0, got {beta}")));
    }
    let p = PmrForm::decompose(h);
    let blocks = block_logs(&p, state_cap)?;
    let mut log_num = Vec::new();
    let mut log_den = Vec::new();
    for b in &blocks {
        log_num.push(if b.dim() == 1 {
            -beta * b.at(0, 0).re
        } else {
            b.trace_exp_log(-beta)?.1
        });
        let m = m_map(b)?;
        log_den.push(if m.dim() == 1 {
            beta * m.at(0, 0).re
        } else {
            m.trace_exp_log(beta)?.1
        });
    }
    Ok((logsumexp(&log_num) - logsumexp(&log_den)).exp())
}

/// `f_eta` evaluated blockwise from the permutation form.
pub fn f_eta_sum(h: &PauliSum, eta: f64, state_cap: usize) -> Result<f64> {
    let p = PmrForm::decompose(h);
    let blocks = block_logs(&p, state_cap)?;
    let mut acc = 0.0;
    for b in &blocks {
        if b.dim() == 1 {
            continue;
        }
        let off = CMatrix::from_fn(b.dim(), |i, j| {
            if i == j {
                Complex64::new(0.0, 0.0)
            } else {
                b.at(i, j)
            }
        });
        let abs_off = CMatrix::from_fn(b.dim(), |i, j| Complex64::new(off.at(i, j).norm(), 0.0));
        let plus: f64 = abs_off
            .eigvals()?
            .iter()
            .map(|&l| (eta * l).exp())
            .sum::<f64>();
        let minus: f64 = off
            .eigvals()?
            .iter()
            .map(|&l| (-eta * l).exp())
            .sum::<f64>();
        acc += plus - minus;
    }
    Ok(acc)
}

/// Outcome of a full cycle scan across every graph component.
#[derive(Clone, Debug)]
pub struct CycleScan {
    pub f_vgp: f64,
    pub witness: Option<FundamentalCycle>,
    pub n_vgp: usize,
    pub n_non_vgp: usize,
    pub cycles_total: usize,
}

/// Enumerate fundamental cycles on every component and fold them into the
/// phase indicator, a worst-offender witness and VGP/non-VGP counts
/// (length >= 3 only; pair cycles are always sign-free).
pub fn cycle_scan(
    p: &PmrForm,
    q_max: usize,
    tol: f64,
    state_cap: usize,
    work_cap: u64,
) -> Result<CycleScan> {
    let comps = graph::all_components(p, state_cap)?;
    let mut scan = CycleScan {
        f_vgp: 0.0,
        witness: None,
        n_vgp: 0,
        n_non_vgp: 0,
        cycles_total: 0,
    };
    for g in &comps {
        if g.len() < 2 {
            continue;
        }
        let cycles = g.enumerate_cycles(q_max, work_cap)?;
        for c in cycles {
            scan.cycles_total += 1;
            if c.q() < 3 {
                continue;
            }
            let sev = c.severity();
            scan.f_vgp += sev;
            if sev <= tol {
                scan.n_vgp += 1;
            } else {
                scan.n_non_vgp += 1;
                let worse = scan
                    .witness
                    .as_ref()
                    .map(|w| sev > w.severity())
                    .unwrap_or(true);
                if worse {
                    scan.witness = Some(c);
                }
            }
        }
    }
    Ok(scan)
}

/// Full diagnostic record for one Hamiltonian.
#[derive(Clone, Debug)]
pub struct DiagnosticReport {
    pub f_stoq: f64,
    pub f_vgp: f64,
    pub f_eta: f64,
    pub eta: f64,
    pub cal_f: f64,
    pub exact_avg_sign: f64,
    pub vgp: bool,
    pub witness: Option<FundamentalCycle>,
}

impl DiagnosticReport {
    pub fn to_json(&self) -> String {
        let mut b = JsonBuf::new();
        b.open();
        b.field_f64("f_stoq", self.f_stoq);
        b.field_f64("f_vgp", self.f_vgp);
        b.field_f64("f_eta", self.f_eta);
        b.field_f64("eta", self.eta);
        b.field_f64("calF", self.cal_f);
        b.field_f64("avg_sign", self.exact_avg_sign);
        b.field_bool("vgp", self.vgp);
        match &self.witness {
            None => b.field_raw("witness", "null"),
            Some(w) => {
                let idx: Vec<String> = w.indices.iter().map(|i| i.to_string()).collect();
                b.field_raw(
                    "witness",
                    &format!(
                        "{{\"start\":{},\"q\":{},\"indices\":[{}],\"weight\":[{},{}]}}",
                        w.start,
                        w.q(),
                        idx.join(","),
                        crate::report::fmt_f64(w.weight.re),
                        crate::report::fmt_f64(w.weight.im),
                    ),
                );
            }
        }
        b.close();
        b.finish()
    }
}

/// Evaluate every functional on one Hamiltonian. The average sign and F_H
/// are reported at beta = 1 (avg_sign = Z(1) / F_H(1)); f_eta uses the
/// passed eta. The verdict is the cycle indicator against `tol`, which by
/// construction agrees with the trace gap.
pub fn diagnose(h: &PauliSum, eta: f64, q_max: usize, tol: f64) -> Result<DiagnosticReport> {
    diagnose_with_caps(h, eta, q_max, tol, 1 << crate::DENSE_CAP, graph::DEFAULT_WORK_CAP)
}

pub fn diagnose_with_caps(
    h: &PauliSum,
    eta: f64,
    q_max: usize,
    tol: f64,
    state_cap: usize,
    work_cap: u64,
) -> Result<DiagnosticReport> {
    if h.n_spins() > crate::DENSE_CAP {
        return Err(Error::SizeGuard {
            what: "diagnostic spins",
            size: h.n_spins(),
            cap: crate::DENSE_CAP,
        });
    }
    let p = PmrForm::decompose(h);
    let scan = cycle_scan(&p, q_max, tol, state_cap, work_cap)?;
    let blocks = block_logs(&p, state_cap)?;
    let mut f_eta_acc = 0.0;
    let mut log_num = Vec::new();
    let mut log_den = Vec::new();
    for b in &blocks {
        log_num.push(if b.dim() == 1 {
            -b.at(0, 0).re
        } else {
            b.trace_exp_log(-1.0)?.1
        });
        let m = m_map(b)?;
        log_den.push(if m.dim() == 1 {
            m.at(0, 0).re
        } else {
            m.trace_exp_log(1.0)?.1
        });
        if b.dim() > 1 {
            let off = CMatrix::from_fn(b.dim(), |i, j| {
                if i == j {
                    Complex64::new(0.0, 0.0)
                } else {
                    b.at(i, j)
                }
            });
            let abs_off =
                CMatrix::from_fn(b.dim(), |i, j| Complex64::new(off.at(i, j).norm(), 0.0));
            let plus: f64 = abs_off
                .eigvals()?
                .iter()
                .map(|&l| (eta * l).exp())
                .sum::<f64>();
            let minus: f64 = off
                .eigvals()?
                .iter()
                .map(|&l| (-eta * l).exp())
                .sum::<f64>();
            f_eta_acc += plus - minus;
        }
    }
    let log_cal_f = logsumexp(&log_den);
    Ok(DiagnosticReport {
        f_stoq: f_stoq_sum(&p),
        f_vgp: scan.f_vgp,
        f_eta: f_eta_acc,
        eta,
        cal_f: log_cal_f.exp(),
        exact_avg_sign: (logsumexp(&log_num) - log_cal_f).exp(),
        vgp: scan.f_vgp <= tol,
        witness: scan.witness,
    })
}

/// Linear least-squares fit returning (slope, intercept, r_squared).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    (slope, intercept, 1.0 - ss_res / ss_tot)
}
