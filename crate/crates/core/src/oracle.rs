//! Dense statevector oracle for small graphs.
//!
//! Qubit `u` is bit `u` of the basis index. Everything here is deliberately
//! naive: it exists to check graphical rules against the quantum semantics.

use crate::equivalence::{CliffordLabel, EquivalenceCertificate};
use crate::error::{GseError, Result};
use crate::glc::{is_r_incident, VertexMultiset};
use crate::graph::Graph;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

/// Default comparison tolerance.
pub const TOL: f64 = 1e-9;

/// Largest order accepted by [`graph_state`].
pub const MAX_QUBITS: usize = 14;

/// A pure state on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(GseError::DimensionMismatch {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        Ok(StateVector { n, amps })
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Projects qubit `a` on `|0⟩` and drops it (no renormalization).
    pub fn project_zero(&self, a: usize) -> StateVector {
        let n = self.n - 1;
        let low = (1usize << a) - 1;
        let amps = (0..1usize << n)
            .map(|y| {
                let x = (y & low) | ((y & !low) << 1);
                self.amps[x]
            })
            .collect();
        StateVector { n, amps }
    }

    pub fn scaled(&self, c: Complex64) -> StateVector {
        StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }
}

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitGate {
    pub m: [[Complex64; 2]; 2],
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl SingleQubitGate {
    pub fn identity() -> Self {
        SingleQubitGate {
            m: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        }
    }

    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        SingleQubitGate {
            m: [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        }
    }

    pub fn pauli_x() -> Self {
        SingleQubitGate {
            m: [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        }
    }

    pub fn pauli_z() -> Self {
        SingleQubitGate::z_rotation(std::f64::consts::PI)
    }

    /// `Z(θ) = diag(1, e^{iθ})`.
    pub fn z_rotation(theta: f64) -> Self {
        SingleQubitGate {
            m: [
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, theta)],
            ],
        }
    }

    /// `X(θ) = H Z(θ) H`.
    pub fn x_rotation(theta: f64) -> Self {
        let h = SingleQubitGate::hadamard();
        h.mul(&SingleQubitGate::z_rotation(theta)).mul(&h)
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn mul(&self, other: &SingleQubitGate) -> Self {
        let mut m = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.m[i][0] * other.m[0][j] + self.m[i][1] * other.m[1][j];
            }
        }
        SingleQubitGate { m }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let a = self.m;
        // Columns orthonormal.
        let n0 = a[0][0].norm_sqr() + a[1][0].norm_sqr();
        let n1 = a[0][1].norm_sqr() + a[1][1].norm_sqr();
        let ip = a[0][0].conj() * a[0][1] + a[1][0].conj() * a[1][1];
        (n0 - 1.0).abs() <= tol && (n1 - 1.0).abs() <= tol && ip.norm() <= tol
    }

    /// The gate named by a Clifford label of the six-case table.
    pub fn from_label(label: CliffordLabel) -> Self {
        let h = SingleQubitGate::hadamard();
        let xh = SingleQubitGate::x_rotation(FRAC_PI_2);
        let zh = SingleQubitGate::z_rotation(FRAC_PI_2);
        match label {
            CliffordLabel::I => SingleQubitGate::identity(),
            CliffordLabel::XHalf => xh,
            CliffordLabel::ZHalf => zh,
            CliffordLabel::H => h,
            CliffordLabel::HXHalf => h.mul(&xh),
            CliffordLabel::HZHalf => h.mul(&zh),
        }
    }
}

fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(GseError::SizeGuard {
            what: "statevector qubits",
            value: n,
            limit,
        })
    } else {
        Ok(())
    }
}

/// `|G⟩`, with amplitude `(−1)^{|G[x]|}/√2ⁿ` at basis index `x`.
pub fn graph_state(g: &Graph) -> Result<StateVector> {
    let n = g.order();
    guard(n, MAX_QUBITS)?;
    let rows: Vec<u64> = (0..n).map(|u| g.neighbors(u).words()[0]).collect();
    let scale = (1u64 << n) as f64;
    let a = 1.0 / scale.sqrt();
    let amps = (0..1u64 << n)
        .map(|x| {
            let twice_edges: u32 = (0..n)
                .filter(|&u| x >> u & 1 == 1)
                .map(|u| (rows[u] & x).count_ones())
                .sum();
            if (twice_edges / 2).is_multiple_of(2) {
                c(a, 0.0)
            } else {
                c(-a, 0.0)
            }
        })
        .collect();
    Ok(StateVector { n, amps })
}

/// Applies `g` to qubit `u`.
pub fn apply_gate(s: &StateVector, u: usize, g: &SingleQubitGate) -> StateVector {
    let mut out = s.clone();
    apply_gate_mut(&mut out, u, g);
    out
}

fn apply_gate_mut(s: &mut StateVector, u: usize, g: &SingleQubitGate) {
    assert!(u < s.n, "qubit {u} out of range");
    let bit = 1usize << u;
    for x in 0..s.amps.len() {
        if x & bit == 0 {
            let a0 = s.amps[x];
            let a1 = s.amps[x | bit];
            s.amps[x] = g.m[0][0] * a0 + g.m[0][1] * a1;
            s.amps[x | bit] = g.m[1][0] * a0 + g.m[1][1] * a1;
        }
    }
}

/// True when `s1 = e^{iφ} s2` within `tol` (max-norm), with the phase fixed
/// by the largest-magnitude amplitude of `s2`.
pub fn equal_up_to_phase(s1: &StateVector, s2: &StateVector, tol: f64) -> bool {
    if s1.n != s2.n {
        return false;
    }
    let (i, _) = s2.amps.iter().enumerate().fold((0, -1.0), |best, (i, a)| {
        if a.norm() > best.1 {
            (i, a.norm())
        } else {
            best
        }
    });
    let denom = s2.amps[i];
    if denom.norm() <= tol {
        return s1.amps.iter().all(|a| a.norm() <= tol);
    }
    let ratio = s1.amps[i] / denom;
    if ratio.norm() <= tol {
        return false;
    }
    let phase = ratio / ratio.norm();
    s1.amps
        .iter()
        .zip(&s2.amps)
        .all(|(a, b)| (a - phase * b).norm() <= tol)
}

/// True when `s = e^{iφ} Z_T |G⟩` for some vertex set `T`, i.e. `s` is `|G⟩`
/// up to a Pauli operator and a global phase.
pub fn equal_up_to_pauli(s: &StateVector, g: &Graph, tol: f64) -> Result<bool> {
    let target = graph_state(g)?;
    if s.n != target.n {
        return Ok(false);
    }
    let n = s.n;
    let ratio = |x: usize| s.amps[x] / target.amps[x];
    let base = ratio(0);
    if (base.norm() - 1.0).abs() > 1e3 * tol {
        return Ok(false);
    }
    let mut t = 0usize;
    for u in 0..n {
        if (ratio(1 << u) + base).norm() < (ratio(1 << u) - base).norm() {
            t |= 1 << u;
        }
    }
    let mut framed = target;
    for x in 0..1usize << n {
        if (x & t).count_ones() % 2 == 1 {
            framed.amps[x] = -framed.amps[x];
        }
    }
    Ok(equal_up_to_phase(s, &framed, tol))
}

/// Applies the local Clifford `X(π/2)_u Z(−π/2)_{N(u)}` implementing `G ⋆ u`.
pub fn apply_lc_unitary(s: &mut StateVector, g: &Graph, u: usize) {
    apply_gate_mut(s, u, &SingleQubitGate::x_rotation(FRAC_PI_2));
    let z = SingleQubitGate::z_rotation(-FRAC_PI_2);
    for v in g.neighbors(u).iter_ones() {
        apply_gate_mut(s, v, &z);
    }
}

/// `⊗_u X(S(u)π/2ʳ) ⊗_v Z(−π/2ʳ Σ_{u∈N(v)} S(u))` applied to `s`.
pub fn apply_rlc_rotations(s: &mut StateVector, g: &Graph, m: &VertexMultiset, r: u32) {
    let unit = std::f64::consts::PI / (1u64 << r) as f64;
    for (u, k) in m.pairs() {
        apply_gate_mut(s, u, &SingleQubitGate::x_rotation(k as f64 * unit));
    }
    for v in 0..g.order() {
        let total: u64 = g.neighbors(v).iter_ones().map(|u| m.get(u)).sum();
        if total != 0 {
            apply_gate_mut(s, v, &SingleQubitGate::z_rotation(-(total as f64) * unit));
        }
    }
}

/// The rotated state of the r-local complementation over `S`, whether or not
/// `S` is r-incident.
pub fn rlc_rotated_state(g: &Graph, m: &VertexMultiset, r: u32) -> Result<StateVector> {
    let mut s = graph_state(g)?;
    apply_rlc_rotations(&mut s, g, m, r);
    Ok(s)
}

/// Checks `|G ⋆ʳ S⟩` against the rotation implementation. Non-incident
/// multisets yield `false`.
pub fn verify_rlc_numeric(g: &Graph, m: &VertexMultiset, r: u32) -> Result<bool> {
    guard(g.order(), MAX_QUBITS)?;
    if !is_r_incident(g, m, r)? {
        return Ok(false);
    }
    let rotated = rlc_rotated_state(g, m, r)?;
    let target = graph_state(&crate::glc::apply_rlc_unchecked(g, m, r))?;
    Ok(equal_up_to_phase(&rotated, &target, TOL))
}

fn run_lc_sequence(s: &mut StateVector, g: &mut Graph, seq: &[usize]) {
    for &u in seq {
        apply_lc_unitary(s, g, u);
        g.local_complement_mut(u);
    }
}

/// Builds the local unitary encoded by a certificate and checks that it maps
/// `|G1⟩` to `|G2⟩` up to a global phase.
///
/// Both sides are pushed to the common middle graph: the left side runs
/// `seq1`, the rotations of the r-local complementation, then `bot_seq`; the
/// right side runs `seq2` on `|G2⟩`.
pub fn verify_certificate_numeric(
    g1: &Graph,
    g2: &Graph,
    cert: &EquivalenceCertificate,
) -> Result<bool> {
    const LIMIT: usize = 12;
    guard(g1.order(), LIMIT)?;
    if g1.order() != g2.order() {
        return Ok(false);
    }
    let mut left = graph_state(g1)?;
    let mut lg = g1.clone();
    run_lc_sequence(&mut left, &mut lg, &cert.seq1);
    if let Some(mv) = &cert.mv {
        if mv.s.len() != lg.order() || !is_r_incident(&lg, &mv.s, mv.r).unwrap_or(false) {
            return Ok(false);
        }
        apply_rlc_rotations(&mut left, &lg, &mv.s, mv.r);
        lg = crate::glc::apply_rlc_unchecked(&lg, &mv.s, mv.r);
    }
    run_lc_sequence(&mut left, &mut lg, &cert.bot_seq);
    let mut right = graph_state(g2)?;
    let mut rg = g2.clone();
    run_lc_sequence(&mut right, &mut rg, &cert.seq2);
    Ok(equal_up_to_phase(&left, &right, TOL))
}

/// Applies the per-vertex Clifford labels of an ABCD solution to `|G1⟩`.
pub fn apply_clifford_labels(g1: &Graph, labels: &[CliffordLabel]) -> Result<StateVector> {
    let mut s = graph_state(g1)?;
    for (u, &l) in labels.iter().enumerate() {
        if l != CliffordLabel::I {
            apply_gate_mut(&mut s, u, &SingleQubitGate::from_label(l));
        }
    }
    Ok(s)
}
