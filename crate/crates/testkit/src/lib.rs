//! Brute-force reference implementations for tests.
//!
//! Everything here works on explicit `2^n x 2^n` matrices built
//! independently of the simulator's gate kernels: operators come from
//! Kronecker products and time evolution from a scaling-and-squaring matrix
//! exponential. Slow on purpose; keep `n` small.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qkml::spinsim::SpinSystem;

pub mod qp;

type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Spin-1/2 operator `I_a = sigma_a / 2`.
pub fn spin_op(axis: char) -> CMat {
    let half = 0.5;
    match axis {
        'x' => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(half, 0.0), c(half, 0.0), c(0.0, 0.0)]),
        'y' => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -half), c(0.0, half), c(0.0, 0.0)]),
        'z' => CMat::from_row_slice(2, 2, &[c(half, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-half, 0.0)]),
        _ => panic!("unknown axis {axis}"),
    }
}

/// Single-site operator embedded on spin `mu` of `n`; bit `mu` of the basis
/// index addresses spin `mu`, bit value 0 being the upper component.
pub fn embed(n: usize, ops: &[(usize, CMat)]) -> CMat {
    let eye = CMat::identity(2, 2);
    let mut acc = CMat::identity(1, 1);
    for mu in (0..n).rev() {
        let factor = ops
            .iter()
            .find(|(site, _)| *site == mu)
            .map(|(_, op)| op.clone())
            .unwrap_or_else(|| eye.clone());
        acc = acc.kronecker(&factor);
    }
    acc
}

/// Collective `I_z`.
pub fn collective_iz(n: usize) -> CMat {
    let mut acc = CMat::zeros(1 << n, 1 << n);
    for mu in 0..n {
        acc += embed(n, &[(mu, spin_op('z'))]);
    }
    acc
}

/// Double-quantum pair generator `IyIy - IxIx` on spins `mu`, `nu`.
pub fn dq_generator(n: usize, mu: usize, nu: usize) -> CMat {
    embed(n, &[(mu, spin_op('y')), (nu, spin_op('y'))])
        - embed(n, &[(mu, spin_op('x')), (nu, spin_op('x'))])
}

/// The full input-dependent Hamiltonian
/// `exp(-i x I_z) [sum_{mu<nu} d (IyIy - IxIx)] exp(i x I_z)`.
pub fn hamiltonian(system: &SpinSystem, x: f64) -> CMat {
    let n = system.n();
    let mut h_dq = CMat::zeros(1 << n, 1 << n);
    for (mu, nu, d) in system.pairs() {
        h_dq += dq_generator(n, mu, nu) * c(d, 0.0);
    }
    // Conjugation by a diagonal phase: H'_{zw} = e^{-ix(l_z - l_w)} H_{zw}.
    let mut h = h_dq;
    for z in 0..(1usize << n) {
        for w in 0..(1usize << n) {
            let dl = iz_eigenvalue(n, z) - iz_eigenvalue(n, w);
            let (s, cth) = (-x * dl).sin_cos();
            h[(z, w)] *= c(cth, s);
        }
    }
    h
}

pub fn iz_eigenvalue(n: usize, z: usize) -> f64 {
    n as f64 / 2.0 - z.count_ones() as f64
}

/// `exp(-i H t)` by scaling-and-squaring with a Taylor series.
pub fn expm_neg_i(h: &CMat, t: f64) -> CMat {
    let a = h * c(0.0, -t);
    // 1-norm (max column sum).
    let norm = (0..a.ncols())
        .map(|j| a.column(j).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let b = &a * c(0.5f64.powi(squarings as i32), 0.0);
    let dim = a.nrows();
    let mut term = CMat::identity(dim, dim);
    let mut sum = CMat::identity(dim, dim);
    for k in 1..=25 {
        term = (&term * &b) * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Exact encoding unitary `U(x) = exp(-i H(x_D) tau) ... exp(-i H(x_1) tau)`
/// (no Trotterization).
pub fn encode_unitary(system: &SpinSystem, coords: &[f64], tau: f64) -> CMat {
    let dim = 1usize << system.n();
    let mut u = CMat::identity(dim, dim);
    for &x in coords {
        u = expm_neg_i(&hamiltonian(system, x), tau) * u;
    }
    u
}

/// `U(x)|0>` from the dense unitary.
pub fn encode_state(system: &SpinSystem, coords: &[f64], tau: f64) -> DVector<Complex64> {
    let u = encode_unitary(system, coords, tau);
    u.column(0).into_owned()
}

/// Pure-state kernel from dense unitaries.
pub fn dense_kernel(system: &SpinSystem, tau: f64, xi: &[f64], xj: &[f64]) -> f64 {
    let a = encode_state(system, xi, tau);
    let b = encode_state(system, xj, tau);
    b.dotc(&a).norm_sqr()
}

/// Ensemble trace kernel `Tr(A(xi) A(xj)) / Tr(I_z^2)` from dense operator
/// algebra, with `A(x) = U(x) I_z U(x)^dag`.
pub fn dense_trace_kernel(system: &SpinSystem, tau: f64, xi: &[f64], xj: &[f64]) -> f64 {
    let n = system.n();
    let iz = collective_iz(n);
    let feature = |coords: &[f64]| -> CMat {
        let u = encode_unitary(system, coords, tau);
        &u * &iz * u.adjoint()
    };
    let ai = feature(xi);
    let aj = feature(xj);
    let tr = (&ai * &aj).trace();
    let norm = (1usize << n) as f64 * n as f64 / 4.0;
    tr.re / norm
}
