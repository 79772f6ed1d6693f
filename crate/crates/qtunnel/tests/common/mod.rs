//! Test-local dense oracle, independent of the library's QFT ladder, gate
//! kernel, and eigendecomposition paths: the plain DFT from its defining
//! formula, the bit-reversed kinetic diagonal, and a scaled Taylor-series
//! matrix exponential.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

pub type M = DMatrix<Complex64>;

pub fn bitrev(n: usize) -> Vec<usize> {
    (0..1usize << n)
        .map(|k| {
            let mut r = 0;
            for b in 0..n {
                if k >> b & 1 == 1 {
                    r |= 1 << (n - 1 - b);
                }
            }
            r
        })
        .collect()
}

pub fn momentum(n: usize, literal: bool) -> Vec<f64> {
    let sites = 1usize << n;
    let step = 2.0 * PI / sites as f64;
    (0..sites)
        .map(|j| {
            if j <= sites / 2 {
                step * j as f64
            } else if literal {
                step * (sites as f64 / 2.0 - j as f64)
            } else {
                step * (j as f64 - sites as f64)
            }
        })
        .collect()
}

/// Plain DFT: entries 2^{-n/2} e^{2 pi i j k / 2^n}.
pub fn plain_dft(n: usize) -> M {
    let sites = 1usize << n;
    let scale = 1.0 / (sites as f64).sqrt();
    M::from_fn(sites, sites, |j, k| {
        Complex64::from_polar(scale, 2.0 * PI * (j * k) as f64 / sites as f64)
    })
}

pub fn diagonal(entries: &[Complex64]) -> M {
    let dim = entries.len();
    M::from_fn(dim, dim, |r, c| {
        if r == c {
            entries[r]
        } else {
            Complex64::ZERO
        }
    })
}

/// Bit-reversed kinetic phases: entry k = exp(-i p_{rev(k)}^2 dt / (2m)).
pub fn kinetic_phases(n: usize, dt: f64, mass: f64, literal: bool) -> Vec<Complex64> {
    let p = momentum(n, literal);
    let rev = bitrev(n);
    (0..1usize << n)
        .map(|k| Complex64::from_polar(1.0, -p[rev[k]] * p[rev[k]] * dt / (2.0 * mass)))
        .collect()
}

/// One split step: F^-1 (bit-reversed kinetic diag) F [potential phases].
pub fn step_matrix(n: usize, dt: f64, mass: f64, values: &[f64], with_potential: bool) -> M {
    let f = plain_dft(n);
    let d = diagonal(&kinetic_phases(n, dt, mass, false));
    let kinetic = f.adjoint() * d * f;
    if !with_potential {
        return kinetic;
    }
    let q: Vec<Complex64> = values
        .iter()
        .map(|v| Complex64::from_polar(1.0, -v * dt))
        .collect();
    kinetic * diagonal(&q)
}

/// Lattice Hamiltonian with the same kinetic operator as the step.
pub fn hamiltonian(n: usize, values: &[f64], mass: f64) -> M {
    let f = plain_dft(n);
    let p = momentum(n, false);
    let rev = bitrev(n);
    let p2: Vec<Complex64> = (0..1usize << n)
        .map(|k| Complex64::new(p[rev[k]] * p[rev[k]] / (2.0 * mass), 0.0))
        .collect();
    let mut h = f.adjoint() * diagonal(&p2) * f;
    for (k, v) in values.iter().enumerate() {
        h[(k, k)] += Complex64::new(*v, 0.0);
    }
    h
}

/// exp(-i h t) by scaling and a plain Taylor series; no eigensolver.
pub fn expm_taylor(h: &M, t: f64) -> M {
    let dim = h.nrows();
    let m = h.map(|z| z * Complex64::new(0.0, -t));
    let norm: f64 = (0..dim)
        .map(|r| (0..dim).map(|c| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let scalings = norm.log2().ceil().max(0.0) as u32 + 2;
    let scaled = m.map(|z| z / 2f64.powi(scalings as i32));

    let mut result = M::identity(dim, dim);
    let mut term = M::identity(dim, dim);
    for j in 1..=24 {
        term = &term * &scaled / Complex64::new(j as f64, 0.0);
        result += &term;
    }
    for _ in 0..scalings {
        result = &result * &result;
    }
    result
}

pub fn mat_vec(u: &M, x: &[Complex64]) -> Vec<Complex64> {
    let dim = x.len();
    (0..dim)
        .map(|r| (0..dim).map(|k| u[(r, k)] * x[k]).sum())
        .collect()
}

pub fn max_abs_diff(a: &M, b: &M) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Max-entry residual after aligning `b` to `a` with the unit phase taken
/// from b's largest entry.
pub fn phase_residual(a: &M, b: &M) -> f64 {
    let (mut best, mut best_mag) = (0, 0.0);
    for (idx, v) in b.iter().enumerate() {
        if v.norm() > best_mag {
            best_mag = v.norm();
            best = idx;
        }
    }
    let ratio = a[best] / b[best];
    let c = ratio / ratio.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y * c).norm())
        .fold(0.0, f64::max)
}

pub fn basis_vector(n: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::ZERO; 1 << n];
    v[index] = Complex64::ONE;
    v
}

pub fn probabilities(x: &[Complex64]) -> Vec<f64> {
    x.iter().map(|a| a.norm_sqr()).collect()
}
