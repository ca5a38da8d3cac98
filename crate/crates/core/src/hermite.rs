//! Hermite basis `φ_k(x) = ((−1)^k/k!) e^{πx²} d^k/dx^k e^{−2πx²}` and its tensor
//! products `φ_{k,l}(x1, x2) = φ_k(x1) φ_l(x2)`.
//!
//! With `t = √(2π)·x` and the physicists' Rodrigues formula
//! `H_k(t) = (−1)^k e^{t²} d^k/dt^k e^{−t²}`, the definition reduces to
//! `φ_k(x) = ((2π)^{k/2}/k!) H_k(√(2π)x) e^{−πx²}`. Folding the prefactor into
//! `H_{k+1} = 2t H_k − 2k H_{k−1}` gives the recurrence used here,
//!
//! ```text
//! φ_0(x) = e^{−πx²},   φ_{k+1}(x) = 4π/(k+1) · (x φ_k(x) − φ_{k−1}(x)),
//! ```
//!
//! which never forms a factorial. Norms are `‖φ_k‖² = (4π)^k / (√2·k!)`.
//!
//! Each `φ_{k,l}` is an eigenfunction of the two-sided transform with eigenvalue
//! `(−i)^k (−j)^l`. In one dimension this is `F{φ_k} = (−i)^k φ_k` for the kernel
//! `e^{−2πixy}`; a `(−1)^k` form of the 1D statement does not match a direct
//! computation (`F{φ_1} = −i·φ_1`) and is not used.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;

use crate::error::{QftError, Result};
use crate::grid::{l2_norm, Grid2, QSignal};
use crate::quaternion::Quaternion;
use crate::transform::qdft_fast;

/// Largest supported degree per axis.
pub const MAX_DEGREE: usize = 32;

/// Degrees `(k, l)` of `φ_{k,l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub k: usize,
    pub l: usize,
}

impl BasisIndex {
    pub fn new(k: usize, l: usize) -> Result<BasisIndex> {
        check_degree(k)?;
        check_degree(l)?;
        Ok(BasisIndex { k, l })
    }
}

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_DEGREE {
        return Err(QftError::domain(format!(
            "Hermite degree {k} exceeds the cap {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// `φ_0(x) ..= φ_kmax(x)`.
pub fn phi_values(kmax: usize, x: f64) -> Result<Vec<f64>> {
    check_degree(kmax)?;
    let mut out = Vec::with_capacity(kmax + 1);
    out.push((-PI * x * x).exp());
    if kmax >= 1 {
        out.push(4.0 * PI * x * out[0]);
    }
    for k in 1..kmax {
        let next = 4.0 * PI / (k + 1) as f64 * (x * out[k] - out[k - 1]);
        out.push(next);
    }
    Ok(out)
}

pub fn phi(k: usize, x: f64) -> Result<f64> {
    Ok(phi_values(k, x)?[k])
}

/// `‖φ_k‖² = (4π)^k / (√2·k!)`, accumulated as a product of ratios.
pub fn phi_norm_squared(k: usize) -> Result<f64> {
    check_degree(k)?;
    Ok((1..=k).fold(1.0 / SQRT_2, |acc, j| acc * 4.0 * PI / j as f64))
}

/// `(−i)^k (−j)^l`.
pub fn eigenvalue(idx: BasisIndex) -> Quaternion {
    (-Quaternion::I).powi(idx.k as u32) * (-Quaternion::J).powi(idx.l as u32)
}

/// `φ_k(x[m])` for every degree up to `kmax` and every coordinate, degree-major.
fn phi_table(kmax: usize, coords: &[f64]) -> Result<Vec<Vec<f64>>> {
    let per_point: Vec<Vec<f64>> = coords
        .iter()
        .map(|&x| phi_values(kmax, x))
        .collect::<Result<_>>()?;
    Ok((0..=kmax)
        .map(|k| per_point.iter().map(|v| v[k]).collect())
        .collect())
}

fn require_continuum(grid: &Grid2) -> Result<()> {
    if !grid.is_continuum() {
        return Err(QftError::domain("the Hermite basis needs a continuum grid"));
    }
    Ok(())
}

/// Real samples of `φ_{k,l}`.
pub fn phi_signal(idx: BasisIndex, grid: Grid2) -> Result<QSignal> {
    require_continuum(&grid)?;
    check_degree(idx.k)?;
    check_degree(idx.l)?;
    let (x1, x2) = grid.coords();
    let p1: Vec<f64> = x1.iter().map(|&x| phi(idx.k, x)).collect::<Result<_>>()?;
    let p2: Vec<f64> = x2.iter().map(|&x| phi(idx.l, x)).collect::<Result<_>>()?;
    let data = (0..grid.len())
        .map(|i| Quaternion::real(p1[i % grid.n1] * p2[i / grid.n1]))
        .collect();
    QSignal::new(grid, data)
}

/// `‖F{φ_{k,l}} − λ φ_{k,l}‖ / ‖φ_{k,l}‖` with `λ = (−i)^k (−j)^l`, the target
/// sampled on the frequency lattice of `grid`.
pub fn eigen_residual(idx: BasisIndex, grid: Grid2) -> Result<f64> {
    let f = phi_signal(idx, grid)?;
    let spec = qdft_fast(&f)?;
    let lambda = eigenvalue(idx);
    let (xi1, xi2) = grid.freqs();
    let p1: Vec<f64> = xi1.iter().map(|&x| phi(idx.k, x)).collect::<Result<_>>()?;
    let p2: Vec<f64> = xi2.iter().map(|&x| phi(idx.l, x)).collect::<Result<_>>()?;
    let num: f64 = (0..grid.len())
        .map(|i| (spec.data[i] - lambda * (p1[i % grid.n1] * p2[i / grid.n1])).norm_squared())
        .sum();
    Ok((num * grid.freq_weight()).sqrt() / l2_norm(&f))
}

/// Quaternion coefficients `a[k, l]`, `k ∈ 0..=kmax`, `l ∈ 0..=lmax`. Each
/// coefficient multiplies its (real) basis function from the left.
#[derive(Debug, Clone, PartialEq)]
pub struct QCoefficients {
    pub kmax: usize,
    pub lmax: usize,
    /// `a[k·(lmax+1) + l]`.
    pub a: Vec<Quaternion>,
}

impl QCoefficients {
    pub fn zeros(kmax: usize, lmax: usize) -> Result<QCoefficients> {
        check_degree(kmax)?;
        check_degree(lmax)?;
        Ok(QCoefficients {
            kmax,
            lmax,
            a: vec![Quaternion::ZERO; (kmax + 1) * (lmax + 1)],
        })
    }

    #[inline]
    fn offset(&self, k: usize, l: usize) -> usize {
        assert!(k <= self.kmax && l <= self.lmax, "coefficient ({k}, {l}) out of range");
        k * (self.lmax + 1) + l
    }

    pub fn get(&self, k: usize, l: usize) -> Quaternion {
        self.a[self.offset(k, l)]
    }

    pub fn set(&mut self, k: usize, l: usize, q: Quaternion) {
        let o = self.offset(k, l);
        self.a[o] = q;
    }

    /// Iterates `(k, l, a[k, l])` with `l` fastest.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Quaternion)> + '_ {
        let width = self.lmax + 1;
        self.a.iter().enumerate().map(move |(o, &q)| (o / width, o % width, q))
    }
}

/// Projects `f` on `φ_{k,l}` for `k ≤ kmax`, `l ≤ lmax`:
/// `a[k,l] = <f, φ_{k,l}> / ‖φ_{k,l}‖²` with the closed-form norms.
pub fn expand(f: &QSignal, kmax: usize, lmax: usize) -> Result<QCoefficients> {
    require_continuum(&f.grid)?;
    let mut out = QCoefficients::zeros(kmax, lmax)?;
    let g = f.grid;
    let (x1, x2) = g.coords();
    let p1 = phi_table(kmax, &x1)?;
    let p2 = phi_table(lmax, &x2)?;
    let w = g.weight();
    let norms1: Vec<f64> = (0..=kmax).map(phi_norm_squared).collect::<Result<_>>()?;
    let norms2: Vec<f64> = (0..=lmax).map(phi_norm_squared).collect::<Result<_>>()?;

    let coeffs: Vec<Vec<Quaternion>> = (0..=kmax)
        .into_par_iter()
        .map(|k| {
            // Row sums over x1 first: s[n] = Σ_m f[m,n] φ_k(x1[m]).
            let s: Vec<Quaternion> = (0..g.n2)
                .map(|n| {
                    (0..g.n1).fold(Quaternion::ZERO, |acc, m| acc + f.at(m, n) * p1[k][m])
                })
                .collect();
            (0..=lmax)
                .map(|l| {
                    let inner = s
                        .iter()
                        .zip(&p2[l])
                        .fold(Quaternion::ZERO, |acc, (&q, &p)| acc + q * p);
                    inner * (w / (norms1[k] * norms2[l]))
                })
                .collect()
        })
        .collect();
    for (k, row) in coeffs.into_iter().enumerate() {
        for (l, q) in row.into_iter().enumerate() {
            out.set(k, l, q);
        }
    }
    Ok(out)
}

/// `Σ a[k,l] · φ_{k,l}(x)` at every sample.
pub fn reconstruct(c: &QCoefficients, grid: Grid2) -> Result<QSignal> {
    require_continuum(&grid)?;
    let (x1, x2) = grid.coords();
    let p1 = phi_table(c.kmax, &x1)?;
    let p2 = phi_table(c.lmax, &x2)?;
    let data = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (m, n) = (i % grid.n1, i / grid.n1);
            c.iter().fold(Quaternion::ZERO, |acc, (k, l, a)| {
                acc + a * (p1[k][m] * p2[l][n])
            })
        })
        .collect();
    QSignal::new(grid, data)
}
