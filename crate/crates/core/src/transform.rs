//! The two-sided quaternion Fourier transform
//!
//! ```text
//! F{f}(ξ) = Σ e^{−i2πξ1x1} · f(x) · e^{−j2πξ2x2} · d1·d2
//! ```
//!
//! with the `i`-kernel strictly on the left and the `j`-kernel strictly on the
//! right. [`qdft_direct`] evaluates the double sum term by term and serves as the
//! oracle for [`qdft_fast`], which factors the transform through complex FFTs.
//!
//! For a real field `g` the kernel product is
//! `e^{−iθ}·g·e^{−jφ} = g·(cosθ cosφ − i sinθ cosφ − j cosθ sinφ + k sinθ sinφ)`, and
//! the four real sums fall out of one complex FFT `H(ξ1, ξ2)` together with its
//! reflection `H(−ξ1, ξ2)`. A general signal is split into `f0 + i f1 + j f2 + k f3`;
//! since `e^{−iθ} j = j e^{iθ}` and `e^{−iθ} k = k e^{iθ}`,
//!
//! ```text
//! F{f}(ξ1, ξ2) = G0(ξ1, ξ2) + i·G1(ξ1, ξ2) + j·G2(−ξ1, ξ2) + k·G3(−ξ1, ξ2)
//! ```
//!
//! where `G_r = F{f_r}`. The inverse has the same structure with both kernel signs
//! flipped and the reflection taken in `x1`.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{QftError, Result};
use crate::grid::{central_difference, l2_norm, Axis, Grid2, Lattice, QSignal, QSpectrum};
use crate::quaternion::Quaternion;

/// Derivative orders `(m, n)` for [`derivative_spectrum`]: `∂^{m+n}/∂x1^m ∂x2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SpectralMultiplierOrder {
    pub m: u32,
    pub n: u32,
}

impl SpectralMultiplierOrder {
    pub const fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }
}

/// Sign of the kernel exponent: −1 for the forward transform, +1 for the inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KernelSign {
    Forward,
    Inverse,
}

impl KernelSign {
    fn value(self) -> f64 {
        match self {
            KernelSign::Forward => -1.0,
            KernelSign::Inverse => 1.0,
        }
    }

    fn fft_direction(self) -> FftDirection {
        match self {
            KernelSign::Forward => FftDirection::Forward,
            KernelSign::Inverse => FftDirection::Inverse,
        }
    }
}

/// `(cos, sin)` of `2πk/n` for `k ∈ 0..n`.
struct RootTable {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl RootTable {
    fn new(n: usize) -> Self {
        let (sin, cos) = (0..n)
            .map(|k| (2.0 * PI * k as f64 / n as f64).sin_cos())
            .unzip();
        RootTable { cos, sin }
    }

    /// `e^{σ·ι·2πk/n}` as `(re, im)`.
    #[inline]
    fn root(&self, k: usize, sign: f64) -> (f64, f64) {
        (self.cos[k], sign * self.sin[k])
    }
}

/// Kernel values `(cos θ, σ sin θ)` for every (output, input) pair of one axis,
/// output-major.
fn kernel_matrix(lat: &Lattice, sign: KernelSign) -> Vec<(f64, f64)> {
    let roots = RootTable::new(lat.n);
    let s = sign.value();
    let mut out = Vec::with_capacity(lat.n * lat.n);
    for a in 0..lat.n {
        for b in 0..lat.n {
            out.push(roots.root(lat.phase_index(a, b), s));
        }
    }
    out
}

/// `(c + s·i)·q`
#[inline]
fn left_mul_i(c: f64, s: f64, q: Quaternion) -> Quaternion {
    Quaternion::new(
        c * q.w - s * q.x,
        c * q.x + s * q.w,
        c * q.y - s * q.z,
        c * q.z + s * q.y,
    )
}

/// `q·(c + s·j)`
#[inline]
fn right_mul_j(q: Quaternion, c: f64, s: f64) -> Quaternion {
    Quaternion::new(
        c * q.w - s * q.y,
        c * q.x - s * q.z,
        c * q.y + s * q.w,
        c * q.z + s * q.x,
    )
}

/// Term-by-term two-sided sum, unweighted. The (input) summation order is fixed
/// row-major; outputs are computed independently, so the result does not depend on
/// the worker count.
fn direct_two_sided(data: &[Quaternion], grid: &Grid2, sign: KernelSign) -> Vec<Quaternion> {
    let (lat1, lat2) = (grid.lattice(Axis::X1), grid.lattice(Axis::X2));
    let (n1, n2) = (lat1.n, lat2.n);
    let left = kernel_matrix(&lat1, sign);
    let right = kernel_matrix(&lat2, sign);
    (0..n1 * n2)
        .into_par_iter()
        .map(|idx| {
            let (a1, a2) = (idx % n1, idx / n1);
            let lrow = &left[a1 * n1..(a1 + 1) * n1];
            let rrow = &right[a2 * n2..(a2 + 1) * n2];
            let mut acc = Quaternion::ZERO;
            for (n, &(rc, rs)) in rrow.iter().enumerate() {
                let row = &data[n * n1..(n + 1) * n1];
                for (&q, &(lc, ls)) in row.iter().zip(lrow) {
                    acc += right_mul_j(left_mul_i(lc, ls, q), rc, rs);
                }
            }
            acc
        })
        .collect()
}

/// Direct sum for a real field, unweighted.
fn direct_two_sided_real(data: &[f64], grid: &Grid2, sign: KernelSign) -> Vec<Quaternion> {
    if data.iter().all(|&v| v == 0.0) {
        return vec![Quaternion::ZERO; data.len()];
    }
    let (lat1, lat2) = (grid.lattice(Axis::X1), grid.lattice(Axis::X2));
    let (n1, n2) = (lat1.n, lat2.n);
    let left = kernel_matrix(&lat1, sign);
    let right = kernel_matrix(&lat2, sign);
    (0..n1 * n2)
        .into_par_iter()
        .map(|idx| {
            let (a1, a2) = (idx % n1, idx / n1);
            let lrow = &left[a1 * n1..(a1 + 1) * n1];
            let rrow = &right[a2 * n2..(a2 + 1) * n2];
            let (mut w, mut x, mut y, mut z) = (0.0, 0.0, 0.0, 0.0);
            for (n, &(rc, rs)) in rrow.iter().enumerate() {
                let row = &data[n * n1..(n + 1) * n1];
                for (&g, &(lc, ls)) in row.iter().zip(lrow) {
                    // (lc + i·ls)·g·(rc + j·rs)
                    let (gc, gs) = (g * lc, g * ls);
                    w += gc * rc;
                    x += gs * rc;
                    y += gc * rs;
                    z += gs * rs;
                }
            }
            Quaternion::new(w, x, y, z)
        })
        .collect()
}

/// `G0 + i·G1 + j·G2∘R + k·G3∘R`, with `R` the reflection of the first index.
fn assemble(parts: &[Vec<Quaternion>; 4], grid: &Grid2) -> Vec<Quaternion> {
    let lat1 = grid.lattice(Axis::X1);
    let n1 = grid.n1;
    (0..grid.len())
        .map(|idx| {
            let (a1, a2) = (idx % n1, idx / n1);
            let r = grid.index(lat1.reflect(a1), a2);
            parts[0][idx]
                + Quaternion::I * parts[1][idx]
                + Quaternion::J * parts[2][r]
                + Quaternion::K * parts[3][r]
        })
        .collect()
}

fn components_of(data: &[Quaternion]) -> [Vec<f64>; 4] {
    std::array::from_fn(|r| data.iter().map(|q| q.to_array()[r]).collect())
}

fn check_len(grid: &Grid2, len: usize) -> Result<()> {
    if grid.n1 == 0 || grid.n2 == 0 {
        return Err(QftError::Plan {
            n1: grid.n1,
            n2: grid.n2,
        });
    }
    if grid.len() != len {
        return Err(QftError::domain(format!(
            "{len} samples do not fit a {}x{} grid",
            grid.n1, grid.n2
        )));
    }
    Ok(())
}

fn scaled(mut v: Vec<Quaternion>, s: f64) -> Vec<Quaternion> {
    for q in &mut v {
        *q = *q * s;
    }
    v
}

/// Two-sided transform by direct summation. Also fills the component spectra
/// `G_r` by direct summation of each real component.
pub fn qdft_direct(f: &QSignal) -> QSpectrum {
    let grid = f.grid;
    let w = grid.weight();
    let data = scaled(direct_two_sided(&f.data, &grid, KernelSign::Forward), w);
    let comps = components_of(&f.data);
    let components = std::array::from_fn(|r| {
        scaled(direct_two_sided_real(&comps[r], &grid, KernelSign::Forward), w)
    });
    QSpectrum {
        grid,
        data,
        components: Some(components),
    }
}

/// Inverse transform by direct summation; the reference path for [`iqdft`].
pub fn iqdft_direct(spec: &QSpectrum) -> QSignal {
    let grid = spec.grid;
    let data = scaled(
        direct_two_sided(&spec.data, &grid, KernelSign::Inverse),
        grid.freq_weight(),
    );
    QSignal { grid, data }
}

/// Plans for both axes in one direction.
struct Plans {
    axis1: Arc<dyn Fft<f64>>,
    axis2: Arc<dyn Fft<f64>>,
}

impl Plans {
    fn new(grid: &Grid2, sign: KernelSign) -> Plans {
        let mut planner = FftPlanner::new();
        Plans {
            axis1: planner.plan_fft(grid.n1, sign.fft_direction()),
            axis2: planner.plan_fft(grid.n2, sign.fft_direction()),
        }
    }
}

/// Phase factors around a plain DFT so that it evaluates the centered kernel
/// `ω^{(a−c)(b−c)}`: `pre[b] = ω^{−cb}` and `post[a] = ω^{−c(a−c)}`.
fn twiddles(lat: &Lattice, sign: KernelSign) -> (Vec<Complex64>, Vec<Complex64>) {
    let roots = RootTable::new(lat.n);
    let s = sign.value();
    let n = lat.n as i64;
    let c = lat.center as i64;
    let phase = |k: i64| {
        let (re, im) = roots.root(k.rem_euclid(n) as usize, s);
        Complex64::new(re, im)
    };
    let pre = (0..n).map(|b| phase(-c * b)).collect();
    let post = (0..n).map(|a| phase(-c * (a - c))).collect();
    (pre, post)
}

/// Complex 2D transform of a real field with the kernel `e^{σι2π(θ+φ)}` on the
/// grid's lattices, via FFT.
fn complex_kernel_fft(data: &[f64], grid: &Grid2, sign: KernelSign, plans: &Plans) -> Vec<Complex64> {
    let (n1, n2) = (grid.n1, grid.n2);
    let (pre1, post1) = twiddles(&grid.lattice(Axis::X1), sign);
    let (pre2, post2) = twiddles(&grid.lattice(Axis::X2), sign);

    let mut buf: Vec<Complex64> = (0..n1 * n2)
        .map(|idx| {
            let (b1, b2) = (idx % n1, idx / n1);
            pre1[b1] * pre2[b2] * data[idx]
        })
        .collect();
    plans.axis1.process(&mut buf);

    let mut cols = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for b2 in 0..n2 {
        for a1 in 0..n1 {
            cols[a1 * n2 + b2] = buf[b2 * n1 + a1];
        }
    }
    plans.axis2.process(&mut cols);

    for a2 in 0..n2 {
        for a1 in 0..n1 {
            buf[a2 * n1 + a1] = cols[a1 * n2 + a2] * post1[a1] * post2[a2];
        }
    }
    buf
}

/// Two-sided transform of a real field, unweighted, built from `H` and its
/// reflection.
fn fast_two_sided_real(data: &[f64], grid: &Grid2, sign: KernelSign, plans: &Plans) -> Vec<Quaternion> {
    if data.iter().all(|&v| v == 0.0) {
        return vec![Quaternion::ZERO; data.len()];
    }
    let h = complex_kernel_fft(data, grid, sign, plans);
    let lat1 = grid.lattice(Axis::X1);
    let n1 = grid.n1;
    (0..grid.len())
        .map(|idx| {
            let (a1, a2) = (idx % n1, idx / n1);
            let z = h[idx];
            let zr = h[grid.index(lat1.reflect(a1), a2)];
            Quaternion::new(
                0.5 * (z.re + zr.re),
                0.5 * (z.im - zr.im),
                0.5 * (z.im + zr.im),
                0.5 * (zr.re - z.re),
            )
        })
        .collect()
}

fn fast_components(data: &[Quaternion], grid: &Grid2, sign: KernelSign, weight: f64) -> [Vec<Quaternion>; 4] {
    let plans = Plans::new(grid, sign);
    let comps = components_of(data);
    let mut out: Vec<Vec<Quaternion>> = comps
        .par_iter()
        .map(|g| scaled(fast_two_sided_real(g, grid, sign, &plans), weight))
        .collect();
    let g3 = out.pop().unwrap();
    let g2 = out.pop().unwrap();
    let g1 = out.pop().unwrap();
    let g0 = out.pop().unwrap();
    [g0, g1, g2, g3]
}

/// Two-sided transform through complex FFTs. Same contract as [`qdft_direct`].
///
/// Any sample counts are accepted; the FFT backend plans arbitrary lengths.
pub fn qdft_fast(f: &QSignal) -> Result<QSpectrum> {
    let grid = f.grid;
    check_len(&grid, f.data.len())?;
    let components = fast_components(&f.data, &grid, KernelSign::Forward, grid.weight());
    let data = assemble(&components, &grid);
    Ok(QSpectrum {
        grid,
        data,
        components: Some(components),
    })
}

/// Inverse transform `f(x) = Σ e^{i2πξ1x1} F(ξ) e^{j2πξ2x2} · Δξ1Δξ2`, via FFT.
/// Uses only the assembled spectrum, not the component spectra.
pub fn iqdft(spec: &QSpectrum) -> Result<QSignal> {
    let grid = spec.grid;
    check_len(&grid, spec.data.len())?;
    let parts = fast_components(&spec.data, &grid, KernelSign::Inverse, grid.freq_weight());
    Ok(QSignal {
        grid,
        data: assemble(&parts, &grid),
    })
}

/// `‖F‖_Q(u, v) = sqrt(Σ_r |G_r(u, v)|²)`, the component module. This is not
/// `|F(u, v)|_Q`.
pub fn pointwise_module(spec: &QSpectrum, u: usize, v: usize) -> Result<f64> {
    let comps = spec.components()?;
    if u >= spec.grid.n1 || v >= spec.grid.n2 {
        return Err(QftError::domain(format!("frequency index ({u}, {v}) out of range")));
    }
    let idx = spec.grid.index(u, v);
    Ok(comps.iter().map(|g| g[idx].norm_squared()).sum::<f64>().sqrt())
}

/// `‖F‖²_Q` at every frequency sample, storage order.
pub fn module_squared_field(spec: &QSpectrum) -> Result<Vec<f64>> {
    let comps = spec.components()?;
    Ok((0..spec.grid.len())
        .map(|idx| comps.iter().map(|g| g[idx].norm_squared()).sum())
        .collect())
}

/// `‖F‖_{2,Q}`: quadrature of the squared component module over the frequency
/// lattice.
pub fn spectrum_l2_norm(spec: &QSpectrum) -> Result<f64> {
    let m2 = module_squared_field(spec)?;
    Ok((m2.iter().sum::<f64>() * spec.grid.freq_weight()).sqrt())
}

/// Spectral multiplier of the derivative theorem:
/// `(2π)^{m+n} · (iξ1)^m · F(ξ) · (jξ2)^n`, left factor on the left, right factor
/// on the right. Applied to the component spectra as well when present.
pub fn derivative_spectrum(spec: &QSpectrum, order: SpectralMultiplierOrder) -> QSpectrum {
    let grid = spec.grid;
    let (xi1, xi2) = grid.freqs();
    let scale = (2.0 * PI).powi((order.m + order.n) as i32);
    let lefts: Vec<Quaternion> = xi1
        .iter()
        .map(|&x| (Quaternion::I * x).powi(order.m) * scale)
        .collect();
    let rights: Vec<Quaternion> = xi2.iter().map(|&x| (Quaternion::J * x).powi(order.n)).collect();
    let apply = |src: &[Quaternion]| -> Vec<Quaternion> {
        (0..grid.len())
            .map(|idx| lefts[idx % grid.n1] * src[idx] * rights[idx / grid.n1])
            .collect()
    };
    QSpectrum {
        grid,
        data: apply(&spec.data),
        components: spec
            .components
            .as_ref()
            .map(|c| std::array::from_fn(|r| apply(&c[r]))),
    }
}

/// `∂^{m+n} f / ∂x1^m ∂x2^n` through the spectral multiplier and the inverse
/// transform.
pub fn spectral_derivative(f: &QSignal, order: SpectralMultiplierOrder) -> Result<QSignal> {
    iqdft(&derivative_spectrum(&qdft_fast(f)?, order))
}

/// The same derivative from repeated periodic central differences.
pub fn difference_derivative(f: &QSignal, order: SpectralMultiplierOrder) -> QSignal {
    let mut out = f.clone();
    for _ in 0..order.m {
        out = central_difference(&out, Axis::X1);
    }
    for _ in 0..order.n {
        out = central_difference(&out, Axis::X2);
    }
    out
}

/// Relative L² distance `|spectral − difference|_{2,Q} / |spectral|_{2,Q}`.
pub fn derivative_residual(f: &QSignal, order: SpectralMultiplierOrder) -> Result<f64> {
    let spectral = spectral_derivative(f, order)?;
    let diff = spectral.axpby(1.0, &difference_derivative(f, order), -1.0)?;
    let norm = l2_norm(&spectral);
    if norm == 0.0 {
        return Err(QftError::ZeroSignal);
    }
    Ok(l2_norm(&diff) / norm)
}
