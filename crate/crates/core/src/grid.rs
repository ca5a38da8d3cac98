//! Sampling geometry and the signal/spectrum containers.
//!
//! A [`Grid2`] in `Continuum` mode samples `[−l1, l1) × [−l2, l2)` at
//! `x[m] = −l + m·d`, `d = 2l/n`, with `n` even so the origin is a sample. Its
//! frequency lattice is centered: `ξ[u] = (u − n/2)/(n·d)`, spacing `1/(2l)`.
//!
//! In `PureDiscrete` mode the coordinates are the indices themselves (`x[m] = m`,
//! `d = 1`) and the frequency lattice is the ordinary DFT one, `ξ[u] = u/n`. The
//! transform is then the exact finite quaternion DFT.
//!
//! Both modes share one description per axis: a center index `c` (`n/2` or `0`)
//! with `x[m] = (m − c)·d` and `ξ[u] = (u − c)/(n·d)`. The kernel phase
//! `ξ[u]·x[m] = (u − c)(m − c)/n` is then a rational number with denominator `n`,
//! which the transforms reduce exactly.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{QftError, Result};
use crate::quaternion::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridMode {
    Continuum,
    PureDiscrete,
}

impl GridMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GridMode::Continuum => "continuum",
            GridMode::PureDiscrete => "discrete",
        }
    }
}

impl fmt::Display for GridMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GridMode {
    type Err = QftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuum" => Ok(GridMode::Continuum),
            "discrete" => Ok(GridMode::PureDiscrete),
            other => Err(QftError::domain(format!("unknown grid mode `{other}`"))),
        }
    }
}

/// Coordinate axis selector, `x1` or `x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X1, Axis::X2];

    /// 1 or 2.
    pub fn number(self) -> u8 {
        match self {
            Axis::X1 => 1,
            Axis::X2 => 2,
        }
    }

    pub fn from_number(k: u8) -> Result<Axis> {
        match k {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            _ => Err(QftError::domain(format!("axis must be 1 or 2, got {k}"))),
        }
    }
}

/// One axis of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub n: usize,
    /// Index of the origin.
    pub center: usize,
    pub spacing: f64,
}

impl Lattice {
    #[inline]
    pub fn coord(&self, m: usize) -> f64 {
        (m as f64 - self.center as f64) * self.spacing
    }

    #[inline]
    pub fn freq(&self, u: usize) -> f64 {
        (u as f64 - self.center as f64) / (self.n as f64 * self.spacing)
    }

    /// `n·ξ[u]·x[m] mod n`, exactly.
    #[inline]
    pub fn phase_index(&self, u: usize, m: usize) -> usize {
        let c = self.center as i64;
        let p = (u as i64 - c) * (m as i64 - c);
        p.rem_euclid(self.n as i64) as usize
    }

    /// Index of the lattice point at `−ξ[u]` (equivalently `−x[m]`), modulo the
    /// period of the kernel.
    #[inline]
    pub fn reflect(&self, u: usize) -> usize {
        (2 * self.center as i64 - u as i64).rem_euclid(self.n as i64) as usize
    }
}

/// Sampling geometry for a 2D field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2 {
    pub n1: usize,
    pub n2: usize,
    /// Half-extents. In `PureDiscrete` mode they are carried for the file format
    /// only; the constructor sets them to `n/2` so that `d = 2l/n = 1`.
    pub l1: f64,
    pub l2: f64,
    pub mode: GridMode,
}

impl Grid2 {
    pub const DEFAULT_N: usize = 128;
    pub const DEFAULT_L: f64 = 6.0;

    pub fn new(mode: GridMode, n1: usize, n2: usize, l1: f64, l2: f64) -> Result<Grid2> {
        if n1 == 0 || n2 == 0 {
            return Err(QftError::domain("grid sample counts must be positive"));
        }
        if n1 > u32::MAX as usize || n2 > u32::MAX as usize {
            return Err(QftError::domain("grid sample counts exceed u32"));
        }
        if mode == GridMode::Continuum {
            if !n1.is_multiple_of(2) || !n2.is_multiple_of(2) {
                return Err(QftError::domain(format!(
                    "continuum grids need even sample counts, got {n1}x{n2}"
                )));
            }
            if !(l1.is_finite() && l1 > 0.0 && l2.is_finite() && l2 > 0.0) {
                return Err(QftError::domain(format!(
                    "half-extents must be positive and finite, got {l1}, {l2}"
                )));
            }
        }
        Ok(Grid2 { n1, n2, l1, l2, mode })
    }

    pub fn continuum(n1: usize, n2: usize, l1: f64, l2: f64) -> Result<Grid2> {
        Self::new(GridMode::Continuum, n1, n2, l1, l2)
    }

    /// Square continuum grid `n × n` on `[−l, l)²`.
    pub fn square(n: usize, l: f64) -> Result<Grid2> {
        Self::continuum(n, n, l, l)
    }

    pub fn discrete(n1: usize, n2: usize) -> Result<Grid2> {
        Self::new(GridMode::PureDiscrete, n1, n2, n1 as f64 / 2.0, n2 as f64 / 2.0)
    }

    /// 128 × 128 on `[−6, 6)²`.
    pub fn default_continuum() -> Grid2 {
        Self::square(Self::DEFAULT_N, Self::DEFAULT_L).expect("default grid is valid")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_continuum(&self) -> bool {
        self.mode == GridMode::Continuum
    }

    pub fn lattice(&self, axis: Axis) -> Lattice {
        let (n, l) = match axis {
            Axis::X1 => (self.n1, self.l1),
            Axis::X2 => (self.n2, self.l2),
        };
        match self.mode {
            GridMode::Continuum => Lattice {
                n,
                center: n / 2,
                spacing: 2.0 * l / n as f64,
            },
            GridMode::PureDiscrete => Lattice {
                n,
                center: 0,
                spacing: 1.0,
            },
        }
    }

    pub fn d1(&self) -> f64 {
        self.lattice(Axis::X1).spacing
    }

    pub fn d2(&self) -> f64 {
        self.lattice(Axis::X2).spacing
    }

    #[inline]
    pub fn x1(&self, m: usize) -> f64 {
        self.lattice(Axis::X1).coord(m)
    }

    #[inline]
    pub fn x2(&self, n: usize) -> f64 {
        self.lattice(Axis::X2).coord(n)
    }

    #[inline]
    pub fn xi1(&self, u: usize) -> f64 {
        self.lattice(Axis::X1).freq(u)
    }

    #[inline]
    pub fn xi2(&self, v: usize) -> f64 {
        self.lattice(Axis::X2).freq(v)
    }

    /// Spatial coordinate arrays `(x1[..], x2[..])`.
    pub fn coords(&self) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = (self.lattice(Axis::X1), self.lattice(Axis::X2));
        ((0..a.n).map(|m| a.coord(m)).collect(), (0..b.n).map(|n| b.coord(n)).collect())
    }

    /// Frequency coordinate arrays `(ξ1[..], ξ2[..])`.
    pub fn freqs(&self) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = (self.lattice(Axis::X1), self.lattice(Axis::X2));
        ((0..a.n).map(|u| a.freq(u)).collect(), (0..b.n).map(|v| b.freq(v)).collect())
    }

    /// Quadrature weight of a spatial sample: `d1·d2`, or 1 in `PureDiscrete` mode.
    pub fn weight(&self) -> f64 {
        self.d1() * self.d2()
    }

    /// Weight of a frequency sample, `1/(n1·d1·n2·d2)`.
    pub fn freq_weight(&self) -> f64 {
        1.0 / (self.n1 as f64 * self.d1() * self.n2 as f64 * self.d2())
    }

    /// Storage index; `m` (axis 1) runs fastest.
    #[inline]
    pub fn index(&self, m: usize, n: usize) -> usize {
        n * self.n1 + m
    }

    pub fn same_shape(&self, other: &Grid2) -> bool {
        self.n1 == other.n1 && self.n2 == other.n2 && self.mode == other.mode
    }
}

/// Quaternion samples on a [`Grid2`].
#[derive(Debug, Clone, PartialEq)]
pub struct QSignal {
    pub grid: Grid2,
    pub data: Vec<Quaternion>,
}

impl QSignal {
    pub fn new(grid: Grid2, data: Vec<Quaternion>) -> Result<QSignal> {
        if data.len() != grid.len() {
            return Err(QftError::domain(format!(
                "signal has {} samples, grid needs {}",
                data.len(),
                grid.len()
            )));
        }
        Ok(QSignal { grid, data })
    }

    pub fn zeros(grid: Grid2) -> QSignal {
        QSignal {
            grid,
            data: vec![Quaternion::ZERO; grid.len()],
        }
    }

    #[inline]
    pub fn at(&self, m: usize, n: usize) -> Quaternion {
        self.data[self.grid.index(m, n)]
    }

    /// Real component `f_r`, r ∈ 0..4 in the order (w, x, y, z).
    pub fn component(&self, r: usize) -> Vec<f64> {
        self.data.iter().map(|q| q.to_array()[r]).collect()
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QSignal {
        QSignal {
            grid: self.grid,
            data: self.data.iter().map(|&q| f(q)).collect(),
        }
    }

    /// `q·f` pointwise.
    pub fn left_mul(&self, q: Quaternion) -> QSignal {
        self.map(|v| q * v)
    }

    /// `f·q` pointwise.
    pub fn right_mul(&self, q: Quaternion) -> QSignal {
        self.map(|v| v * q)
    }

    pub fn scale(&self, s: f64) -> QSignal {
        self.map(|v| v * s)
    }

    /// `a·self + b·other` for real `a, b`.
    pub fn axpby(&self, a: f64, other: &QSignal, b: f64) -> Result<QSignal> {
        if !self.grid.same_shape(&other.grid) {
            return Err(QftError::domain("signals live on different grids"));
        }
        Ok(QSignal {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&p, &q)| p * a + q * b)
                .collect(),
        })
    }

    /// Quadrature of `|f|²`.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|q| q.norm_squared()).sum::<f64>() * self.grid.weight()
    }

    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(|q| q.modulus()).fold(0.0, f64::max)
    }

    /// Largest componentwise difference from `other`.
    pub fn max_abs_diff(&self, other: &QSignal) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }
}

/// Quaternion values on the frequency lattice of a [`Grid2`], optionally with the
/// transforms `G_r = F{f_r}` of the four real component signals.
#[derive(Debug, Clone, PartialEq)]
pub struct QSpectrum {
    pub grid: Grid2,
    pub data: Vec<Quaternion>,
    pub components: Option<[Vec<Quaternion>; 4]>,
}

impl QSpectrum {
    pub fn new(
        grid: Grid2,
        data: Vec<Quaternion>,
        components: Option<[Vec<Quaternion>; 4]>,
    ) -> Result<QSpectrum> {
        let ok = data.len() == grid.len()
            && components
                .as_ref()
                .is_none_or(|c| c.iter().all(|g| g.len() == grid.len()));
        if !ok {
            return Err(QftError::domain("spectrum size does not match its grid"));
        }
        Ok(QSpectrum {
            grid,
            data,
            components,
        })
    }

    #[inline]
    pub fn at(&self, u: usize, v: usize) -> Quaternion {
        self.data[self.grid.index(u, v)]
    }

    pub fn components(&self) -> Result<&[Vec<Quaternion>; 4]> {
        self.components.as_ref().ok_or(QftError::MissingComponents)
    }

    /// Largest componentwise difference over the assembled data.
    pub fn max_abs_diff(&self, other: &QSpectrum) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }

    /// Frequency-domain quadrature of `|F|²` (pointwise modulus, not the component
    /// module).
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|q| q.norm_squared()).sum::<f64>() * self.grid.freq_weight()
    }
}

pub(crate) fn max_abs_diff(a: &[Quaternion], b: &[Quaternion]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&p, &q)| p.max_abs_diff(q))
        .fold(0.0, f64::max)
}

/// Evaluates `generator(x1, x2)` at every sample of a continuum grid.
pub fn sample<F>(generator: F, grid: Grid2) -> Result<QSignal>
where
    F: Fn(f64, f64) -> Quaternion + Sync,
{
    if !grid.is_continuum() {
        return Err(QftError::domain("sampling a generator needs a continuum grid"));
    }
    let (x1, x2) = grid.coords();
    let data = (0..grid.len())
        .into_par_iter()
        .map(|idx| generator(x1[idx % grid.n1], x2[idx / grid.n1]))
        .collect();
    Ok(QSignal { grid, data })
}

/// Real samples of `e^{−α(x1² + x2²)}`.
pub fn gaussian(alpha: f64, grid: Grid2) -> Result<QSignal> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(QftError::domain(format!("gaussian needs alpha > 0, got {alpha}")));
    }
    sample(|a, b| Quaternion::real((-alpha * (a * a + b * b)).exp()), grid)
}

/// `|f|_{2,Q}`: square root of the quadrature of `|f|²_Q`.
pub fn l2_norm(f: &QSignal) -> f64 {
    f.energy().sqrt()
}

/// Second-order central difference along `axis`, divided by the spacing, with
/// periodic wrap at the lattice ends.
pub fn central_difference(f: &QSignal, axis: Axis) -> QSignal {
    let g = f.grid;
    let d = g.lattice(axis).spacing;
    let scale = 0.5 / d;
    let mut out = vec![Quaternion::ZERO; g.len()];
    for n in 0..g.n2 {
        for m in 0..g.n1 {
            let (fwd, back) = match axis {
                Axis::X1 => (
                    f.at((m + 1) % g.n1, n),
                    f.at((m + g.n1 - 1) % g.n1, n),
                ),
                Axis::X2 => (
                    f.at(m, (n + 1) % g.n2),
                    f.at(m, (n + g.n2 - 1) % g.n2),
                ),
            };
            out[g.index(m, n)] = (fwd - back) * scale;
        }
    }
    QSignal { grid: g, data: out }
}
