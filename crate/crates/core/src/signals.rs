//! Test-signal generators shared by the labs, the CLI suites and the tests.

use rand::Rng;

use crate::error::Result;
use crate::grid::{sample, Grid2, QSignal};
use crate::quaternion::{exp_pure_unchecked, Quaternion};

/// `amplitude · e^{−α|x|²} · e^{μ·c·x1²}`: a Gaussian with a quadratic phase along
/// axis 1 about the pure unit axis `mu`.
pub fn chirped_gaussian(
    grid: Grid2,
    alpha: f64,
    chirp: f64,
    mu: Quaternion,
    amplitude: Quaternion,
) -> Result<QSignal> {
    sample(
        |a, b| {
            let env = (-alpha * (a * a + b * b)).exp();
            amplitude * exp_pure_unchecked(mu, chirp * a * a) * env
        },
        grid,
    )
}

/// Uniform random pure unit quaternion.
pub fn random_unit_pure<R: Rng>(rng: &mut R) -> Quaternion {
    loop {
        let v = Quaternion::pure(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.modulus();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

/// Independent uniform components in `[−1, 1)` at every sample. Works for both grid
/// modes.
pub fn random_signal<R: Rng>(rng: &mut R, grid: Grid2) -> QSignal {
    let data = (0..grid.len()).map(|_| random_quaternion(rng)).collect();
    QSignal { grid, data }
}

/// Parameters of one smooth bump in [`random_smooth`].
#[derive(Debug, Clone, Copy)]
struct Bump {
    amplitude: Quaternion,
    center: (f64, f64),
    alpha: (f64, f64),
    mu: Quaternion,
    chirp: f64,
    tilt: (f64, f64),
}

/// Sum of three Gaussian bumps with random quaternion amplitudes, centers within
/// `±1`, widths `α ∈ [1.5, 5]` per axis and smooth quaternion phases. On the
/// default grid every such signal is smooth and negligible at the boundary.
pub fn random_smooth<R: Rng>(rng: &mut R, grid: Grid2) -> Result<QSignal> {
    let bumps: Vec<Bump> = (0..3)
        .map(|_| Bump {
            amplitude: random_quaternion(rng),
            center: (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            alpha: (rng.gen_range(1.5..5.0), rng.gen_range(1.5..5.0)),
            mu: random_unit_pure(rng),
            chirp: rng.gen_range(-1.0..1.0),
            tilt: (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        })
        .collect();
    sample(
        |a, b| {
            bumps.iter().fold(Quaternion::ZERO, |acc, p| {
                let (da, db) = (a - p.center.0, b - p.center.1);
                let env = (-(p.alpha.0 * da * da + p.alpha.1 * db * db)).exp();
                let angle = p.chirp * da * da + p.tilt.0 * a + p.tilt.1 * b;
                acc + p.amplitude * exp_pure_unchecked(p.mu, angle) * env
            })
        },
        grid,
    )
}
