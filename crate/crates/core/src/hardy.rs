//! Gaussian decay fits and the Hardy trichotomy.
//!
//! If `|f(x)|_Q ≤ C e^{−α|x|²}` and `|F{f}(ξ)|_Q ≤ C′ e^{−β|ξ|²}`, then `αβ > π²`
//! forces `f = 0`, `αβ = π²` forces `f = A e^{−α|x|²}`, and `αβ < π²` leaves
//! infinitely many solutions (every `φ_{k,l}` among them).
//!
//! Two estimators for a decay rate are provided:
//!
//! * [`fit_decay`] regresses `log|f|_Q` on `−|x|²`. It is exact on sampled
//!   Gaussians and meaningless on anything else.
//! * [`fit_envelope`] treats the hypothesis as the inequality it is. Among all
//!   envelopes `log C − α|x|²` lying on or above every sample of the window it picks
//!   the one with the smallest mean log-gap. For a candidate `α` the smallest
//!   admissible constant is `C(α) = max |f| e^{α|x|²}`, and the mean gap is
//!   minimal exactly when the maximizing sample crosses the mean `|x|²` of the
//!   window, so the rate is found by bisection. A Gaussian `e^{−α₀|x|²}` gets
//!   exactly `α₀`, while polynomial factors flatten the upper hull and give less.
//!
//! Case ii is read as allowing any quaternion amplitude `A`; decay fits only see
//! `|A|`, so the lab makes no distinction.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{QftError, Result};
use crate::grid::{Grid2, QSignal};
use crate::hermite::{phi_signal, BasisIndex};
use crate::quaternion::Quaternion;
use crate::transform::qdft_fast;

/// Relative floor below which samples are left out of a fit window.
pub const FIT_FLOOR: f64 = 1e-8;
pub const MIN_WINDOW: usize = 16;
/// Relative half-width of the band around `π²` classified as the Gaussian case.
pub const HARDY_BAND: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub alpha_hat: f64,
    pub c_hat: f64,
    /// Largest log-domain deviation between the fitted envelope and the samples in
    /// the window.
    pub residual: f64,
    pub window_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HardyCase {
    ZeroForced,
    GaussianUnique,
    ManySolutions,
}

impl HardyCase {
    pub fn as_str(self) -> &'static str {
        match self {
            HardyCase::ZeroForced => "ZeroForced",
            HardyCase::GaussianUnique => "GaussianUnique",
            HardyCase::ManySolutions => "ManySolutions",
        }
    }
}

impl fmt::Display for HardyCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyVerdict {
    pub product: f64,
    pub classification: HardyCase,
    pub margin: f64,
}

/// Samples of a field as `(|x|², log|value|)`, restricted to the fit window.
struct Window {
    points: Vec<(f64, f64)>,
}

impl Window {
    fn new(r2: impl Iterator<Item = f64>, modulus: impl Iterator<Item = f64>, floor: f64) -> Result<Window> {
        if !(floor > 0.0 && floor < 1.0) {
            return Err(QftError::domain(format!("fit floor must lie in (0, 1), got {floor}")));
        }
        let pairs: Vec<(f64, f64)> = r2.zip(modulus).collect();
        let max = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
        let cut = floor * max;
        let points: Vec<(f64, f64)> = pairs
            .into_iter()
            .filter(|&(_, m)| max > 0.0 && m > cut)
            .map(|(r, m)| (r, m.ln()))
            .collect();
        if points.len() < MIN_WINDOW {
            return Err(QftError::InsufficientSupport {
                found: points.len(),
                needed: MIN_WINDOW,
            });
        }
        Ok(Window { points })
    }

    fn of_signal(f: &QSignal, floor: f64) -> Result<Window> {
        let g = f.grid;
        let (x1, x2) = g.coords();
        let r2 = (0..g.len()).map(move |idx| x1[idx % g.n1].powi(2) + x2[idx / g.n1].powi(2));
        Window::new(r2, f.data.iter().map(|q| q.modulus()), floor)
    }

    /// Log-domain gap of the envelope `log c − α r²` above the samples.
    fn residual(&self, alpha: f64, log_c: f64) -> f64 {
        self.points
            .iter()
            .map(|&(r2, g)| (log_c - alpha * r2 - g).abs())
            .fold(0.0, f64::max)
    }

    fn least_squares(&self) -> Result<DecayFit> {
        let k = self.points.len() as f64;
        let (st, sy) = self.points.iter().fold((0.0, 0.0), |(a, b), &(r2, g)| (a - r2, b + g));
        let (mt, my) = (st / k, sy / k);
        let (mut sxx, mut sxy) = (0.0, 0.0);
        for &(r2, g) in &self.points {
            let t = -r2 - mt;
            sxx += t * t;
            sxy += t * (g - my);
        }
        if sxx == 0.0 {
            return Err(QftError::domain("fit window has no spread in |x|²"));
        }
        let alpha = sxy / sxx;
        let log_c = my - alpha * mt;
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(QftError::domain(format!("samples do not decay (slope {alpha})")));
        }
        Ok(DecayFit {
            alpha_hat: alpha,
            c_hat: log_c.exp(),
            residual: self.residual(alpha, log_c),
            window_count: self.points.len(),
        })
    }

    fn envelope(&self) -> Result<DecayFit> {
        let k = self.points.len() as f64;
        let t_mean = self.points.iter().map(|p| p.0).sum::<f64>() / k;
        let t_max = self.points.iter().map(|p| p.0).fold(0.0, f64::max);
        // log C(α) and the |x|² at which it is attained
        let top = |alpha: f64| {
            self.points
                .iter()
                .map(|&(r2, g)| (g + alpha * r2, r2))
                .fold((f64::NEG_INFINITY, 0.0), |best, v| if v.0 > best.0 { v } else { best })
        };
        let below_mean = |alpha: f64| top(alpha).1 <= t_mean;
        if !below_mean(0.0) {
            return Err(QftError::domain("field does not decay across its fit window"));
        }
        // Past this rate the outermost sample beats every sample inside the mean.
        let (lo_g, hi_g) = self
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
        let mut hi = 2.0 * ((hi_g - lo_g) / (t_max - t_mean)).max(1.0);
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if below_mean(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        if lo.is_nan() || lo <= 0.0 {
            return Err(QftError::domain("no positive decay rate fits under the envelope"));
        }
        let log_c = top(lo).0;
        Ok(DecayFit {
            alpha_hat: lo,
            c_hat: log_c.exp(),
            residual: self.residual(lo, log_c),
            window_count: self.points.len(),
        })
    }
}

/// Least-squares fit of `log|f|_Q ≈ log c − α|x|²` over samples above
/// `floor · max|f|_Q`.
pub fn fit_decay(f: &QSignal, floor: f64) -> Result<DecayFit> {
    Window::of_signal(f, floor)?.least_squares()
}

/// Envelope fit of a signal.
pub fn fit_envelope(f: &QSignal, floor: f64) -> Result<DecayFit> {
    Window::of_signal(f, floor)?.envelope()
}

/// Envelope fit of a spectrum, measured on the pointwise modulus `|F(ξ)|_Q` over
/// the frequency lattice.
pub fn fit_spectrum_envelope(spectrum: &[Quaternion], grid: &Grid2, floor: f64) -> Result<DecayFit> {
    let (xi1, xi2) = grid.freqs();
    let n1 = grid.n1;
    let r2 = (0..grid.len()).map(move |idx| xi1[idx % n1].powi(2) + xi2[idx / n1].powi(2));
    Window::new(r2, spectrum.iter().map(|q| q.modulus()), floor)?.envelope()
}

/// Smallest `C` with `|f(x)|_Q ≤ C e^{−α|x|²}` at every sample.
pub fn envelope_constant(f: &QSignal, alpha: f64) -> f64 {
    let g = f.grid;
    let (x1, x2) = g.coords();
    (0..g.len())
        .map(|idx| {
            let r2 = x1[idx % g.n1].powi(2) + x2[idx / g.n1].powi(2);
            f.data[idx].modulus() * (alpha * r2).exp()
        })
        .fold(0.0, f64::max)
}

pub fn hardy_classify(alpha: f64, beta: f64, band: f64) -> Result<HardyVerdict> {
    if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(QftError::domain(format!(
            "decay rates must be positive, got ({alpha}, {beta})"
        )));
    }
    if !(0.0..1.0).contains(&band) {
        return Err(QftError::domain(format!("band must lie in [0, 1), got {band}")));
    }
    let target = PI * PI;
    let product = alpha * beta;
    let margin = (product - target).abs() / target;
    let classification = if margin <= band {
        HardyCase::GaussianUnique
    } else if product > target {
        HardyCase::ZeroForced
    } else {
        HardyCase::ManySolutions
    };
    Ok(HardyVerdict {
        product,
        classification,
        margin,
    })
}

/// Envelope fits of `f` and of `|F{f}|_Q`, then the verdict on their product.
pub fn hardy_pipeline(f: &QSignal, band: f64) -> Result<(DecayFit, DecayFit, HardyVerdict)> {
    if !f.grid.is_continuum() {
        return Err(QftError::domain("hardy_pipeline needs a continuum grid"));
    }
    if f.data.iter().all(|q| *q == Quaternion::ZERO) {
        return Err(QftError::ZeroSignal);
    }
    let signal = fit_envelope(f, FIT_FLOOR)?;
    let spec = qdft_fast(f)?;
    let spectrum = fit_spectrum_envelope(&spec.data, &spec.grid, FIT_FLOOR)?;
    let verdict = hardy_classify(signal.alpha_hat, spectrum.alpha_hat, band)?;
    Ok((signal, spectrum, verdict))
}

/// A basis function offered as a solution of the case `αβ < π²`, with the fitted
/// envelopes of the function and of its transform.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyWitness {
    pub index: BasisIndex,
    pub signal: QSignal,
    pub signal_fit: DecayFit,
    pub spectrum_fit: DecayFit,
    /// `φ_{0,0}` is the Gaussian itself and sits on the boundary `αβ = π²`.
    pub degenerate: bool,
    /// Both fitted exponents lie strictly below `π`, or the witness is degenerate.
    pub certified: bool,
}

pub fn hardy_witness(idx: BasisIndex, grid: Grid2) -> Result<HardyWitness> {
    let signal = phi_signal(idx, grid)?;
    let signal_fit = fit_envelope(&signal, FIT_FLOOR)?;
    let spec = qdft_fast(&signal)?;
    let spectrum_fit = fit_spectrum_envelope(&spec.data, &spec.grid, FIT_FLOOR)?;
    let degenerate = idx.k == 0 && idx.l == 0;
    let certified = degenerate || (signal_fit.alpha_hat < PI && spectrum_fit.alpha_hat < PI);
    Ok(HardyWitness {
        index: idx,
        signal,
        signal_fit,
        spectrum_fit,
        degenerate,
        certified,
    })
}

/// Square grid whose spatial and frequency lattices coincide (`d = 1/(n·d)`), so
/// a field and its transform are sampled at the same points.
pub fn self_dual_grid() -> Grid2 {
    Grid2::square(144, 6.0).expect("valid grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gaussian, sample};
    use crate::hermite::phi;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn least_squares_on_exact_gaussian() {
        let g = Grid2::default_continuum();
        let f = sample(|a, b| Quaternion::real(3.0 * (-2.0 * (a * a + b * b)).exp()), g).unwrap();
        let fit = fit_decay(&f, FIT_FLOOR).unwrap();
        assert!((fit.alpha_hat - 2.0).abs() <= 1e-9);
        assert!((fit.c_hat - 3.0).abs() <= 1e-9);
        assert!(fit.residual <= 1e-9);
        assert!(fit.window_count >= MIN_WINDOW);
    }

    #[test]
    fn least_squares_tolerates_small_noise() {
        let g = Grid2::default_continuum();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let mut f = gaussian(PI, g).unwrap();
        for q in &mut f.data {
            q.w += rng.gen_range(-1e-6..1e-6);
        }
        let fit = fit_decay(&f, 1e-3).unwrap();
        assert!(rel(fit.alpha_hat, PI) <= 0.01, "{fit:?}");
    }

    #[test]
    fn too_little_support() {
        let g = Grid2::default_continuum();
        assert!(matches!(
            fit_decay(&QSignal::zeros(g), FIT_FLOOR),
            Err(QftError::InsufficientSupport { found: 0, .. })
        ));
        let mut spike = QSignal::zeros(g);
        spike.data[g.index(64, 64)] = Quaternion::ONE;
        assert!(matches!(fit_envelope(&spike, FIT_FLOOR), Err(QftError::InsufficientSupport { .. })));
        assert!(fit_decay(&gaussian(PI, g).unwrap(), 0.0).is_err());
    }

    #[test]
    fn envelope_is_exact_on_gaussians_with_quaternion_amplitude() {
        let g = Grid2::default_continuum();
        let a = Quaternion::new(0.3, -1.2, 0.5, 2.0);
        for alpha in [0.7, 2.0, PI, 6.0] {
            let f = gaussian(alpha, g).unwrap().left_mul(a);
            let fit = fit_envelope(&f, FIT_FLOOR).unwrap();
            assert!(rel(fit.alpha_hat, alpha) <= 1e-9, "{alpha}: {fit:?}");
            assert!(rel(fit.c_hat, a.modulus()) <= 1e-9);
            assert!(fit.residual <= 1e-8);
        }
    }

    #[test]
    fn classify_examples() {
        let v = hardy_classify(PI, PI, HARDY_BAND).unwrap();
        assert_eq!(v.classification, HardyCase::GaussianUnique);
        assert!(v.margin <= 1e-15);
        assert_eq!(hardy_classify(2.0 * PI, 2.0 * PI, HARDY_BAND).unwrap().classification, HardyCase::ZeroForced);
        assert_eq!(
            hardy_classify(PI / 2.0, PI / 2.0, HARDY_BAND).unwrap().classification,
            HardyCase::ManySolutions
        );
        let edge = PI * PI * 1.019;
        assert_eq!(hardy_classify(edge, 1.0, HARDY_BAND).unwrap().classification, HardyCase::GaussianUnique);
        assert_eq!(hardy_classify(edge, 1.0, 0.01).unwrap().classification, HardyCase::ZeroForced);
        assert!(hardy_classify(0.0, 1.0, HARDY_BAND).is_err());
        assert!(hardy_classify(1.0, -2.0, HARDY_BAND).is_err());
    }

    proptest! {
        #[test]
        fn classify_is_scale_consistent(a in 0.05f64..50.0, b in 0.05f64..50.0, s in 0.1f64..10.0) {
            let v = hardy_classify(a, b, HARDY_BAND).unwrap();
            let w = hardy_classify(a * s, b / s, HARDY_BAND).unwrap();
            prop_assume!((v.margin - HARDY_BAND).abs() > 1e-9);
            prop_assert_eq!(v.classification, w.classification);
        }
    }

    #[test]
    fn pipeline_scaling_law() {
        let g = Grid2::default_continuum();
        for alpha in [1.0, 2.0, PI, 5.0] {
            let (sf, pf, v) = hardy_pipeline(&gaussian(alpha, g).unwrap(), HARDY_BAND).unwrap();
            assert!(rel(sf.alpha_hat, alpha) <= 1e-6);
            assert!(rel(pf.alpha_hat, PI * PI / alpha) <= 1e-6);
            assert!(v.margin <= 0.02);
            assert_eq!(v.classification, HardyCase::GaussianUnique);
        }
    }

    #[test]
    fn pipeline_on_hermite_function() {
        let f = phi_signal(BasisIndex::new(2, 2).unwrap(), Grid2::default_continuum()).unwrap();
        let (_, _, v) = hardy_pipeline(&f, HARDY_BAND).unwrap();
        assert!(v.product < PI * PI);
        assert_eq!(v.classification, HardyCase::ManySolutions);
        assert!(matches!(
            hardy_pipeline(&QSignal::zeros(Grid2::default_continuum()), HARDY_BAND),
            Err(QftError::ZeroSignal)
        ));
    }

    #[test]
    fn degenerate_witness_is_the_gaussian() {
        let g = self_dual_grid();
        let w = hardy_witness(BasisIndex::new(0, 0).unwrap(), g).unwrap();
        assert!(w.degenerate && w.certified);
        assert!(w.signal.max_abs_diff(&gaussian(PI, g).unwrap()) <= 1e-15);
        assert!(rel(w.signal_fit.alpha_hat, PI) <= 1e-9);
    }

    #[test]
    fn witness_one_one_keeps_its_modulus() {
        let g = Grid2::default_continuum();
        let w = hardy_witness(BasisIndex::new(1, 1).unwrap(), g).unwrap();
        let spec = qdft_fast(&w.signal).unwrap();
        for v in 0..g.n2 {
            for u in 0..g.n1 {
                let want = (phi(1, g.xi1(u)).unwrap() * phi(1, g.xi2(v)).unwrap()).abs();
                assert!((spec.at(u, v).modulus() - want).abs() <= 1e-6);
            }
        }
        assert!(w.certified && !w.degenerate);
    }

    #[test]
    fn witness_four_two_fits_under_half_pi() {
        let g = Grid2::default_continuum();
        let w = hardy_witness(BasisIndex::new(4, 2).unwrap(), g).unwrap();
        let alpha = PI / 2.0;
        let c = envelope_constant(&w.signal, alpha);
        assert!(c.is_finite() && c > 0.0);
        let (x1, x2) = g.coords();
        for idx in 0..g.len() {
            let r2 = x1[idx % g.n1].powi(2) + x2[idx / g.n1].powi(2);
            assert!(w.signal.data[idx].modulus() <= c * (-alpha * r2).exp() * (1.0 + 1e-12));
        }
        assert!(w.signal_fit.alpha_hat > alpha && w.spectrum_fit.alpha_hat > alpha);
    }

    #[test]
    fn hermite_witnesses_match_on_both_sides() {
        let g = self_dual_grid();
        for k in 0..=6 {
            for l in 0..=6 {
                let w = hardy_witness(BasisIndex::new(k, l).unwrap(), g).unwrap();
                let (a, b) = (w.signal_fit.alpha_hat, w.spectrum_fit.alpha_hat);
                assert!(rel(b, a) <= 0.01, "({k},{l}) {a} {b}");
                assert!(w.certified);
                if k + l > 0 {
                    assert!(a < PI && b < PI, "({k},{l}) {a} {b}");
                    let v = hardy_classify(a, b, HARDY_BAND).unwrap();
                    assert_eq!(v.classification, HardyCase::ManySolutions);
                }
            }
        }
    }
}
