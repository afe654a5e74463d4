//! Fourier analysis on ℤ/Nℤ.
//!
//! Conventions: characters are `x ↦ e^{2πixγ/N}` for `γ ∈ ℤ/Nℤ`, and the
//! transform is normalised by Haar probability measure,
//! `f̂(γ) = (1/N) Σ_x f(x) e^{-2πixγ/N}`, with inverse
//! `f(x) = Σ_γ f̂(γ) e^{2πixγ/N}`.
//!
//! Bohr sets use the strict inequality `|e^{2πixλ/N} - 1| < δ` for every
//! `λ ∈ Λ`. The chord length is evaluated as `2 sin(π·min(k, N-k)/N)` with
//! `k = xλ mod N`, which makes `B` exactly symmetric; a chord that equals `δ`
//! up to rounding may land on either side of the boundary.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::colouring::{Colouring, Ground};
use crate::error::{Error, Result};
use num_integer::Integer;

pub const BOHR_BUDGET: u64 = 10_000_000;

/// Doubling constant used for Bohr sets: `μ(B(Λ,2δ)) ≤ 16^d μ(B(Λ,δ))`.
pub const DOUBLING_BASE: f64 = 16.0;

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    if buf.is_empty() {
        return;
    }
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    fft.process(buf);
}

/// Normalised transform `f̂(γ) = (1/N) Σ_x f(x) e^{-2πixγ/N}`.
pub fn dft(f: &[Complex64]) -> Vec<Complex64> {
    let mut buf = f.to_vec();
    fft_in_place(&mut buf, false);
    let scale = 1.0 / f.len().max(1) as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Inverse of [`dft`]: `f(x) = Σ_γ f̂(γ) e^{2πixγ/N}`.
pub fn inverse_dft(fhat: &[Complex64]) -> Vec<Complex64> {
    let mut buf = fhat.to_vec();
    fft_in_place(&mut buf, true);
    buf
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Brute,
    Convolution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleCountReport {
    pub modulus: u64,
    pub a: u64,
    /// `|{(x,y,z) ∈ A_j³ : a·x ≡ y - z}|` for each colour class `A_j`.
    pub per_class: Vec<u64>,
    pub total: u64,
    pub method: CountMethod,
    /// Classes where the convolution path failed its rounding check and was
    /// recomputed directly.
    pub fallbacks: usize,
}

/// `c(t) = |{(y, z) ∈ A² : y - z ≡ t}|` by direct double loop.
pub fn autocorrelation_brute(class: &[u64], n: u64) -> Vec<u64> {
    let mut c = vec![0u64; n as usize];
    for &y in class {
        for &z in class {
            c[((y + n - z) % n) as usize] += 1;
        }
    }
    c
}

/// The same autocorrelation through the FFT. `None` when some value is not
/// within 0.25 of an integer.
pub fn autocorrelation_fft(class: &[u64], n: u64) -> Option<Vec<u64>> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n as usize];
    for &x in class {
        buf[x as usize] = Complex64::new(1.0, 0.0);
    }
    fft_in_place(&mut buf, false);
    // |F(γ)|² transforms back to N · Σ_y 1_A(y) 1_A(y - t).
    buf.iter_mut().for_each(|v| *v = Complex64::new(v.norm_sqr(), 0.0));
    fft_in_place(&mut buf, true);
    let scale = 1.0 / n as f64;
    buf.iter()
        .map(|v| {
            let x = v.re * scale;
            let rounded = x.round();
            ((x - rounded).abs() < 0.25 && v.im.abs() * scale < 0.25 && rounded >= 0.0).then_some(rounded as u64)
        })
        .collect()
}

fn count_class(class: &[u64], n: u64, a: u64, method: CountMethod) -> (u64, bool) {
    let (c, fell_back) = match method {
        CountMethod::Brute => (autocorrelation_brute(class, n), false),
        CountMethod::Convolution => match autocorrelation_fft(class, n) {
            Some(c) => (c, false),
            None => (autocorrelation_brute(class, n), true),
        },
    };
    let count = class.iter().map(|&x| c[((a as u128 * x as u128) % n as u128) as usize]).sum();
    (count, fell_back)
}

/// Counts monochromatic solutions of `a·x ≡ y - z (mod N)` for a colouring of
/// all of ℤ/Nℤ. Classes are processed in parallel; each class sums in a fixed
/// order so the result does not depend on the thread count.
pub fn count_monochromatic_triples(colouring: &Colouring, a: u64, method: CountMethod) -> Result<TripleCountReport> {
    let Ground::ZMod(n) = colouring.ground() else {
        return Err(Error::InvalidInput(format!(
            "triple counting needs a colouring of zmod:N, got {}",
            colouring.ground()
        )));
    };
    if a.gcd(&n) != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    let classes = colouring.classes();
    let results: Vec<(u64, bool)> = classes.par_iter().map(|cl| count_class(cl, n, a % n, method)).collect();
    let per_class: Vec<u64> = results.iter().map(|r| r.0).collect();
    Ok(TripleCountReport {
        modulus: n,
        a,
        total: per_class.iter().sum(),
        per_class,
        method,
        fallbacks: results.iter().filter(|r| r.1).count(),
    })
}

fn chord(k: u64, n: u64) -> f64 {
    let k = k % n;
    let k = k.min(n - k);
    2.0 * (std::f64::consts::PI * k as f64 / n as f64).sin()
}

/// `B(Λ, δ) ⊂ ℤ/Nℤ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BohrSet {
    modulus: u64,
    frequencies: Vec<u64>,
    width: f64,
}

impl BohrSet {
    /// Frequencies are reduced mod `N` and deduplicated.
    pub fn new(modulus: u64, frequencies: &[u64], width: f64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::InvalidInput(format!("width must be positive, got {width}")));
        }
        let mut frequencies: Vec<u64> = frequencies.iter().map(|f| f % modulus).collect();
        frequencies.sort_unstable();
        frequencies.dedup();
        Ok(BohrSet { modulus, frequencies, width })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequencies
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// The same frequencies at another width.
    pub fn with_width(&self, width: f64) -> Result<Self> {
        BohrSet::new(self.modulus, &self.frequencies, width)
    }

    pub fn contains(&self, x: u64) -> bool {
        let n = self.modulus;
        self.frequencies
            .iter()
            .all(|&l| chord(((x % n) as u128 * l as u128 % n as u128) as u64, n) < self.width)
    }

    pub fn members(&self) -> Result<Vec<u64>> {
        if self.modulus > BOHR_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "Bohr set enumeration",
                size: self.modulus as u128,
                limit: BOHR_BUDGET as u128,
            });
        }
        Ok((0..self.modulus).filter(|&x| self.contains(x)).collect())
    }

    /// `μ_G(B) = |B| / N`.
    pub fn measure(&self) -> Result<f64> {
        Ok(self.members()?.len() as f64 / self.modulus as f64)
    }
}

pub fn bohr_members(b: &BohrSet) -> Result<Vec<u64>> {
    b.members()
}

/// `{a + b mod N}` as a sorted list.
pub fn sumset(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    let mut hit = vec![false; n as usize];
    for &x in a {
        for &y in b {
            hit[((x + y) % n) as usize] = true;
        }
    }
    (0..n).filter(|&x| hit[x as usize]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BohrBounds {
    /// `|Λ|`, at least 1.
    pub d: usize,
    pub measure: f64,
    /// `(δ/2π)^d`.
    pub lower_bound: f64,
    pub lower_ok: bool,
    /// `μ(B(Λ,2δ)) / μ(B(Λ,δ))`.
    pub doubling_ratio: f64,
    /// `16^d`.
    pub doubling_bound: f64,
    pub doubling_ok: bool,
}

fn effective_dimension(b: &BohrSet) -> usize {
    b.frequencies.len().max(1)
}

/// Measures `B(Λ,δ)` against `(δ/2π)^d` and `B(Λ,2δ)` against `16^d · μ(B(Λ,δ))`.
pub fn bohr_bounds_check(modulus: u64, frequencies: &[u64], delta: f64) -> Result<BohrBounds> {
    let b = BohrSet::new(modulus, frequencies, delta)?;
    let d = effective_dimension(&b);
    let measure = b.measure()?;
    let doubled = b.with_width(2.0 * delta)?.measure()?;
    let lower_bound = (delta / (2.0 * std::f64::consts::PI)).powi(d as i32);
    let doubling_ratio = doubled / measure;
    let doubling_bound = DOUBLING_BASE.powi(d as i32);
    Ok(BohrBounds {
        d,
        measure,
        lower_bound,
        lower_ok: measure >= lower_bound,
        doubling_ratio,
        doubling_bound,
        doubling_ok: doubling_ratio <= doubling_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularPair {
    pub delta_star: f64,
    pub delta_prime: f64,
    /// Smallest `k` with `16^{1/k} ≤ 1 + η`.
    pub k: usize,
    /// Position `i` of `δ* = δ/2 + i·δ'` in the scan.
    pub index: usize,
    pub star_measure: f64,
    /// `μ(B(Λ,δ*) + B(Λ,δ'))`, computed directly.
    pub sumset_measure: f64,
}

/// Finds widths `δ* ∈ [δ/2, δ]` and `δ' = δ/(2kd)` with
/// `μ(B(Λ,δ*) + B(Λ,δ')) ≤ (1+η) μ(B(Λ,δ*))` and `B(Λ,δ') ⊆ B(Λ,δ*)`.
///
/// Scans `δ_i = δ/2 + iδ'` for `i < kd` and takes the first `i` with
/// `μ(B(Λ,δ_i+δ')) ≤ (1+η) μ(B(Λ,δ_i))`; the ratios telescope to at most
/// `16^d`, so one of the `kd` factors is at most `16^{1/k} ≤ 1+η`. Both
/// conclusions are then checked by enumerating the sumset.
pub fn regular_pair(modulus: u64, frequencies: &[u64], delta: f64, eta: f64) -> Result<RegularPair> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidInput(format!("eta must lie in (0, 1], got {eta}")));
    }
    let base = BohrSet::new(modulus, frequencies, delta)?;
    let d = effective_dimension(&base);
    let k = (DOUBLING_BASE.ln() / (1.0 + eta).ln()).ceil().max(1.0) as usize;
    let delta_prime = delta / (2 * k * d) as f64;
    let small = base.with_width(delta_prime)?.members()?;
    for i in 0..k * d {
        let delta_i = delta / 2.0 + i as f64 * delta_prime;
        let star = base.with_width(delta_i)?.members()?;
        let grown = base.with_width(delta_i + delta_prime)?.members()?;
        if grown.len() as f64 > (1.0 + eta) * star.len() as f64 {
            continue;
        }
        let sum = sumset(&star, &small, modulus);
        let nested = small.iter().all(|x| star.binary_search(x).is_ok());
        if !nested || sum.len() as f64 > (1.0 + eta) * star.len() as f64 {
            return Err(Error::InvalidWitness(format!(
                "regular pair at i = {i} fails direct verification (nested = {nested})"
            )));
        }
        let n = modulus as f64;
        return Ok(RegularPair {
            delta_star: delta_i,
            delta_prime,
            k,
            index: i,
            star_measure: star.len() as f64 / n,
            sumset_measure: sum.len() as f64 / n,
        });
    }
    Err(Error::ScanExhausted)
}

/// Relative slack when comparing coefficient magnitudes against the threshold.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub epsilon: f64,
    pub modulus: u64,
    pub base_size: usize,
    /// `μ_{B0}(S ∩ B0)`.
    pub relative_density: f64,
    /// `γ` with `|(1_S dμ_{B0})^(γ)| ≥ ε μ_{B0}(S)`, ascending.
    pub frequencies: Vec<u64>,
    /// `⌊4 ε⁻² μ_{B0}(S)⁻¹⌋`, the Parseval-style size scale (reported only).
    pub parseval_scale: Option<f64>,
}

/// `|(1_S dμ_{B0})^(γ)|` for every `γ`, i.e. `|Σ_{x∈S∩B0} e^{-2πixγ/N}| / |B0|`.
pub fn local_coefficients(modulus: u64, set: &[u64], base: &[u64]) -> Result<Vec<f64>> {
    if base.is_empty() {
        return Err(Error::EmptyBase);
    }
    let n = modulus as usize;
    let mut in_base = vec![false; n];
    for &x in base {
        in_base[(x % modulus) as usize] = true;
    }
    let mut f = vec![Complex64::new(0.0, 0.0); n];
    for &x in set {
        let x = (x % modulus) as usize;
        if in_base[x] {
            f[x] = Complex64::new(1.0, 0.0);
        }
    }
    let scale = modulus as f64 / in_base.iter().filter(|&&b| b).count() as f64;
    Ok(dft(&f).iter().map(|c| c.norm() * scale).collect())
}

/// The large spectrum of `S` relative to the base set `B0`.
pub fn large_spectrum(modulus: u64, set: &[u64], base: &[u64], epsilon: f64) -> Result<Spectrum> {
    if modulus == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
    }
    let coefficients = local_coefficients(modulus, set, base)?;
    let mut base_sorted: Vec<u64> = base.iter().map(|x| x % modulus).collect();
    base_sorted.sort_unstable();
    base_sorted.dedup();
    let mut restricted: Vec<u64> = set
        .iter()
        .map(|x| x % modulus)
        .filter(|x| base_sorted.binary_search(x).is_ok())
        .collect();
    restricted.sort_unstable();
    restricted.dedup();
    let relative_density = restricted.len() as f64 / base_sorted.len() as f64;
    let threshold = epsilon * relative_density * (1.0 - SPECTRUM_TOLERANCE);
    let frequencies = (0..modulus).filter(|&g| coefficients[g as usize] >= threshold).collect();
    Ok(Spectrum {
        epsilon,
        modulus,
        base_size: base_sorted.len(),
        relative_density,
        frequencies,
        parseval_scale: (relative_density > 0.0).then(|| (4.0 / (epsilon * epsilon * relative_density)).floor()),
    })
}
