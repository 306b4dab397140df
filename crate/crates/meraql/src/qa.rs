//! Quasi-adiabatic continuation for quadratic Majorana Hamiltonians.
//!
//! The flow generator is built from a filter function F̃(ω) that is odd,
//! smooth, equals -1/ω exactly for |ω| ≥ 1, and whose time-domain kernel
//! decays subexponentially. F̃(ω) = -(1 - g̃(ω))/ω where g̃ is a normalized
//! convolution of boxes with half-widths ρ_n ∝ 1/(n log(2+n)), truncated
//! and rescaled so the support sums to just under 1.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

use crate::dense::C64;

/// Compactly supported filter: g̃ on a symmetric grid over [-1, 1] plus the
/// box half-widths defining the time-domain kernel.
#[derive(Debug, Clone)]
pub struct FilterFunction {
    rhos: Vec<f64>,
    grid: Vec<f64>,
    d_omega: f64,
}

impl FilterFunction {
    /// Builds the filter from `n_max` box factors on a grid of `n_grid`
    /// points (odd, ≥ 1025 recommended). The half-widths are
    /// `ρ_n = c·e / (2 n log(2+n))` with c fixed so Σρ_n = 1 - 1e-9.
    pub fn build(n_max: usize, n_grid: usize) -> Result<FilterFunction> {
        if n_max < 2 || n_grid < 129 || n_grid % 2 == 0 {
            return Err(Error::invalid(
                "filter needs n_max ≥ 2 and an odd grid of at least 129 points",
            ));
        }
        let eps = |n: f64| 1.0 / ((2.0 + n) * (2.0 + n)).ln();
        let raw: Vec<f64> = (1..=n_max)
            .map(|n| std::f64::consts::E * eps(n as f64) / n as f64)
            .collect();
        let total: f64 = raw.iter().sum();
        let c = (1.0 - 1e-9) / total;
        let rhos: Vec<f64> = raw.iter().map(|r| c * r).collect();

        // g̃_raw = box_1 * box_2 * ... (each box has unit integral and
        // half-width ρ_n), sampled on [-1, 1]; normalized so g̃(0) = 1.
        let d_omega = 2.0 / (n_grid - 1) as f64;
        let x = |i: usize| -1.0 + i as f64 * d_omega;
        let mut h = vec![0.0f64; n_grid];
        for (i, slot) in h.iter_mut().enumerate() {
            // Cell-averaged initial box.
            let (lo, hi) = (x(i) - d_omega / 2.0, x(i) + d_omega / 2.0);
            let overlap = (hi.min(rhos[0]) - lo.max(-rhos[0])).max(0.0);
            *slot = overlap / (2.0 * rhos[0] * d_omega);
        }
        for &rho in &rhos[1..] {
            h = box_convolve(&h, d_omega, rho);
        }
        let mid = (n_grid - 1) / 2;
        let n0 = h[mid];
        if n0 <= 0.0 {
            return Err(Error::invalid("filter normalization vanished"));
        }
        for v in h.iter_mut() {
            *v /= n0;
        }
        Ok(FilterFunction {
            rhos,
            grid: h,
            d_omega,
        })
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.rhos
    }

    /// g̃(ω): 1 at 0, even, smooth, identically 0 for |ω| ≥ 1.
    pub fn g_tilde(&self, w: f64) -> f64 {
        let w = w.abs();
        if w >= 1.0 {
            return 0.0;
        }
        let t = (w + 1.0) / self.d_omega;
        let i = t.floor() as usize;
        let frac = t - i as f64;
        if i + 1 >= self.grid.len() {
            return 0.0;
        }
        self.grid[i] * (1.0 - frac) + self.grid[i + 1] * frac
    }

    /// F̃(ω) = -(1 - g̃(ω))/ω, odd, exactly -1/ω for |ω| ≥ 1, 0 at 0.
    pub fn f_tilde(&self, w: f64) -> f64 {
        if w == 0.0 {
            return 0.0;
        }
        -(1.0 - self.g_tilde(w)) / w
    }

    /// Time-domain kernel (up to normalization): Π_n sinc(ρ_n y).
    pub fn g_time(&self, y: f64) -> f64 {
        self.rhos
            .iter()
            .map(|&r| {
                let a = r * y;
                if a.abs() < 1e-12 {
                    1.0
                } else {
                    a.sin() / a
                }
            })
            .product()
    }
}

/// Continuous box convolution with half-width `rho` on a uniform grid
/// (trapezoid prefix integral with fractional endpoints; zero outside).
fn box_convolve(h: &[f64], d_omega: f64, rho: f64) -> Vec<f64> {
    let n = h.len();
    // Prefix trapezoid integral I[i] = ∫ up to x_i.
    let mut prefix = vec![0.0f64; n];
    for i in 1..n {
        prefix[i] = prefix[i - 1] + 0.5 * (h[i - 1] + h[i]) * d_omega;
    }
    let integral_at = |t: f64| -> f64 {
        // t in grid units from index 0, clamped (h = 0 outside).
        if t <= 0.0 {
            return 0.0;
        }
        if t >= (n - 1) as f64 {
            return prefix[n - 1];
        }
        let i = t.floor() as usize;
        let frac = t - i as f64;
        // Integral over the partial cell with linear h.
        let ha = h[i];
        let hb = h[i + 1];
        let hmid = ha + (hb - ha) * frac;
        prefix[i] + 0.5 * (ha + hmid) * frac * d_omega
    };
    let r = rho / d_omega;
    (0..n)
        .map(|i| (integral_at(i as f64 + r) - integral_at(i as f64 - r)) / (2.0 * rho))
        .collect()
}

/// Subexponential-decay diagnostic: envelope maxima of |g(y)| in
/// log-spaced bins over y ∈ [y_min, y_max], regressing
/// log(-log |g_env|) against log y. Returns the fitted slope (stretched-
/// exponential exponent); ~0.9 for the default filter.
pub fn time_decay_exponent(filter: &FilterFunction, y_min: f64, y_max: f64, bins: usize) -> f64 {
    assert!(y_min > 1.0 && y_max > y_min && bins >= 4);
    let mut pts = vec![];
    let log_lo = y_min.ln();
    let log_hi = y_max.ln();
    for b in 0..bins {
        let lo = (log_lo + (log_hi - log_lo) * b as f64 / bins as f64).exp();
        let hi = (log_lo + (log_hi - log_lo) * (b + 1) as f64 / bins as f64).exp();
        let mut env: f64 = 0.0;
        let steps = 2000;
        for s in 0..=steps {
            let y = lo + (hi - lo) * s as f64 / steps as f64;
            env = env.max(filter.g_time(y).abs());
        }
        if env > 0.0 && env < 1.0 {
            let yc = (lo * hi).sqrt();
            pts.push((yc.ln(), (-env.ln()).ln()));
        }
    }
    linear_slope(&pts)
}

fn linear_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Quasi-adiabatic flow generator for `H(λ) = (i/4) γᵀ A(λ) γ`: returns
/// the real antisymmetric K with `[D, γ_m] = i Σ_a K_{am} γ_a`, built in
/// the eigenbasis of iA with the filter applied to rescaled level
/// differences. For cross-gap pairs (|E_m - E_n| ≥ e_gap) this reproduces
/// first-order perturbation theory exactly.
pub fn continuation_generator(
    a: &DMatrix<f64>,
    da: &DMatrix<f64>,
    e_gap: f64,
    filter: &FilterFunction,
) -> Result<DMatrix<f64>> {
    if e_gap <= 0.0 {
        return Err(Error::invalid("e_gap must be positive"));
    }
    let n = a.nrows();
    let m = a.map(|x| C64::new(0.0, x));
    let (evals, evecs) = crate::dense::hermitian_eigen(&m)?;
    let dm = da.map(|x| C64::new(0.0, x));
    let b = evecs.adjoint() * dm * &evecs;
    let mut c = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let w = (evals[i] - evals[j]) / e_gap;
            c[(i, j)] = C64::new(0.0, -1.0) * b[(i, j)] * C64::new(filter.f_tilde(w) / e_gap, 0.0);
        }
    }
    let d = &evecs * c * evecs.adjoint();
    // K = -iD must be real antisymmetric.
    let k = d.map(|z| (C64::new(0.0, -1.0) * z).re);
    let res = d
        .iter()
        .map(|z| (C64::new(0.0, -1.0) * z).im.abs())
        .fold(0.0, f64::max);
    if res > 1e-8 {
        return Err(Error::invalid(format!(
            "generator has imaginary residual {res:.2e}"
        )));
    }
    Ok(k)
}

/// Orthogonal `exp(s K)` for real antisymmetric K, by scaling and squaring
/// with a Taylor series run to machine precision.
pub fn antisymmetric_exp(k: &DMatrix<f64>, s: f64) -> DMatrix<f64> {
    let n = k.nrows();
    let mut m = k * s;
    let norm = m.abs().max() * n as f64;
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    m /= 2f64.powi(squarings as i32);
    let mut result = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for order in 1..64 {
        term = &term * &m / order as f64;
        result += &term;
        if term.abs().max() < 1e-17 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Evolves a covariance matrix along the flow `dΓ/dλ = [Kᵀ(λ), Γ]` with a
/// midpoint exponential integrator: Γ ← Q Γ Qᵀ, Q = exp(-K(λ_mid) dλ).
pub fn evolve_covariance(
    gamma0: &DMatrix<f64>,
    a_of: impl Fn(f64) -> DMatrix<f64>,
    da_of: impl Fn(f64) -> DMatrix<f64>,
    e_gap: f64,
    filter: &FilterFunction,
    n_steps: usize,
) -> Result<DMatrix<f64>> {
    let mut gamma = gamma0.clone();
    let dl = 1.0 / n_steps as f64;
    for s in 0..n_steps {
        let lm = (s as f64 + 0.5) * dl;
        let k = continuation_generator(&a_of(lm), &da_of(lm), e_gap, filter)?;
        let q = antisymmetric_exp(&k, -dl);
        gamma = &q * gamma * q.transpose();
    }
    Ok(gamma)
}

/// Locality profile of a generator: for each radius R, the largest operator
/// norm over centers f of the block of K coupling the Majoranas at f to all
/// Majoranas at sites with torus graph (L1) distance ≥ R. `positions[m]`
/// gives the site coordinates of mode m on an `lx × ly` site torus.
pub fn locality_profile(
    k: &DMatrix<f64>,
    positions: &[(usize, usize)],
    lx: usize,
    ly: usize,
) -> Vec<(usize, f64)> {
    let n_modes = positions.len();
    assert_eq!(k.nrows(), 2 * n_modes);
    let dist = |a: (usize, usize), b: (usize, usize)| -> usize {
        let dx = (a.0 as isize - b.0 as isize).rem_euclid(lx as isize) as usize;
        let dy = (a.1 as isize - b.1 as isize).rem_euclid(ly as isize) as usize;
        dx.min(lx - dx) + dy.min(ly - dy)
    };
    let r_max = lx / 2 + ly / 2;
    let mut out = vec![];
    for radius in 1..=r_max {
        let mut worst: f64 = 0.0;
        for c in 0..n_modes {
            // 2 × (2·far) block: rows are the center's Majoranas.
            let far: Vec<usize> = (0..n_modes)
                .filter(|&m| dist(positions[c], positions[m]) >= radius)
                .collect();
            if far.is_empty() {
                continue;
            }
            // Largest singular value of the 2 × 2f block via the 2×2 Gram
            // matrix.
            let mut g = [[0.0f64; 2]; 2];
            for &m in &far {
                for col in [2 * m, 2 * m + 1] {
                    let r0 = k[(2 * c, col)];
                    let r1 = k[(2 * c + 1, col)];
                    g[0][0] += r0 * r0;
                    g[0][1] += r0 * r1;
                    g[1][1] += r1 * r1;
                }
            }
            g[1][0] = g[0][1];
            let tr = g[0][0] + g[1][1];
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
            worst = worst.max((tr / 2.0 + disc).sqrt());
        }
        out.push((radius, worst));
    }
    out
}

/// Log-log slope of a (radius, norm) profile, ignoring zero entries.
pub fn profile_slope(profile: &[(usize, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .filter(|(_, v)| *v > 1e-300)
        .map(|&(r, v)| ((r as f64).ln(), v.ln()))
        .collect();
    linear_slope(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdg::{ground_covariance, interp_real_space, majorana_form, PipParams};
    use crate::lattice::Dir;
    use approx::assert_relative_eq;

    fn default_filter() -> FilterFunction {
        FilterFunction::build(192, 4097).unwrap()
    }

    #[test]
    fn filter_has_unit_value_compact_support_and_odd_f() {
        let f = default_filter();
        assert_relative_eq!(f.g_tilde(0.0), 1.0, epsilon = 1e-12);
        assert_eq!(f.g_tilde(1.0), 0.0);
        assert_eq!(f.g_tilde(-1.2), 0.0);
        assert_relative_eq!(f.f_tilde(2.0), -0.5, epsilon = 1e-15);
        assert_relative_eq!(f.f_tilde(-2.0), 0.5, epsilon = 1e-15);
        for w in [0.1, 0.35, 0.8] {
            assert_relative_eq!(f.f_tilde(w), -f.f_tilde(-w), epsilon = 1e-12);
        }
        // Sum of half-widths stays strictly inside the unit support budget.
        let total: f64 = f.half_widths().iter().sum();
        assert!(total < 1.0 && total > 1.0 - 1e-6);
        // F̃ is bounded through ω → 0 (g̃ is flat at the top).
        assert!(f.f_tilde(1e-3).abs() < 0.1);
    }

    #[test]
    fn time_kernel_decays_subexponentially() {
        let f = default_filter();
        let slope = time_decay_exponent(&f, 10.0, 200.0, 16);
        assert!(slope > 0.5, "stretched exponent too small: {slope}");
        assert!(slope < 1.0, "kernel cannot decay exponentially: {slope}");
    }

    #[test]
    fn flow_transports_the_exact_ground_covariance() {
        // Quadratic interpolation on a small torus: quasi-adiabatic
        // continuation is exact up to integrator error.
        let p = PipParams::default();
        let (lx, ly) = (2, 2);
        let n_modes = 2 * lx * ly;
        let a0 = majorana_form(n_modes, &interp_real_space(&p, Dir::X, 0.0, lx, ly)).unwrap();
        let a1 = majorana_form(n_modes, &interp_real_space(&p, Dir::X, 1.0, lx, ly)).unwrap();
        let da = &a1 - &a0;
        let a_of = |l: f64| &a0 + &da * l;
        let filter = default_filter();
        let g0 = ground_covariance(&a_of(0.0), 1e-8).unwrap();
        let g_exact = ground_covariance(&a_of(1.0), 1e-8).unwrap();
        // Conservative gap rescale (single-particle gap is ≥ 2 here).
        let e_gap = 1.5;
        let err_at = |steps: usize| -> f64 {
            let g = evolve_covariance(&g0, a_of, |_| da.clone(), e_gap, &filter, steps).unwrap();
            (&g - &g_exact).abs().max()
        };
        let e1 = err_at(64);
        let e2 = err_at(128);
        assert!(e1 < 1e-2, "coarse evolution error too large: {e1}");
        assert!(
            e2 < e1 / 3.0,
            "midpoint integrator must converge at least quadratically: {e1} -> {e2}"
        );
    }

    #[test]
    fn generator_matches_first_order_perturbation_theory_across_the_gap() {
        // Two modes with energies split well beyond e_gap: the generator's
        // cross-gap block must be exactly the adiabatic (1/ΔE) element.
        use rand::prelude::*;
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        let filter = default_filter();
        for _ in 0..5 {
            let n = 8;
            let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
            // Diagonal-in-modes Hamiltonian with energies in ±[2, 3].
            let es: Vec<f64> = (0..n).map(|_| rng.gen_range(2.0..3.0)).collect();
            for (j, &e) in es.iter().enumerate() {
                a[(2 * j, 2 * j + 1)] = e;
                a[(2 * j + 1, 2 * j)] = -e;
            }
            let mut da = DMatrix::<f64>::zeros(2 * n, 2 * n);
            for i in 0..2 * n {
                for j in i + 1..2 * n {
                    let v: f64 = rng.gen_range(-0.5..0.5);
                    da[(i, j)] = v;
                    da[(j, i)] = -v;
                }
            }
            let e_gap = 1.9;
            let k = continuation_generator(&a, &da, e_gap, &filter).unwrap();
            // Reference: project onto eigenbasis and apply -1/ω by hand for
            // cross-gap pairs.
            let m = a.map(|x| C64::new(0.0, x));
            let (evals, evecs) = crate::dense::hermitian_eigen(&m).unwrap();
            let b = evecs.adjoint() * da.map(|x| C64::new(0.0, x)) * &evecs;
            let kb = evecs.adjoint() * k.map(|x| C64::new(x, 0.0)) * &evecs;
            for i in 0..2 * n {
                for j in 0..2 * n {
                    let de = evals[i] - evals[j];
                    if de.abs() >= 2.0 * e_gap {
                        // V†KV = -iC = (-i)(-i) B (-1/ΔE) = B/ΔE.
                        let want = b[(i, j)] / C64::new(de, 0.0);
                        assert!(
                            (kb[(i, j)] - want).norm() < 1e-9,
                            "cross-gap element mismatch: {} vs {want}",
                            kb[(i, j)]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn generator_is_quasi_local_on_a_small_torus() {
        let p = PipParams::default();
        let (lx, ly) = (4, 8); // fine lattice 8×8
        let n_modes = 2 * lx * ly;
        let a0 = majorana_form(n_modes, &interp_real_space(&p, Dir::X, 0.5, lx, ly)).unwrap();
        let a1 = majorana_form(n_modes, &interp_real_space(&p, Dir::X, 1.0, lx, ly)).unwrap();
        let da = &a1 - majorana_form(n_modes, &interp_real_space(&p, Dir::X, 0.0, lx, ly)).unwrap();
        let filter = default_filter();
        let k = continuation_generator(&a0, &da, 1.0, &filter).unwrap();
        let positions: Vec<(usize, usize)> = (0..n_modes)
            .map(|m| {
                let cell = m / 2;
                let site = m % 2;
                let (cx, cy) = (cell % lx, cell / lx);
                (2 * cx + site, cy)
            })
            .collect();
        let profile = locality_profile(&k, &positions, 2 * lx, ly);
        assert!(profile.len() >= 3);
        // Norm decays with radius.
        assert!(profile.last().unwrap().1 < 0.2 * profile[0].1);
        let slope = profile_slope(&profile);
        assert!(slope < -2.0, "profile too flat: {slope} ({profile:?})");
    }
}
