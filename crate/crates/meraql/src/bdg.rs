//! Quadratic (Bogoliubov-de Gennes) fermion problems: chiral p+ip pairing
//! models, the interpolated coarse-graining Hamiltonian in momentum and
//! real space, band gaps, Chern numbers, Pfaffians, and Gaussian
//! ground-state covariance matrices.
//!
//! Conventions: `c_j = (γ_{2j} + i γ_{2j+1})/2`; a quadratic Hamiltonian is
//! `H = (i/4) γ^T A γ` with A real antisymmetric; single-particle energies
//! are the eigenvalues of `iA`, and the ground-state covariance
//! `Γ_ab = ⟨(i/2)[γ_a, γ_b]⟩` is `Γ = i sgn(iA)`.

use crate::boson::{MajoranaPolynomial, Species};
use crate::dense::C64;
use crate::error::{Error, Result};
use crate::lattice::Dir;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// Parameters of the chiral pairing model and its trivial-layer partner.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct PipParams {
    /// Hopping amplitude.
    pub t: f64,
    /// Pairing amplitude (x-links real, y-links +i).
    pub delta: f64,
    /// Chemical potential of the chiral layer.
    pub mu: f64,
    /// Chemical potential of the trivial (emptied) sublattice.
    pub mu_prime: f64,
}

impl Default for PipParams {
    fn default() -> Self {
        PipParams {
            t: 1.0,
            delta: 1.0,
            mu: -2.0,
            mu_prime: -8.0,
        }
    }
}

/// A two-site Bloch model: hoppings and pairings between unit-cell sites
/// with integer cell displacements. Each physical bond is stored once; the
/// Hermitian/antisymmetric completion happens in `bdg_block`.
#[derive(Debug, Clone, Default)]
struct CellModel {
    sites: usize,
    /// (a, b, (dx, dy), amplitude): amplitude c†_{a, R+d} c_{b, R}.
    hops: Vec<(usize, usize, (i32, i32), C64)>,
    /// (a, b, (dx, dy), amplitude): amplitude c†_{a, R+d} c†_{b, R}.
    pairs: Vec<(usize, usize, (i32, i32), C64)>,
    /// On-site energies.
    onsite: Vec<f64>,
}

impl CellModel {
    fn new(sites: usize) -> Self {
        CellModel {
            sites,
            onsite: vec![0.0; sites],
            ..Default::default()
        }
    }

    fn scaled(&self, s: f64) -> CellModel {
        let sc = C64::new(s, 0.0);
        CellModel {
            sites: self.sites,
            hops: self.hops.iter().map(|&(a, b, d, c)| (a, b, d, c * sc)).collect(),
            pairs: self.pairs.iter().map(|&(a, b, d, c)| (a, b, d, c * sc)).collect(),
            onsite: self.onsite.iter().map(|&o| o * s).collect(),
        }
    }

    fn add(&self, other: &CellModel) -> CellModel {
        assert_eq!(self.sites, other.sites);
        let mut out = self.clone();
        out.hops.extend_from_slice(&other.hops);
        out.pairs.extend_from_slice(&other.pairs);
        for (a, b) in out.onsite.iter_mut().zip(&other.onsite) {
            *a += b;
        }
        out
    }

    /// BdG block at momentum k in the basis
    /// `(c_{0,k}, …, c_{s-1,k}, c†_{0,-k}, …, c†_{s-1,-k})`.
    fn bdg_block(&self, kx: f64, ky: f64) -> DMatrix<C64> {
        let s = self.sites;
        let h = |kx: f64, ky: f64| -> DMatrix<C64> {
            let mut m = DMatrix::<C64>::zeros(s, s);
            for &(a, b, (dx, dy), amp) in &self.hops {
                let ph = C64::new(0.0, -(kx * dx as f64 + ky * dy as f64)).exp();
                m[(a, b)] += amp * ph;
                m[(b, a)] += (amp * ph).conj();
            }
            for (a, &o) in self.onsite.iter().enumerate() {
                m[(a, a)] += C64::new(o, 0.0);
            }
            m
        };
        let mut d = DMatrix::<C64>::zeros(s, s);
        for &(a, b, (dx, dy), amp) in &self.pairs {
            let phk = C64::new(0.0, -(kx * dx as f64 + ky * dy as f64)).exp();
            // Antisymmetrized pairing function:
            // Δ_ab(k) = P_ab e^{ik·d} - P_ba(-d) contribution.
            d[(a, b)] += amp * phk;
            d[(b, a)] -= amp * phk.conj();
        }
        let hk = h(kx, ky);
        let hmk = h(-kx, -ky);
        let mut m = DMatrix::<C64>::zeros(2 * s, 2 * s);
        for i in 0..s {
            for j in 0..s {
                m[(i, j)] = hk[(i, j)];
                m[(i, s + j)] = d[(i, j)];
                m[(s + i, j)] = d[(j, i)].conj();
                m[(s + i, s + j)] = -hmk[(j, i)];
            }
        }
        m
    }

    /// The same model expanded in real space on an `lx × ly` torus of unit
    /// cells, as a Majorana polynomial over `sites · lx · ly` modes (mode
    /// index = `site + sites·(x + lx·y)` in cell coordinates).
    fn real_space(&self, lx: usize, ly: usize) -> MajoranaPolynomial {
        let idx = |a: usize, x: i32, y: i32| -> usize {
            let xm = x.rem_euclid(lx as i32) as usize;
            let ym = y.rem_euclid(ly as i32) as usize;
            a + self.sites * (xm + lx * ym)
        };
        let mut h = MajoranaPolynomial::zero();
        for y in 0..ly as i32 {
            for x in 0..lx as i32 {
                for &(a, b, (dx, dy), amp) in &self.hops {
                    let (ca, cb) = (
                        MajoranaPolynomial::creation(idx(a, x + dx, y + dy)),
                        MajoranaPolynomial::annihilation(idx(b, x, y)),
                    );
                    let term = ca.mul(&cb).scale(amp);
                    h = h.add(&term).add(&term.dagger());
                }
                for &(a, b, (dx, dy), amp) in &self.pairs {
                    let (ca, cb) = (
                        MajoranaPolynomial::creation(idx(a, x + dx, y + dy)),
                        MajoranaPolynomial::creation(idx(b, x, y)),
                    );
                    let term = ca.mul(&cb).scale(amp);
                    h = h.add(&term).add(&term.dagger());
                }
                for (a, &o) in self.onsite.iter().enumerate() {
                    let n = MajoranaPolynomial::creation(idx(a, x, y))
                        .mul(&MajoranaPolynomial::annihilation(idx(a, x, y)));
                    h = h.add(&n.scale(C64::new(o, 0.0)));
                }
            }
        }
        h
    }
}

/// Single-site chiral model (one face per cell): hop -t on both links,
/// pairing Δ on x-links and iΔ on y-links, chemical potential -μ.
fn single_layer_model(p: &PipParams) -> CellModel {
    let mut m = CellModel::new(1);
    let re = |x: f64| C64::new(x, 0.0);
    m.hops.push((0, 0, (1, 0), re(-p.t)));
    m.hops.push((0, 0, (0, 1), re(-p.t)));
    m.pairs.push((0, 0, (1, 0), re(p.delta)));
    m.pairs.push((0, 0, (0, 1), C64::new(0.0, p.delta)));
    m.onsite[0] = -p.mu;
    m
}

/// Two-site unit cell of the fine chiral model, split along `dir`:
/// site 0 = kept (A, even coordinate), site 1 = removed (B, odd).
/// The cell vector along `dir` spans two fine faces.
fn fine_two_site_model(p: &PipParams, dir: Dir) -> CellModel {
    let mut m = CellModel::new(2);
    let re = |x: f64| C64::new(x, 0.0);
    match dir {
        Dir::X => {
            // Along x: A -> B inside the cell, B -> A into the next cell.
            m.hops.push((1, 0, (0, 0), re(-p.t)));
            m.hops.push((0, 1, (1, 0), re(-p.t)));
            m.pairs.push((1, 0, (0, 0), re(p.delta)));
            m.pairs.push((0, 1, (1, 0), re(p.delta)));
            // Along y both sites hop/pair to themselves one cell up.
            for s in 0..2 {
                m.hops.push((s, s, (0, 1), re(-p.t)));
                m.pairs.push((s, s, (0, 1), C64::new(0.0, p.delta)));
            }
        }
        Dir::Y => {
            m.hops.push((1, 0, (0, 0), re(-p.t)));
            m.hops.push((0, 1, (0, 1), re(-p.t)));
            m.pairs.push((1, 0, (0, 0), C64::new(0.0, p.delta)));
            m.pairs.push((0, 1, (0, 1), C64::new(0.0, p.delta)));
            for s in 0..2 {
                m.hops.push((s, s, (1, 0), re(-p.t)));
                m.pairs.push((s, s, (1, 0), re(p.delta)));
            }
        }
    }
    m.onsite = vec![-p.mu, -p.mu];
    m
}

/// Final Hamiltonian of one coarse-graining step: the chiral model on the
/// kept sublattice (lattice constant doubled along `dir`) plus an emptied
/// trivial level -μ' on the removed sublattice.
fn final_two_site_model(p: &PipParams, dir: Dir) -> CellModel {
    let mut m = CellModel::new(2);
    let re = |x: f64| C64::new(x, 0.0);
    // Kept sites now form the coarse lattice: one cell step along `dir`
    // covers two fine faces but is a unit coarse link.
    m.hops.push((0, 0, (1, 0), re(-p.t)));
    m.hops.push((0, 0, (0, 1), re(-p.t)));
    match dir {
        Dir::X | Dir::Y => {
            m.pairs.push((0, 0, (1, 0), re(p.delta)));
            m.pairs.push((0, 0, (0, 1), C64::new(0.0, p.delta)));
        }
    }
    m.onsite = vec![-p.mu, -p.mu_prime];
    m
}

/// Single-layer Bloch BdG block (2×2) at momentum (kx, ky).
pub fn single_layer_block(p: &PipParams, kx: f64, ky: f64) -> DMatrix<C64> {
    single_layer_model(p).bdg_block(kx, ky)
}

/// Interpolated two-site BdG block (4×4): `(1-λ)·fine + λ·final` along
/// `dir`, in the halved Brillouin zone of the two-site cell.
pub fn interp_block(p: &PipParams, dir: Dir, lambda: f64, kx: f64, ky: f64) -> DMatrix<C64> {
    interp_model(p, dir, lambda).bdg_block(kx, ky)
}

fn interp_model(p: &PipParams, dir: Dir, lambda: f64) -> CellModel {
    fine_two_site_model(p, dir)
        .scaled(1.0 - lambda)
        .add(&final_two_site_model(p, dir).scaled(lambda))
}

/// Real-space interpolated Hamiltonian on an `lx × ly` torus of two-site
/// cells, as a Majorana polynomial (2·lx·ly modes).
pub fn interp_real_space(
    p: &PipParams,
    dir: Dir,
    lambda: f64,
    lx: usize,
    ly: usize,
) -> MajoranaPolynomial {
    interp_model(p, dir, lambda).real_space(lx, ly)
}

/// Real-space single-layer chiral Hamiltonian on an `lx × ly` torus.
pub fn single_layer_real_space(p: &PipParams, lx: usize, ly: usize) -> MajoranaPolynomial {
    single_layer_model(p).real_space(lx, ly)
}

/// All eigenvalues of a Hermitian BdG block, ascending.
pub fn block_energies(m: &DMatrix<C64>) -> Vec<f64> {
    crate::dense::hermitian_eigenvalues(m).expect("BdG blocks are Hermitian by construction")
}

/// Smallest |E| over the block spectrum (the local excitation gap).
pub fn block_min_abs_energy(m: &DMatrix<C64>) -> f64 {
    block_energies(m)
        .iter()
        .map(|e| e.abs())
        .fold(f64::INFINITY, f64::min)
}

/// Result of a gap scan over the interpolation parameter and the Brillouin
/// zone.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GapScan {
    /// Per-λ minimum gap over the momentum grid: (λ, gap).
    pub per_lambda: Vec<(f64, f64)>,
    /// Global minimum gap.
    pub min_gap: f64,
    /// (λ, kx, ky) attaining the global minimum.
    pub argmin: (f64, f64, f64),
}

/// Scans the interpolated block spectrum over an `n_lambda × n_k × n_k`
/// grid (λ ∈ [0,1] inclusive, k over the Brillouin zone) and reports the
/// minimum excitation gap.
pub fn gap_scan(p: &PipParams, dir: Dir, n_lambda: usize, n_k: usize) -> GapScan {
    assert!(n_lambda >= 2 && n_k >= 2);
    let lambdas: Vec<f64> = (0..n_lambda)
        .map(|i| i as f64 / (n_lambda - 1) as f64)
        .collect();
    let per_lambda: Vec<(f64, f64, f64, f64)> = lambdas
        .par_iter()
        .map(|&lambda| {
            let model = interp_model(p, dir, lambda);
            let mut best = (f64::INFINITY, 0.0, 0.0);
            for i in 0..n_k {
                let kx = 2.0 * std::f64::consts::PI * i as f64 / n_k as f64;
                for j in 0..n_k {
                    let ky = 2.0 * std::f64::consts::PI * j as f64 / n_k as f64;
                    let g = block_min_abs_energy(&model.bdg_block(kx, ky));
                    if g < best.0 {
                        best = (g, kx, ky);
                    }
                }
            }
            (lambda, best.0, best.1, best.2)
        })
        .collect();
    let mut min_gap = f64::INFINITY;
    let mut argmin = (0.0, 0.0, 0.0);
    for &(l, g, kx, ky) in &per_lambda {
        if g < min_gap {
            min_gap = g;
            argmin = (l, kx, ky);
        }
    }
    GapScan {
        per_lambda: per_lambda.iter().map(|&(l, g, _, _)| (l, g)).collect(),
        min_gap,
        argmin,
    }
}

/// Chern number of the negative-energy bands of a Bloch-block family via
/// plaquette field strengths (gauge-invariant lattice formula on an
/// `n_k × n_k` grid). Sign convention: the chiral single layer at
/// (t, Δ, μ) = (1, 1, -2) has C = +1.
pub fn chern_number(block: impl Fn(f64, f64) -> DMatrix<C64>, n_k: usize) -> Result<i32> {
    let occ_states = |kx: f64, ky: f64| -> Result<DMatrix<C64>> {
        let m = block(kx, ky);
        let (evals, evecs) = crate::dense::hermitian_eigen(&m)?;
        let n = evals.len();
        if evals.iter().any(|e| e.abs() < 1e-12) {
            return Err(Error::Gapless {
                min_abs_energy: 0.0,
                tol: 1e-12,
            });
        }
        // Eigenvalues come back ascending: the lower half is occupied.
        Ok(evecs.columns(0, n / 2).into_owned())
    };
    let step = 2.0 * std::f64::consts::PI / n_k as f64;
    let mut grid = vec![vec![DMatrix::<C64>::zeros(0, 0); n_k]; n_k];
    for (i, row) in grid.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = occ_states(i as f64 * step, j as f64 * step)?;
        }
    }
    let link = |a: &DMatrix<C64>, b: &DMatrix<C64>| -> C64 {
        let ov = a.adjoint() * b;
        det_complex(&ov)
    };
    let mut total = 0.0f64;
    for i in 0..n_k {
        for j in 0..n_k {
            let (i1, j1) = ((i + 1) % n_k, (j + 1) % n_k);
            let u1 = link(&grid[i][j], &grid[i1][j]);
            let u2 = link(&grid[i1][j], &grid[i1][j1]);
            let u3 = link(&grid[i1][j1], &grid[i][j1]);
            let u4 = link(&grid[i][j1], &grid[i][j]);
            total += (u1 * u2 * u3 * u4).arg();
        }
    }
    // Sign convention fixed against the reference chiral layer.
    let c = -total / (2.0 * std::f64::consts::PI);
    let rounded = c.round();
    if (c - rounded).abs() > 1e-6 {
        return Err(Error::invalid(format!(
            "Chern sum not close to an integer: {c}"
        )));
    }
    Ok(rounded as i32)
}

fn det_complex(m: &DMatrix<C64>) -> C64 {
    // LU with partial pivoting.
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let (mut piv, mut best) = (k, a[(k, k)].norm());
        for i in k + 1..n {
            if a[(i, k)].norm() > best {
                piv = i;
                best = a[(i, k)].norm();
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if piv != k {
            a.swap_rows(piv, k);
            det = -det;
        }
        det *= a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / a[(k, k)];
            for j in k..n {
                let v = a[(k, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    det
}

/// Chern number of the single chiral layer.
pub fn single_layer_chern(p: &PipParams, n_k: usize) -> Result<i32> {
    chern_number(|kx, ky| single_layer_block(p, kx, ky), n_k)
}

/// Converts an even quadratic Majorana polynomial to its antisymmetric
/// form A with `H = (i/4) γ^T A γ` (Majorana index = `2·mode + species`).
/// The constant part is dropped. Errors when a term is not quadratic or
/// the polynomial is not Hermitian.
pub fn majorana_form(n_modes: usize, h: &MajoranaPolynomial) -> Result<DMatrix<f64>> {
    let n = 2 * n_modes;
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (c, m) in h.terms() {
        let coeff = c * [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ][(m.phase() & 3) as usize];
        match m.factors() {
            [] => {}
            [(f1, s1), (f2, s2)] => {
                let ai = 2 * f1 + (*s1 == Species::GammaPrime) as usize;
                let bi = 2 * f2 + (*s2 == Species::GammaPrime) as usize;
                if ai >= n || bi >= n {
                    return Err(Error::invalid("mode index out of range"));
                }
                // t γ_a γ_b with a<b must have t = iβ for Hermiticity;
                // contributes A_ab += 2β.
                if coeff.re.abs() > 1e-12 {
                    return Err(Error::NonHermitian(format!(
                        "quadratic coefficient has a real part: {coeff}"
                    )));
                }
                a[(ai, bi)] += 2.0 * coeff.im;
                a[(bi, ai)] -= 2.0 * coeff.im;
            }
            _ => {
                return Err(Error::invalid(
                    "majorana_form requires a quadratic polynomial",
                ));
            }
        }
    }
    Ok(a)
}

/// Single-particle energies of `H = (i/4) γ^T A γ`: eigenvalues of iA
/// (ascending, symmetric around zero).
pub fn majorana_energies(a: &DMatrix<f64>) -> Vec<f64> {
    let m = hermitian_ia(a);
    crate::dense::hermitian_eigenvalues(&m).expect("iA is Hermitian for antisymmetric A")
}

fn hermitian_ia(a: &DMatrix<f64>) -> DMatrix<C64> {
    a.map(|x| C64::new(0.0, x))
}

/// Ground-state covariance matrix `Γ = i·sgn(iA)` of `H = (i/4) γ^T A γ`.
/// Errors when any single-particle energy is below `tol` (no unique
/// Gaussian ground state).
pub fn ground_covariance(a: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let m = hermitian_ia(a);
    let (evals, evecs) = crate::dense::hermitian_eigen(&m)?;
    let min_abs = evals.iter().fold(f64::INFINITY, |acc, e| acc.min(e.abs()));
    if min_abs < tol {
        return Err(Error::Gapless {
            min_abs_energy: min_abs,
            tol,
        });
    }
    let n = a.nrows();
    let mut sgn = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        sgn[(j, j)] = C64::new(evals[j].signum(), 0.0);
    }
    let s = &evecs * sgn * evecs.adjoint();
    let gamma = s.map(|z| (C64::new(0.0, 1.0) * z).re);
    // Γ must come out real antisymmetric; the imaginary residual bounds the
    // numerical error.
    let imag_res = s
        .iter()
        .map(|z| (C64::new(0.0, 1.0) * z).im.abs())
        .fold(0.0, f64::max);
    if imag_res > 1e-9 {
        return Err(Error::invalid(format!(
            "covariance has imaginary residual {imag_res:.2e}"
        )));
    }
    Ok(gamma)
}

/// Checks covariance-matrix structure: antisymmetry and purity (Γ Γᵀ = 1)
/// within `tol`.
pub fn covariance_checks(gamma: &DMatrix<f64>, tol: f64) -> Result<()> {
    let anti = (gamma + gamma.transpose()).abs().max();
    if anti > tol {
        return Err(Error::invalid(format!("not antisymmetric: {anti:.2e}")));
    }
    let n = gamma.nrows();
    let purity = (gamma * gamma.transpose() - DMatrix::<f64>::identity(n, n))
        .abs()
        .max();
    if purity > tol {
        return Err(Error::invalid(format!("not pure: {purity:.2e}")));
    }
    Ok(())
}

/// Mode occupation numbers `⟨c†_j c_j⟩ = (1 + Γ_{2j,2j+1})/2` from a
/// covariance matrix (`⟨iγ_j γ'_j⟩ = 2n_j - 1`).
pub fn occupations(gamma: &DMatrix<f64>) -> DVector<f64> {
    let n_modes = gamma.nrows() / 2;
    DVector::from_fn(n_modes, |j, _| (1.0 + gamma[(2 * j, 2 * j + 1)]) / 2.0)
}

/// Ground-state energy of `H = (i/4) γ^T A γ` plus the constant part of
/// the polynomial it came from (pass 0 if not needed): `-½ Σ_{E>0} E`.
pub fn ground_energy(a: &DMatrix<f64>, constant: f64) -> f64 {
    let es = majorana_energies(a);
    constant - 0.5 * es.iter().filter(|e| **e > 0.0).sum::<f64>()
}

/// Pfaffian of a real antisymmetric matrix by Parlett-Reid tridiagonal
/// elimination with partial pivoting (O(n³), exact sign).
pub fn pfaffian(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::invalid("pfaffian requires a square matrix"));
    }
    let skew = (a + a.transpose()).abs().max();
    if skew > 1e-9 * (1.0 + a.abs().max()) {
        return Err(Error::invalid(format!("matrix not antisymmetric: {skew:.2e}")));
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let mut m = a.clone();
    let mut pf = 1.0f64;
    for k in (0..n - 1).step_by(2) {
        // Pivot: largest |m[i][k]| for i > k.
        let (mut piv, mut best) = (k + 1, m[(k + 1, k)].abs());
        for i in k + 2..n {
            if m[(i, k)].abs() > best {
                piv = i;
                best = m[(i, k)].abs();
            }
        }
        if best == 0.0 {
            return Ok(0.0);
        }
        if piv != k + 1 {
            m.swap_rows(piv, k + 1);
            m.swap_columns(piv, k + 1);
            pf = -pf;
        }
        pf *= m[(k, k + 1)];
        // Eliminate column k and row k below k+1.
        let pivot = m[(k + 1, k)];
        for i in k + 2..n {
            let f = m[(i, k)] / pivot;
            for j in k..n {
                let v = m[(k + 1, j)];
                m[(i, j)] -= f * v;
            }
            for j in k..n {
                let v = m[(j, k + 1)];
                m[(j, i)] -= f * v;
            }
        }
    }
    // Pf of the reduced tridiagonal form is the product of its odd
    // superdiagonal entries; swaps contributed their signs above.
    Ok(pf)
}
