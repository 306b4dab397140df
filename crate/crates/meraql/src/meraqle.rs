//! Assembly and verification of renormalization layers.
//!
//! One layer halves the lattice along a direction in three stages:
//! a quasi-adiabatic Gaussian stage that decouples the removed fermion
//! sublattice, an optional fermionic-swap shuffle stage (multi-layer
//! stacks only), and a commuting CNOT Clifford stage that disentangles the
//! removed gauge qubits. This module builds layers and produces
//! machine-checkable certificates for each stage, plus an exact spectral
//! cross-check between the spin and fermion pictures on a small torus.

use crate::bdg::{
    ground_covariance, interp_real_space, majorana_form, occupations, single_layer_real_space,
    PipParams,
};
use crate::boson::{
    bosonize_hamiltonian, bosonized_fswap, flux_operator, pip_ham_terms,
    polynomial_to_jw_terms, w_face, HamTerm, MajoranaPolynomial, PauliSum,
};
use crate::dense::{sector_spectrum, C64};
use crate::error::{Error, Result};
use crate::lattice::{coarse_grain, Dir, EdgeLattice, Orientation, Superlattice16};
use crate::pauli::{MemberSign, PauliOperator, StabilizerGroup};
use crate::qa::{evolve_covariance, FilterFunction};
use crate::renorm::{coarse_graining_circuit, lift_operator, z2f_group, RenormStep};
use nalgebra::DMatrix;

/// One renormalization layer: the Clifford stage plus the parameters of the
/// Gaussian stage and the shuffle plan (empty on a plain single-species
/// lattice).
#[derive(Debug, Clone)]
pub struct MeraqleLayer {
    pub dir: Dir,
    pub renorm: RenormStep,
    /// Rescale unit of the flow generator's filter.
    pub e_gap: f64,
    /// Integration steps for the Gaussian stage.
    pub qa_steps: usize,
    /// Edges carrying fermionic swaps, in application order.
    pub shuffle_edges: Vec<usize>,
}

/// Builds a layer for a single-species lattice (no shuffle stage).
pub fn plain_layer(lat: &EdgeLattice, dir: Dir, e_gap: f64, qa_steps: usize) -> Result<MeraqleLayer> {
    Ok(MeraqleLayer {
        dir,
        renorm: coarse_graining_circuit(lat, dir)?,
        e_gap,
        qa_steps,
        shuffle_edges: vec![],
    })
}

// ---------------------------------------------------------------------------
// Spin-side certificate.
// ---------------------------------------------------------------------------

/// Symbolic certificate that the Clifford stage disentangles the removed
/// gauge qubits and renormalizes the stabilizer group onto the coarse
/// lattice.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpinCertificate {
    pub fine_lx: usize,
    pub fine_ly: usize,
    pub dir: Dir,
    pub removed_faces: usize,
    /// Every |0>-disentangled qubit is stabilized by +Z.
    pub z_disentangled: bool,
    /// Every |+>-disentangled qubit is stabilized by +X.
    pub x_disentangled: bool,
    /// Every lifted coarse face parity is a +1 member.
    pub coarse_faces_member: bool,
    /// Every lifted coarse vertex generator is a +1 member.
    pub coarse_vertices_member: bool,
    /// Group ranks match: fine rank = disentangled qubits + coarse rank.
    pub rank_consistent: bool,
}

impl SpinCertificate {
    pub fn ok(&self) -> bool {
        self.z_disentangled
            && self.x_disentangled
            && self.coarse_faces_member
            && self.coarse_vertices_member
            && self.rank_consistent
    }
}

fn is_plus_member(g: &StabilizerGroup, p: &PauliOperator) -> bool {
    g.membership_sign(p) == Some(MemberSign::Plus)
}

/// Conjugates the fine gauge-theory stabilizer group by the layer's CNOT
/// circuit and checks that it factors into single-qubit stabilizers on the
/// removed edges times the lifted coarse group.
pub fn spin_disentanglement_certificate(lat: &EdgeLattice, dir: Dir) -> Result<SpinCertificate> {
    let step = coarse_graining_circuit(lat, dir)?;
    let fine_group = z2f_group(lat)?;
    let conj = fine_group.conjugated_by(&step.circuit)?;
    let n = lat.n_edges();

    let single = |xs: &[usize], zs: &[usize]| PauliOperator::from_support(n, xs, zs, 0);
    let z_disentangled = step
        .map
        .disentangled_z()
        .iter()
        .all(|&e| is_plus_member(&conj, &single(&[], &[e])));
    let x_disentangled = step
        .map
        .disentangled_x()
        .iter()
        .all(|&e| is_plus_member(&conj, &single(&[e], &[])));

    let coarse = step.map.coarse;
    let coarse_faces_member = (0..coarse.n_faces()).all(|f| {
        let lifted = lift_operator(&step.map, &w_face(&coarse, f));
        is_plus_member(&conj, &lifted)
    });
    let coarse_vertices_member = (0..coarse.lx() as isize)
        .flat_map(|vx| (0..coarse.ly() as isize).map(move |vy| (vx, vy)))
        .all(|(vx, vy)| {
            let lifted = lift_operator(&step.map, &flux_operator(&coarse, vx, vy));
            is_plus_member(&conj, &lifted)
        });

    let coarse_group = z2f_group(&coarse)?;
    let removed = step.map.disentangled_z().len() + step.map.disentangled_x().len();
    let rank_consistent = conj.rank() == removed + coarse_group.rank();

    Ok(SpinCertificate {
        fine_lx: lat.lx(),
        fine_ly: lat.ly(),
        dir,
        removed_faces: lat.n_faces() / 2,
        z_disentangled,
        x_disentangled,
        coarse_faces_member,
        coarse_vertices_member,
        rank_consistent,
    })
}

// ---------------------------------------------------------------------------
// Fermion-side fixed point.
// ---------------------------------------------------------------------------

/// Certificate that the quasi-adiabatic Gaussian stage empties the removed
/// sublattice and leaves the kept sublattice in the coarse ground state.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FixedPointReport {
    pub dir: Dir,
    /// Coarse (cell-grid) dimensions.
    pub lx: usize,
    pub ly: usize,
    pub qa_steps: usize,
    /// Largest occupation left on a removed-sublattice mode.
    pub max_removed_occupation: f64,
    /// Max-entry deviation of the kept-sublattice covariance from the
    /// coarse-lattice ground covariance.
    pub kept_deviation: f64,
}

impl FixedPointReport {
    pub fn ok(&self) -> bool {
        self.max_removed_occupation < 1e-6 && self.kept_deviation < 1e-3
    }
}

/// Evolves the fine ground covariance along the decoupling path and audits
/// the endpoint: removed (odd-site) modes empty, kept (even-site) modes in
/// the ground state of the coarse chiral Hamiltonian on an `lx × ly` torus.
pub fn verify_fermionic_fixed_point(
    p: &PipParams,
    dir: Dir,
    lx: usize,
    ly: usize,
    e_gap: f64,
    qa_steps: usize,
    filter: &FilterFunction,
) -> Result<FixedPointReport> {
    let n_modes = 2 * lx * ly;
    let a0 = majorana_form(n_modes, &interp_real_space(p, dir, 0.0, lx, ly))?;
    let a1 = majorana_form(n_modes, &interp_real_space(p, dir, 1.0, lx, ly))?;
    let da = &a1 - &a0;
    let a_of = |l: f64| &a0 + &da * l;
    let gamma0 = ground_covariance(&a0, 1e-8)?;
    let gamma = evolve_covariance(&gamma0, a_of, |_| da.clone(), e_gap, filter, qa_steps)?;

    let occ = occupations(&gamma);
    let max_removed_occupation = (0..lx * ly)
        .map(|c| occ[2 * c + 1].abs())
        .fold(0.0, f64::max);

    // Kept modes sit on cell site 0; cell (x, y) is coarse face (x, y).
    let n_keep = lx * ly;
    let mut kept = DMatrix::<f64>::zeros(2 * n_keep, 2 * n_keep);
    for a in 0..n_keep {
        for b in 0..n_keep {
            for (ia, ib) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                kept[(2 * a + ia, 2 * b + ib)] = gamma[(4 * a + ia, 4 * b + ib)];
            }
        }
    }
    let coarse_a = majorana_form(n_keep, &single_layer_real_space(p, lx, ly))?;
    let coarse_gamma = ground_covariance(&coarse_a, 1e-8)?;
    let kept_deviation = (&kept - &coarse_gamma).abs().max();

    Ok(FixedPointReport {
        dir,
        lx,
        ly,
        qa_steps,
        max_removed_occupation,
        kept_deviation,
    })
}

// ---------------------------------------------------------------------------
// Shuffle stage.
// ---------------------------------------------------------------------------

/// Destination column of the riffle permutation on a span of 8 columns:
/// the left half interleaves into even slots, the right half into odd.
pub fn riffle_map(x: usize) -> usize {
    assert!(x < 8);
    if x < 4 {
        2 * x
    } else {
        2 * (x - 4) + 1
    }
}

/// Decomposes the riffle into adjacent column transpositions `(j, j+1)`
/// applied left to right.
pub fn riffle_adjacent_swaps() -> Vec<(usize, usize)> {
    // arr[slot] = item currently at the slot; sort until arr[riffle(x)] = x.
    let mut arr: Vec<usize> = (0..8).collect();
    let target: Vec<usize> = {
        let mut t = vec![0; 8];
        for x in 0..8 {
            t[riffle_map(x)] = x;
        }
        t
    };
    let mut swaps = vec![];
    for slot in 0..8 {
        let mut pos = arr.iter().position(|&v| v == target[slot]).unwrap();
        while pos > slot {
            arr.swap(pos - 1, pos);
            swaps.push((pos - 1, pos));
            pos -= 1;
        }
    }
    swaps
}

/// Edges (in application order) whose fermionic swaps realize the riffle on
/// the 8 faces `(fx0 .. fx0+8, fy)`; adjacent faces swap through their
/// shared north-oriented edge.
pub fn riffle_fswap_edges(lat: &EdgeLattice, fx0: usize, fy: usize) -> Result<Vec<usize>> {
    if fx0 % 8 != 0 || lat.lx() % 8 != 0 {
        return Err(Error::invalid("riffle spans must be aligned to 8 columns"));
    }
    Ok(riffle_adjacent_swaps()
        .iter()
        .map(|&(a, _)| {
            // Faces (fx0+a, fy) and (fx0+a+1, fy) share the east edge of the
            // left face.
            lat.face_edges((fx0 + a) as isize, fy as isize).e
        })
        .collect())
}

/// Shuffle plan for a 16-layer superlattice step: every row is riffled in
/// aligned spans of 8 columns.
pub fn superlattice_shuffle_plan(s16: &Superlattice16) -> Result<Vec<usize>> {
    let lat = &s16.lattice;
    if lat.lx() % 8 != 0 {
        return Err(Error::invalid(
            "16-layer shuffle needs a width divisible by 8",
        ));
    }
    let mut edges = vec![];
    for fy in 0..lat.ly() {
        for fx0 in (0..lat.lx()).step_by(8) {
            edges.extend(riffle_fswap_edges(lat, fx0, fy)?);
        }
    }
    Ok(edges)
}

/// Bosonized swap operators for a shuffle plan, in application order.
pub fn bosonized_shuffle(lat: &EdgeLattice, edges: &[usize]) -> Result<Vec<PauliSum>> {
    edges.iter().map(|&e| bosonized_fswap(lat, e)).collect()
}

// ---------------------------------------------------------------------------
// Spectral duality on a small torus.
// ---------------------------------------------------------------------------

/// Twisted-boundary real-space fermion Hamiltonian: hop and pairing terms
/// through seam edges (`x` seam: north-oriented edges at x = 0, `y` seam:
/// east-oriented edges at y = 0) flip sign.
pub fn twisted_fermion_hamiltonian(
    lat: &EdgeLattice,
    p: &PipParams,
    twist_x: bool,
    twist_y: bool,
) -> MajoranaPolynomial {
    let mut h = MajoranaPolynomial::zero();
    for term in pip_ham_terms(lat, p.t, p.delta, p.mu) {
        match term {
            HamTerm::Edge { e, poly } => {
                let (orient, x, y) = lat.edge_info(e);
                let seam = match orient {
                    Orientation::North => twist_x && x == 0,
                    Orientation::East => twist_y && y == 0,
                };
                let signed = if seam {
                    poly.scale(C64::new(-1.0, 0.0))
                } else {
                    poly
                };
                h = h.add(&signed);
            }
            HamTerm::Face { poly, .. } => h = h.add(&poly),
            HamTerm::General { poly } => h = h.add(&poly),
        }
    }
    h
}

/// Exact spectral equivalence between the gauge-theory (spin) Hamiltonian
/// in its zero-flux sector and the direct sum of twisted-boundary fermion
/// Hamiltonians, one fermion-parity sector per boundary condition.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DualityReport {
    /// Parity (+1 even / -1 odd) selected for each boundary condition
    /// (twist_x, twist_y, parity).
    pub sectors: Vec<(bool, bool, i8)>,
    /// Largest eigenvalue deviation across the matched multiset.
    pub max_deviation: f64,
    pub sector_dimension: usize,
}

impl DualityReport {
    pub fn ok(&self) -> bool {
        self.max_deviation < 1e-8
    }
}

/// Matches the zero-flux spin spectrum on a 2×2 torus against the union of
/// the four twisted fermion Hamiltonians, trying every parity assignment
/// and reporting the best one.
pub fn spectral_duality_check(p: &PipParams) -> Result<DualityReport> {
    let lat = EdgeLattice::build_torus(2, 2)?;
    let n = lat.n_edges();

    let spin = bosonize_hamiltonian(&lat, &pip_ham_terms(&lat, p.t, p.delta, p.mu))?;
    let flux_ops: Vec<PauliOperator> = [(0, 0), (1, 0), (0, 1)]
        .iter()
        .map(|&(vx, vy)| flux_operator(&lat, vx, vy))
        .collect();
    let mut spin_spec = sector_spectrum(n, &spin.dense_terms(), &flux_ops)?;
    spin_spec.sort_by(|a, b| a.total_cmp(b));

    // Fermion side: per boundary condition, both parity restrictions.
    let n_modes = lat.n_faces();
    let parity = PauliOperator::from_support(n_modes, &[], &(0..n_modes).collect::<Vec<_>>(), 0);
    let mut per_bc: Vec<[Vec<f64>; 2]> = vec![];
    let bcs = [(false, false), (true, false), (false, true), (true, true)];
    for &(tx, ty) in &bcs {
        let hf = twisted_fermion_hamiltonian(&lat, p, tx, ty);
        let terms = polynomial_to_jw_terms(n_modes, &hf);
        let even = sector_spectrum(n_modes, &terms, std::slice::from_ref(&parity))?;
        let odd = sector_spectrum(n_modes, &terms, &[parity.negated()])?;
        per_bc.push([even, odd]);
    }

    // Try all 16 parity assignments; keep the best multiset match.
    let mut best: Option<(f64, Vec<i8>)> = None;
    for mask in 0..16u8 {
        let mut union: Vec<f64> = vec![];
        for (i, spectra) in per_bc.iter().enumerate() {
            union.extend(&spectra[((mask >> i) & 1) as usize]);
        }
        if union.len() != spin_spec.len() {
            continue;
        }
        union.sort_by(|a, b| a.total_cmp(b));
        // NaN-propagating max: `f64::max` would silently drop NaN
        // deviations and report a spurious match.
        let dev = union
            .iter()
            .zip(&spin_spec)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, |m, d| if m >= d { m } else { d });
        if best.as_ref().is_none_or(|(d, _)| dev < *d) {
            let parities = (0..4)
                .map(|i| if (mask >> i) & 1 == 0 { 1 } else { -1 })
                .collect();
            best = Some((dev, parities));
        }
    }
    let (max_deviation, parities) = best.ok_or_else(|| Error::invalid("no sector assignment"))?;
    Ok(DualityReport {
        sectors: bcs
            .iter()
            .zip(parities)
            .map(|(&(tx, ty), s)| (tx, ty, s))
            .collect(),
        max_deviation,
        sector_dimension: spin_spec.len(),
    })
}

/// Sanity anchor for the ν = 0 end of the family: the pure face-parity
/// Hamiltonian `-Σ_f W_f` on the 2×2 torus has zero-flux ground energy -4
/// with degeneracy 4.
pub fn face_parity_ground_check() -> Result<(f64, usize)> {
    let lat = EdgeLattice::build_torus(2, 2)?;
    let n = lat.n_edges();
    let terms: Vec<(C64, PauliOperator)> = (0..lat.n_faces())
        .map(|f| (C64::new(-1.0, 0.0), w_face(&lat, f)))
        .collect();
    let flux_ops: Vec<PauliOperator> = [(0, 0), (1, 0), (0, 1)]
        .iter()
        .map(|&(vx, vy)| flux_operator(&lat, vx, vy))
        .collect();
    let spec = sector_spectrum(n, &terms, &flux_ops)?;
    let e0 = spec[0];
    let deg = spec.iter().filter(|&&e| (e - e0).abs() < 1e-9).count();
    Ok((e0, deg))
}

// ---------------------------------------------------------------------------
// Sixteenfold-way metadata.
// ---------------------------------------------------------------------------

/// Topological data of a stack of ν chiral layers (period 16).
#[derive(Debug, Clone, serde::Serialize)]
pub struct SixteenfoldClass {
    pub nu: usize,
    /// Chiral central charge c = ν/2.
    pub central_charge: f64,
    /// Vortex topological spin θ = exp(iπν/8) as (re, im).
    pub vortex_spin: (f64, f64),
    /// Anyon labels of ν mod 16.
    pub anyons: Vec<&'static str>,
    /// Quantum dimensions matching `anyons`.
    pub quantum_dims: Vec<f64>,
}

pub fn sixteenfold_metadata(nu: usize) -> SixteenfoldClass {
    let m = nu % 16;
    let theta = (std::f64::consts::PI * m as f64 / 8.0).sin_cos();
    let (anyons, quantum_dims): (Vec<&'static str>, Vec<f64>) = match m % 4 {
        0 => (vec!["1", "e", "m", "psi"], vec![1.0, 1.0, 1.0, 1.0]),
        2 => (vec!["1", "a", "abar", "psi"], vec![1.0, 1.0, 1.0, 1.0]),
        _ => (vec!["1", "sigma", "psi"], vec![1.0, 2f64.sqrt(), 1.0]),
    };
    SixteenfoldClass {
        nu,
        central_charge: nu as f64 / 2.0,
        vortex_spin: (theta.1, theta.0),
        anyons,
        quantum_dims,
    }
}

// ---------------------------------------------------------------------------
// Full plain-lattice run.
// ---------------------------------------------------------------------------

/// Certificates for one level of a plain-lattice run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LevelReport {
    pub fine_lx: usize,
    pub fine_ly: usize,
    pub dir: Dir,
    pub spin: SpinCertificate,
    /// Gaussian-stage certificate for the chiral species; identical for
    /// every chiral copy, absent when ν = 0.
    pub fermion: Option<FixedPointReport>,
}

impl LevelReport {
    pub fn ok(&self) -> bool {
        self.spin.ok() && self.fermion.as_ref().map_or(true, FixedPointReport::ok)
    }
}

/// Full report of a plain-lattice renormalization run down to 2×2.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MeraqleReport {
    pub nu: usize,
    pub class: SixteenfoldClass,
    pub levels: Vec<LevelReport>,
}

impl MeraqleReport {
    pub fn ok(&self) -> bool {
        !self.levels.is_empty() && self.levels.iter().all(LevelReport::ok)
    }
}

/// Runs alternating x/y layers from an `l × l` torus down to 2×2, checking
/// the spin certificate at every level and (for ν ≥ 1) the chiral
/// Gaussian fixed point; ν identical chiral copies share one certificate.
pub fn run_plain_meraqle(
    p: &PipParams,
    l: usize,
    nu: usize,
    e_gap: f64,
    qa_steps: usize,
) -> Result<MeraqleReport> {
    if !l.is_power_of_two() || l < 4 {
        return Err(Error::invalid("lattice size must be a power of two, >= 4"));
    }
    let filter = FilterFunction::build(192, 4097)?;
    let mut lat = EdgeLattice::build_torus(l, l)?;
    let mut dir = Dir::X;
    let mut levels = vec![];
    while lat.n_faces() > 4 {
        let spin = spin_disentanglement_certificate(&lat, dir)?;
        let fermion = if nu >= 1 {
            let (clx, cly) = match dir {
                Dir::X => (lat.lx() / 2, lat.ly()),
                Dir::Y => (lat.lx(), lat.ly() / 2),
            };
            Some(verify_fermionic_fixed_point(
                p, dir, clx, cly, e_gap, qa_steps, &filter,
            )?)
        } else {
            None
        };
        levels.push(LevelReport {
            fine_lx: lat.lx(),
            fine_ly: lat.ly(),
            dir,
            spin,
            fermion,
        });
        lat = coarse_grain(&lat, dir)?.coarse;
        dir = match dir {
            Dir::X => Dir::Y,
            Dir::Y => Dir::X,
        };
    }
    Ok(MeraqleReport {
        nu,
        class: sixteenfold_metadata(nu),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson::{gauge_fixed_sector, MajoranaMonomial, Species};
    use approx::assert_relative_eq;

    #[test]
    fn spin_certificate_holds_on_square_and_rectangular_tori() {
        for (lx, ly, dir) in [(4, 4, Dir::X), (4, 4, Dir::Y), (8, 4, Dir::X), (4, 8, Dir::Y)] {
            let lat = EdgeLattice::build_torus(lx, ly).unwrap();
            let cert = spin_disentanglement_certificate(&lat, dir).unwrap();
            assert!(cert.ok(), "certificate failed: {cert:?}");
        }
    }

    #[test]
    fn gaussian_stage_reaches_the_decoupled_fixed_point() {
        let p = PipParams::default();
        let filter = FilterFunction::build(192, 4097).unwrap();
        let report =
            verify_fermionic_fixed_point(&p, Dir::X, 2, 4, 1.0, 768, &filter).unwrap();
        assert!(
            report.ok(),
            "removed occ {:.2e}, kept dev {:.2e}",
            report.max_removed_occupation,
            report.kept_deviation
        );
    }

    #[test]
    fn riffle_decomposition_reproduces_the_permutation() {
        let mut arr: Vec<usize> = (0..8).collect();
        for (a, b) in riffle_adjacent_swaps() {
            assert_eq!(b, a + 1);
            arr.swap(a, b);
        }
        for x in 0..8 {
            assert_eq!(arr[riffle_map(x)], x, "item {x} not in its riffle slot");
        }
    }

    #[test]
    fn fswap_conjugation_exchanges_the_face_parities() {
        // S W_l S = W_r in the gauge-fixed fermion picture.
        let lat = EdgeLattice::build_torus(4, 4).unwrap();
        let e = lat.face_edges(1, 1).e;
        let (l, r) = (lat.l_face(e), lat.r_face(e));
        let s = bosonized_fswap(&lat, e).unwrap();
        let parity = |f: usize| {
            let mut p = PauliSum::zero(lat.n_edges());
            p.add_term(C64::new(1.0, 0.0), &w_face(&lat, f));
            p
        };
        let conj = s.mul(&parity(l)).mul(&s);
        let got = gauge_fixed_sector(&lat, &conj).unwrap();
        let want = gauge_fixed_sector(&lat, &parity(r)).unwrap();
        assert!(
            got.sub(&want).max_coeff_diff(&MajoranaPolynomial::zero()) < 1e-12,
            "fswap did not exchange parities"
        );
    }

    #[test]
    fn shuffle_plan_covers_each_row_of_the_superlattice() {
        let lat = EdgeLattice::build_torus(8, 4).unwrap();
        let s16 = crate::lattice::superlattice_16(&lat, 3).unwrap();
        let plan = superlattice_shuffle_plan(&s16).unwrap();
        assert_eq!(plan.len(), 4 * riffle_adjacent_swaps().len());
        let ops = bosonized_shuffle(&lat, &plan[..3]).unwrap();
        assert_eq!(ops.len(), 3);
    }

    #[test]
    fn zero_flux_spin_spectrum_matches_the_twisted_fermion_sectors() {
        let report = spectral_duality_check(&PipParams::default()).unwrap();
        assert_eq!(report.sector_dimension, 32);
        assert!(report.ok(), "max deviation {:.2e}", report.max_deviation);
        // Exactly one parity sector per boundary condition, all four used.
        assert_eq!(report.sectors.len(), 4);
    }

    #[test]
    fn face_parity_hamiltonian_has_the_expected_ground_space() {
        let (e0, deg) = face_parity_ground_check().unwrap();
        assert_relative_eq!(e0, -4.0, epsilon = 1e-9);
        assert_eq!(deg, 4);
    }

    #[test]
    fn twisted_hamiltonians_differ_exactly_on_seam_terms() {
        let lat = EdgeLattice::build_torus(2, 2).unwrap();
        let p = PipParams::default();
        let h0 = twisted_fermion_hamiltonian(&lat, &p, false, false);
        let hx = twisted_fermion_hamiltonian(&lat, &p, true, false);
        let diff = h0.sub(&hx);
        // The difference is supported on hops between column 0 and 1 faces
        // through the wrapping edges only.
        assert!(!diff.is_zero(1e-12));
        for (_, m) in diff.terms() {
            let faces: Vec<usize> = m.factors().iter().map(|&(f, _)| f).collect();
            for f in faces {
                let (fx, _) = lat.face_xy(f);
                assert!(fx == 0 || fx == 1);
            }
        }
    }

    #[test]
    fn sixteenfold_classes_cycle_with_period_sixteen() {
        let c1 = sixteenfold_metadata(1);
        assert_eq!(c1.anyons, vec!["1", "sigma", "psi"]);
        assert_relative_eq!(c1.central_charge, 0.5);
        assert_relative_eq!(c1.vortex_spin.0, (std::f64::consts::PI / 8.0).cos());
        let c2 = sixteenfold_metadata(2);
        assert_eq!(c2.anyons.len(), 4);
        assert_relative_eq!(c2.central_charge, 1.0);
        let c16 = sixteenfold_metadata(16);
        assert_eq!(c16.anyons, sixteenfold_metadata(0).anyons);
        assert_relative_eq!(c16.vortex_spin.0, 1.0, epsilon = 1e-12);
        assert_relative_eq!(c16.vortex_spin.1, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn plain_run_produces_passing_certificates_on_a_small_lattice() {
        let p = PipParams::default();
        let report = run_plain_meraqle(&p, 4, 1, 1.0, 512).unwrap();
        assert_eq!(report.levels.len(), 2); // 4×4 -> 2×4 -> 2×2
        assert!(report.ok(), "{report:?}");
        let trivial = run_plain_meraqle(&p, 4, 0, 1.0, 512).unwrap();
        assert!(trivial.ok());
        assert!(trivial.levels.iter().all(|l| l.fermion.is_none()));
    }

    #[test]
    fn jordan_wigner_parity_matches_the_monomial_parity() {
        // The dense parity operator used in sector matching is the JW image
        // of the total-parity monomial.
        let n = 4;
        let mut m = MajoranaMonomial::identity();
        for f in 0..n {
            m = m.mul(&MajoranaMonomial::new(
                &[(f, Species::Gamma), (f, Species::GammaPrime)],
                3,
            ));
        }
        let mut poly = MajoranaPolynomial::zero();
        poly.add_term(C64::new(1.0, 0.0), &m);
        let terms = polynomial_to_jw_terms(n, &poly);
        assert_eq!(terms.len(), 1);
        let parity =
            PauliOperator::from_support(n, &[], &(0..n).collect::<Vec<_>>(), 0);
        assert_eq!(terms[0].1, parity);
        assert!((terms[0].0 - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
