//! Clifford coarse-graining step for the gauge (edge-qubit) sector.
//!
//! One renormalization step halves the lattice along one direction. Faces
//! alternate between kept (A, even coordinate) and removed (B, odd
//! coordinate) columns or rows. A constant-depth CNOT circuit disentangles
//! two qubits per B face into fixed |0⟩ / |+⟩ states and rewires the
//! remaining generators onto the coarse lattice, so that plaquette and
//! flux stabilizers of the fine lattice map onto their coarse images times
//! single-qubit stabilizers on the disentangled edges.

use crate::boson::{flux_operator, w_face};
use crate::error::Result;
use crate::lattice::{coarse_grain, CoarseGrainMap, Dir, EdgeLattice, SublatticeTag};
use crate::pauli::{CliffordCircuit, PauliOperator, StabilizerGroup};

/// Vertex star `V_v = Π_{e ∋ v} X_e`.
pub fn vertex_star(lat: &EdgeLattice, vx: isize, vy: isize) -> PauliOperator {
    let xs = lat.vertex_edges(vx, vy);
    PauliOperator::from_support(lat.n_edges(), &xs, &[], 0)
}

/// Toric-code stabilizer group: all plaquettes `W_f` and all vertex stars
/// `V_v`. Rank is `2 Lx Ly - 2` (one relation per type on the torus).
pub fn toric_code_group(lat: &EdgeLattice) -> Result<StabilizerGroup> {
    let mut gens = vec![];
    for f in 0..lat.n_faces() {
        gens.push(w_face(lat, f));
    }
    for v in 0..lat.n_vertices() {
        let (vx, vy) = lat.vertex_xy(v);
        gens.push(vertex_star(lat, vx as isize, vy as isize));
    }
    StabilizerGroup::from_generators(lat.n_edges(), &gens)
}

/// Gauge-sector stabilizer group of the fermionic fixed point: all
/// plaquettes `W_f` and all flux operators `F_v`. Generates the same group
/// as the toric code (`F_v = W_{NE(v)} V_v`).
pub fn z2f_group(lat: &EdgeLattice) -> Result<StabilizerGroup> {
    let mut gens = vec![];
    for f in 0..lat.n_faces() {
        gens.push(w_face(lat, f));
    }
    for v in 0..lat.n_vertices() {
        let (vx, vy) = lat.vertex_xy(v);
        gens.push(flux_operator(lat, vx as isize, vy as isize));
    }
    StabilizerGroup::from_generators(lat.n_edges(), &gens)
}

/// One coarse-graining step: the CNOT circuit plus the edge bookkeeping.
#[derive(Debug, Clone)]
pub struct RenormStep {
    pub dir: Dir,
    pub circuit: CliffordCircuit,
    pub map: CoarseGrainMap,
}

/// Builds the disentangling CNOT circuit that halves the lattice along
/// `dir`. Four CNOTs per removed (B) face; all gates commute pairwise, so
/// the circuit has depth one as a commuting layer.
pub fn coarse_graining_circuit(lat: &EdgeLattice, dir: Dir) -> Result<RenormStep> {
    let map = coarse_grain(lat, dir)?;
    let mut circuit = CliffordCircuit::new(lat.n_edges());
    for f in 0..lat.n_faces() {
        if lat.sublattice(f, dir) != SublatticeTag::B {
            continue;
        }
        let (fx, fy) = lat.face_xy(f);
        let (fx, fy) = (fx as isize, fy as isize);
        let b = lat.face_edges(fx, fy);
        match dir {
            Dir::X => {
                // A is the west neighbor; the B qubits W(B) and S(B) are
                // disentangled into |0⟩ and |+⟩ respectively.
                let a = lat.face_edges(fx - 1, fy);
                circuit.cnot(b.n, b.w);
                circuit.cnot(b.e, b.w);
                circuit.cnot(b.s, b.w);
                circuit.cnot(b.s, a.s);
            }
            Dir::Y => {
                // A is the south neighbor; S(B) -> |0⟩, W(B) -> |+⟩.
                let a = lat.face_edges(fx, fy - 1);
                circuit.cnot(b.e, b.s);
                circuit.cnot(b.n, b.s);
                circuit.cnot(b.w, b.s);
                circuit.cnot(b.w, a.w);
            }
        }
    }
    Ok(RenormStep { dir, circuit, map })
}

/// Lifts a coarse-lattice Pauli operator to the fine lattice through the
/// retained-edge identification (phase preserved).
pub fn lift_operator(map: &CoarseGrainMap, p: &PauliOperator) -> PauliOperator {
    let mut xs = vec![];
    let mut zs = vec![];
    for ce in 0..map.coarse.n_edges() {
        let fe = map.fine_edge(ce);
        if p.x_bit(ce) {
            xs.push(fe);
        }
        if p.z_bit(ce) {
            zs.push(fe);
        }
    }
    PauliOperator::from_support(map.fine.n_edges(), &xs, &zs, p.phase())
}

/// Outcome of checking every generator-transformation identity of one
/// coarse-graining step.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct RenormReport {
    pub plaquettes_checked: usize,
    pub fluxes_checked: usize,
    pub stars_checked: usize,
    pub failures: Vec<String>,
}

impl RenormReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Single-qubit Z (resp. X) on the odd-direction edge of a B face that the
/// step disentangles.
fn single_z(lat: &EdgeLattice, e: usize) -> PauliOperator {
    PauliOperator::from_support(lat.n_edges(), &[], &[e], 0)
}

fn single_x(lat: &EdgeLattice, e: usize) -> PauliOperator {
    PauliOperator::from_support(lat.n_edges(), &[e], &[], 0)
}

/// Verifies, exactly and for every face and vertex, how the circuit
/// transforms plaquettes, vertex stars, and flux operators:
///
/// * B plaquettes become the single-qubit Z stabilizer of their
///   disentangled edge;
/// * A plaquettes become the lifted coarse plaquette times that Z;
/// * stars/fluxes at removed positions become the single-qubit X
///   stabilizer (times the B-face Z for fluxes);
/// * stars/fluxes at kept positions become the lifted coarse operator
///   times the neighboring single-qubit factors.
pub fn verify_generator_transformations(lat: &EdgeLattice, dir: Dir) -> Result<RenormReport> {
    let step = coarse_graining_circuit(lat, dir)?;
    let map = &step.map;
    let coarse = &map.coarse;
    let mut report = RenormReport::default();

    let mut check = |label: String, got: PauliOperator, want: PauliOperator| {
        if got != want {
            report.failures.push(format!("{label}: got {got}, want {want}"));
        }
    };

    // Plaquettes.
    for f in 0..lat.n_faces() {
        let (fx, fy) = lat.face_xy(f);
        let (fxi, fyi) = (fx as isize, fy as isize);
        let got = step.circuit.conjugate(&w_face(lat, f))?;
        match lat.sublattice(f, dir) {
            SublatticeTag::B => {
                let e = match dir {
                    Dir::X => lat.face_edges(fxi, fyi).w,
                    Dir::Y => lat.face_edges(fxi, fyi).s,
                };
                check(format!("W at removed face ({fx},{fy})"), got, single_z(lat, e));
            }
            SublatticeTag::A => {
                let (cfx, cfy, bz) = match dir {
                    Dir::X => (fxi / 2, fyi, lat.face_edges(fxi + 1, fyi).w),
                    Dir::Y => (fxi, fyi / 2, lat.face_edges(fxi, fyi + 1).s),
                };
                let coarse_w = w_face(coarse, coarse.face(cfx, cfy));
                let want = lift_operator(map, &coarse_w).mul(&single_z(lat, bz))?;
                check(format!("W at kept face ({fx},{fy})"), got, want);
            }
        }
        report.plaquettes_checked += 1;
    }

    // Vertex stars and flux operators. A vertex is "kept" when its
    // renormalized coordinate is even (its NE face is on the A sublattice).
    for v in 0..lat.n_vertices() {
        let (vx, vy) = lat.vertex_xy(v);
        let (vxi, vyi) = (vx as isize, vy as isize);
        let ne = lat.ne_face(vxi, vyi);
        let star = vertex_star(lat, vxi, vyi);
        let flux = flux_operator(lat, vxi, vyi);
        let got_star = step.circuit.conjugate(&star)?;
        let got_flux = step.circuit.conjugate(&flux)?;
        let (ne_fx, ne_fy) = lat.face_xy(ne);
        let (nfx, nfy) = (ne_fx as isize, ne_fy as isize);
        match lat.sublattice(ne, dir) {
            SublatticeTag::B => {
                // Removed position: star -> X on the disentangled X edge of
                // the NE face; flux = W_NE * star picks up the Z as well.
                let ex = match dir {
                    Dir::X => lat.face_edges(nfx, nfy).s,
                    Dir::Y => lat.face_edges(nfx, nfy).w,
                };
                check(
                    format!("V at removed vertex ({vx},{vy})"),
                    got_star,
                    single_x(lat, ex),
                );
                let ez = match dir {
                    Dir::X => lat.face_edges(nfx, nfy).w,
                    Dir::Y => lat.face_edges(nfx, nfy).s,
                };
                let want = single_z(lat, ez).mul(&single_x(lat, ex))?;
                check(format!("F at removed vertex ({vx},{vy})"), got_flux, want);
            }
            SublatticeTag::A => {
                // Kept position: lifted coarse operator times the X on the
                // neighboring removed face (west for dir = x, south for
                // dir = y).
                let (cvx, cvy, ex) = match dir {
                    Dir::X => (vxi / 2, vyi, lat.face_edges(nfx - 1, nfy).s),
                    Dir::Y => (vxi, vyi / 2, lat.face_edges(nfx, nfy - 1).w),
                };
                let coarse_star = vertex_star(coarse, cvx, cvy);
                let want_star = lift_operator(map, &coarse_star).mul(&single_x(lat, ex))?;
                check(format!("V at kept vertex ({vx},{vy})"), got_star, want_star);
                let coarse_flux = flux_operator(coarse, cvx, cvy);
                let bz = match dir {
                    Dir::X => lat.face_edges(nfx + 1, nfy).w,
                    Dir::Y => lat.face_edges(nfx, nfy + 1).s,
                };
                let want_flux = lift_operator(map, &coarse_flux)
                    .mul(&single_z(lat, bz))?
                    .mul(&single_x(lat, ex))?;
                check(format!("F at kept vertex ({vx},{vy})"), got_flux, want_flux);
            }
        }
        report.stars_checked += 1;
        report.fluxes_checked += 1;
    }
    Ok(report)
}

/// Outcome of checking how the circuit transforms the bosonized hop and
/// parity images: each fine-lattice image maps to the lifted coarse-lattice
/// image, times a single-qubit Z on a disentangled edge when the operator
/// touches the removed sublattice.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct HopImageReport {
    pub hops_checked: usize,
    pub parities_checked: usize,
    pub failures: Vec<String>,
}

impl HopImageReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies the renormalization of the fermionic dictionary: double-length
/// hops across a removed face, unit hops along the kept direction, and
/// on-site parities all map onto the lifted coarse images with the
/// predicted single-qubit corrections.
pub fn verify_hop_images(lat: &EdgeLattice, dir: Dir) -> Result<HopImageReport> {
    use crate::boson::{bosonize_monomial, MajoranaMonomial, Species};
    let step = coarse_graining_circuit(lat, dir)?;
    let map = &step.map;
    let coarse = &map.coarse;
    let mut report = HopImageReport::default();

    let mut check = |label: String,
                     got: crate::boson::ScaledPauli,
                     extra_z: Option<usize>,
                     coarse_m: &crate::boson::MajoranaMonomial|
     -> Result<()> {
        let cb = bosonize_monomial(coarse, coarse_m)?;
        let mut want_op = lift_operator(map, &cb.op);
        if let Some(e) = extra_z {
            want_op = single_z(lat, e).mul(&want_op)?;
        }
        let ok = got.op == want_op.times_i_pow((4 - want_op.phase()) & 3)
            && (got.coeff - cb.coeff * i_pow_c(want_op.phase())).norm() < 1e-12;
        if !ok {
            report.failures.push(label);
        }
        Ok(())
    };

    let hop = |a: usize, b: usize| MajoranaMonomial::new(
        &[(a, Species::Gamma), (b, Species::GammaPrime)],
        1,
    );
    let parity = |f: usize| MajoranaMonomial::new(
        &[(f, Species::Gamma), (f, Species::GammaPrime)],
        3,
    );

    for f in 0..lat.n_faces() {
        if lat.sublattice(f, dir) != SublatticeTag::A {
            continue;
        }
        let (fx, fy) = lat.face_xy(f);
        let (fxi, fyi) = (fx as isize, fy as isize);
        match dir {
            Dir::X => {
                let b_face = lat.face_edges(fxi + 1, fyi);
                let cf = coarse.face(fxi / 2, fyi);
                // Double hop east across the removed column.
                let m = hop(f, lat.face(fxi + 2, fyi));
                let got = bosonize_monomial(lat, &m)?.conjugated_by(&step.circuit)?;
                check(
                    format!("east double hop from ({fx},{fy})"),
                    got,
                    Some(b_face.w),
                    &hop(cf, coarse.face(fxi / 2 + 1, fyi)),
                )?;
                report.hops_checked += 1;
                // Unit hop south stays a unit hop.
                let m = hop(f, lat.face(fxi, fyi - 1));
                let got = bosonize_monomial(lat, &m)?.conjugated_by(&step.circuit)?;
                check(
                    format!("south hop from ({fx},{fy})"),
                    got,
                    None,
                    &hop(cf, coarse.face(fxi / 2, fyi - 1)),
                )?;
                report.hops_checked += 1;
                // Parity picks up the Z on the removed column's |0⟩ edge.
                let got = bosonize_monomial(lat, &parity(f))?.conjugated_by(&step.circuit)?;
                check(
                    format!("parity at ({fx},{fy})"),
                    got,
                    Some(b_face.w),
                    &parity(cf),
                )?;
                report.parities_checked += 1;
            }
            Dir::Y => {
                let b_face = lat.face_edges(fxi, fyi + 1);
                let cf = coarse.face(fxi, fyi / 2);
                // Double hop north across the removed row (written as a hop
                // from the upper face down, matching the dictionary's
                // left-to-right orientation).
                let m = hop(lat.face(fxi, fyi + 2), f);
                let got = bosonize_monomial(lat, &m)?.conjugated_by(&step.circuit)?;
                check(
                    format!("north double hop into ({fx},{fy})"),
                    got,
                    Some(b_face.s),
                    &hop(coarse.face(fxi, fyi / 2 + 1), cf),
                )?;
                report.hops_checked += 1;
                // Unit hop east stays a unit hop.
                let m = hop(f, lat.face(fxi + 1, fyi));
                let got = bosonize_monomial(lat, &m)?.conjugated_by(&step.circuit)?;
                check(
                    format!("east hop from ({fx},{fy})"),
                    got,
                    None,
                    &hop(cf, coarse.face(fxi + 1, fyi / 2)),
                )?;
                report.hops_checked += 1;
                let got = bosonize_monomial(lat, &parity(f))?.conjugated_by(&step.circuit)?;
                check(
                    format!("parity at ({fx},{fy})"),
                    got,
                    Some(b_face.s),
                    &parity(cf),
                )?;
                report.parities_checked += 1;
            }
        }
    }
    Ok(report)
}

fn i_pow_c(k: u8) -> crate::dense::C64 {
    [
        crate::dense::C64::new(1.0, 0.0),
        crate::dense::C64::new(0.0, 1.0),
        crate::dense::C64::new(-1.0, 0.0),
        crate::dense::C64::new(0.0, -1.0),
    ][(k & 3) as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toric_group_ranks() {
        let lat = EdgeLattice::build_torus(2, 2).unwrap();
        assert_eq!(toric_code_group(&lat).unwrap().rank(), 6);
        let lat = EdgeLattice::build_torus(4, 4).unwrap();
        assert_eq!(toric_code_group(&lat).unwrap().rank(), 30);
    }

    #[test]
    fn z2f_and_toric_groups_coincide() {
        for (lx, ly) in [(2, 2), (4, 4), (4, 6)] {
            let lat = EdgeLattice::build_torus(lx, ly).unwrap();
            let a = toric_code_group(&lat).unwrap();
            let b = z2f_group(&lat).unwrap();
            assert!(a.equals(&b), "{lx}x{ly}");
        }
    }

    #[test]
    fn circuit_has_four_commuting_gates_per_removed_face() {
        let lat = EdgeLattice::build_torus(4, 4).unwrap();
        for dir in [Dir::X, Dir::Y] {
            let step = coarse_graining_circuit(&lat, dir).unwrap();
            assert_eq!(step.circuit.gates().len(), 4 * 8);
            assert!(step.circuit.all_gates_commute());
        }
    }

    #[test]
    fn generator_transformations_hold_everywhere() {
        for (lx, ly, dir) in [(4, 4, Dir::X), (4, 4, Dir::Y), (6, 4, Dir::X), (4, 6, Dir::Y)] {
            let lat = EdgeLattice::build_torus(lx, ly).unwrap();
            let report = verify_generator_transformations(&lat, dir).unwrap();
            assert!(
                report.ok(),
                "{lx}x{ly} {dir:?}: {:?}",
                &report.failures[..report.failures.len().min(3)]
            );
            assert_eq!(report.plaquettes_checked, lx * ly);
        }
    }

    #[test]
    fn hop_images_renormalize_onto_the_coarse_dictionary() {
        for (lx, ly, dir) in [(4, 4, Dir::X), (4, 4, Dir::Y), (8, 4, Dir::X), (4, 8, Dir::Y)] {
            let lat = EdgeLattice::build_torus(lx, ly).unwrap();
            let report = verify_hop_images(&lat, dir).unwrap();
            assert!(
                report.ok(),
                "{lx}x{ly} {dir:?}: {:?}",
                &report.failures[..report.failures.len().min(3)]
            );
            assert_eq!(report.hops_checked, lx * ly);
        }
    }
}
