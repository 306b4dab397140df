//! Dense-matrix reference implementations used to cross-check the symbolic
//! algebra, plus the small exact-diagonalization harness for torus spectra.
//!
//! Qubit 0 is the least significant bit of the computational-basis index.

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;

/// Dense matrix of a Pauli operator: `X^x Z^z |b> = (-1)^<z,b> |b ^ x>`,
/// times `i^phase`.
pub fn pauli_matrix(p: &PauliOperator) -> DMatrix<C64> {
    let n = p.num_qubits();
    assert!(n <= 16, "dense Pauli matrices are for small qubit counts");
    let dim = 1usize << n;
    let (xmask, zmask) = masks(p);
    let ph = i_pow(p.phase());
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for b in 0..dim {
        let sign = if ((b & zmask).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        m[(b ^ xmask, b)] = ph * sign;
    }
    m
}

/// Applies a Pauli operator to a dense state vector without forming the
/// matrix.
pub fn pauli_apply(p: &PauliOperator, v: &DVector<C64>) -> DVector<C64> {
    let n = p.num_qubits();
    let dim = 1usize << n;
    assert_eq!(v.len(), dim);
    let (xmask, zmask) = masks(p);
    let ph = i_pow(p.phase());
    let mut out = DVector::<C64>::zeros(dim);
    for b in 0..dim {
        let sign = if ((b & zmask).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        out[b ^ xmask] += ph * sign * v[b];
    }
    out
}

/// Dense matrix of a weighted Pauli sum.
pub fn terms_matrix(n: usize, terms: &[(C64, PauliOperator)]) -> DMatrix<C64> {
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (c, p) in terms {
        assert_eq!(p.num_qubits(), n);
        let (xmask, zmask) = masks(p);
        let ph = i_pow(p.phase()) * c;
        for b in 0..dim {
            let sign = if ((b & zmask).count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            m[(b ^ xmask, b)] += ph * sign;
        }
    }
    m
}

fn masks(p: &PauliOperator) -> (usize, usize) {
    let n = p.num_qubits();
    let mut xmask = 0usize;
    let mut zmask = 0usize;
    for q in 0..n {
        if p.x_bit(q) {
            xmask |= 1 << q;
        }
        if p.z_bit(q) {
            zmask |= 1 << q;
        }
    }
    (xmask, zmask)
}

fn i_pow(k: u8) -> C64 {
    match k & 3 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations: returns
/// ascending eigenvalues and the matching unitary of eigenvector columns.
///
/// Jacobi is used instead of a tridiagonalization-based solver because it
/// stays accurate on (near-)degenerate spectra, which are the common case
/// for the translation-invariant Hamiltonians in this crate.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let herm_err = (m - m.adjoint()).norm();
    if herm_err > 1e-9 * (1.0 + m.norm()) {
        return Err(Error::invalid(format!(
            "matrix is not Hermitian (||M - M'|| = {herm_err:.3e})"
        )));
    }
    let n = m.nrows();
    let mut a = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut v = DMatrix::<C64>::identity(n, n);
    let scale = a.norm().max(1e-300);
    // Elements already below the convergence floor are left alone; they only
    // change as side effects of other rotations.
    let skip = 1e-17 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                // Unitary rotation in the (p, q) plane zeroing a_pq.
                let phase = apq / C64::new(r, 0.0);
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * C64::new(t * c, 0.0);
                let s_conj = s.conj();
                // Columns: A <- A J with J_pp = J_qq = c, J_pq = s, J_qp = -s̄.
                // The row update A <- J† A touches only rows p and q of the
                // result, which Hermiticity pins to the conjugates of columns
                // p and q, so it is folded in afterwards instead of applied.
                {
                    let (lo, hi) = a.as_mut_slice().split_at_mut(q * n);
                    let colp = &mut lo[p * n..p * n + n];
                    let colq = &mut hi[..n];
                    for i in 0..n {
                        let (aip, aiq) = (colp[i], colq[i]);
                        colp[i] = aip * c - aiq * s_conj;
                        colq[i] = aip * s + aiq * c;
                    }
                }
                {
                    let (lo, hi) = v.as_mut_slice().split_at_mut(q * n);
                    let colp = &mut lo[p * n..p * n + n];
                    let colq = &mut hi[..n];
                    for i in 0..n {
                        let (vip, viq) = (colp[i], colq[i]);
                        colp[i] = vip * c - viq * s_conj;
                        colq[i] = vip * s + viq * c;
                    }
                }
                for j in 0..n {
                    a[(p, j)] = a[(j, p)].conj();
                    a[(q, j)] = a[(j, q)].conj();
                }
                a[(p, p)] = C64::new(app - t * r, 0.0);
                a[(q, q)] = C64::new(aqq + t * r, 0.0);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vecs = DMatrix::<C64>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &v.column(i));
    }
    Ok((eigenvalues, vecs))
}

/// Ascending eigenvalues of a Hermitian matrix. Errors when the input is
/// measurably non-Hermitian.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}


/// Eigenvalues of a Hermitian matrix restricted to the joint +1 eigenspace
/// of a set of commuting Hermitian involutions (e.g. flux and loop
/// operators). Returns the in-sector spectrum, ascending.
pub fn sector_spectrum(
    n: usize,
    hamiltonian: &[(C64, PauliOperator)],
    sector_ops: &[PauliOperator],
) -> Result<Vec<f64>> {
    let dim = 1usize << n;
    // Projector P = prod (1 + S_i) / 2 applied to a basis of the full space,
    // then orthonormalized to a sector basis via column pivoting.
    let mut proj = DMatrix::<C64>::identity(dim, dim);
    for s in sector_ops {
        let sm = pauli_matrix(s);
        proj = (&proj + &sm * &proj) * C64::new(0.5, 0.0);
    }
    // Column-orthonormalize the projector image.
    let mut basis: Vec<DVector<C64>> = vec![];
    for col in 0..dim {
        let mut v: DVector<C64> = proj.column(col).into_owned();
        for b in &basis {
            let ov = b.dotc(&v);
            v -= b * ov;
        }
        let nrm = v.norm();
        if nrm > 1e-8 {
            basis.push(v / C64::new(nrm, 0.0));
        }
    }
    if basis.is_empty() {
        return Err(Error::invalid("empty symmetry sector"));
    }
    let h = terms_matrix(n, hamiltonian);
    let k = basis.len();
    let mut hs = DMatrix::<C64>::zeros(k, k);
    for (j, bj) in basis.iter().enumerate() {
        let hbj = &h * bj;
        for (i, bi) in basis.iter().enumerate() {
            hs[(i, j)] = bi.dotc(&hbj);
        }
    }
    hermitian_eigenvalues(&hs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;

    #[test]
    fn jacobi_eigensolver_handles_degenerate_hermitian_matrices() {
        use rand::prelude::*;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..25 {
            let d = 12;
            // Random unitary conjugation of a highly degenerate diagonal.
            let g = DMatrix::<C64>::from_fn(d, d, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let q = g.qr().q();
            let mut diag = DMatrix::<C64>::zeros(d, d);
            for i in 0..d {
                diag[(i, i)] = C64::new([1.0, 1.0, -2.0, 3.0][rng.gen_range(0..4)], 0.0);
            }
            let h = &q * diag * q.adjoint();
            let (evals, evecs) = hermitian_eigen(&h).unwrap();
            let recon = &evecs
                * DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    d,
                    evals.iter().map(|&e| C64::new(e, 0.0)),
                ))
                * evecs.adjoint();
            assert!((&recon - &h).map(|z| z.norm()).max() < 1e-10);
            assert!(
                (&evecs * evecs.adjoint() - DMatrix::<C64>::identity(d, d))
                    .map(|z| z.norm())
                    .max()
                    < 1e-12
            );
            assert!(evals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn pauli_matrices_match_the_textbook_forms() {
        let x = pauli_matrix(&PauliOperator::single(1, 0, Axis::X));
        assert_eq!(x[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(x[(1, 0)], C64::new(1.0, 0.0));
        let y = pauli_matrix(&PauliOperator::parse(1, "+Y0").unwrap());
        assert_eq!(y[(1, 0)], C64::new(0.0, 1.0));
        assert_eq!(y[(0, 1)], C64::new(0.0, -1.0));
    }

    #[test]
    fn dense_product_matches_symbolic_product() {
        let a = PauliOperator::parse(3, "+X0 Y1 Z2").unwrap();
        let b = PauliOperator::parse(3, "-i Z0 X1 X2").unwrap();
        let ab = a.mul(&b).unwrap();
        let dense = pauli_matrix(&a) * pauli_matrix(&b);
        assert!((dense - pauli_matrix(&ab)).norm() < 1e-12);
    }

    #[test]
    fn sector_spectrum_splits_a_single_qubit() {
        // H = X0 restricted to Z1 = +1 on two qubits: eigenvalues ±1.
        let h = vec![(
            C64::new(1.0, 0.0),
            PauliOperator::single(2, 0, Axis::X),
        )];
        let sector = vec![PauliOperator::single(2, 1, Axis::Z)];
        let ev = sector_spectrum(2, &h, &sector).unwrap();
        assert_eq!(ev.len(), 2);
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }
}
