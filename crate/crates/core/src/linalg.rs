//! Dense complex linear algebra at desk scale.
//!
//! Everything in the crate works with dense `Array2<Complex64>` matrices of
//! dimension ≤ a few hundred, so the routines here favor determinism and
//! self-containedness over asymptotics: a Padé scaling-and-squaring matrix
//! exponential, a Gaussian-elimination solver, and a cyclic Jacobi
//! eigensolver for Hermitian matrices. No external BLAS/LAPACK is linked;
//! every result is reproducible bit-for-bit across runs.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMat = Array2<Complex64>;
/// Dense complex vector.
pub type CVec = Array1<Complex64>;

/// Shorthand complex constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real number promoted to a complex scalar.
#[inline]
pub fn cre(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `n × n` identity matrix.
pub fn identity(n: usize) -> CMat {
    let mut m = CMat::zeros((n, n));
    for i in 0..n {
        m[[i, i]] = cre(1.0);
    }
    m
}

/// Conjugate transpose.
pub fn adjoint(a: &CMat) -> CMat {
    let (r, c) = a.dim();
    let mut out = CMat::zeros((c, r));
    for i in 0..r {
        for j in 0..c {
            out[[j, i]] = a[[i, j]].conj();
        }
    }
    out
}

/// Commutator `[a, b] = ab − ba`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) - b.dot(a)
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute column sum (operator 1-norm), used to pick the scaling
/// power in the matrix exponential.
pub fn one_norm(a: &CMat) -> f64 {
    let (r, c) = a.dim();
    let mut best = 0.0_f64;
    for j in 0..c {
        let mut s = 0.0;
        for i in 0..r {
            s += a[[i, j]].norm();
        }
        best = best.max(s);
    }
    best
}

/// Largest entry modulus.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖a − a†‖_F ≤ tol · max(1, ‖a‖_F)`?
pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    let dev = fro_norm(&(a - &adjoint(a)));
    dev <= tol * fro_norm(a).max(1.0)
}

/// Euclidean inner product `⟨x|y⟩ = Σ x̄ᵢ yᵢ` (conjugate-linear in the first
/// slot, matching bra-ket convention).
pub fn inner(x: &CVec, y: &CVec) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Euclidean vector norm.
pub fn vec_norm(x: &CVec) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMat::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Truncated bosonic lowering operator on `dim` Fock states:
/// `a|n⟩ = √n |n−1⟩` for `n < dim`.
pub fn fock_lowering(dim: usize) -> CMat {
    let mut a = CMat::zeros((dim, dim));
    for n in 1..dim {
        a[[n - 1, n]] = cre((n as f64).sqrt());
    }
    a
}

/// Solve `A X = B` for dense complex `A` by Gaussian elimination with partial
/// pivoting. `B` may have any number of columns.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::InvalidArgument(format!(
            "solve: shape mismatch ({}×{} vs {}×{})",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let cols = x.ncols();
    for k in 0..n {
        // Partial pivot: largest modulus on or below the diagonal.
        let mut piv = k;
        let mut piv_mag = lu[[k, k]].norm();
        for i in (k + 1)..n {
            let mag = lu[[i, k]].norm();
            if mag > piv_mag {
                piv = i;
                piv_mag = mag;
            }
        }
        if piv_mag < 1e-300 {
            return Err(Error::Numerical(format!(
                "solve: singular pivot at column {k}"
            )));
        }
        if piv != k {
            for j in 0..n {
                lu.swap([k, j], [piv, j]);
            }
            for j in 0..cols {
                x.swap([k, j], [piv, j]);
            }
        }
        let pivot = lu[[k, k]];
        for i in (k + 1)..n {
            let factor = lu[[i, k]] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let sub = factor * lu[[k, j]];
                lu[[i, j]] -= sub;
            }
            for j in 0..cols {
                let sub = factor * x[[k, j]];
                x[[i, j]] -= sub;
            }
        }
    }
    // Back substitution.
    for k in (0..n).rev() {
        let pivot = lu[[k, k]];
        for j in 0..cols {
            let mut s = x[[k, j]];
            for i in (k + 1)..n {
                s -= lu[[k, i]] * x[[i, j]];
            }
            x[[k, j]] = s / pivot;
        }
    }
    Ok(x)
}

/// Padé(13) numerator/denominator coefficients for the matrix exponential
/// (Higham's scaling-and-squaring method).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm threshold above which the argument is scaled down before the
/// Padé(13) approximation is applied.
const PADE13_THETA: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant. Accurate to close to machine precision for the desk-scale
/// matrices used throughout the crate.
pub fn matrix_exp(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix_exp: matrix must be square, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok(CMat::zeros((0, 0)));
    }
    let norm = one_norm(a);
    let s = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let scale = cre((0.5f64).powi(s as i32));
    let x = a.mapv(|z| z * scale);

    let x2 = x.dot(&x);
    let x4 = x2.dot(&x2);
    let x6 = x4.dot(&x2);
    let eye = identity(n);

    // U = X · (X6·(b13 X6 + b11 X4 + b9 X2) + b7 X6 + b5 X4 + b3 X2 + b1 I)
    let inner_u = x6.mapv(|z| z * cre(PADE13[13]))
        + x4.mapv(|z| z * cre(PADE13[11]))
        + x2.mapv(|z| z * cre(PADE13[9]));
    let u_poly = x6.dot(&inner_u)
        + x6.mapv(|z| z * cre(PADE13[7]))
        + x4.mapv(|z| z * cre(PADE13[5]))
        + x2.mapv(|z| z * cre(PADE13[3]))
        + eye.mapv(|z| z * cre(PADE13[1]));
    let u = x.dot(&u_poly);

    // V = X6·(b12 X6 + b10 X4 + b8 X2) + b6 X6 + b4 X4 + b2 X2 + b0 I
    let inner_v = x6.mapv(|z| z * cre(PADE13[12]))
        + x4.mapv(|z| z * cre(PADE13[10]))
        + x2.mapv(|z| z * cre(PADE13[8]));
    let v = x6.dot(&inner_v)
        + x6.mapv(|z| z * cre(PADE13[6]))
        + x4.mapv(|z| z * cre(PADE13[4]))
        + x2.mapv(|z| z * cre(PADE13[2]))
        + eye.mapv(|z| z * cre(PADE13[0]));

    // exp(X) ≈ (V − U)⁻¹ (V + U), then undo the scaling by repeated squaring.
    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..s {
        r = r.dot(&r);
    }
    Ok(r)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Returns eigenvalues sorted ascending and the matching unitary of column
/// eigenvectors. Each eigenvector's phase is fixed deterministically: its
/// first component of modulus > 1e−12 is made real and positive.
///
/// The input is symmetrized as `(A + A†)/2` after checking that `A` is
/// Hermitian to `1e−8` relative; a clearly non-Hermitian input is an error.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "eigh: matrix must be square, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !is_hermitian(a, 1e-8) {
        return Err(Error::NonHermitian(format!(
            "eigh: input deviates from Hermitian by {:.3e} (relative)",
            fro_norm(&(a - &adjoint(a))) / fro_norm(a).max(1.0)
        )));
    }
    let mut m = (a + &adjoint(a)).mapv(|z| z * cre(0.5));
    let mut v = identity(n);
    let scale = fro_norm(&m).max(1.0);
    let target = 1e-14 * scale;

    let off = |m: &CMat| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += m[[p, q]].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let mut converged = false;
    for _sweep in 0..100 {
        if off(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                let r = apq.norm();
                if r <= target / (n as f64) {
                    continue;
                }
                let phase = apq / cre(r); // e^{iα}
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary G embedding [[c·e^{iα}, s·e^{iα}], [−s, c]] in the
                // (p, q) plane; G† M G zeroes the (p, q) entry.
                let gpp = phase * cre(c);
                let gpq = phase * cre(s);
                let gqp = cre(-s);
                let gqq = cre(c);
                // Column update: M ← M·G, V ← V·G.
                for i in 0..n {
                    let mip = m[[i, p]];
                    let miq = m[[i, q]];
                    m[[i, p]] = mip * gpp + miq * gqp;
                    m[[i, q]] = mip * gpq + miq * gqq;
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * gpp + viq * gqp;
                    v[[i, q]] = vip * gpq + viq * gqq;
                }
                // Row update: M ← G†·M.
                for j in 0..n {
                    let mpj = m[[p, j]];
                    let mqj = m[[q, j]];
                    m[[p, j]] = gpp.conj() * mpj + gqp.conj() * mqj;
                    m[[q, j]] = gpq.conj() * mpj + gqq.conj() * mqj;
                }
                // Clean up rounding on the eliminated pair.
                m[[p, q]] = cre(0.0);
                m[[q, p]] = cre(0.0);
            }
        }
    }
    if !converged && off(&m) > target * 10.0 {
        return Err(Error::Numerical(format!(
            "eigh: Jacobi sweep did not converge (off-norm {:.3e})",
            off(&m)
        )));
    }

    // Sort eigenpairs ascending.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = CMat::zeros((n, n));
    for (newcol, &oldcol) in order.iter().enumerate() {
        // Deterministic phase: first component of modulus > 1e−12 made
        // real positive.
        let mut fix = cre(1.0);
        for i in 0..n {
            let z = v[[i, oldcol]];
            if z.norm() > 1e-12 {
                fix = z.conj() / cre(z.norm());
                break;
            }
        }
        let mut nrm = 0.0;
        for i in 0..n {
            nrm += v[[i, oldcol]].norm_sqr();
        }
        let nrm = cre(nrm.sqrt());
        for i in 0..n {
            vecs[[i, newcol]] = v[[i, oldcol]] * fix / nrm;
        }
    }
    Ok((vals, vecs))
}
