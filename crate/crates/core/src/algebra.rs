//! Three-generator Lie algebras and their finite matrix representations.
//!
//! The whole crate works with a generator triple (A, B, C) obeying
//!
//! ```text
//! [A, B] = n·C,    [C, A] = m·A,    [C, B] = −m·B
//! ```
//!
//! with real structure constants (m, n). The sign of the product m·n decides
//! the character of the algebra: m·n > 0 is the rotation-like (su(2)-type)
//! case, m·n < 0 the pseudo-rotation (su(1,1)-type) case. Shipped
//! representations: spin-j ladders, the two-mode bosonic realization of su(2)
//! on a fixed total-quantum subspace, one- and two-mode bosonic realizations
//! of su(1,1) on truncated Fock ladders, and the two-level raising/lowering
//! triple.
//!
//! Bosonic su(1,1) ladders are infinite-dimensional; their truncations close
//! exactly on all but the last ladder rung (the raising generator maps the top
//! rung outside the kept space). [`Representation::interior_dim`] records the
//! subspace on which closure is exact, and [`verify_closure`] certifies it.

use ndarray::s;

use crate::error::{Error, Result};
use crate::linalg::{adjoint, commutator, cre, max_abs, CMat};

/// Which functional branch the auxiliary flow lives on, decided by sign(m·n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// m·n > 0: circular functions, compact rotations.
    Trigonometric,
    /// m·n < 0: hyperbolic functions, squeezing-type transformations.
    Hyperbolic,
}

/// Structure constants (m, n) of the generator triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraSpec {
    pub m: f64,
    pub n: f64,
}

impl AlgebraSpec {
    /// Validated constructor: both structure constants must be nonzero.
    pub fn new(m: f64, n: f64) -> Result<Self> {
        if m == 0.0 || n == 0.0 || !m.is_finite() || !n.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "structure constants must be finite and nonzero, got (m, n) = ({m}, {n})"
            )));
        }
        Ok(Self { m, n })
    }

    /// su(2)-type constants (m, n) = (1, 2).
    pub fn su2() -> Self {
        Self { m: 1.0, n: 2.0 }
    }

    /// su(1,1)-type constants (m, n) = (1, −2).
    pub fn su11() -> Self {
        Self { m: 1.0, n: -2.0 }
    }

    /// Functional branch from the sign of m·n.
    pub fn branch(&self) -> Branch {
        if self.m * self.n > 0.0 {
            Branch::Trigonometric
        } else {
            Branch::Hyperbolic
        }
    }
}

/// A concrete matrix representation of the generator triple.
#[derive(Debug, Clone)]
pub struct Representation {
    pub spec: AlgebraSpec,
    /// Human-readable identifier used in reports.
    pub label: String,
    pub dim: usize,
    /// Raising-type generator.
    pub a: CMat,
    /// Lowering-type generator (adjoint of `a` for all shipped reps).
    pub b: CMat,
    /// Diagonal (Cartan-like) generator.
    pub c: CMat,
    /// True when the representation is a truncation of an infinite ladder.
    pub truncated: bool,
    /// Dimension of the leading subspace on which closure holds exactly
    /// (equals `dim` for untruncated representations).
    pub interior_dim: usize,
}

impl Representation {
    /// Does (A, B, C) form a Hermitian pair: B = A†, C = C†?
    pub fn is_hermitian_pair(&self) -> bool {
        let scale = max_abs(&self.a).max(max_abs(&self.c)).max(1.0);
        max_abs(&(&self.b - &adjoint(&self.a))) <= 1e-12 * scale
            && max_abs(&(&self.c - &adjoint(&self.c))) <= 1e-12 * scale
    }

    /// Leading `k × k` block of a matrix in this representation's basis.
    pub fn leading_block(m: &CMat, k: usize) -> CMat {
        m.slice(s![0..k, 0..k]).to_owned()
    }

    /// Dimension of the window on which exponential-transformation contracts
    /// are certified. Truncation error leaks many rungs down the ladder under
    /// `exp` of the generators (unlike plain commutators, which spoil only
    /// the last rung), and the leakage grows with both the rotation angle and
    /// the rung amplitudes. Measured decay profiles show the leading third of
    /// the ladder stays at working precision for rapidities up to ≈ 0.5 once
    /// the cutoff is ≥ 24, so truncated representations certify there;
    /// untruncated ones use the full space.
    pub fn contract_dim(&self) -> usize {
        if self.truncated {
            (self.dim / 3).max(1)
        } else {
            self.dim
        }
    }
}

/// Spin-j representation of su(2): basis |j, j⟩, |j, j−1⟩, …, |j, −j⟩
/// (descending magnetic quantum number), A = J₊, B = J₋, C = J₃.
///
/// `j` must be a half-integer ≥ 1/2.
pub fn su2_spin(j: f64) -> Result<Representation> {
    let twoj = 2.0 * j;
    if !(j > 0.0) || (twoj - twoj.round()).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "spin quantum number must be a positive half-integer, got j = {j}"
        )));
    }
    let dim = (twoj.round() as usize) + 1;
    let mut a = CMat::zeros((dim, dim));
    let mut c = CMat::zeros((dim, dim));
    for i in 0..dim {
        let mz = j - i as f64;
        c[[i, i]] = cre(mz);
        if i > 0 {
            // J₊ |j, mz⟩ = √(j(j+1) − mz(mz+1)) |j, mz+1⟩; state i has mz = j − i.
            let amp = (j * (j + 1.0) - mz * (mz + 1.0)).sqrt();
            a[[i - 1, i]] = cre(amp);
        }
    }
    let b = adjoint(&a);
    Ok(Representation {
        spec: AlgebraSpec::su2(),
        label: format!("su2-spin(j={j})"),
        dim,
        a,
        b,
        c,
        truncated: false,
        interior_dim: dim,
    })
}

/// Two-mode bosonic realization of su(2) on the subspace of fixed total
/// quantum number n₁ + n₂ = `total`: basis |r, total−r⟩ with r ascending,
/// A = a₁†a₂, B = a₂†a₁, C = ½(n₁ − n₂).
///
/// The subspace is exactly invariant, so the representation is untruncated
/// (dimension total + 1, equivalent to spin j = total/2). The conserved
/// combination ½(n₁ + n₂) evaluates to total/2 on this subspace.
pub fn schwinger_su2(total: u32) -> Result<Representation> {
    let dim = total as usize + 1;
    let tot = total as f64;
    let mut a = CMat::zeros((dim, dim));
    let mut c = CMat::zeros((dim, dim));
    for r in 0..dim {
        let rf = r as f64;
        c[[r, r]] = cre(rf - tot / 2.0);
        if r + 1 < dim {
            // a₁†a₂ |r, total−r⟩ = √((r+1)(total−r)) |r+1, total−r−1⟩.
            a[[r + 1, r]] = cre(((rf + 1.0) * (tot - rf)).sqrt());
        }
    }
    let b = adjoint(&a);
    Ok(Representation {
        spec: AlgebraSpec::su2(),
        label: format!("su2-two-mode(total={total})"),
        dim,
        a,
        b,
        c,
        truncated: false,
        interior_dim: dim,
    })
}

/// Two-mode bosonic realization of su(1,1) on the ladder of fixed mode
/// imbalance n₁ − n₂ = `delta_n` ≥ 0: rung r holds |r + delta_n, r⟩,
/// A = a₁†a₂† (K₊), B = a₁a₂ (K₋), C = ½(n₁ + n₂ + 1) (K₃).
///
/// The infinite ladder is truncated to `cutoff` rungs (≥ 2); closure holds
/// exactly on the first `cutoff − 1` rungs.
pub fn su11_two_mode(delta_n: u32, cutoff: usize) -> Result<Representation> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument(format!(
            "su(1,1) two-mode ladder needs cutoff ≥ 2, got {cutoff}"
        )));
    }
    let d = delta_n as f64;
    let mut a = CMat::zeros((cutoff, cutoff));
    let mut c = CMat::zeros((cutoff, cutoff));
    for r in 0..cutoff {
        let rf = r as f64;
        c[[r, r]] = cre(rf + (d + 1.0) / 2.0);
        if r + 1 < cutoff {
            // a₁†a₂† |r+d, r⟩ = √((r+d+1)(r+1)) |r+d+1, r+1⟩.
            a[[r + 1, r]] = cre(((rf + d + 1.0) * (rf + 1.0)).sqrt());
        }
    }
    let b = adjoint(&a);
    Ok(Representation {
        spec: AlgebraSpec::su11(),
        label: format!("su11-two-mode(delta_n={delta_n}, cutoff={cutoff})"),
        dim: cutoff,
        a,
        b,
        c,
        truncated: true,
        interior_dim: cutoff - 1,
    })
}

/// One-mode bosonic realization of su(1,1) on the even-parity Fock ladder:
/// rung r holds |2r⟩, A = a†²/2 (K₊), B = a²/2 (K₋), C = ½(a†a + ½) (K₃).
///
/// Truncated to `cutoff` rungs (≥ 2); closure holds exactly on the first
/// `cutoff − 1` rungs. C has eigenvalues r + 1/4.
pub fn su11_one_mode(cutoff: usize) -> Result<Representation> {
    if cutoff < 2 {
        return Err(Error::InvalidArgument(format!(
            "su(1,1) one-mode ladder needs cutoff ≥ 2, got {cutoff}"
        )));
    }
    let mut a = CMat::zeros((cutoff, cutoff));
    let mut c = CMat::zeros((cutoff, cutoff));
    for r in 0..cutoff {
        let nf = 2.0 * r as f64; // photon number on rung r
        c[[r, r]] = cre(0.5 * (nf + 0.5));
        if r + 1 < cutoff {
            // (a†²/2) |2r⟩ = ½√((2r+1)(2r+2)) |2r+2⟩.
            a[[r + 1, r]] = cre(0.5 * ((nf + 1.0) * (nf + 2.0)).sqrt());
        }
    }
    let b = adjoint(&a);
    Ok(Representation {
        spec: AlgebraSpec::su11(),
        label: format!("su11-one-mode(cutoff={cutoff})"),
        dim: cutoff,
        a,
        b,
        c,
        truncated: true,
        interior_dim: cutoff - 1,
    })
}

/// Two-level raising/lowering triple: A = |1⟩⟨2|, B = |2⟩⟨1|,
/// C = ½(|1⟩⟨1| − |2⟩⟨2|). Identical to spin-1/2 with (m, n) = (1, 2).
pub fn two_level() -> Representation {
    let mut a = CMat::zeros((2, 2));
    a[[0, 1]] = cre(1.0);
    let mut c = CMat::zeros((2, 2));
    c[[0, 0]] = cre(0.5);
    c[[1, 1]] = cre(-0.5);
    let b = adjoint(&a);
    Representation {
        spec: AlgebraSpec::su2(),
        label: "two-level".into(),
        dim: 2,
        a,
        b,
        c,
        truncated: false,
        interior_dim: 2,
    }
}

/// Closure certification report for one representation.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    /// Largest entry of [A,B] − nC on the interior subspace.
    pub residual_ab: f64,
    /// Largest entry of [C,A] − mA on the interior subspace.
    pub residual_ca: f64,
    /// Largest entry of [C,B] + mB on the interior subspace.
    pub residual_cb: f64,
    /// Normalization max(1, ‖A‖, ‖B‖, ‖C‖) (entrywise max norms).
    pub scale: f64,
    /// All residuals ≤ tol · scale?
    pub pass: bool,
}

impl ClosureReport {
    pub fn worst(&self) -> f64 {
        self.residual_ab.max(self.residual_ca).max(self.residual_cb)
    }
}

/// Verify the commutation relations on the representation's interior
/// subspace, entrywise, against `tol · max(1, ‖A‖, ‖B‖, ‖C‖)`.
pub fn verify_closure(rep: &Representation, tol: f64) -> ClosureReport {
    let k = rep.interior_dim;
    let scale = max_abs(&rep.a)
        .max(max_abs(&rep.b))
        .max(max_abs(&rep.c))
        .max(1.0);
    let res = |m: &CMat| max_abs(&Representation::leading_block(m, k));
    let ab = commutator(&rep.a, &rep.b) - rep.c.mapv(|z| z * cre(rep.spec.n));
    let ca = commutator(&rep.c, &rep.a) - rep.a.mapv(|z| z * cre(rep.spec.m));
    let cb = commutator(&rep.c, &rep.b) + rep.b.mapv(|z| z * cre(rep.spec.m));
    let (residual_ab, residual_ca, residual_cb) = (res(&ab), res(&ca), res(&cb));
    let pass = residual_ab <= tol * scale && residual_ca <= tol * scale && residual_cb <= tol * scale;
    ClosureReport {
        residual_ab,
        residual_ca,
        residual_cb,
        scale,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CLOSURE_TOL: f64 = 1e-12;

    #[test]
    fn spin_half_matrices_match_pauli_ladder() {
        let rep = su2_spin(0.5).unwrap();
        assert_eq!(rep.dim, 2);
        assert!((rep.a[[0, 1]] - cre(1.0)).norm() < 1e-15);
        assert!(rep.a[[1, 0]].norm() < 1e-15);
        assert!((rep.c[[0, 0]] - cre(0.5)).norm() < 1e-15);
        assert!((rep.c[[1, 1]] + cre(0.5)).norm() < 1e-15);
        assert!(verify_closure(&rep, CLOSURE_TOL).pass);
        assert!(rep.is_hermitian_pair());
    }

    #[test]
    fn spin_one_ladder_amplitudes() {
        let rep = su2_spin(1.0).unwrap();
        assert_eq!(rep.dim, 3);
        let root2 = 2f64.sqrt();
        assert!((rep.a[[0, 1]] - cre(root2)).norm() < 1e-15);
        assert!((rep.a[[1, 2]] - cre(root2)).norm() < 1e-15);
        assert!(verify_closure(&rep, CLOSURE_TOL).pass);
    }

    #[test]
    fn spin_rejects_non_half_integers() {
        assert!(su2_spin(0.3).is_err());
        assert!(su2_spin(0.0).is_err());
        assert!(su2_spin(-1.0).is_err());
    }

    #[test]
    fn schwinger_total_two_has_spin_one_spectrum() {
        let rep = schwinger_su2(2).unwrap();
        assert_eq!(rep.dim, 3);
        let mut eig: Vec<f64> = (0..3).map(|i| rep.c[[i, i]].re).collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(eig, vec![-1.0, 0.0, 1.0]);
        assert!(verify_closure(&rep, CLOSURE_TOL).pass);
        // Equivalent to spin j = 1: same C spectrum, same ladder norms up to
        // basis ordering.
        let spin = su2_spin(1.0).unwrap();
        assert!((max_abs(&rep.a) - max_abs(&spin.a)).abs() < 1e-14);
    }

    #[test]
    fn schwinger_total_zero_is_one_dimensional_and_trivial() {
        let rep = schwinger_su2(0).unwrap();
        assert_eq!(rep.dim, 1);
        assert!(max_abs(&rep.a) < 1e-15);
        assert!(verify_closure(&rep, CLOSURE_TOL).pass);
    }

    #[test]
    fn su11_two_mode_interior_closure_and_last_rung_violation() {
        let rep = su11_two_mode(0, 6).unwrap();
        assert_eq!(rep.interior_dim, 5);
        // C eigenvalues step by one starting at 1/2.
        for r in 0..6 {
            assert!((rep.c[[r, r]].re - (r as f64 + 0.5)).abs() < 1e-14);
        }
        let report = verify_closure(&rep, CLOSURE_TOL);
        assert!(report.pass, "interior closure residual {:.3e}", report.worst());
        // Full-space [A,B] − nC is violated on the last rung only.
        let full = commutator(&rep.a, &rep.b) - rep.c.mapv(|z| z * cre(rep.spec.n));
        assert!(max_abs(&full) > 1.0, "truncation must bite on the top rung");
        let interior = Representation::leading_block(&full, rep.interior_dim);
        assert!(max_abs(&interior) < 1e-12);
    }

    #[test]
    fn su11_one_mode_quarter_spectrum() {
        let rep = su11_one_mode(5).unwrap();
        for r in 0..5 {
            assert!((rep.c[[r, r]].re - (r as f64 + 0.25)).abs() < 1e-14);
        }
        assert!(verify_closure(&rep, CLOSURE_TOL).pass);
        assert_eq!(rep.spec.branch(), Branch::Hyperbolic);
    }

    #[test]
    fn su11_rejects_degenerate_cutoffs() {
        assert!(su11_two_mode(0, 1).is_err());
        assert!(su11_one_mode(0).is_err());
    }

    #[test]
    fn two_level_equals_spin_half() {
        let tl = two_level();
        let spin = su2_spin(0.5).unwrap();
        assert!(max_abs(&(&tl.a - &spin.a)) < 1e-15);
        assert!(max_abs(&(&tl.c - &spin.c)) < 1e-15);
        assert!(verify_closure(&tl, CLOSURE_TOL).pass);
    }

    #[test]
    fn algebra_spec_rejects_zero_constants() {
        assert!(AlgebraSpec::new(0.0, 2.0).is_err());
        assert!(AlgebraSpec::new(1.0, 0.0).is_err());
        assert!(AlgebraSpec::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn branch_follows_sign_of_mn() {
        assert_eq!(AlgebraSpec::su2().branch(), Branch::Trigonometric);
        assert_eq!(AlgebraSpec::su11().branch(), Branch::Hyperbolic);
        assert_eq!(
            AlgebraSpec::new(-1.0, -2.0).unwrap().branch(),
            Branch::Trigonometric
        );
    }

    proptest! {
        #[test]
        fn closure_holds_for_all_half_integer_spins(twoj in 1u32..=12) {
            let rep = su2_spin(twoj as f64 / 2.0).unwrap();
            let report = verify_closure(&rep, CLOSURE_TOL);
            prop_assert!(report.pass, "spin closure residual {:.3e}", report.worst());
        }

        #[test]
        fn closure_holds_for_schwinger_subspaces(total in 0u32..=10) {
            let rep = schwinger_su2(total).unwrap();
            prop_assert!(verify_closure(&rep, CLOSURE_TOL).pass);
        }

        #[test]
        fn closure_holds_on_su11_interiors(delta in 0u32..=3, cutoff in 2usize..=24) {
            let two = su11_two_mode(delta, cutoff).unwrap();
            prop_assert!(verify_closure(&two, CLOSURE_TOL).pass);
            let one = su11_one_mode(cutoff).unwrap();
            prop_assert!(verify_closure(&one, CLOSURE_TOL).pass);
        }
    }
}
