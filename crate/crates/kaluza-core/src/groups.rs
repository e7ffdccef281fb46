//! The four affine symmetry groups acting on R^4 / R^5: Poincare, the 5D
//! hyperbolic isometry group, its omega-scaled family, and the contracted
//! group of the collapsed fifth dimension.
//!
//! Elements are affine pairs `(C, P)` acting as `X' -> X = C + P X'`. The
//! composition law for the contracted group is not postulated separately: it
//! is plain block multiplication,
//!
//! ```text
//! [[P1,0],[b1*,1]] [[P2,0],[b2*,1]] = [[P1 P2, 0], [b1* P2 + b2*, 1]]
//! ```
//!
//! so the `b`-rows add after a Lorentz twist.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hyperlin::{Metric, SemiMetric};
use crate::linalg::{self, Matrix};

/// Absolute tolerance of the membership checks on unit-scale entries.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Which of the four groups an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupFlavor {
    /// Affine isometries of Minkowski R^4.
    Poincare,
    /// Affine isometries of the 5D hyperbolic metric diag(1,-1,-1,-1,-1).
    G1,
    /// Affine isometries of diag(1,-1,-1,-1,-omega^2); `G1` equals omega = 1.
    GOmega(f64),
    /// Affine maps preserving the degenerate tensor diag(1,-1,-1,-1,0) and
    /// the fifth-axis vector; the omega -> 0 contraction.
    G0,
}

impl GroupFlavor {
    pub fn space_dim(&self) -> usize {
        match self {
            GroupFlavor::Poincare => 4,
            _ => 5,
        }
    }

    pub fn algebra_dim(&self) -> usize {
        match self {
            GroupFlavor::Poincare => 10,
            _ => 15,
        }
    }

    /// The invertible metric the flavor's linear parts preserve, if any.
    pub fn metric(&self) -> Option<Metric> {
        match self {
            GroupFlavor::Poincare => Some(Metric::minkowski()),
            GroupFlavor::G1 => Some(Metric::hat_one()),
            GroupFlavor::GOmega(w) => Metric::hat_omega(*w).ok(),
            GroupFlavor::G0 => None,
        }
    }

    pub fn omega(&self) -> Option<f64> {
        match self {
            GroupFlavor::G1 => Some(1.0),
            GroupFlavor::GOmega(w) => Some(*w),
            _ => None,
        }
    }

    /// Effective omega entering the 5D block formulas (1 for `G1`, 0 for the
    /// contracted group).
    pub(crate) fn omega_or_zero(&self) -> f64 {
        match self {
            GroupFlavor::Poincare => 0.0,
            GroupFlavor::G1 => 1.0,
            GroupFlavor::GOmega(w) => *w,
            GroupFlavor::G0 => 0.0,
        }
    }

    pub fn is_hat(&self) -> bool {
        !matches!(self, GroupFlavor::Poincare)
    }
}

fn minkowski() -> Metric {
    Metric::minkowski()
}

/// Lorentz transformation from a boost velocity `v` (norm < 1) and a spatial
/// rotation `R` in SO(3):
///
/// ```text
/// P = [[gamma, gamma v^T R], [gamma v, (1 + gamma^2/(gamma+1) v v^T) R]]
/// ```
pub fn lorentz_from_boost_rotation(v: &[f64], r: &Matrix) -> Result<Matrix> {
    if v.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: v.len() });
    }
    let v2 = linalg::dot(v, v);
    if v2 >= 1.0 {
        return Err(Error::SuperluminalBoost);
    }
    if r.rows() != 3 || r.cols() != 3 {
        return Err(Error::InvalidRotation);
    }
    if r.transpose().mul(r).max_abs_diff(&Matrix::identity(3)) > MEMBERSHIP_TOL
        || (r.det() - 1.0).abs() > 1e-10
    {
        return Err(Error::InvalidRotation);
    }
    let gamma = 1.0 / libm::sqrt(1.0 - v2);
    let mut p = Matrix::zeros(4, 4);
    p[(0, 0)] = gamma;
    let vt_r = r.transpose().apply(v); // row v^T R as a vector
    for j in 0..3 {
        p[(0, 1 + j)] = gamma * vt_r[j];
        p[(1 + j, 0)] = gamma * v[j];
    }
    let spatial = Matrix::identity(3)
        .add(&Matrix::outer(v, v).scale(gamma * gamma / (gamma + 1.0)))
        .mul(r);
    p.set_block(1, 1, &spatial);
    Ok(p)
}

/// A group element `a = (C, P)`, `X' -> X = C + P X'`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    flavor: GroupFlavor,
    c: Vec<f64>,
    p: Matrix,
}

impl GroupElement {
    pub fn identity(flavor: GroupFlavor) -> Self {
        let n = flavor.space_dim();
        GroupElement { flavor, c: vec![0.0; n], p: Matrix::identity(n) }
    }

    /// Poincare element from a translation and a Lorentz linear part.
    pub fn poincare(c: &[f64], p_l: &Matrix) -> Result<Self> {
        let el = GroupElement { flavor: GroupFlavor::Poincare, c: c.to_vec(), p: p_l.clone() };
        el.validate()?;
        Ok(el)
    }

    /// Canonical constructor of the 5D flavors from the parameterization
    /// `(C, xi, P_L, b)`: for the metric-preserving flavors
    ///
    /// ```text
    /// beta = sqrt(1 + w^2 b*b),  B = 1 + w^2/(beta+1) b b*,  P = P_L B,
    /// P_hat = [[P, w^2 beta P*^-1 b], [b*, beta]]
    /// ```
    ///
    /// and for the contracted flavor `P_hat = [[P_L, 0], [b*, 1]]`.
    pub fn hat(flavor: GroupFlavor, c: &[f64], xi: f64, p_l: &Matrix, b: &[f64]) -> Result<Self> {
        if !flavor.is_hat() {
            return Err(Error::FlavorMismatch);
        }
        if c.len() != 4 || b.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: c.len().max(b.len()) });
        }
        let g = minkowski();
        let mut chat = c.to_vec();
        chat.push(xi);
        let b_star = g.lower(b); // row b* = b^T G
        let mut p = Matrix::identity(5);
        match flavor {
            GroupFlavor::G0 => {
                p.set_block(0, 0, p_l);
                for j in 0..4 {
                    p[(4, j)] = b_star[j];
                }
            }
            GroupFlavor::G1 | GroupFlavor::GOmega(_) => {
                let w2 = {
                    let w = flavor.omega_or_zero();
                    w * w
                };
                let bb = g.inner(b, b);
                let beta2 = 1.0 + w2 * bb;
                if beta2 <= 0.0 {
                    return Err(Error::InvalidBoostParameter);
                }
                let beta = libm::sqrt(beta2);
                let big_b = Matrix::identity(4)
                    .add(&Matrix::outer(b, &b_star).scale(w2 / (beta + 1.0)));
                let p4 = p_l.mul(&big_b);
                let p4_star = g.adjoint(&p4);
                let p4_star_inv =
                    p4_star.inverse().ok_or(Error::MembershipViolated("singular linear part"))?;
                let col = linalg::scale(&p4_star_inv.apply(b), w2 * beta);
                p.set_block(0, 0, &p4);
                for i in 0..4 {
                    p[(i, 4)] = col[i];
                }
                for j in 0..4 {
                    p[(4, j)] = b_star[j];
                }
                p[(4, 4)] = beta;
            }
            GroupFlavor::Poincare => unreachable!(),
        }
        let el = GroupElement { flavor, c: chat, p };
        el.validate()?;
        Ok(el)
    }

    /// Raw constructor; checks the membership invariants.
    pub fn from_raw(flavor: GroupFlavor, c: &[f64], p: &Matrix) -> Result<Self> {
        let n = flavor.space_dim();
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: c.len() });
        }
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.rows() });
        }
        let el = GroupElement { flavor, c: c.to_vec(), p: p.clone() };
        el.validate()?;
        Ok(el)
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.flavor
    }

    pub fn translation(&self) -> &[f64] {
        &self.c
    }

    pub fn linear(&self) -> &Matrix {
        &self.p
    }

    /// Spacetime part of the translation.
    pub fn c4(&self) -> &[f64] {
        &self.c[0..4]
    }

    /// Fifth translation component (0 for Poincare).
    pub fn xi(&self) -> f64 {
        if self.flavor.is_hat() {
            self.c[4]
        } else {
            0.0
        }
    }

    /// Upper-left 4x4 block of the linear part.
    pub fn p4(&self) -> Matrix {
        self.p.block(0, 0, 4, 4)
    }

    /// The `b` parameter recovered from the bottom-left row `b* = b^T G`.
    pub fn b_param(&self) -> Vec<f64> {
        assert!(self.flavor.is_hat());
        let row: Vec<f64> = (0..4).map(|j| self.p[(4, j)]).collect();
        minkowski().raise(&row)
    }

    /// Bottom-right entry (`beta` for the metric flavors, 1 for the
    /// contracted one).
    pub fn beta(&self) -> f64 {
        assert!(self.flavor.is_hat());
        self.p[(4, 4)]
    }

    /// Largest violation of the flavor's membership invariants.
    pub fn membership_violation(&self) -> f64 {
        match self.flavor {
            GroupFlavor::Poincare | GroupFlavor::G1 | GroupFlavor::GOmega(_) => {
                let g = self.flavor.metric().expect("invertible metric");
                // P* P = 1  <=>  P^T G P = G
                self.p
                    .transpose()
                    .mul(g.gram())
                    .mul(&self.p)
                    .max_abs_diff(g.gram())
            }
            GroupFlavor::G0 => {
                let semi = SemiMetric::g0_hat();
                let mut worst = self
                    .p
                    .transpose()
                    .mul(semi.gram())
                    .mul(&self.p)
                    .max_abs_diff(semi.gram());
                // preserved fifth-axis vector
                let omega0 = [0.0, 0.0, 0.0, 0.0, 1.0];
                let image = self.p.apply(&omega0);
                worst = linalg::fmax(worst, linalg::max_abs_diff(&image, &omega0));
                worst
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if self.membership_violation() > MEMBERSHIP_TOL {
            return Err(Error::MembershipViolated("linear part does not conserve the structure"));
        }
        // connected component: positive determinant, positive (t,t) entry
        if self.p.det() <= 0.0 || self.p[(0, 0)] <= 0.0 {
            return Err(Error::MembershipViolated("outside the identity component"));
        }
        if self.flavor == GroupFlavor::G0 {
            // strict block form: zero last column above the corner, unit corner
            for i in 0..4 {
                if libm::fabs(self.p[(i, 4)]) > MEMBERSHIP_TOL {
                    return Err(Error::MembershipViolated("nonzero upper-right block"));
                }
            }
            if libm::fabs(self.p[(4, 4)] - 1.0) > MEMBERSHIP_TOL {
                return Err(Error::MembershipViolated("corner entry must be 1"));
            }
        }
        Ok(())
    }

    /// Affine composition `(C1 + P1 C2, P1 P2)`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch);
        }
        let c = linalg::add(&self.c, &self.p.apply(&other.c));
        Ok(GroupElement { flavor: self.flavor, c, p: self.p.mul(&other.p) })
    }

    /// Affine inverse `(-P^-1 C, P^-1)`.
    pub fn inverse(&self) -> GroupElement {
        let pinv = self.p.inverse().expect("group elements are invertible");
        let c = linalg::scale(&pinv.apply(&self.c), -1.0);
        GroupElement { flavor: self.flavor, c, p: pinv }
    }

    /// Applies the affine map to a point.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        linalg::add(&self.c, &self.p.apply(x))
    }

    /// Spacetime part of the affine action, `X -> C + P X` on the 4-block.
    /// For the 5D flavors this is the action on the base (the fifth
    /// coordinate feels the `b`-row separately).
    pub fn apply_spacetime(&self, x: &[f64]) -> Vec<f64> {
        linalg::add(self.c4(), &self.p4().apply(x))
    }
}

/// An element `(dC, dP)` of the Lie algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    flavor: GroupFlavor,
    dc: Vec<f64>,
    dp: Matrix,
}

impl AlgebraElement {
    pub fn new(flavor: GroupFlavor, dc: &[f64], dp: &Matrix) -> Result<Self> {
        let z = AlgebraElement { flavor, dc: dc.to_vec(), dp: dp.clone() };
        let v = z.invariant_violation();
        if v > MEMBERSHIP_TOL * linalg::fmax(1.0, z.dp.max_abs()) {
            return Err(Error::MembershipViolated("dP is not in the flavor's algebra"));
        }
        Ok(z)
    }

    pub fn zero(flavor: GroupFlavor) -> Self {
        let n = flavor.space_dim();
        AlgebraElement { flavor, dc: vec![0.0; n], dp: Matrix::zeros(n, n) }
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.flavor
    }

    pub fn delta_c(&self) -> &[f64] {
        &self.dc
    }

    pub fn delta_p(&self) -> &Matrix {
        &self.dp
    }

    /// Spacetime translation generator components.
    pub fn delta_c4(&self) -> &[f64] {
        &self.dc[0..4]
    }

    pub fn delta_xi(&self) -> f64 {
        if self.flavor.is_hat() {
            self.dc[4]
        } else {
            0.0
        }
    }

    /// Upper-left 4x4 block of `dP`.
    pub fn delta_p4(&self) -> Matrix {
        self.dp.block(0, 0, 4, 4)
    }

    /// The `db` parameter recovered from the bottom-left row `db* = db^T G`.
    pub fn delta_b(&self) -> Vec<f64> {
        assert!(self.flavor.is_hat());
        let row: Vec<f64> = (0..4).map(|j| self.dp[(4, j)]).collect();
        minkowski().raise(&row)
    }

    /// Largest violation of the algebra's structural invariants.
    pub fn invariant_violation(&self) -> f64 {
        let g = minkowski();
        match self.flavor {
            GroupFlavor::Poincare => {
                // dP* = -dP  <=>  G dP + dP^T G = 0
                let gm = g.gram().mul(&self.dp);
                gm.add(&gm.transpose()).max_abs()
            }
            GroupFlavor::G1 | GroupFlavor::GOmega(_) => {
                let ghat = self.flavor.metric().expect("invertible metric");
                let gm = ghat.gram().mul(&self.dp);
                gm.add(&gm.transpose()).max_abs()
            }
            GroupFlavor::G0 => {
                let dp4 = self.delta_p4();
                let gm = g.gram().mul(&dp4);
                let mut worst = gm.add(&gm.transpose()).max_abs();
                for i in 0..5 {
                    worst = linalg::fmax(worst, libm::fabs(self.dp[(i, 4)]));
                }
                worst
            }
        }
    }
}

/// Basis of the flavor's Lie algebra: 10 generators for Poincare
/// (4 translations, 3 boosts, 3 rotations), 15 for the 5D flavors
/// (5 translations, 3 boosts, 3 rotations, 4 `db` directions).
pub fn algebra_basis(flavor: GroupFlavor) -> Vec<AlgebraElement> {
    let n = flavor.space_dim();
    let mut basis = Vec::with_capacity(flavor.algebra_dim());
    // translations
    for k in 0..n {
        let mut dc = vec![0.0; n];
        dc[k] = 1.0;
        basis.push(AlgebraElement { flavor, dc, dp: Matrix::zeros(n, n) });
    }
    // boosts: dP = [[0, e_k^T], [e_k, 0]] in the 4x4 block
    for k in 0..3 {
        let mut dp = Matrix::zeros(n, n);
        dp[(0, 1 + k)] = 1.0;
        dp[(1 + k, 0)] = 1.0;
        basis.push(AlgebraElement { flavor, dc: vec![0.0; n], dp });
    }
    // rotations: dP spatial block = j(e_k)
    for k in 0..3 {
        let mut axis = [0.0; 3];
        axis[k] = 1.0;
        let mut dp = Matrix::zeros(n, n);
        dp.set_block(1, 1, &linalg::skew3(&axis));
        basis.push(AlgebraElement { flavor, dc: vec![0.0; n], dp });
    }
    // db directions for the 5D flavors
    if flavor.is_hat() {
        let w2 = {
            let w = flavor.omega_or_zero();
            w * w
        };
        let g = minkowski();
        for k in 0..4 {
            let mut db = vec![0.0; 4];
            db[k] = 1.0;
            let db_star = g.lower(&db);
            let mut dp = Matrix::zeros(5, 5);
            for j in 0..4 {
                dp[(4, j)] = db_star[j];
                dp[(j, 4)] = w2 * db[j];
            }
            basis.push(AlgebraElement { flavor, dc: vec![0.0; 5], dp });
        }
    }
    basis
}

/// Adjoint action `Ad(a) Z = (P dC - P dP P^-1 C, P dP P^-1)`.
pub fn adjoint(a: &GroupElement, z: &AlgebraElement) -> Result<AlgebraElement> {
    if a.flavor != z.flavor {
        return Err(Error::FlavorMismatch);
    }
    let pinv = a.p.inverse().expect("group elements are invertible");
    let dp = a.p.mul(&z.dp).mul(&pinv);
    let dc = linalg::sub(&a.p.apply(&z.dc), &dp.apply(&a.c));
    Ok(AlgebraElement { flavor: a.flavor, dc, dp })
}

/// Second-order approximation of `exp(t Z)` as a group element:
/// linear part `1 + t dP + t^2 dP^2 / 2`, translation
/// `t dC + t^2 dP dC / 2`. Membership holds to O(t^3); used for the
/// finite-difference isotropy differential, not validated.
pub fn exp_approx(z: &AlgebraElement, t: f64) -> GroupElement {
    let n = z.flavor.space_dim();
    let dp2 = z.dp.mul(&z.dp);
    let p = Matrix::identity(n)
        .add(&z.dp.scale(t))
        .add(&dp2.scale(0.5 * t * t));
    let c = linalg::add(
        &linalg::scale(&z.dc, t),
        &linalg::scale(&z.dp.apply(&z.dc), 0.5 * t * t),
    );
    GroupElement { flavor: z.flavor, c, p }
}
