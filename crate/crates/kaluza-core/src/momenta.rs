//! Momenta of the four symmetry groups: pairing with the Lie algebra,
//! coadjoint actions (closed form and pairing-based oracle), spin momentum,
//! polarization, orbit invariants, isotropy dimensions and particle
//! classification.
//!
//! # Component conventions
//!
//! A momentum is stored as the tuple `(Pi, M, q, Q)` of the itemized pairing
//!
//! ```text
//! mu(Z) = -Pi* dC - 1/2 Tr(M dP) - q dxi - Q* db
//! ```
//!
//! which is the ground truth for everything here: the coadjoint oracle
//! evaluates `mu(Ad(a^-1) Z)` on a full algebra basis and solves for the
//! components. In these coordinates the charge coordinate is the *pairing*
//! charge; it relates to the raw fifth component of the column 5-momentum by
//! `q = -omega^2 Pi_hat^5`. The closed-form action of the metric flavors is
//! implemented on the assembled 5x5 blocks (where it is plain conjugation)
//! and converted back, so the two routes stay genuinely independent.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::groups::{adjoint, algebra_basis, exp_approx, AlgebraElement, GroupElement, GroupFlavor};
use crate::hyperlin::{form_of_map, hodge, hodge_map, Metric};
use crate::linalg::{self, Matrix};

/// Relative singular-value tolerance of the isotropy rank test.
pub const ISOTROPY_RANK_TOL: f64 = 1e-8;
/// Central-difference step of the isotropy differential.
pub const ISOTROPY_FD_STEP: f64 = 1e-5;
/// Spin below this value classifies as spinless.
pub const SPIN_TOL: f64 = 1e-9;
/// Tolerance of the Q = qX consistency check.
pub const Q_POSITION_TOL: f64 = 1e-9;

fn mink() -> Metric {
    Metric::minkowski()
}

/// Momentum `(Pi, M, q, Q)` of a group flavor; `M` is 4x4 skew-adjoint with
/// respect to the Minkowski metric, Poincare momenta carry `q = 0, Q = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Momentum {
    flavor: GroupFlavor,
    pi: Vec<f64>,
    m: Matrix,
    q: f64,
    big_q: Vec<f64>,
}

impl Momentum {
    pub fn new(flavor: GroupFlavor, pi: &[f64], m: &Matrix, q: f64, big_q: &[f64]) -> Result<Self> {
        if pi.len() != 4 || big_q.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: pi.len().max(big_q.len()) });
        }
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: m.rows() });
        }
        let g = mink();
        let gm = g.gram().mul(m);
        let scale = linalg::fmax(1.0, m.max_abs());
        if gm.add(&gm.transpose()).max_abs() > 1e-12 * scale {
            return Err(Error::InvalidMomentum("M must be skew-adjoint"));
        }
        if flavor == GroupFlavor::Poincare && (q != 0.0 || linalg::max_abs(big_q) != 0.0) {
            return Err(Error::InvalidMomentum("Poincare momenta carry q = 0, Q = 0"));
        }
        Ok(Momentum { flavor, pi: pi.to_vec(), m: m.clone(), q, big_q: big_q.to_vec() })
    }

    pub fn poincare(pi: &[f64], m: &Matrix) -> Result<Self> {
        Momentum::new(GroupFlavor::Poincare, pi, m, 0.0, &[0.0; 4])
    }

    pub fn zero(flavor: GroupFlavor) -> Self {
        Momentum {
            flavor,
            pi: vec![0.0; 4],
            m: Matrix::zeros(4, 4),
            q: 0.0,
            big_q: vec![0.0; 4],
        }
    }

    /// Forward construction of a 4D momentum with known invariants from the
    /// spin parameterization: `Pi = m0 I`, `M0 = s J(I, J)`,
    /// `M = M0 - Pi X* + X Pi*`, and `Q = q X` for the contracted flavor.
    /// Requires `I* I = 1`, `J* J = -1`, `J* I = 0`.
    pub fn with_spin_4d(
        flavor: GroupFlavor,
        q: f64,
        m0: f64,
        s: f64,
        x: &[f64],
        i_dir: &[f64],
        j_dir: &[f64],
    ) -> Result<Self> {
        if !matches!(flavor, GroupFlavor::Poincare | GroupFlavor::G0) {
            return Err(Error::FlavorMismatch);
        }
        let g = mink();
        if libm::fabs(g.norm2(i_dir) - 1.0) > 1e-10
            || libm::fabs(g.norm2(j_dir) + 1.0) > 1e-10
            || libm::fabs(g.inner(i_dir, j_dir)) > 1e-10
        {
            return Err(Error::InvalidMomentum("(I, J) must be a unit timelike/spacelike pair"));
        }
        let pi = linalg::scale(i_dir, m0);
        let m0_mat = crate::hyperlin::vector_product_map(&[i_dir, j_dir], &g).scale(s);
        let m = m0_mat
            .sub(&Matrix::outer(&pi, &g.lower(x)))
            .add(&Matrix::outer(x, &g.lower(&pi)));
        let big_q = if flavor == GroupFlavor::G0 {
            linalg::scale(x, q)
        } else {
            vec![0.0; 4]
        };
        let qq = if flavor == GroupFlavor::Poincare { 0.0 } else { q };
        Momentum::new(flavor, &pi, &m, qq, &big_q)
    }

    /// Forward construction of a 5D momentum from the spin parameterization
    /// adapted to the scaled metric: `Pi_hat = m0 I_hat`,
    /// `M_hat_0 = s J(I_hat, J1, J2)`, `M_hat = M_hat_0 - Pi_hat X_hat* +
    /// X_hat Pi_hat*`. Requires an orthonormal triple (`I*I = 1`,
    /// `Jk*Jk = -1`, mutually orthogonal) with respect to that metric.
    pub fn with_spin_5d(
        flavor: GroupFlavor,
        m0: f64,
        s: f64,
        x_hat: &[f64],
        i_hat: &[f64],
        j1_hat: &[f64],
        j2_hat: &[f64],
    ) -> Result<Self> {
        let omega = match flavor {
            GroupFlavor::G1 => 1.0,
            GroupFlavor::GOmega(w) => w,
            _ => return Err(Error::FlavorMismatch),
        };
        let ghat = Metric::hat_omega(omega)?;
        let ok = libm::fabs(ghat.norm2(i_hat) - 1.0) < 1e-10
            && libm::fabs(ghat.norm2(j1_hat) + 1.0) < 1e-10
            && libm::fabs(ghat.norm2(j2_hat) + 1.0) < 1e-10
            && libm::fabs(ghat.inner(i_hat, j1_hat)) < 1e-10
            && libm::fabs(ghat.inner(i_hat, j2_hat)) < 1e-10
            && libm::fabs(ghat.inner(j1_hat, j2_hat)) < 1e-10;
        if !ok {
            return Err(Error::InvalidMomentum("(I, J1, J2) must be orthonormal"));
        }
        let pi_hat = linalg::scale(i_hat, m0);
        let m0_hat = crate::hyperlin::vector_product_map(&[i_hat, j1_hat, j2_hat], &ghat).scale(s);
        let m_hat = m0_hat
            .sub(&Matrix::outer(&pi_hat, &ghat.lower(x_hat)))
            .add(&Matrix::outer(x_hat, &ghat.lower(&pi_hat)));
        Ok(Momentum::from_hat_blocks(flavor, &pi_hat, &m_hat))
    }

    /// Extracts `(Pi, M, q, Q)` from an assembled column 5-momentum and 5x5
    /// angular momentum (raw fifth-component coordinates).
    fn from_hat_blocks(flavor: GroupFlavor, pi_hat: &[f64], m_hat: &Matrix) -> Self {
        let w = flavor.omega().expect("metric flavor");
        let q = -w * w * pi_hat[4];
        let big_q: Vec<f64> = (0..4).map(|i| m_hat[(i, 4)]).collect();
        Momentum {
            flavor,
            pi: pi_hat[0..4].to_vec(),
            m: m_hat.block(0, 0, 4, 4),
            q,
            big_q,
        }
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.flavor
    }

    /// Energy-momentum 4-vector.
    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    /// Angular/passage momentum, 4x4 skew-adjoint.
    pub fn m(&self) -> &Matrix {
        &self.m
    }

    /// Electric charge (pairing coordinate; exactly invariant under the
    /// contracted flavor, frame-dependent under the metric flavors).
    pub fn q(&self) -> f64 {
        self.q
    }

    /// 4-position-charge momentum.
    pub fn big_q(&self) -> &[f64] {
        &self.big_q
    }

    /// Column 5-momentum `(Pi, -q/omega^2)` of the metric flavors.
    pub fn pi_hat(&self) -> Result<Vec<f64>> {
        let w = self.flavor.omega().ok_or(Error::FlavorMismatch)?;
        let mut v = self.pi.clone();
        v.push(-self.q / (w * w));
        Ok(v)
    }

    /// Assembled 5x5 angular momentum `[[M, Q], [Q*/omega^2, 0]]` of the
    /// metric flavors; skew-adjoint with respect to the scaled metric.
    pub fn m_hat(&self) -> Result<Matrix> {
        let w = self.flavor.omega().ok_or(Error::FlavorMismatch)?;
        let mut m = Matrix::zeros(5, 5);
        m.set_block(0, 0, &self.m);
        let qstar = mink().lower(&self.big_q);
        for i in 0..4 {
            m[(i, 4)] = self.big_q[i];
            m[(4, i)] = qstar[i] / (w * w);
        }
        Ok(m)
    }

    /// Number of independent component coordinates of the flavor
    /// (10 for Poincare, 15 for the 5D flavors).
    pub fn component_dim(flavor: GroupFlavor) -> usize {
        flavor.algebra_dim()
    }

    /// Component vector `[Pi, r, l, (q, Q)]` where `M = [[0, r^T], [r, j(l)]]`.
    pub fn components(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(Momentum::component_dim(self.flavor));
        v.extend_from_slice(&self.pi);
        for k in 0..3 {
            v.push(self.m[(1 + k, 0)]);
        }
        v.push(self.m[(3, 2)]);
        v.push(self.m[(1, 3)]);
        v.push(self.m[(2, 1)]);
        if self.flavor.is_hat() {
            v.push(self.q);
            v.extend_from_slice(&self.big_q);
        }
        v
    }

    /// Inverse of [`Momentum::components`].
    pub fn from_components(flavor: GroupFlavor, comps: &[f64]) -> Result<Self> {
        let want = Momentum::component_dim(flavor);
        if comps.len() != want {
            return Err(Error::DimensionMismatch { expected: want, got: comps.len() });
        }
        let pi = &comps[0..4];
        let r = &comps[4..7];
        let l = &comps[7..10];
        let mut m = Matrix::zeros(4, 4);
        for k in 0..3 {
            m[(0, 1 + k)] = r[k];
            m[(1 + k, 0)] = r[k];
        }
        m.set_block(1, 1, &linalg::skew3(l));
        let (q, big_q) = if flavor.is_hat() {
            (comps[10], comps[11..15].to_vec())
        } else {
            (0.0, vec![0.0; 4])
        };
        Momentum::new(flavor, pi, &m, q, &big_q)
    }
}

/// Pairing of a momentum with an algebra element:
/// `-Pi* dC - 1/2 Tr(M dP) - q dxi - Q* db` (the last two terms only for the
/// 5D flavors).
pub fn pair(mu: &Momentum, z: &AlgebraElement) -> Result<f64> {
    if mu.flavor != z.flavor() {
        return Err(Error::FlavorMismatch);
    }
    let g = mink();
    let mut value = -g.inner(&mu.pi, z.delta_c4()) - 0.5 * mu.m.mul(&z.delta_p4()).trace();
    if mu.flavor.is_hat() {
        value -= mu.q * z.delta_xi();
        value -= g.inner(&mu.big_q, &z.delta_b());
    }
    Ok(value)
}

/// Ground-truth coadjoint action `(Ad*(a) mu)(Z) = mu(Ad(a^-1) Z)`:
/// evaluates the right side on the full algebra basis and solves the linear
/// reconstruction system for the component tuple.
pub fn coadjoint_oracle(a: &GroupElement, mu: &Momentum) -> Result<Momentum> {
    if a.flavor() != mu.flavor {
        return Err(Error::FlavorMismatch);
    }
    let flavor = mu.flavor;
    let basis = algebra_basis(flavor);
    let a_inv = a.inverse();
    let mut values = Vec::with_capacity(basis.len());
    for z in &basis {
        values.push(pair(mu, &adjoint(&a_inv, z)?)?);
    }
    let dim = Momentum::component_dim(flavor);
    let mut unit_rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut c = vec![0.0; dim];
        c[j] = 1.0;
        let unit = Momentum::from_components(flavor, &c)?;
        unit_rows.push(
            basis
                .iter()
                .map(|z| pair(&unit, z).expect("same flavor"))
                .collect(),
        );
    }
    // A[i][j] = pairing of unit component j against basis element i
    let amat = Matrix::from_fn(dim, dim, |i, j| unit_rows[j][i]);
    let comps = amat
        .solve(&values)
        .ok_or(Error::InvalidMomentum("singular reconstruction system"))?;
    Momentum::from_components(flavor, &comps)
}

/// Closed-form coadjoint action.
///
/// Poincare: `Pi = P Pi'`, `M = P M' P* + C Pi* - Pi C*`.
///
/// Metric 5D flavors: conjugation of the assembled blocks,
/// `Pi_hat = P_hat Pi_hat'`,
/// `M_hat = P_hat M_hat' P_hat* + C_hat Pi_hat* - Pi_hat C_hat*`.
///
/// Contracted flavor: `Pi = P(Pi' - q' b)`, `q = q'`, `Q = P Q' + q' C`,
/// `M = P M' P* + C Pi* - Pi C* + (P b)(P Q')* - (P Q')(P b)*`.
pub fn coadjoint_closed(a: &GroupElement, mu: &Momentum) -> Result<Momentum> {
    if a.flavor() != mu.flavor {
        return Err(Error::FlavorMismatch);
    }
    let g = mink();
    match mu.flavor {
        GroupFlavor::Poincare => {
            let p = a.linear();
            let pi = p.apply(&mu.pi);
            let m = p
                .mul(&mu.m)
                .mul(&g.adjoint(p))
                .add(&Matrix::outer(a.c4(), &g.lower(&pi)))
                .sub(&Matrix::outer(&pi, &g.lower(a.c4())));
            Momentum::poincare(&pi, &m)
        }
        GroupFlavor::G1 | GroupFlavor::GOmega(_) => {
            let ghat = mu.flavor.metric().ok_or(Error::DegenerateMetric("coadjoint"))?;
            let phat = a.linear();
            let chat = a.translation();
            let pi_hat = phat.apply(&mu.pi_hat()?);
            let m_hat = phat
                .mul(&mu.m_hat()?)
                .mul(&ghat.adjoint(phat))
                .add(&Matrix::outer(chat, &ghat.lower(&pi_hat)))
                .sub(&Matrix::outer(&pi_hat, &ghat.lower(chat)));
            Ok(Momentum::from_hat_blocks(mu.flavor, &pi_hat, &m_hat))
        }
        GroupFlavor::G0 => {
            let p = a.p4();
            let b = a.b_param();
            let c = a.c4();
            let pstar = g.adjoint(&p);
            let pi = p.apply(&linalg::sub(&mu.pi, &linalg::scale(&b, mu.q)));
            let pb = p.apply(&b);
            let pq = p.apply(&mu.big_q);
            let m = p
                .mul(&mu.m)
                .mul(&pstar)
                .add(&Matrix::outer(c, &g.lower(&pi)))
                .sub(&Matrix::outer(&pi, &g.lower(c)))
                .add(&Matrix::outer(&pb, &g.lower(&pq)))
                .sub(&Matrix::outer(&pq, &g.lower(&pb)));
            let big_q = linalg::add(&pq, &linalg::scale(c, mu.q));
            Momentum::new(GroupFlavor::G0, &pi, &m, mu.q, &big_q)
        }
    }
}

/// Spin momentum `M0 = M + Pi X* - X Pi*` of the 4D flavors.
pub fn spin_momentum(mu: &Momentum, x: &[f64]) -> Result<Matrix> {
    if !matches!(mu.flavor, GroupFlavor::Poincare | GroupFlavor::G0) {
        return Err(Error::FlavorMismatch);
    }
    let g = mink();
    Ok(mu
        .m
        .add(&Matrix::outer(&mu.pi, &g.lower(x)))
        .sub(&Matrix::outer(x, &g.lower(&mu.pi))))
}

/// Charge form of the spin momentum for the contracted flavor:
/// `M0 = M + (Pi Q* - Q Pi*) / q`; equals the X-form at `X = Q/q`.
pub fn spin_momentum_charge(mu: &Momentum) -> Result<Matrix> {
    if mu.flavor != GroupFlavor::G0 {
        return Err(Error::FlavorMismatch);
    }
    if mu.q == 0.0 {
        return Err(Error::SpinFormUndefined);
    }
    let g = mink();
    Ok(mu
        .m
        .add(&Matrix::outer(&mu.pi, &g.lower(&mu.big_q)).scale(1.0 / mu.q))
        .sub(&Matrix::outer(&mu.big_q, &g.lower(&mu.pi)).scale(1.0 / mu.q)))
}

/// 5D spin momentum `M_hat_0 = M_hat + Pi_hat X_hat* - X_hat Pi_hat*` of the
/// metric flavors.
pub fn spin_momentum_5d(mu: &Momentum, x_hat: &[f64]) -> Result<Matrix> {
    let ghat = mu.flavor.metric().ok_or(Error::FlavorMismatch)?;
    if ghat.dim() != 5 {
        return Err(Error::FlavorMismatch);
    }
    let pi_hat = mu.pi_hat()?;
    Ok(mu
        .m_hat()?
        .add(&Matrix::outer(&pi_hat, &ghat.lower(x_hat)))
        .sub(&Matrix::outer(x_hat, &ghat.lower(&pi_hat))))
}

/// The straight line `{X : M0(X) Pi = 0}`: returns `(point, direction)` with
/// the point in the `X* Pi = 0` gauge and direction `Pi / m0`.
pub fn trajectory_line(mu: &Momentum) -> Result<(Vec<f64>, Vec<f64>)> {
    match mu.flavor {
        GroupFlavor::Poincare | GroupFlavor::G0 => {
            let g = mink();
            let m0sq = g.norm2(&mu.pi);
            if m0sq <= 0.0 {
                return Err(Error::NonTimelike);
            }
            let point = linalg::scale(&mu.m.apply(&mu.pi), 1.0 / m0sq);
            let dir = linalg::scale(&mu.pi, 1.0 / libm::sqrt(m0sq));
            Ok((point, dir))
        }
        GroupFlavor::G1 | GroupFlavor::GOmega(_) => {
            let ghat = mu.flavor.metric().ok_or(Error::DegenerateMetric("trajectory"))?;
            let pi_hat = mu.pi_hat()?;
            let m0sq = ghat.norm2(&pi_hat);
            if m0sq <= 0.0 {
                return Err(Error::NonTimelike);
            }
            let point = linalg::scale(&mu.m_hat()?.apply(&pi_hat), 1.0 / m0sq);
            let dir = linalg::scale(&pi_hat, 1.0 / libm::sqrt(m0sq));
            Ok((point, dir))
        }
    }
}

/// Polarization 4-vector `W = (*M) Pi` of the 4D flavors. Orthogonal to `Pi`
/// and spacelike for spinning momenta.
pub fn polarization(mu: &Momentum) -> Result<Vec<f64>> {
    if !matches!(mu.flavor, GroupFlavor::Poincare | GroupFlavor::G0) {
        return Err(Error::FlavorMismatch);
    }
    let g = mink();
    if g.norm2(&mu.pi) <= 0.0 {
        return Err(Error::NonTimelike);
    }
    Ok(hodge_map(&mu.m, &g)?.apply(&mu.pi))
}

/// Polarization map of the metric 5D flavors: the 5x5 matrix of
/// `V -> ((*A_M_hat)(Pi_hat, V, .))^raised`. Its image is the polarization
/// plane; the energy-momentum direction is in its kernel.
pub fn polarization_map(mu: &Momentum) -> Result<Matrix> {
    if !mu.flavor.is_hat() || mu.flavor == GroupFlavor::G0 {
        return Err(Error::FlavorMismatch);
    }
    let ghat = mu.flavor.metric().ok_or(Error::DegenerateMetric("hodge"))?;
    let pi_hat = mu.pi_hat()?;
    if ghat.norm2(&pi_hat) <= 0.0 {
        return Err(Error::NonTimelike);
    }
    let three_form = hodge(&form_of_map(&mu.m_hat()?, &ghat), &ghat)?;
    let s = three_form.contract_front(&[&pi_hat[..]]);
    let n = 5;
    let mut map = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += ghat.inverse()[(i, k)] * s.get(&[j, k]);
            }
            map[(i, j)] = acc;
        }
    }
    Ok(map)
}

/// Orthonormal basis `(J1, J2)` of the polarization plane (each of norm -1,
/// orthogonal to the energy-momentum direction). The span is unique; the
/// basis only modulo an orthogonal transformation of the plane.
pub fn polarization_plane(mu: &Momentum) -> Result<(Vec<f64>, Vec<f64>)> {
    let map = polarization_map(mu)?;
    let ghat = mu.flavor.metric().expect("checked by polarization_map");
    let scale = linalg::fmax(1.0, mu.m_hat()?.max_abs() + linalg::max_abs(&mu.pi_hat()?));
    let images: Vec<Vec<f64>> = (0..5).map(|k| map.col(k)).collect();
    let strongest = |candidates: &[Vec<f64>]| -> Option<Vec<f64>> {
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = 1e-10 * scale;
        for v in candidates {
            let n = linalg::norm2(v);
            if n > best_norm {
                best_norm = n;
                best = Some(v.clone());
            }
        }
        best
    };
    let u1 = strongest(&images).ok_or(Error::NoPolarizationPlane)?;
    let n1 = ghat.norm2(&u1);
    if n1 >= -1e-12 * scale * scale {
        return Err(Error::NoPolarizationPlane);
    }
    let j1 = linalg::scale(&u1, 1.0 / libm::sqrt(-n1));
    // Gram-Schmidt against j1 (j1* j1 = -1, so the projection adds)
    let residuals: Vec<Vec<f64>> = images
        .iter()
        .map(|v| linalg::add(v, &linalg::scale(&j1, ghat.inner(v, &j1))))
        .collect();
    let u2 = strongest(&residuals).ok_or(Error::NoPolarizationPlane)?;
    let n2 = ghat.norm2(&u2);
    if n2 >= -1e-12 * scale * scale {
        return Err(Error::NoPolarizationPlane);
    }
    let j2 = linalg::scale(&u2, 1.0 / libm::sqrt(-n2));
    Ok((j1, j2))
}

/// Orbit invariants: rest mass and spin, plus the charge where it is an
/// invariant (the contracted flavor).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Invariants {
    pub q: Option<f64>,
    pub m0: f64,
    pub s: f64,
}

/// Computes the flavor's orbit invariants; errors on non-timelike momenta.
pub fn invariants(mu: &Momentum) -> Result<Invariants> {
    let g = mink();
    match mu.flavor {
        GroupFlavor::Poincare | GroupFlavor::G0 => {
            let c2 = g.norm2(&mu.pi);
            if c2 <= 0.0 {
                return Err(Error::NonTimelike);
            }
            let m0 = libm::sqrt(c2);
            let w = polarization(mu)?;
            let ww = g.norm2(&w);
            let s = libm::sqrt(linalg::fmax(0.0, -ww)) / m0;
            let q = if mu.flavor == GroupFlavor::G0 { Some(mu.q) } else { None };
            Ok(Invariants { q, m0, s })
        }
        GroupFlavor::G1 | GroupFlavor::GOmega(_) => {
            let ghat = mu.flavor.metric().ok_or(Error::DegenerateMetric("invariants"))?;
            let pi_hat = mu.pi_hat()?;
            let c2 = ghat.norm2(&pi_hat);
            if c2 <= 0.0 {
                return Err(Error::NonTimelike);
            }
            let m0 = libm::sqrt(c2);
            let s = match polarization_plane(mu) {
                Ok((j1, _)) => {
                    let pol_j1 = polarization_map(mu)?.apply(&j1);
                    libm::sqrt(linalg::fmax(0.0, -ghat.norm2(&pol_j1))) / m0
                }
                Err(Error::NoPolarizationPlane) => 0.0,
                Err(e) => return Err(e),
            };
            Ok(Invariants { q: None, m0, s })
        }
    }
}

/// Dimension of the isotropy group of `mu` under the coadjoint action, i.e.
/// the number of independent orbit invariants.
///
/// Builds the differential `Z -> d/dt|0 Ad*(exp(tZ)) mu` by central finite
/// differences of the pairing oracle over the algebra basis and subtracts
/// its SVD rank from `dim g`. Errors when a singular value sits too close to
/// the rank threshold to decide.
pub fn isotropy_dimension(mu: &Momentum) -> Result<usize> {
    let basis = algebra_basis(mu.flavor);
    let dim_g = basis.len();
    let nc = Momentum::component_dim(mu.flavor);
    let t = ISOTROPY_FD_STEP;
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim_g);
    for z in &basis {
        let plus = coadjoint_oracle(&exp_approx(z, t), mu)?.components();
        let minus = coadjoint_oracle(&exp_approx(z, -t), mu)?.components();
        cols.push(
            plus.iter()
                .zip(&minus)
                .map(|(p, m)| (p - m) / (2.0 * t))
                .collect(),
        );
    }
    let d = Matrix::from_fn(nc, dim_g, |i, j| cols[j][i]);
    let sigmas = d.singular_values();
    let smax = sigmas.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(dim_g);
    }
    let mut rank = 0;
    for s in &sigmas {
        let rel = s / smax;
        if rel > ISOTROPY_RANK_TOL * 10.0 {
            rank += 1;
        } else if rel > ISOTROPY_RANK_TOL / 10.0 {
            return Err(Error::InconclusiveRank);
        }
    }
    Ok(dim_g - rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassTag {
    ChargedWithSpin,
    ChargedSpinless,
    UnchargedWithSpin,
    UnchargedSpinless,
    NonTimelike,
}

impl ClassTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassTag::ChargedWithSpin => "charged-with-spin",
            ClassTag::ChargedSpinless => "charged-spinless",
            ClassTag::UnchargedWithSpin => "uncharged-with-spin",
            ClassTag::UnchargedSpinless => "uncharged-spinless",
            ClassTag::NonTimelike => "non-timelike",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParticleClass {
    pub tag: ClassTag,
    pub invariants: Option<Invariants>,
}

/// Classification by (timelike?, q, s). Non-timelike momenta are tagged and
/// carry no invariants.
pub fn classify(mu: &Momentum) -> ParticleClass {
    match invariants(mu) {
        Err(_) => ParticleClass { tag: ClassTag::NonTimelike, invariants: None },
        Ok(inv) => {
            let charged = mu.q != 0.0;
            let spinning = inv.s > SPIN_TOL;
            let tag = match (charged, spinning) {
                (true, true) => ClassTag::ChargedWithSpin,
                (true, false) => ClassTag::ChargedSpinless,
                (false, true) => ClassTag::UnchargedWithSpin,
                (false, false) => ClassTag::UnchargedSpinless,
            };
            ParticleClass { tag, invariants: Some(inv) }
        }
    }
}

/// Checks the position interpretation `Q = q X` of the contracted flavor's
/// 4-position-charge momentum.
pub fn q_position_consistency(mu: &Momentum, x: &[f64]) -> bool {
    let diff = linalg::sub(&mu.big_q, &linalg::scale(x, mu.q));
    linalg::norm2(&diff) < Q_POSITION_TOL
}

/// One row of the omega sweep: the same group parameters and momentum
/// template evaluated at scale `omega`.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub omega: f64,
    pub q_in: f64,
    pub q_out: f64,
    pub delta_q: f64,
    /// `|m0(after) - m0(before)|`, `None` when the template is not timelike
    /// at this scale.
    pub m0_drift: Option<f64>,
    pub m0: Option<f64>,
    /// `None` when the rank test is inconclusive.
    pub isotropy: Option<usize>,
}

/// Applies the group element `(0, 0, P_L, b)` of each scaled flavor to the
/// momentum template and reports how the charge and invariants respond. A
/// final row evaluates the contracted flavor (`omega = 0`), where the charge
/// is exactly invariant.
pub fn omega_sweep(
    b: &[f64],
    p_l: &Matrix,
    template: &Momentum,
    omegas: &[f64],
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(omegas.len() + 1);
    for &w in omegas {
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::InvalidBoostParameter);
        }
        let flavor = GroupFlavor::GOmega(w);
        let a = GroupElement::hat(flavor, &[0.0; 4], 0.0, p_l, b)?;
        let mu = Momentum::new(flavor, &template.pi, &template.m, template.q, &template.big_q)?;
        rows.push(sweep_row(w, &a, &mu)?);
    }
    let a0 = GroupElement::hat(GroupFlavor::G0, &[0.0; 4], 0.0, p_l, b)?;
    let mu0 = Momentum::new(
        GroupFlavor::G0,
        &template.pi,
        &template.m,
        template.q,
        &template.big_q,
    )?;
    rows.push(sweep_row(0.0, &a0, &mu0)?);
    Ok(rows)
}

fn sweep_row(omega: f64, a: &GroupElement, mu: &Momentum) -> Result<SweepRow> {
    let out = coadjoint_closed(a, mu)?;
    let inv_in = invariants(mu).ok();
    let inv_out = invariants(&out).ok();
    let m0_drift = match (&inv_in, &inv_out) {
        (Some(i), Some(o)) => Some(libm::fabs(o.m0 - i.m0)),
        _ => None,
    };
    let isotropy = isotropy_dimension(mu).ok();
    Ok(SweepRow {
        omega,
        q_in: mu.q(),
        q_out: out.q(),
        delta_q: out.q() - mu.q(),
        m0_drift,
        m0: inv_in.map(|i| i.m0),
        isotropy,
    })
}
