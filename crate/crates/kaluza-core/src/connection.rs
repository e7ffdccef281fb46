//! The spacetime connection induced by the contracted 5D symmetry: Levi-
//! Civita symbols from the metric, the fifth-row components built from the
//! electromagnetic potential, and charged-particle motion by parallel
//! transport of the linear 5-momentum.
//!
//! # Conventions
//!
//! `c = 1` throughout. The potential callback returns covariant components
//! `A_i`; for a scalar potential `phi` and vector potential `Av` these are
//! `A = (-phi, Av)`, the identification under which the equation of motion
//! `m0 nabla_U U = -q Fbar U` gives the standard Lorentz force (a positive
//! charge accelerates along `E` and, in a magnetic field `B = B0 e_z`,
//! turns clockwise in the xy-plane seen from `+z`). The field tensor is
//! `F_ij = d_i A_j - d_j A_i`, so `E_a = F_a0` and `B_c = eps_abc F_ab / 2`.
//! Only `F` enters the equation of motion; the `-2 A` block of the adapted
//! 5D frame affects the fifth connection row alone.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Christoffel symbols, indexed `[k][i][j]` for `Gamma^k_ij`.
pub type Christoffel = [[[f64; 4]; 4]; 4];

/// Determinant floor below which the metric counts as singular.
pub const METRIC_DET_TOL: f64 = 1e-10;
/// Default relative finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

type MetricFn = Arc<dyn Fn(&[f64; 4]) -> Matrix + Send + Sync>;
type PotentialFn = Arc<dyn Fn(&[f64; 4]) -> [f64; 4] + Send + Sync>;
type DMetricFn = Arc<dyn Fn(&[f64; 4]) -> [Matrix; 4] + Send + Sync>;
type D2MetricFn = Arc<dyn Fn(&[f64; 4]) -> [[Matrix; 4]; 4] + Send + Sync>;
type DPotentialFn = Arc<dyn Fn(&[f64; 4]) -> Matrix + Send + Sync>;
type D2PotentialFn = Arc<dyn Fn(&[f64; 4]) -> [Matrix; 4] + Send + Sync>;

/// Spacetime metric and electromagnetic 4-potential as callables, with
/// optional analytic first/second derivatives. Missing derivatives fall back
/// to central finite differences with a step scaled to the local coordinate
/// size.
#[derive(Clone)]
pub struct SpacetimeFields {
    metric: MetricFn,
    potential: PotentialFn,
    dmetric: Option<DMetricFn>,
    d2metric: Option<D2MetricFn>,
    dpotential: Option<DPotentialFn>,
    d2potential: Option<D2PotentialFn>,
    fd_step: f64,
}

fn fd_h(step: f64, coord: f64) -> f64 {
    step * linalg::fmax(1.0, libm::fabs(coord))
}

impl SpacetimeFields {
    pub fn new(
        metric: impl Fn(&[f64; 4]) -> Matrix + Send + Sync + 'static,
        potential: impl Fn(&[f64; 4]) -> [f64; 4] + Send + Sync + 'static,
    ) -> Self {
        SpacetimeFields {
            metric: Arc::new(metric),
            potential: Arc::new(potential),
            dmetric: None,
            d2metric: None,
            dpotential: None,
            d2potential: None,
            fd_step: DEFAULT_FD_STEP,
        }
    }

    pub fn with_metric_derivatives(
        mut self,
        d: impl Fn(&[f64; 4]) -> [Matrix; 4] + Send + Sync + 'static,
        d2: impl Fn(&[f64; 4]) -> [[Matrix; 4]; 4] + Send + Sync + 'static,
    ) -> Self {
        self.dmetric = Some(Arc::new(d));
        self.d2metric = Some(Arc::new(d2));
        self
    }

    pub fn with_potential_derivatives(
        mut self,
        d: impl Fn(&[f64; 4]) -> Matrix + Send + Sync + 'static,
        d2: impl Fn(&[f64; 4]) -> [Matrix; 4] + Send + Sync + 'static,
    ) -> Self {
        self.dpotential = Some(Arc::new(d));
        self.d2potential = Some(Arc::new(d2));
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    /// Drops all analytic derivative callbacks (everything falls back to
    /// finite differences); used by convergence studies.
    pub fn values_only(mut self) -> Self {
        self.dmetric = None;
        self.d2metric = None;
        self.dpotential = None;
        self.d2potential = None;
        self
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.dmetric.is_some() && self.dpotential.is_some()
    }

    /// True when both metric derivative callbacks are analytic.
    pub fn has_metric_hessian(&self) -> bool {
        self.dmetric.is_some() && self.d2metric.is_some()
    }

    pub fn metric(&self, x: &[f64; 4]) -> Matrix {
        (self.metric)(x)
    }

    pub fn metric_inverse(&self, x: &[f64; 4]) -> Result<Matrix> {
        let g = self.metric(x);
        if libm::fabs(g.det()) <= METRIC_DET_TOL {
            return Err(Error::SingularMetric);
        }
        g.inverse().ok_or(Error::SingularMetric)
    }

    pub fn potential(&self, x: &[f64; 4]) -> [f64; 4] {
        (self.potential)(x)
    }

    /// `d_k G` for `k = 0..4`.
    pub fn metric_gradient(&self, x: &[f64; 4]) -> [Matrix; 4] {
        if let Some(d) = &self.dmetric {
            return d(x);
        }
        core::array::from_fn(|k| {
            let h = fd_h(self.fd_step, x[k]);
            let mut xp = *x;
            let mut xm = *x;
            xp[k] += h;
            xm[k] -= h;
            self.metric(&xp).sub(&self.metric(&xm)).scale(0.5 / h)
        })
    }

    /// `d_l d_k G`, outer index `l`.
    pub fn metric_hessian(&self, x: &[f64; 4]) -> [[Matrix; 4]; 4] {
        if let Some(d2) = &self.d2metric {
            return d2(x);
        }
        core::array::from_fn(|l| {
            let h = fd_h(self.fd_step, x[l]);
            let mut xp = *x;
            let mut xm = *x;
            xp[l] += h;
            xm[l] -= h;
            let gp = self.metric_gradient(&xp);
            let gm = self.metric_gradient(&xm);
            core::array::from_fn(|k| gp[k].sub(&gm[k]).scale(0.5 / h))
        })
    }

    /// `(dA)_{ij} = d_i A_j`.
    pub fn potential_gradient(&self, x: &[f64; 4]) -> Matrix {
        if let Some(d) = &self.dpotential {
            return d(x);
        }
        Matrix::from_fn(4, 4, |i, j| {
            let h = fd_h(self.fd_step, x[i]);
            let mut xp = *x;
            let mut xm = *x;
            xp[i] += h;
            xm[i] -= h;
            (self.potential(&xp)[j] - self.potential(&xm)[j]) * 0.5 / h
        })
    }

    /// `d_k d_i A_j`, outer index `k`.
    pub fn potential_hessian(&self, x: &[f64; 4]) -> [Matrix; 4] {
        if let Some(d2) = &self.d2potential {
            return d2(x);
        }
        core::array::from_fn(|k| {
            let h = fd_h(self.fd_step, x[k]);
            let mut xp = *x;
            let mut xm = *x;
            xp[k] += h;
            xm[k] -= h;
            self.potential_gradient(&xp)
                .sub(&self.potential_gradient(&xm))
                .scale(0.5 / h)
        })
    }

    /// Gauge transformation `A -> A + grad h`; the metric is untouched and
    /// the field tensor is unchanged. When the Hessian of `h` is supplied
    /// and the potential has analytic derivatives, the transformed potential
    /// keeps analytic first derivatives.
    pub fn gauge_transformed(
        &self,
        grad_h: impl Fn(&[f64; 4]) -> [f64; 4] + Send + Sync + 'static,
        hess_h: Option<Arc<dyn Fn(&[f64; 4]) -> Matrix + Send + Sync>>,
    ) -> Self {
        let grad: Arc<dyn Fn(&[f64; 4]) -> [f64; 4] + Send + Sync> = Arc::new(grad_h);
        let base_potential = self.potential.clone();
        let grad_for_a = grad.clone();
        let mut out = self.clone();
        out.potential = Arc::new(move |x: &[f64; 4]| {
            let a = base_potential(x);
            let g = grad_for_a(x);
            core::array::from_fn(|j| a[j] + g[j])
        });
        out.dpotential = match (&self.dpotential, hess_h) {
            (Some(da), Some(hess)) => {
                let da = da.clone();
                Some(Arc::new(move |x: &[f64; 4]| da(x).add(&hess(x))))
            }
            _ => None,
        };
        out.d2potential = None;
        out
    }

    // ---- built-in analytic fields ----

    /// Flat Minkowski space, zero potential.
    pub fn flat() -> Self {
        SpacetimeFields::new(
            |_x| Matrix::diag(&[1.0, -1.0, -1.0, -1.0]),
            |_x| [0.0; 4],
        )
        .with_metric_derivatives(
            |_x| core::array::from_fn(|_| Matrix::zeros(4, 4)),
            |_x| core::array::from_fn(|_| core::array::from_fn(|_| Matrix::zeros(4, 4))),
        )
        .with_potential_derivatives(
            |_x| Matrix::zeros(4, 4),
            |_x| core::array::from_fn(|_| Matrix::zeros(4, 4)),
        )
    }

    /// Flat space with a uniform magnetic field `B = b0 e_z` from the
    /// symmetric-gauge potential `A = (0, -b0 y / 2, b0 x / 2, 0)`.
    pub fn uniform_b(b0: f64) -> Self {
        let base = SpacetimeFields::flat();
        let mut out = base;
        out.potential = Arc::new(move |x: &[f64; 4]| [0.0, -0.5 * b0 * x[2], 0.5 * b0 * x[1], 0.0]);
        out.dpotential = Some(Arc::new(move |_x: &[f64; 4]| {
            let mut d = Matrix::zeros(4, 4);
            d[(2, 1)] = -0.5 * b0;
            d[(1, 2)] = 0.5 * b0;
            d
        }));
        out.d2potential = Some(Arc::new(|_x: &[f64; 4]| {
            core::array::from_fn(|_| Matrix::zeros(4, 4))
        }));
        out
    }

    /// Flat space with the Coulomb potential `phi = k / r` of a point charge
    /// at the spatial origin (covariant components `A = (-k/r, 0, 0, 0)`).
    pub fn coulomb(k: f64) -> Self {
        let r2 = |x: &[f64; 4]| x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        let base = SpacetimeFields::flat();
        let mut out = base;
        out.potential = Arc::new(move |x: &[f64; 4]| {
            let r = libm::sqrt(r2(x));
            [-k / r, 0.0, 0.0, 0.0]
        });
        out.dpotential = Some(Arc::new(move |x: &[f64; 4]| {
            let r = libm::sqrt(r2(x));
            let mut d = Matrix::zeros(4, 4);
            for a in 1..4 {
                d[(a, 0)] = k * x[a] / (r * r * r);
            }
            d
        }));
        out.d2potential = Some(Arc::new(move |x: &[f64; 4]| {
            let r = libm::sqrt(r2(x));
            let r3 = r * r * r;
            let r5 = r3 * r * r;
            core::array::from_fn(|c| {
                let mut d = Matrix::zeros(4, 4);
                if c >= 1 {
                    for a in 1..4 {
                        let delta = if a == c { 1.0 } else { 0.0 };
                        d[(a, 0)] = k * (delta / r3 - 3.0 * x[a] * x[c] / r5);
                    }
                }
                d
            })
        }));
        out
    }

    /// Conformally flat metric `G = exp(2 phi) eta` with a linear exponent
    /// `phi = c . X`; zero potential.
    pub fn conformal(coeffs: [f64; 4]) -> Self {
        let eta = [1.0, -1.0, -1.0, -1.0];
        let phi = move |x: &[f64; 4]| {
            coeffs[0] * x[0] + coeffs[1] * x[1] + coeffs[2] * x[2] + coeffs[3] * x[3]
        };
        SpacetimeFields::new(
            move |x| {
                let f = libm::exp(2.0 * phi(x));
                Matrix::diag(&[f * eta[0], f * eta[1], f * eta[2], f * eta[3]])
            },
            |_x| [0.0; 4],
        )
        .with_metric_derivatives(
            move |x| {
                let f = libm::exp(2.0 * phi(x));
                core::array::from_fn(|k| {
                    Matrix::diag(&core::array::from_fn::<f64, 4, _>(|i| {
                        2.0 * coeffs[k] * f * eta[i]
                    }))
                })
            },
            move |x| {
                let f = libm::exp(2.0 * phi(x));
                core::array::from_fn(|l| {
                    core::array::from_fn(|k| {
                        Matrix::diag(&core::array::from_fn::<f64, 4, _>(|i| {
                            4.0 * coeffs[l] * coeffs[k] * f * eta[i]
                        }))
                    })
                })
            },
        )
        .with_potential_derivatives(
            |_x| Matrix::zeros(4, 4),
            |_x| core::array::from_fn(|_| Matrix::zeros(4, 4)),
        )
    }

    /// Weak-field metric `G_tt = 1 + 2 phi`, spatial part flat, with the
    /// quadratic potential `phi = amp |x|^2 / 2` (so `lap phi = 3 amp`);
    /// an electromagnetic potential must be attached separately.
    pub fn newtonian_quadratic(amp: f64) -> Self {
        SpacetimeFields::new(
            move |x| {
                let phi = 0.5 * amp * (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
                Matrix::diag(&[1.0 + 2.0 * phi, -1.0, -1.0, -1.0])
            },
            |_x| [0.0; 4],
        )
        .with_metric_derivatives(
            move |x| {
                core::array::from_fn(|k| {
                    let mut d = Matrix::zeros(4, 4);
                    if k >= 1 {
                        d[(0, 0)] = 2.0 * amp * x[k];
                    }
                    d
                })
            },
            move |x| {
                let _ = x;
                core::array::from_fn(|l| {
                    core::array::from_fn(|k| {
                        let mut d = Matrix::zeros(4, 4);
                        if l >= 1 && l == k {
                            d[(0, 0)] = 2.0 * amp;
                        }
                        d
                    })
                })
            },
        )
    }

    /// Weak-field metric of a point mass, `G_tt = 1 - 2 gm / r`, spatial
    /// part flat.
    pub fn newtonian_point_mass(gm: f64) -> Self {
        let r = |x: &[f64; 4]| libm::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
        SpacetimeFields::new(
            move |x| Matrix::diag(&[1.0 - 2.0 * gm / r(x), -1.0, -1.0, -1.0]),
            |_x| [0.0; 4],
        )
    }

    /// Attaches the uniform-B potential (with analytic derivatives) to an
    /// arbitrary metric background.
    pub fn with_uniform_b_potential(mut self, b0: f64) -> Self {
        self.potential =
            Arc::new(move |x: &[f64; 4]| [0.0, -0.5 * b0 * x[2], 0.5 * b0 * x[1], 0.0]);
        self.dpotential = Some(Arc::new(move |_x: &[f64; 4]| {
            let mut d = Matrix::zeros(4, 4);
            d[(2, 1)] = -0.5 * b0;
            d[(1, 2)] = 0.5 * b0;
            d
        }));
        self.d2potential = Some(Arc::new(|_x: &[f64; 4]| {
            core::array::from_fn(|_| Matrix::zeros(4, 4))
        }));
        self
    }
}

/// Levi-Civita symbols
/// `Gamma^k_ij = G^{kr} (d_j G_ir + d_i G_jr - d_r G_ij) / 2`.
pub fn christoffel(fields: &SpacetimeFields, x: &[f64; 4]) -> Result<Christoffel> {
    let ginv = fields.metric_inverse(x)?;
    let dg = fields.metric_gradient(x);
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for r in 0..4 {
                    acc += ginv[(k, r)]
                        * (dg[j][(i, r)] + dg[i][(j, r)] - dg[r][(i, j)]);
                }
                gamma[k][i][j] = 0.5 * acc;
            }
        }
    }
    Ok(gamma)
}

/// Metric-compatibility residual `nabla_i G_jk` (zero for exact symbols).
pub fn metric_compatibility_residual(fields: &SpacetimeFields, x: &[f64; 4]) -> Result<f64> {
    let g = fields.metric(x);
    let dg = fields.metric_gradient(x);
    let gamma = christoffel(fields, x)?;
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let mut v = dg[i][(j, k)];
                for m in 0..4 {
                    v -= g[(j, m)] * gamma[m][i][k] + g[(m, k)] * gamma[m][i][j];
                }
                worst = linalg::fmax(worst, libm::fabs(v));
            }
        }
    }
    Ok(worst)
}

/// Electromagnetic field tensor `F_ij = d_i A_j - d_j A_i`.
pub fn em_field(fields: &SpacetimeFields, x: &[f64; 4]) -> Matrix {
    let da = fields.potential_gradient(x);
    da.sub(&da.transpose())
}

/// Electric field components `E_a = F_a0`.
pub fn e_field(f: &Matrix) -> [f64; 3] {
    [f[(1, 0)], f[(2, 0)], f[(3, 0)]]
}

/// Magnetic field components `B_c = eps_abc F_ab / 2`.
pub fn b_field(f: &Matrix) -> [f64; 3] {
    [f[(2, 3)], f[(3, 1)], f[(1, 2)]]
}

/// Fifth connection row `Gamma^5_ij = F_ij - 2 nabla_i A_j`.
pub fn gamma5(fields: &SpacetimeFields, x: &[f64; 4]) -> Result<Matrix> {
    let f = em_field(fields, x);
    let da = fields.potential_gradient(x);
    let a = fields.potential(x);
    let gamma = christoffel(fields, x)?;
    Ok(Matrix::from_fn(4, 4, |i, j| {
        let mut nabla = da[(i, j)];
        for k in 0..4 {
            nabla -= gamma[k][i][j] * a[k];
        }
        f[(i, j)] - 2.0 * nabla
    }))
}

/// State of a charged particle on an arclength-parameterized worldline.
#[derive(Clone, Copy, Debug)]
pub struct ParticleState {
    pub x: [f64; 4],
    pub u: [f64; 4],
    pub q: f64,
    pub m0: f64,
    pub s_arc: f64,
}

impl ParticleState {
    /// Validates the unit-norm condition `U* U = 1` against the metric at
    /// `x` and requires a positive rest mass.
    pub fn new(x: [f64; 4], u: [f64; 4], q: f64, m0: f64, fields: &SpacetimeFields) -> Result<Self> {
        if !(m0 > 0.0) {
            return Err(Error::InvalidState("rest mass must be positive"));
        }
        let g = fields.metric(&x);
        let norm = quad(&g, &u);
        if libm::fabs(norm - 1.0) > 1e-9 {
            return Err(Error::InvalidState("4-velocity must satisfy U*U = 1"));
        }
        Ok(ParticleState { x, u, q, m0, s_arc: 0.0 })
    }

    /// Flat-space constructor from a spatial 3-velocity, `U = gamma (1, v)`.
    pub fn from_velocity(x: [f64; 4], v: [f64; 3], q: f64, m0: f64) -> Result<Self> {
        let v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if v2 >= 1.0 {
            return Err(Error::SuperluminalBoost);
        }
        if !(m0 > 0.0) {
            return Err(Error::InvalidState("rest mass must be positive"));
        }
        let gamma = 1.0 / libm::sqrt(1.0 - v2);
        Ok(ParticleState {
            x,
            u: [gamma, gamma * v[0], gamma * v[1], gamma * v[2]],
            q,
            m0,
            s_arc: 0.0,
        })
    }
}

fn quad(g: &Matrix, u: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            acc += u[i] * g[(i, j)] * u[j];
        }
    }
    acc
}

/// Right side of the equation of motion:
/// `dX/ds = U`, `dU^k/ds = -Gamma^k_ij U^i U^j - (q/m0) (G^-1 F)^k_j U^j`.
pub fn motion_rhs(state: &ParticleState, fields: &SpacetimeFields) -> Result<([f64; 4], [f64; 4])> {
    let gamma = christoffel(fields, &state.x)?;
    let ginv = fields.metric_inverse(&state.x)?;
    let f = em_field(fields, &state.x);
    let fbar = ginv.mul(&f);
    let mut du = [0.0; 4];
    for k in 0..4 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc -= gamma[k][i][j] * state.u[i] * state.u[j];
            }
            acc -= state.q / state.m0 * fbar[(k, i)] * state.u[i];
        }
        du[k] = acc;
    }
    Ok((state.u, du))
}

/// One sampled point of an integrated worldline.
#[derive(Clone, Copy, Debug)]
pub struct TrajectoryPoint {
    pub s: f64,
    pub x: [f64; 4],
    pub u: [f64; 4],
    pub q: f64,
    pub m0: f64,
    /// `|U* U - 1|` at this point.
    pub norm_drift: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub max_norm_drift: f64,
}

/// Fixed-step RK4 integration of the equation of motion. The charge and the
/// rest mass are integrals of the motion and are carried unchanged; the
/// report includes the worst `|U*U - 1|` drift as an integration diagnostic.
pub fn integrate_motion(
    state0: &ParticleState,
    fields: &SpacetimeFields,
    ds: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    if !(ds > 0.0) {
        return Err(Error::InvalidState("step must be positive"));
    }
    let mut points = Vec::with_capacity(n_steps + 1);
    let mut max_drift = 0.0f64;
    let mut st = *state0;
    let record = |st: &ParticleState, fields: &SpacetimeFields, max_drift: &mut f64| {
        let g = fields.metric(&st.x);
        let drift = libm::fabs(quad(&g, &st.u) - 1.0);
        *max_drift = linalg::fmax(*max_drift, drift);
        TrajectoryPoint { s: st.s_arc, x: st.x, u: st.u, q: st.q, m0: st.m0, norm_drift: drift }
    };
    points.push(record(&st, fields, &mut max_drift));
    for _ in 0..n_steps {
        let step = rk4_step(&st, fields, ds)?;
        st = step;
        points.push(record(&st, fields, &mut max_drift));
    }
    Ok(Trajectory { points, max_norm_drift: max_drift })
}

fn rk4_step(st: &ParticleState, fields: &SpacetimeFields, ds: f64) -> Result<ParticleState> {
    let eval = |x: [f64; 4], u: [f64; 4]| -> Result<([f64; 4], [f64; 4])> {
        let probe = ParticleState { x, u, q: st.q, m0: st.m0, s_arc: 0.0 };
        motion_rhs(&probe, fields)
    };
    let add = |a: [f64; 4], b: [f64; 4], c: f64| core::array::from_fn(|i| a[i] + c * b[i]);
    let (k1x, k1u) = eval(st.x, st.u)?;
    let (k2x, k2u) = eval(add(st.x, k1x, ds / 2.0), add(st.u, k1u, ds / 2.0))?;
    let (k3x, k3u) = eval(add(st.x, k2x, ds / 2.0), add(st.u, k2u, ds / 2.0))?;
    let (k4x, k4u) = eval(add(st.x, k3x, ds), add(st.u, k3u, ds))?;
    let x = core::array::from_fn(|i| {
        st.x[i] + ds / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i])
    });
    let u = core::array::from_fn(|i| {
        st.u[i] + ds / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i])
    });
    Ok(ParticleState { x, u, q: st.q, m0: st.m0, s_arc: st.s_arc + ds })
}

/// One sampled point of a parallel-transported linear 5-momentum.
#[derive(Clone, Copy, Debug)]
pub struct TransportPoint {
    pub s: f64,
    pub x: [f64; 4],
    /// Covariant spacetime momentum row `Pi* = m0 U* - 2 q A*`.
    pub pi_star: [f64; 4],
    /// Fifth component: the charge, exactly constant.
    pub q: f64,
    /// 4-velocity reconstructed from the momentum row.
    pub u: [f64; 4],
}

/// Parallel transport of the 5-row `(Pi*, q)` along its own reconstructed
/// flow: `dPi*_j/ds = (Pi*_k Gamma^k_ij + q Gamma^5_ij) U^i` with
/// `U = G^-1 (Pi* + 2 q A*)^T / m0`, and `dq/ds = 0` carried algebraically.
pub fn transport_5momentum(
    state0: &ParticleState,
    fields: &SpacetimeFields,
    ds: f64,
    n_steps: usize,
) -> Result<Vec<TransportPoint>> {
    if !(ds > 0.0) {
        return Err(Error::InvalidState("step must be positive"));
    }
    let q = state0.q;
    let m0 = state0.m0;
    // initial momentum row from the state
    let g0 = fields.metric(&state0.x);
    let a0 = fields.potential(&state0.x);
    let mut pi: [f64; 4] = core::array::from_fn(|j| {
        let mut uj = 0.0;
        for i in 0..4 {
            uj += g0[(j, i)] * state0.u[i];
        }
        m0 * uj - 2.0 * q * a0[j]
    });
    let mut x = state0.x;
    let mut s = 0.0;

    let reconstruct = |x: &[f64; 4], pi: &[f64; 4]| -> Result<[f64; 4]> {
        let ginv = fields.metric_inverse(x)?;
        let a = fields.potential(x);
        Ok(core::array::from_fn(|k| {
            let mut acc = 0.0;
            for j in 0..4 {
                acc += ginv[(k, j)] * (pi[j] + 2.0 * q * a[j]);
            }
            acc / m0
        }))
    };
    let rhs = |x: &[f64; 4], pi: &[f64; 4]| -> Result<([f64; 4], [f64; 4])> {
        let u = reconstruct(x, pi)?;
        let gamma = christoffel(fields, x)?;
        let g5 = gamma5(fields, x)?;
        let dpi = core::array::from_fn(|j| {
            let mut acc = 0.0;
            for i in 0..4 {
                let mut row = q * g5[(i, j)];
                for k in 0..4 {
                    row += pi[k] * gamma[k][i][j];
                }
                acc += row * u[i];
            }
            acc
        });
        Ok((u, dpi))
    };

    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(TransportPoint { s, x, pi_star: pi, q, u: reconstruct(&x, &pi)? });
    let add = |a: [f64; 4], b: [f64; 4], c: f64| core::array::from_fn(|i| a[i] + c * b[i]);
    for _ in 0..n_steps {
        let (k1x, k1p) = rhs(&x, &pi)?;
        let (k2x, k2p) = rhs(&add(x, k1x, ds / 2.0), &add(pi, k1p, ds / 2.0))?;
        let (k3x, k3p) = rhs(&add(x, k2x, ds / 2.0), &add(pi, k2p, ds / 2.0))?;
        let (k4x, k4p) = rhs(&add(x, k3x, ds), &add(pi, k3p, ds))?;
        x = core::array::from_fn(|i| {
            x[i] + ds / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i])
        });
        pi = core::array::from_fn(|i| {
            pi[i] + ds / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i])
        });
        s += ds;
        out.push(TransportPoint { s, x, pi_star: pi, q, u: reconstruct(&x, &pi)? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_metric_has_zero_symbols() {
        let fields = SpacetimeFields::flat();
        let gamma = christoffel(&fields, &[0.3, 1.0, -2.0, 0.5]).unwrap();
        let mut worst = 0.0f64;
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    worst = worst.max(gamma[k][i][j].abs());
                }
            }
        }
        assert_eq!(worst, 0.0);
    }

    #[test]
    fn constant_potential_gives_zero_field() {
        let mut fields = SpacetimeFields::flat();
        fields.potential = Arc::new(|_x| [0.7, -0.3, 0.1, 0.9]);
        fields.dpotential = None;
        fields.d2potential = None;
        let f = em_field(&fields, &[0.0, 1.0, 2.0, 3.0]);
        assert!(f.max_abs() < 1e-12);
        // flat metric + constant A: Gamma5 = 0
        let g5 = gamma5(&fields, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(g5.max_abs() < 1e-11);
    }

    #[test]
    fn uniform_b_recovers_field_components() {
        let fields = SpacetimeFields::uniform_b(2.5);
        let f = em_field(&fields, &[0.0, 0.4, -0.7, 1.1]);
        let b = b_field(&f);
        assert!((b[2] - 2.5).abs() < 1e-13);
        assert!(b[0].abs() < 1e-13 && b[1].abs() < 1e-13);
        assert!(linalg::max_abs(&e_field(&f)) < 1e-13);
        // antisymmetry
        assert!(f.add(&f.transpose()).max_abs() < 1e-15);
    }

    #[test]
    fn coulomb_recovers_inverse_square_field() {
        let k = 1.7;
        let fields = SpacetimeFields::coulomb(k);
        let x = [0.0, 0.6, -0.8, 0.3];
        let f = em_field(&fields, &x);
        let e = e_field(&f);
        let r2 = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        let r = r2.sqrt();
        for a in 0..3 {
            let want = k * x[1 + a] / (r2 * r);
            assert!((e[a] - want).abs() < 1e-12, "component {a}");
        }
        assert!(linalg::max_abs(&b_field(&f)) < 1e-13);
    }

    #[test]
    fn state_guards() {
        assert!(matches!(
            ParticleState::from_velocity([0.0; 4], [1.0, 0.0, 0.0], 1.0, 1.0),
            Err(Error::SuperluminalBoost)
        ));
        assert!(ParticleState::from_velocity([0.0; 4], [0.6, 0.0, 0.0], 1.0, 1.0).is_ok());
        let fields = SpacetimeFields::flat();
        assert!(ParticleState::new([0.0; 4], [1.0, 0.5, 0.0, 0.0], 0.0, 1.0, &fields).is_err());
    }

    #[test]
    fn free_particle_moves_straight() {
        let fields = SpacetimeFields::flat();
        let st = ParticleState::from_velocity([0.0; 4], [0.6, 0.0, 0.0], 0.0, 1.0).unwrap();
        let (dx, du) = motion_rhs(&st, &fields).unwrap();
        assert!(linalg::max_abs(&du) < 1e-15);
        assert!(linalg::max_abs_diff(&dx, &st.u) < 1e-15);
        let traj = integrate_motion(&st, &fields, 1e-2, 100).unwrap();
        let last = traj.points.last().unwrap();
        for i in 0..4 {
            assert!((last.x[i] - st.u[i] * 1.0).abs() < 1e-12);
        }
        assert!(traj.max_norm_drift < 1e-13);
    }
}
