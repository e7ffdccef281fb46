//! Pointwise curvature tensors and residual evaluators for the coupled
//! gravito-electromagnetic field equations and the matter conservation law.
//! No PDE solving happens here: every function evaluates the left-minus-
//! right side of a displayed equation at a point, so exact solutions give
//! zeros and limit regimes give the documented reductions.
//!
//! Index conventions: all raising uses the inverse metric; the realized
//! forms are `R^{ij} = G^{im} G^{jn} R_mn`,
//! `Rt^{jk}_k = G^{jm} G^{kl} Rt_{mlk}`, `Rt^{rij} = G^{rm} G^{ia} G^{jb}
//! Rt_{mab}`, `F^{ji} = G^{ja} G^{ib} F_ab` and
//! `R^{qij}_j = G^{ia} G^{jb} R^q_{abj}`. Round-bracket symmetrization
//! carries the factor 1/2.

use alloc::sync::Arc;

use crate::connection::{christoffel, em_field, Christoffel, SpacetimeFields};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Riemann components `R^p_ijk`, indexed `[p][i][j][k]`.
pub type Riemann = [[[[f64; 4]; 4]; 4]; 4];
/// Three-index covariant tensor, e.g. the additional curvature `Rt_ijk`.
pub type Tensor3 = [[[f64; 4]; 4]; 4];

/// Perfect-fluid matter data at a point.
#[derive(Clone, Copy, Debug)]
pub struct MatterState {
    pub rho: f64,
    pub p: f64,
    pub rho_e: f64,
    pub u: [f64; 4],
}

impl MatterState {
    pub fn new(rho: f64, p: f64, rho_e: f64, u: [f64; 4], metric: &Matrix) -> Result<Self> {
        if rho < 0.0 {
            return Err(Error::InvalidState("energy density must be nonnegative"));
        }
        let mut norm = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                norm += u[i] * metric[(i, j)] * u[j];
            }
        }
        if libm::fabs(norm - 1.0) > 1e-10 {
            return Err(Error::InvalidState("matter 4-velocity must satisfy U*U = 1"));
        }
        Ok(MatterState { rho, p, rho_e, u })
    }

    /// Vacuum at rest (valid for any metric with `G_tt = 1`).
    pub fn vacuum() -> Self {
        MatterState { rho: 0.0, p: 0.0, rho_e: 0.0, u: [1.0, 0.0, 0.0, 0.0] }
    }
}

/// Coupling constants of the field equations.
#[derive(Clone, Copy, Debug)]
pub struct CouplingConstants {
    /// Einstein constant multiplying the matter stress tensor.
    pub kappa: f64,
    /// Electromagnetic coupling in the geometry Lagrangian.
    pub k_tilde: f64,
    /// Permittivity.
    pub epsilon0: f64,
    /// Cosmological constant.
    pub lambda: f64,
    /// Gravitational constant.
    pub g_newton: f64,
}

impl CouplingConstants {
    /// Free-form constructor.
    pub fn new(kappa: f64, k_tilde: f64, epsilon0: f64, lambda: f64, g_newton: f64) -> Self {
        CouplingConstants { kappa, k_tilde, epsilon0, lambda, g_newton }
    }

    /// The preset recovering Einstein gravity and the Maxwell limit:
    /// `kappa = 8 pi G_N`, `k_tilde = kappa epsilon0`.
    pub fn maxwell_preset(g_newton: f64, epsilon0: f64, lambda: f64) -> Self {
        let kappa = 8.0 * core::f64::consts::PI * g_newton;
        CouplingConstants { kappa, k_tilde: kappa * epsilon0, epsilon0, lambda, g_newton }
    }
}

/// `d_l Gamma^k_ij`, indexed `[l][k][i][j]`; analytic when the metric has
/// first and second derivative callbacks, nested central differences
/// otherwise.
pub fn christoffel_gradient(fields: &SpacetimeFields, x: &[f64; 4]) -> Result<Riemann> {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    if fields.has_metric_hessian() {
        let ginv = fields.metric_inverse(x)?;
        let dg = fields.metric_gradient(x);
        let d2g = fields.metric_hessian(x);
        // d_l G^{kr} = -G^{km} (d_l G_mn) G^{nr}
        let dginv: [Matrix; 4] =
            core::array::from_fn(|l| ginv.mul(&dg[l]).mul(&ginv).scale(-1.0));
        for l in 0..4 {
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        let mut acc = 0.0;
                        for r in 0..4 {
                            let s = dg[j][(i, r)] + dg[i][(j, r)] - dg[r][(i, j)];
                            let ds = d2g[l][j][(i, r)] + d2g[l][i][(j, r)] - d2g[l][r][(i, j)];
                            acc += dginv[l][(k, r)] * s + ginv[(k, r)] * ds;
                        }
                        out[l][k][i][j] = 0.5 * acc;
                    }
                }
            }
        }
        return Ok(out);
    }
    let h0 = fields.fd_step();
    for l in 0..4 {
        let h = h0 * linalg::fmax(1.0, libm::fabs(x[l]));
        let mut xp = *x;
        let mut xm = *x;
        xp[l] += h;
        xm[l] -= h;
        let gp = christoffel(fields, &xp)?;
        let gm = christoffel(fields, &xm)?;
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    out[l][k][i][j] = (gp[k][i][j] - gm[k][i][j]) / (2.0 * h);
                }
            }
        }
    }
    Ok(out)
}

/// Curvature of the spacetime metric:
/// `R^p_ijk = Gamma^p_im Gamma^m_jk - Gamma^p_jm Gamma^m_ik
///            + d_i Gamma^p_jk - d_j Gamma^p_ik`,
/// the Ricci contraction `R_jk = R^p_pjk` and the scalar `R = G^{jk} R_jk`.
pub fn riemann(fields: &SpacetimeFields, x: &[f64; 4]) -> Result<(Riemann, Matrix, f64)> {
    let gamma = christoffel(fields, x)?;
    let dgamma = christoffel_gradient(fields, x)?;
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for p in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let mut acc = dgamma[i][p][j][k] - dgamma[j][p][i][k];
                    for m in 0..4 {
                        acc += gamma[p][i][m] * gamma[m][j][k] - gamma[p][j][m] * gamma[m][i][k];
                    }
                    r[p][i][j][k] = acc;
                }
            }
        }
    }
    let ricci = Matrix::from_fn(4, 4, |j, k| {
        let mut acc = 0.0;
        for p in 0..4 {
            acc += r[p][p][j][k];
        }
        acc
    });
    let ginv = fields.metric_inverse(x)?;
    let mut scalar = 0.0;
    for j in 0..4 {
        for k in 0..4 {
            scalar += ginv[(j, k)] * ricci[(j, k)];
        }
    }
    Ok((r, ricci, scalar))
}

/// Covariant derivative of the field tensor,
/// `nabla_k F_ji = d_k F_ji - Gamma^m_kj F_mi - Gamma^m_ki F_jm`.
fn covariant_df(fields: &SpacetimeFields, x: &[f64; 4], gamma: &Christoffel) -> Tensor3 {
    let hess = fields.potential_hessian(x);
    let f = em_field(fields, x);
    let mut out = [[[0.0; 4]; 4]; 4];
    // out[k][j][i] = nabla_k F_ji
    for k in 0..4 {
        for j in 0..4 {
            for i in 0..4 {
                let mut acc = hess[k][(j, i)] - hess[k][(i, j)];
                for m in 0..4 {
                    acc -= gamma[m][k][j] * f[(m, i)] + gamma[m][k][i] * f[(j, m)];
                }
                out[k][j][i] = acc;
            }
        }
    }
    out
}

/// Additional curvature components of the fifth connection row,
/// `Rt_ijk = nabla_k F_ji + 2 A_q R^q_ijk`, and the invariant
/// `Rt = A_r Rt^{rk}_k`.
pub fn tilde_riemann(fields: &SpacetimeFields, x: &[f64; 4]) -> Result<(Tensor3, f64)> {
    let gamma = christoffel(fields, x)?;
    let (rm, _, _) = riemann(fields, x)?;
    let df = covariant_df(fields, x, &gamma);
    let a = fields.potential(x);
    let mut rt = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let mut acc = df[k][j][i];
                for q in 0..4 {
                    acc += 2.0 * a[q] * rm[q][i][j][k];
                }
                rt[i][j][k] = acc;
            }
        }
    }
    let ginv = fields.metric_inverse(x)?;
    let mut scalar = 0.0;
    for r in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    scalar += a[r] * ginv[(r, i)] * ginv[(j, k)] * rt[i][j][k];
                }
            }
        }
    }
    Ok((rt, scalar))
}

/// Matter stress tensor `T_M^ij = kappa [(rho + p) U^i U^j - p G^{ij}]`.
pub fn stress_matter(
    matter: &MatterState,
    ginv: &Matrix,
    constants: &CouplingConstants,
) -> Matrix {
    Matrix::from_fn(4, 4, |i, j| {
        constants.kappa
            * ((matter.rho + matter.p) * matter.u[i] * matter.u[j] - matter.p * ginv[(i, j)])
    })
}

/// Geometry stress tensor
/// `T_G^ij = -[R^ij - R G^ij / 2 + Lambda G^ij]
///           + kt [A^(i Rt^j)k_k + A_r Rt^r(ij) - Rt G^ij / 2]`.
pub fn stress_geom(
    fields: &SpacetimeFields,
    constants: &CouplingConstants,
    x: &[f64; 4],
) -> Result<Matrix> {
    let ginv = fields.metric_inverse(x)?;
    let (_, ricci, scalar) = riemann(fields, x)?;
    let (rt, rt_scalar) = tilde_riemann(fields, x)?;
    let a = fields.potential(x);

    let ricci_up = ginv.mul(&ricci).mul(&ginv);
    // X^j = Rt^{jk}_k = G^{jm} G^{kl} Rt_{mlk}
    let mut xvec = [0.0; 4];
    for j in 0..4 {
        let mut acc = 0.0;
        for m in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    acc += ginv[(j, m)] * ginv[(k, l)] * rt[m][l][k];
                }
            }
        }
        xvec[j] = acc;
    }
    let a_up: [f64; 4] = core::array::from_fn(|i| {
        let mut acc = 0.0;
        for m in 0..4 {
            acc += ginv[(i, m)] * a[m];
        }
        acc
    });
    // Y^{ij} = A_r Rt^{rij}
    let mut y = Matrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for r in 0..4 {
                for m in 0..4 {
                    for av in 0..4 {
                        for b in 0..4 {
                            acc += a[r] * ginv[(r, m)] * ginv[(i, av)] * ginv[(j, b)]
                                * rt[m][av][b];
                        }
                    }
                }
            }
            y[(i, j)] = acc;
        }
    }
    Ok(Matrix::from_fn(4, 4, |i, j| {
        let einstein = ricci_up[(i, j)] - 0.5 * scalar * ginv[(i, j)]
            + constants.lambda * ginv[(i, j)];
        let sym_ax = 0.5 * (a_up[i] * xvec[j] + a_up[j] * xvec[i]);
        let sym_y = 0.5 * (y[(i, j)] + y[(j, i)]);
        -einstein + constants.k_tilde * (sym_ax + sym_y - 0.5 * rt_scalar * ginv[(i, j)])
    }))
}

/// Left-minus-right of the gravitational field equation; zero for exact
/// solutions, `Lambda G^ij` for flat vacuum with a cosmological constant.
pub fn einstein_residual(
    fields: &SpacetimeFields,
    matter: &MatterState,
    constants: &CouplingConstants,
    x: &[f64; 4],
) -> Result<Matrix> {
    let ginv = fields.metric_inverse(x)?;
    let tg = stress_geom(fields, constants, x)?;
    let tm = stress_matter(matter, &ginv, constants);
    Ok(tg.add(&tm).scale(-1.0))
}

/// `nabla_j F^{ji}` with all raising by the inverse metric.
fn div_f_up(fields: &SpacetimeFields, x: &[f64; 4], gamma: &Christoffel) -> Result<[f64; 4]> {
    let ginv = fields.metric_inverse(x)?;
    let dg = fields.metric_gradient(x);
    let dginv: [Matrix; 4] = core::array::from_fn(|l| ginv.mul(&dg[l]).mul(&ginv).scale(-1.0));
    let f = em_field(fields, x);
    let hess = fields.potential_hessian(x);
    let df: [Matrix; 4] = core::array::from_fn(|k| hess[k].sub(&hess[k].transpose()));
    let fup = ginv.mul(&f).mul(&ginv); // F^{ab} = G^{am} F_mn G^{nb}
    let mut out = [0.0; 4];
    for i in 0..4 {
        let mut acc = 0.0;
        for j in 0..4 {
            // d_j F^{ji}
            let mut dterm = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    dterm += dginv[j][(j, m)] * f[(m, n)] * ginv[(n, i)]
                        + ginv[(j, m)] * df[j][(m, n)] * ginv[(n, i)]
                        + ginv[(j, m)] * f[(m, n)] * dginv[j][(n, i)];
                }
            }
            acc += dterm;
            // Gamma^j_jm F^{mi} + Gamma^i_jm F^{jm}
            for m in 0..4 {
                acc += gamma[j][j][m] * fup[(m, i)] + gamma[i][j][m] * fup[(j, m)];
            }
        }
        out[i] = acc;
    }
    Ok(out)
}

/// The curvature coupling vector `2 A_q R^{qij}_j` with
/// `R^{qij}_j = G^{ia} G^{jb} R^q_{abj}`.
fn coupling_term(fields: &SpacetimeFields, x: &[f64; 4]) -> Result<[f64; 4]> {
    let ginv = fields.metric_inverse(x)?;
    let (rm, _, _) = riemann(fields, x)?;
    let a = fields.potential(x);
    let mut out = [0.0; 4];
    for i in 0..4 {
        let mut acc = 0.0;
        for q in 0..4 {
            for av in 0..4 {
                for j in 0..4 {
                    for b in 0..4 {
                        acc += 2.0 * a[q] * ginv[(i, av)] * ginv[(j, b)] * rm[q][av][b][j];
                    }
                }
            }
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Left-minus-right of the electromagnetic field equation,
/// `-kt [nabla_j F^{ji} + 2 A_q R^{qij}_j] - kappa rho_e U^i`.
/// On flat static fields with the Maxwell preset this equals
/// `kappa epsilon0 (div E - rho_e / epsilon0)` in the time component.
pub fn maxwell_residual(
    fields: &SpacetimeFields,
    matter: &MatterState,
    constants: &CouplingConstants,
    x: &[f64; 4],
) -> Result<[f64; 4]> {
    let gamma = christoffel(fields, x)?;
    let divf = div_f_up(fields, x, &gamma)?;
    let coupling = coupling_term(fields, x)?;
    Ok(core::array::from_fn(|i| {
        -constants.k_tilde * (divf[i] + coupling[i]) - constants.kappa * matter.rho_e * matter.u[i]
    }))
}

/// Perfect-fluid matter as fields over spacetime, differentiated by central
/// differences for the conservation law.
#[derive(Clone)]
pub struct MatterField {
    pub rho: Arc<dyn Fn(&[f64; 4]) -> f64 + Send + Sync>,
    pub p: Arc<dyn Fn(&[f64; 4]) -> f64 + Send + Sync>,
    pub rho_e: Arc<dyn Fn(&[f64; 4]) -> f64 + Send + Sync>,
    pub u: Arc<dyn Fn(&[f64; 4]) -> [f64; 4] + Send + Sync>,
}

impl MatterField {
    pub fn uniform_dust(rho: f64, rho_e: f64) -> Self {
        MatterField {
            rho: Arc::new(move |_| rho),
            p: Arc::new(|_| 0.0),
            rho_e: Arc::new(move |_| rho_e),
            u: Arc::new(|_| [1.0, 0.0, 0.0, 0.0]),
        }
    }

    fn state(&self, x: &[f64; 4]) -> MatterState {
        MatterState {
            rho: (self.rho)(x),
            p: (self.p)(x),
            rho_e: (self.rho_e)(x),
            u: (self.u)(x),
        }
    }
}

/// Mixed stress tensor of the fluid, `T^i_j = (rho + p) U^i U_j - p d^i_j`.
fn fluid_mixed_stress(field: &MatterField, g: &Matrix, x: &[f64; 4]) -> Matrix {
    let st = field.state(x);
    let u_low: [f64; 4] = core::array::from_fn(|j| {
        let mut acc = 0.0;
        for m in 0..4 {
            acc += g[(j, m)] * st.u[m];
        }
        acc
    });
    Matrix::from_fn(4, 4, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        (st.rho + st.p) * st.u[i] * u_low[j] - st.p * delta
    })
}

/// Residual of the matter conservation law,
/// `nabla_i [(rho + p) U^i U_j - p d^i_j] - rho_e U^k F_kj`.
pub fn matter_conservation_residual(
    fields: &SpacetimeFields,
    matter: &MatterField,
    x: &[f64; 4],
) -> Result<[f64; 4]> {
    let gamma = christoffel(fields, x)?;
    let f = em_field(fields, x);
    let st = matter.state(x);
    let t = fluid_mixed_stress(matter, &fields.metric(x), x);
    // d_i T^i_j by central differences
    let h0 = fields.fd_step();
    let mut div = [0.0; 4];
    for i in 0..4 {
        let h = h0 * linalg::fmax(1.0, libm::fabs(x[i]));
        let mut xp = *x;
        let mut xm = *x;
        xp[i] += h;
        xm[i] -= h;
        let tp = fluid_mixed_stress(matter, &fields.metric(&xp), &xp);
        let tm = fluid_mixed_stress(matter, &fields.metric(&xm), &xm);
        for j in 0..4 {
            div[j] += (tp[(i, j)] - tm[(i, j)]) / (2.0 * h);
        }
    }
    Ok(core::array::from_fn(|j| {
        let mut acc = div[j];
        for i in 0..4 {
            for m in 0..4 {
                acc += gamma[i][i][m] * t[(m, j)] - t[(i, m)] * gamma[m][i][j];
            }
        }
        for k in 0..4 {
            acc -= st.rho_e * st.u[k] * f[(k, j)];
        }
        acc
    }))
}

/// Relative magnitudes of the Maxwell term and the curvature coupling term
/// of the electromagnetic field equation at a point.
#[derive(Clone, Copy, Debug)]
pub struct NewtonianLimitReport {
    pub maxwell_norm: f64,
    pub coupling_norm: f64,
    /// `coupling_norm / maxwell_norm` (infinite if the Maxwell term
    /// vanishes while the coupling does not).
    pub ratio: f64,
}

/// Compares `nabla_j F^{ji}` against `2 A_q R^{qij}_j` pointwise; in
/// near-Newtonian fields the coupling is suppressed by the gravity
/// potential scale.
pub fn newtonian_limit_report(
    fields: &SpacetimeFields,
    x: &[f64; 4],
) -> Result<NewtonianLimitReport> {
    let gamma = christoffel(fields, x)?;
    let divf = div_f_up(fields, x, &gamma)?;
    let coupling = coupling_term(fields, x)?;
    let maxwell_norm = linalg::norm2(&divf);
    let coupling_norm = linalg::norm2(&coupling);
    let ratio = if maxwell_norm > 0.0 {
        coupling_norm / maxwell_norm
    } else if coupling_norm == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(NewtonianLimitReport { maxwell_norm, coupling_norm, ratio })
}
