//! Dense linear algebra over oriented (pseudo-)Euclidean spaces of dimension
//! 3, 4 and 5: metric adjoints, volume forms, generalized vector products and
//! the Hodge operator.
//!
//! # Conventions
//!
//! The volume form of an oriented metric is `orientation * sqrt(|det G|) *
//! epsilon`, which evaluates to 1 on any positively-oriented orthonormal
//! basis. Partial evaluation fills the *leading* slots:
//! `vol(V1..Vq)(W1..W_{n-q}) = vol(V1,..,Vq,W1,..,W_{n-q})`.
//!
//! The vector product of `n-1` vectors is the vector `J` with
//!
//! ```text
//! J(V1,..,V_{n-1})* U = vol(U, V1, .., V_{n-1})      for all U,
//! ```
//!
//! i.e. the free slot comes *first*. With the evaluation slot last instead,
//! the 1+3 block decompositions of `J` in Minkowski space and the identity
//! `*(V1 V2* - V2 V1*) = J(V1, V2)` pick up opposite signs and cannot hold
//! together; the leading-slot form is the one under which both hold, and it
//! still reduces to the ordinary cross product in Euclidean 3-space.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Symmetry tolerance for Gram matrices.
pub const GRAM_SYM_TOL: f64 = 1e-14;
/// A metric is degenerate when `|det gram|` falls below this.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Relative singular-value tolerance of linear-independence tests.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Nondegenerate metric on an oriented space of dimension 3, 4 or 5.
#[derive(Clone, Debug)]
pub struct Metric {
    gram: Matrix,
    inverse: Matrix,
    det: f64,
    orientation: f64,
    signature: (usize, usize),
}

impl Metric {
    pub fn new(gram: Matrix, orientation: f64) -> Result<Self> {
        if !(orientation == 1.0 || orientation == -1.0) {
            return Err(Error::MembershipViolated("orientation must be +1 or -1"));
        }
        let n = gram.rows();
        if !gram.is_square() || !(3..=5).contains(&n) {
            return Err(Error::DimensionMismatch { expected: 4, got: n });
        }
        let scale = linalg::fmax(1.0, gram.max_abs());
        if gram.max_abs_diff(&gram.transpose()) > GRAM_SYM_TOL * scale {
            return Err(Error::AsymmetricGram);
        }
        let det = gram.det();
        if libm::fabs(det) <= DEGENERACY_TOL {
            return Err(Error::DegenerateMetric("metric"));
        }
        let inverse = gram.inverse().ok_or(Error::DegenerateMetric("metric"))?;
        let mut p = 0;
        let mut m = 0;
        for ev in gram.symmetric_eigenvalues() {
            if ev > 0.0 {
                p += 1;
            } else {
                m += 1;
            }
        }
        Ok(Metric { gram, inverse, det, orientation, signature: (p, m) })
    }

    /// Constructor that also checks the computed signature.
    pub fn with_signature(gram: Matrix, orientation: f64, declared: (usize, usize)) -> Result<Self> {
        let m = Metric::new(gram, orientation)?;
        if m.signature != declared {
            return Err(Error::SignatureMismatch { declared, computed: m.signature });
        }
        Ok(m)
    }

    /// Minkowski 1+3 metric `diag(1,-1,-1,-1)`.
    pub fn minkowski() -> Self {
        Metric::new(Matrix::diag(&[1.0, -1.0, -1.0, -1.0]), 1.0).unwrap()
    }

    /// Positive-definite metric of dimension `n`.
    pub fn euclidean(n: usize) -> Self {
        Metric::new(Matrix::identity(n), 1.0).unwrap()
    }

    /// 5D metric `diag(1,-1,-1,-1,-omega^2)` of the scaled fifth dimension.
    pub fn hat_omega(omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::DegenerateMetric("hodge"));
        }
        Metric::new(
            Matrix::diag(&[1.0, -1.0, -1.0, -1.0, -omega * omega]),
            1.0,
        )
    }

    /// 5D hyperbolic metric `diag(1,-1,-1,-1,-1)` (omega = 1).
    pub fn hat_one() -> Self {
        Metric::hat_omega(1.0).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// Signature as (positive, negative) inertia indices.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Scalar product `U . V = U^T G V`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        linalg::dot(&self.gram.apply(v), u)
    }

    pub fn norm2(&self, u: &[f64]) -> f64 {
        self.inner(u, u)
    }

    /// Index lowering `U* = U^T G`, returned as covariant components.
    pub fn lower(&self, u: &[f64]) -> Vec<f64> {
        self.gram.apply(u)
    }

    /// Index raising with the contravariant metric.
    pub fn raise(&self, cov: &[f64]) -> Vec<f64> {
        self.inverse.apply(cov)
    }

    /// Adjoint of a square map on this space: `A* = G^-1 A^T G`.
    pub fn adjoint(&self, a: &Matrix) -> Matrix {
        self.inverse.mul(&a.transpose()).mul(&self.gram)
    }

    /// True when `U . U > margin`.
    pub fn is_timelike(&self, u: &[f64], margin: f64) -> bool {
        self.norm2(u) > margin
    }
}

/// Degenerate companion of [`Metric`]: carries a Gram matrix but no inverse,
/// no volume form and no Hodge operator. Keeps the two debris tensors of the
/// contracted 5D structure from being misused where an invertible metric is
/// required.
#[derive(Clone, Debug)]
pub struct SemiMetric {
    gram: Matrix,
}

impl SemiMetric {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.rows(), got: gram.cols() });
        }
        let scale = linalg::fmax(1.0, gram.max_abs());
        if gram.max_abs_diff(&gram.transpose()) > GRAM_SYM_TOL * scale {
            return Err(Error::AsymmetricGram);
        }
        Ok(SemiMetric { gram })
    }

    /// The degenerate 5D tensor `diag(1,-1,-1,-1,0)` left over when the
    /// fifth dimension collapses.
    pub fn g0_hat() -> Self {
        SemiMetric::new(Matrix::diag(&[1.0, -1.0, -1.0, -1.0, 0.0])).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        linalg::dot(&self.gram.apply(v), u)
    }
}

/// Adjoint of a (possibly rectangular) map between two metric spaces:
/// `A: T0 -> T` is m x n, and `A* = G0^-1 A^T G` is n x m.
pub fn adjoint_map(a: &Matrix, g0: &Metric, g: &Metric) -> Result<Matrix> {
    if a.cols() != g0.dim() {
        return Err(Error::DimensionMismatch { expected: g0.dim(), got: a.cols() });
    }
    if a.rows() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: a.rows() });
    }
    Ok(g0.inverse().mul(&a.transpose()).mul(g.gram()))
}

/// Fully antisymmetric covariant tensor of degree `q` on an `n`-dimensional
/// space, stored dense (`n^q` components, row-major multi-index).
#[derive(Clone, Debug, PartialEq)]
pub struct KForm {
    n: usize,
    degree: usize,
    comps: Vec<f64>,
}

fn tuple_index(n: usize, idx: &[usize]) -> usize {
    let mut k = 0;
    for &i in idx {
        debug_assert!(i < n);
        k = k * n + i;
    }
    k
}

/// Iterates all `n^q` multi-indices, calling `f` on each.
fn for_each_tuple(n: usize, q: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; q];
    loop {
        f(&idx);
        // odometer increment
        let mut k = q;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// All permutations of `0..n` with their signs. Dimensions are at most 5, so
/// filtering the n^n index tuples is cheap and leaves no room for sign bugs.
fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    for_each_tuple(n, n, |idx| {
        let sign = antisym_sign(idx);
        if sign != 0.0 || n == 0 {
            out.push((idx.to_vec(), if n == 0 { 1.0 } else { sign }));
        }
    });
    out
}

/// Sign of the permutation sorting `idx`; 0.0 if any index repeats.
fn antisym_sign(idx: &[usize]) -> f64 {
    let mut v: Vec<usize> = idx.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return 0.0;
            }
            if v[i] > v[j] {
                v.swap(i, j);
                sign = -sign;
            }
        }
    }
    sign
}

impl KForm {
    /// Builds a form from dense components, checking antisymmetry to 1e-14
    /// relative to the largest component.
    pub fn new(n: usize, degree: usize, comps: Vec<f64>) -> Result<Self> {
        if degree > n {
            return Err(Error::InvalidForm("degree exceeds dimension"));
        }
        if comps.len() != n.pow(degree as u32) {
            return Err(Error::InvalidForm("component count"));
        }
        let form = KForm { n, degree, comps };
        let scale = linalg::fmax(1.0, linalg::max_abs(&form.comps));
        let mut worst = 0.0;
        for_each_tuple(n, degree, |idx| {
            let mut sorted: Vec<usize> = idx.to_vec();
            sorted.sort_unstable();
            let sign = antisym_sign(idx);
            let want = if sign == 0.0 {
                0.0
            } else {
                sign * form.comps[tuple_index(n, &sorted)]
            };
            let diff = libm::fabs(form.comps[tuple_index(n, idx)] - want);
            worst = linalg::fmax(worst, diff);
        });
        if worst > 1e-14 * scale {
            return Err(Error::InvalidForm("antisymmetry violated"));
        }
        Ok(form)
    }

    /// Antisymmetrizing constructor: projects arbitrary components onto the
    /// fully antisymmetric part (`(1/q!) sum_sigma sign(sigma) T_sigma`).
    pub fn antisymmetrized(n: usize, degree: usize, comps: &[f64]) -> Result<Self> {
        if degree > n {
            return Err(Error::InvalidForm("degree exceeds dimension"));
        }
        if comps.len() != n.pow(degree as u32) {
            return Err(Error::InvalidForm("component count"));
        }
        let perms = permutations(degree);
        let factorial: f64 = (1..=degree).map(|k| k as f64).product::<f64>().max(1.0);
        let mut out = vec![0.0; comps.len()];
        for_each_tuple(n, degree, |idx| {
            let mut acc = 0.0;
            for (perm, sign) in &perms {
                let permuted: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
                acc += sign * comps[tuple_index(n, &permuted)];
            }
            out[tuple_index(n, idx)] = acc / factorial;
        });
        KForm::new(n, degree, out)
    }

    /// The zero form of the given degree.
    pub fn zero(n: usize, degree: usize) -> Self {
        KForm { n, degree, comps: vec![0.0; n.pow(degree as u32)] }
    }

    /// Degree-0 form (a scalar).
    pub fn scalar(n: usize, value: f64) -> Self {
        KForm { n, degree: 0, comps: vec![value] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn comps(&self) -> &[f64] {
        &self.comps
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.comps[tuple_index(self.n, idx)]
    }

    pub fn scale(&self, s: f64) -> KForm {
        KForm {
            n: self.n,
            degree: self.degree,
            comps: self.comps.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &KForm) -> KForm {
        assert_eq!((self.n, self.degree), (other.n, other.degree));
        KForm {
            n: self.n,
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.scale(-1.0))
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.comps)
    }

    pub fn max_abs_diff(&self, other: &KForm) -> f64 {
        self.sub(other).max_abs()
    }

    /// Full evaluation on `degree` vectors.
    pub fn eval(&self, vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        self.contract_front(vectors).comps[0]
    }

    /// Partial evaluation in the leading slots, returning a form of degree
    /// `degree - vectors.len()`.
    pub fn contract_front(&self, vectors: &[&[f64]]) -> KForm {
        let r = vectors.len();
        assert!(r <= self.degree);
        let mut comps = self.comps.clone();
        let mut deg = self.degree;
        for v in vectors {
            assert_eq!(v.len(), self.n);
            let tail = self.n.pow((deg - 1) as u32);
            let mut next = vec![0.0; tail];
            for i in 0..self.n {
                let vi = v[i];
                if vi == 0.0 {
                    continue;
                }
                for t in 0..tail {
                    next[t] += vi * comps[i * tail + t];
                }
            }
            comps = next;
            deg -= 1;
        }
        KForm { n: self.n, degree: deg, comps }
    }

    /// Wedge product with the determinant normalization
    /// (`(a ^ b)(U,V) = a(U) b(V) - a(V) b(U)` for 1-forms).
    pub fn wedge(&self, other: &KForm) -> KForm {
        assert_eq!(self.n, other.n);
        let q = self.degree;
        let r = other.degree;
        assert!(q + r <= self.n, "wedge degree exceeds dimension");
        let perms = permutations(q + r);
        let qf: f64 = (1..=q).map(|k| k as f64).product::<f64>().max(1.0);
        let rf: f64 = (1..=r).map(|k| k as f64).product::<f64>().max(1.0);
        let mut comps = vec![0.0; self.n.pow((q + r) as u32)];
        for_each_tuple(self.n, q + r, |idx| {
            let mut acc = 0.0;
            for (perm, sign) in &perms {
                let left: Vec<usize> = perm[..q].iter().map(|&p| idx[p]).collect();
                let right: Vec<usize> = perm[q..].iter().map(|&p| idx[p]).collect();
                acc += sign
                    * self.comps[tuple_index(self.n, &left)]
                    * other.comps[tuple_index(self.n, &right)];
            }
            comps[tuple_index(self.n, idx)] = acc / (qf * rf);
        });
        KForm { n: self.n, degree: q + r, comps }
    }

    /// Raises every index with the contravariant metric.
    fn raise_all(&self, g: &Metric) -> Vec<f64> {
        let n = self.n;
        let mut cur = self.comps.clone();
        for slot in 0..self.degree {
            let mut next = vec![0.0; cur.len()];
            let stride = n.pow((self.degree - 1 - slot) as u32);
            let outer = n.pow(slot as u32);
            for o in 0..outer {
                for t in 0..stride {
                    for new_i in 0..n {
                        let mut acc = 0.0;
                        for old_i in 0..n {
                            acc += g.inverse()[(new_i, old_i)]
                                * cur[(o * n + old_i) * stride + t];
                        }
                        next[(o * n + new_i) * stride + t] = acc;
                    }
                }
            }
            cur = next;
        }
        cur
    }
}

/// Induced scalar product of `q`-forms:
/// `G_q(A,B) = (1/q!) G^{i1 j1} .. G^{iq jq} A_{i..} B_{j..}`.
pub fn form_inner(a: &KForm, b: &KForm, g: &Metric) -> f64 {
    assert_eq!(a.degree, b.degree);
    assert_eq!(a.n, g.dim());
    assert_eq!(b.n, g.dim());
    let raised = a.raise_all(g);
    let qf: f64 = (1..=a.degree).map(|k| k as f64).product::<f64>().max(1.0);
    linalg::dot(&raised, &b.comps) / qf
}

/// Volume form `orientation * sqrt(|det G|) * epsilon`; evaluates to 1 on a
/// positively-oriented orthonormal basis.
pub fn volume_form(g: &Metric) -> KForm {
    let n = g.dim();
    let s = g.orientation() * libm::sqrt(libm::fabs(g.det()));
    let mut comps = vec![0.0; n.pow(n as u32)];
    for (perm, sign) in permutations(n) {
        comps[tuple_index(n, &perm)] = s * sign;
    }
    KForm { n, degree: n, comps }
}

/// Vector product of `n-1` vectors: the unique `J` with
/// `J* U = vol(U, V1, .., V_{n-1})` for every `U`.
///
/// Returns the zero vector exactly when the arguments are linearly dependent.
pub fn vector_product(vs: &[&[f64]], g: &Metric) -> Vec<f64> {
    let n = g.dim();
    assert_eq!(vs.len(), n - 1, "vector product takes n-1 vectors");
    for v in vs {
        assert_eq!(v.len(), n);
    }
    let s = g.orientation() * libm::sqrt(libm::fabs(g.det()));
    // J_cov[j] = vol_{j, i1..i_{n-1}} V1^{i1} .. V_{n-1}^{i_{n-1}}
    let mut cov = vec![0.0; n];
    for (perm, sign) in permutations(n) {
        let mut prod = s * sign;
        for (k, v) in vs.iter().enumerate() {
            prod *= v[perm[k + 1]];
            if prod == 0.0 {
                break;
            }
        }
        cov[perm[0]] += prod;
    }
    g.raise(&cov)
}

/// The linear map `V -> J(V1, .., V_{n-2}, V)` as an `n x n` matrix.
/// Skew-adjoint with respect to `g`.
pub fn vector_product_map(vs: &[&[f64]], g: &Metric) -> Matrix {
    let n = g.dim();
    assert_eq!(vs.len(), n - 2, "vector product map takes n-2 vectors");
    let mut m = Matrix::zeros(n, n);
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        let mut args: Vec<&[f64]> = vs.to_vec();
        args.push(&e);
        let col = vector_product(&args, g);
        for i in 0..n {
            m[(i, k)] = col[i];
        }
    }
    m
}

/// Vector product in dimension `n+1` computed recursively from dimension `n`.
///
/// Each argument is split as `(V_i, v_i)` with `V_i` in the lower space. The
/// full metric must be block diagonal `diag(G_low, g55)` with `g55 != 0`; the
/// recursion then agrees with [`vector_product`] on the full metric. (The
/// scale factor `sqrt(|g55|)` matters only when the extra diagonal entry is
/// not unit-sized.)
pub fn vector_product_recursive(
    split: &[(&[f64], f64)],
    g_low: &Metric,
    g_full: &Metric,
) -> Result<Vec<f64>> {
    let n = g_low.dim();
    if g_full.dim() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, got: g_full.dim() });
    }
    if split.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: split.len() });
    }
    // block-diagonal consistency
    let mut worst = g_full.gram().block(0, 0, n, n).max_abs_diff(g_low.gram());
    for i in 0..n {
        worst = linalg::fmax(worst, libm::fabs(g_full.gram()[(i, n)]));
        worst = linalg::fmax(worst, libm::fabs(g_full.gram()[(n, i)]));
    }
    if worst > GRAM_SYM_TOL * linalg::fmax(1.0, g_full.gram().max_abs()) {
        return Err(Error::MembershipViolated("full metric is not diag(G_low, g55)"));
    }
    let g55 = g_full.gram()[(n, n)];
    let root = libm::sqrt(libm::fabs(g55));
    let orient_ratio = g_full.orientation() * g_low.orientation();

    let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut upper = vec![0.0; n];
    for k in 0..n {
        let vk = split[k].1;
        if vk == 0.0 {
            continue;
        }
        let rest: Vec<&[f64]> = split
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, (v, _))| *v)
            .collect();
        let jk = vector_product(&rest, g_low);
        // (-1)^{n+k} with 1-based k
        let sgn = if (n + k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        for i in 0..n {
            upper[i] += sgn * vk * jk[i];
        }
    }
    let lowers: Vec<&[f64]> = split.iter().map(|(v, _)| *v).collect();
    let vol_low = volume_form(g_low).eval(&lowers);

    let mut out = vec![0.0; n + 1];
    for i in 0..n {
        out[i] = orient_ratio * root * upper[i];
    }
    out[n] = orient_ratio * root * sign_n * vol_low / g55;
    Ok(out)
}

/// Hodge operator: maps a `q`-form to the `(n-q)`-form
/// `(*A)(V1..V_{n-q}) = (-1)^{q(n-q)} G_q(A, vol(V1..V_{n-q}))`.
pub fn hodge(a: &KForm, g: &Metric) -> Result<KForm> {
    let n = g.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
    }
    let q = a.degree();
    let p = n - q;
    let vol = volume_form(g);
    let raised = a.raise_all(g);
    let qf: f64 = (1..=q).map(|k| k as f64).product::<f64>().max(1.0);
    let sign = if (q * p) % 2 == 0 { 1.0 } else { -1.0 };
    let mut comps = vec![0.0; n.pow(p as u32)];
    let tail = n.pow(q as u32);
    for_each_tuple(n, p, |kidx| {
        // B_{l..} = vol_{k.., l..}: slice of the dense volume components
        let base = tuple_index(n, kidx) * tail;
        let mut acc = 0.0;
        for t in 0..tail {
            acc += raised[t] * vol.comps[base + t];
        }
        comps[tuple_index(n, kidx)] = sign * acc / qf;
    });
    Ok(KForm { n, degree: p, comps })
}

/// The 2-form `A_M = G M` identified with a skew-adjoint map `M`
/// (`A_M(U,V) = U* M V`).
pub fn form_of_map(m: &Matrix, g: &Metric) -> KForm {
    let n = g.dim();
    let a = g.gram().mul(m);
    let mut comps = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            comps[i * n + j] = a[(i, j)];
        }
    }
    KForm { n, degree: 2, comps }
}

/// Inverse identification: the skew-adjoint map of a 2-form, `M = G^-1 A`.
pub fn map_of_form(a: &KForm, g: &Metric) -> Matrix {
    let n = g.dim();
    assert_eq!(a.degree(), 2);
    let amat = Matrix::from_fn(n, n, |i, j| a.comps[i * n + j]);
    g.inverse().mul(&amat)
}

/// `*M`: the skew-adjoint map identified with the Hodge dual of `A_M`
/// (defined for `n = 4`, where `*A_M` is again a 2-form).
pub fn hodge_map(m: &Matrix, g: &Metric) -> Result<Matrix> {
    if g.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: g.dim() });
    }
    Ok(map_of_form(&hodge(&form_of_map(m, g), g)?, g))
}

/// True when the given vectors are linearly independent (SVD rank with
/// relative tolerance [`RANK_REL_TOL`]).
pub fn linearly_independent(vs: &[&[f64]]) -> bool {
    if vs.is_empty() {
        return true;
    }
    let m = Matrix::from_fn(vs[0].len(), vs.len(), |i, j| vs[j][i]);
    m.rank(RANK_REL_TOL) == vs.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        v
    }

    #[test]
    fn metric_rejects_asymmetric_and_degenerate() {
        let mut g = Matrix::identity(3);
        g[(0, 1)] = 1e-3;
        assert_eq!(Metric::new(g, 1.0).unwrap_err(), Error::AsymmetricGram);
        let d = Matrix::diag(&[1.0, 1.0, 0.0]);
        assert!(matches!(Metric::new(d, 1.0), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn minkowski_signature() {
        let g = Metric::minkowski();
        assert_eq!(g.signature(), (1, 3));
        assert_eq!(
            Metric::with_signature(Matrix::diag(&[1.0, -1.0, -1.0, -1.0]), 1.0, (2, 2))
                .unwrap_err(),
            Error::SignatureMismatch { declared: (2, 2), computed: (1, 3) }
        );
    }

    #[test]
    fn adjoint_identity_and_lowering() {
        let g = Metric::minkowski();
        let id = Matrix::identity(4);
        let a = adjoint_map(&id, &g, &g).unwrap();
        assert!(a.max_abs_diff(&id) < 1e-15);
        // column-vector case degenerates to index lowering U* = U^T G
        let u = [2.0, 1.0, -0.5, 3.0];
        let ucol = Matrix::from_fn(4, 1, |i, _| u[i]);
        let lowered = g.lower(&u);
        let ustar = g.gram().mul(&ucol).transpose();
        for j in 0..4 {
            assert!((ustar[(0, j)] - lowered[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn volume_form_orthonormal_values() {
        let g4 = Metric::minkowski();
        let vol4 = volume_form(&g4);
        assert_eq!(vol4.get(&[0, 1, 2, 3]), 1.0);
        let g5 = Metric::hat_omega(0.5).unwrap();
        let vol5 = volume_form(&g5);
        assert!((vol5.get(&[0, 1, 2, 3, 4]) - 0.5).abs() < 1e-15);
        let g3 = Metric::euclidean(3);
        let v = volume_form(&g3);
        assert!((v.eval(&[&e(3, 0), &e(3, 1), &e(3, 2)]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cross_product_in_3d() {
        let g = Metric::euclidean(3);
        let j = vector_product(&[&e(3, 0), &e(3, 1)], &g);
        assert!(linalg::max_abs_diff(&j, &e(3, 2)) < 1e-15);
    }

    #[test]
    fn minkowski_spatial_triple() {
        // Pi_k = (0, e_k) for k = 1..3 -> (1, 0, 0, 0)
        let g = Metric::minkowski();
        let p1 = [0.0, 1.0, 0.0, 0.0];
        let p2 = [0.0, 0.0, 1.0, 0.0];
        let p3 = [0.0, 0.0, 0.0, 1.0];
        let j = vector_product(&[&p1, &p2, &p3], &g);
        assert!(linalg::max_abs_diff(&j, &[1.0, 0.0, 0.0, 0.0]) < 1e-15);
    }

    #[test]
    fn dependent_arguments_give_zero() {
        let g = Metric::minkowski();
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [2.0, 4.0, 6.0, 8.0];
        let c = [0.0, 1.0, 0.0, 1.0];
        let j = vector_product(&[&a, &b, &c], &g);
        assert!(linalg::max_abs(&j) < 1e-14);
        assert!(!linearly_independent(&[&a, &b, &c]));
        assert!(linearly_independent(&[&a, &c]));
    }

    #[test]
    fn antisymmetrized_projection() {
        // T_{ij} = i*j symmetric -> antisymmetric part zero
        let mut comps = vec![0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                comps[i * 4 + j] = (i * j) as f64;
            }
        }
        let a = KForm::antisymmetrized(4, 2, &comps).unwrap();
        assert!(a.max_abs() < 1e-15);
        // explicit antisymmetry rejection
        assert!(KForm::new(4, 2, comps).is_err());
    }

    #[test]
    fn hodge_of_scalar_and_volume() {
        let g = Metric::minkowski();
        let one = KForm::scalar(4, 1.0);
        let h = hodge(&one, &g).unwrap();
        assert!(h.max_abs_diff(&volume_form(&g)) < 1e-14);
        // *vol = (-1)^{n-p} as a scalar; n = 4, p = 1
        let hv = hodge(&volume_form(&g), &g).unwrap();
        assert_eq!(hv.degree(), 0);
        assert!((hv.comps()[0] - (-1.0)).abs() < 1e-14);
    }
}
