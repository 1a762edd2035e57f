//! Euclidean projection onto the cone of discrete support vectors
//! `{h : h_{i-1} + h_{i+1} - 2 cos(2 pi / n) h_i >= 0 for all i}`.
//!
//! Two solvers share one interface. [`Method::Dykstra`] runs cyclic
//! Dykstra sweeps over the `n` halfspaces; since every halfspace passes
//! through the origin the correction terms are multiples of the constraint
//! normals and the sweep reduces to coordinate ascent on the dual. The
//! constraint matrix has the two sinusoids in its null space, so its
//! smallest non-zero eigenvalue is of order `n^-2` and the sweeps need on
//! the order of `n^4` cycles on unfavorable inputs. [`Method::InteriorPoint`]
//! (the default) is a primal-dual Mehrotra method whose Newton systems are
//! cyclic pentadiagonal and cost `O(n)` each.
//!
//! [`project_oracle`] enumerates active sets exhaustively for `n <= 16`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cyclic_residuals, GridSpec, SupportVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dykstra,
    #[default]
    InteriorPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOptions {
    pub method: Method,
    /// Dykstra: largest coordinate change over one full cycle.
    /// Interior point: bound on the scaled residuals and the duality measure.
    pub tol: f64,
    /// Dykstra cycles or interior-point iterations. `None` picks `10 n^4`
    /// cycles for Dykstra (random inputs at `n = 16` already need about
    /// `3 * 10^4`) and 200 iterations for the interior-point method.
    pub max_iter: Option<usize>,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions { method: Method::default(), tol: 1e-10, max_iter: None }
    }
}

impl ProjectionOptions {
    pub fn dykstra() -> Self {
        ProjectionOptions { method: Method::Dykstra, ..Self::default() }
    }

    pub fn with_max_iter(self, max_iter: usize) -> Self {
        ProjectionOptions { max_iter: Some(max_iter), ..self }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        ProjectionOptions { tol, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionResult {
    pub projected: Vec<f64>,
    pub iterations: usize,
    /// Largest constraint violation `max(0, -min residual)` of `projected`.
    pub residual: f64,
    /// `||v - projected||_2`
    pub distance: f64,
    pub converged: bool,
}

impl ProjectionResult {
    /// Wraps the projection as a support vector, accepting violations up to
    /// `1e-9` times the data scale.
    pub fn support_vector(&self, grid: &GridSpec) -> Result<SupportVector> {
        let scale = self.projected.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        SupportVector::new(self.projected.clone(), grid, crate::geometry::RESIDUAL_TOLERANCE * scale)
    }

    /// Turns a non-converged result into [`Error::NotConverged`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged { iterations: self.iterations, residual: self.residual })
        }
    }
}

/// Smallest length for which the cyclic stencil has no self-overlap.
pub const MIN_LENGTH: usize = 5;

fn check_input(v: &[f64]) -> Result<()> {
    if v.len() < MIN_LENGTH {
        return Err(Error::InvalidInput(format!(
            "projection needs at least {MIN_LENGTH} coordinates, got {}",
            v.len()
        )));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite coordinate {x}")));
    }
    Ok(())
}

fn cos_step(n: usize) -> f64 {
    (2.0 * std::f64::consts::PI / n as f64).cos()
}

fn violation(h: &[f64], c: f64) -> f64 {
    cyclic_residuals(h, c).into_iter().fold(0.0, |m, r| m.max(-r))
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn finish(v: &[f64], projected: Vec<f64>, iterations: usize, converged: bool) -> ProjectionResult {
    let c = cos_step(v.len());
    ProjectionResult {
        residual: violation(&projected, c),
        distance: distance(v, &projected),
        projected,
        iterations,
        converged,
    }
}

/// `true` iff every cyclic residual of `v` is at least `-tol`.
pub fn membership(v: &[f64], tol: f64) -> bool {
    v.len() >= MIN_LENGTH && cyclic_residuals(v, cos_step(v.len())).iter().all(|&r| r >= -tol)
}

/// Projects `v` (length `n >= 5`) onto the cone. Non-convergence is reported
/// through [`ProjectionResult::converged`], not as an error.
pub fn project(v: &[f64], options: &ProjectionOptions) -> Result<ProjectionResult> {
    check_input(v)?;
    if !(options.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {}", options.tol)));
    }
    match options.method {
        Method::Dykstra => {
            let default = 10usize.saturating_mul(v.len().saturating_pow(4));
            Ok(dykstra(v, options.tol, options.max_iter.unwrap_or(default)))
        }
        Method::InteriorPoint => Ok(interior_point(v, options.tol, options.max_iter.unwrap_or(200))),
    }
}

fn dykstra(v: &[f64], tol: f64, max_cycles: usize) -> ProjectionResult {
    let n = v.len();
    let c = cos_step(n);
    let norm2 = 2.0 + 4.0 * c * c;
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut h = v.to_vec();
    // h = v + sum_i mu_i a_i with mu >= 0; mu_i is the Dykstra correction
    // for halfspace i expressed along its normal a_i.
    let mut mu = vec![0.0; n];
    for cycle in 1..=max_cycles {
        let mut change = 0.0f64;
        for i in 0..n {
            let (p, q) = ((i + n - 1) % n, (i + 1) % n);
            let r = h[p] + h[q] - 2.0 * c * h[i];
            let next = (mu[i] - r / norm2).max(0.0);
            let d = next - mu[i];
            if d != 0.0 {
                mu[i] = next;
                h[p] += d;
                h[q] += d;
                h[i] -= 2.0 * c * d;
                change = change.max(d.abs() * (2.0 * c).max(1.0));
            }
        }
        if change <= tol * scale.max(f64::MIN_POSITIVE) {
            return finish(v, h, cycle, true);
        }
    }
    finish(v, h, max_cycles, false)
}

/// `y = A x` for the symmetric circulant stencil `(1, -2c, 1)`.
fn apply(x: &[f64], c: f64, y: &mut [f64]) {
    let n = x.len();
    for i in 0..n {
        y[i] = x[(i + n - 1) % n] + x[(i + 1) % n] - 2.0 * c * x[i];
    }
}

/// Symmetric positive definite matrix whose only non-zeros lie within
/// cyclic distance 2 of the diagonal. The last two unknowns are treated as a
/// border; the remaining block is banded and factored by Cholesky.
struct CyclicPentadiagonal {
    n: usize,
    // Cholesky factor of the leading (n-2) block: l0 diagonal, l1 and l2
    // the first and second sub-diagonals.
    l0: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
    // Coupling columns C, B^{-1} C and the 2x2 Schur complement.
    c_cols: [Vec<f64>; 2],
    x_cols: [Vec<f64>; 2],
    schur: [[f64; 2]; 2],
}

impl CyclicPentadiagonal {
    /// `diag[i] = M(i,i)`, `off1[i] = M(i,i+1)`, `off2[i] = M(i,i+2)`, all
    /// indices mod `n`, `n >= 5`. Returns `None` if a pivot is not
    /// clearly positive.
    fn from_bands(diag: &[f64], off1: &[f64], off2: &[f64], min_pivot: f64) -> Option<Self> {
        let n = diag.len();
        let m = n - 2;
        let (mut l0, mut l1, mut l2) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for i in 0..m {
            if i >= 2 {
                l2[i] = off2[i - 2] / l0[i - 2];
            }
            if i >= 1 {
                let corr = if i >= 2 { l2[i] * l1[i - 1] } else { 0.0 };
                l1[i] = (off1[i - 1] - corr) / l0[i - 1];
            }
            let pivot = diag[i] - l1[i] * l1[i] - l2[i] * l2[i];
            if !(pivot > min_pivot * diag[i]) {
                return None;
            }
            l0[i] = pivot.sqrt();
        }

        // Column for border unknown j holds M(i, j) for i < n-2.
        let mut c_cols = [vec![0.0; m], vec![0.0; m]];
        for (col, j) in [n - 2, n - 1].into_iter().enumerate() {
            for (i, entry) in c_cols[col].iter_mut().enumerate() {
                *entry = match ((j + n - i) % n, (i + n - j) % n) {
                    (1, _) => off1[i],
                    (2, _) => off2[i],
                    (_, 1) => off1[j],
                    (_, 2) => off2[j],
                    _ => 0.0,
                };
            }
        }
        let mut this = CyclicPentadiagonal {
            n,
            l0,
            l1,
            l2,
            c_cols,
            x_cols: [Vec::new(), Vec::new()],
            schur: [[0.0; 2]; 2],
        };
        let x0 = this.band_solve(&this.c_cols[0]);
        let x1 = this.band_solve(&this.c_cols[1]);
        let e01 = off1[n - 2];
        this.schur = [
            [diag[n - 2] - dot(&this.c_cols[0], &x0), e01 - dot(&this.c_cols[0], &x1)],
            [e01 - dot(&this.c_cols[1], &x0), diag[n - 1] - dot(&this.c_cols[1], &x1)],
        ];
        let [[a, b], [_, d]] = this.schur;
        if !(a > min_pivot * diag[n - 2] && a * d - b * b > min_pivot * a * diag[n - 1]) {
            return None;
        }
        this.x_cols = [x0, x1];
        Some(this)
    }

    /// `A A + diag(e) + shift I`; `None` if rounding destroys a pivot.
    fn dual_normal(e: &[f64], c: f64, shift: f64) -> Option<Self> {
        let n = e.len();
        let diag: Vec<f64> = e.iter().map(|x| 2.0 + 4.0 * c * c + x + shift).collect();
        Self::from_bands(&diag, &vec![-4.0 * c; n], &vec![1.0; n], f64::EPSILON)
    }

    fn band_solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.l0.len();
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut s = b[i];
            if i >= 1 {
                s -= self.l1[i] * y[i - 1];
            }
            if i >= 2 {
                s -= self.l2[i] * y[i - 2];
            }
            y[i] = s / self.l0[i];
        }
        for i in (0..m).rev() {
            let mut s = y[i];
            if i + 1 < m {
                s -= self.l1[i + 1] * y[i + 1];
            }
            if i + 2 < m {
                s -= self.l2[i + 2] * y[i + 2];
            }
            y[i] = s / self.l0[i];
        }
        y
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.n - 2;
        let y = self.band_solve(&b[..m]);
        let r0 = b[m] - dot(&self.c_cols[0], &y);
        let r1 = b[m + 1] - dot(&self.c_cols[1], &y);
        let [[a, bb], [cc, dd]] = self.schur;
        let det = a * dd - bb * cc;
        let t0 = (dd * r0 - bb * r1) / det;
        let t1 = (a * r1 - cc * r0) / det;
        let mut x = y;
        for i in 0..m {
            x[i] -= self.x_cols[0][i] * t0 + self.x_cols[1][i] * t1;
        }
        x.push(t0);
        x.push(t1);
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense Cholesky solve for the tiny Gram systems of the polish step.
fn dense_spd_solve(mut g: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    for j in 0..m {
        let scale = g[j][j];
        for k in 0..j {
            g[j][j] -= g[j][k] * g[j][k];
        }
        if !(g[j][j] > 1e-12 * scale) {
            return None;
        }
        g[j][j] = g[j][j].sqrt();
        for i in j + 1..m {
            for k in 0..j {
                g[i][j] -= g[i][k] * g[j][k];
            }
            g[i][j] /= g[j][j];
        }
    }
    for i in 0..m {
        for k in 0..i {
            b[i] -= g[i][k] * b[k];
        }
        b[i] /= g[i][i];
    }
    for i in (0..m).rev() {
        for k in i + 1..m {
            b[i] -= g[k][i] * b[k];
        }
        b[i] /= g[i][i];
    }
    Some(b)
}

/// Sinusoids `q` with `A q = 0` that vanish off `active`, plus rows that can
/// be dropped from `active` without changing its span. The rows of an
/// active set are dependent exactly when its complement is empty, a single
/// index, or an antipodal pair.
fn dependent_rows(n: usize, active: &[usize]) -> (Vec<Vec<f64>>, Vec<usize>) {
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let mut inactive = (0..n).filter(|i| active.binary_search(i).is_err());
    let wave = |i: usize| -> Vec<f64> { (0..n).map(|j| (step * (j as f64 - i as f64)).sin()).collect() };
    match (inactive.next(), inactive.next(), inactive.next()) {
        (None, _, _) => {
            let cos = (0..n).map(|j| (step * j as f64).cos()).collect();
            let sin = (0..n).map(|j| (step * j as f64).sin()).collect();
            (vec![cos, sin], vec![0, 1])
        }
        (Some(i), None, _) => (vec![wave(i)], vec![(i + 1) % n]),
        (Some(i), Some(j), None) if 2 * (j - i) == n => (vec![wave(i)], vec![(i + 1) % n]),
        _ => (Vec::new(), Vec::new()),
    }
}

/// Least-squares shift of `lambda` along `null` towards `target`.
fn fit_null(lambda: &mut [f64], null: &[Vec<f64>], target: &[f64]) {
    let r: Vec<f64> = target.iter().zip(lambda.iter()).map(|(t, l)| t - l).collect();
    let t = match null {
        [] => return,
        [q] => vec![dot(q, &r) / dot(q, q)],
        [p, q] => {
            let (a, b, d) = (dot(p, p), dot(p, q), dot(q, q));
            let (x, y) = (dot(p, &r), dot(q, &r));
            let det = a * d - b * b;
            vec![(d * x - b * y) / det, (a * y - b * x) / det]
        }
        _ => unreachable!("the null space of the stencil is two-dimensional"),
    };
    for (q, tk) in null.iter().zip(&t) {
        lambda.iter_mut().zip(q).for_each(|(l, qi)| *l += tk * qi);
    }
}

/// Solves `(A A)_{SS} x_S = rhs_S` for a sorted index set `S`, returning
/// `x` on all `n` slots (zero off `S`). Rows dependent on the others are
/// dropped (their `x` is zero); also returns the sinusoids spanning the
/// null space of the block.
fn gram_solve(rhs: &[f64], set: &[usize], c: f64) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = rhs.len();
    let (null, dropped) = dependent_rows(n, set);
    let kept: Vec<usize> = set.iter().copied().filter(|i| !dropped.contains(i)).collect();
    let m = kept.len();
    // Gram matrix entries (A A)_{ij} depend only on the cyclic distance.
    let gram = |p: usize, q: usize| {
        let gap = (kept[q] + n - kept[p]) % n;
        match gap.min(n - gap) {
            0 => 2.0 + 4.0 * c * c,
            1 => -4.0 * c,
            2 => 1.0,
            _ => 0.0,
        }
    };
    let b: Vec<f64> = kept.iter().map(|&i| rhs[i]).collect();
    let reduced = if m >= MIN_LENGTH {
        let diag: Vec<f64> = (0..m).map(|p| gram(p, p)).collect();
        let off1: Vec<f64> = (0..m).map(|p| gram(p, (p + 1) % m)).collect();
        let off2: Vec<f64> = (0..m).map(|p| gram(p, (p + 2) % m)).collect();
        CyclicPentadiagonal::from_bands(&diag, &off1, &off2, 1e-12)?.solve(&b)
    } else {
        let g = (0..m).map(|p| (0..m).map(|q| gram(p, q)).collect()).collect();
        dense_spd_solve(g, b)?
    };
    let mut x = vec![0.0; n];
    for (&i, v) in kept.iter().zip(&reduced) {
        x[i] = *v;
    }
    Some((x, null))
}

/// Exact projection onto `{h : a_i . h = 0, i in active}` (sorted
/// indices), with multipliers `lambda` such that `h = w + A lambda` and the
/// residuals `A h`. `dual` picks `lambda` when it is not unique.
type Candidate = (Vec<f64>, Vec<f64>, Vec<f64>);

fn equality_projection(w: &[f64], active: &[usize], dual: &[f64], c: f64) -> Option<Candidate> {
    let n = w.len();
    let mut h = w.to_vec();
    let mut lambda = vec![0.0; n];
    let mut ah = vec![0.0; n];
    let mut step = vec![0.0; n];
    let mut null = Vec::new();
    // The first pass leaves residuals of order eps ||lambda|| on the active
    // set, which can be large next to the tolerance; re-projecting the
    // result removes them.
    for _ in 0..EQUALITY_PASSES {
        apply(&h, c, &mut ah);
        ah.iter_mut().for_each(|x| *x = -*x);
        let (delta, basis) = gram_solve(&ah, active, c)?;
        apply(&delta, c, &mut step);
        h.iter_mut().zip(&step).for_each(|(x, d)| *x += d);
        lambda.iter_mut().zip(&delta).for_each(|(l, d)| *l += d);
        null = basis;
    }
    fit_null(&mut lambda, &null, dual);
    if let Some(span) = small_complement_span(n, active) {
        h = project_span(w, &span);
    }
    apply(&h, c, &mut ah);
    Some((h, lambda, ah))
}

/// Orthogonal basis of `{h : a_i . h = 0, i in active}` when at most two
/// constraints are inactive. Then `A h` may only be non-zero on the
/// inactive indices and must be orthogonal to both sinusoids, which leaves
/// the sinusoids themselves plus, for an antipodal pair `t, t + n/2`, the
/// function `|sin(2 pi (i - t) / n)|`.
fn small_complement_span(n: usize, active: &[usize]) -> Option<Vec<Vec<f64>>> {
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let mut inactive = (0..n).filter(|i| active.binary_search(i).is_err());
    let (first, second, third) = (inactive.next(), inactive.next(), inactive.next());
    if third.is_some() {
        return None;
    }
    let mut span: Vec<Vec<f64>> = vec![
        (0..n).map(|j| (step * j as f64).cos()).collect(),
        (0..n).map(|j| (step * j as f64).sin()).collect(),
    ];
    if let (Some(i), Some(j)) = (first, second) {
        if 2 * (j - i) == n {
            let mut kink: Vec<f64> = (0..n).map(|k| (step * (k as f64 - i as f64)).sin().abs()).collect();
            for q in &span {
                let p = dot(q, &kink) / dot(q, q);
                kink.iter_mut().zip(q).for_each(|(x, y)| *x -= p * y);
            }
            span.push(kink);
        }
    }
    Some(span)
}

/// Projection of `w` onto the span of mutually orthogonal vectors.
fn project_span(w: &[f64], span: &[Vec<f64>]) -> Vec<f64> {
    let mut h = vec![0.0; w.len()];
    for q in span {
        let p = dot(q, w) / dot(q, q);
        h.iter_mut().zip(q).for_each(|(x, y)| *x += p * y);
    }
    h
}

/// Primal-dual active-set refinement starting from `guess`.
///
/// A candidate is accepted only with a certificate: it must be feasible to
/// `tol` and its multipliers must satisfy `4 ||min(lambda, 0)||_2 <= tol`.
/// Such an `h` is the exact projection of a point within `tol` of `w`
/// (since `||A|| <= 4`), hence within `tol` of the projection of `w`.
/// Otherwise constraints with negative multipliers are released, violated
/// ones are added, and the solve is repeated a few times.
fn polish(w: &[f64], guess: Vec<usize>, dual: &[f64], c: f64, tol: f64) -> Option<Vec<f64>> {
    let n = w.len();
    let mut active = guess;
    for _ in 0..POLISH_ROUNDS {
        let (h, lambda, ah) = equality_projection(w, &active, dual, c)?;
        let negative = lambda.iter().map(|l| l.min(0.0).powi(2)).sum::<f64>().sqrt();
        if 4.0 * negative <= tol && ah.iter().all(|&r| r >= -tol) {
            return Some(h);
        }
        let next: Vec<usize> = (0..n)
            .filter(|&i| {
                if active.binary_search(&i).is_ok() {
                    lambda[i] >= 0.0
                } else {
                    ah[i] < 0.0
                }
            })
            .collect();
        if next == active {
            return None;
        }
        active = next;
    }
    None
}

fn max_step(x: &[f64], dx: &[f64]) -> f64 {
    x.iter()
        .zip(dx)
        .filter(|(_, d)| **d < 0.0)
        .map(|(x, d)| -x / d)
        .fold(f64::INFINITY, f64::min)
}

/// Duality measure, relative to the starting one, below which the active
/// set is guessed from the predictor and the equality-constrained
/// projection is tried.
const POLISH_GAP: f64 = 1e-6;
/// Factor by which the duality measure must drop before a failed guess is
/// tried again.
const RETRY_GAP: f64 = 1e-3;
const POLISH_ROUNDS: usize = 6;
const STALL_ITERATIONS: usize = 20;
const EQUALITY_PASSES: usize = 3;
/// Diagonal shift, relative to the diagonal of `A A`, for the retry when
/// the Newton matrix is numerically singular (nearly every constraint
/// active with a vanishing slack-to-multiplier ratio).
const REGULARIZATION: f64 = 1e-13;

/// Mehrotra predictor-corrector on `min ||h - v||^2 / 2` subject to
/// `A h = s`, `s >= 0`, with multipliers `z >= 0`. The data are scaled to
/// unit sup-norm first.
///
/// Each Newton step eliminates `h` and `s` and solves for `dz` with
/// `A A + diag(s / z)`, which stays O(1) in size while `z / s` ranges over
/// many orders of magnitude; the dual residual `h - w - A z` is then
/// reproduced exactly by the update. The start balances `s` and `z`
/// against the mean residual of the input.
///
/// The duality gap stalls near rounding level, well before the accuracy
/// the certificate needs, and degenerate inputs (active constraints with
/// zero multiplier) only converge linearly. So once the gap is small the
/// method switches to an exact solve on the active set guessed from the
/// predictor step.
fn interior_point(v: &[f64], tol: f64, max_iter: usize) -> ProjectionResult {
    let n = v.len();
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return finish(v, vec![0.0; n], 0, true);
    }
    let c = cos_step(n);
    let w: Vec<f64> = v.iter().map(|x| x / scale).collect();
    let unscale = |h: &[f64]| h.iter().map(|x| x * scale).collect::<Vec<f64>>();

    let mut ah = vec![0.0; n];
    apply(&w, c, &mut ah);
    let spread = ah.iter().map(|r| r.abs()).sum::<f64>() / n as f64;
    if spread == 0.0 {
        // `w` lies in the null space of `A`, hence in the cone.
        return finish(v, v.to_vec(), 0, true);
    }
    let mut h = w.clone();
    let mut s: Vec<f64> = ah.iter().map(|r| r.max(0.0) + spread).collect();
    let mut z = vec![1.0 / spread; n];
    let mu0 = dot(&s, &z) / n as f64;
    let shift = REGULARIZATION * (2.0 + 4.0 * c * c);

    let mut az = vec![0.0; n];
    let mut buf = vec![0.0; n];
    // Iterate with the smallest gap, returned if the method stalls.
    let mut best = (f64::INFINITY, 0, h.clone());
    // Last guessed active set and the duality measure when it was tried.
    let mut tried: (Vec<usize>, f64) = (Vec::new(), f64::INFINITY);
    let mut iterations = 0;

    while iterations < max_iter {
        apply(&z, c, &mut az);
        apply(&h, c, &mut ah);
        let rd: Vec<f64> = (0..n).map(|i| h[i] - w[i] - az[i]).collect();
        let rp: Vec<f64> = (0..n).map(|i| ah[i] - s[i]).collect();
        let mu = dot(&s, &z) / n as f64;
        // For any z >= 0, ||h - h*||^2 <= 2 (f(h) - g(z)) and the gap
        // f(h) - g(z) equals s.z + z.r_p + ||r_d||^2 / 2.
        let gap = n as f64 * mu + dot(&z, &rp).abs() + 0.5 * dot(&rd, &rd);
        if 2.0 * gap <= tol * tol {
            return finish(v, unscale(&h), iterations, true);
        }
        if gap < best.0 {
            best = (gap, iterations, h.clone());
        } else if iterations - best.1 > STALL_ITERATIONS {
            break;
        }

        let e: Vec<f64> = (0..n).map(|i| s[i] / z[i]).collect();
        let Some(system) =
            CyclicPentadiagonal::dual_normal(&e, c, 0.0).or_else(|| CyclicPentadiagonal::dual_normal(&e, c, shift))
        else {
            break;
        };
        let minus_rd: Vec<f64> = rd.iter().map(|x| -x).collect();
        let mut a_rd = vec![0.0; n];
        apply(&minus_rd, c, &mut a_rd);
        // Returns (dh, ds, dz) for the complementarity target rc = s dz + z ds.
        let mut newton = |rc: &[f64]| {
            let rhs: Vec<f64> = (0..n).map(|i| a_rd[i] - rc[i] / z[i] + rp[i]).collect();
            let y = system.solve(&rhs);
            apply(&y, c, &mut buf);
            let dh: Vec<f64> = (0..n).map(|i| minus_rd[i] - buf[i]).collect();
            let ds: Vec<f64> = (0..n).map(|i| (rc[i] + s[i] * y[i]) / z[i]).collect();
            let dz: Vec<f64> = y.iter().map(|x| -x).collect();
            (dh, ds, dz)
        };

        let rc_aff: Vec<f64> = (0..n).map(|i| -s[i] * z[i]).collect();
        let (_, ds_a, dz_a) = newton(&rc_aff);
        if mu <= POLISH_GAP * mu0 {
            // Tapia indicators: a constraint is active when the predictor
            // drives its slack to zero faster than its multiplier.
            let active: Vec<usize> =
                (0..n).filter(|&i| (z[i] + dz_a[i]) / z[i] > (s[i] + ds_a[i]) / s[i]).collect();
            // The multipliers pick among equivalent ones when the active
            // rows are dependent, so a repeated guess is retried once they
            // are markedly more accurate.
            if active != tried.0 || mu <= RETRY_GAP * tried.1 {
                if let Some(exact) = polish(&w, active.clone(), &z, c, tol) {
                    return finish(v, unscale(&exact), iterations, true);
                }
                tried = (active, mu);
            }
        }
        let alpha_aff = max_step(&s, &ds_a).min(max_step(&z, &dz_a)).min(1.0);
        let mu_aff =
            (0..n).map(|i| (s[i] + alpha_aff * ds_a[i]) * (z[i] + alpha_aff * dz_a[i])).sum::<f64>() / n as f64;
        let sigma = (mu_aff / mu).powi(3).min(1.0);
        let rc: Vec<f64> = (0..n).map(|i| -s[i] * z[i] - ds_a[i] * dz_a[i] + sigma * mu).collect();
        let (dh, ds, dz) = newton(&rc);
        let alpha = (0.995 * max_step(&s, &ds).min(max_step(&z, &dz))).min(1.0);
        if !alpha.is_finite() || dh.iter().chain(&dz).any(|x| !x.is_finite()) {
            break;
        }
        for i in 0..n {
            h[i] += alpha * dh[i];
            s[i] += alpha * ds[i];
            z[i] += alpha * dz[i];
        }
        iterations += 1;
    }

    // Last chance: the set of constraints whose slack is below its multiplier.
    let active: Vec<usize> = (0..n).filter(|&i| s[i] < z[i]).collect();
    if let Some(exact) = polish(&w, active, &z, c, tol) {
        return finish(v, unscale(&exact), iterations, true);
    }
    finish(v, unscale(&best.2), best.1, false)
}

/// Exact projection for `5 <= n <= 16` by exhaustive search over active sets.
///
/// For each subset `W` of constraints the candidate is the orthogonal
/// projection of `v` onto `{h : a_j . h = 0, j in W}`. The projection onto
/// the cone is one of these candidates, and every feasible candidate is a
/// point of the cone, so the nearest feasible candidate is the projection.
/// Subsets are enumerated depth first with an incrementally orthonormalized
/// basis of their row space; rows dependent on earlier ones add nothing and
/// are skipped.
pub fn project_oracle(v: &[f64]) -> Result<Vec<f64>> {
    check_input(v)?;
    let n = v.len();
    if n > 16 {
        return Err(Error::InvalidInput(format!("oracle supports n <= 16, got {n}")));
    }
    let c = cos_step(n);
    let row = |j: usize| {
        let mut a = vec![0.0; n];
        a[(j + n - 1) % n] += 1.0;
        a[(j + 1) % n] += 1.0;
        a[j] -= 2.0 * c;
        a
    };
    let rows: Vec<Vec<f64>> = (0..n).map(row).collect();
    let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));

    struct Search<'a> {
        rows: &'a [Vec<f64>],
        c: f64,
        v: &'a [f64],
        feas_tol: f64,
        best: Option<(f64, Vec<f64>)>,
    }

    impl Search<'_> {
        fn consider(&mut self, h: &[f64]) {
            if cyclic_residuals(h, self.c).iter().all(|&r| r >= -self.feas_tol) {
                let d = distance(self.v, h);
                if self.best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    self.best = Some((d, h.to_vec()));
                }
            }
        }

        fn descend(&mut self, start: usize, basis: &mut Vec<Vec<f64>>, h: &[f64]) {
            for j in start..self.rows.len() {
                let mut q = self.rows[j].clone();
                let norm0 = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                for _ in 0..2 {
                    for b in basis.iter() {
                        let p: f64 = b.iter().zip(&q).map(|(x, y)| x * y).sum();
                        q.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
                    }
                }
                let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm <= 1e-9 * norm0 {
                    continue;
                }
                q.iter_mut().for_each(|x| *x /= norm);
                let p: f64 = q.iter().zip(h).map(|(x, y)| x * y).sum();
                let next: Vec<f64> = h.iter().zip(&q).map(|(x, y)| x - p * y).collect();
                self.consider(&next);
                basis.push(q);
                self.descend(j + 1, basis, &next);
                basis.pop();
            }
        }
    }

    let mut search = Search { rows: &rows, c, v, feas_tol: 1e-10 * scale, best: None };
    search.consider(v);
    search.descend(0, &mut Vec::new(), v);
    // The full active set yields a point in the sinusoid null space, which
    // is always feasible, so a candidate exists.
    Ok(search.best.expect("the maximal active set gives a feasible candidate").1)
}
