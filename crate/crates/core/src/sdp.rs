//! Unit-diagonal complex SDP `max Re Tr(A Q)  s.t.  Q_ii = 1, Q ⪰ 0`.
//!
//! Solved directly over Hermitian matrices with a primal-dual interior-point
//! method (HKM search direction). Dual: `min Σ y_i  s.t.  Diag(y) − A ⪰ 0`.
//! Every iterate is strictly feasible for both problems, so the duality gap
//! `Σ y_i − Re Tr(A Q)` is a certified bound on suboptimality.
//!
//! Working in the complex field is equivalent to the real embedding
//! `[[Re, −Im], [Im, Re]]` of size 2N, in which each constraint `Q_ii = 1`
//! becomes the pair `X_ii = X_{N+i,N+i} = 1/2`; the Hermitian form keeps the
//! Newton system at N×N instead of 2N×2N.

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_part, leading_eigenpair, re_trace_product, CMat, CVec, ONE, ZERO};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct SdpProblem {
    a: CMat,
    pub tol: f64,
    pub max_iter: usize,
}

impl SdpProblem {
    /// Symmetrizes `a`; default tolerance 1e-6 and 500 iterations.
    pub fn new(a: CMat) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!("A is {}×{}", a.nrows(), a.ncols())));
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("A", "non-finite entry"));
        }
        Ok(Self {
            a: hermitian_part(&a),
            tol: 1e-6,
            max_iter: 500,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub q: CMat,
    /// `Re Tr(A Q)`.
    pub objective: f64,
    /// Dual objective `Σ y_i`, an upper bound on the optimum.
    pub dual_bound: f64,
    /// Relative gap `(dual − primal) / max(1, |dual|)`.
    pub gap: f64,
    pub iterations: usize,
    /// Relative gap at the start of every iteration, then at exit.
    pub gap_history: Vec<f64>,
}

fn relative_gap(primal: f64, dual: f64) -> f64 {
    (dual - primal) / dual.abs().max(1.0)
}

fn hermitian_inverse(m: &CMat) -> Option<CMat> {
    m.clone().cholesky().map(|c| c.inverse())
}

const STEP_FRACTION: f64 = 0.95;

/// Largest `α` with `base + α dir ⪰ 0` (infinite if unbounded).
fn max_step(base: &CMat, dir: &CMat) -> Option<f64> {
    let l = base.clone().cholesky()?.l();
    let li = l.try_inverse()?;
    let m = hermitian_part(&(&li * dir * li.adjoint()));
    let lmin = crate::linalg::min_eigenvalue(&m);
    Some(if lmin >= 0.0 { f64::INFINITY } else { -1.0 / lmin })
}

/// Interior-point solve. Fails with [`Error::SdpNotConverged`] if the gap
/// target is not reached within `max_iter`.
pub fn solve_unit_diag_sdp(prob: &SdpProblem) -> Result<SdpSolution> {
    if !(prob.tol > 0.0 && prob.tol < 1.0) {
        return Err(invalid("tol", format!("must lie in (0, 1), got {}", prob.tol)));
    }
    let n = prob.n();
    let c = &prob.a;
    if n == 1 {
        let obj = c[(0, 0)].re;
        return Ok(SdpSolution {
            q: CMat::from_element(1, 1, ONE),
            objective: obj,
            dual_bound: obj,
            gap: 0.0,
            iterations: 0,
            gap_history: vec![0.0],
        });
    }

    let mut x = CMat::identity(n, n);
    let mut y = DVector::from_fn(n, |i, _| (0..n).map(|j| c[(i, j)].norm()).sum::<f64>() + 1.0);
    let dual_slack = |y: &DVector<f64>| {
        let mut z = -c.clone();
        for i in 0..n {
            z[(i, i)] += Complex64::new(y[i], 0.0);
        }
        hermitian_part(&z)
    };
    let mut z = dual_slack(&y);
    let mut history = Vec::new();
    let mut sigma = 0.5;

    for it in 0..prob.max_iter {
        let primal = re_trace_product(c, &x);
        let dual = y.sum();
        let gap = relative_gap(primal, dual);
        history.push(gap);
        if gap <= prob.tol {
            return Ok(SdpSolution {
                q: x,
                objective: primal,
                dual_bound: dual,
                gap,
                iterations: it,
                gap_history: history,
            });
        }
        let zi = hermitian_inverse(&z).ok_or(Error::NotPositiveSemiDefinite {
            min_eigenvalue: crate::linalg::min_eigenvalue(&z),
        })?;
        let mu = sigma * re_trace_product(&z, &x) / n as f64;

        // Schur complement: Re(Z⁻¹ ∘ conj(X)) dy = μ diag(Z⁻¹) − diag(X)
        let schur = DMatrix::from_fn(n, n, |i, j| (zi[(i, j)] * x[(i, j)].conj()).re);
        let rhs = DVector::from_fn(n, |i, _| mu * zi[(i, i)].re - 1.0);
        let dy = schur
            .cholesky()
            .map(|ch| ch.solve(&rhs))
            .ok_or(Error::SdpNotConverged {
                iterations: it,
                gap,
                best_objective: primal,
            })?;

        let mut dz = CMat::from_element(n, n, ZERO);
        for i in 0..n {
            dz[(i, i)] = Complex64::new(dy[i], 0.0);
        }
        let mut dx = zi.scale(mu) - &x - &zi * &dz * &x;
        dx = hermitian_part(&dx);
        for i in 0..n {
            dx[(i, i)] = ZERO;
        }

        let stalled = || Error::SdpNotConverged {
            iterations: it,
            gap,
            best_objective: primal,
        };
        let ap = (STEP_FRACTION * max_step(&x, &dx).ok_or_else(stalled)?).min(1.0);
        let ad = (STEP_FRACTION * max_step(&z, &dz).ok_or_else(stalled)?).min(1.0);
        x += dx.scale(ap);
        for i in 0..n {
            x[(i, i)] = ONE;
        }
        y += dy.scale(ad);
        z = dual_slack(&y);
        sigma = if ap.min(ad) > 0.9 {
            0.1
        } else if ap.min(ad) > 0.5 {
            0.3
        } else {
            0.5
        };
    }

    let primal = re_trace_product(c, &x);
    let gap = relative_gap(primal, y.sum());
    history.push(gap);
    if gap <= prob.tol {
        return Ok(SdpSolution {
            q: x,
            objective: primal,
            dual_bound: y.sum(),
            gap,
            iterations: prob.max_iter,
            gap_history: history,
        });
    }
    Err(Error::SdpNotConverged {
        iterations: prob.max_iter,
        gap,
        best_objective: primal,
    })
}

/// Rank-one rounding: leading eigenvector, rotated so the first nonzero entry
/// is real-positive, then each entry projected onto the unit circle.
pub fn recover_q(q: &CMat) -> CVec {
    let (_, mut u) = leading_eigenpair(&hermitian_part(q));
    let scale = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(r) = u.iter().find(|z| z.norm() > 1e-12 * scale).copied() {
        let rot = r.conj() / r.norm();
        u.iter_mut().for_each(|z| *z *= rot);
    }
    u.map(|z| if z.norm() > 0.0 { z / z.norm() } else { ONE })
}

/// `q^H A q`.
pub fn quadratic_form(a: &CMat, q: &CVec) -> f64 {
    (q.adjoint() * a * q)[(0, 0)].re
}

/// What [`brute_force_phases`] searches over.
#[derive(Debug, Clone)]
pub enum BruteForceInput<'a> {
    /// Fixed quadratic form `A`.
    Quadratic(&'a CMat),
    /// Channels `(G, H)`; every output permutation is tried with the input
    /// permutation held at identity (the pair only matters through the bijection).
    Channels { g: &'a CMat, h: &'a CMat },
}

#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub q: CVec,
    /// Output permutation when permutations were searched.
    pub perm_out: Option<Vec<usize>>,
    pub objective: f64,
}

const BRUTE_FORCE_BUDGET: f64 = 2e8;

/// Exhaustive maximum of `q^H A q` over `levels` equispaced phases per entry
/// (first entry fixed to 1, which loses nothing since the form is invariant
/// to a global phase).
pub fn brute_force_phases(input: BruteForceInput<'_>, levels: usize) -> Result<BruteForceResult> {
    if levels == 0 || levels > 16 {
        return Err(invalid("levels", format!("must be in 1..=16, got {levels}")));
    }
    match input {
        BruteForceInput::Quadratic(a) => {
            let n = a.nrows();
            guard(n, levels, 1.0)?;
            let (q, objective) = grid_search(a, levels);
            Ok(BruteForceResult {
                q,
                perm_out: None,
                objective,
            })
        }
        BruteForceInput::Channels { g, h } => {
            let n = g.nrows();
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            guard(n, levels, fact)?;
            let identity: Vec<usize> = (0..n).collect();
            let mut best: Option<BruteForceResult> = None;
            for perm in permutations(n) {
                let phi = crate::phase::build_phi(h, g, &identity, &perm)?;
                let a = crate::phase::sum_gain(&phi);
                let (q, objective) = grid_search(&a, levels);
                if best.as_ref().is_none_or(|b| objective > b.objective) {
                    best = Some(BruteForceResult {
                        q,
                        perm_out: Some(perm),
                        objective,
                    });
                }
            }
            best.ok_or_else(|| invalid("G", "empty"))
        }
    }
}

fn guard(n: usize, levels: usize, extra: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("A", "empty"));
    }
    let cost = (levels as f64).powi(n as i32 - 1) * extra * (n * n) as f64;
    if n > 6 || cost > BRUTE_FORCE_BUDGET {
        return Err(Error::TooLarge(format!(
            "brute force over N={n}, {levels} levels is too expensive"
        )));
    }
    Ok(())
}

fn grid_search(a: &CMat, levels: usize) -> (CVec, f64) {
    let n = a.nrows();
    let roots: Vec<Complex64> = (0..levels)
        .map(|l| Complex64::from_polar(1.0, std::f64::consts::TAU * l as f64 / levels as f64))
        .collect();
    let mut idx = vec![0usize; n];
    let mut q = CVec::from_element(n, ONE);
    let mut best_q = q.clone();
    let mut best = quadratic_form(a, &q);
    loop {
        // odometer over entries 1..n
        let mut k = 1;
        while k < n {
            idx[k] += 1;
            if idx[k] < levels {
                break;
            }
            idx[k] = 0;
            q[k] = roots[0];
            k += 1;
        }
        if k >= n {
            break;
        }
        q[k] = roots[idx[k]];
        let v = quadratic_form(a, &q);
        if v > best {
            best = v;
            best_q = q.clone();
        }
    }
    (best_q, best)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{complex_normal, min_eigenvalue};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_psd(n: usize, rank: usize, seed: u64) -> CMat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = CMat::from_fn(n, rank, |_, _| complex_normal(&mut rng, 1.0));
        &b * b.adjoint()
    }

    #[test]
    fn scalar_problem() {
        let a = CMat::from_element(1, 1, Complex64::new(3.5, 0.0));
        let s = solve_unit_diag_sdp(&SdpProblem::new(a).unwrap()).unwrap();
        assert_eq!(s.objective, 3.5);
        assert_eq!(s.q[(0, 0)], ONE);
    }

    #[test]
    fn identity_objective_is_n() {
        for n in [2, 5, 9] {
            let s = solve_unit_diag_sdp(&SdpProblem::new(CMat::identity(n, n)).unwrap()).unwrap();
            assert!((s.objective - n as f64).abs() <= 1e-6 * n as f64);
        }
    }

    #[test]
    fn rank_one_unit_modulus_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = CVec::from_fn(4, |_, _| {
            Complex64::from_polar(1.0, rand::Rng::random::<f64>(&mut rng) * 6.0)
        });
        let a = &v * v.adjoint();
        let s = solve_unit_diag_sdp(&SdpProblem::new(a.clone()).unwrap()).unwrap();
        assert!((s.objective - 16.0).abs() < 1e-4);
        let q = recover_q(&s.q);
        assert!((quadratic_form(&a, &q) - 16.0).abs() < 1e-4);
    }

    #[test]
    fn feasibility_and_certificate() {
        for seed in 0..20 {
            let a = random_psd(6, 2, seed);
            let s = solve_unit_diag_sdp(&SdpProblem::new(a.clone()).unwrap()).unwrap();
            assert!(s.gap <= 1e-6);
            assert!(min_eigenvalue(&s.q) >= -1e-8);
            for i in 0..6 {
                assert!((s.q[(i, i)] - ONE).norm() < 1e-8);
            }
            assert!((re_trace_product(&a, &s.q) - s.objective).abs() < 1e-10 * s.objective.abs().max(1.0));
            for w in s.gap_history.windows(2) {
                assert!(w[1] <= w[0], "gap history not monotone: {:?}", s.gap_history);
            }
        }
    }

    #[test]
    fn relaxation_dominates_grid() {
        for seed in 0..5 {
            let a = random_psd(3, 3, 100 + seed);
            let s = solve_unit_diag_sdp(&SdpProblem::new(a.clone()).unwrap()).unwrap();
            let bf = brute_force_phases(BruteForceInput::Quadratic(&a), 16).unwrap();
            assert!(s.dual_bound >= bf.objective - 1e-9);
        }
    }

    #[test]
    fn deterministic() {
        let a = random_psd(5, 2, 77);
        let p = SdpProblem::new(a).unwrap();
        let s1 = solve_unit_diag_sdp(&p).unwrap();
        let s2 = solve_unit_diag_sdp(&p).unwrap();
        assert_eq!(s1.q, s2.q);
    }

    #[test]
    fn non_convergence_is_reported() {
        let a = random_psd(6, 2, 1);
        let p = SdpProblem::new(a).unwrap().with_max_iter(2);
        assert!(matches!(solve_unit_diag_sdp(&p), Err(Error::SdpNotConverged { .. })));
    }

    #[test]
    fn recover_identity_convention() {
        let q = recover_q(&CMat::identity(4, 4));
        assert!(q.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn recover_up_to_global_phase() {
        let v = CVec::from_fn(5, |i, _| Complex64::from_polar(1.0, 0.9 * i as f64 + 0.3));
        let q = recover_q(&(&v * v.adjoint()));
        let rot = v[0] / q[0];
        for i in 0..5 {
            assert!((q[i] * rot - v[i]).norm() < 1e-10);
        }
        assert!(q[0].im.abs() < 1e-12 && q[0].re > 0.0);
    }

    #[test]
    fn brute_force_identity() {
        let a = CMat::identity(2, 2);
        assert!((brute_force_phases(BruteForceInput::Quadratic(&a), 4).unwrap().objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_guard() {
        let a = CMat::identity(7, 7);
        assert!(matches!(
            brute_force_phases(BruteForceInput::Quadratic(&a), 4),
            Err(Error::TooLarge(_))
        ));
        assert!(brute_force_phases(BruteForceInput::Quadratic(&a), 17).is_err());
    }

    #[test]
    fn heap_permutations_are_complete() {
        let mut all = permutations(4);
        assert_eq!(all.len(), 24);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
    }
}
