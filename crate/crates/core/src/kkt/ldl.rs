//! `LDL^T` factorization of the augmented system with 1x1 pivots only.
//!
//! Quasi-definite matrices admit such a factorization for every symmetric
//! permutation, so the ordering is chosen purely to limit fill. When the
//! (2,2) block is zero the system is not quasi-definite; the `x` block is
//! then eliminated first so that `y` pivots are Schur complements.

use thiserror::Error;

use super::assemble::AugmentedSystem;
use super::ordering::{inverse, leading_block_first, minimum_degree};
use crate::sparse::norm2;

/// Pivots with magnitude at or below this count as zero for the inertia.
pub const ZERO_PIVOT: f64 = 1e-30;

/// Backsolve accuracy target `||K u - r|| <= KAPPA_SOLVE (1 + ||r||)`.
pub const KAPPA_SOLVE: f64 = 1e-8;

/// Refinement steps allowed per solve while the residual is above
/// [`KAPPA_SOLVE`] and still shrinking.
pub const MAX_REFINEMENTS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FactorError {
    /// Zero or tiny pivot without regularization to absorb it.
    #[error("singular system: pivot {pivot:e} at position {index}")]
    Singular { index: usize, pivot: f64 },
    /// Breakdown despite active regularization; the caller should raise
    /// the regularization and retry.
    #[error("numerical instability: pivot {pivot:e} at position {index}")]
    Instability { index: usize, pivot: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// When a diagonal pivot is rejected.
///
/// A pivot `d_k` is rejected if `|d_k| <= threshold`, if
/// `|d_k| <= relative * s_k` where `s_k` is the magnitude of the terms that
/// were summed into it (i.e. it was produced by cancellation), or if its sign
/// differs from the sign quasi-definiteness prescribes (negative for `x`
/// unknowns, positive for `y`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotRule {
    pub threshold: f64,
    pub relative: f64,
}

impl PivotRule {
    /// Absolute threshold a decade below the regularization floor.
    pub fn regularized(reg_thr: f64) -> Self {
        PivotRule { threshold: 0.1 * reg_thr, relative: 0.0 }
    }

    /// Threshold used when no regularization is present.
    pub fn unregularized() -> Self {
        PivotRule { threshold: ZERO_PIVOT, relative: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LdlBackend {
    #[default]
    Sparse,
    /// Dense elimination in natural order; meant for small systems.
    Dense,
}

/// Factors `P K P^T = L D L^T` of an [`AugmentedSystem`].
#[derive(Debug, Clone)]
pub struct KktFactorization {
    system: AugmentedSystem,
    /// `perm[k]` is the original index of the `k`-th pivot.
    perm: Vec<usize>,
    // strictly lower triangular L in CSC
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<f64>,
    d: Vec<f64>,
    inertia: Inertia,
}

pub fn factorize(sys: &AugmentedSystem, rule: PivotRule) -> Result<KktFactorization, FactorError> {
    factorize_with(sys, rule, LdlBackend::Sparse)
}

pub fn factorize_with(
    sys: &AugmentedSystem,
    rule: PivotRule,
    backend: LdlBackend,
) -> Result<KktFactorization, FactorError> {
    match backend {
        LdlBackend::Sparse => factorize_sparse(sys, rule),
        LdlBackend::Dense => factorize_dense(sys, rule),
    }
}

fn check_pivot(
    sys: &AugmentedSystem,
    rule: PivotRule,
    original: usize,
    k: usize,
    pivot: f64,
    scale: f64,
) -> Result<(), FactorError> {
    let expect_negative = original < sys.n();
    let wrong_sign = if expect_negative { pivot >= 0.0 } else { pivot <= 0.0 };
    let tiny = pivot.abs() <= rule.threshold || pivot.abs() <= rule.relative * scale;
    if wrong_sign || tiny || !pivot.is_finite() {
        return Err(if sys.rho() == 0.0 || sys.delta() == 0.0 {
            FactorError::Singular { index: k, pivot }
        } else {
            FactorError::Instability { index: k, pivot }
        });
    }
    Ok(())
}

fn inertia_of(d: &[f64]) -> Inertia {
    let mut inertia = Inertia { positive: 0, negative: 0, zero: 0 };
    for &v in d {
        if v > ZERO_PIVOT {
            inertia.positive += 1;
        } else if v < -ZERO_PIVOT {
            inertia.negative += 1;
        } else {
            inertia.zero += 1;
        }
    }
    inertia
}

const NONE: usize = usize::MAX;

fn factorize_sparse(sys: &AugmentedSystem, rule: PivotRule) -> Result<KktFactorization, FactorError> {
    let dim = sys.dim();
    let mut perm = minimum_degree(sys.upper());
    if sys.delta() == 0.0 {
        perm = leading_block_first(&perm, sys.n());
    }
    let iperm = inverse(&perm);

    // Upper triangle of the permuted matrix, column by column.
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
    for (i, j, v) in sys.upper().triplets() {
        let (a, b) = (iperm[i], iperm[j]);
        let (r, c) = if a <= b { (a, b) } else { (b, a) };
        cols[c].push((r, v));
    }
    for col in &mut cols {
        col.sort_by_key(|e| e.0);
    }

    // Elimination tree and column counts of L.
    let mut etree = vec![NONE; dim];
    let mut lnz = vec![0usize; dim];
    let mut work = vec![NONE; dim];
    for j in 0..dim {
        work[j] = j;
        for &(i0, _) in &cols[j] {
            let mut i = i0;
            while i < j && work[i] != j {
                if etree[i] == NONE {
                    etree[i] = j;
                }
                lnz[i] += 1;
                work[i] = j;
                i = etree[i];
            }
        }
    }
    let mut lp = vec![0usize; dim + 1];
    for i in 0..dim {
        lp[i + 1] = lp[i] + lnz[i];
    }
    let mut li = vec![0usize; lp[dim]];
    let mut lx = vec![0.0; lp[dim]];
    let mut d = vec![0.0; dim];
    let mut next_space: Vec<usize> = lp[..dim].to_vec();

    // Up-looking factorization: row k of L from a sparse triangular solve.
    let mut y_vals = vec![0.0; dim];
    let mut y_marked = vec![false; dim];
    let mut y_idx = Vec::with_capacity(dim);
    let mut stack = Vec::with_capacity(dim);
    for k in 0..dim {
        y_idx.clear();
        let mut diag = 0.0;
        for &(i, v) in &cols[k] {
            if i == k {
                diag = v;
                continue;
            }
            y_vals[i] = v;
            if y_marked[i] {
                continue;
            }
            // Walk up the etree until reaching a marked node or k.
            stack.clear();
            let mut node = i;
            while node != NONE && node < k && !y_marked[node] {
                y_marked[node] = true;
                stack.push(node);
                node = etree[node];
            }
            while let Some(s) = stack.pop() {
                y_idx.push(s);
            }
        }
        let mut pivot = diag;
        let mut scale = diag.abs();
        for &c in y_idx.iter().rev() {
            let yc = y_vals[c];
            for p in lp[c]..next_space[c] {
                y_vals[li[p]] -= lx[p] * yc;
            }
            let l = yc / d[c];
            li[next_space[c]] = k;
            lx[next_space[c]] = l;
            next_space[c] += 1;
            let term = yc * l;
            pivot -= term;
            scale += term.abs();
            y_vals[c] = 0.0;
            y_marked[c] = false;
        }
        check_pivot(sys, rule, perm[k], k, pivot, scale)?;
        d[k] = pivot;
    }

    Ok(KktFactorization {
        system: sys.clone(),
        perm,
        lp,
        li,
        lx,
        inertia: inertia_of(&d),
        d,
    })
}

fn factorize_dense(sys: &AugmentedSystem, rule: PivotRule) -> Result<KktFactorization, FactorError> {
    let dim = sys.dim();
    let a = sys.to_dense();
    // l[i][j] for i > j; row-major dense storage.
    let mut l = vec![vec![0.0; dim]; dim];
    let mut d = vec![0.0; dim];
    for k in 0..dim {
        let mut pivot = a[k][k];
        let mut scale = a[k][k].abs();
        for j in 0..k {
            let term = l[k][j] * l[k][j] * d[j];
            pivot -= term;
            scale += term.abs();
        }
        check_pivot(sys, rule, k, k, pivot, scale)?;
        d[k] = pivot;
        for i in k + 1..dim {
            let mut v = a[i][k];
            for j in 0..k {
                v -= l[i][j] * l[k][j] * d[j];
            }
            l[i][k] = v / pivot;
        }
    }
    let mut lp = vec![0usize; dim + 1];
    let mut li = Vec::new();
    let mut lx = Vec::new();
    for j in 0..dim {
        for (i, row) in l.iter().enumerate().skip(j + 1) {
            if row[j] != 0.0 {
                li.push(i);
                lx.push(row[j]);
            }
        }
        lp[j + 1] = li.len();
    }
    Ok(KktFactorization {
        system: sys.clone(),
        perm: (0..dim).collect(),
        lp,
        li,
        lx,
        inertia: inertia_of(&d),
        d,
    })
}

impl KktFactorization {
    pub fn inertia(&self) -> Inertia {
        self.inertia
    }

    pub fn system(&self) -> &AugmentedSystem {
        &self.system
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn nnz_l(&self) -> usize {
        self.li.len()
    }

    /// Entry `(i, j)`, `i > j`, of the unit lower factor (permuted order).
    pub fn l_entry(&self, i: usize, j: usize) -> f64 {
        (self.lp[j]..self.lp[j + 1])
            .find(|&p| self.li[p] == i)
            .map_or(0.0, |p| self.lx[p])
    }

    /// One pass of forward/diagonal/backward substitution.
    pub fn solve_once(&self, rhs: &[f64]) -> Vec<f64> {
        let dim = self.d.len();
        assert_eq!(rhs.len(), dim, "rhs dimension");
        let mut w: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for c in 0..dim {
            let wc = w[c];
            if wc != 0.0 {
                for p in self.lp[c]..self.lp[c + 1] {
                    w[self.li[p]] -= self.lx[p] * wc;
                }
            }
        }
        for (wk, dk) in w.iter_mut().zip(&self.d) {
            *wk /= dk;
        }
        for c in (0..dim).rev() {
            let mut acc = w[c];
            for p in self.lp[c]..self.lp[c + 1] {
                acc -= self.lx[p] * w[self.li[p]];
            }
            w[c] = acc;
        }
        let mut out = vec![0.0; dim];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = w[k];
        }
        out
    }

    /// Solves `K u = rhs`, refining (up to [`MAX_REFINEMENTS`] times) while
    /// the residual exceeds `KAPPA_SOLVE (1 + ||rhs||)` and keeps shrinking.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        self.solve_with_residual(rhs).0
    }

    /// Like [`solve`](Self::solve), also returning the relative residual
    /// `||K u - rhs|| / (1 + ||rhs||)` of the returned solution.
    pub fn solve_with_residual(&self, rhs: &[f64]) -> (Vec<f64>, f64) {
        let denom = 1.0 + norm2(rhs);
        let mut u = self.solve_once(rhs);
        let mut res = self.residual(&u, rhs);
        let mut rel = norm2(&res) / denom;
        for _ in 0..MAX_REFINEMENTS {
            if rel <= KAPPA_SOLVE {
                break;
            }
            let du = self.solve_once(&res);
            let refined: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + b).collect();
            let res2 = self.residual(&refined, rhs);
            let rel2 = norm2(&res2) / denom;
            if !(rel2 < rel) {
                break;
            }
            u = refined;
            res = res2;
            rel = rel2;
        }
        debug_assert_eq!(res.len(), u.len());
        (u, rel)
    }

    fn residual(&self, u: &[f64], rhs: &[f64]) -> Vec<f64> {
        let ku = self.system.mul_vec(u);
        rhs.iter().zip(&ku).map(|(r, k)| r - k).collect()
    }
}
