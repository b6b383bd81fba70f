//! Shift-invert block Krylov iteration with thick restarts.
//!
//! The operator T = (L + εM)⁻¹M is self-adjoint in the M inner product and maps
//! the smallest eigenvalues of the pencil to its largest. The search space is
//! kept M-orthonormal; Rayleigh–Ritz is done on VᵀLV so the Ritz values are
//! eigenvalue estimates of the pencil itself.

use nalgebra::{DMatrix, DMatrixView, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{m_dot, EigenBasis};
use crate::error::{Error, Result};
use crate::mesh::SparseOperatorPair;
use crate::sparse::{CsrMatrix, EnvelopeCholesky};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub seed: u64,
    /// Defaults to min(k, 16).
    pub block_size: Option<usize>,
    pub max_restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, seed: 0, block_size: None, max_restarts: 500 }
    }
}

pub fn solve_smallest(ops: &SparseOperatorPair, k: usize, tol: f64, seed: u64) -> Result<EigenBasis> {
    solve_smallest_with(ops, k, &SolverOptions { tol, seed, ..Default::default() })
}

fn factor_shifted(ops: &SparseOperatorPair) -> Result<EnvelopeCholesky> {
    let l = &ops.stiffness;
    // Scaled by trace(L)/trace(M) so the shift tracks the eigenvalue scale
    // and (L + εM) keeps a condition number near 1e8 on every mesh.
    let mut eps = 1e-8 * l.trace() / ops.mass.iter().sum::<f64>();
    if !(eps > 0.0) {
        eps = 1e-8;
    }
    let mass = CsrMatrix::from_diagonal(&ops.mass);
    let mut last = None;
    for _ in 0..4 {
        match EnvelopeCholesky::factor(&l.add_scaled(eps, &mass)) {
            Ok(f) => return Ok(f),
            Err(e) => {
                log::warn!("shifted factorization failed at eps={eps:e}; increasing shift");
                last = Some(e);
                eps *= 1e3;
            }
        }
    }
    Err(last.expect("at least one attempt"))
}

/// aᵀb through the blocked gemm kernel; only the narrower operand is transposed.
fn tr_mul(a: DMatrixView<f64>, b: DMatrixView<f64>) -> DMatrix<f64> {
    if b.ncols() <= a.ncols() {
        (b.transpose() * a).transpose()
    } else {
        a.transpose() * b
    }
}

/// M-orthonormal search space stored column-wise with its image under L.
struct Space<'a> {
    ops: &'a SparseOperatorPair,
    chol: EnvelopeCholesky,
    rng: ChaCha8Rng,
    v: DMatrix<f64>,
    lv: DMatrix<f64>,
    m: usize,
    /// Leading `known`×`known` block of VᵀLV that is still valid.
    h: DMatrix<f64>,
    known: usize,
    /// Converged eigenvectors, kept M-orthogonal to V and removed from every
    /// input of T. Without this the near-kernel direction, amplified by 1/ε,
    /// swamps the new directions.
    locked: DMatrix<f64>,
}

impl Space<'_> {
    fn n(&self) -> usize {
        self.ops.mass.len()
    }

    fn random_vector(&mut self) -> DVector<f64> {
        let n = self.n();
        DVector::from_fn(n, |_, _| self.rng.random_range(-1.0..1.0))
    }

    fn apply_t(&self, x: &[f64]) -> Vec<f64> {
        let mut x = DVector::from_column_slice(x);
        if self.locked.ncols() > 0 {
            let mx = x.component_mul(&DVector::from_column_slice(&self.ops.mass));
            let c = self.locked.tr_mul(&mx);
            x.gemv(-1.0, &self.locked, &c, 1.0);
        }
        let mx: Vec<f64> = x.iter().zip(&self.ops.mass).map(|(a, m)| a * m).collect();
        self.chol.solve(&mx)
    }

    fn mass_scaled(&self, w: &DMatrix<f64>) -> DMatrix<f64> {
        let mut mw = w.clone();
        for mut col in mw.column_iter_mut() {
            for (x, m) in col.iter_mut().zip(&self.ops.mass) {
                *x *= m;
            }
        }
        mw
    }

    /// Removes the components of every column along V[:, from..m], twice.
    /// A full projection (`from == 0`) also removes the locked vectors.
    fn project_out(&self, w: &mut DMatrix<f64>, from: usize) {
        let cnt = self.m - from;
        let with_locked = from == 0 && self.locked.ncols() > 0;
        if cnt == 0 && !with_locked {
            return;
        }
        let basis = self.v.columns(from, cnt);
        for _ in 0..2 {
            if with_locked {
                let mw = self.mass_scaled(w);
                let c = tr_mul(self.locked.columns(0, self.locked.ncols()), mw.columns(0, mw.ncols()));
                w.gemm(-1.0, &self.locked, &c, 1.0);
            }
            if cnt > 0 {
                let mw = self.mass_scaled(w);
                let c = tr_mul(basis, mw.columns(0, mw.ncols()));
                w.gemm(-1.0, &basis, &c, 1.0);
            }
        }
    }

    /// Appends the columns of `w` after block orthogonalization, replacing
    /// deflated columns by random directions. Returns the number appended.
    fn push_block(&mut self, mut w: DMatrix<f64>) -> usize {
        let start = self.m;
        let capacity = self.v.ncols();
        let original: Vec<f64> = w
            .column_iter()
            .map(|c| m_dot(c.as_slice(), c.as_slice(), &self.ops.mass).sqrt())
            .collect();
        self.project_out(&mut w, 0);
        for j in 0..w.ncols() {
            if self.m >= capacity || self.m + self.locked.ncols() >= self.n() {
                break;
            }
            let mut col = DMatrix::from_column_slice(self.n(), 1, w.column(j).as_slice());
            let mut reference = original[j];
            let mut accepted = false;
            for attempt in 0..4 {
                if attempt > 0 {
                    let r = self.random_vector();
                    col = DMatrix::from_column_slice(self.n(), 1, r.as_slice());
                    reference = m_dot(col.as_slice(), col.as_slice(), &self.ops.mass).sqrt();
                    self.project_out(&mut col, 0);
                } else {
                    self.project_out(&mut col, start);
                }
                let norm = m_dot(col.as_slice(), col.as_slice(), &self.ops.mass).sqrt();
                if reference > 0.0 && norm > 1e-10 * reference {
                    col /= norm;
                    accepted = true;
                    break;
                }
            }
            if !accepted {
                break;
            }
            let lcol = self.ops.stiffness.mul_vec(col.as_slice());
            self.v.column_mut(self.m).copy_from(&col.column(0));
            self.lv.column_mut(self.m).copy_from_slice(&lcol);
            self.m += 1;
        }
        self.m - start
    }

    /// VᵀLV, symmetrized, reusing the valid leading block.
    fn projected(&self) -> DMatrix<f64> {
        let (m, known) = (self.m, self.known.min(self.m));
        let mut h = DMatrix::zeros(m, m);
        h.view_mut((0, 0), (known, known))
            .copy_from(&self.h.view((0, 0), (known, known)));
        if m > known {
            let r = m - known;
            let a = tr_mul(self.v.columns(0, m), self.lv.columns(known, r));
            let b = tr_mul(self.lv.columns(0, m), self.v.columns(known, r));
            for jj in 0..r {
                let j = known + jj;
                for i in 0..m {
                    let x = 0.5 * (a[(i, jj)] + b[(i, jj)]);
                    h[(i, j)] = x;
                    h[(j, i)] = x;
                }
            }
        }
        h
    }
}

pub fn solve_smallest_with(ops: &SparseOperatorPair, k: usize, opts: &SolverOptions) -> Result<EigenBasis> {
    let n = ops.mass.len();
    if k == 0 {
        return Err(Error::EmptyRequest("k must be positive".into()));
    }
    if k >= n {
        return Err(Error::InvalidRequest(format!("k = {k} must be below the vertex count {n}")));
    }
    if !(1e-14..=1e-2).contains(&opts.tol) {
        return Err(Error::InvalidRequest(format!("tol {} outside [1e-14, 1e-2]", opts.tol)));
    }
    if ops.mass.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::InvalidRequest("mass entries must be positive".into()));
    }
    let b = opts.block_size.unwrap_or(k.min(16)).clamp(1, k);
    let max_dim = (2 * (k + b)).max(k + 2 * b).min(n);

    let mut sp = Space {
        ops,
        chol: factor_shifted(ops)?,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        v: DMatrix::zeros(n, max_dim),
        lv: DMatrix::zeros(n, max_dim),
        m: 0,
        h: DMatrix::zeros(0, 0),
        known: 0,
        locked: DMatrix::zeros(n, 0),
    };
    let mut block = DMatrix::zeros(n, b);
    for j in 0..b {
        let r = sp.random_vector();
        block.column_mut(j).copy_from_slice(&sp.apply_t(r.as_slice()));
    }
    let mut locked_values: Vec<f64> = Vec::with_capacity(k);
    let mut best = vec![f64::INFINITY; k];

    for restart in 0..=opts.max_restarts {
        let mut start = sp.m;
        let mut added = sp.push_block(block);
        while added > 0 && sp.m + b <= max_dim {
            let mut next = DMatrix::zeros(n, added);
            for (jj, j) in (start..start + added).enumerate() {
                next.column_mut(jj).copy_from_slice(&sp.apply_t(sp.v.column(j).as_slice()));
            }
            start = sp.m;
            added = sp.push_block(next);
        }

        let m = sp.m;
        let done = locked_values.len();
        let need = k.saturating_sub(done);
        // Once k pairs are locked, the k-th smallest is the value any
        // remaining pair has to beat.
        let kth = if done >= k {
            let mut sorted = locked_values.clone();
            sorted.sort_by(f64::total_cmp);
            sorted[k - 1]
        } else {
            f64::INFINITY
        };
        let eig = SymmetricEigen::new(sp.projected());
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &c| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[c]));
        let take = (need + b).min(m);
        let coeffs = DMatrix::from_fn(m, take, |r, c| eig.eigenvectors[(r, order[c])]);
        let theta: Vec<f64> = order[..take].iter().map(|&c| eig.eigenvalues[c]).collect();
        let ritz = sp.v.columns(0, m) * &coeffs;
        let mut ritz_l = DMatrix::zeros(n, take);
        for j in 0..take {
            ritz_l.column_mut(j).copy_from_slice(&ops.stiffness.mul_vec(ritz.column(j).as_slice()));
        }

        // Once locked and active spaces together span everything, every Ritz
        // pair is exact.
        let exhausted = m + done >= n;
        let mut converged = vec![false; take];
        for i in 0..take {
            let (y, ly) = (ritz.column(i), ritz_l.column(i));
            let r = ly
                .iter()
                .zip(y.iter())
                .zip(&ops.mass)
                .map(|((l, y), mm)| (l - theta[i] * mm * y).powi(2))
                .sum::<f64>()
                .sqrt();
            converged[i] = exhausted || r <= opts.tol * ly.norm().max(1.0);
            if done + i < k {
                best[done + i] = best[done + i].min(r);
            }
        }

        // Hard locking: converged pairs leave the active space for good, so
        // later Rayleigh–Ritz steps cannot mix them with fresh directions.
        let eligible = |i: usize| if done < k { i < need } else { theta[i] < kth };
        let newly: Vec<usize> = (0..take).filter(|&i| eligible(i) && converged[i]).collect();
        if !newly.is_empty() {
            let mut locked = DMatrix::zeros(n, done + newly.len());
            locked.columns_mut(0, done).copy_from(&sp.locked);
            for (c, &i) in newly.iter().enumerate() {
                locked.column_mut(done + c).copy_from(&ritz.column(i));
                locked_values.push(theta[i]);
            }
            sp.locked = locked;
        }
        // Ritz values bound the remaining spectrum from above, so a smallest
        // active value at or past the k-th locked one means nothing below it
        // was skipped. The active space at this point contains a random
        // direction injected after the last lock.
        let verified = done >= k && newly.is_empty() && theta.first().is_none_or(|&t| t >= kth);
        if verified || (exhausted && locked_values.len() >= k) {
            let mut idx: Vec<usize> = (0..locked_values.len()).collect();
            idx.sort_by(|&a, &c| locked_values[a].total_cmp(&locked_values[c]));
            let values = idx[..k].iter().map(|&i| locked_values[i]).collect();
            let vectors = idx[..k].iter().map(|&i| sp.locked.column(i).iter().copied().collect()).collect();
            log::debug!("converged after {restart} restarts, subspace {m}");
            return Ok(EigenBasis::assemble(values, vectors, ops, restart));
        }
        if restart == opts.max_restarts {
            break;
        }

        // Thick restart on the remaining Ritz vectors, expanding from the
        // leading ones. Pairs past the wanted range pad the block so a lone
        // straggler still gets a full block of directions.
        let rest: Vec<usize> = (0..take).filter(|&i| !newly.contains(&i)).collect();
        let keep_ritz = DMatrix::from_fn(n, rest.len(), |r, c| ritz[(r, rest[c])]);
        let keep_l = DMatrix::from_fn(n, rest.len(), |r, c| ritz_l[(r, rest[c])]);
        let keep_theta: Vec<f64> = rest.iter().map(|&i| theta[i]).collect();
        let targets = &rest[..rest.len().min(b)];
        // After a lock, a fresh random direction lets the next copy of a
        // repeated eigenvalue enter even when the block is narrower than
        // the multiplicity.
        let fresh = usize::from(!newly.is_empty());
        block = DMatrix::zeros(n, targets.len() + fresh);
        for (jj, &i) in targets.iter().enumerate() {
            block.column_mut(jj).copy_from_slice(&sp.apply_t(ritz.column(i).as_slice()));
        }
        if fresh == 1 {
            let r = sp.random_vector();
            block.column_mut(targets.len()).copy_from_slice(&sp.apply_t(r.as_slice()));
        }
        let r = rest.len();
        let mr = sp.mass_scaled(&keep_ritz);
        let gram = tr_mul(keep_ritz.columns(0, r), mr.columns(0, r)) - DMatrix::identity(r, r);
        if gram.amax() > 1e-12 || !newly.is_empty() {
            sp.m = 0;
            sp.known = 0;
            sp.push_block(keep_ritz);
        } else {
            sp.v.columns_mut(0, r).copy_from(&keep_ritz);
            sp.lv.columns_mut(0, r).copy_from(&keep_l);
            sp.m = r;
            sp.h = DMatrix::from_diagonal(&DVector::from_vec(keep_theta));
            sp.known = r;
        }
    }
    let worst = best.iter().cloned().fold(0.0, f64::max);
    Err(Error::NonConvergence {
        iterations: opts.max_restarts,
        worst_residual: worst,
        best_residuals: best,
    })
}
