//! Damped Gauss-Newton on power sums of slice points, in `f64`.

use nalgebra::{DMatrix, DVector};

/// Power-sum equations `tr(X^k) = targets[k-1]` for `k = 1..=n` on the affine
/// family `X = base + sum a_i dirs[i]`, optionally followed by one equation
/// on the determinant of the `q x q` top-right block.
pub(crate) struct System {
    pub base: DMatrix<f64>,
    pub dirs: Vec<DMatrix<f64>>,
    pub targets: Vec<f64>,
    pub det_block: Option<usize>,
}

impl System {
    fn scales(&self) -> Vec<f64> {
        self.targets.iter().map(|t| t.abs().max(1.0)).collect()
    }

    fn point(&self, a: &[f64]) -> DMatrix<f64> {
        let mut x = self.base.clone();
        for (d, &c) in self.dirs.iter().zip(a) {
            x += d * c;
        }
        x
    }

    fn block(&self, x: &DMatrix<f64>, q: usize) -> DMatrix<f64> {
        x.view((0, q), (q, q)).into_owned()
    }

    /// Scaled residual and, if requested, the scaled Jacobian.
    fn eval(&self, a: &[f64], with_jacobian: bool) -> (DVector<f64>, Option<DMatrix<f64>>) {
        let n = self.base.nrows();
        let scales = self.scales();
        let rows = self.targets.len();
        let x = self.point(a);
        let mut powers = Vec::with_capacity(n + 1);
        powers.push(DMatrix::<f64>::identity(n, n));
        for k in 1..=n {
            powers.push(&powers[k - 1] * &x);
        }
        let mut r = DVector::zeros(rows);
        for k in 1..=n {
            r[k - 1] = (powers[k].trace() - self.targets[k - 1]) / scales[k - 1];
        }
        let block = self.det_block.map(|q| self.block(&x, q));
        if let Some(b) = &block {
            r[n] = (b.determinant() - self.targets[n]) / scales[n];
        }
        if !with_jacobian {
            return (r, None);
        }
        let mut jac = DMatrix::zeros(rows, self.dirs.len());
        for (i, d) in self.dirs.iter().enumerate() {
            for k in 1..=n {
                // tr(P D) = sum_{r,c} P[r,c] D[c,r]
                let t = powers[k - 1].component_mul(&d.transpose()).sum();
                jac[(k - 1, i)] = k as f64 * t / scales[k - 1];
            }
        }
        if let (Some(b), Some(q)) = (&block, self.det_block) {
            let cof = cofactors(b);
            for (i, d) in self.dirs.iter().enumerate() {
                jac[(n, i)] = cof.component_mul(&self.block(d, q)).sum() / scales[n];
            }
        }
        (r, Some(jac))
    }

    pub fn residual_norm(&self, a: &[f64]) -> f64 {
        self.eval(a, false).0.norm()
    }

    /// Runs from `start`, halving the step whenever it would increase the
    /// residual. Returns the final iterate.
    pub fn solve_from(&self, start: &[f64], max_iterations: usize, tolerance: f64) -> Vec<f64> {
        let mut a = start.to_vec();
        let (mut r, mut jac) = self.eval(&a, true);
        let mut norm = r.norm();
        for _ in 0..max_iterations {
            if !norm.is_finite() || norm < tolerance {
                break;
            }
            let j = jac.take().expect("jacobian requested");
            let Ok(delta) = j.svd(true, true).solve(&(-&r), 1e-13) else {
                break;
            };
            let mut step = 1.0;
            let mut accepted = false;
            while step > 1e-12 {
                let cand: Vec<f64> = a.iter().zip(delta.iter()).map(|(x, d)| x + step * d).collect();
                let cand_norm = self.residual_norm(&cand);
                if cand_norm < norm {
                    a = cand;
                    accepted = true;
                    break;
                }
                step /= 2.0;
            }
            if !accepted {
                break;
            }
            (r, jac) = self.eval(&a, true);
            norm = r.norm();
        }
        a
    }
}

fn cofactors(m: &DMatrix<f64>) -> DMatrix<f64> {
    let q = m.nrows();
    if q == 1 {
        return DMatrix::from_element(1, 1, 1.0);
    }
    DMatrix::from_fn(q, q, |i, j| {
        let minor = m.clone().remove_row(i).remove_column(j);
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor.determinant()
    })
}
