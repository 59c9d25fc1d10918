use super::matrix::DenseMatrix;
use super::types::{FlowVector, MatrixSystem};
use crate::{Error, Result, Scalar};

struct Lu<T> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
}

/// LU factorization with partial pivoting. On a zero pivot returns the
/// column index at which elimination broke down.
fn factorize<T: Scalar>(a: &DenseMatrix<T>) -> std::result::Result<Lu<T>, usize> {
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = a.norm_1().max(T::min_positive_value());
    let tiny = scale * T::epsilon() * T::lit(n.max(1) as f64);
    for k in 0..n {
        let (p, pivot) =
            (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot > tiny) {
            return Err(k);
        }
        if p != k {
            perm.swap(p, k);
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
        }
        let d = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / d;
            lu[(i, k)] = factor;
            if factor != T::zero() {
                for j in (k + 1)..n {
                    lu[(i, j)] = lu[(i, j)] - factor * lu[(k, j)];
                }
            }
        }
    }
    Ok(Lu { lu, perm })
}

impl<T: Scalar> Lu<T> {
    #[allow(clippy::needless_range_loop)]
    fn solve(&self, b: &[T]) -> Vec<T> {
        let n = b.len();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    fn inverse(&self) -> DenseMatrix<T> {
        let n = self.perm.len();
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = vec![T::zero(); n];
        for j in 0..n {
            e[j] = T::one();
            let col = self.solve(&e);
            for (i, v) in col.into_iter().enumerate() {
                inv[(i, j)] = v;
            }
            e[j] = T::zero();
        }
        inv
    }
}

fn norm_inf<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// `‖A‖₁·‖A⁻¹‖₁`, or infinity for a singular matrix.
pub fn condition_estimate<T: Scalar>(a: &DenseMatrix<T>) -> T {
    match factorize(a) {
        Ok(lu) => a.norm_1() * lu.inverse().norm_1(),
        Err(_) => T::infinity(),
    }
}

/// Solves `A·s = f` for the scaling vector.
///
/// Rejects singular or ill-conditioned systems, naming the product whose
/// column breaks the factorization or dominates `A⁻¹`. Accepted solutions
/// satisfy `‖A·s − f‖∞ ≤ tol·‖f‖∞` with `tol` from [`Scalar::residual_tolerance`].
pub fn solve_scaling<T: Scalar>(sys: &MatrixSystem<T>) -> Result<Vec<T>> {
    let n = sys.products.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = sys.technology.to_dense();
    let lu = factorize(&a).map_err(|k| Error::Singular {
        product: sys.products[k].to_string(),
    })?;
    let inv = lu.inverse();
    let cond = a.norm_1() * inv.norm_1();
    if !(cond <= T::max_condition()) {
        let worst = (0..n)
            .map(|j| (j, (0..n).map(|i| inv[(i, j)].abs()).sum::<T>()))
            .fold((0, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0;
        return Err(Error::Singular {
            product: sys.products[worst].to_string(),
        });
    }

    let f = &sys.demand;
    let mut s = lu.solve(f);
    let f_norm = norm_inf(f);
    let bound = T::residual_tolerance() * f_norm;
    let residual = |s: &[T]| -> Vec<T> { a.mul_vec(s).iter().zip(f).map(|(x, y)| *x - *y).collect() };
    let mut r = residual(&s);
    if norm_inf(&r) > bound {
        let correction = lu.solve(&r);
        for (x, c) in s.iter_mut().zip(correction) {
            *x = *x - c;
        }
        r = residual(&s);
    }
    let r_norm = norm_inf(&r);
    if r_norm > bound || s.iter().any(|x| !x.is_finite()) {
        return Err(Error::Residual {
            residual: (r_norm / f_norm).to_f64_lossy(),
            bound: T::residual_tolerance().to_f64_lossy(),
        });
    }
    Ok(s)
}

/// `g = B·s` keyed by elementary flow.
pub fn inventory<T: Scalar>(sys: &MatrixSystem<T>, s: &[T]) -> FlowVector<T> {
    assert_eq!(s.len(), sys.processes.len(), "scaling vector does not match the system");
    let g = sys.intervention.mul_vec(s);
    FlowVector {
        entries: sys.elementary.iter().cloned().zip(g).collect(),
    }
}
