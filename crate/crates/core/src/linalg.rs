//! Dense Hermitian positive-definite solves via Cholesky, `A = G G^H`.

use alloc::vec;
use alloc::vec::Vec;

use crate::array::C64;
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of an `n × n` Hermitian positive-definite
/// matrix, stored row-major.
#[derive(Debug, Clone)]
pub(crate) struct Cholesky {
    n: usize,
    g: Vec<C64>,
}

impl Cholesky {
    /// Factors the row-major matrix `a`. Only the lower triangle is read.
    pub(crate) fn factor(n: usize, a: &[C64]) -> Result<Self> {
        debug_assert_eq!(a.len(), n * n);
        let mut g = vec![C64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = a[j * n + j].re;
            for k in 0..j {
                d -= g[j * n + k].norm_sqr();
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d });
            }
            let djj = libm::sqrt(d);
            g[j * n + j] = C64::new(djj, 0.0);
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= g[i * n + k] * g[j * n + k].conj();
                }
                g[i * n + j] = s / djj;
            }
        }
        Ok(Cholesky { n, g })
    }

    /// Solves `A x = b`.
    pub(crate) fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let g = &self.g;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= g[i * n + k] * x[k];
            }
            x[i] = s / g[i * n + i].re;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= g[k * n + i].conj() * x[k];
            }
            x[i] = s / g[i * n + i].re;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hpd(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
        let b: Vec<C64> = (0..n * n)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut a = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    a[i * n + j] += b[i * n + k] * b[j * n + k].conj();
                }
            }
            a[i * n + i] += C64::new(0.5, 0.0);
        }
        a
    }

    #[test]
    fn solves_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 5, 16, 33] {
            let a = random_hpd(n, &mut rng);
            let x0: Vec<C64> = (0..n)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let b: Vec<C64> = (0..n)
                .map(|i| (0..n).map(|j| a[i * n + j] * x0[j]).sum())
                .collect();
            let x = Cholesky::factor(n, &a).unwrap().solve(&b);
            let bn: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let rn: f64 = (0..n)
                .map(|i| {
                    let ax: C64 = (0..n).map(|j| a[i * n + j] * x[j]).sum();
                    (ax - b[i]).norm_sqr()
                })
                .sum::<f64>()
                .sqrt();
            assert!(rn <= 1e-10 * bn, "n={n} residual {rn}");
        }
    }

    #[test]
    fn rejects_indefinite_and_nan() {
        let a = [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(2.0, 0.0), C64::new(1.0, 0.0)];
        assert!(matches!(
            Cholesky::factor(2, &a),
            Err(Error::NotPositiveDefinite { pivot: 1, .. })
        ));
        assert!(Cholesky::factor(1, &[C64::new(f64::NAN, 0.0)]).is_err());
    }
}
