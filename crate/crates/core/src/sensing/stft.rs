use super::{SensingModel, SensingRow};
use crate::algebra::{Hypercomplex, Quaternion};
use crate::error::{check_len, HprError, Result};
use crate::transforms::QstftPlan;

/// QSTFT magnitude model: row `l` is section `l / N`, frequency `l % N`, so
/// `m = R N`.
#[derive(Debug, Clone)]
pub struct StftModel {
    plan: QstftPlan,
}

impl StftModel {
    pub fn new(plan: QstftPlan) -> Self {
        StftModel { plan }
    }

    pub fn plan(&self) -> &QstftPlan {
        &self.plan
    }
}

impl SensingModel for StftModel {
    type Scalar = Quaternion;

    fn m(&self) -> usize {
        self.plan.sections() * self.plan.signal_len()
    }

    fn n(&self) -> usize {
        self.plan.signal_len()
    }

    fn forward(&self, x: &[Quaternion]) -> Result<Vec<Quaternion>> {
        self.plan.apply(x)
    }

    fn adjoint(&self, u: &[Quaternion]) -> Result<Vec<Quaternion>> {
        check_len(self.m(), u.len())?;
        let n = self.n();
        let scale = 1.0 / (n as f64).sqrt();
        let mut out = vec![Quaternion::ZERO; n];
        for r in 0..self.plan.sections() {
            let w = self.plan.shifted_window(r);
            let section = &u[r * n..(r + 1) * n];
            for (q, o) in out.iter_mut().enumerate() {
                if w[q] == Quaternion::ZERO {
                    continue;
                }
                // sum_s e^{+i 2 pi s q / N} u(r, s)
                let back = section
                    .iter()
                    .enumerate()
                    .fold(Quaternion::ZERO, |acc, (s, &v)| {
                        let th = 2.0 * std::f64::consts::PI * ((s * q) % n) as f64 / n as f64;
                        acc + Quaternion::new(th.cos(), th.sin(), 0.0, 0.0) * v
                    });
                *o += w[q].conj() * back * scale;
            }
        }
        Ok(out)
    }

    fn row(&self, l: usize) -> Result<SensingRow<Quaternion>> {
        if l >= self.m() {
            return Err(HprError::Index {
                index: l,
                len: self.m(),
            });
        }
        let n = self.n();
        let (r, s) = (l / n, l % n);
        Ok(SensingRow {
            terms: (0..n)
                .map(|q| (q, self.plan.factor(r, s, q), Quaternion::ONE))
                .filter(|t| !t.1.is_zero())
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sensing::testutil::{check_consistency, random_vec};

    #[test]
    fn consistency_and_count() {
        let mut rng = rng_from_seed(3);
        let window = random_vec(&mut rng, 3);
        let model = StftModel::new(QstftPlan::new(window, 2, 8).unwrap());
        assert_eq!(model.m(), 5 * 8);
        check_consistency(&model, &mut rng);
    }
}
