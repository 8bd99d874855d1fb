use crate::precision::Real;

/// Populations `p_q` for consecutive momenta starting at `q_min`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumProfile<R> {
    q_min: i64,
    values: Vec<R>,
}

impl<R: Real> MomentumProfile<R> {
    pub fn new(q_min: i64, values: Vec<R>) -> Self {
        assert!(!values.is_empty(), "empty momentum profile");
        MomentumProfile { q_min, values }
    }

    pub fn q_min(&self) -> i64 {
        self.q_min
    }

    pub fn q_max(&self) -> i64 {
        self.q_min + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn get(&self, q: i64) -> Option<&R> {
        let i = q - self.q_min;
        if i < 0 {
            return None;
        }
        self.values.get(i as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &R)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, p)| (self.q_min + i as i64, p))
    }

    pub fn to_f64(&self) -> MomentumProfile<f64> {
        MomentumProfile::new(self.q_min, self.values.iter().map(Real::to_f64).collect())
    }
}

/// Mean-square width `sum_q q^2 p_q`.
pub fn sigma2<R: Real>(profile: &MomentumProfile<R>) -> R {
    let zero = profile.values[0].like_i64(0);
    profile.iter().fold(zero, |acc, (q, p)| {
        if q == 0 {
            acc
        } else {
            acc + &(p.like_i64(q * q) * p)
        }
    })
}

/// Population of the `q = 0` mode.
pub fn condensate_fraction<R: Real>(profile: &MomentumProfile<R>) -> R {
    profile
        .get(0)
        .cloned()
        .unwrap_or_else(|| profile.values[0].like_i64(0))
}

/// `sum_q p_q^2`, the per-realization fourth moment entering the IPR.
pub fn ipr_moment<R: Real>(profile: &MomentumProfile<R>) -> R {
    let mut iter = profile.values.iter();
    let mut acc = iter.next().expect("empty profile").square();
    for p in iter {
        acc += &p.square();
    }
    acc
}

/// Inverse participation ratio `1 / mean(sum_q |psi_q|^4)`, from fourth
/// moments already averaged over the ensemble.
pub fn ipr<R: Real>(mean_fourth_moment: &R) -> R {
    mean_fourth_moment.like_i64(1) / mean_fourth_moment
}
