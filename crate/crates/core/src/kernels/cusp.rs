use crate::error::{Result, ZhlError};

/// Fourier coefficients `lambda_1..lambda_N` of a cusp form of the given
/// (even) weight, normalized so `lambda_1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspFormCoefficients {
    weight: u32,
    coeffs: Vec<f64>,
}

impl CuspFormCoefficients {
    pub fn new(weight: u32, coeffs: Vec<f64>) -> Result<Self> {
        if weight % 2 != 0 || weight < 2 {
            return Err(ZhlError::InvalidParameter(format!("cusp form weight {weight} must be even")));
        }
        match coeffs.first() {
            Some(&l1) if l1 == 1.0 => {}
            _ => return Err(ZhlError::InvalidParameter("coefficients must start with lambda_1 = 1".into())),
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(ZhlError::NonFinite("cusp form coefficient"));
        }
        Ok(Self { weight, coeffs })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `lambda_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.coeffs.get(i)).copied()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Largest relative violation of `lambda_{mn} = lambda_m lambda_n` over
    /// coprime pairs with `mn <= N`.
    pub fn multiplicativity_defect(&self) -> f64 {
        let n = self.coeffs.len();
        let mut worst: f64 = 0.0;
        for a in 2..=n {
            for b in 2..=n / a {
                if gcd(a, b) != 1 {
                    continue;
                }
                let lhs = self.coeffs[a * b - 1];
                let rhs = self.coeffs[a - 1] * self.coeffs[b - 1];
                let scale = lhs.abs().max(1.0);
                worst = worst.max((lhs - rhs).abs() / scale);
            }
        }
        worst
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Ramanujan tau values `tau(1..=n_max)`: coefficients of
/// `q prod_{k>=1} (1 - q^k)^24`, by exact integer series multiplication.
///
/// Panics if an intermediate coefficient overflows `i128`, which does not
/// happen below `n_max` in the tens of thousands.
pub fn tau_values(n_max: usize) -> Vec<i128> {
    // prod (1 - q^k)^24 truncated at q^{n_max - 1}
    let len = n_max;
    let mut c = vec![0i128; len];
    if len == 0 {
        return c;
    }
    c[0] = 1;
    for k in 1..len {
        for _ in 0..24 {
            for j in (k..len).rev() {
                c[j] = c[j].checked_sub(c[j - k]).expect("tau expansion overflow");
            }
        }
    }
    c
}

/// Coefficients of the weight-12 discriminant form.
pub fn compute_tau_coefficients(n_max: usize) -> Result<CuspFormCoefficients> {
    if n_max < 1 {
        return Err(ZhlError::InvalidParameter("n_max must be at least 1".into()));
    }
    CuspFormCoefficients::new(12, tau_values(n_max).into_iter().map(|t| t as f64).collect())
}
