//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

/// Eigenvalue-sign tolerance used for signature decisions.
pub const SIGNATURE_TOLERANCE: f64 = 1e-10;

/// Largest acceptable 1-norm condition number for a metric.
pub const MAX_CONDITION: f64 = 1e12;

/// Smallest acceptable |det g|.
pub const MIN_DETERMINANT: f64 = 1e-12;

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = symmetrized(m);
    let mut values: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m)[0]
}

fn symmetrized(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Counts of negative, zero and positive eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Inertia {
    pub fn of(m: &DMatrix<f64>, tolerance: f64) -> Self {
        let mut inertia = Inertia {
            negative: 0,
            zero: 0,
            positive: 0,
        };
        for lambda in symmetric_eigenvalues(m) {
            if lambda.abs() <= tolerance {
                inertia.zero += 1;
            } else if lambda < 0.0 {
                inertia.negative += 1;
            } else {
                inertia.positive += 1;
            }
        }
        inertia
    }

    pub fn is_lorentzian(&self) -> bool {
        self.negative == 1 && self.zero == 0 && self.positive >= 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }
}

/// Why an inversion was refused.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InverseFailure {
    SmallDeterminant(f64),
    IllConditioned(f64),
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse by LU with partial pivoting, rejecting near-singular input.
pub fn checked_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>, InverseFailure> {
    let lu = m.clone().lu();
    let det = lu.determinant();
    if !det.is_finite() || det.abs() < MIN_DETERMINANT {
        return Err(InverseFailure::SmallDeterminant(det));
    }
    let inverse = lu.try_inverse().ok_or(InverseFailure::SmallDeterminant(det))?;
    let condition = one_norm(m) * one_norm(&inverse);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(InverseFailure::IllConditioned(condition));
    }
    Ok(inverse)
}

/// Symmetric inverse: `checked_inverse` followed by exact symmetrization.
pub fn checked_symmetric_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>, InverseFailure> {
    checked_inverse(m).map(|inv| symmetrized(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inertia_classes() {
        let lorentz = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
        assert!(Inertia::of(&lorentz, SIGNATURE_TOLERANCE).is_lorentzian());
        let zero = DMatrix::<f64>::zeros(4, 4);
        assert_eq!(Inertia::of(&zero, SIGNATURE_TOLERANCE).zero, 4);
        let id = DMatrix::<f64>::identity(3, 3);
        assert!(Inertia::of(&id, SIGNATURE_TOLERANCE).is_positive_definite());
    }

    #[test]
    fn inverse_rejects_singular_and_ill_conditioned() {
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(checked_inverse(&singular), Err(InverseFailure::SmallDeterminant(_))));
        let skewed = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-13]);
        assert!(checked_inverse(&skewed).is_err());
        let fine = DMatrix::from_row_slice(2, 2, &[-0.5, 0.0, 0.0, 2.0]);
        let inv = checked_inverse(&fine).unwrap();
        assert!((&fine * inv - DMatrix::identity(2, 2)).norm() < 1e-15);
    }
}
