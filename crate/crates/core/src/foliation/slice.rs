use nalgebra::DMatrix;

use crate::dsl::ScalarField;
use crate::error::{Error, Result};
use crate::geometry::{check_field, eval_metric, Christoffels, Point, SpacetimeModel};
use crate::linalg::{self, Inertia, SIGNATURE_TOLERANCE};

/// The hypersurface `x^coordinate = value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceSpec {
    pub coordinate: usize,
    pub value: f64,
}

impl SliceSpec {
    pub fn new(coordinate: usize, value: f64) -> Self {
        Self { coordinate, value }
    }

    fn contains(&self, p: &[f64]) -> bool {
        (p[self.coordinate] - self.value).abs() <= 1e-12 * self.value.abs().max(1.0)
    }
}

/// Hessian of `f|_Σ` with respect to the induced metric, in the chart
/// coordinates left on the slice.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceHessian {
    /// Indices of the ambient coordinates that chart the slice.
    pub coordinates: Vec<usize>,
    pub hessian: DMatrix<f64>,
    pub induced_metric: DMatrix<f64>,
    pub induced_inverse: DMatrix<f64>,
}

impl SliceHessian {
    /// `h^{ij} D_i D_j f`.
    pub fn laplacian(&self) -> f64 {
        self.induced_inverse.component_mul(&self.hessian).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::symmetric_eigenvalues(&self.hessian)
    }
}

/// `D_i D_j f = ∂_i∂_j f − γ^k_{ij} ∂_k f` on the slice, where `γ` is the
/// connection of the induced metric.
pub fn slice_restricted_hessian(
    f: &ScalarField,
    model: &SpacetimeModel,
    slice: SliceSpec,
    p: &Point,
) -> Result<SliceHessian> {
    check_field(f, model)?;
    let n = model.dimension();
    if slice.coordinate >= n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: slice.coordinate + 1,
        });
    }
    model.check_point(p)?;
    if !slice.contains(p) {
        return Err(Error::OutOfDomain(format!(
            "{} = {} is not on the slice {} = {}",
            model.coordinates()[slice.coordinate],
            p[slice.coordinate],
            model.coordinates()[slice.coordinate],
            slice.value
        )));
    }
    let metric = eval_metric(model, p)?;
    let coordinates: Vec<usize> = (0..n).filter(|k| *k != slice.coordinate).collect();
    let m = coordinates.len();
    let restrict = |a: &DMatrix<f64>| DMatrix::from_fn(m, m, |i, j| a[(coordinates[i], coordinates[j])]);

    let induced_metric = restrict(&metric.g);
    if !Inertia::of(&induced_metric, SIGNATURE_TOLERANCE).is_positive_definite() {
        return Err(Error::NonSpacelikeSlice { point: p.to_vec() });
    }
    let induced_inverse = linalg::checked_symmetric_inverse(&induced_metric).map_err(|_| Error::SingularMetric {
        point: p.to_vec(),
        reason: "induced metric is not invertible".into(),
    })?;
    let dh: Vec<DMatrix<f64>> = coordinates.iter().map(|&k| restrict(&metric.dg[k])).collect();
    let gamma = Christoffels::from_metric(&induced_inverse, &dh);

    let jet = f.jet(p)?;
    let df: Vec<f64> = coordinates.iter().map(|&k| jet.gradient[k]).collect();
    let mut hessian = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let correction: f64 = (0..m).map(|k| gamma.get(k, i, j) * df[k]).sum();
            let value = jet.hessian(coordinates[i], coordinates[j]) - correction;
            hessian[(i, j)] = value;
            hessian[(j, i)] = value;
        }
    }
    Ok(SliceHessian {
        coordinates,
        hessian,
        induced_metric,
        induced_inverse,
    })
}

pub fn slice_laplacian(f: &ScalarField, model: &SpacetimeModel, slice: SliceSpec, p: &Point) -> Result<f64> {
    Ok(slice_restricted_hessian(f, model, slice, p)?.laplacian())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn flat_slice_restriction_is_identity() {
        let m = catalog::model("minkowski-cartesian").unwrap();
        let f = catalog::canonical_field(&m, 0.5).unwrap();
        let p = Point::from([0.0, 0.3, -0.2, 0.9]);
        let s = slice_restricted_hessian(&f, &m, SliceSpec::new(0, 0.0), &p).unwrap();
        assert_eq!(s.hessian, DMatrix::identity(3, 3));
        assert_eq!(s.laplacian(), 3.0);
        let g = m.field("x^2 + y^2 + z^2", &[]).unwrap();
        assert_eq!(slice_laplacian(&g, &m, SliceSpec::new(0, 0.0), &p).unwrap(), 6.0);
    }

    #[test]
    fn spherical_slice_uses_induced_connection() {
        // ½r² on flat space: D_i D_j f = h_ij, Laplacian 3.
        let m = catalog::model("minkowski-spherical").unwrap();
        let f = m.field("0.5*r^2", &[]).unwrap();
        let p = Point::from([0.0, 1.7, 1.1, 0.4]);
        let s = slice_restricted_hessian(&f, &m, SliceSpec::new(0, 0.0), &p).unwrap();
        assert!((&s.hessian - &s.induced_metric).abs().max() < 1e-12);
        assert!((s.laplacian() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn milne_slice_sees_a_constant() {
        let m = catalog::model("milne").unwrap();
        let f = catalog::canonical_field(&m, 1.0).unwrap();
        let p = Point::from([1.3, 0.6, 1.2, 2.0]);
        let s = slice_restricted_hessian(&f, &m, SliceSpec::new(0, 1.3), &p).unwrap();
        assert!(s.hessian.abs().max() < 1e-12);
    }

    #[test]
    fn timelike_slice_is_rejected() {
        let m = catalog::model("minkowski-cartesian").unwrap();
        let f = m.field("t^2", &[]).unwrap();
        let p = Point::from([0.4, 0.0, 0.1, 0.2]);
        assert!(matches!(
            slice_restricted_hessian(&f, &m, SliceSpec::new(1, 0.0), &p),
            Err(Error::NonSpacelikeSlice { .. })
        ));
        assert!(matches!(
            slice_restricted_hessian(&f, &m, SliceSpec::new(0, 0.0), &p),
            Err(Error::OutOfDomain(_))
        ));
    }
}
