//! Euclidean, spherical and geometric dual curvature measures, the mixed
//! volume and the anisotropic weighted total variation.

pub mod measure;
pub mod ops;

pub use measure::{compare, w1_line, Ambient, Atom, DiscreteMeasure, MeasureComparison};
pub use ops::{
    anisotropic_perimeter, body_curvature_measure, coarea_check, default_binning, euclidean_curvature_measure,
    euclidean_curvature_measure_on, euclidean_curvature_measure_subdivided, mixed_volume_v1,
    spherical_curvature_measure, support_body, weighted_total_variation, CoareaReport, EuclideanMeasureReport,
    TotalVariation,
};
