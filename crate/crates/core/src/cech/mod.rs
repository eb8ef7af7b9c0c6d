//! Čech cohomology on schemes covered by monomially glued affine charts.

mod bundle;
mod cochain;
mod cohomology;
mod parse;
mod scheme;

pub use bundle::{FnMatrix, VectorBundle};
pub use cochain::{CechCochain, Coefficients, FormMatrix};
pub use cohomology::{
    class_coordinates, class_equal, cohomology_group, cohomology_report, de_rham_class_equal,
    de_rham_cohomology, is_coboundary, CohomologyGroupResult, SheafSpec, TotalCochain, Weight,
};
pub use parse::{
    parse_laurent, Base, BundleSpec, ChartDoc, Document, GluingDoc, SchemeSpec, TransitionDoc,
};
pub use scheme::{ChartSpec, CoveredScheme};
