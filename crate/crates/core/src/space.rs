//! Discretized base spaces and the vector-valued sections living on them.
//!
//! A `SpaceModel` is a finite stand-in for a locally compact point set: either
//! a genuinely finite set, the naturals truncated at `N`, or a uniform grid
//! over `[a, b]`. The truncating models carry an `unbounded` flag so that
//! decay questions ("does this section vanish at infinity?") know whether the
//! far end of the truncation represents an actual end of the space or just
//! the cut.

use std::ops::Range;

use num_complex::Complex;
use thiserror::Error;

use crate::lattice::{LatticeError, LatticeVector, NormSpec};
use crate::scalar::{to_f64, Real};

/// Hard cap on generated grid sizes; keeps typo'd steps from allocating the
/// machine away.
const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("space must contain at least one point")]
    EmptySpace,
    #[error("interval grid needs step > 0, got {step}")]
    InvalidStep { step: f64 },
    #[error("interval grid needs a <= b, got a = {a}, b = {b}")]
    InvalidInterval { a: f64, b: f64 },
    #[error("grid would contain {count} points, above the cap of {max}")]
    TooManyPoints { count: usize, max: usize },
    #[error("sections live on different space models")]
    SpaceMismatch,
    #[error("space has {points} points but {values} vectors were supplied")]
    ValueCountMismatch { points: usize, values: usize },
    #[error("all vectors of a section must share dimension and norm spec")]
    InconsistentVectors,
    #[error("support window {start}..{end} is out of bounds for {points} points")]
    SupportOutOfBounds {
        start: usize,
        end: usize,
        points: usize,
    },
    #[error("value at point {index} is nonzero outside the declared support window")]
    SupportViolation { index: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Finite model of the base point set.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceModel<T: Real> {
    /// A plain finite (hence compact) set of labeled points.
    Finite { labels: Vec<String> },
    /// `{1, 2, ..., n}` standing in for the naturals.
    TruncatedNaturals { n: usize, unbounded: bool },
    /// `a, a + step, ..., <= b`; with `unbounded` set, `b` is only the cut of
    /// `[a, infinity)`.
    IntervalGrid {
        a: T,
        b: T,
        step: T,
        unbounded: bool,
    },
}

impl<T: Real> SpaceModel<T> {
    /// Finite set with the default labels `"1" ..= "m"`.
    pub fn finite(m: usize) -> Result<Self, SpaceError> {
        if m == 0 {
            return Err(SpaceError::EmptySpace);
        }
        Ok(SpaceModel::Finite {
            labels: (1..=m).map(|k| k.to_string()).collect(),
        })
    }

    pub fn finite_labeled(labels: Vec<String>) -> Result<Self, SpaceError> {
        if labels.is_empty() {
            return Err(SpaceError::EmptySpace);
        }
        Ok(SpaceModel::Finite { labels })
    }

    pub fn truncated_naturals(n: usize) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::EmptySpace);
        }
        Ok(SpaceModel::TruncatedNaturals { n, unbounded: true })
    }

    pub fn interval_grid(a: T, b: T, step: T, unbounded: bool) -> Result<Self, SpaceError> {
        if !(step > T::zero()) {
            return Err(SpaceError::InvalidStep { step: to_f64(step) });
        }
        if !(b >= a) {
            return Err(SpaceError::InvalidInterval {
                a: to_f64(a),
                b: to_f64(b),
            });
        }
        let est = to_f64((b - a) / step) * (1.0 + 1e-12) + 1e-9;
        let count = est.floor() as usize + 1;
        if count > MAX_POINTS {
            return Err(SpaceError::TooManyPoints {
                count,
                max: MAX_POINTS,
            });
        }
        Ok(SpaceModel::IntervalGrid {
            a,
            b,
            step,
            unbounded,
        })
    }

    pub fn len(&self) -> usize {
        match self {
            SpaceModel::Finite { labels } => labels.len(),
            SpaceModel::TruncatedNaturals { n, .. } => *n,
            SpaceModel::IntervalGrid { a, b, step, .. } => {
                let est = to_f64((*b - *a) / *step) * (1.0 + 1e-12) + 1e-9;
                est.floor() as usize + 1
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when the model represents the whole space rather than a
    /// truncation of an unbounded one.
    pub fn is_compact(&self) -> bool {
        match self {
            SpaceModel::Finite { .. } => true,
            SpaceModel::TruncatedNaturals { unbounded, .. }
            | SpaceModel::IntervalGrid { unbounded, .. } => !unbounded,
        }
    }

    /// Numeric coordinate fed to symbol expressions: the 1-based index on
    /// finite sets and truncated naturals, the grid coordinate on intervals.
    pub fn coordinate(&self, index: usize) -> T {
        match self {
            SpaceModel::Finite { .. } | SpaceModel::TruncatedNaturals { .. } => {
                T::from_usize(index + 1).expect("index fits in the scalar")
            }
            SpaceModel::IntervalGrid { a, step, .. } => {
                *a + *step * T::from_usize(index).expect("index fits in the scalar")
            }
        }
    }

    pub fn coordinates(&self) -> Vec<T> {
        (0..self.len()).map(|i| self.coordinate(i)).collect()
    }

    /// Human-readable name of a point, for error messages and reports.
    pub fn label(&self, index: usize) -> String {
        match self {
            SpaceModel::Finite { labels } => labels[index].clone(),
            SpaceModel::TruncatedNaturals { .. } => (index + 1).to_string(),
            SpaceModel::IntervalGrid { .. } => format!("{}", to_f64(self.coordinate(index))),
        }
    }
}

/// What a vanishing check saw in the tail of the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingReport<T: Real> {
    pub vanishes: bool,
    /// Largest pointwise norm over the inspected tail window.
    pub tail_sup: T,
    /// Size of that window (the trailing tenth of the points, at least one).
    pub tail_points: usize,
}

/// A function from the space into `C^n`, one lattice vector per point, all
/// sharing dimension and norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Section<T: Real> {
    space: SpaceModel<T>,
    values: Vec<LatticeVector<T>>,
    support: Option<Range<usize>>,
}

impl<T: Real> Section<T> {
    pub fn new(space: SpaceModel<T>, values: Vec<LatticeVector<T>>) -> Result<Self, SpaceError> {
        if values.len() != space.len() {
            return Err(SpaceError::ValueCountMismatch {
                points: space.len(),
                values: values.len(),
            });
        }
        if let Some(first) = values.first() {
            let dim = first.dim();
            let spec = first.norm_spec();
            if !values
                .iter()
                .all(|v| v.dim() == dim && v.norm_spec() == spec)
            {
                return Err(SpaceError::InconsistentVectors);
            }
        }
        Ok(Section {
            space,
            values,
            support: None,
        })
    }

    /// Marks the section as compactly supported: zero everywhere outside
    /// `window`. The declaration is checked exactly, and it is a statement
    /// about the untruncated space, so a declared section always vanishes at
    /// infinity.
    pub fn declare_support(mut self, window: Range<usize>) -> Result<Self, SpaceError> {
        if window.start > window.end || window.end > self.values.len() {
            return Err(SpaceError::SupportOutOfBounds {
                start: window.start,
                end: window.end,
                points: self.values.len(),
            });
        }
        for (index, v) in self.values.iter().enumerate() {
            if !window.contains(&index)
                && v.coords()
                    .iter()
                    .any(|z| z.re != T::zero() || z.im != T::zero())
            {
                return Err(SpaceError::SupportViolation { index });
            }
        }
        self.support = Some(window);
        Ok(self)
    }

    pub fn space(&self) -> &SpaceModel<T> {
        &self.space
    }

    pub fn values(&self) -> &[LatticeVector<T>] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &LatticeVector<T> {
        &self.values[index]
    }

    pub fn support(&self) -> Option<&Range<usize>> {
        self.support.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, LatticeVector::dim)
    }

    pub fn norm_spec(&self) -> Option<&NormSpec<T>> {
        self.values.first().map(LatticeVector::norm_spec)
    }

    /// Supremum norm over the space: `max_x ||s(x)||`.
    pub fn norm(&self) -> T {
        self.values
            .iter()
            .map(LatticeVector::norm)
            .fold(T::zero(), T::max)
    }

    /// Checks decay at the unbounded end by measuring the trailing tenth of
    /// the points. Compact models and declared compactly supported sections
    /// vanish unconditionally.
    pub fn vanishing_check(&self, epsilon: T) -> VanishingReport<T> {
        let tail_points = self.values.len().div_ceil(10).max(1);
        let start = self.values.len().saturating_sub(tail_points);
        let tail_sup = self.values[start..]
            .iter()
            .map(LatticeVector::norm)
            .fold(T::zero(), T::max);
        let vanishes = self.space.is_compact() || self.support.is_some() || tail_sup <= epsilon;
        VanishingReport {
            vanishes,
            tail_sup,
            tail_points,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SpaceError> {
        if self.space != other.space {
            return Err(SpaceError::SpaceMismatch);
        }
        Ok(())
    }

    fn merged_support(&self, other: &Self) -> Option<Range<usize>> {
        match (&self.support, &other.support) {
            (Some(a), Some(b)) => Some(a.start.min(b.start)..a.end.max(b.end)),
            _ => None,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SpaceError> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Section {
            space: self.space.clone(),
            values,
            support: self.merged_support(other),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SpaceError> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Section {
            space: self.space.clone(),
            values,
            support: self.merged_support(other),
        })
    }

    pub fn scaled(&self, alpha: Complex<T>) -> Self {
        Section {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v.scaled(alpha)).collect(),
            support: self.support.clone(),
        }
    }
}

/// Builds the elementary tensor `f (x) z`: the section `x_k -> f_k * z`.
///
/// Its norm factors as `max_k |f_k| * ||z||`; sections of this shape are how
/// operator norms get attained.
pub fn tensor_section<T: Real>(
    space: &SpaceModel<T>,
    f: &[Complex<T>],
    z: &LatticeVector<T>,
) -> Result<Section<T>, SpaceError> {
    if f.len() != space.len() {
        return Err(SpaceError::ValueCountMismatch {
            points: space.len(),
            values: f.len(),
        });
    }
    let values = f.iter().map(|&fk| z.scaled(fk)).collect();
    Section::new(space.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::NormSpec;

    type C = Complex<f64>;
    type V = LatticeVector<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn vec2(a: C, b: C) -> V {
        V::new(vec![a, b], NormSpec::sup()).unwrap()
    }

    #[test]
    fn grid_point_counts_are_robust_to_rounding() {
        let g = SpaceModel::<f64>::interval_grid(0.0, 10.0, 0.1, true).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g.coordinate(0), 0.0);
        assert!((g.coordinate(100) - 10.0).abs() < 1e-9);

        let g = SpaceModel::<f64>::interval_grid(0.0, 1.0, 0.25, false).unwrap();
        assert_eq!(g.len(), 5);

        let degenerate = SpaceModel::<f64>::interval_grid(2.0, 2.0, 1.0, false).unwrap();
        assert_eq!(degenerate.len(), 1);
        assert_eq!(degenerate.coordinate(0), 2.0);
    }

    #[test]
    fn model_validation() {
        assert_eq!(SpaceModel::<f64>::finite(0), Err(SpaceError::EmptySpace));
        assert_eq!(
            SpaceModel::<f64>::truncated_naturals(0),
            Err(SpaceError::EmptySpace)
        );
        assert_eq!(
            SpaceModel::<f64>::interval_grid(0.0, 1.0, 0.0, true),
            Err(SpaceError::InvalidStep { step: 0.0 })
        );
        assert_eq!(
            SpaceModel::<f64>::interval_grid(1.0, 0.0, 0.5, true),
            Err(SpaceError::InvalidInterval { a: 1.0, b: 0.0 })
        );
        assert!(matches!(
            SpaceModel::<f64>::interval_grid(0.0, 1.0, 1e-9, true),
            Err(SpaceError::TooManyPoints { .. })
        ));
    }

    #[test]
    fn compactness_follows_the_flag() {
        assert!(SpaceModel::<f64>::finite(3).unwrap().is_compact());
        assert!(!SpaceModel::<f64>::truncated_naturals(10)
            .unwrap()
            .is_compact());
        assert!(!SpaceModel::<f64>::interval_grid(0.0, 5.0, 0.5, true)
            .unwrap()
            .is_compact());
        assert!(SpaceModel::<f64>::interval_grid(0.0, 5.0, 0.5, false)
            .unwrap()
            .is_compact());
    }

    #[test]
    fn coordinates_are_one_based_on_countable_models() {
        let nat = SpaceModel::<f64>::truncated_naturals(3).unwrap();
        assert_eq!(nat.coordinates(), vec![1.0, 2.0, 3.0]);
        let fin = SpaceModel::<f64>::finite(2).unwrap();
        assert_eq!(fin.coordinates(), vec![1.0, 2.0]);
        assert_eq!(fin.label(1), "2");
    }

    #[test]
    fn section_norm_is_sup_over_points() {
        let space = SpaceModel::<f64>::finite(3).unwrap();
        let s = Section::new(
            space,
            vec![
                vec2(c(2.0, 0.0), c(0.0, 0.0)),
                vec2(c(0.0, 5.0), c(1.0, 0.0)),
                vec2(c(1.0, 0.0), c(0.0, -1.0)),
            ],
        )
        .unwrap();
        assert_eq!(s.norm(), 5.0);

        let space = SpaceModel::<f64>::truncated_naturals(100).unwrap();
        let values: Vec<V> = (1..=100)
            .map(|n| {
                let x = 1.0 / n as f64;
                vec2(c(x, 0.0), c(x, 0.0))
            })
            .collect();
        let s = Section::new(space.clone(), values).unwrap();
        assert_eq!(s.norm(), 1.0);

        let zero = Section::new(
            space,
            (0..100).map(|_| V::zero(2, NormSpec::sup()).unwrap()).collect(),
        )
        .unwrap();
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn section_construction_is_validated() {
        let space = SpaceModel::<f64>::finite(2).unwrap();
        assert_eq!(
            Section::new(space.clone(), vec![vec2(c(1.0, 0.0), c(0.0, 0.0))]),
            Err(SpaceError::ValueCountMismatch {
                points: 2,
                values: 1
            })
        );
        let mixed = vec![
            vec2(c(1.0, 0.0), c(0.0, 0.0)),
            V::new(vec![c(1.0, 0.0)], NormSpec::sup()).unwrap(),
        ];
        assert_eq!(
            Section::new(space, mixed),
            Err(SpaceError::InconsistentVectors)
        );
    }

    // Frozen: on 1000 truncated naturals the tail window is the last 100
    // points, so s(n) = (1/n^2, 0) has tail_sup = 1/901^2 ~ 1.232e-6.
    #[test]
    fn vanishing_check_measures_the_trailing_tenth() {
        let space = SpaceModel::<f64>::truncated_naturals(1000).unwrap();
        let values: Vec<V> = (1..=1000u32)
            .map(|n| {
                let x = 1.0 / (n as f64 * n as f64);
                vec2(c(x, 0.0), c(0.0, 0.0))
            })
            .collect();
        let s = Section::new(space.clone(), values).unwrap();
        let report = s.vanishing_check(1e-3);
        assert!(report.vanishes);
        assert_eq!(report.tail_points, 100);
        assert_eq!(report.tail_sup, 1.0 / (901.0f64 * 901.0));

        // A constant section does not vanish on an unbounded model...
        let ones: Vec<V> = (0..1000).map(|_| vec2(c(0.0, 1.0), c(0.0, 0.0))).collect();
        let flat = Section::new(space, ones.clone()).unwrap();
        let report = flat.vanishing_check(1e-6);
        assert!(!report.vanishes);
        assert_eq!(report.tail_sup, 1.0);

        // ...but every section on a compact model does.
        let compact = SpaceModel::<f64>::finite(1000).unwrap();
        let flat = Section::new(compact, ones).unwrap();
        assert!(flat.vanishing_check(1e-6).vanishes);
    }

    #[test]
    fn declared_support_always_vanishes() {
        let space = SpaceModel::<f64>::truncated_naturals(50).unwrap();
        let values: Vec<V> = (0..50)
            .map(|i| {
                if i < 10 {
                    vec2(c(1.0, 0.0), c(0.0, 1.0))
                } else {
                    vec2(c(0.0, 0.0), c(0.0, 0.0))
                }
            })
            .collect();
        let s = Section::new(space, values)
            .unwrap()
            .declare_support(0..10)
            .unwrap();
        let report = s.vanishing_check(1e-12);
        assert!(report.vanishes);
        assert_eq!(report.tail_sup, 0.0);
    }

    #[test]
    fn support_declarations_are_checked() {
        let space = SpaceModel::<f64>::truncated_naturals(5).unwrap();
        let values: Vec<V> = (0..5).map(|_| vec2(c(1.0, 0.0), c(0.0, 0.0))).collect();
        let s = Section::new(space.clone(), values).unwrap();
        assert_eq!(
            s.clone().declare_support(0..2).unwrap_err(),
            SpaceError::SupportViolation { index: 2 }
        );
        assert_eq!(
            s.declare_support(0..9).unwrap_err(),
            SpaceError::SupportOutOfBounds {
                start: 0,
                end: 9,
                points: 5
            }
        );
    }

    #[test]
    fn tensor_section_factors_exactly() {
        // f(n) = 1/n against z = (1, 1) in sup norm: norm exactly 1.
        let space = SpaceModel::<f64>::truncated_naturals(100).unwrap();
        let f: Vec<C> = (1..=100).map(|n| c(1.0 / n as f64, 0.0)).collect();
        let z = vec2(c(1.0, 0.0), c(1.0, 0.0));
        let s = tensor_section(&space, &f, &z).unwrap();
        assert_eq!(s.norm(), 1.0);

        // Zero scalar function gives the zero section.
        let zeros = vec![c(0.0, 0.0); 100];
        assert_eq!(tensor_section(&space, &zeros, &z).unwrap().norm(), 0.0);

        // Wrong length is refused.
        assert!(matches!(
            tensor_section(&space, &f[..10], &z),
            Err(SpaceError::ValueCountMismatch { .. })
        ));
    }

    #[test]
    fn arithmetic_respects_spaces_and_supports() {
        let space = SpaceModel::<f64>::truncated_naturals(4).unwrap();
        let a = Section::new(
            space.clone(),
            (0..4).map(|_| vec2(c(1.0, 0.0), c(0.0, 0.0))).collect(),
        )
        .unwrap();
        let b = a.scaled(c(0.0, 2.0));
        let sum = a.checked_add(&b).unwrap();
        assert_eq!(sum.value(0).coords()[0], c(1.0, 2.0));
        let diff = sum.checked_sub(&b).unwrap();
        assert_eq!(diff.value(3).coords()[0], c(1.0, 0.0));

        let other = SpaceModel::<f64>::truncated_naturals(5).unwrap();
        let s5 = Section::new(
            other,
            (0..5).map(|_| vec2(c(1.0, 0.0), c(0.0, 0.0))).collect(),
        )
        .unwrap();
        assert_eq!(a.checked_add(&s5), Err(SpaceError::SpaceMismatch));
    }
}
