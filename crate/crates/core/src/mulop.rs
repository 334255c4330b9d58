//! Multiplication operators: a diagonal symbol evaluated over the space acts
//! pointwise on sections.
//!
//! The operator `M s = phi . s` keeps every structural question local: its
//! norm is the sup of the pointwise operator norms, its inverse is the
//! pointwise inverse, and `lambda` avoids its spectrum exactly when
//! `1 / |lambda - entry|` stays bounded over all points and coordinates.

use num_complex::Complex;
use thiserror::Error;

use crate::dsl::PhiSpec;
use crate::lattice::{CentralOperator, LatticeError};
use crate::scalar::{real, to_f64, Real};
use crate::space::{Section, SpaceError, SpaceModel, VanishingReport};

/// Default tolerance for domain membership (decay of `phi . s`).
pub fn default_domain_tol<T: Real>() -> T {
    real(1e-6)
}

/// Default distance below which `lambda` counts as sitting on an entry.
pub fn default_pole_tol<T: Real>() -> T {
    real(1e-9)
}

/// Default resolvent-norm level declared "effectively unbounded".
pub fn default_threshold<T: Real>() -> T {
    real(1e6)
}

#[derive(Debug, Error, PartialEq)]
pub enum MulOpError {
    #[error("space has {points} points but {ops} operators were supplied")]
    OpCountMismatch { points: usize, ops: usize },
    #[error("per-point operators must share one nonzero dimension")]
    InconsistentOps,
    #[error("operator and section live on different space models")]
    SpaceMismatch,
    #[error("operator dimension {op_dim} does not match section dimension {section_dim}")]
    DimensionMismatch { op_dim: usize, section_dim: usize },
    #[error(
        "symbol entry {entry} at point {label} has modulus {modulus:e} within tolerance {tol:e}; not invertible"
    )]
    NotInvertible {
        index: usize,
        label: String,
        entry: usize,
        modulus: f64,
        tol: f64,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A diagonal symbol sampled over a space: one central operator per point.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiField<T: Real> {
    space: SpaceModel<T>,
    ops: Vec<CentralOperator<T>>,
    source: Option<PhiSpec<T>>,
}

impl<T: Real> PhiField<T> {
    pub fn new(space: SpaceModel<T>, ops: Vec<CentralOperator<T>>) -> Result<Self, MulOpError> {
        Self::build(space, ops, None)
    }

    pub fn with_source(
        space: SpaceModel<T>,
        ops: Vec<CentralOperator<T>>,
        source: PhiSpec<T>,
    ) -> Result<Self, MulOpError> {
        Self::build(space, ops, Some(source))
    }

    fn build(
        space: SpaceModel<T>,
        ops: Vec<CentralOperator<T>>,
        source: Option<PhiSpec<T>>,
    ) -> Result<Self, MulOpError> {
        if ops.len() != space.len() {
            return Err(MulOpError::OpCountMismatch {
                points: space.len(),
                ops: ops.len(),
            });
        }
        let dim = ops.first().map_or(0, CentralOperator::dim);
        if dim == 0 || !ops.iter().all(|op| op.dim() == dim) {
            return Err(MulOpError::InconsistentOps);
        }
        Ok(PhiField { space, ops, source })
    }

    pub fn space(&self) -> &SpaceModel<T> {
        &self.space
    }

    pub fn ops(&self) -> &[CentralOperator<T>] {
        &self.ops
    }

    pub fn op(&self, index: usize) -> &CentralOperator<T> {
        &self.ops[index]
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops.first().map_or(0, CentralOperator::dim)
    }

    /// The expressions this field was built from, when it was built from any.
    pub fn source(&self) -> Option<&PhiSpec<T>> {
        self.source.as_ref()
    }

    /// Sup over points of the pointwise operator norm.
    pub fn sup_norm(&self) -> T {
        self.ops
            .iter()
            .map(CentralOperator::op_norm)
            .fold(T::zero(), T::max)
    }

    /// Entrywise transform; the result no longer tracks source expressions.
    pub fn map_entries(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> PhiField<T> {
        PhiField {
            space: self.space.clone(),
            ops: self
                .ops
                .iter()
                .map(|op| CentralOperator::new(op.diag().iter().map(|&d| f(d)).collect()))
                .collect(),
            source: None,
        }
    }

    /// Smallest entry modulus over all points, with its location.
    pub fn min_entry_modulus(&self) -> (usize, usize, T) {
        let mut best = (0usize, 0usize, T::infinity());
        for (index, op) in self.ops.iter().enumerate() {
            for (entry, d) in op.diag().iter().enumerate() {
                let m = d.norm();
                if m < best.2 {
                    best = (index, entry, m);
                }
            }
        }
        best
    }
}

/// Did the growth of the per-point norms along the truncation look like it
/// keeps going, or like it levels off?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthFlag {
    Increasing,
    Saturating,
}

impl GrowthFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            GrowthFlag::Increasing => "increasing",
            GrowthFlag::Saturating => "saturating",
        }
    }
}

/// Heuristic over a nonnegative per-point profile: increasing when the
/// trailing half climbs monotonically (up to rounding slack) by at least 5%
/// overall. Compact models are complete, so nothing grows past them.
pub(crate) fn growth_flag<T: Real>(per_point: &[T], compact: bool) -> GrowthFlag {
    if compact {
        return GrowthFlag::Saturating;
    }
    let tail = &per_point[per_point.len() / 2..];
    if tail.len() < 2 {
        return GrowthFlag::Saturating;
    }
    let slack: T = real(1e-12);
    let monotone = tail
        .windows(2)
        .all(|w| w[1] >= w[0] - slack * w[0].abs().max(T::one()));
    let first = tail[0];
    let last = tail[tail.len() - 1];
    let grew = if first == T::zero() {
        last > T::zero()
    } else {
        last >= first * real(1.05)
    };
    if monotone && grew {
        GrowthFlag::Increasing
    } else {
        GrowthFlag::Saturating
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessReport<T: Real> {
    /// The sup norm over the truncation (all of it, not a sample of it).
    pub sampled_norm: T,
    pub growth: GrowthFlag,
}

/// Membership verdict for the maximal domain, with the decay evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainReport<T: Real> {
    pub member: bool,
    pub evidence: VanishingReport<T>,
}

/// `sup_x max_i 1 / |lambda - phi_i(x)|` together with the distance that
/// produced it. `sup` is infinite when `lambda` is within `pole_tol` of an
/// entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventBound<T: Real> {
    pub sup: T,
    pub min_distance: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralClass {
    Spectrum,
    ResolventSet,
}

impl SpectralClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralClass::Spectrum => "spectrum",
            SpectralClass::ResolventSet => "resolvent_set",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint<T: Real> {
    pub lambda: Complex<T>,
    pub min_distance: T,
    pub resolvent_sup: T,
    pub class: SpectralClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport<T: Real> {
    pub points: Vec<SpectrumPoint<T>>,
    pub threshold: T,
    pub pole_tol: T,
}

/// The multiplication operator `s -> phi . s` on its maximal domain.
#[derive(Debug, Clone, PartialEq)]
pub struct MulOperator<T: Real> {
    phi: PhiField<T>,
    domain_tolerance: T,
}

impl<T: Real> MulOperator<T> {
    pub fn new(phi: PhiField<T>) -> Self {
        MulOperator {
            phi,
            domain_tolerance: default_domain_tol(),
        }
    }

    pub fn with_domain_tolerance(phi: PhiField<T>, domain_tolerance: T) -> Self {
        MulOperator {
            phi,
            domain_tolerance,
        }
    }

    pub fn phi(&self) -> &PhiField<T> {
        &self.phi
    }

    pub fn domain_tolerance(&self) -> T {
        self.domain_tolerance
    }

    pub(crate) fn check_section(&self, s: &Section<T>) -> Result<(), MulOpError> {
        if s.space() != self.phi.space() {
            return Err(MulOpError::SpaceMismatch);
        }
        if s.dim() != self.phi.dim() {
            return Err(MulOpError::DimensionMismatch {
                op_dim: self.phi.dim(),
                section_dim: s.dim(),
            });
        }
        Ok(())
    }

    /// Pointwise application `(M s)(x) = phi(x) s(x)`. Declared compact
    /// support survives, since multiplication cannot widen it.
    pub fn apply(&self, s: &Section<T>) -> Result<Section<T>, MulOpError> {
        self.check_section(s)?;
        let values = self
            .phi
            .ops()
            .iter()
            .zip(s.values())
            .map(|(op, v)| op.apply(v))
            .collect::<Result<Vec<_>, _>>()?;
        let out = Section::new(self.phi.space().clone(), values).map_err(MulOpError::from)?;
        match s.support() {
            Some(w) => Ok(out
                .declare_support(w.clone())
                .expect("zeros are preserved by pointwise multiplication")),
            None => Ok(out),
        }
    }

    /// Does `phi . s` still vanish at infinity? That is exactly membership
    /// of `s` in the maximal domain.
    pub fn in_domain(&self, s: &Section<T>) -> Result<DomainReport<T>, MulOpError> {
        let image = self.apply(s)?;
        let evidence = image.vanishing_check(self.domain_tolerance);
        Ok(DomainReport {
            member: evidence.vanishes,
            evidence,
        })
    }

    /// `||M|| = sup_x ||phi(x)||`, finite on every truncation.
    pub fn norm(&self) -> T {
        self.phi.sup_norm()
    }

    /// Norm over the truncation plus a growth verdict for the far end.
    pub fn is_bounded(&self) -> BoundednessReport<T> {
        let per_point: Vec<T> = self
            .phi
            .ops()
            .iter()
            .map(CentralOperator::op_norm)
            .collect();
        let growth = growth_flag(&per_point, self.phi.space().is_compact());
        BoundednessReport {
            sampled_norm: self.norm(),
            growth,
        }
    }

    /// Pointwise inverse `M^{-1} = M_{1/phi}`, refused when any entry drops
    /// to `tol` or below.
    pub fn invert(&self, tol: T) -> Result<MulOperator<T>, MulOpError> {
        let (index, entry, modulus) = self.phi.min_entry_modulus();
        if modulus <= tol {
            return Err(MulOpError::NotInvertible {
                index,
                label: self.phi.space().label(index),
                entry,
                modulus: to_f64(modulus),
                tol: to_f64(tol),
            });
        }
        let one = Complex::new(T::one(), T::zero());
        let inv = self.phi.map_entries(|d| one / d);
        Ok(MulOperator {
            phi: inv,
            domain_tolerance: self.domain_tolerance,
        })
    }

    /// Resolvent norm bound at `lambda` over the truncation.
    pub fn resolvent_sup(&self, lambda: Complex<T>, pole_tol: T) -> ResolventBound<T> {
        let mut min_distance = T::infinity();
        for op in self.phi.ops() {
            for d in op.diag() {
                min_distance = min_distance.min((lambda - d).norm());
            }
        }
        let sup = if min_distance <= pole_tol {
            T::infinity()
        } else {
            T::one() / min_distance
        };
        ResolventBound { sup, min_distance }
    }

    /// Classifies each grid point: spectrum when `lambda` touches an entry
    /// (within `pole_tol`) or the resolvent bound reaches `threshold`.
    pub fn spectrum_scan(
        &self,
        grid: &[Complex<T>],
        threshold: T,
        pole_tol: T,
    ) -> SpectrumReport<T> {
        let points = grid
            .iter()
            .map(|&lambda| {
                let rb = self.resolvent_sup(lambda, pole_tol);
                let class = if rb.min_distance <= pole_tol || rb.sup >= threshold {
                    SpectralClass::Spectrum
                } else {
                    SpectralClass::ResolventSet
                };
                SpectrumPoint {
                    lambda,
                    min_distance: rb.min_distance,
                    resolvent_sup: rb.sup,
                    class,
                }
            })
            .collect();
        SpectrumReport {
            points,
            threshold,
            pole_tol,
        }
    }
}
