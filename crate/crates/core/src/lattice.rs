//! Finite-dimensional complex lattice vectors and the diagonal operators
//! acting on them.
//!
//! The coordinate space is `C^n` with the coordinatewise order on moduli.
//! Every norm offered here is absolute (it only sees coordinate moduli) and
//! monotone, so the operators that commute with the order structure are
//! exactly the diagonal ones, and their operator norm is the largest diagonal
//! modulus regardless of which norm is in force.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{real, to_f64, Real};

/// Default tolerance below which a diagonal modulus counts as zero.
pub fn default_tol<T: Real>() -> T {
    real(1e-12)
}

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands carry different norm specifications")]
    NormSpecMismatch,
    #[error("p-norm exponent must satisfy p >= 1, got {p}")]
    InvalidExponent { p: f64 },
    #[error("weight {index} must be strictly positive, got {weight}")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("norm specification carries {expected} weights but the vector has {got} coordinates")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("diagonal entry {index} has modulus {modulus:e}, below the invertibility tolerance {tol:e}")]
    NotInvertible {
        index: usize,
        modulus: f64,
        tol: f64,
    },
    #[error(
        "lambda is within {distance:e} of diagonal entry {index}, inside the pole tolerance {tol:e}"
    )]
    LambdaInPointSpectrum {
        index: usize,
        distance: f64,
        tol: f64,
    },
}

/// Which norm `C^n` carries.
///
/// All three families are absolute and monotone: the norm of a vector only
/// depends on the moduli of its coordinates, and growing a modulus grows the
/// norm.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec<T: Real> {
    /// `max_i |v_i|`
    Sup,
    /// `(sum_i |v_i|^p)^(1/p)` with `p >= 1`
    P(T),
    /// `max_i w_i |v_i|` with strictly positive weights
    WeightedSup(Vec<T>),
}

impl<T: Real> NormSpec<T> {
    pub fn sup() -> Self {
        NormSpec::Sup
    }

    pub fn p(p: T) -> Result<Self, LatticeError> {
        if p >= T::one() {
            Ok(NormSpec::P(p))
        } else {
            Err(LatticeError::InvalidExponent { p: to_f64(p) })
        }
    }

    pub fn weighted_sup(weights: Vec<T>) -> Result<Self, LatticeError> {
        for (index, &w) in weights.iter().enumerate() {
            if !(w > T::zero()) {
                return Err(LatticeError::InvalidWeight {
                    index,
                    weight: to_f64(w),
                });
            }
        }
        Ok(NormSpec::WeightedSup(weights))
    }

    /// Checks that the spec can measure vectors of dimension `dim`.
    fn check_dim(&self, dim: usize) -> Result<(), LatticeError> {
        match self {
            NormSpec::WeightedSup(w) if w.len() != dim => Err(LatticeError::WeightCountMismatch {
                expected: w.len(),
                got: dim,
            }),
            _ => Ok(()),
        }
    }

    /// Norm of a modulus profile (nonnegative reals, one per coordinate).
    fn of_moduli(&self, moduli: impl Iterator<Item = T>) -> T {
        match self {
            NormSpec::Sup => moduli.fold(T::zero(), T::max),
            NormSpec::P(p) => {
                let sum = moduli.fold(T::zero(), |acc, m| acc + m.powf(*p));
                sum.powf(T::one() / *p)
            }
            NormSpec::WeightedSup(w) => moduli
                .zip(w.iter())
                .map(|(m, &wi)| wi * m)
                .fold(T::zero(), T::max),
        }
    }
}

/// A vector in `C^n` together with the norm it is measured in.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector<T: Real> {
    coords: Vec<Complex<T>>,
    norm_spec: NormSpec<T>,
}

impl<T: Real> LatticeVector<T> {
    pub fn new(coords: Vec<Complex<T>>, norm_spec: NormSpec<T>) -> Result<Self, LatticeError> {
        norm_spec.check_dim(coords.len())?;
        Ok(LatticeVector { coords, norm_spec })
    }

    pub fn zero(dim: usize, norm_spec: NormSpec<T>) -> Result<Self, LatticeError> {
        Self::new(vec![Complex::new(T::zero(), T::zero()); dim], norm_spec)
    }

    /// Coordinate vector `e_k`, the canonical norm-attaining direction.
    pub fn coordinate(dim: usize, k: usize, norm_spec: NormSpec<T>) -> Result<Self, LatticeError> {
        let mut coords = vec![Complex::new(T::zero(), T::zero()); dim];
        coords[k] = Complex::new(T::one(), T::zero());
        Self::new(coords, norm_spec)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex<T>] {
        &self.coords
    }

    pub fn norm_spec(&self) -> &NormSpec<T> {
        &self.norm_spec
    }

    /// Coordinatewise modulus `|v| = (|v_1|, ..., |v_n|)`, the lattice
    /// absolute value. Its norm equals the norm of `v` because every
    /// `NormSpec` is absolute.
    pub fn modulus(&self) -> LatticeVector<T> {
        LatticeVector {
            coords: self
                .coords
                .iter()
                .map(|z| Complex::new(z.norm(), T::zero()))
                .collect(),
            norm_spec: self.norm_spec.clone(),
        }
    }

    pub fn norm(&self) -> T {
        self.norm_spec.of_moduli(self.coords.iter().map(|z| z.norm()))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LatticeError> {
        if self.dim() != other.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        if self.norm_spec != other.norm_spec {
            return Err(LatticeError::NormSpecMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_compatible(other)?;
        Ok(LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            norm_spec: self.norm_spec.clone(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_compatible(other)?;
        Ok(LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
            norm_spec: self.norm_spec.clone(),
        })
    }

    pub fn scaled(&self, alpha: Complex<T>) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|z| z * alpha).collect(),
            norm_spec: self.norm_spec.clone(),
        }
    }
}

/// A diagonal operator on `C^n`: the general form of an operator that
/// respects the coordinatewise order structure.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralOperator<T: Real> {
    diag: Vec<Complex<T>>,
}

impl<T: Real> CentralOperator<T> {
    pub fn new(diag: Vec<Complex<T>>) -> Self {
        CentralOperator { diag }
    }

    pub fn identity(dim: usize) -> Self {
        CentralOperator {
            diag: vec![Complex::new(T::one(), T::zero()); dim],
        }
    }

    pub fn zero(dim: usize) -> Self {
        CentralOperator {
            diag: vec![Complex::new(T::zero(), T::zero()); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Complex<T>] {
        &self.diag
    }

    pub fn apply(&self, v: &LatticeVector<T>) -> Result<LatticeVector<T>, LatticeError> {
        if v.dim() != self.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim(),
                got: v.dim(),
            });
        }
        Ok(LatticeVector {
            coords: self
                .diag
                .iter()
                .zip(v.coords())
                .map(|(d, z)| d * z)
                .collect(),
            norm_spec: v.norm_spec().clone(),
        })
    }

    /// Operator norm: `max_i |diag_i|`, valid for every `NormSpec` because
    /// the norms are absolute and monotone and coordinate vectors attain the
    /// bound exactly.
    pub fn op_norm(&self) -> T {
        self.diag
            .iter()
            .map(|d| d.norm())
            .fold(T::zero(), T::max)
    }

    /// Index and modulus of the smallest diagonal entry.
    pub fn min_modulus(&self) -> Option<(usize, T)> {
        self.diag
            .iter()
            .enumerate()
            .map(|(i, d)| (i, d.norm()))
            .fold(None, |best, (i, m)| match best {
                Some((_, bm)) if bm <= m => best,
                _ => Some((i, m)),
            })
    }

    /// Entrywise exponential `exp(D) = diag(exp(d_1), ..., exp(d_n))`.
    pub fn exp(&self) -> CentralOperator<T> {
        CentralOperator {
            diag: self.diag.iter().map(|d| d.exp()).collect(),
        }
    }

    /// `exp(t D)` in one pass; the time-`t` multiplier of the flow generated
    /// by `D`.
    pub fn exp_scaled(&self, t: T) -> CentralOperator<T> {
        CentralOperator {
            diag: self.diag.iter().map(|d| (d * t).exp()).collect(),
        }
    }

    /// Entrywise inverse, refused when any entry is within `tol` of zero.
    pub fn inverse(&self, tol: T) -> Result<CentralOperator<T>, LatticeError> {
        if let Some((index, modulus)) = self.min_modulus() {
            if modulus <= tol {
                return Err(LatticeError::NotInvertible {
                    index,
                    modulus: to_f64(modulus),
                    tol: to_f64(tol),
                });
            }
        }
        let one = Complex::new(T::one(), T::zero());
        Ok(CentralOperator {
            diag: self.diag.iter().map(|d| one / d).collect(),
        })
    }

    /// Resolvent `(lambda - D)^{-1}`, refused when `lambda` sits on (or
    /// within `tol` of) a diagonal entry. Its operator norm is
    /// `max_i 1 / |lambda - d_i|`.
    pub fn resolvent(
        &self,
        lambda: Complex<T>,
        tol: T,
    ) -> Result<CentralOperator<T>, LatticeError> {
        let shifted = CentralOperator {
            diag: self.diag.iter().map(|d| lambda - d).collect(),
        };
        shifted.inverse(tol).map_err(|e| match e {
            LatticeError::NotInvertible {
                index,
                modulus,
                tol,
            } => LatticeError::LambdaInPointSpectrum {
                index,
                distance: modulus,
                tol,
            },
            other => other,
        })
    }
}
