//! The flow generated by a multiplication operator: pointwise multiplication
//! by `exp(t phi(x))`.
//!
//! Everything observable about the flow is pointwise: its norm at time `t`
//! is `exp(t w)` for the growth bound `w = sup_x max_i Re phi_i(x)`, it is
//! strongly continuous on decaying sections, and it is uniformly continuous
//! exactly when the symbol is bounded. The witness scan below exhibits the
//! failure of uniform continuity quantitatively when the symbol grows.

use num_complex::Complex;
use thiserror::Error;

use crate::lattice::CentralOperator;
use crate::mulop::{growth_flag, GrowthFlag, MulOpError, MulOperator, PhiField};
use crate::scalar::{real, to_f64, Real};
use crate::space::Section;

/// Default step sequence for difference-quotient extrapolation.
pub fn default_h_seq<T: Real>() -> Vec<T> {
    vec![real(1e-2), real(5e-3), real(2.5e-3)]
}

/// Bounds below this are not considered evidence against uniform continuity.
pub fn witness_cutoff<T: Real>() -> T {
    real(0.1)
}

/// Entrywise agreement demanded of semigroup samples.
pub fn cocycle_tol<T: Real>() -> T {
    real(1e-8)
}

const WITNESS_POINTS: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum SemigroupError {
    #[error(transparent)]
    Op(#[from] MulOpError),
    #[error("sample fields must share one space and dimension")]
    InconsistentSamples,
    #[error("sample times must be positive and distinct")]
    InvalidSampleTimes,
    #[error("no sample at time {t}")]
    MissingSample { t: f64 },
    #[error(
        "samples break the semigroup law at {t} + {s}: defect {defect:e} exceeds {tol:e}"
    )]
    CocycleViolation {
        t: f64,
        s: f64,
        defect: f64,
        tol: f64,
    },
}

/// `sup_x max_i Re phi_i(x)`: the exact exponential growth rate of the flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound<T: Real> {
    pub w: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct T0Report<T: Real> {
    pub t0: T,
    /// `sup_x ||exp(t0 phi(x))||` over the truncation.
    pub value: T,
    pub finite: bool,
    /// Growth verdict of the per-point multiplier norms toward the far end.
    pub growth: GrowthFlag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorQuotient<T: Real> {
    pub quotient: Section<T>,
    /// `|| (T(h)s - s)/h - M s ||`
    pub error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPoint<T: Real> {
    pub index: usize,
    pub label: String,
    /// Probe time `1 / ||phi(x)||`.
    pub t: T,
    /// `||exp(t phi(x)) - I||` at that probe time.
    pub lower_bound: T,
}

/// Evidence that the flow is not uniformly continuous: points where the
/// multiplier stays boundedly away from the identity at ever smaller times.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformWitness<T: Real> {
    pub points: Vec<WitnessPoint<T>>,
    /// Smallest listed lower bound.
    pub delta: T,
    /// Set when the probe times do not shrink (bounded symbol): the scan is
    /// then no obstruction to uniform continuity.
    pub constant_t: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport<T: Real> {
    pub t_grid: Vec<T>,
    /// `|| T(t)s - s ||` per grid time.
    pub strong: Vec<T>,
    /// `sup_x || exp(t phi(x)) - I ||` per grid time.
    pub uniform: Vec<T>,
    pub witness: Option<UniformWitness<T>>,
}

/// Time-indexed multiplier fields, as produced by sampling a flow.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupSamples<T: Real> {
    times: Vec<T>,
    fields: Vec<PhiField<T>>,
}

impl<T: Real> SemigroupSamples<T> {
    pub fn new(mut pairs: Vec<(T, PhiField<T>)>) -> Result<Self, SemigroupError> {
        if pairs.is_empty() {
            return Err(SemigroupError::InvalidSampleTimes);
        }
        let space = pairs[0].1.space().clone();
        let dim = pairs[0].1.dim();
        if !pairs
            .iter()
            .all(|(_, f)| f.space() == &space && f.dim() == dim)
        {
            return Err(SemigroupError::InconsistentSamples);
        }
        if !pairs.iter().all(|(t, _)| *t > T::zero()) {
            return Err(SemigroupError::InvalidSampleTimes);
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("sample times are ordered"));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(SemigroupError::InvalidSampleTimes);
        }
        let (times, fields) = pairs.into_iter().unzip();
        Ok(SemigroupSamples { times, fields })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn field_at_index(&self, i: usize) -> &PhiField<T> {
        &self.fields[i]
    }

    /// Index of the sample at time `t`, up to a relative slack of 1e-9.
    pub fn find(&self, t: T) -> Option<usize> {
        let tol = t.abs() * real(1e-9);
        self.times
            .iter()
            .position(|&u| (u - t).abs() <= tol)
    }
}

/// Evaluates the flow `T(t) s = exp(t phi) . s` and its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupEvaluator<T: Real> {
    op: MulOperator<T>,
    /// `max_i Re phi_i(x)` per point.
    re_max: Vec<T>,
    w: T,
}

impl<T: Real> SemigroupEvaluator<T> {
    pub fn new(op: MulOperator<T>) -> Self {
        let re_max: Vec<T> = op
            .phi()
            .ops()
            .iter()
            .map(|o| {
                o.diag()
                    .iter()
                    .map(|d| d.re)
                    .fold(T::neg_infinity(), T::max)
            })
            .collect();
        let w = re_max.iter().copied().fold(T::neg_infinity(), T::max);
        SemigroupEvaluator { op, re_max, w }
    }

    pub fn op(&self) -> &MulOperator<T> {
        &self.op
    }

    pub fn growth_bound(&self) -> GrowthBound<T> {
        GrowthBound { w: self.w }
    }

    /// The multiplier field `exp(t phi)`.
    pub fn sample(&self, t: T) -> PhiField<T> {
        self.op.phi().map_entries(|d| (d * t).exp())
    }

    /// `T(t) s`, exactly `s` at `t = 0`.
    pub fn evolve(&self, s: &Section<T>, t: T) -> Result<Section<T>, SemigroupError> {
        self.op.check_section(s)?;
        if t == T::zero() {
            return Ok(s.clone());
        }
        let values = self
            .op
            .phi()
            .ops()
            .iter()
            .zip(s.values())
            .map(|(op, v)| op.exp_scaled(t).apply(v).map_err(MulOpError::from))
            .collect::<Result<Vec<_>, _>>()?;
        let out = Section::new(s.space().clone(), values).map_err(MulOpError::from)?;
        match s.support() {
            Some(window) => Ok(out
                .declare_support(window.clone())
                .expect("zeros are preserved by pointwise multiplication")),
            None => Ok(out),
        }
    }

    /// `||T(t)|| = exp(t w)` for `t >= 0`.
    pub fn semigroup_norm(&self, t: T) -> T {
        (t * self.w).exp()
    }

    /// Is `sup_x ||exp(t0 phi(x))||` finite-looking at the probe time, and
    /// does it keep growing toward the truncation edge?
    pub fn check_t0_condition(&self, t0: T) -> T0Report<T> {
        let per_point: Vec<T> = self.re_max.iter().map(|&wx| (t0 * wx).exp()).collect();
        let value = per_point.iter().copied().fold(T::zero(), T::max);
        let growth = growth_flag(&per_point, self.op.phi().space().is_compact());
        T0Report {
            t0,
            value,
            finite: value.is_finite(),
            growth,
        }
    }

    /// Defect `|| T(t1 + t2)s - T(t1)T(t2)s ||` of the semigroup law.
    pub fn check_semigroup_law(
        &self,
        s: &Section<T>,
        t1: T,
        t2: T,
    ) -> Result<T, SemigroupError> {
        let direct = self.evolve(s, t1 + t2)?;
        let stepped = self.evolve(&self.evolve(s, t2)?, t1)?;
        let defect = direct
            .checked_sub(&stepped)
            .map_err(MulOpError::from)?
            .norm();
        Ok(defect)
    }

    /// First-order generator probe `(T(h)s - s)/h`, with its distance to
    /// `M s`. The error decays linearly in `h` once `h` resolves the symbol.
    pub fn generator_diff_quotient(
        &self,
        s: &Section<T>,
        h: T,
    ) -> Result<GeneratorQuotient<T>, SemigroupError> {
        let one_over_h = Complex::new(T::one() / h, T::zero());
        let moved = self.evolve(s, h)?;
        let quotient = moved
            .checked_sub(s)
            .map_err(MulOpError::from)?
            .scaled(one_over_h);
        let ms = self.op.apply(s)?;
        let error = quotient.checked_sub(&ms).map_err(MulOpError::from)?.norm();
        Ok(GeneratorQuotient { quotient, error })
    }

    /// `sup_x || exp(t phi(x)) - I ||`: the operator-norm distance of the
    /// flow from the identity.
    pub fn uniform_profile(&self, t: T) -> T {
        let one = Complex::new(T::one(), T::zero());
        self.op
            .phi()
            .ops()
            .iter()
            .flat_map(|op| op.diag())
            .map(|&d| ((d * t).exp() - one).norm())
            .fold(T::zero(), T::max)
    }

    /// Strong and uniform continuity profiles over a time grid, plus the
    /// witness scan.
    pub fn continuity_profiles(
        &self,
        s: &Section<T>,
        t_grid: &[T],
    ) -> Result<ContinuityReport<T>, SemigroupError> {
        let mut strong = Vec::with_capacity(t_grid.len());
        let mut uniform = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            let moved = self.evolve(s, t)?;
            strong.push(moved.checked_sub(s).map_err(MulOpError::from)?.norm());
            uniform.push(self.uniform_profile(t));
        }
        Ok(ContinuityReport {
            t_grid: t_grid.to_vec(),
            strong,
            uniform,
            witness: self.uniform_continuity_witness(),
        })
    }

    /// Probes the points with the largest symbol norms at times
    /// `t = 1 / ||phi(x)||`. If the multiplier stays at least the cutoff
    /// away from the identity there, uniform continuity fails along those
    /// probes (when the probe times shrink).
    pub fn uniform_continuity_witness(&self) -> Option<UniformWitness<T>> {
        let mut ranked: Vec<(usize, T)> = self
            .op
            .phi()
            .ops()
            .iter()
            .enumerate()
            .map(|(i, op)| (i, op.op_norm()))
            .filter(|(_, n)| *n > T::zero())
            .collect();
        ranked.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .expect("norms are finite")
                .then(a.0.cmp(&b.0))
        });
        ranked.truncate(WITNESS_POINTS);
        if ranked.is_empty() {
            return None;
        }
        let one = Complex::new(T::one(), T::zero());
        let points: Vec<WitnessPoint<T>> = ranked
            .into_iter()
            .map(|(index, norm)| {
                let t = T::one() / norm;
                let lower_bound = self.op.phi().op(index)
                    .diag()
                    .iter()
                    .map(|&d| ((d * t).exp() - one).norm())
                    .fold(T::zero(), T::max);
                WitnessPoint {
                    index,
                    label: self.op.phi().space().label(index),
                    t,
                    lower_bound,
                }
            })
            .collect();
        let best = points
            .iter()
            .map(|p| p.lower_bound)
            .fold(T::zero(), T::max);
        if best < witness_cutoff() {
            return None;
        }
        let delta = points
            .iter()
            .map(|p| p.lower_bound)
            .fold(T::infinity(), T::min);
        let t_max = points.iter().map(|p| p.t).fold(T::zero(), T::max);
        let t_min = points.iter().map(|p| p.t).fold(T::infinity(), T::min);
        let constant_t = t_max - t_min <= t_max * real(1e-9);
        Some(UniformWitness {
            points,
            delta,
            constant_t,
        })
    }
}

/// Rebuilds the symbol from sampled multiplier fields.
///
/// The difference quotients `(m_h - 1)/h` are extrapolated to `h = 0`
/// (Neville over the whole `h_seq`), which pins down the right branch; the
/// entry is then read off the smallest sample as `log(m_h)/h` on that
/// branch, so stiff entries are recovered to full precision instead of being
/// limited by the quotient's linear error term.
pub fn recover_phi_from_semigroup<T: Real>(
    samples: &SemigroupSamples<T>,
    h_seq: &[T],
) -> Result<PhiField<T>, SemigroupError> {
    // The samples must actually look like a flow: check the semigroup law on
    // every pair of times whose sum is also sampled.
    let tol = cocycle_tol::<T>();
    let times = samples.times().to_vec();
    for i in 0..times.len() {
        for j in i..times.len() {
            let Some(k) = samples.find(times[i] + times[j]) else {
                continue;
            };
            let fi = samples.field_at_index(i);
            let fj = samples.field_at_index(j);
            let fk = samples.field_at_index(k);
            let mut defect = T::zero();
            for p in 0..fk.len() {
                for (e, dk) in fk.op(p).diag().iter().enumerate() {
                    let prod = fi.op(p).diag()[e] * fj.op(p).diag()[e];
                    defect = defect.max((*dk - prod).norm());
                }
            }
            if defect > tol {
                return Err(SemigroupError::CocycleViolation {
                    t: to_f64(times[i]),
                    s: to_f64(times[j]),
                    defect: to_f64(defect),
                    tol: to_f64(tol),
                });
            }
        }
    }

    if h_seq.is_empty() {
        return Err(SemigroupError::InvalidSampleTimes);
    }
    let mut indices = Vec::with_capacity(h_seq.len());
    for &h in h_seq {
        let idx = samples
            .find(h)
            .ok_or(SemigroupError::MissingSample { t: to_f64(h) })?;
        indices.push(idx);
    }
    let (h_min, idx_min) = h_seq
        .iter()
        .copied()
        .zip(indices.iter().copied())
        .fold(None, |best: Option<(T, usize)>, (h, idx)| match best {
            Some((bh, _)) if bh <= h => best,
            _ => Some((h, idx)),
        })
        .expect("h_seq is nonempty");

    let space = samples.field_at_index(0).space().clone();
    let n_points = samples.field_at_index(0).len();
    let dim = samples.field_at_index(0).dim();
    let one = Complex::new(T::one(), T::zero());
    let two_pi = T::PI() + T::PI();

    let mut ops = Vec::with_capacity(n_points);
    for p in 0..n_points {
        let mut diag = Vec::with_capacity(dim);
        for e in 0..dim {
            // Difference quotients for each step, then Neville to h = 0.
            let mut tab: Vec<Complex<T>> = indices
                .iter()
                .zip(h_seq)
                .map(|(&idx, &h)| {
                    (samples.field_at_index(idx).op(p).diag()[e] - one) / h
                })
                .collect();
            let n = tab.len();
            for level in 1..n {
                for j in 0..n - level {
                    let hj = h_seq[j];
                    let hk = h_seq[j + level];
                    tab[j] = (tab[j + 1] * hj - tab[j] * hk) / (hj - hk);
                }
            }
            let estimate = tab[0];

            // Exact read-off from the smallest sample on the branch closest
            // to the extrapolated estimate.
            let m = samples.field_at_index(idx_min).op(p).diag()[e];
            let recovered = if m.norm() == T::zero() {
                estimate
            } else {
                let re = m.norm().ln() / h_min;
                let arg = m.arg();
                let k = ((estimate.im * h_min - arg) / two_pi).round();
                let im = (arg + two_pi * k) / h_min;
                Complex::new(re, im)
            };
            diag.push(recovered);
        }
        ops.push(CentralOperator::new(diag));
    }
    Ok(PhiField::new(space, ops).map_err(SemigroupError::from)?)
}
