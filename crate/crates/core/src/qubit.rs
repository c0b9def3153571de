//! Qubit operators in real Pauli coordinates.
//!
//! Every Hermitian 2x2 operator is written as `O = s·I + v·σ` with a real
//! scalar `s` and a real 3-vector `v = (v_x, v_y, v_z)`. Eigenvalues are
//! `s ± |v|` and `Tr O = 2s`, so positivity, traces and Born probabilities
//! never touch complex arithmetic.
//!
//! States are stored by their Bloch vector `b` (`ρ = (I + b·σ)/2`), effects
//! by their identity weight `w` and Pauli vector `v` (`E = w·I + v·σ`), which
//! gives `Tr[ρE] = w + b·v`.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerance used by validity checks when the caller does not pass one.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T>(pub [T; 3]);

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self([x, y, z])
    }

    pub fn zero() -> Self {
        Self([T::zero(); 3])
    }

    /// Unit vector at `angle` (radians) from `+z` towards `+x` in the xz-plane.
    pub fn xz(angle: T) -> Self {
        Self::new(angle.sin(), T::zero(), angle.cos())
    }

    pub fn x(&self) -> T {
        self.0[0]
    }

    pub fn y(&self) -> T {
        self.0[1]
    }

    pub fn z(&self) -> T {
        self.0[2]
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = other.0;
        Self([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, factor: T) -> Self {
        Self(self.0.map(|c| c * factor))
    }

    /// Unit vector in the same direction, `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() {
            Some(self.scale(n.recip()))
        } else {
            None
        }
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    /// Shrinks the vector onto the closed ball of the given radius.
    pub fn clip_to_ball(&self, radius: T) -> Self {
        let n = self.norm();
        if n > radius {
            self.scale(radius / n)
        } else {
            *self
        }
    }

    /// Applies a 3x3 matrix given row-major.
    pub fn transform(&self, m: &[[T; 3]; 3]) -> Self {
        Self(std::array::from_fn(|i| {
            m[i][0] * self.0[0] + m[i][1] * self.0[1] + m[i][2] * self.0[2]
        }))
    }

    pub fn cast<U: Real>(&self) -> Vec3<U> {
        Vec3(self.0.map(|c| U::lit(c.to_f64_lossy())))
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.scale(rhs)
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Real> std::iter::Sum for Vec3<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, v| acc + v)
    }
}

/// Hermitian operator `scalar·I + vec·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PauliOperator<T> {
    pub scalar: T,
    pub vec: Vec3<T>,
}

impl<T: Real> PauliOperator<T> {
    pub fn new(scalar: T, vec: Vec3<T>) -> Self {
        Self { scalar, vec }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), Vec3::zero())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), Vec3::zero())
    }

    pub fn trace(&self) -> T {
        self.scalar + self.scalar
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (T, T) {
        let r = self.vec.norm();
        (self.scalar - r, self.scalar + r)
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::new(self.scalar * factor, self.vec.scale(factor))
    }

    /// `Tr[self · other]`.
    pub fn trace_product(&self, other: &Self) -> T {
        let two = T::lit(2.0);
        two * (self.scalar * other.scalar + self.vec.dot(&other.vec))
    }

    /// Largest absolute difference over the four Pauli coordinates.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.scalar - other.scalar)
            .abs()
            .max((self.vec - other.vec).max_abs())
    }

    /// Congruence `self · inner · self`, Hermitian for Hermitian inputs.
    pub fn sandwich(&self, inner: &Self) -> Self {
        let a = self.scalar;
        let c = self.vec;
        let w = inner.scalar;
        let v = inner.vec;
        let two = T::lit(2.0);
        let cv = c.dot(&v);
        let cc = c.dot(&c);
        let scalar = a * a * w + two * a * cv + w * cc;
        let vec = c.scale(two * a * w + two * cv) + v.scale(a * a - cc);
        Self::new(scalar, vec)
    }

    /// Applies a real function to the operator through its spectral decomposition.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> Self {
        let (lo, hi) = self.eigenvalues();
        let half = T::lit(0.5);
        match self.vec.normalized() {
            Some(axis) => Self::new(half * (f(hi) + f(lo)), axis.scale(half * (f(hi) - f(lo)))),
            None => Self::new(f(self.scalar), Vec3::zero()),
        }
    }

    /// Pauli vector of the commutator `[self, other] = 2i (a×b)·σ`, without the factor `2i`.
    pub fn commutator_axis(&self, other: &Self) -> Vec3<T> {
        self.vec.cross(&other.vec)
    }
}

impl<T: Real> Add for PauliOperator<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.scalar + rhs.scalar, self.vec + rhs.vec)
    }
}

impl<T: Real> Sub for PauliOperator<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.scalar - rhs.scalar, self.vec - rhs.vec)
    }
}

impl<T: Real> std::iter::Sum for PauliOperator<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, v| acc + v)
    }
}

/// Qubit density operator `(I + bloch·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DensityState<T> {
    bloch: Vec3<T>,
}

impl<T: Real> DensityState<T> {
    /// Builds a state, rejecting Bloch vectors longer than `1 + tol`.
    pub fn from_bloch(bloch: Vec3<T>, tol: T) -> Result<Self> {
        let norm = bloch.norm();
        if norm > T::one() + tol || !norm.is_finite() {
            return Err(Error::InvalidState {
                norm: norm.to_f64_lossy(),
            });
        }
        Ok(Self { bloch })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            bloch: Vec3::zero(),
        }
    }

    /// Pure state at `angle` from `+z` towards `+x`.
    pub fn pure_xz(angle: T) -> Self {
        Self {
            bloch: Vec3::xz(angle),
        }
    }

    pub fn bloch(&self) -> Vec3<T> {
        self.bloch
    }

    pub fn operator(&self) -> PauliOperator<T> {
        let half = T::lit(0.5);
        PauliOperator::new(half, self.bloch.scale(half))
    }

    pub fn is_pure(&self, tol: T) -> bool {
        (self.bloch.norm() - T::one()).abs() <= tol
    }

    /// Projector onto the orthogonal pure state (antipodal Bloch vector).
    pub fn antipode(&self) -> Self {
        Self { bloch: -self.bloch }
    }
}

pub fn state_from_bloch<T: Real>(v: Vec3<T>) -> Result<DensityState<T>> {
    DensityState::from_bloch(v, T::lit(DEFAULT_TOL))
}

/// POVM element `weight·I + vec·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Effect<T> {
    pub weight: T,
    pub vec: Vec3<T>,
}

impl<T: Real> Effect<T> {
    pub fn new(weight: T, vec: Vec3<T>) -> Self {
        Self { weight, vec }
    }

    /// `scale · (I + axis·σ)/2`; a scaled projector when `|axis| = 1`.
    pub fn scaled_projector(scale: T, axis: Vec3<T>) -> Self {
        let half = T::lit(0.5) * scale;
        Self::new(half, axis.scale(half))
    }

    /// `c · I`.
    pub fn isotropic(c: T) -> Self {
        Self::new(c, Vec3::zero())
    }

    pub fn from_operator(op: PauliOperator<T>) -> Self {
        Self::new(op.scalar, op.vec)
    }

    pub fn operator(&self) -> PauliOperator<T> {
        PauliOperator::new(self.weight, self.vec)
    }

    pub fn eigenvalues(&self) -> (T, T) {
        self.operator().eigenvalues()
    }

    /// `0 ≤ E ≤ I` within `tol`.
    pub fn is_valid(&self, tol: T) -> bool {
        let (lo, hi) = self.eigenvalues();
        lo >= -tol && hi <= T::one() + tol
    }

    /// Smallest eigenvalue is zero within `tol` and the effect is nonzero.
    pub fn is_rank_one(&self, tol: T) -> bool {
        let (lo, hi) = self.eigenvalues();
        lo.abs() <= tol && hi > tol
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::new(self.weight * factor, self.vec.scale(factor))
    }
}

pub fn effect_eigenvalues<T: Real>(effect: &Effect<T>) -> (T, T) {
    effect.eigenvalues()
}

/// `Tr[ρE] = w + b·v`.
pub fn born_probability<T: Real>(state: &DensityState<T>, effect: &Effect<T>) -> T {
    effect.weight + effect.vec.dot(&state.bloch)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm<T> {
    effects: Vec<Effect<T>>,
    alphas: Option<Vec<T>>,
}

impl<T: Real> Povm<T> {
    /// Wraps effects without validation; see [`Povm::validated`].
    pub fn new(effects: Vec<Effect<T>>) -> Self {
        Self {
            effects,
            alphas: None,
        }
    }

    pub fn validated(effects: Vec<Effect<T>>, tol: T) -> Result<Self> {
        let report = validate_povm(&effects, tol);
        if !report.pass {
            return Err(report.into_error());
        }
        Ok(Self::new(effects))
    }

    /// `{α_b (I + n_b·σ)/2}`, remembering the weights α_b.
    pub fn from_weighted_axes(alphas: &[T], axes: &[Vec3<T>]) -> Self {
        assert_eq!(alphas.len(), axes.len(), "one axis per weight");
        let effects = alphas
            .iter()
            .zip(axes)
            .map(|(&a, &n)| Effect::scaled_projector(a, n))
            .collect();
        Self {
            effects,
            alphas: Some(alphas.to_vec()),
        }
    }

    pub fn effects(&self) -> &[Effect<T>] {
        &self.effects
    }

    pub fn alphas(&self) -> Option<&[T]> {
        self.alphas.as_deref()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn probabilities(&self, state: &DensityState<T>) -> Vec<T> {
        self.effects
            .iter()
            .map(|e| born_probability(state, e))
            .collect()
    }

    pub fn validate(&self, tol: T) -> PovmReport<T> {
        validate_povm(&self.effects, tol)
    }

    /// Applies a map to every effect (e.g. a frame rotation or noise).
    pub fn map_effects(&self, f: impl Fn(&Effect<T>) -> Effect<T>) -> Self {
        Self {
            effects: self.effects.iter().map(f).collect(),
            alphas: self.alphas.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PovmReport<T> {
    pub effect_psd: Vec<bool>,
    pub min_eigenvalue: T,
    /// Max-abs deviation of `Σ E_b` from `I` over Pauli coordinates.
    pub completeness_residual: T,
    pub pass: bool,
}

impl<T: Real> PovmReport<T> {
    fn into_error(self) -> Error {
        Error::InvalidPovm {
            residual: self.completeness_residual.to_f64_lossy(),
            min_eigenvalue: self.min_eigenvalue.to_f64_lossy(),
        }
    }
}

pub fn validate_povm<T: Real>(effects: &[Effect<T>], tol: T) -> PovmReport<T> {
    let effect_psd: Vec<bool> = effects.iter().map(|e| e.eigenvalues().0 >= -tol).collect();
    let min_eigenvalue = effects
        .iter()
        .map(|e| e.eigenvalues().0)
        .fold(T::infinity(), T::min);
    let total: PauliOperator<T> = effects.iter().map(Effect::operator).sum();
    let completeness_residual = total.max_abs_diff(&PauliOperator::identity());
    let pass = !effects.is_empty()
        && effect_psd.iter().all(|&ok| ok)
        && completeness_residual <= tol;
    PovmReport {
        effect_psd,
        min_eigenvalue,
        completeness_residual,
        pass,
    }
}

/// Three-outcome trine `{(2/3)(I + n_b·σ)/2}` with `n_b` at the given angles.
pub fn trine_povm<T: Real>(angles: [T; 3]) -> Povm<T> {
    let two_thirds = T::lit(2.0 / 3.0);
    Povm::from_weighted_axes(&[two_thirds; 3], &angles.map(Vec3::xz))
}

/// Rotation matrix about the unit `axis` by `angle` (Rodrigues).
pub fn rotation_matrix<T: Real>(axis: Vec3<T>, angle: T) -> [[T; 3]; 3] {
    let k = axis.normalized().unwrap_or(Vec3::new(T::zero(), T::zero(), T::one()));
    let (s, c) = angle.sin_cos();
    let t = T::one() - c;
    let [x, y, z] = k.0;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn optimal_e0() -> Effect<f64> {
        // ψ_0 at Bloch angle -30° in the xz-plane, weight 2/3.
        Effect::scaled_projector(2.0 / 3.0, Vec3::xz(-PI / 6.0))
    }

    #[test]
    fn state_from_bloch_examples() {
        let mixed = state_from_bloch(Vec3::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(mixed.operator().eigenvalues(), (0.5, 0.5));

        let pole = state_from_bloch(Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(pole.operator().eigenvalues(), (0.0, 1.0));
        assert!(pole.is_pure(1e-12));

        let s3 = 3f64.sqrt() / 2.0;
        let trine1 = state_from_bloch(Vec3::new(s3, 0.0, -0.5)).unwrap();
        assert!(trine1.is_pure(1e-12));
        let angle = 2.0 * PI / 3.0;
        assert_abs_diff_eq!(trine1.bloch().x(), angle.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(trine1.bloch().z(), angle.cos(), epsilon = 1e-15);
    }

    #[test]
    fn state_from_bloch_rejects_outside_ball() {
        let err = state_from_bloch(Vec3::new(0.0, 0.8, 0.8)).unwrap_err();
        assert!(matches!(err, Error::InvalidState { .. }));
        assert!(state_from_bloch(Vec3::new(0.0, 0.0, 1.0 + 1e-10)).is_ok());
    }

    #[test]
    fn born_probability_examples() {
        let e = Effect::new(0.37, Vec3::new(0.1, -0.2, 0.05));
        assert_eq!(born_probability(&DensityState::maximally_mixed(), &e), 0.37);

        let rho00 = state_from_bloch(Vec3::new(0.0, 0.0, 1.0)).unwrap();
        let p = born_probability(&rho00, &optimal_e0());
        assert_abs_diff_eq!(p, (1.0 + (PI / 6.0).cos()) / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p, 0.622_008_467_928_146, epsilon = 1e-12);

        let psi = DensityState::pure_xz(1.234);
        let perp = Effect::scaled_projector(1.0, psi.antipode().bloch());
        assert_abs_diff_eq!(born_probability(&psi, &perp), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn effect_eigenvalue_examples() {
        let (lo, hi) = effect_eigenvalues(&optimal_e0());
        assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(effect_eigenvalues(&Effect::isotropic(0.5)), (0.5, 0.5));
        assert_eq!(
            effect_eigenvalues(&Effect::new(0.5, Vec3::new(0.25, 0.0, 0.0))),
            (0.25, 0.75)
        );
    }

    #[test]
    fn validate_povm_examples() {
        let trine = trine_povm([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        let report = trine.validate(1e-12);
        assert!(report.pass);
        assert!(report.completeness_residual < 1e-15);

        let halves = [Effect::isotropic(0.5), Effect::isotropic(0.5)];
        assert!(validate_povm(&halves, 1e-12).pass);

        let missing = &trine.effects()[..2];
        let report = validate_povm(missing, 1e-9);
        assert!(!report.pass);
        assert_abs_diff_eq!(report.completeness_residual, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn validate_povm_flags_negative_effect() {
        let effects = [
            Effect::new(0.5, Vec3::new(0.0, 0.0, 0.6)),
            Effect::new(0.5, Vec3::new(0.0, 0.0, -0.6)),
        ];
        let report = validate_povm(&effects, 1e-9);
        assert_eq!(report.effect_psd, vec![false, false]);
        assert!(!report.pass);
        assert!(Povm::validated(effects.to_vec(), 1e-9).is_err());
    }

    #[test]
    fn sandwich_matches_explicit_products() {
        // (I + σz)/2 · (I + σx)/2 · (I + σz)/2 = (1/4)(I + σz)/... : projector onto |0>, scaled by 1/2.
        let p0 = PauliOperator::new(0.5, Vec3::new(0.0, 0.0, 0.5));
        let px = PauliOperator::new(0.5, Vec3::new(0.5, 0.0, 0.0));
        let r = p0.sandwich(&px);
        assert_abs_diff_eq!(r.scalar, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r.vec.z(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r.vec.x(), 0.0, epsilon = 1e-15);

        let s = PauliOperator::<f64>::new(0.9, Vec3::new(0.1, 0.2, -0.3));
        let inv_sqrt = s.map_spectrum(|l: f64| l.sqrt().recip());
        let id = inv_sqrt.sandwich(&s);
        assert!(id.max_abs_diff(&PauliOperator::identity()) < 1e-14);
    }

    #[test]
    fn rotation_preserves_norm_and_angles() {
        let m = rotation_matrix(Vec3::new(0.0, 1.0, 0.0), PI / 2.0);
        let z = Vec3::new(0.0, 0.0, 1.0).transform(&m);
        // About +y, +z rotates to +x, matching the Vec3::xz convention.
        assert_abs_diff_eq!(z.x(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(Vec3::xz(0.3).transform(&m).dot(&Vec3::xz(0.3 + PI / 2.0)), 1.0, epsilon = 1e-15);
    }
}
