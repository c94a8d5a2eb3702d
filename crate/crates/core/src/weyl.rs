//! Symbolic Weyl words `e^{iθ} W(f)` and their reduction by the Weyl relations
//! `W(f)W(g) = e^{-(i/2)σ(f,g)} W(f+g)`.

use crate::space::OneParticleSpace;
use crate::Result;
use num_complex::Complex64;

/// A unit phase times a single Weyl generator.
#[derive(Debug, Clone)]
pub struct WeylWord<V> {
    pub phase: Complex64,
    pub direction: V,
}

impl<V: Clone> WeylWord<V> {
    pub fn generator(direction: V) -> Self {
        Self { phase: Complex64::new(1.0, 0.0), direction }
    }

    pub fn with_phase(mut self, phase: Complex64) -> Self {
        self.phase *= phase;
        self
    }
}

pub fn identity<S: OneParticleSpace>(space: &S) -> WeylWord<S::Vector> {
    WeylWord::generator(space.zero())
}

/// `w1·w2` with the symplectic phase of the two directions.
pub fn multiply<S: OneParticleSpace>(
    space: &S,
    w1: &WeylWord<S::Vector>,
    w2: &WeylWord<S::Vector>,
) -> Result<WeylWord<S::Vector>> {
    let sigma = space.sigma(&w1.direction, &w2.direction)?;
    let one = Complex64::new(1.0, 0.0);
    let direction = space.combine(one, &w1.direction, one, &w2.direction)?;
    let phase = w1.phase * w2.phase * Complex64::from_polar(1.0, -0.5 * sigma);
    Ok(WeylWord { phase: phase / phase.norm(), direction })
}

/// `(e^{iθ}W(f))* = e^{-iθ}W(-f)`.
pub fn adjoint<S: OneParticleSpace>(space: &S, w: &WeylWord<S::Vector>) -> Result<WeylWord<S::Vector>> {
    let zero = Complex64::new(0.0, 0.0);
    let direction = space.combine(Complex64::new(-1.0, 0.0), &w.direction, zero, &space.zero())?;
    Ok(WeylWord { phase: w.phase.conj(), direction })
}

/// Left fold of a generator list into a single word. An empty list is the identity.
pub fn reduce<S: OneParticleSpace>(space: &S, words: &[WeylWord<S::Vector>]) -> Result<WeylWord<S::Vector>> {
    let mut iter = words.iter();
    let mut acc = match iter.next() {
        Some(w) => w.clone(),
        None => return Ok(identity(space)),
    };
    for w in iter {
        acc = multiply(space, &acc, w)?;
    }
    Ok(acc)
}

/// Right fold, `w1(w2(w3…))`, used to check association independence.
pub fn reduce_right<S: OneParticleSpace>(space: &S, words: &[WeylWord<S::Vector>]) -> Result<WeylWord<S::Vector>> {
    let mut iter = words.iter().rev();
    let mut acc = match iter.next() {
        Some(w) => w.clone(),
        None => return Ok(identity(space)),
    };
    for w in iter {
        acc = multiply(space, w, &acc)?;
    }
    Ok(acc)
}

/// Reduction along an arbitrary binary bracketing. `choose(k)` picks the cut
/// of each sub-range of `k + 1` generators, visited in pre-order.
pub fn reduce_bracketed<S: OneParticleSpace>(
    space: &S,
    words: &[WeylWord<S::Vector>],
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<WeylWord<S::Vector>> {
    match words.len() {
        0 => Ok(identity(space)),
        1 => Ok(words[0].clone()),
        n => {
            let cut = 1 + choose(n - 1) % (n - 1);
            let left = reduce_bracketed(space, &words[..cut], choose)?;
            let right = reduce_bracketed(space, &words[cut..], choose)?;
            multiply(space, &left, &right)
        }
    }
}
