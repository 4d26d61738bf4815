use crate::error::Result;

/// A t-dependent vector field X(t, x) on ℝⁿ.
pub trait VectorField {
    fn dim(&self) -> usize;

    /// Writes X(t, x) into `dx`. Both slices have length [`dim`](Self::dim).
    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]) -> Result<()>;
}

impl<V: VectorField + ?Sized> VectorField for &V {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]) -> Result<()> {
        (**self).eval(t, x, dx)
    }
}

impl<V: VectorField + ?Sized> VectorField for alloc::boxed::Box<V> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]) -> Result<()> {
        (**self).eval(t, x, dx)
    }
}

/// Closure-backed [`VectorField`].
#[derive(Clone)]
pub struct FnField<F> {
    dim: usize,
    rhs: F,
}

impl<F> FnField<F>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    pub fn new(dim: usize, rhs: F) -> Self {
        FnField { dim, rhs }
    }
}

impl<F> VectorField for FnField<F>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]) -> Result<()> {
        (self.rhs)(t, x, dx)
    }
}

/// Autonomous field given by a closure of the state only; handy for the
/// time-independent generators X_α of a Lie system.
pub fn autonomous<F>(dim: usize, rhs: F) -> FnField<impl Fn(f64, &[f64], &mut [f64]) -> Result<()>>
where
    F: Fn(&[f64], &mut [f64]),
{
    FnField::new(dim, move |_t, x, dx| {
        rhs(x, dx);
        Ok(())
    })
}
