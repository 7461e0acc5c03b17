//! Compensated (Kahan–Babuška–Neumaier) summation.

use num_complex::Complex;

use super::Scalar;

/// Running Neumaier sum. The error of the final value is bounded by a small
/// multiple of machine epsilon times `Σ|x_i|`, independent of the number of
/// terms.
#[derive(Clone, Copy, Debug)]
pub struct NeumaierSum<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> NeumaierSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Scalar> Default for NeumaierSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Extend<T> for NeumaierSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Componentwise compensated sum of complex terms.
#[derive(Clone, Copy, Debug)]
pub struct ComplexSum<T> {
    re: NeumaierSum<T>,
    im: NeumaierSum<T>,
}

impl<T: Scalar> ComplexSum<T> {
    pub fn new() -> Self {
        Self {
            re: NeumaierSum::new(),
            im: NeumaierSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<T: Scalar> Default for ComplexSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Sums `terms` in the order given.
pub fn compensated_sum<T, I>(terms: I) -> Complex<T>
where
    T: Scalar,
    I: IntoIterator<Item = Complex<T>>,
{
    let mut acc = ComplexSum::new();
    for z in terms {
        acc.add(z);
    }
    acc.value()
}

pub fn compensated_sum_real<T, I>(terms: I) -> T
where
    T: Scalar,
    I: IntoIterator<Item = T>,
{
    let mut acc = NeumaierSum::new();
    acc.extend(terms);
    acc.value()
}
