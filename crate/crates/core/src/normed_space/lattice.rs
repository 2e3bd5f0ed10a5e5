//! Weighted `l_p` norms: `(sum w_i |v_i|^p)^{1/p}`, or `max w_i |v_i|` at
//! `p = inf`. Covers coordinate spaces and grid values of function spaces.

use nalgebra::DVector;

use super::FaceDescription;
use crate::scalar::Field;

const ZERO_TOL: f64 = 1e-12;
const TIE_TOL: f64 = 1e-9;
const MAX_BOX_VERTICES_LOG2: usize = 12;

#[derive(Debug, Clone)]
pub(crate) struct Lattice {
    p: f64,
    weights: Option<Vec<f64>>,
}

impl Lattice {
    pub(crate) fn new(p: f64, weights: Option<Vec<f64>>) -> Self {
        Self { p, weights }
    }

    pub(crate) fn p(&self) -> f64 {
        self.p
    }

    pub(crate) fn is_unweighted(&self) -> bool {
        self.weights.is_none()
    }

    #[inline]
    pub(crate) fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    pub(crate) fn weights_or_ones(&self, n: usize) -> Vec<f64> {
        self.weights.clone().unwrap_or_else(|| vec![1.0; n])
    }

    pub(crate) fn norm<S: Field>(&self, v: &DVector<S>) -> f64 {
        let p = self.p;
        if p.is_infinite() {
            v.iter()
                .enumerate()
                .fold(0.0f64, |a, (i, z)| a.max(self.weight(i) * z.modulus()))
        } else if p == 1.0 {
            v.iter()
                .enumerate()
                .map(|(i, z)| self.weight(i) * z.modulus())
                .sum()
        } else if p == 2.0 {
            v.iter()
                .enumerate()
                .map(|(i, z)| self.weight(i) * z.modulus_squared())
                .sum::<f64>()
                .sqrt()
        } else {
            // Scale by the largest modulus to keep |v|^p finite.
            let top = v.iter().fold(0.0f64, |a, z| a.max(z.modulus()));
            if top == 0.0 {
                return 0.0;
            }
            let s: f64 = v
                .iter()
                .enumerate()
                .map(|(i, z)| self.weight(i) * (z.modulus() / top).powf(p))
                .sum();
            top * s.powf(1.0 / p)
        }
    }

    pub(crate) fn dual_norm<S: Field>(&self, f: &DVector<S>) -> f64 {
        let p = self.p;
        if p.is_infinite() {
            f.iter()
                .enumerate()
                .map(|(i, z)| z.modulus() / self.weight(i))
                .sum()
        } else if p == 1.0 {
            f.iter()
                .enumerate()
                .fold(0.0f64, |a, (i, z)| a.max(z.modulus() / self.weight(i)))
        } else {
            let q = p / (p - 1.0);
            let top = f.iter().fold(0.0f64, |a, z| a.max(z.modulus()));
            if top == 0.0 {
                return 0.0;
            }
            let s: f64 = f
                .iter()
                .enumerate()
                .map(|(i, z)| self.weight(i).powf(1.0 - q) * (z.modulus() / top).powf(q))
                .sum();
            top * s.powf(1.0 / q)
        }
    }

    /// Duality map at a unit vector, `1 < p < inf`.
    pub(crate) fn duality<S: Field>(&self, v: &DVector<S>) -> DVector<S> {
        let p = self.p;
        DVector::from_fn(v.len(), |i, _| {
            let m = v[i].modulus();
            if m == 0.0 {
                S::zero()
            } else {
                v[i].phase()
                    .conjugate()
                    .scale(self.weight(i) * m.powf(p - 1.0))
            }
        })
    }

    fn support_scale<S: Field>(v: &DVector<S>) -> f64 {
        v.iter().fold(0.0f64, |a, z| a.max(z.modulus()))
    }

    /// Supremum of `|psi(y)|` over the face of norming functionals at the
    /// unit vector `v`, with a maximizer.
    pub(crate) fn face_sup<S: Field>(&self, v: &DVector<S>, y: &DVector<S>) -> (f64, DVector<S>) {
        let n = v.len();
        let p = self.p;
        if p.is_infinite() {
            let top = v
                .iter()
                .enumerate()
                .fold(0.0f64, |a, (i, z)| a.max(self.weight(i) * z.modulus()));
            let mut best = (f64::NEG_INFINITY, 0usize);
            for i in 0..n {
                if self.weight(i) * v[i].modulus() >= top * (1.0 - TIE_TOL) {
                    let val = self.weight(i) * y[i].modulus();
                    if val > best.0 {
                        best = (val, i);
                    }
                }
            }
            let t = best.1;
            let mut psi = DVector::zeros(n);
            psi[t] = v[t].phase().conjugate().scale(self.weight(t));
            (best.0, psi)
        } else if p == 1.0 {
            let scale = Self::support_scale(v);
            let mut psi = DVector::zeros(n);
            let mut acc = S::zero();
            for i in 0..n {
                if v[i].modulus() > ZERO_TOL * scale {
                    psi[i] = v[i].phase().conjugate().scale(self.weight(i));
                    acc += psi[i] * y[i];
                }
            }
            let align = acc.phase();
            let mut val = acc.modulus();
            for i in 0..n {
                if v[i].modulus() <= ZERO_TOL * scale {
                    psi[i] = (align * y[i].phase().conjugate()).scale(self.weight(i));
                    val += self.weight(i) * y[i].modulus();
                }
            }
            (val, psi)
        } else {
            let psi = self.duality(v);
            let val = psi
                .iter()
                .zip(y.iter())
                .fold(S::zero(), |a, (f, z)| a + *f * *z)
                .modulus();
            (val, psi)
        }
    }

    pub(crate) fn face<S: Field>(&self, v: &DVector<S>) -> FaceDescription<S> {
        let n = v.len();
        let p = self.p;
        if p.is_infinite() {
            let top = v
                .iter()
                .enumerate()
                .fold(0.0f64, |a, (i, z)| a.max(self.weight(i) * z.modulus()));
            let vertices = (0..n)
                .filter(|&i| self.weight(i) * v[i].modulus() >= top * (1.0 - TIE_TOL))
                .map(|i| {
                    let mut psi = DVector::zeros(n);
                    psi[i] = v[i].phase().conjugate().scale(self.weight(i));
                    psi
                })
                .collect();
            FaceDescription::Vertices(vertices)
        } else if p == 1.0 {
            let scale = Self::support_scale(v);
            let mut fixed = Vec::new();
            let mut free = Vec::new();
            for i in 0..n {
                if v[i].modulus() > ZERO_TOL * scale {
                    fixed.push((i, v[i].phase().conjugate().scale(self.weight(i))));
                } else {
                    free.push((i, self.weight(i)));
                }
            }
            let mut base = DVector::zeros(n);
            for &(i, z) in &fixed {
                base[i] = z;
            }
            let listed = free.len().min(MAX_BOX_VERTICES_LOG2);
            let vertices = (0..1usize << listed)
                .map(|mask| {
                    let mut psi = base.clone();
                    for (b, &(i, w)) in free.iter().take(listed).enumerate() {
                        psi[i] = S::from_real(if mask >> b & 1 == 1 { -w } else { w });
                    }
                    psi
                })
                .collect();
            FaceDescription::Box {
                fixed,
                free,
                vertices,
            }
        } else {
            FaceDescription::Unique {
                functional: self.duality(v),
                approximate: false,
            }
        }
    }
}
