#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// σ·n for a direction in the x-y plane.
pub fn pauli_dot(angle: f64) -> Matrix2<Complex64> {
    let (y, x) = angle.sin_cos();
    Matrix2::new(c(0.0, 0.0), c(x, -y), c(x, y), c(0.0, 0.0))
}

/// (I + s σ·n) / 2
pub fn projector(angle: f64, s: f64) -> Matrix2<Complex64> {
    (Matrix2::identity() + pauli_dot(angle) * c(s, 0.0)) * c(0.5, 0.0)
}

fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// <ψ| P_a ⊗ P_b |ψ> for every setting pair and outcome pair, in block order
/// (a,b), (a,d), (c,b), (c,d) with outcomes (+,+), (+,-), (-,+), (-,-).
pub fn projector_eps(amps: [Complex64; 4], angles: [f64; 4]) -> [f64; 16] {
    let [a, cc, b, d] = angles;
    let psi = Vector4::from_row_slice(&amps);
    let mut out = [0.0; 16];
    let mut k = 0;
    for alice in [a, cc] {
        for bob in [b, d] {
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    let op = kron(&projector(alice, s1), &projector(bob, s2));
                    out[k] = (psi.adjoint() * op * psi)[(0, 0)].re;
                    k += 1;
                }
            }
        }
    }
    out
}

/// ε₁ = ¼|α + β(b_x − i b_y) + γ(a_x − i a_y) + δ(a_x − i a_y)(b_x − i b_y)|²
pub fn closed_form_eps1(amps: [Complex64; 4], a: f64, b: f64) -> f64 {
    let [al, be, ga, de] = amps;
    let ab = c(b.cos(), -b.sin());
    let aa = c(a.cos(), -a.sin());
    0.25 * (al + be * ab + ga * aa + de * aa * ab).norm_sqr()
}

/// ε₂ = ¼|α − β(b_x − i b_y) + γ(a_x − i a_y) − δ(a_x − i a_y)(b_x − i b_y)|²
pub fn closed_form_eps2(amps: [Complex64; 4], a: f64, b: f64) -> f64 {
    let [al, be, ga, de] = amps;
    let ab = c(b.cos(), -b.sin());
    let aa = c(a.cos(), -a.sin());
    0.25 * (al - be * ab + ga * aa - de * aa * ab).norm_sqr()
}

pub fn random_amps(rng: &mut ChaCha8Rng) -> [Complex64; 4] {
    loop {
        let raw: [Complex64; 4] = std::array::from_fn(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let n = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return raw.map(|z| z / n);
        }
    }
}

pub fn random_angles(rng: &mut ChaCha8Rng) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}
