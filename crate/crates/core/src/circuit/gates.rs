use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;

pub type M2 = [[Complex64; 2]; 2];
pub type M4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    U1 { lambda: f64, q: usize },
    U2 { phi: f64, lambda: f64, q: usize },
    U3 { theta: f64, phi: f64, lambda: f64, q: usize },
    Cx { control: usize, target: usize },
    /// Arbitrary two-qubit unitary; `q0` indexes the more significant factor.
    Su4 { m: Box<M4>, q0: usize, q1: usize },
    /// `exp(i phi Z)`.
    ZPhase { phi: f64, q: usize },
}

impl Gate {
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::U1 { .. } => "u1",
            Gate::U2 { .. } => "u2",
            Gate::U3 { .. } => "u3",
            Gate::Cx { .. } => "cx",
            Gate::Su4 { .. } => "su4",
            Gate::ZPhase { .. } => "zphase",
        }
    }

    pub fn operands(&self) -> Vec<usize> {
        match *self {
            Gate::U1 { q, .. } | Gate::U2 { q, .. } | Gate::U3 { q, .. } | Gate::ZPhase { q, .. } => vec![q],
            Gate::Cx { control, target } => vec![control, target],
            Gate::Su4 { q0, q1, .. } => vec![q0, q1],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. } | Gate::Su4 { .. })
    }

    pub fn params(&self) -> Vec<f64> {
        match self {
            Gate::U1 { lambda, .. } => vec![*lambda],
            Gate::U2 { phi, lambda, .. } => vec![*phi, *lambda],
            Gate::U3 { theta, phi, lambda, .. } => vec![*theta, *phi, *lambda],
            Gate::Cx { .. } => vec![],
            Gate::Su4 { m, .. } => m.iter().flatten().flat_map(|z| [z.re, z.im]).collect(),
            Gate::ZPhase { phi, .. } => vec![*phi],
        }
    }

    /// 2x2 matrix of a one-qubit gate.
    pub fn matrix1(&self) -> Option<M2> {
        Some(match *self {
            Gate::U1 { lambda, .. } => rz(lambda),
            Gate::U2 { phi, lambda, .. } => mul(&mul(&rz(phi + FRAC_PI_2), &rx_half_pi()), &rz(lambda - FRAC_PI_2)),
            Gate::U3 { theta, phi, lambda, .. } => {
                let rx = rx_half_pi();
                let m = mul(&rz(phi + 3.0 * PI), &rx);
                let m = mul(&m, &rz(theta + PI));
                let m = mul(&m, &rx);
                mul(&m, &rz(lambda))
            }
            Gate::ZPhase { phi, .. } => [[Complex64::from_polar(1.0, phi), ZERO], [ZERO, Complex64::from_polar(1.0, -phi)]],
            _ => return None,
        })
    }

    /// 4x4 matrix of a two-qubit gate in the `(first operand, second operand)` basis.
    pub fn matrix2(&self) -> Option<M4> {
        match self {
            Gate::Cx { .. } => {
                let one = Complex64::new(1.0, 0.0);
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = one;
                m[1][1] = one;
                m[2][3] = one;
                m[3][2] = one;
                Some(m)
            }
            Gate::Su4 { m, .. } => Some(**m),
            _ => None,
        }
    }
}

/// `Rz(a) = exp(-i a Z / 2)`.
pub fn rz(a: f64) -> M2 {
    [[Complex64::from_polar(1.0, -0.5 * a), ZERO], [ZERO, Complex64::from_polar(1.0, 0.5 * a)]]
}

/// `Rx(pi/2) = exp(-i pi X / 4)`.
pub fn rx_half_pi() -> M2 {
    let c = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let s = Complex64::new(0.0, -FRAC_1_SQRT_2);
    [[c, s], [s, c]]
}

pub(crate) fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub(crate) fn adjoint2(m: &M2) -> M2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

pub(crate) fn adjoint4(m: &M4) -> M4 {
    let mut a = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = m[j][i].conj();
        }
    }
    a
}
