//! Exact solution operator of the damped oscillator `P'' + 2γP' + ω0² P = F`.

/// Maps `(P, P')` at time 0 to time `t` for the unforced oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ModeMatrix {
    pub pp: f64,
    pub pv: f64,
    pub vp: f64,
    pub vv: f64,
}

impl ModeMatrix {
    pub fn new(gamma: f64, omega0: f64, t: f64) -> Self {
        let w2 = omega0 * omega0 - gamma * gamma;
        if w2 > 0.0 {
            let w = w2.sqrt();
            let x = w * t;
            let e = (-gamma * t).exp();
            let s = if x.abs() < 1e-4 {
                t * (1.0 - x * x / 6.0)
            } else {
                x.sin() / w
            };
            return Self::from_parts(gamma, omega0, e * x.cos(), e * s);
        }
        let a = (-w2).sqrt();
        let x = a * t;
        if x < 1e-4 {
            let e = (-gamma * t).exp();
            return Self::from_parts(
                gamma,
                omega0,
                e * (1.0 + 0.5 * x * x),
                e * t * (1.0 + x * x / 6.0),
            );
        }
        // Overdamped: write everything with the two decaying exponentials,
        // using a - γ = -ω0²/(a + γ) to avoid cancellation.
        let e1 = ((a - gamma) * t).exp();
        let e2 = (-(a + gamma) * t).exp();
        let a_minus = -omega0 * omega0 / (a + gamma);
        let a_plus = a + gamma;
        let es = (e1 - e2) / (2.0 * a);
        Self {
            pp: (e1 * a_plus + e2 * a_minus) / (2.0 * a),
            pv: es,
            vp: -omega0 * omega0 * es,
            vv: (e1 * a_minus + e2 * a_plus) / (2.0 * a),
        }
    }

    fn from_parts(gamma: f64, omega0: f64, ec: f64, es: f64) -> Self {
        Self {
            pp: ec + gamma * es,
            pv: es,
            vp: -omega0 * omega0 * es,
            vv: ec - gamma * es,
        }
    }
}

/// Gauss–Legendre nodes on `[0, 1]` used for the Duhamel source integral.
pub(crate) const DUHAMEL_NODES: [(f64, f64); 3] = [
    (0.112_701_665_379_258_31, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];
