use crate::flux_law::PhysParams;

/// Local behaviour of the quasilinear equation at a given gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `g² ≥ ratio·a²`: behaves like the linear heat equation.
    Diffusive,
    /// `g² ≤ a²/ratio`: the field is effectively frozen.
    Frozen,
    Transitional,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Diffusive => "diffusive",
            Regime::Frozen => "frozen",
            Regime::Transitional => "transitional",
        }
    }
}

/// Classifies a temperature gradient; `ratio` must exceed 1.
pub fn classify_regime(g: f64, p: &PhysParams, ratio: f64) -> Regime {
    assert!(ratio > 1.0, "regime ratio must exceed 1, got {ratio}");
    let g2 = g * g;
    let a2 = p.a_squared();
    if g2 >= ratio * a2 {
        Regime::Diffusive
    } else if g2 <= a2 / ratio {
        Regime::Frozen
    } else {
        Regime::Transitional
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = PhysParams::new(1.0, 0.05).unwrap();
        assert_eq!(classify_regime(10.0 * p.a(), &p, 10.0), Regime::Diffusive);
        assert_eq!(classify_regime(-10.0 * p.a(), &p, 10.0), Regime::Diffusive);
        assert_eq!(classify_regime(0.0, &p, 10.0), Regime::Frozen);
        assert_eq!(classify_regime(p.a(), &p, 10.0), Regime::Transitional);
        assert_eq!(classify_regime(0.1 * p.a(), &p, 10.0), Regime::Frozen);
    }

    #[test]
    #[should_panic]
    fn ratio_must_exceed_one() {
        let p = PhysParams::new(1.0, 0.05).unwrap();
        classify_regime(1.0, &p, 1.0);
    }
}
