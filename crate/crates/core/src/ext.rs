use std::cmp::Ordering;
use std::fmt;

/// Extended real number. Infinities are explicit variants so that they never
/// enter floating-point arithmetic by accident.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ext {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Ext {
    pub fn is_finite(self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Ext::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Finite value or panic; for call sites where finiteness is structural.
    pub fn unwrap(self) -> f64 {
        self.finite()
            .unwrap_or_else(|| panic!("expected a finite value, got {self}"))
    }

    /// `self <= other + tol`, with the obvious conventions for infinities.
    pub fn le_tol(self, other: Ext, tol: f64) -> bool {
        match (self, other) {
            (Ext::NegInf, _) | (_, Ext::PosInf) => true,
            (_, Ext::NegInf) | (Ext::PosInf, _) => false,
            (Ext::Finite(a), Ext::Finite(b)) => a <= b + tol,
        }
    }

    pub fn add(self, other: Ext) -> Option<Ext> {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Some(Ext::Finite(a + b)),
            (Ext::PosInf, Ext::NegInf) | (Ext::NegInf, Ext::PosInf) => None,
            (Ext::PosInf, _) | (_, Ext::PosInf) => Some(Ext::PosInf),
            _ => Some(Ext::NegInf),
        }
    }

    pub fn neg(self) -> Ext {
        match self {
            Ext::NegInf => Ext::PosInf,
            Ext::PosInf => Ext::NegInf,
            Ext::Finite(v) => Ext::Finite(-v),
        }
    }

    /// Product; `0 * inf` is undefined and yields `None`.
    pub fn mul(self, other: Ext) -> Option<Ext> {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Some(Ext::Finite(a * b)),
            (Ext::Finite(a), inf) | (inf, Ext::Finite(a)) => match a.partial_cmp(&0.0) {
                Some(Ordering::Greater) => Some(inf),
                Some(Ordering::Less) => Some(inf.neg()),
                _ => None,
            },
            (a, b) if a == b => Some(Ext::PosInf),
            _ => Some(Ext::NegInf),
        }
    }

    /// Multiply by a positive finite scalar.
    pub fn scale(self, c: f64) -> Ext {
        debug_assert!(c > 0.0);
        match self {
            Ext::Finite(v) => Ext::Finite(v * c),
            inf => inf,
        }
    }

    pub fn max(self, other: Ext) -> Ext {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Ext) -> Ext {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl From<f64> for Ext {
    fn from(v: f64) -> Ext {
        debug_assert!(v.is_finite());
        Ext::Finite(v)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Ext) -> Option<Ordering> {
        use Ext::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Some(Ordering::Equal),
            (NegInf, _) | (_, PosInf) => Some(Ordering::Less),
            (_, NegInf) | (PosInf, _) => Some(Ordering::Greater),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "+inf"),
            Ext::Finite(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_products() {
        assert!(Ext::NegInf < Ext::Finite(-1e300));
        assert!(Ext::Finite(1e300) < Ext::PosInf);
        assert_eq!(Ext::Finite(0.0).mul(Ext::PosInf), None);
        assert_eq!(Ext::Finite(-2.0).mul(Ext::PosInf), Some(Ext::NegInf));
        assert_eq!(Ext::PosInf.add(Ext::NegInf), None);
        assert!(Ext::Finite(1.0).le_tol(Ext::Finite(1.0 - 1e-12), 1e-9));
        assert!(!Ext::PosInf.le_tol(Ext::Finite(5.0), 1e-9));
    }
}
