use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// The group acting by gauge automorphisms: the full circle, or its cyclic
/// subgroup of order `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaugeGroup {
    Full,
    Cyclic(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cyclic gauge groups need order k >= 2, got k = {0}")]
    OrderTooSmall(u64),
    #[error("cannot parse gauge group `{0}` (expected `full` or an integer k >= 2)")]
    Unparseable(String),
}

impl GaugeGroup {
    pub fn cyclic(k: u64) -> Result<Self, GroupError> {
        if k < 2 {
            return Err(GroupError::OrderTooSmall(k));
        }
        u32::try_from(k)
            .map(GaugeGroup::Cyclic)
            .map_err(|_| GroupError::Unparseable(k.to_string()))
    }

    /// `None` for the circle, `Some(k)` for the cyclic group of order k.
    pub fn order(self) -> Option<u32> {
        match self {
            GaugeGroup::Full => None,
            GaugeGroup::Cyclic(k) => Some(k),
        }
    }

    /// Reduces an integer degree to its class in the character group.
    pub fn reduce(self, degree: i64) -> i64 {
        match self {
            GaugeGroup::Full => degree,
            GaugeGroup::Cyclic(k) => degree.rem_euclid(i64::from(k)),
        }
    }

    pub fn same_class(self, a: i64, b: i64) -> bool {
        self.reduce(a) == self.reduce(b)
    }
}

impl fmt::Display for GaugeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeGroup::Full => f.write_str("full"),
            GaugeGroup::Cyclic(k) => write!(f, "Z/{k}"),
        }
    }
}

impl FromStr for GaugeGroup {
    type Err = GroupError;

    /// Accepts `full`, `inf`, `k` or `Z/k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("full") || t.eq_ignore_ascii_case("inf") {
            return Ok(GaugeGroup::Full);
        }
        let digits = t
            .strip_prefix("Z/")
            .or_else(|| t.strip_prefix("z/"))
            .unwrap_or(t);
        let k: u64 = digits
            .parse()
            .map_err(|_| GroupError::Unparseable(s.to_string()))?;
        GaugeGroup::cyclic(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_groups() {
        assert_eq!("full".parse(), Ok(GaugeGroup::Full));
        assert_eq!("3".parse(), Ok(GaugeGroup::Cyclic(3)));
        assert_eq!("Z/4".parse(), Ok(GaugeGroup::Cyclic(4)));
        assert_eq!("1".parse::<GaugeGroup>(), Err(GroupError::OrderTooSmall(1)));
        assert_eq!("0".parse::<GaugeGroup>(), Err(GroupError::OrderTooSmall(0)));
        assert!("two".parse::<GaugeGroup>().is_err());
        assert_eq!(GaugeGroup::Cyclic(5).to_string(), "Z/5");
    }

    #[test]
    fn degree_classes() {
        assert_eq!(GaugeGroup::Cyclic(3).reduce(-1), 2);
        assert!(GaugeGroup::Cyclic(2).same_class(1, -1));
        assert!(!GaugeGroup::Full.same_class(1, -1));
    }
}
