use std::fmt;
use std::str::FromStr;

/// A worst-case test count; `Infinite` when no algorithm can always finish.
///
/// Every finite value orders below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(u64),
    Infinite,
}

impl Value {
    pub fn finite(self) -> Option<u64> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Value::Infinite
    }

    /// `1 + self`, saturating at infinity.
    pub fn succ(self) -> Value {
        match self {
            Value::Finite(v) => Value::Finite(v + 1),
            Value::Infinite => Value::Infinite,
        }
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Finite(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected a nonnegative integer or `inf`, found {0:?}")]
pub struct ParseValueError(pub String);

impl FromStr for Value {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Value::Infinite);
        }
        s.parse::<u64>()
            .map(Value::Finite)
            .map_err(|_| ParseValueError(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering() {
        assert!(Value::Finite(0) < Value::Finite(1));
        assert!(Value::Finite(u64::MAX) < Value::Infinite);
        assert_eq!(Value::Finite(3).max(Value::Infinite), Value::Infinite);
        assert_eq!(Value::Infinite.succ(), Value::Infinite);
    }

    #[test]
    fn text_form() {
        assert_eq!(Value::Infinite.to_string(), "inf");
        assert_eq!("inf".parse::<Value>(), Ok(Value::Infinite));
        assert_eq!("17".parse::<Value>(), Ok(Value::Finite(17)));
        assert!("-1".parse::<Value>().is_err());
        assert!("Inf".parse::<Value>().is_err());
    }
}
