//! Serialization helpers shared by every artifact.
//!
//! Exact rationals always serialize as `"num/den"` (including `"1/1"`), so
//! values round-trip without loss. JSON artifacts are pretty-printed with
//! struct fields in declaration order and end in one newline; CSV artifacts
//! always start with a header row. Identical configs therefore produce
//! byte-identical artifacts.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

/// Modeling conventions stamped into every JSON artifact: the height
/// recurrence starts from `h_0 = 0`, and the stage polynomial `Theta_k` is
/// indexed by the stage-`k` spacer row `a_k`.
pub const CONVENTION_NOTES: [&str; 2] = ["h0=0", "theta_index=a_k"];

/// `"num/den"`, reduced, denominator positive — e.g. `"3/4"`, `"0/1"`, `"1/1"`.
pub fn rational(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Decimal digits; heights and counts can exceed every fixed-width integer.
pub fn integer(value: &BigUint) -> String {
    value.to_string()
}

pub fn json_body<T: Serialize>(artifact: &T) -> String {
    let mut body = serde_json::to_string_pretty(artifact).expect("artifacts are serializable");
    body.push('\n');
    body
}

/// A CSV table with the given header; every row is one line.
pub fn csv_body(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut body = String::from(header);
    body.push('\n');
    for row in rows {
        body.push_str(&row);
        body.push('\n');
    }
    body
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_always_carry_a_denominator() {
        assert_eq!(rational(&BigRational::new(1.into(), 1.into())), "1/1");
        assert_eq!(rational(&BigRational::new(6.into(), 8.into())), "3/4");
        assert_eq!(rational(&BigRational::new(0.into(), 5.into())), "0/1");
        assert_eq!(rational(&BigRational::new(2.into(), (-4).into())), "-1/2");
    }

    #[test]
    fn csv_has_header_and_trailing_newline() {
        assert_eq!(csv_body("a,b", vec![]), "a,b\n");
        assert_eq!(
            csv_body("exponent,value", vec!["0,1/1".to_string(), "1,3/4".to_string()]),
            "exponent,value\n0,1/1\n1,3/4\n"
        );
    }
}
