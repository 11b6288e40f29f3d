//! Serialization helpers shared by reports.

use serde::Serializer;

use crate::dist::{format_rational, Rational};

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn ser_rationals<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(format_rational))
}
