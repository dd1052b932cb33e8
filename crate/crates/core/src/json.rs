//! JSON plumbing shared by every serialized record.
//!
//! Complex scalars travel as `[re, im]` arrays. Floats are written with 17
//! significant digits in scientific notation so that output is byte-stable
//! and round-trips exactly.

use std::io;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::error::Result;

/// Compact formatter that prints every float as `d.dddddddddddddddde±x`.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sci17;

impl Formatter for Sci17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn write_byte_array<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: &[u8]) -> io::Result<()> {
        CompactFormatter.write_byte_array(writer, value)
    }
}

/// Serializes `value` with [`Sci17`], followed by a newline.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sci17);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub(crate) fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub(crate) fn from_pair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// `#[serde(with = "complex")]` for a single scalar.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        <[f64; 2]>::deserialize(d).map(from_pair)
    }
}

/// `#[serde(with = "complex_vec")]` for `Vec<Complex64>`.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| pair(*z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Vec::<[f64; 2]>::deserialize(d).map(|v| v.into_iter().map(from_pair).collect())
    }
}

/// `#[serde(with = "complex_dvector")]` for `DVector<Complex64>`.
pub mod complex_dvector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &DVector<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| pair(*z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DVector<Complex64>, D::Error> {
        let v = complex_vec::deserialize(d)?;
        Ok(DVector::from_vec(v))
    }
}
