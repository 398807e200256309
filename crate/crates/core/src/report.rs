//! Report serialization with every float printed to 17 significant digits.

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use std::io::{self, Write};

/// Formats a finite float with 17 significant digits, in fixed notation for
/// decimal exponents in `-5..17` and scientific notation otherwise.
/// Non-finite values print as `NaN`, `inf` or `-inf`.
pub fn format_f64(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{v:.*}", (16 - exp) as usize)
    } else {
        sci
    }
}

struct SigFigFormatter<'a>(PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for SigFigFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Pretty JSON with 17-significant-digit floats and a trailing newline.
/// Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut out,
        SigFigFormatter(PrettyFormatter::with_indent(b"  ")),
    );
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(4.370_801_794_047_444), "4.3708017940474440");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(-2.0), "-2.0000000000000000");
        assert_eq!(format_f64(0.0), "0.0000000000000000");
        assert_eq!(format_f64(1e-9), "1.0000000000000001e-9");
        assert_eq!(format_f64(1e20), "1.0000000000000000e20");
        assert_eq!(format_f64(f64::NAN), "NaN");
    }

    #[test]
    fn round_trips_exactly() {
        for v in [
            std::f64::consts::PI,
            1.0 / 3.0,
            12_345.678_901_234_567,
            -7.5e-7,
            6.02e23,
        ] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_output_is_valid() {
        let text = to_json(&json!({"a": [1.5, 2], "b": {"c": 1e-12}, "d": f64::NAN}));
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"][0], 1.5);
        assert_eq!(back["a"][1], 2);
        assert_eq!(back["b"]["c"], 1e-12);
        assert!(back["d"].is_null());
        assert!(text.contains("1.5000000000000000"));
    }
}
