use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

/// Significant digits written for every CSV number.
pub const DIGITS: usize = 12;

/// `%.12g`-style formatting: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros dropped. Non-finite values become
/// the empty string.
pub fn fmt_g(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS as i32 - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink(out)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}

pub fn write_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> io::Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_examples() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(-2.5), "-2.5");
        assert_eq!(fmt_g(0.1), "0.1");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g(123456.789), "123456.789");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(1.5e-7), "1.5e-07");
        assert_eq!(fmt_g(2.0e13), "2e+13");
        assert_eq!(fmt_g(999999999999.6), "1e+12");
        assert_eq!(fmt_g(f64::NAN), "");
        assert_eq!(fmt_g(f64::INFINITY), "");
    }

    #[test]
    fn g_format_round_trips() {
        let mut x = 1.234_567_890_123_456_7e-9;
        while x < 1e15 {
            for v in [x, -x, x * std::f64::consts::PI] {
                let back: f64 = fmt_g(v).parse().unwrap();
                assert!((back - v).abs() <= 5e-12 * v.abs(), "{v} -> {}", fmt_g(v));
            }
            x *= 7.3;
        }
    }
}
