use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

const SIGNIFICANT: i32 = 12;

/// Formats `x` with 12 significant digits, trailing zeros trimmed.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..SIGNIFICANT).contains(&exp) {
        let decimals = (SIGNIFICANT - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
        if s == "-0" { "0".into() } else { s.to_string() }
    } else {
        let s = format!("{:.*e}", (SIGNIFICANT - 1) as usize, x);
        let (mantissa, exponent) = s.split_once('e').expect("scientific format");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

/// Writes `contents` to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            // write-then-rename so a failed run never leaves a truncated file
            let tmp = p.with_extension("partial");
            fs::write(&tmp, contents).map_err(|e| CliError::io(p, e))?;
            fs::rename(&tmp, p).map_err(|e| CliError::io(p, e))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(1.0), "1");
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_float(123456.789), "123456.789");
        assert_eq!(fmt_float(-0.25), "-0.25");
        assert_eq!(fmt_float(1e-7), "1e-7");
        assert_eq!(fmt_float(1.234567890123456e-9), "1.23456789012e-9");
        assert_eq!(fmt_float(6.02e23), "6.02e23");
        assert_eq!(fmt_float(-1e-300), "-1e-300");
    }
}
