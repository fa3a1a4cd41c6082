//! Parameter grids on the command line: `4,16,64`, `1..64`, `-10..28:2dB`.

use risnd_core::experiments::Quantity;
use risnd_core::{Error, Result};

const UNITS: [&str; 4] = ["dBm", "dB", "mW", "W"];

fn split_unit(s: &str) -> (&str, &str) {
    UNITS
        .iter()
        .find_map(|u| s.strip_suffix(u).map(|n| (n.trim(), *u)))
        .unwrap_or((s, ""))
}

fn number(s: &str, whole: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{s}` in grid `{whole}`")))
}

/// Comma-separated items; each is a value or an inclusive `a..b[:step]`
/// range (step 1 by default). A unit suffix applies to the whole item.
pub fn parse_grid(s: &str) -> Result<Vec<Quantity>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (body, unit) = split_unit(item);
        let Some((lo, rest)) = body.split_once("..") else {
            out.push(format!("{body}{unit}").parse()?);
            continue;
        };
        let (hi, step) = match rest.split_once(':') {
            Some((h, st)) => (h, number(st, s)?),
            None => (rest, 1.0),
        };
        let (lo, hi) = (number(lo, s)?, number(hi, s)?);
        if step.is_nan() || step <= 0.0 || hi < lo {
            return Err(Error::Config(format!("empty range `{item}`")));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(Error::Config(format!("range `{item}` has {count} points")));
        }
        for i in 0..count {
            let v = lo + step * i as f64;
            out.push(format!("{v}{unit}").parse()?);
        }
    }
    if out.is_empty() {
        return Err(Error::Config(format!("empty grid `{s}`")));
    }
    Ok(out)
}

/// A grid that must contain exactly one value.
pub fn parse_single(s: &str) -> Result<Quantity> {
    let mut g = parse_grid(s)?;
    if g.len() != 1 {
        return Err(Error::Config(format!("expected a single value, got `{s}`")));
    }
    Ok(g.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn written(s: &str) -> Vec<f64> {
        parse_grid(s).unwrap().iter().map(|q| q.written).collect()
    }

    #[test]
    fn lists_and_ranges() {
        assert_eq!(written("4,16, 64"), vec![4.0, 16.0, 64.0]);
        assert_eq!(written("1..4"), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(written("0..1:0.25"), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(written("-10..0:5dB"), vec![-10.0, -5.0, 0.0]);
        assert_eq!(written("2,8..10:2"), vec![2.0, 8.0, 10.0]);
    }

    #[test]
    fn units_convert() {
        let g = parse_grid("10dB,-90dBm").unwrap();
        assert!((g[0].linear - 10.0).abs() < 1e-12);
        assert!((g[1].linear - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("5..1").is_err());
        assert!(parse_grid("1..5:0").is_err());
        assert!(parse_grid("a..b").is_err());
        assert!(parse_single("1,2").is_err());
        assert_eq!(parse_single("25dB").unwrap().written, 25.0);
    }
}
