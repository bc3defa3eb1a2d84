//! Literal parsers for command-line values.

use num_complex::Complex64;

/// Parses `a`, `bi`, `a+bi`, `a-bi` (no spaces); `i` alone means `1i`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = || format!("invalid complex literal '{s}' (expected a, bi, a+bi or a-bi)");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => t.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// Comma-separated complex literals.
pub fn complex_list(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(complex).collect()
}

/// Comma-separated reals.
pub fn real_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| format!("invalid number '{t}'"))).collect()
}

/// `x0,x1,y0,y1`.
pub fn window(s: &str) -> Result<[f64; 4], String> {
    let v = real_list(s)?;
    let w: [f64; 4] = v.try_into().map_err(|_| format!("window '{s}' needs four numbers x0,x1,y0,y1"))?;
    if !(w[0] < w[1] && w[2] < w[3]) {
        return Err(format!("window '{s}' needs x0 < x1 and y0 < y1"));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(complex("1-2i").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(complex("-1e-3+2.5e2i").unwrap(), Complex64::new(-1e-3, 250.0));
        assert_eq!(complex("3+i").unwrap(), Complex64::new(3.0, 1.0));
        assert!(complex("1 + 2i").is_err());
        assert!(complex("abc").is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(window("-2,2,-1,1").unwrap(), [-2.0, 2.0, -1.0, 1.0]);
        assert!(window("1,0,0,1").is_err());
        assert!(window("1,2,3").is_err());
    }
}
