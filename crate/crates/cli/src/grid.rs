use powser::{Error, Result};

/// `A:B:n`, n log-spaced points from A to B inclusive (either direction).
pub fn parse_log_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("grid '{s}' must look like A:B:steps"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid endpoints must be positive, got '{s}'")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("grid needs at least one step".into()));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let (la, lb) = (a.log10(), b.log10());
    Ok((0..n)
        .map(|k| match k {
            0 => a,
            k if k == n - 1 => b,
            k => 10f64.powf(la + (lb - la) * k as f64 / (n - 1) as f64),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_spacing() {
        let g = parse_log_grid("1e-1:1e-3:9").unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[8], 1e-3);
        assert!((g[4] - 1e-2).abs() < 1e-15);
        assert!(parse_log_grid("1:2").is_err());
        assert!(parse_log_grid("0:1:3").is_err());
        assert!(parse_log_grid("1:2:0").is_err());
    }
}
