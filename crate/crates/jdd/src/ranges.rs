//! Value lists on the command line: `a,b,c` or an inclusive range
//! `start:stop:step`. The two forms can be mixed, e.g. `1,5:50:5`.

use crate::error::{Error, Result};

fn usage(spec: &str, why: &str) -> Error {
    Error::Usage(format!("bad list or range {spec:?}: {why}"))
}

/// Real values. Range points are `start + i * step`, never accumulated.
pub fn parse_reals(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let nums = part
            .split(':')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| usage(spec, &e.to_string()))?;
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(usage(spec, "values must be finite"));
        }
        match nums[..] {
            [v] => out.push(v),
            [start, stop, step] => {
                if step <= 0.0 || stop < start {
                    return Err(usage(spec, "need start <= stop and a positive step"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                out.extend((0..count).map(|i| start + i as f64 * step));
            }
            _ => return Err(usage(spec, "ranges are start:stop:step")),
        }
    }
    Ok(out)
}

/// Positive integers.
pub fn parse_counts(spec: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let nums = part
            .split(':')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| usage(spec, &e.to_string()))?;
        match nums[..] {
            [v] => out.push(v),
            [start, stop, step] => {
                if step == 0 || stop < start {
                    return Err(usage(spec, "need start <= stop and a positive step"));
                }
                out.extend((start..=stop).step_by(step));
            }
            _ => return Err(usage(spec, "ranges are start:stop:step")),
        }
    }
    if out.contains(&0) {
        return Err(usage(spec, "counts must be at least 1"));
    }
    Ok(out)
}
