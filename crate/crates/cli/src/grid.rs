//! Point-grid syntax: `x1=a:b:n,x2=c,y1=d:e:k,...`.
//!
//! Each entry names one coordinate of `x` or `y` and gives either a single
//! value or an inclusive range `start:end:count`. Coordinates that are not
//! mentioned are fixed at 0. Points are enumerated with `x1` varying slowest
//! and `ym` fastest.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Axis {
    fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

fn parse_axis(spec: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
    let axis = match parts.as_slice() {
        [v] => {
            let v = num(v)?;
            Axis { start: v, end: v, count: 1 }
        }
        [a, b, n] => {
            let count = n.parse::<usize>().map_err(|_| format!("`{n}` is not a point count"))?;
            if count == 0 {
                return Err("point count must be positive".into());
            }
            Axis { start: num(a)?, end: num(b)?, count }
        }
        _ => return Err(format!("`{spec}`: expected `value` or `start:end:count`")),
    };
    if !(axis.start.is_finite() && axis.end.is_finite()) {
        return Err(format!("`{spec}`: endpoints must be finite"));
    }
    Ok(axis)
}

pub type PointPairs = Vec<(Vec<f64>, Vec<f64>)>;

/// Parses a grid for dimension `m` into `(x, y)` coordinate pairs.
pub fn parse_grid(spec: &str, m: usize) -> Result<PointPairs, String> {
    let mut axes: BTreeMap<(u8, usize), Axis> = BTreeMap::new();
    for entry in spec.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (key, value) = entry.split_once('=').ok_or_else(|| format!("`{entry}`: expected `name=range`"))?;
        let key = key.trim();
        let (which, index) = match key.split_at(key.len().min(1)) {
            ("x", rest) => (0u8, rest),
            ("y", rest) => (1u8, rest),
            _ => return Err(format!("`{key}`: coordinate names are x1..x{m} and y1..y{m}")),
        };
        let j: usize = index.parse().map_err(|_| format!("`{key}`: missing coordinate index"))?;
        if !(1..=m).contains(&j) {
            return Err(format!("`{key}`: index out of range for m = {m}"));
        }
        if axes.insert((which, j), parse_axis(value)?).is_some() {
            return Err(format!("`{key}` given twice"));
        }
    }
    if axes.is_empty() {
        return Err("empty grid".into());
    }
    let columns: Vec<Vec<f64>> = (0..2u8)
        .flat_map(|w| (1..=m).map(move |j| (w, j)))
        .map(|k| axes.get(&k).map_or(vec![0.0], Axis::values))
        .collect();
    let total: usize = columns.iter().map(Vec::len).product();
    if total > 1_000_000 {
        return Err(format!("grid has {total} points; the limit is 1000000"));
    }
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; columns.len()];
    for _ in 0..total {
        let coords: Vec<f64> = idx.iter().zip(&columns).map(|(&i, c)| c[i]).collect();
        out.push((coords[..m].to_vec(), coords[m..].to_vec()));
        for d in (0..columns.len()).rev() {
            idx[d] += 1;
            if idx[d] < columns[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_defaults() {
        let g = parse_grid("x1=0:1:3, y2=-1", 2).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[1], (vec![0.5, 0.0], vec![0.0, -1.0]));
    }

    #[test]
    fn ordering_is_x_first_slowest() {
        let g = parse_grid("x1=0:1:2,y1=0:1:2", 2).unwrap();
        let firsts: Vec<(f64, f64)> = g.iter().map(|(x, y)| (x[0], y[0])).collect();
        assert_eq!(firsts, vec![(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "z1=0", "x3=1", "x1=0:1", "x1=a", "x1=0:1:0", "x1=1,x1=2", "x=1"] {
            assert!(parse_grid(bad, 2).is_err(), "{bad}");
        }
    }
}
