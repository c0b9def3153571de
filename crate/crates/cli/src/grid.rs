use std::str::FromStr;

/// A real number written as a decimal or as a fraction `p/q`.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (parse_plain(p)?, parse_plain(q)?);
            if q == 0.0 {
                return Err(format!("zero denominator in '{text}'"));
            }
            p / q
        }
        None => parse_plain(text)?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("'{text}' is not finite"))
    }
}

fn parse_plain(text: &str) -> Result<f64, String> {
    f64::from_str(text.trim()).map_err(|_| format!("'{text}' is not a number"))
}

/// `start:stop:step` over `[0, 1]`, inclusive of `stop` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 1.0,
            step: 0.01,
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got '{text}'"));
        };
        let grid = Grid {
            start: parse_real(start)?,
            stop: parse_real(stop)?,
            step: parse_real(step)?,
        };
        if grid.step <= 0.0 {
            return Err(format!("step must be positive, got {}", grid.step));
        }
        for v in [grid.start, grid.stop] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("grid bounds must lie in [0, 1], got {v}"));
            }
        }
        Ok(grid)
    }
}

impl Grid {
    /// Points `start + i·step`; empty when `start > stop`.
    pub fn points(&self) -> Vec<f64> {
        if self.start > self.stop {
            return Vec::new();
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| (self.start + i as f64 * self.step).min(1.0))
            .collect()
    }
}
