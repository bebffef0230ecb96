use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const AVERAGE_TOL: f64 = 1e-10;

/// Shape `f` of a schedule `λ(t) = f(t/T)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ScheduleShape {
    Linear,
    /// `f(s) = s^q`.
    Power { exponent: f64 },
    /// Piecewise linear through `samples[i]` at `s = i / (len − 1)`.
    Table { samples: Vec<f64> },
}

impl ScheduleShape {
    pub fn validate(&self) -> Result<()> {
        match self {
            ScheduleShape::Linear => Ok(()),
            ScheduleShape::Power { exponent } => {
                if exponent.is_finite() && *exponent > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "power schedule exponent {exponent} must be positive"
                    )))
                }
            }
            ScheduleShape::Table { samples } => {
                if samples.len() < 2 {
                    return Err(Error::InvalidParameter(
                        "schedule table needs at least two samples".into(),
                    ));
                }
                if samples[0] != 0.0 || samples[samples.len() - 1] != 1.0 {
                    return Err(Error::InvalidParameter(
                        "schedule table must start at 0 and end at 1".into(),
                    ));
                }
                if samples.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
                    return Err(Error::InvalidParameter(
                        "schedule table must be strictly increasing".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// `f(s)` for `s ∈ [0, 1]`.
    pub fn eval(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        match self {
            ScheduleShape::Linear => s,
            ScheduleShape::Power { exponent } => s.powf(*exponent),
            ScheduleShape::Table { samples } => {
                let segments = (samples.len() - 1) as f64;
                let x = s * segments;
                let i = (x.floor() as usize).min(samples.len() - 2);
                let frac = x - i as f64;
                samples[i] + (samples[i + 1] - samples[i]) * frac
            }
        }
    }

    /// `λ̄ = ∫₀¹ f(s) ds`.
    pub fn average(&self) -> f64 {
        match self {
            // Table segments are linear, so integrating each one separately
            // avoids adaptive refinement at the kinks.
            ScheduleShape::Table { samples } => {
                let segments = (samples.len() - 1) as f64;
                samples
                    .windows(2)
                    .map(|w| adaptive_simpson(&|x| w[0] + (w[1] - w[0]) * x, 0.0, 1.0, AVERAGE_TOL))
                    .sum::<f64>()
                    / segments
            }
            _ => adaptive_simpson(&|s| self.eval(s), 0.0, 1.0, AVERAGE_TOL),
        }
    }
}

/// Parses `linear`, `power:Q` or `table:F0,F1,...`.
impl FromStr for ScheduleShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::InvalidParameter(format!("{what} in schedule '{s}'"));
        let shape = match s.split_once(':') {
            None if s == "linear" => ScheduleShape::Linear,
            Some(("power", q)) => ScheduleShape::Power {
                exponent: q.parse().map_err(|_| bad("bad exponent"))?,
            },
            Some(("table", values)) => ScheduleShape::Table {
                samples: values
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| bad("bad sample")))
                    .collect::<Result<_>>()?,
            },
            _ => return Err(bad("unknown shape")),
        };
        shape.validate()?;
        Ok(shape)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub shape: ScheduleShape,
    pub total_time: f64,
}

impl Schedule {
    pub fn new(shape: ScheduleShape, total_time: f64) -> Result<Self> {
        shape.validate()?;
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total time {total_time} must be positive"
            )));
        }
        Ok(Schedule { shape, total_time })
    }

    pub fn linear(total_time: f64) -> Result<Self> {
        Schedule::new(ScheduleShape::Linear, total_time)
    }

    pub fn lambda(&self, t: f64) -> f64 {
        self.shape.eval(t / self.total_time)
    }

    pub fn average(&self) -> f64 {
        self.shape.average()
    }
}

pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn averages() {
        assert!((ScheduleShape::Linear.average() - 0.5).abs() < 1e-12);
        let quad = ScheduleShape::Power { exponent: 2.0 };
        assert!((quad.average() - 1.0 / 3.0).abs() < 1e-10);
        let root = ScheduleShape::Power { exponent: 0.5 };
        assert!((root.average() - 2.0 / 3.0).abs() < 1e-9);
        let table = ScheduleShape::Table {
            samples: vec![0.0, 0.5, 1.0],
        };
        assert!((table.average() - 0.5).abs() < 1e-12);
        assert_eq!(table.eval(0.25), 0.25);
    }

    #[test]
    fn parses_shapes() {
        assert_eq!("linear".parse::<ScheduleShape>().unwrap(), ScheduleShape::Linear);
        assert_eq!(
            "power:2".parse::<ScheduleShape>().unwrap(),
            ScheduleShape::Power { exponent: 2.0 }
        );
        assert!("table:0,0.3,1".parse::<ScheduleShape>().is_ok());
        assert!("table:0,0.3".parse::<ScheduleShape>().is_err());
        assert!("cubic".parse::<ScheduleShape>().is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Schedule::new(ScheduleShape::Power { exponent: 0.0 }, 1.0).is_err());
        assert!(Schedule::linear(0.0).is_err());
        let flat = ScheduleShape::Table {
            samples: vec![0.0, 0.5, 0.5, 1.0],
        };
        assert!(flat.validate().is_err());
        let short = ScheduleShape::Table { samples: vec![0.0, 0.9] };
        assert!(short.validate().is_err());
    }

    proptest! {
        #[test]
        fn power_average_closed_form(q in 0.2f64..6.0) {
            let avg = ScheduleShape::Power { exponent: q }.average();
            prop_assert!((avg - 1.0 / (q + 1.0)).abs() < 1e-8);
        }

        #[test]
        fn schedules_are_monotone(q in 0.2f64..6.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let s = Schedule::new(ScheduleShape::Power { exponent: q }, 3.0).unwrap();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(s.lambda(3.0 * lo) <= s.lambda(3.0 * hi));
        }
    }
}
