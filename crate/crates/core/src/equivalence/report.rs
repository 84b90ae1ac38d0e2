use std::io::Write;

use super::metric::{asymptotic_equivalence_check, tv_distance, RatioTrace, Regime, TvDistance};
use crate::analytic::SirCurve;
use crate::error::Result;

/// Comparison of two success curves of the same vehicle order.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub label_a: String,
    pub label_b: String,
    pub order: u8,
    pub a: SirCurve,
    pub b: SirCurve,
    pub distance: TvDistance,
    pub low: RatioTrace,
    pub high: RatioTrace,
}

impl EquivalenceReport {
    pub fn new(label_a: &str, a: SirCurve, label_b: &str, b: SirCurve, order: u8) -> Result<Self> {
        let distance = tv_distance(&a, &b)?;
        let low = asymptotic_equivalence_check(&a, &b, Regime::Low)?;
        let high = asymptotic_equivalence_check(&a, &b, Regime::High)?;
        Ok(Self {
            label_a: label_a.into(),
            label_b: label_b.into(),
            order,
            a,
            b,
            distance,
            low,
            high,
        })
    }

    /// Per-θ rows with both curves, their error columns, the gap and both ratios.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "theta,value_a,err_a,value_b,err_b,abs_diff,outage_ratio,success_ratio")?;
        for i in 0..self.a.len() {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                self.a.theta[i],
                self.a.value[i],
                self.a.err[i],
                self.b.value[i],
                self.b.err[i],
                (self.a.value[i] - self.b.value[i]).abs(),
                self.low.ratio[i],
                self.high.ratio[i]
            )?;
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        let d = &self.distance;
        format!(
            "{} vs {} (order {}): epsilon={:.6} at theta={:.4e}, range [{:.6}, {:.6}]; \
             low-theta outage ratio {:.4}, high-theta success ratio {:.4}\n",
            self.label_a,
            self.label_b,
            self.order,
            d.epsilon,
            d.theta_star,
            d.low,
            d.high,
            self.low.ratio[0],
            self.high.ratio[self.high.ratio.len() - 1],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{log_grid, CurveKind};

    #[test]
    fn csv_and_summary() {
        let t = log_grid(0.1, 10.0, 3).unwrap();
        let a = SirCurve::new(t.clone(), vec![0.9, 0.6, 0.2], vec![0.0; 3], CurveKind::Analytic).unwrap();
        let b = SirCurve::new(t, vec![0.8, 0.6, 0.1], vec![0.01; 3], CurveKind::MonteCarlo { n: 100 }).unwrap();
        let r = EquivalenceReport::new("PSP", a, "PLM", b, 2).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(r.summary().contains("epsilon=0.100000"));
        assert!((r.high.ratio[2] - 2.0).abs() < 1e-12);
    }
}
