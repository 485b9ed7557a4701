use serde_json::{json, Value};

use super::Certificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    LConsistent,
    L2OnlyConsistent,
    InsufficientData,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::LConsistent => "L(S)-consistent",
            Verdict::L2OnlyConsistent => "L2-only-consistent",
            Verdict::InsufficientData => "insufficient data",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceRow {
    pub p: u64,
    pub level: u32,
    pub height: usize,
    /// `height / p^l`
    pub ratio_l: f64,
    /// `height / p^(2l)`
    pub ratio_2l: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceReport {
    pub rows: Vec<EvidenceRow>,
    /// Growth exponent of `height / p^l` between the smallest and largest prime.
    pub growth: Option<f64>,
    pub verdict: Verdict,
}

impl EvidenceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "growth": self.growth,
            "rows": self.rows.iter().map(|r| json!({
                "p": r.p, "level": r.level, "height": r.height,
                "ratio_l": r.ratio_l, "ratio_2l": r.ratio_2l,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Growth threshold separating `C·p^l` from `C·p^(l+1)` behaviour.
const GROWTH_SPLIT: f64 = 0.5;

/// Compares `height/p^l` across primes, keeping for each prime the
/// lowest-level certificate. Bounded ratios point to `L(S)`, ratios growing
/// like a power of `p` to `L²(S)` only. The verdict is evidence, not proof.
pub fn classify_evidence(certs: &[Certificate]) -> EvidenceReport {
    let mut best: Vec<&Certificate> = Vec::new();
    for c in certs {
        match best.iter_mut().find(|b| b.p == c.p) {
            Some(b) if (c.level, c.height) < (b.level, b.height) => *b = c,
            Some(_) => {}
            None => best.push(c),
        }
    }
    best.sort_by_key(|c| c.p);
    let rows: Vec<EvidenceRow> = best
        .iter()
        .map(|c| {
            let pl = (c.p as f64).powi(c.level as i32);
            EvidenceRow {
                p: c.p,
                level: c.level,
                height: c.height,
                ratio_l: c.height as f64 / pl,
                ratio_2l: c.height as f64 / (pl * pl),
            }
        })
        .collect();
    if rows.len() < 2 {
        return EvidenceReport { rows, growth: None, verdict: Verdict::InsufficientData };
    }
    let (lo, hi) = (&rows[0], &rows[rows.len() - 1]);
    let growth = if lo.ratio_l > 0.0 && hi.ratio_l > 0.0 {
        (hi.ratio_l / lo.ratio_l).ln() / (hi.p as f64 / lo.p as f64).ln()
    } else if hi.ratio_l > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    let verdict = if growth < GROWTH_SPLIT { Verdict::LConsistent } else { Verdict::L2OnlyConsistent };
    EvidenceReport { rows, growth: Some(growth), verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::BoundKind;
    use crate::exactfield::{FpElem, Poly, RatFun};

    fn cert(p: u64, level: u32, height: usize) -> Certificate {
        let z = Poly::<FpElem>::z(&p);
        Certificate {
            p,
            level,
            a: RatFun::from_poly(z.pow(height as u64)),
            verified_to: 100,
            height,
            bound: 1 << 40,
            bound_kind: BoundKind::LBound,
        }
    }

    #[test]
    fn lucas_heights_are_l_consistent() {
        let certs: Vec<_> = [3u64, 5, 7].iter().map(|&p| cert(p, 1, (p as usize - 1) / 2)).collect();
        assert_eq!(classify_evidence(&certs).verdict, Verdict::LConsistent);
    }

    #[test]
    fn f2_heights_are_l2_only() {
        let certs: Vec<_> =
            [3u64, 5, 7].iter().map(|&p| cert(p, 2, (p as usize * (p as usize * p as usize - 1)) / 2)).collect();
        assert_eq!(classify_evidence(&certs).verdict, Verdict::L2OnlyConsistent);
    }

    #[test]
    fn single_prime() {
        assert_eq!(classify_evidence(&[cert(3, 1, 1)]).verdict, Verdict::InsufficientData);
        assert_eq!(classify_evidence(&[cert(3, 1, 1), cert(3, 2, 4)]).verdict, Verdict::InsufficientData);
    }
}
