use serde::{Deserialize, Serialize};

/// Absolute test-BER excess over the no-Eve baseline that flags Eve.
pub const DEFAULT_MARGIN: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Secure,
    Compromised,
}

/// Compromised iff `test_ber > baseline_ber + margin`.
pub fn detect(test_ber: f64, baseline_ber: f64, margin: f64) -> Verdict {
    if test_ber > baseline_ber + margin {
        Verdict::Compromised
    } else {
        Verdict::Secure
    }
}
