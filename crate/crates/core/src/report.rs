use serde::Serialize;

use crate::exactlin::RatMatrix;
use crate::rational::format_q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn all<I: IntoIterator<Item = Verdict>>(it: I) -> Self {
        Verdict::from_bool(it.into_iter().all(Verdict::is_pass))
    }
}

/// Rows of `m` as `"num/den"` strings.
pub fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(format_q).collect())
        .collect()
}
