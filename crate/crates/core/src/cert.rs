use serde::{Deserialize, Serialize};

/// One checked claim, with enough detail to audit it by hand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Certificate {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            passed: true,
            detail: detail.into(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            passed: false,
            detail: detail.into(),
        }
    }

    pub fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn all_passed(certs: &[Certificate]) -> bool {
    certs.iter().all(|c| c.passed)
}
