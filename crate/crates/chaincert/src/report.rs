//! Pass/fail reporting shared by the compatibility checks and the CLI.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// A named bundle of individually-reported checks. The report is the unit the
/// CLI serializes; `ok()` is the roll-up the exit code reflects.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> CheckReport {
        CheckReport { name: name.into(), items: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, ok: bool) {
        self.items.push(CheckItem { name: name.into(), ok, detail: None });
    }

    pub fn push_detail(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.items.push(CheckItem { name: name.into(), ok, detail: Some(detail.into()) });
    }

    pub fn ok(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }

    /// Appends another report's items under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for item in other.items {
            self.items.push(CheckItem {
                name: format!("{prefix}: {}", item.name),
                ok: item.ok,
                detail: item.detail,
            });
        }
    }
}
