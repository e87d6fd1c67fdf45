use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    InvalidInput,
    InternalError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InvalidInput => 1,
            Status::InternalError => 2,
        }
    }
}

/// What every command returns. With `--json` it is printed as one object;
/// otherwise `text` is printed line by line.
#[derive(Debug, Clone, Serialize)]
pub struct CliReport {
    pub command: &'static str,
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl CliReport {
    pub fn ok(command: &'static str, payload: Value, text: Vec<String>) -> Self {
        Self {
            command,
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
            text,
        }
    }

    pub fn failure(command: &'static str, status: Status, diagnostic: impl Into<String>) -> Self {
        let d = diagnostic.into();
        Self {
            command,
            status,
            payload: Value::Null,
            diagnostics: vec![d],
            text: Vec::new(),
        }
    }

    pub fn invalid(command: &'static str, diagnostic: impl Into<String>) -> Self {
        Self::failure(command, Status::InvalidInput, diagnostic)
    }

    pub fn internal(command: &'static str, diagnostic: impl Into<String>) -> Self {
        Self::failure(command, Status::InternalError, diagnostic)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string(self).expect("reports always serialize");
            s.push('\n');
            s
        } else {
            let mut s = self.text.join("\n");
            if !s.is_empty() {
                s.push('\n');
            }
            for d in &self.diagnostics {
                if self.status == Status::Ok {
                    s.push_str(&format!("note: {d}\n"));
                }
            }
            s
        }
    }
}
