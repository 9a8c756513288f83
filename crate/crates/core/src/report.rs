//! Minimal JSON/CSV emission helpers. Hand-rolled so numeric output is
//! bit-stable: floats print with 17 significant digits, which round-trips
//! f64 exactly and keeps repeated runs byte-identical.

/// 17-significant-digit scientific form; "null" for non-finite values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        "null".to_string()
    }
}

/// Tiny JSON object builder with stable field order.
pub struct JsonBuf {
    out: String,
    first: Vec<bool>,
}

impl JsonBuf {
    pub fn new() -> Self {
        JsonBuf {
            out: String::new(),
            first: Vec::new(),
        }
    }

    pub fn open(&mut self) {
        self.out.push('{');
        self.first.push(true);
    }

    pub fn close(&mut self) {
        self.out.push('}');
        self.first.pop();
    }

    fn sep(&mut self) {
        if let Some(first) = self.first.last_mut() {
            if *first {
                *first = false;
            } else {
                self.out.push(',');
            }
        }
    }

    pub fn field_raw(&mut self, key: &str, raw: &str) {
        self.sep();
        self.out.push_str(&format!("\"{key}\":{raw}"));
    }

    pub fn field_f64(&mut self, key: &str, v: f64) {
        self.field_raw(key, &fmt_f64(v));
    }

    pub fn field_usize(&mut self, key: &str, v: usize) {
        self.field_raw(key, &v.to_string());
    }

    pub fn field_u64(&mut self, key: &str, v: u64) {
        self.field_raw(key, &v.to_string());
    }

    pub fn field_bool(&mut self, key: &str, v: bool) {
        self.field_raw(key, if v { "true" } else { "false" });
    }

    pub fn field_str(&mut self, key: &str, v: &str) {
        self.field_raw(key, &format!("\"{}\"", escape(v)));
    }

    pub fn finish(self) -> String {
        self.out
    }
}

impl Default for JsonBuf {
    fn default() -> Self {
        Self::new()
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Join already-formatted JSON values into an array literal.
pub fn json_array(items: &[String]) -> String {
    format!("[{}]", items.join(","))
}

/// Format a float for a CSV cell (same 17-digit convention, empty for NaN).
pub fn csv_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        String::new()
    }
}
