//! JSON and pretty printers for the workbench types.

use nalgebra::DMatrix;
use serde_json::{json, Value};

pub fn matrix_json(m: &DMatrix<f64>) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|r| Value::Array((0..m.ncols()).map(|c| json!(m[(r, c)])).collect()))
        .collect();
    Value::Array(rows)
}

pub fn print_matrix(label: &str, m: &DMatrix<f64>) {
    println!("{label}:");
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| format!("{:>13.6e}", m[(r, c)]))
            .collect();
        println!("  [{}]", row.join(", "));
    }
}

/// Fixed scientific formatting used by the CSV writer.
pub fn csv_float(v: f64) -> String {
    format!("{v:.12e}")
}
