//! CSV verification tables.

use crate::flexlab::FlexDemo;

/// One row per time step: `step, max_length_err, min_margin,
/// laminarity_residual`.
pub fn flex_csv(demo: &FlexDemo) -> String {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "max_length_err", "min_margin", "laminarity_residual"])
        .expect("in-memory write");
    for s in &demo.steps {
        w.write_record([
            s.step.to_string(),
            format!("{:e}", s.lengths.max_error),
            format!("{:e}", s.injectivity.min_margin),
            format!("{:e}", s.laminarity.residual),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
