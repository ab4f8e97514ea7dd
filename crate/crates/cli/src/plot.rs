use crate::record::RunRecord;

/// Two-column `order,partial_sum` CSV with one leading comment line that
/// identifies the problem and, when known, the target energy.
///
/// The target falls back to the record's bracket centre.
pub fn plot_csv(record: &RunRecord, target: Option<&str>) -> String {
    let mut out = format!(
        "# potential={} N={} l={} state={} mass={} digits={}",
        record.potential, record.n, record.l, record.state, record.mass, record.digits
    );
    if let Some(t) = target.or(record.center.as_deref()) {
        out.push_str(" target=");
        out.push_str(t);
    }
    out.push_str("\norder,partial_sum\n");
    for (i, p) in record.partial_sums.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, p));
    }
    out
}
