use hvol::acceptance::{run, Mutation};

// runs without the libtest harness so the per-criterion lines are never captured
fn main() {
    let reports = run(None, Mutation::None);
    assert_eq!(reports.len(), 11);
    let mut failed = Vec::new();
    for r in &reports {
        let status = if r.pass() { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {:>2} {:<22} {:>4} checks  {:.2}s", r.id, r.name, r.checks.len(), r.seconds);
        if let Some(e) = &r.error {
            println!("         error: {e}");
        }
        for c in r.failures() {
            println!("         {}: lhs={} rhs={} tol={:e}", c.name, c.lhs, c.rhs, c.tolerance);
        }
        if !r.pass() {
            failed.push(r.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of {} criteria pass", reports.len() - failed.len(), reports.len());
}
