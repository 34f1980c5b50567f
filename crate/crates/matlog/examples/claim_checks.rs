use matlog::harness::{run_checks, Profile};
use matlog::Budget;

fn main() {
    let profile = std::env::args()
        .nth(1)
        .and_then(|t| Profile::from_token(&t))
        .unwrap_or_else(Profile::smoke);
    let budget = Budget::default();
    let report = run_checks(None, 0xACCE5, &profile, &budget);
    print!("{}", report.render_text());
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}
