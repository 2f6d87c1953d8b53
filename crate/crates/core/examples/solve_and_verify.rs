//! Solves the bundled 54-vertex construction, verifies the result, and
//! prints the report.

use matchstick_core::{builtin_graph54, solve_param, verify, CheckConfig};

fn main() {
    let construction = builtin_graph54();
    let solved = solve_param(&construction, None).expect("bundled construction solves");
    println!(
        "{} = {:.12} ({} iterations, residual {:.3e})",
        solved.param_name, solved.value, solved.iterations, solved.residual
    );

    let embedding = construction
        .execute_with(&[(solved.param_name.as_str(), solved.value)])
        .expect("executes at the solved angle");
    let report = verify(&embedding, &CheckConfig::default());
    println!(
        "vertices: {}, edges: {}, girth: {}",
        report.vertex_count,
        report.edge_count,
        report.girth.map_or("none".to_string(), |g| g.to_string())
    );
    println!(
        "max unit deviation: {:.3e}, min clearance: {:.6}",
        report.max_unit_deviation,
        report.min_clearance.unwrap_or(f64::INFINITY)
    );
    println!("passed: {}", report.passed);
}
