use std::process::ExitCode;

use arbor_verify::run_default;

fn main() -> ExitCode {
    let results = run_default();
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
