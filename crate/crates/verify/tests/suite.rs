use motclass::DEFAULT_BUDGET;
use verify::*;

#[test]
#[ignore = "runs the whole suite; the acceptance target covers it"]
fn whole_suite_timing() {
    let cases = suite();
    for (c, r) in cases.iter().zip(run_cases(&cases, DEFAULT_BUDGET, true)) {
        match r {
            Ok(rs) => {
                for r in rs {
                    println!("{} {:?}ms {:?}", r.summary(), r.wall_ms, r.notes);
                }
            }
            Err(e) => println!("ERROR {:?}: {e}", c.id),
        }
    }
}
