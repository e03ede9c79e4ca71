//! Parse an ARFF table, inspect it, and write it back out.

use metaselect::aslib::{parse_arff, write_arff};

const RUNS: &str = "\
% two solvers on three instances
@RELATION ALGORITHM_RUNS_DEMO

@ATTRIBUTE instance_id STRING
@ATTRIBUTE repetition NUMERIC
@ATTRIBUTE algorithm STRING
@ATTRIBUTE runtime NUMERIC
@ATTRIBUTE runstatus {ok, timeout, memout}

@DATA
'inst 1.cnf',1,minisat,12.5,ok
'inst 1.cnf',1,glucose,300,timeout
inst2.cnf,1,minisat,?,memout
inst2.cnf,1,glucose,3.25,ok
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = parse_arff(RUNS)?;
    println!("relation {} with {} rows", table.relation_name, table.rows.len());
    for a in &table.attributes {
        println!("  {:<12} {:?}", a.name, a.kind);
    }
    let runtime = table.column("runtime").expect("runtime column");
    for row in &table.rows {
        match row[runtime].as_f64() {
            Some(t) => println!("  {:?} took {t}s", row[0].as_text().unwrap_or_default()),
            None => println!("  {:?} has no runtime", row[0].as_text().unwrap_or_default()),
        }
    }

    let written = write_arff(&table);
    assert_eq!(parse_arff(&written)?, table);
    println!("\nround trip:\n{written}");
    Ok(())
}
