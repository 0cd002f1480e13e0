//! Checks the three guarantees on every small configuration and prints
//! the rows that disagree.

use redistricting_ghost::experiments::sweep;

fn main() {
    let table = sweep(4, 2);
    println!("{} configurations", table.rows.len());
    for row in table.violations() {
        println!("{row:?}");
    }
}
