//! Writes the guaranteed and blocked brick counts for each `q` as CSV.

use redistricting_ghost::experiments::emit_bounds;

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u32>().expect("integer"));
    let j = args.next().unwrap_or(10);
    let m = args.next().unwrap_or(100);
    print!("{}", emit_bounds(j, m).to_csv());
}
