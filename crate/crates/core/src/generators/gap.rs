use crate::model::{Bin, Instance, Solution, Task};

/// Squares that fit one `21 x 21` demand bin but no `21 x 21` square
/// geometrically: sides 10, 10, 8, 8, 5 and nine of side 3 (area 434 of 441).
///
/// Returns the instance (ids 1 to 14 in that order) and a one-bin allocation.
/// Slots 1 to 10 and 12 to 21 end at load 21, slot 11 at load 14.
pub fn gen_gap() -> (Instance, Solution) {
    let sides = [10, 10, 8, 8, 5, 3, 3, 3, 3, 3, 3, 3, 3, 3];
    let starts = [1, 12, 1, 14, 9, 9, 11, 1, 4, 7, 10, 13, 16, 19];
    let tasks: Vec<Task> = sides
        .iter()
        .enumerate()
        .map(|(i, &s)| Task::new(i as u64 + 1, s, s))
        .collect();
    let mut bin = Bin::new();
    for (task, &start) in tasks.iter().zip(&starts) {
        bin.push(*task, start);
    }
    let instance = Instance::new(21, 21, tasks).expect("fixture dimensions are valid");
    (instance, Solution::new(vec![bin]))
}
