use super::{best_over_guesses, describe_guesses, GuessRecord, SolveError, Solved};
use crate::bp1d::{aptas_bp, exact_bp, ffd, ExactBp, Grouping};
use crate::model::ratio::ge_fraction_of;
use crate::model::{
    bin_area, is_sorted_profile, load_profile, verify_solution, Bin, BinTag, Instance, Rational, Solution,
    StepProfile, StructuredSolution, Task,
};
use crate::oracle::{pack_into_bins, OracleOutcome, SearchBudget, Verdict};
use crate::primitives::{first_fit_on_top, nfdh, shelves, stack_sorted, two_pile_strip, FitParams, StripLayout};

/// Guesses up to this value assign the big squares exactly.
const EXACT_ASSIGNMENT_LIMIT: u64 = 55;
const ASSIGNMENT_BUDGET: u64 = 2_000_000;
const ONE_DIM_BUDGET: u64 = 2_000_000;

/// Shape of the bin, which decides how big squares are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SquareCase {
    /// `T = C`, handled without guessing.
    EqualSides,
    /// `T >= 4C/3`.
    WideBin,
    /// `C <= T < 4C/3`.
    NearSquareWide,
    /// `3C/4 < T < C`.
    NearSquareTall,
    /// `T <= 3C/4`.
    TallBin,
}

impl SquareCase {
    /// Case used by [`solve_squares_general`]; `T = C` counts as near square.
    pub fn of(horizon: u64, capacity: u64) -> SquareCase {
        let (t, c) = (horizon as u128, capacity as u128);
        if 3 * t >= 4 * c {
            SquareCase::WideBin
        } else if t >= c {
            SquareCase::NearSquareWide
        } else if 4 * t > 3 * c {
            SquareCase::NearSquareTall
        } else {
            SquareCase::TallBin
        }
    }
}

impl std::fmt::Display for SquareCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SquareCase::EqualSides => "equal-sides",
            SquareCase::WideBin => "wide-bin",
            SquareCase::NearSquareWide => "near-square-wide",
            SquareCase::NearSquareTall => "near-square-tall",
            SquareCase::TallBin => "tall-bin",
        })
    }
}

/// Which one-dimensional packer handled the middle-sized squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneDimRoute {
    Exact,
    FirstFitDecreasing,
    Aptas,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaresReport {
    pub case: SquareCase,
    pub guesses: Vec<GuessRecord>,
    pub accepted_guess: Option<u64>,
    pub structured_bins: usize,
    pub final_bins: usize,
    /// Times a new bin was opened by leftmost fit while an older bin held
    /// neither one nor four squares (checked for `T = C` only).
    pub leftmost_violations: usize,
    /// Bins whose squares had to be rearranged by NFDH to get a tag.
    pub restructured_bins: usize,
    pub one_dim_route: Option<OneDimRoute>,
    pub audit_clean: bool,
    /// For guessing cases: `final_bins <= 2 * accepted_guess`.
    pub within_bound: bool,
}

impl SquaresReport {
    pub fn certified(&self) -> bool {
        self.within_bound && self.audit_clean && self.leftmost_violations == 0
    }

    pub fn notes(&self) -> Vec<String> {
        let mut notes = vec![format!("case: {}", self.case)];
        notes.extend(describe_guesses(&self.guesses));
        if self.restructured_bins > 0 {
            notes.push(format!("{} bins rearranged by NFDH", self.restructured_bins));
        }
        if let Some(route) = self.one_dim_route {
            notes.push(format!("middle squares packed by {route:?}"));
        }
        if self.leftmost_violations > 0 {
            notes.push(format!("leftmost-fit invariant violated {} times", self.leftmost_violations));
        }
        if !self.audit_clean {
            notes.push("first-fit fill audit recorded a violation".into());
        }
        notes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftmostOutcome {
    pub bins: Vec<Bin>,
    /// Task counts of the existing bins each time a new bin was opened.
    pub openings: Vec<Vec<usize>>,
}

impl LeftmostOutcome {
    /// Openings where some older bin held neither one nor four squares.
    pub fn violations(&self) -> usize {
        self.openings
            .iter()
            .filter(|counts| counts.iter().any(|&n| n != 1 && n != 4))
            .count()
    }
}

fn leftmost_fit(tasks: &[Task], horizon: u64, capacity: u64) -> LeftmostOutcome {
    let mut ordered = tasks.to_vec();
    ordered.sort_by(|a, b| {
        b.width
            .cmp(&a.width)
            .then(b.height.cmp(&a.height))
            .then(a.id.cmp(&b.id))
    });
    let mut bins: Vec<(Bin, StepProfile)> = Vec::new();
    let mut openings = Vec::new();
    for task in ordered {
        let mut best: Option<(u64, usize)> = None;
        for (index, (_, profile)) in bins.iter().enumerate() {
            if let Some(start) = profile.leftmost_fit(task.width, task.height, capacity) {
                if best.is_none_or(|(s, _)| start < s) {
                    best = Some((start, index));
                }
            }
        }
        let (start, index) = match best {
            Some(found) => found,
            None => {
                openings.push(bins.iter().map(|(b, _)| b.len()).collect());
                bins.push((Bin::new(), StepProfile::new(horizon)));
                (1, bins.len() - 1)
            }
        };
        let (bin, profile) = &mut bins[index];
        profile.add(start, start + task.width - 1, task.height);
        bin.push(task, start);
    }
    LeftmostOutcome {
        bins: bins.into_iter().map(|(b, _)| b).collect(),
        openings,
    }
}

/// Squares of side above `side/3`, largest first, each at the smallest start
/// slot where it fits over all open bins (ties: lowest bin).
pub fn leftmost_fit_big_squares(tasks: &[Task], side: u64) -> Result<LeftmostOutcome, SolveError> {
    if let Some(t) = tasks.iter().find(|t| !t.is_square() || 3 * t.width <= side || t.width > side) {
        return Err(SolveError::NotApplicable(format!(
            "task {} is not a square with side in (side/3, side]",
            t.id
        )));
    }
    Ok(leftmost_fit(tasks, side, side))
}

/// Squares with side in `(side/4, side/3]`, nine per bin in a 3x3 layout.
pub fn pack_nine_groups(tasks: &[Task], side: u64) -> Result<Vec<Bin>, SolveError> {
    if let Some(t) = tasks
        .iter()
        .find(|t| !t.is_square() || 4 * t.width <= side || 3 * t.width > side)
    {
        return Err(SolveError::NotApplicable(format!(
            "task {} is not a square with side in (side/4, side/3]",
            t.id
        )));
    }
    let mut ordered = tasks.to_vec();
    ordered.sort_by(|a, b| b.width.cmp(&a.width).then(a.id.cmp(&b.id)));
    ordered
        .chunks(9)
        .map(|chunk| match nfdh(chunk, side, side).as_slice() {
            [bin] => Ok(bin.clone()),
            _ => Err(SolveError::Internal("nine middle squares did not fit one bin".into())),
        })
        .collect()
}

/// Tags a bin as sorted or half full, or rearranges its tasks by NFDH.
/// Returns the bins and whether a rearrangement happened.
fn structure_bin(instance: &Instance, bin: Bin) -> (Vec<(Bin, BinTag)>, bool) {
    let half = Rational::new(1, 2);
    if let Ok(profile) = load_profile(instance, &bin) {
        if profile.max_load() <= instance.capacity() {
            if is_sorted_profile(&profile).unwrap_or(false) {
                return (vec![(bin, BinTag::SortedProfile)], false);
            }
            if ge_fraction_of(bin_area(&bin), half, instance.bin_area()) {
                return (vec![(bin, BinTag::AlphaFull(half))], false);
            }
        }
    }
    let tasks: Vec<Task> = bin.tasks().copied().collect();
    let bins = nfdh(&tasks, instance.horizon(), instance.capacity());
    (bins.into_iter().map(|b| (b, BinTag::SortedProfile)).collect(), true)
}

fn quarter_params() -> FitParams {
    FitParams::new(Rational::from_integer(2), Rational::new(1, 4), Rational::new(1, 4))
        .expect("fixed parameters are consistent")
}

fn params(delta_h: Rational, delta_w: Rational) -> FitParams {
    FitParams::new(Rational::from_integer(2), delta_h, delta_w).expect("fixed parameters are consistent")
}

fn ensure_squares(instance: &Instance) -> Result<(), SolveError> {
    match instance.tasks().iter().find(|t| !t.is_square()) {
        Some(t) => Err(SolveError::NotApplicable(format!(
            "task {} is {}x{}, not a square",
            t.id, t.width, t.height
        ))),
        None => Ok(()),
    }
}

/// 2-approximation for squares when `T = C`.
///
/// Squares above `C/3` go by leftmost fit, squares in `(C/4, C/3]` nine per
/// bin, and the rest by first fit with `delta_h = delta_w = 1/4`.
pub fn solve_squares_eq(instance: &Instance) -> Result<Solved<SquaresReport>, SolveError> {
    ensure_squares(instance)?;
    let side = instance.capacity();
    if instance.horizon() != side {
        return Err(SolveError::NotApplicable(format!(
            "horizon {} differs from capacity {side}",
            instance.horizon()
        )));
    }
    let mut big = Vec::new();
    let mut middle = Vec::new();
    let mut small = Vec::new();
    for &t in instance.tasks() {
        if 3 * t.width > side {
            big.push(t);
        } else if 4 * t.width > side {
            middle.push(t);
        } else {
            small.push(t);
        }
    }

    let leftmost = leftmost_fit_big_squares(&big, side)?;
    let leftmost_violations = leftmost.violations();
    let mut structured = StructuredSolution::empty(Rational::from_integer(2));
    let mut restructured_bins = 0;
    for bin in leftmost.bins {
        let (bins, rearranged) = structure_bin(instance, bin);
        restructured_bins += usize::from(rearranged);
        for (b, tag) in bins {
            structured.push(b, tag);
        }
    }
    for bin in pack_nine_groups(&middle, side)? {
        structured.push(bin, BinTag::SortedProfile);
    }
    let structured_bins = structured.num_bins();
    let fit = first_fit_on_top(instance, &structured, &small, quarter_params())?;
    let report = verify_solution(instance, &fit.solution);
    if !report.is_valid() {
        return Err(SolveError::Internal(report.to_string()));
    }
    let final_bins = fit.solution.num_bins();
    Ok(Solved {
        solution: fit.solution,
        report: SquaresReport {
            case: SquareCase::EqualSides,
            guesses: Vec::new(),
            accepted_guess: None,
            structured_bins,
            final_bins,
            leftmost_violations,
            restructured_bins,
            one_dim_route: None,
            audit_clean: fit.audit.is_clean(),
            within_bound: true,
        },
    })
}

#[derive(Debug, Clone, Default)]
struct RegionGroup {
    /// Left-pile tasks inside the region.
    left_inside: Vec<Task>,
    /// Right-pile task crossing the region's lower boundary.
    right_crossing: Vec<Task>,
    /// Right-pile tasks inside the region.
    right_inside: Vec<Task>,
    /// Left-pile task crossing the upper boundary, plus the dropped task in
    /// the last region.
    left_crossing: Vec<Task>,
}

/// Splits a strip into `regions` regions of length `region_len` along the
/// pile axis and collects, per region, the two task groups that become bins.
fn region_groups(layout: &StripLayout, region_len: u64, regions: usize) -> Result<Vec<RegionGroup>, String> {
    let mut groups = vec![RegionGroup::default(); regions];
    for (items, is_left) in [(&layout.left, true), (&layout.right, false)] {
        for item in items {
            if item.task.height >= region_len {
                return Err(format!("task {} spans a whole region", item.task.id));
            }
            let region = (item.bottom / region_len) as usize;
            let crosses = (region as u64 + 1) * region_len < item.top();
            let target = match (is_left, crosses) {
                (true, false) => groups.get_mut(region).map(|g| &mut g.left_inside),
                (true, true) => groups.get_mut(region).map(|g| &mut g.left_crossing),
                (false, false) => groups.get_mut(region).map(|g| &mut g.right_inside),
                (false, true) => groups.get_mut(region + 1).map(|g| &mut g.right_crossing),
            };
            target
                .ok_or_else(|| format!("task {} lies outside the strip", item.task.id))?
                .push(item.task);
        }
    }
    if let Some(k) = layout.dropped {
        groups
            .last_mut()
            .ok_or_else(|| "no region for the dropped task".to_string())?
            .left_crossing
            .push(k);
    }
    Ok(groups)
}

fn single_nfdh(tasks: &[Task], horizon: u64, capacity: u64) -> Option<Bin> {
    let mut bins = nfdh(tasks, horizon, capacity);
    (bins.len() == 1).then(|| bins.remove(0))
}

/// Left tasks stacked at slot 1 and the crossing right task next to the
/// narrowest of them, like a shelf.
fn stacked_with_neighbour(left: &[Task], right: &[Task], horizon: u64, capacity: u64) -> Option<Bin> {
    let mut bin = stack_sorted(left, horizon, capacity).ok()?;
    let narrowest = left.iter().map(|t| t.width).min().unwrap_or(0);
    let mut profile = StepProfile::from_bin(horizon, &bin);
    let mut start = narrowest + 1;
    for t in right {
        let last = start + t.width - 1;
        if last > horizon || profile.max_over(start, last) + t.height > capacity {
            return None;
        }
        profile.add(start, last, t.height);
        bin.push(*t, start);
        start = last + 1;
    }
    profile.is_non_increasing().then_some(bin)
}

#[derive(Clone)]
struct CaseResult {
    structured: StructuredSolution,
    small: Vec<Task>,
    params: FitParams,
    restructured: usize,
    route: Option<OneDimRoute>,
}

fn wide_bin_case(instance: &Instance, g: u64) -> Result<CaseResult, String> {
    let (t, c) = (instance.horizon(), instance.capacity());
    let (big, small): (Vec<Task>, Vec<Task>) = instance.tasks().iter().partition(|x| 3 * x.width > c);
    // The strip runs along the time axis: length g*T, width C.
    let layout = two_pile_strip(&big, g * t, c).map_err(|e| e.to_string())?;
    let groups = region_groups(&layout, t, g as usize)?;
    let mut structured = StructuredSolution::empty(Rational::from_integer(2));
    for group in groups {
        for (lower, upper) in [
            (&group.left_inside, &group.right_crossing),
            (&group.left_crossing, &group.right_inside),
        ] {
            let tasks: Vec<Task> = lower.iter().chain(upper.iter()).copied().collect();
            if tasks.is_empty() {
                continue;
            }
            let bin = single_nfdh(&tasks, t, c)
                .or_else(|| shelves(&[lower.clone(), upper.clone()], t, c))
                .ok_or("a region group does not fit one bin")?;
            structured.push(bin, BinTag::SortedProfile);
        }
    }
    Ok(CaseResult {
        structured,
        small,
        params: params(Rational::new(1, 3), Rational::new(1, 4)),
        restructured: 0,
        route: None,
    })
}

fn tall_bin_case(instance: &Instance, g: u64) -> Result<CaseResult, String> {
    let (t, c) = (instance.horizon(), instance.capacity());
    let (big, small): (Vec<Task>, Vec<Task>) = instance.tasks().iter().partition(|x| 3 * x.width > t);
    let layout = two_pile_strip(&big, g * c, t).map_err(|e| e.to_string())?;
    let groups = region_groups(&layout, c, g as usize)?;
    let mut structured = StructuredSolution::empty(Rational::from_integer(2));
    for group in groups {
        if !(group.left_inside.is_empty() && group.right_crossing.is_empty()) {
            let all: Vec<Task> = group.left_inside.iter().chain(&group.right_crossing).copied().collect();
            let bin = stacked_with_neighbour(&group.left_inside, &group.right_crossing, t, c)
                .or_else(|| single_nfdh(&all, t, c))
                .ok_or("left tasks of a region and the crossing right task do not fit one bin")?;
            structured.push(bin, BinTag::SortedProfile);
        }
        let all: Vec<Task> = group.right_inside.iter().chain(&group.left_crossing).copied().collect();
        if !all.is_empty() {
            let bin = single_nfdh(&all, t, c)
                .or_else(|| stack_sorted(&all, t, c).ok())
                .ok_or("right tasks of a region and the crossing left task do not fit one bin")?;
            structured.push(bin, BinTag::SortedProfile);
        }
    }
    Ok(CaseResult {
        structured,
        small,
        params: params(Rational::new(1, 4), Rational::new(1, 3)),
        restructured: 0,
        route: None,
    })
}

/// Exact when the budget allows, else the better of FFD and APTAS.
fn pack_one_dim(sizes: &[u64], capacity: u64) -> Result<(Grouping, OneDimRoute), String> {
    let sizes: Vec<Rational> = sizes.iter().map(|&s| Rational::from_integer(s as i64)).collect();
    let cap = Rational::from_integer(capacity as i64);
    match exact_bp(&sizes, cap, ONE_DIM_BUDGET).map_err(|e| e.to_string())? {
        ExactBp::Optimal(groups) => Ok((groups, OneDimRoute::Exact)),
        ExactBp::Unknown { .. } => {
            let by_ffd = ffd(&sizes, cap).map_err(|e| e.to_string())?;
            let by_aptas = aptas_bp(&sizes, cap, Rational::new(1, 55)).map_err(|e| e.to_string())?;
            if by_aptas.groups.len() < by_ffd.len() {
                Ok((by_aptas.groups, OneDimRoute::Aptas))
            } else {
                Ok((by_ffd, OneDimRoute::FirstFitDecreasing))
            }
        }
    }
}

/// Above [`EXACT_ASSIGNMENT_LIMIT`] the construction does not depend on the
/// guess, so it is built once.
fn near_square_case(
    instance: &Instance,
    g: u64,
    wide: bool,
    large: &mut Option<Result<CaseResult, String>>,
) -> Result<CaseResult, String> {
    if g > EXACT_ASSIGNMENT_LIMIT {
        return large.get_or_insert_with(|| near_square_build(instance, g, wide)).clone();
    }
    near_square_build(instance, g, wide)
}

fn near_square_build(instance: &Instance, g: u64, wide: bool) -> Result<CaseResult, String> {
    let (t, c) = (instance.horizon(), instance.capacity());
    // Squares are big above a quarter of the shorter relevant side.
    let reference = if wide { t } else { c };
    let (big, small): (Vec<Task>, Vec<Task>) = instance
        .tasks()
        .iter()
        .partition(|x| 4 * x.width > reference);
    let params = if wide {
        params(Rational::new(1, 3), Rational::new(1, 4))
    } else {
        params(Rational::new(1, 4), Rational::new(1, 3))
    };
    let half = Rational::new(1, 2);
    let mut structured = StructuredSolution::empty(Rational::from_integer(2));
    let mut restructured = 0;
    let mut route = None;

    if g <= EXACT_ASSIGNMENT_LIMIT {
        let assignment = pack_into_bins(instance, &big, g as usize, SearchBudget::nodes(ASSIGNMENT_BUDGET));
        let bins = match assignment {
            OracleOutcome::Proven {
                value: Verdict::Feasible(bins),
                ..
            } => bins,
            OracleOutcome::Proven { .. } => return Err("big squares need more than g bins".into()),
            OracleOutcome::Unknown { .. } => return Err("exact assignment ran out of budget".into()),
        };
        for bin in bins {
            if ge_fraction_of(bin_area(&bin), half, instance.bin_area()) {
                structured.push(bin, BinTag::AlphaFull(half));
                continue;
            }
            let sorted = load_profile(instance, &bin)
                .ok()
                .and_then(|p| is_sorted_profile(&p).ok())
                .unwrap_or(false);
            if sorted {
                structured.push(bin, BinTag::SortedProfile);
                continue;
            }
            let tasks: Vec<Task> = bin.tasks().copied().collect();
            let rearranged = nfdh(&tasks, t, c);
            if rearranged.len() > 2 {
                return Err("an underfull bin needed more than two NFDH bins".into());
            }
            restructured += 1;
            for b in rearranged {
                structured.push(b, BinTag::SortedProfile);
            }
        }
    } else {
        let (huge, middle): (Vec<Task>, Vec<Task>) = big.iter().partition(|x| 3 * x.width > reference);
        for bin in leftmost_fit(&huge, t, c).bins {
            let (bins, rearranged) = structure_bin(instance, bin);
            restructured += usize::from(rearranged);
            for (b, tag) in bins {
                structured.push(b, tag);
            }
        }
        // Middle squares: three bands of a third each, every band a
        // one-dimensional bin along the other axis.
        let sizes: Vec<u64> = middle.iter().map(|x| x.width).collect();
        let band_capacity = if wide { c } else { t };
        let (groups, used) = pack_one_dim(&sizes, band_capacity)?;
        route = Some(used);
        let band = reference / 3;
        for triple in groups.chunks(3) {
            let bands: Vec<Vec<Task>> = triple.iter().map(|g| g.iter().map(|&i| middle[i]).collect()).collect();
            let bin = if wide {
                let mut bin = Bin::new();
                for (j, tasks) in bands.iter().enumerate() {
                    for x in tasks {
                        bin.push(*x, j as u64 * band + 1);
                    }
                }
                bin
            } else {
                shelves(&bands, t, c).ok_or("three shelves of middle squares exceed capacity")?
            };
            let (bins, rearranged) = structure_bin(instance, bin);
            restructured += usize::from(rearranged);
            for (b, tag) in bins {
                structured.push(b, tag);
            }
        }
    }
    Ok(CaseResult {
        structured,
        small,
        params,
        restructured,
        route,
    })
}

struct SquaresAttempt {
    structured_bins: usize,
    restructured: usize,
    route: Option<OneDimRoute>,
    audit_clean: bool,
}

/// 2-approximation for squares with arbitrary `T` and `C` (for optima up to
/// 55 the bound is guaranteed; above that the report says whether it held).
///
/// For each guess `g` the big squares are placed according to
/// [`SquareCase`]: two-pile strips cut into region pairs for very wide or
/// tall bins, exact assignment (or leftmost fit plus a banded 1D packing for
/// large `g`) near the square shape. Small squares are added by first fit.
pub fn solve_squares_general(instance: &Instance) -> Result<Solved<SquaresReport>, SolveError> {
    ensure_squares(instance)?;
    let case = SquareCase::of(instance.horizon(), instance.capacity());
    let empty_report = |case| SquaresReport {
        case,
        guesses: Vec::new(),
        accepted_guess: None,
        structured_bins: 0,
        final_bins: 0,
        leftmost_violations: 0,
        restructured_bins: 0,
        one_dim_route: None,
        audit_clean: true,
        within_bound: true,
    };
    if instance.is_empty() {
        return Ok(Solved {
            solution: Solution::default(),
            report: empty_report(case),
        });
    }

    let mut large = None;
    let (best, guesses) = best_over_guesses(instance, |g| {
        let case_result = match case {
            SquareCase::WideBin => wide_bin_case(instance, g),
            SquareCase::TallBin => tall_bin_case(instance, g),
            SquareCase::NearSquareWide | SquareCase::EqualSides => near_square_case(instance, g, true, &mut large),
            SquareCase::NearSquareTall => near_square_case(instance, g, false, &mut large),
        }?;
        let structured_bins = case_result.structured.num_bins();
        let fit = first_fit_on_top(instance, &case_result.structured, &case_result.small, case_result.params)
            .map_err(|e| e.to_string())?;
        Ok((
            fit.solution,
            SquaresAttempt {
                structured_bins,
                restructured: case_result.restructured,
                route: case_result.route,
                audit_clean: fit.audit.is_clean(),
            },
        ))
    });

    let (g, solution, attempt) = best.ok_or(SolveError::NoGuessSucceeded(instance.len() as u64))?;
    let final_bins = solution.num_bins();
    Ok(Solved {
        solution,
        report: SquaresReport {
            guesses,
            accepted_guess: Some(g),
            structured_bins: attempt.structured_bins,
            final_bins,
            restructured_bins: attempt.restructured,
            one_dim_route: attempt.route,
            audit_clean: attempt.audit_clean,
            within_bound: final_bins as u64 <= 2 * g,
            ..empty_report(case)
        },
    })
}
