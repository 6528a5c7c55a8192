use super::{best_over_guesses, describe_guesses, GuessRecord, SolveError, Solved};
use crate::bp1d::{aptas_bp, ffd, mkp_pack_all, Grouping, MkpOutcome};
use crate::model::{
    classify_task, load_profile, verify_solution, Bin, BinTag, ClassPartition, ClassTotals, Instance, ModelError,
    Rational, Solution, StepProfile, StructuredSolution, Task, TaskClass,
};
use crate::primitives::{first_fit_on_top, nfdh, side_by_side, stack_sorted, FitParams};

/// Guesses up to this value use the case analysis on tall and wide totals;
/// larger guesses use the APTAS route with `epsilon = 1/70`.
pub const REGIME_THRESHOLD: u64 = 70;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Le70,
    Gt70,
}

/// Which construction placed the tall, wide and fat tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneralCase {
    /// Tall width and wide height both close to `g` bins: FFD for both.
    BothHeavy,
    /// Both leave room: exact multiple-knapsack packing into `g` bins each.
    BothLight,
    /// Wide height heavy: FFD for tall, full and half bins for wide.
    HeavyWide,
    /// Tall width heavy: FFD for wide, full and half bins for tall.
    HeavyTall,
    /// Few fat tasks: APTAS for tall and wide.
    FewFat,
    /// Many fat tasks: large tall and wide tasks alone, the rest next fit.
    ManyFat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralReport {
    pub guesses: Vec<GuessRecord>,
    pub accepted_guess: Option<u64>,
    pub regime: Option<Regime>,
    pub case: Option<GeneralCase>,
    /// Numbers of full and half bins used by the mixed cases.
    pub split: Option<(u64, u64)>,
    pub reserve_bin: Option<usize>,
    pub structured_bins: Option<usize>,
    pub final_bins: usize,
    pub audit_clean: bool,
    /// `final_bins <= 3 * accepted_guess`.
    pub within_bound: bool,
    /// Every guess failed and plain NFDH produced the solution.
    pub fallback: bool,
}

impl GeneralReport {
    pub fn certified(&self) -> bool {
        !self.fallback && self.within_bound && self.audit_clean
    }

    pub fn notes(&self) -> Vec<String> {
        let mut notes = describe_guesses(&self.guesses);
        if let (Some(regime), Some(case)) = (self.regime, self.case) {
            notes.push(format!("regime {regime:?}, case {case:?}"));
        }
        if let Some((full, half)) = self.split {
            notes.push(format!("{full} full and {half} half bins"));
        }
        if self.fallback {
            notes.push("no guess succeeded; fell back to NFDH over all tasks".into());
        }
        if !self.audit_clean {
            notes.push("first-fit fill audit recorded a violation".into());
        }
        notes
    }
}

fn int(v: u64) -> Rational {
    Rational::from_integer(v as i64)
}

fn widths(tasks: &[Task]) -> Vec<Rational> {
    tasks.iter().map(|t| int(t.width)).collect()
}

fn heights(tasks: &[Task]) -> Vec<Rational> {
    tasks.iter().map(|t| int(t.height)).collect()
}

fn pick(tasks: &[Task], group: &[usize]) -> Vec<Task> {
    group.iter().map(|&i| tasks[i]).collect()
}

/// Bins of item indices from an assignment vector.
fn bins_of(assignment: &[usize], bins: usize) -> Grouping {
    let mut groups = vec![Vec::new(); bins];
    for (item, &bin) in assignment.iter().enumerate() {
        groups[bin].push(item);
    }
    groups
}

/// Wide tasks stacked at slot 1 with a row of fat tasks on top, tallest
/// first. `None` if the result overloads a slot or is not sorted.
fn stack_with_row(stack: &[Task], row: &[Task], horizon: u64, capacity: u64) -> Option<Bin> {
    let mut bin = stack_sorted(stack, horizon, capacity).ok()?;
    let mut profile = StepProfile::from_bin(horizon, &bin);
    let mut ordered = row.to_vec();
    ordered.sort_by(|a, b| b.height.cmp(&a.height).then(a.id.cmp(&b.id)));
    let mut start = 1;
    for t in ordered {
        let last = start + t.width - 1;
        if last > horizon || profile.max_over(start, last) + t.height > capacity {
            return None;
        }
        profile.add(start, last, t.height);
        bin.push(t, start);
        start = last + 1;
    }
    profile.is_non_increasing().then_some(bin)
}

#[derive(Debug, Clone, Default)]
struct Structured {
    bins: Vec<Bin>,
    case: Option<GeneralCase>,
    split: Option<(u64, u64)>,
    reserve_bin: Option<usize>,
}

fn tall_bins(tall: &[Task], groups: &Grouping, t: u64, c: u64) -> Result<Vec<Bin>, String> {
    groups
        .iter()
        .map(|g| side_by_side(&pick(tall, g), t, c).map_err(|e| e.to_string()))
        .collect()
}

fn wide_bins(wide: &[Task], groups: &Grouping, t: u64, c: u64) -> Result<Vec<Bin>, String> {
    groups
        .iter()
        .map(|g| stack_sorted(&pick(wide, g), t, c).map_err(|e| e.to_string()))
        .collect()
}

fn fat_bin_count(fat: usize) -> u64 {
    fat.div_ceil(4) as u64
}

fn structured_le70(instance: &Instance, parts: &ClassPartition, g: u64) -> Result<Structured, String> {
    let (t, c) = (instance.horizon(), instance.capacity());
    let totals = ClassTotals::of(parts);
    let g128 = g as u128;
    let heavy_wide = 9 * totals.wide_height > 9 * g128 * c as u128 - c as u128;
    let heavy_tall = 9 * totals.tall_width > 9 * g128 * t as u128 - t as u128;
    let (tall, wide, fat) = (&parts.tall, &parts.wide, &parts.fat);

    let mut out = Structured::default();
    match (heavy_tall, heavy_wide) {
        (true, true) => {
            out.case = Some(GeneralCase::BothHeavy);
            let tg = ffd(&widths(tall), int(t)).map_err(|e| e.to_string())?;
            let wg = ffd(&heights(wide), int(c)).map_err(|e| e.to_string())?;
            out.bins.extend(tall_bins(tall, &tg, t, c)?);
            out.bins.extend(wide_bins(wide, &wg, t, c)?);
            out.bins.extend(nfdh(fat, t, c));
        }
        (false, false) => {
            out.case = Some(GeneralCase::BothLight);
            for (is_tall, items, sizes, cap) in [(true, tall, widths(tall), t), (false, wide, heights(wide), c)] {
                let caps = vec![int(cap); g as usize];
                let groups = match mkp_pack_all(&sizes, &caps, Rational::new(cap as i64, 9)).map_err(|e| e.to_string())? {
                    MkpOutcome::Packed { assignment, .. } => bins_of(&assignment, g as usize),
                    MkpOutcome::Infeasible => return Err("items do not fit g bins".into()),
                    MkpOutcome::Unknown { .. } => return Err("packing search ran out of budget".into()),
                };
                let groups: Grouping = groups.into_iter().filter(|g| !g.is_empty()).collect();
                if is_tall {
                    out.bins.extend(tall_bins(items, &groups, t, c)?);
                } else {
                    out.bins.extend(wide_bins(items, &groups, t, c)?);
                }
            }
            out.bins.extend(nfdh(fat, t, c));
        }
        (false, true) => mixed_case(instance, parts, g, false, &mut out)?,
        (true, false) => mixed_case(instance, parts, g, true, &mut out)?,
    }
    Ok(out)
}

/// One orientation heavy, the other light. The light one is packed into
/// `full` bins of whole capacity and `half` bins of half capacity, trying
/// splits in lexicographic order; fat tasks fill the half bins.
fn mixed_case(
    instance: &Instance,
    parts: &ClassPartition,
    g: u64,
    heavy_tall: bool,
    out: &mut Structured,
) -> Result<(), String> {
    let (t, c) = (instance.horizon(), instance.capacity());
    let (heavy, light) = if heavy_tall {
        (&parts.tall, &parts.wide)
    } else {
        (&parts.wide, &parts.tall)
    };
    // The light side is wide when tall is heavy and vice versa.
    let (heavy_sizes, heavy_cap, light_sizes, light_cap) = if heavy_tall {
        (widths(heavy), t, heights(light), c)
    } else {
        (heights(heavy), c, widths(light), t)
    };
    let heavy_groups = ffd(&heavy_sizes, int(heavy_cap)).map_err(|e| e.to_string())?;
    let heavy_bins = if heavy_tall {
        tall_bins(heavy, &heavy_groups, t, c)?
    } else {
        wide_bins(heavy, &heavy_groups, t, c)?
    };
    let light_total: Rational = light_sizes.iter().copied().sum();
    let fat = &parts.fat;
    out.case = Some(if heavy_tall {
        GeneralCase::HeavyTall
    } else {
        GeneralCase::HeavyWide
    });

    for full in 0..=g {
        for half in 0..=g - full {
            let slack = if half >= 1 {
                Rational::new(light_cap as i64, 18)
            } else {
                Rational::new(light_cap as i64, 9)
            };
            let room = int(light_cap) * int(full) + Rational::new(light_cap as i64, 2) * int(half);
            if light_total > room - slack {
                continue;
            }
            // Fat tasks go two per half bin (one in a lone half bin when
            // half bins are paired), the rest four per bin.
            let (light_bin_count, fat_in_halves) = if heavy_tall {
                (full + half, (2 * half) as usize)
            } else {
                (full + half.div_ceil(2), (half % 2) as usize)
            };
            let leftover = fat.len().saturating_sub(fat_in_halves);
            let total = heavy_bins.len() as u64 + light_bin_count + fat_bin_count(leftover);
            if total > 3 * g {
                continue;
            }
            let mut caps = vec![int(light_cap); full as usize];
            caps.extend(std::iter::repeat_n(Rational::new(light_cap as i64, 2), half as usize));
            let (assignment, reserve) = match mkp_pack_all(&light_sizes, &caps, slack) {
                Ok(MkpOutcome::Packed { assignment, reserve_bin }) => (assignment, reserve_bin),
                _ => continue,
            };
            let groups = bins_of(&assignment, caps.len());
            let mut fat_iter = fat.iter().copied();
            let mut bins = heavy_bins.clone();
            let built = if heavy_tall {
                // Light side is wide: full bins stack, half bins stack plus a
                // row of two fat tasks.
                let mut ok = true;
                for (index, group) in groups.iter().enumerate() {
                    let stack = pick(light, group);
                    let bin = if index < full as usize {
                        if stack.is_empty() {
                            continue;
                        }
                        stack_sorted(&stack, t, c).ok()
                    } else {
                        let row: Vec<Task> = fat_iter.by_ref().take(2).collect();
                        if stack.is_empty() && row.is_empty() {
                            continue;
                        }
                        stack_with_row(&stack, &row, t, c)
                    };
                    match bin {
                        Some(b) => bins.push(b),
                        None => ok = false,
                    }
                }
                ok
            } else {
                // Light side is tall: half bins are paired side by side; a
                // lone half bin gets one fat task next to its tall tasks.
                let mut ok = true;
                for group in &groups[..full as usize] {
                    if !group.is_empty() {
                        match side_by_side(&pick(light, group), t, c) {
                            Ok(b) => bins.push(b),
                            Err(_) => ok = false,
                        }
                    }
                }
                for pair in groups[full as usize..].chunks(2) {
                    let mut tasks: Vec<Task> = pair.iter().flat_map(|g| pick(light, g)).collect();
                    if pair.len() == 1 {
                        tasks.extend(fat_iter.by_ref().take(1));
                    }
                    if tasks.is_empty() {
                        continue;
                    }
                    match side_by_side(&tasks, t, c) {
                        Ok(b) => bins.push(b),
                        Err(_) => ok = false,
                    }
                }
                ok
            };
            if !built {
                continue;
            }
            let rest: Vec<Task> = fat_iter.collect();
            bins.extend(nfdh(&rest, t, c));
            if bins.len() as u64 > 3 * g {
                continue;
            }
            out.bins = bins;
            out.split = Some((full, half));
            out.reserve_bin = Some(reserve);
            return Ok(());
        }
    }
    Err("no split into full and half bins worked".into())
}

/// Next fit: a new group whenever the running total would pass `cap`.
fn next_fit(sizes: &[u64], cap: u64) -> Grouping {
    let mut groups: Grouping = Vec::new();
    let mut load = 0;
    for (i, &s) in sizes.iter().enumerate() {
        if groups.is_empty() || load + s > cap {
            groups.push(Vec::new());
            load = 0;
        }
        load += s;
        groups.last_mut().expect("just pushed").push(i);
    }
    groups
}

/// Both branches build the same bins for every guess, so each is built at
/// most once; `cache` holds the few-fat and many-fat results.
fn structured_gt70(
    instance: &Instance,
    parts: &ClassPartition,
    g: u64,
    cache: &mut [Option<Result<Structured, String>>; 2],
) -> Result<Structured, String> {
    // 4 (1 - 4/70) g = 264 g / 70.
    let few_fat = 70 * parts.fat.len() as u128 <= 264 * g as u128;
    cache[usize::from(!few_fat)]
        .get_or_insert_with(|| build_gt70(instance, parts, few_fat))
        .clone()
}

fn build_gt70(instance: &Instance, parts: &ClassPartition, few_fat: bool) -> Result<Structured, String> {
    let (t, c) = (instance.horizon(), instance.capacity());
    let (tall, wide, fat) = (&parts.tall, &parts.wide, &parts.fat);
    let mut out = Structured::default();
    out.bins.extend(nfdh(fat, t, c));
    if few_fat {
        out.case = Some(GeneralCase::FewFat);
        let epsilon = Rational::new(1, 70);
        let tg = aptas_bp(&widths(tall), int(t), epsilon).map_err(|e| e.to_string())?;
        let wg = aptas_bp(&heights(wide), int(c), epsilon).map_err(|e| e.to_string())?;
        out.bins.extend(tall_bins(tall, &tg.groups, t, c)?);
        out.bins.extend(wide_bins(wide, &wg.groups, t, c)?);
    } else {
        out.case = Some(GeneralCase::ManyFat);
        let (big_tall, rest_tall): (Vec<Task>, Vec<Task>) = tall.iter().partition(|x| 3 * x.width > t);
        let (big_wide, rest_wide): (Vec<Task>, Vec<Task>) = wide.iter().partition(|x| 3 * x.height > c);
        for x in big_tall.iter().chain(&big_wide) {
            out.bins.push(stack_sorted(&[*x], t, c).map_err(|e| e.to_string())?);
        }
        let tw: Vec<u64> = rest_tall.iter().map(|x| x.width).collect();
        let wh: Vec<u64> = rest_wide.iter().map(|x| x.height).collect();
        out.bins.extend(tall_bins(&rest_tall, &next_fit(&tw, t), t, c)?);
        out.bins.extend(wide_bins(&rest_wide, &next_fit(&wh, c), t, c)?);
    }
    Ok(out)
}

struct GeneralAttempt {
    regime: Regime,
    structured: Structured,
    structured_bins: usize,
    audit_clean: bool,
}

/// 3-approximation for arbitrary tasks.
///
/// For each guess `g` the tall, wide and fat tasks get a structured solution
/// of at most `3g` bins (case analysis for `g <= 70`, APTAS above), then the
/// small tasks are added by first fit. If every guess fails, NFDH over all
/// tasks is returned and the report is flagged.
pub fn solve_general(instance: &Instance) -> Result<Solved<GeneralReport>, SolveError> {
    let parts = ClassPartition::of(instance);
    let mut report = GeneralReport {
        guesses: Vec::new(),
        accepted_guess: None,
        regime: None,
        case: None,
        split: None,
        reserve_bin: None,
        structured_bins: None,
        final_bins: 0,
        audit_clean: true,
        within_bound: true,
        fallback: false,
    };
    if instance.is_empty() {
        return Ok(Solved {
            solution: Solution::default(),
            report,
        });
    }
    let mut cache = [None, None];
    let (best, guesses) = best_over_guesses(instance, |g| {
        let (regime, structured) = if g <= REGIME_THRESHOLD {
            (Regime::Le70, structured_le70(instance, &parts, g)?)
        } else {
            (Regime::Gt70, structured_gt70(instance, &parts, g, &mut cache)?)
        };
        if structured.bins.len() as u64 > 3 * g {
            return Err(format!("{} structured bins exceed 3g", structured.bins.len()));
        }
        let mut tagged = StructuredSolution::empty(Rational::from_integer(3));
        for bin in &structured.bins {
            tagged.push(bin.clone(), BinTag::SortedProfile);
        }
        tagged.validate(instance).map_err(|e| e.to_string())?;
        let fit = first_fit_on_top(instance, &tagged, &parts.small, FitParams::mixed()).map_err(|e| e.to_string())?;
        let structured_bins = structured.bins.len();
        Ok((
            fit.solution,
            GeneralAttempt {
                regime,
                structured,
                structured_bins,
                audit_clean: fit.audit.is_clean(),
            },
        ))
    });
    report.guesses = guesses;
    match best {
        Some((g, solution, attempt)) => {
            report.final_bins = solution.num_bins();
            report.accepted_guess = Some(g);
            report.regime = Some(attempt.regime);
            report.case = attempt.structured.case;
            report.split = attempt.structured.split;
            report.reserve_bin = attempt.structured.reserve_bin;
            report.structured_bins = Some(attempt.structured_bins);
            report.audit_clean = attempt.audit_clean;
            report.within_bound = report.final_bins as u64 <= 3 * g;
            Ok(Solved { solution, report })
        }
        None => {
            let solution = Solution::new(nfdh(instance.tasks(), instance.horizon(), instance.capacity()));
            let check = verify_solution(instance, &solution);
            if !check.is_valid() {
                return Err(SolveError::Internal(check.to_string()));
            }
            report.final_bins = solution.num_bins();
            report.fallback = true;
            report.within_bound = false;
            Ok(Solved { solution, report })
        }
    }
}

/// Premise and conclusion of one implication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClaimCheck {
    pub premise: bool,
    pub conclusion: bool,
}

impl ClaimCheck {
    pub fn counterexample(&self) -> bool {
        self.premise && !self.conclusion
    }
}

/// Structural facts about one feasible bin with fat tasks:
///
/// * three fat tasks and tall width above `8T/9` force wide height below
///   `4C/9` (`tall_heavy`), and the mirrored statement (`wide_heavy`);
/// * four fat tasks force tall width at most `2T/3` and wide height at most
///   `2C/3` (`four_fat`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaReport {
    pub fat_count: usize,
    pub tall_width: u128,
    pub wide_height: u128,
    pub tall_heavy: ClaimCheck,
    pub wide_heavy: ClaimCheck,
    pub four_fat: ClaimCheck,
}

impl LemmaReport {
    pub fn has_counterexample(&self) -> bool {
        self.tall_heavy.counterexample() || self.wide_heavy.counterexample() || self.four_fat.counterexample()
    }
}

/// Evaluates the fat-task claims on a bin. Errors if the bin is not feasible.
pub fn lemma3fat_check(instance: &Instance, bin: &Bin) -> Result<LemmaReport, ModelError> {
    let (t, c) = (instance.horizon(), instance.capacity());
    let profile = load_profile(instance, bin)?;
    if profile.max_load() > c {
        let slot = (1..=t).find(|&s| profile.load_at(s) > c).unwrap_or(1);
        return Err(ModelError::Overloaded {
            bin: 0,
            slot,
            load: profile.load_at(slot),
            capacity: c,
        });
    }
    let (mut fat_count, mut tall_width, mut wide_height) = (0usize, 0u128, 0u128);
    for task in bin.tasks() {
        match classify_task(task, t, c) {
            TaskClass::Fat => fat_count += 1,
            TaskClass::Tall => tall_width += task.width as u128,
            TaskClass::Wide => wide_height += task.height as u128,
            TaskClass::Small => {}
        }
    }
    let (t, c) = (t as u128, c as u128);
    Ok(LemmaReport {
        fat_count,
        tall_width,
        wide_height,
        tall_heavy: ClaimCheck {
            premise: fat_count >= 3 && 9 * tall_width > 8 * t,
            conclusion: 9 * wide_height < 4 * c,
        },
        wide_heavy: ClaimCheck {
            premise: fat_count >= 3 && 9 * wide_height > 8 * c,
            conclusion: 9 * tall_width < 4 * t,
        },
        four_fat: ClaimCheck {
            premise: fat_count >= 4,
            conclusion: 3 * tall_width <= 2 * t && 3 * wide_height <= 2 * c,
        },
    })
}
