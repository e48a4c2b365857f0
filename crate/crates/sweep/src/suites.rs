//! Work items of the verification suites.
//!
//! A [`Job`] is a pure function of the field and the run parameters that
//! yields its records in a fixed order. The CLI's single-instance commands
//! run the same jobs, so every record's `rerun` line reproduces it.

use std::time::Instant;

use serde_json::{json, Value};
use sparsesum_core::energy::{d_times_subgroup, D_TIMES_ORACLE_MAX_SET};
use sparsesum_core::field::{divisors, lcm};
use sparsesum_core::group::power_image_shape;
use sparsesum_core::*;

use crate::config::{Budgets, Suite, SweepConfig};
use crate::generate::{bilinear_instance, coset_exponents, SumInstance};
use crate::record::{Instance, ResultRecord, Status};

/// Tolerance for the subgroup-averaging identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;
/// Absolute slack on constant-1 inequalities between floating values.
pub const FLOAT_SLACK: f64 = 1e-9;

/// Run parameters shared by all jobs.
#[derive(Debug, Clone)]
pub struct Params {
    pub budgets: Budgets,
    pub ratio_ceiling: f64,
    pub lambda_samples: usize,
    pub max_power: u64,
    pub mode: RoleMode,
    pub timing: bool,
}

impl From<&SweepConfig> for Params {
    fn from(c: &SweepConfig) -> Self {
        Self {
            budgets: c.budgets.clone(),
            ratio_ceiling: c.ratio_ceiling,
            lambda_samples: c.lambda_samples,
            max_power: c.max_power,
            mode: c.mode,
            timing: c.timing,
        }
    }
}

impl Default for Params {
    fn default() -> Self {
        Self::from(&SweepConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    /// Identity, Weil and bound records for one sum, as selected.
    Sum {
        instance: SumInstance,
        suites: Vec<Suite>,
    },
    Bilinear {
        p: u64,
        seed: u64,
    },
    /// Per-subgroup exact counts.
    EnergyGroup {
        p: u64,
        d: u64,
    },
    /// Per-triple exact counts; `orders` is `(F, G, H)`.
    EnergyTriple {
        p: u64,
        orders: [u64; 3],
    },
    Cauchy {
        p: u64,
        orders: [u64; 3],
    },
    /// `D_×` and shifted-energy ratios for one subgroup.
    RatioGroup {
        p: u64,
        d: u64,
    },
    /// `N(F, G, H)` ratios for every triple at `p`, one record per `G`.
    RatioTriples {
        p: u64,
    },
}

impl Job {
    pub fn p(&self) -> u64 {
        match self {
            Job::Sum { instance, .. } => instance.p,
            Job::Bilinear { p, .. }
            | Job::EnergyGroup { p, .. }
            | Job::EnergyTriple { p, .. }
            | Job::Cauchy { p, .. }
            | Job::RatioGroup { p, .. }
            | Job::RatioTriples { p } => *p,
        }
    }

    pub fn run(&self, ctx: &Field64, params: &Params) -> Vec<ResultRecord> {
        debug_assert_eq!(ctx.p(), self.p());
        let start = Instant::now();
        let mut records = match self {
            Job::Sum { instance, suites } => sum_job(ctx, params, instance, suites),
            Job::Bilinear { p, seed } => vec![bilinear_job(ctx, *p, *seed)],
            Job::EnergyGroup { p, d } => energy_group_job(ctx, params, *p, *d),
            Job::EnergyTriple { p, orders } => energy_triple_job(ctx, params, *p, *orders),
            Job::Cauchy { p, orders } => cauchy_job(ctx, params, *p, *orders),
            Job::RatioGroup { p, d } => ratio_group_job(ctx, params, *p, *d),
            Job::RatioTriples { p } => ratio_triples_job(ctx, params, *p),
        };
        if params.timing {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            for r in &mut records {
                r.wall_ms = Some(ms);
            }
        }
        records
    }
}

/// Records the error as a skip when it is a budget cap, as a failure otherwise.
fn from_error(record: ResultRecord, err: &Error) -> ResultRecord {
    match err {
        Error::BudgetExceeded { .. } => record.skipped(err.to_string()),
        _ => record.status(Status::Fail).reason(err.to_string()),
    }
}

fn sum_instance(instance: &SumInstance) -> Instance {
    Instance {
        p: instance.p,
        exponents: instance.poly.exponents(),
        coefficients: instance.poly.coefficients(),
        j: Some(instance.j),
        ..Instance::default()
    }
}

fn sum_rerun(command: &str, inst: &Instance, mode: Option<RoleMode>) -> String {
    let mut s = format!(
        "sparsesum {command} --p {} --poly \"{}\" --chi {}",
        inst.p,
        inst.poly_text(),
        inst.j.unwrap_or(0)
    );
    if let Some(RoleMode::Best) = mode {
        s.push_str(" --mode best");
    }
    s
}

fn count_instance(p: u64, orders: &[u64]) -> Instance {
    Instance {
        p,
        orders: orders.to_vec(),
        ..Instance::default()
    }
}

fn count_rerun(quantity: &str, p: u64, orders: &[u64]) -> String {
    let orders: Vec<String> = orders.iter().map(|d| d.to_string()).collect();
    format!(
        "sparsesum count --p {p} --quantity {quantity} --orders {}",
        orders.join(",")
    )
}

fn count_record(suite: &str, quantity: &str, p: u64, orders: &[u64]) -> ResultRecord {
    ResultRecord::new(
        suite,
        quantity,
        count_instance(p, orders),
        count_rerun(quantity, p, orders),
    )
}

fn sum_job(
    ctx: &Field64,
    params: &Params,
    instance: &SumInstance,
    suites: &[Suite],
) -> Vec<ResultRecord> {
    let inst = sum_instance(instance);
    let chi = CharacterIndex::new(ctx, instance.j);
    let exact = if instance.p > params.budgets.exact_p {
        Err(Error::BudgetExceeded {
            quantity: "sum_exact",
            cost: instance.p as u128,
            budget: params.budgets.exact_p as u128,
        })
    } else {
        chi.clone()
            .and_then(|chi| sum_exact(ctx, &instance.poly, chi))
    };
    let mut out = Vec::new();
    for &suite in suites {
        match suite {
            Suite::Identity => {
                let rec = ResultRecord::new(
                    "identity",
                    "decomposition",
                    inst.clone(),
                    sum_rerun("verify", &inst, None),
                )
                .reference(IDENTITY_TOLERANCE);
                let decomposed = exact.as_ref().map_err(Clone::clone).and_then(|_| {
                    sum_decomposed_with_budget(
                        ctx,
                        &instance.poly,
                        chi.clone().expect("checked above"),
                        params.budgets.decomposed as u128,
                    )
                });
                out.push(match (&exact, &decomposed) {
                    (Ok(e), Ok(d)) => {
                        let err = (d.value - e.value).norm() / (e.magnitude + 1.0);
                        rec.value(err)
                            .status(Status::check(err < IDENTITY_TOLERANCE))
                            .details(json!({
                                "exact": [e.value.re, e.value.im],
                                "decomposed": [d.value.re, d.value.im],
                                "family": instance.family,
                            }))
                    }
                    (Err(e), _) | (_, Err(e)) => from_error(rec, e),
                });
            }
            Suite::Weil => {
                let bound = weil_bound::<f64>(instance.p, &inst.exponents);
                let rec = ResultRecord::new(
                    "weil",
                    "weil",
                    inst.clone(),
                    sum_rerun("verify", &inst, None),
                )
                .reference(bound);
                out.push(match &exact {
                    Ok(e) => rec
                        .value(e.magnitude)
                        .ratio(e.magnitude / bound)
                        .status(Status::check(e.magnitude <= bound + FLOAT_SLACK)),
                    Err(e) => from_error(rec, e),
                });
            }
            Suite::Bounds => out.push(bounds_record(ctx, params, instance, &inst)),
            _ => {}
        }
    }
    out
}

fn bounds_record(
    ctx: &Field64,
    params: &Params,
    instance: &SumInstance,
    inst: &Instance,
) -> ResultRecord {
    let rec = ResultRecord::new(
        "bounds",
        "bound_catalog",
        inst.clone(),
        sum_rerun("compare", inst, Some(params.mode)),
    );
    let report = CharacterIndex::new(ctx, instance.j)
        .and_then(|chi| compare_bounds(ctx, &instance.poly, chi, params.mode));
    let report = match report {
        Ok(r) => r,
        Err(e) => return from_error(rec, &e),
    };
    let best = report.value(report.winner);
    let by_gcd = report.bounds[&BoundName::Gcd];
    let mut rec = rec
        .reference(best)
        .regime(by_gcd.regime.label())
        .details(json!({
            "winner": report.winner.as_str(),
            "bounds": report.bounds,
            "params": report.params,
            "mode": report.mode,
        }));
    if let Some(m) = report.exact_magnitude {
        rec = rec.value(m).ratio(m / best);
    }
    rec
}

fn bilinear_job(ctx: &Field64, p: u64, seed: u64) -> ResultRecord {
    let b = bilinear_instance(p, seed);
    let inst = Instance {
        seed: Some(seed),
        ..Instance::prime(p)
    };
    let rec = ResultRecord::new(
        "bilinear",
        "bilinear",
        inst,
        format!("sparsesum sum --p {p} --bilinear-seed {seed}"),
    );
    let bound = ((p as f64) * b.xs.len() as f64 * b.ys.len() as f64).sqrt();
    match bilinear_sum(ctx, &b.xs, &b.ys, &b.x_weights, &b.y_weights) {
        Ok(s) => rec
            .value(s.magnitude)
            .reference(bound)
            .ratio(s.magnitude / bound)
            .status(Status::check(s.magnitude <= bound + FLOAT_SLACK))
            .details(json!({"sizes": [b.xs.len(), b.ys.len()]})),
        Err(e) => from_error(rec, &e),
    }
}

/// Compares the available counts; `None` entries were skipped.
fn agreement(rec: ResultRecord, counts: &[(&str, Result<u128>)]) -> ResultRecord {
    let mut details = serde_json::Map::new();
    let mut skipped = Vec::new();
    let mut failed = Vec::new();
    let mut values = Vec::new();
    for (name, c) in counts {
        match c {
            Ok(v) => {
                details.insert(name.to_string(), json!(v));
                values.push(*v);
            }
            Err(e @ Error::BudgetExceeded { .. }) => skipped.push(format!("{name}: {e}")),
            Err(e) => failed.push(format!("{name}: {e}")),
        }
    }
    let rec = rec.details(Value::Object(details));
    if !failed.is_empty() {
        return rec.status(Status::Fail).reason(failed.join("; "));
    }
    if values.len() < 2 {
        let mut reason = skipped;
        reason.push("fewer than two counts available".into());
        return rec.skipped(reason.join("; "));
    }
    let rec = rec
        .value(values[0] as f64)
        .status(Status::check(values.iter().all(|&v| v == values[0])));
    if skipped.is_empty() {
        rec
    } else {
        rec.reason(skipped.join("; "))
    }
}

fn oracle_gate(params: &Params, cost: u128, quantity: &'static str) -> Result<()> {
    if cost > params.budgets.oracle as u128 {
        Err(Error::BudgetExceeded {
            quantity,
            cost,
            budget: params.budgets.oracle as u128,
        })
    } else {
        Ok(())
    }
}

fn energy_group_job(ctx: &Field64, params: &Params, p: u64, d: u64) -> Vec<ResultRecord> {
    let g = match subgroup_of_order(ctx, d) {
        Ok(g) => g,
        Err(e) => {
            return vec![from_error(
                count_record("energy", "subgroup_energy", p, &[d]),
                &e,
            )]
        }
    };
    let mut out = Vec::new();
    let n = d as u128;

    // E(G) = |G|^3
    let rec = count_record("energy", "subgroup_energy", p, &[d]).reference((n * n * n) as f64);
    let optimized = mult_energy(ctx, g.elements(), g.elements()).map(|c| c.count);
    let oracle = oracle_gate(params, n.pow(4), "mult_energy oracle")
        .and_then(|_| mult_energy_oracle(ctx, g.elements(), g.elements()).map(|c| c.count));
    let cube = Ok(n * n * n);
    out.push(agreement(
        rec,
        &[
            ("closed_form", cube),
            ("optimized", optimized),
            ("oracle", oracle),
        ],
    ));

    // D_x through three routes
    let rec = count_record("energy", "d_times", p, &[d]);
    let generic = d_times(ctx, g.elements()).map(|c| c.count);
    let coset = d_times_subgroup(ctx, &g).map(|c| c.count);
    let oracle = if g.order() as usize > D_TIMES_ORACLE_MAX_SET {
        Err(Error::BudgetExceeded {
            quantity: "d_times oracle",
            cost: d as u128,
            budget: D_TIMES_ORACLE_MAX_SET as u128,
        })
    } else {
        d_times_oracle(ctx, g.elements()).map(|c| c.count)
    };
    out.push(agreement(
        rec,
        &[
            ("oracle", oracle),
            ("optimized", generic),
            ("subgroup", coset),
        ],
    ));

    // E(G + 1), a set that may contain 0
    let shifted = g.elements().shifted(1, p);
    let rec = ResultRecord::new(
        "energy",
        "shifted_energy",
        Instance {
            lambda: Some(1),
            ..count_instance(p, &[d])
        },
        format!("{} --lambda 1", count_rerun("shifted_energy", p, &[d])),
    );
    let optimized = shifted_energy(ctx, &g, 1).map(|c| c.count);
    let oracle = oracle_gate(params, n.pow(4), "mult_energy oracle")
        .and_then(|_| mult_energy_oracle(ctx, &shifted, &shifted).map(|c| c.count));
    out.push(agreement(
        rec,
        &[("oracle", oracle), ("optimized", optimized)],
    ));

    out.push(power_image_record(ctx, params, &g, p));
    out
}

fn power_image_record(ctx: &Field64, params: &Params, g: &Subgroup, p: u64) -> ResultRecord {
    let d = g.order();
    let rec = count_record("energy", "power_image", p, &[d]);
    let mut failures = Vec::new();
    for n in 1..=params.max_power {
        let (size, mult) = power_image_shape(p, d, n);
        match power_image(ctx, g, n) {
            Ok(img) if img.image.len() as u64 == size && img.multiplicity == mult => {}
            Ok(img) => failures.push(format!(
                "n = {n}: image {} x {}, expected {size} x {mult}",
                img.image.len(),
                img.multiplicity
            )),
            Err(e) => failures.push(format!("n = {n}: {e}")),
        }
    }
    let rec = rec
        .value(params.max_power as f64)
        .details(json!({"exponents_checked": params.max_power}));
    if failures.is_empty() {
        rec.status(Status::Pass)
    } else {
        rec.status(Status::Fail).reason(failures.join("; "))
    }
}

fn energy_triple_job(
    ctx: &Field64,
    params: &Params,
    p: u64,
    orders: [u64; 3],
) -> Vec<ResultRecord> {
    let subs: Vec<Subgroup> = match orders
        .iter()
        .map(|&d| subgroup_of_order(ctx, d))
        .collect::<Result<_>>()
    {
        Ok(s) => s,
        Err(e) => {
            return vec![from_error(
                count_record("energy", "product_set", p, &orders),
                &e,
            )]
        }
    };
    let (f, g, h) = (&subs[0], &subs[1], &subs[2]);
    let mut out = Vec::new();

    let expected = lcm(lcm(orders[0], orders[1]), orders[2]);
    let rec = count_record("energy", "product_set", p, &orders).reference(expected as f64);
    out.push(match product_set(ctx, &subs) {
        Ok(s) => rec
            .value(s.order() as f64)
            .status(Status::check(s.order() == expected)),
        Err(e) => from_error(rec, &e),
    });

    let rec = count_record("energy", "n_triples", p, &orders);
    let optimized = n_triples(ctx, f, g, h).map(|c| c.count);
    let (nf, ng, nh) = (orders[0] as u128, orders[1] as u128, orders[2] as u128);
    let oracle = oracle_gate(params, nf * nf * ng * ng * nh * nh, "n_triples oracle")
        .and_then(|_| n_triples_oracle(ctx, f, g, h).map(|c| c.count));
    out.push(agreement(
        rec,
        &[("oracle", oracle), ("optimized", optimized)],
    ));

    // Σ I(λ)^2 = N(Z, W, W) with Z = F and W = G
    let pair = [orders[0], orders[1]];
    let rec = count_record("energy", "i_identity", p, &pair);
    out.push(i_identity_record(ctx, params, rec, f, g));

    // Σ J(μ)^2 for X = G, Y = H against its regime expression (diagnostic)
    let pair = [orders[1], orders[2]];
    let rec = count_record("energy", "j_sum_ratio", p, &pair);
    out.push(match j_distribution(ctx, g.elements(), h.elements()) {
        Ok(dist) => {
            let mass = dist.total + dist.zero_count == (ng * ng) * (nh * nh);
            let sum = dist.sum_of_squares() as f64;
            match j_sum_bound::<f64>(p, ng as f64, nh as f64) {
                Ok(b) => {
                    let rec = rec
                        .value(sum)
                        .reference(b.value())
                        .ratio(sum / b.value())
                        .regime(b.regime.label());
                    if mass {
                        rec.status(Status::Info)
                    } else {
                        rec.status(Status::Fail).reason("J mass check failed")
                    }
                }
                Err(e) => from_error(rec, &e),
            }
        }
        Err(e) => from_error(rec, &e),
    });
    out
}

fn i_identity_record(
    ctx: &Field64,
    params: &Params,
    rec: ResultRecord,
    z: &Subgroup,
    w: &Subgroup,
) -> ResultRecord {
    let dist = match i_distribution(ctx, w.elements(), z.elements()) {
        Ok(d) => d,
        Err(e) => return from_error(rec, &e),
    };
    let (nw, nz) = (w.order() as u128, z.order() as u128);
    if dist.total != nw * nw * nz {
        return rec.status(Status::Fail).reason("I mass check failed");
    }
    let oracle = oracle_gate(params, nz * nz * nw.pow(4), "n_triples oracle")
        .and_then(|_| n_triples_oracle(ctx, z, w, w).map(|c| c.count));
    agreement(
        rec,
        &[
            ("sum_i_squared", Ok(dist.sum_of_squares())),
            ("n_optimized", n_triples(ctx, z, w, w).map(|c| c.count)),
            ("n_oracle", oracle),
        ],
    )
}

fn cauchy_job(ctx: &Field64, _params: &Params, p: u64, orders: [u64; 3]) -> Vec<ResultRecord> {
    let names = ["cauchy_identity", "cauchy_step", "cauchy_energy_form"];
    let step = orders
        .iter()
        .map(|&d| subgroup_of_order(ctx, d))
        .collect::<Result<Vec<_>>>()
        .and_then(|s| cauchy_step(ctx, &s[0], &s[1], &s[2]));
    let step = match step {
        Ok(s) => s,
        Err(e) => {
            return names
                .iter()
                .map(|q| from_error(count_record("cauchy", q, p, &orders), &e))
                .collect()
        }
    };
    let details = json!({
        "n": step.n,
        "product_set_size": step.product_set_size,
        "sum_r": step.sum_r,
        "sum_r_squared": step.sum_r_squared,
        "energy_g_minus_one": step.energy_g_minus_one,
        "energy_h_minus_one": step.energy_h_minus_one,
    });
    vec![
        count_record("cauchy", names[0], p, &orders)
            .value(step.n as f64)
            .status(Status::check(step.identity_holds))
            .details(details.clone()),
        count_record("cauchy", names[1], p, &orders)
            .value(step.lhs)
            .status(Status::check(step.cauchy_step_holds))
            .details(details.clone()),
        count_record("cauchy", names[2], p, &orders)
            .value(step.lhs)
            .reference(step.energy_form_rhs)
            .ratio(step.lhs / step.energy_form_rhs)
            .status(Status::check(step.energy_form_holds))
            .details(details),
    ]
}

fn ratio_status(rec: ResultRecord, ratio: f64, ceiling: f64) -> ResultRecord {
    rec.ratio(ratio).status(Status::check(ratio < ceiling))
}

fn ratio_group_job(ctx: &Field64, params: &Params, p: u64, d: u64) -> Vec<ResultRecord> {
    let mut out = Vec::new();
    let g = match subgroup_of_order(ctx, d) {
        Ok(g) => g,
        Err(e) => return vec![from_error(count_record("ratio", "dx_ratio", p, &[d]), &e)],
    };
    let size = d as f64;

    let rec = count_record("ratio", "dx_ratio", p, &[d]);
    let bound = dx_bound::<f64>(p, size);
    let rec = rec.reference(bound.value()).regime(bound.regime.label());
    out.push(if bound.value() <= 0.0 {
        rec.skipped("degenerate bound (log 1 = 0)")
    } else {
        match d_times_subgroup(ctx, &g) {
            Ok(c) => {
                let v = c.count as f64;
                ratio_status(rec.value(v), v / bound.value(), params.ratio_ceiling)
            }
            Err(e) => from_error(rec, &e),
        }
    });

    // E(G + λ) depends only on the coset λG, so representatives suffice
    let rec = count_record("ratio", "shifted_energy_ratio", p, &[d]);
    let bound = shifted_energy_bound::<f64>(p, size);
    let rec = rec.reference(bound.value()).regime(bound.regime.label());
    out.push(if bound.value() <= 0.0 {
        rec.skipped("degenerate bound (log 1 = 0)")
    } else {
        let main = size.powi(4) / p as f64;
        let mut worst: Option<(f64, u64, u128)> = None;
        let mut error = None;
        for t in coset_exponents(g.index(p), params.lambda_samples) {
            let lambda = ctx.gen_pow(t);
            match shifted_energy(ctx, &g, lambda) {
                Ok(c) => {
                    let dev = (c.count as f64 - main).abs();
                    if worst.is_none_or(|(w, _, _)| dev > w) {
                        worst = Some((dev, lambda, c.count));
                    }
                }
                Err(e) => {
                    error = Some(e);
                    break;
                }
            }
        }
        match (error, worst) {
            (Some(e), _) => from_error(rec, &e),
            (None, Some((dev, lambda, count))) => ratio_status(
                rec.value(dev)
                    .details(json!({"lambda": lambda, "energy": count})),
                dev / bound.value(),
                params.ratio_ceiling,
            ),
            (None, None) => rec.skipped("no shift evaluated"),
        }
    });
    out
}

fn ratio_triples_job(ctx: &Field64, params: &Params, p: u64) -> Vec<ResultRecord> {
    let ds = divisors(p - 1);
    let subs: Vec<Subgroup> = match ds.iter().map(|&d| subgroup_of_order(ctx, d)).collect() {
        Ok(s) => s,
        Err(e) => {
            return vec![from_error(
                count_record("ratio", "n_triples_ratio", p, &[]),
                &e,
            )]
        }
    };
    let mut counter = TripleCounter::new(ctx);
    let mut out = Vec::new();
    for g in &subs {
        let rec = count_record("ratio", "n_triples_ratio", p, &[g.order()]);
        let mut worst: Option<(f64, u64, u64, u128, f64, Regime)> = None;
        let mut error = None;
        'outer: for f in &subs {
            for h in subs.iter().filter(|h| h.order() <= g.order()) {
                let n = match counter.count(f, g, h) {
                    Ok(c) => c.count,
                    Err(e) => {
                        error = Some(e);
                        break 'outer;
                    }
                };
                let (ff, gf, hf) = (f.order() as f64, g.order() as f64, h.order() as f64);
                let bound = n_triples_bound::<f64>(p, ff, gf, hf).expect("G >= H");
                let ratio = n as f64 / bound.value();
                if worst.is_none_or(|w| ratio > w.0) {
                    worst = Some((ratio, f.order(), h.order(), n, bound.value(), bound.regime));
                }
            }
        }
        out.push(match (error, worst) {
            (Some(e), _) => from_error(rec, &e),
            (None, Some((ratio, fo, ho, n, bound, regime))) => ratio_status(
                rec.value(n as f64)
                    .reference(bound)
                    .regime(regime.label())
                    .details(json!({"f": fo, "h": ho, "n": n})),
                ratio,
                params.ratio_ceiling,
            ),
            (None, None) => rec.skipped("no triple evaluated"),
        });
    }
    out
}

/// Single-instance counting by name, as used by `sparsesum count`.
pub fn count_jobs(quantity: &str, p: u64, orders: &[u64]) -> Option<Vec<Job>> {
    let one = |k: usize| orders.len() == k;
    Some(match quantity {
        "subgroup_energy" | "d_times" | "shifted_energy" | "power_image" if one(1) => {
            vec![Job::EnergyGroup { p, d: orders[0] }]
        }
        "product_set" | "n_triples" if one(3) => vec![Job::EnergyTriple {
            p,
            orders: [orders[0], orders[1], orders[2]],
        }],
        "i_identity" if one(2) => vec![Job::EnergyTriple {
            p,
            orders: [orders[0], orders[1], orders[1]],
        }],
        "j_sum_ratio" if one(2) => vec![Job::EnergyTriple {
            p,
            orders: [1, orders[0], orders[1]],
        }],
        "cauchy_identity" | "cauchy_step" | "cauchy_energy_form" | "cauchy" if one(3) => {
            vec![Job::Cauchy {
                p,
                orders: [orders[0], orders[1], orders[2]],
            }]
        }
        "dx_ratio" | "shifted_energy_ratio" if one(1) => vec![Job::RatioGroup { p, d: orders[0] }],
        "n_triples_ratio" => vec![Job::RatioTriples { p }],
        _ => return None,
    })
}

/// Shifted energy at an explicit `λ`, for `sparsesum count --lambda`.
pub fn shifted_energy_at(ctx: &Field64, d: u64, lambda: u64) -> ResultRecord {
    let p = ctx.p();
    let rec = ResultRecord::new(
        "energy",
        "shifted_energy",
        Instance {
            lambda: Some(lambda),
            ..count_instance(p, &[d])
        },
        format!(
            "{} --lambda {lambda}",
            count_rerun("shifted_energy", p, &[d])
        ),
    );
    let g = match subgroup_of_order(ctx, d) {
        Ok(g) => g,
        Err(e) => return from_error(rec, &e),
    };
    let shifted = g.elements().shifted(lambda % p, p);
    let optimized = shifted_energy(ctx, &g, lambda).map(|c| c.count);
    let oracle = mult_energy_oracle(ctx, &shifted, &shifted).map(|c| c.count);
    agreement(rec, &[("oracle", oracle), ("optimized", optimized)])
}
