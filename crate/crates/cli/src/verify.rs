//! Quantitative claims checked by the `verify` subcommand.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt::Write as _;
use std::result::Result;

use ensemble_coherence::coherence::{ensemble_coherence_in_basis, BasisObjective};
use ensemble_coherence::infotheory::{
    optimized_accessible_information, two_pure_accessible_information, two_pure_holevo,
};
use ensemble_coherence::qubit::h2;
use ensemble_coherence::sweep::{b92_sweep, entanglement_grid, sym_sweep};
use ensemble_coherence::sympovm::{split_at, CONVERGENCE_SIZES};
use ensemble_coherence::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

pub const CRITERIA: usize = 11;

/// One line of the verdict table.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: usize,
    pub claim: &'static str,
    pub measured: String,
    pub tolerance: &'static str,
    pub pass: bool,
}

struct Context<'a> {
    settings: &'a Settings,
    grid: Vec<f64>,
    twenty: Vec<f64>,
    seed: u64,
}

impl Context<'_> {
    fn rng(&self, criterion: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ (criterion << 32))
    }

    fn b92(&self, alpha: f64) -> Result<Ensemble, CliError> {
        Ok(dual_map(&SchmidtState::new(alpha)?, &Povm::hadamard())?)
    }
}

fn verdict(id: usize, claim: &'static str, tolerance: &'static str, pass: bool, measured: String) -> Verdict {
    Verdict {
        id,
        claim,
        measured,
        tolerance,
        pass,
    }
}

fn equal_regime(ctx: &Context) -> Result<Verdict, CliError> {
    let (mut dev, mut theta) = (0.0f64, 0.0f64);
    for k in 0..40 {
        let e = 0.01 + 0.39 * k as f64 / 39.0;
        let state = alpha_for_entanglement(e)?;
        let r = basis_free_coherence_with(&ctx.b92(state.alpha())?, true, &ctx.settings.basis);
        dev = dev.max((r.value - e).abs());
        theta = theta.max(r.optimal_basis.theta);
    }
    Ok(verdict(
        1,
        "B92 coherence equals E for E <= 0.4, computational basis optimal",
        "|C-E| <= 1e-3, theta <= 1e-3",
        dev <= 1e-3 && theta <= 1e-3,
        format!("|C-E| = {dev:.1e}, theta = {theta:.1e}"),
    ))
}

fn endpoints(ctx: &Context) -> Result<Verdict, CliError> {
    let lo = basis_free_coherence_with(&ctx.b92(0.0)?, true, &ctx.settings.basis).value;
    let hi = basis_free_coherence_with(&ctx.b92(FRAC_PI_4)?, true, &ctx.settings.basis).value;
    Ok(verdict(
        2,
        "B92 coherence vanishes at E = 0 and E = 1",
        "<= 1e-6",
        lo.abs() <= 1e-6 && hi.abs() <= 1e-6,
        format!("{lo:.1e}, {hi:.1e}"),
    ))
}

fn argmax(grid: &[f64], rows: &[SweepRecord], f: impl Fn(&SweepRecord) -> f64) -> f64 {
    let best = (0..rows.len()).fold(0, |b, i| if f(&rows[i]) > f(&rows[b]) { i } else { b });
    grid[best]
}

fn b92_maximum(ctx: &Context, b92: &[SweepRecord]) -> Result<Verdict, CliError> {
    let e_star = h2(FRAC_PI_8.cos().powi(2));
    let step = 1.0 / (ctx.grid.len() - 1) as f64;
    let e_c = argmax(&ctx.grid, b92, |r| r.coherence);
    let e_lb = argmax(&ctx.grid, b92, |r| r.lower_bound);
    let ens = ctx.b92(FRAC_PI_8)?;
    let chi = holevo(&ens);
    let acc = accessible_information_with(&ens, &ctx.settings.access).value;
    let s = (2.0 * FRAC_PI_8).cos();
    let pass = (e_c - e_star).abs() <= step + 1e-12
        && (e_lb - e_star).abs() <= step + 1e-12
        && (chi - 0.6009).abs() <= 1e-3
        && (acc - 0.3991).abs() <= 1e-3
        && (chi - two_pure_holevo(s)).abs() <= 1e-9
        && (acc - two_pure_accessible_information(s)).abs() <= 1e-9;
    Ok(verdict(
        3,
        "B92 coherence and lower bound peak at E ~ 0.6009",
        "one grid step; chi, I_acc +- 1e-3",
        pass,
        format!("argmax E = {e_c:.3} / {e_lb:.3}, chi = {chi:.4}, I_acc = {acc:.4}"),
    ))
}

fn sandwich<'a>(rows: impl Iterator<Item = &'a SweepRecord>) -> Verdict {
    let (mut below, mut above, mut chi, mut count) = (0.0f64, 0.0f64, 0.0f64, 0);
    for r in rows {
        below = below.max(r.lower_bound - r.coherence);
        above = above.max(r.coherence - r.holevo);
        chi = chi.max((r.holevo - r.entanglement).abs());
        count += 1;
    }
    verdict(
        4,
        "lower bound <= coherence <= Holevo = E on every row",
        "1e-6 (chi: 1e-9)",
        below <= 1e-6 && above <= 1e-6 && chi <= 1e-9,
        format!(
            "{count} rows, excess {:.1e}/{above:.1e}, |chi-E| = {chi:.1e}",
            below.max(0.0)
        ),
    )
}

fn max_gap(rows: &[SweepRecord]) -> f64 {
    rows.iter()
        .map(|r| r.coherence - r.lower_bound)
        .fold(f64::MIN, f64::max)
}

fn gaps(sym2: &[SweepRecord], sym4: &[SweepRecord]) -> Verdict {
    let (g2, g4) = (max_gap(sym2), max_gap(sym4));
    verdict(
        5,
        "largest coherence gap is ~0.30 (n = 2) and ~0.10 (n = 4)",
        "+- 0.05",
        (g2 - 0.30).abs() <= 0.05 && (g4 - 0.10).abs() <= 0.05,
        format!("{g2:.4}, {g4:.4}"),
    )
}

fn even_rotation(ctx: &Context, even: &[(usize, Vec<SweepRecord>)]) -> Verdict {
    let worst = even
        .iter()
        .flat_map(|(n, rows)| rows.iter().map(move |r| (r.optimal_gamma - PI / *n as f64).abs()))
        .fold(0.0, f64::max);
    verdict(
        6,
        "optimal rotation is pi/n for even n",
        "1e-3 rad",
        worst <= 1e-3,
        format!("max |gamma - pi/n| = {worst:.1e} ({} E values)", ctx.twenty.len()),
    )
}

fn asymptotic_maximum(ctx: &Context) -> Result<Verdict, CliError> {
    let c = gamma_optimized_coherence_with(256, &SchmidtState::maximally_entangled(), ctx.settings)?.coherence;
    Ok(verdict(
        7,
        "large-n coherence at E = 1 is about 0.56",
        "+- 0.01",
        (c - 0.56).abs() <= 0.01,
        format!("{c:.4}"),
    ))
}

fn split(ctx: &Context, sym256: &[SweepRecord]) -> Result<Verdict, CliError> {
    let at_256 = sym256
        .iter()
        .map(|r| (r.entanglement - r.coherence - r.accessible_info).abs())
        .fold(0.0, f64::max);
    let mut ladder = Vec::new();
    for &n in &CONVERGENCE_SIZES {
        let mut worst = 0.0f64;
        for &e in &ctx.twenty {
            worst = worst.max(split_at(&alpha_for_entanglement(e)?, n, ctx.settings)?.residual);
        }
        ladder.push(worst);
    }
    let monotone = ladder.windows(2).all(|w| w[1] <= w[0]);
    let mut shown = String::new();
    for r in &ladder {
        let _ = write!(shown, " {r:.1e}");
    }
    Ok(verdict(
        8,
        "E = coherence + I_acc at large n, converging in n",
        "<= 5e-3, monotone",
        at_256 <= 0.005 && monotone,
        format!("n=256: {at_256:.1e}; n=8..64:{shown}"),
    ))
}

fn cross_construction(ctx: &Context, sym2: &[SweepRecord], b92: &[SweepRecord]) -> Result<Verdict, CliError> {
    let mut rng = ctx.rng(9);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=64);
        let spec = SymPovmSpec::new(n, rng.gen_range(0.0..=PI / n as f64))?;
        let state = SchmidtState::new(rng.gen_range(0.0..=PI / 2.0))?;
        let fast = sym_ensemble(&spec, &state)?;
        let generic = dual_map(&state, &build_sym_povm(&spec))?;
        for (a, b) in sym_probabilities(&spec, &state).iter().zip(generic.probabilities()) {
            worst = worst.max((a - b).abs());
        }
        let generic = generic.merge_duplicates();
        if fast.len() != generic.len() {
            worst = f64::INFINITY;
            continue;
        }
        for (a, b) in fast.entries().iter().zip(generic.entries()) {
            worst = worst
                .max((a.probability - b.probability).abs())
                .max(a.state.matrix().max_abs_diff(b.state.matrix()));
        }
    }
    let rows = sym2
        .iter()
        .zip(b92)
        .flat_map(|(a, b)| {
            [
                a.coherence - b.coherence,
                a.holevo - b.holevo,
                a.accessible_info - b.accessible_info,
                a.lower_bound - b.lower_bound,
            ]
        })
        .fold(0.0f64, |m, d| m.max(d.abs()));
    Ok(verdict(
        9,
        "closed-form symmetric ensembles match the duality map; n = 2 is B92",
        "1e-10; rows 1e-6",
        worst <= 1e-10 && rows <= 1e-6,
        format!("{worst:.1e}; rows {rows:.1e}"),
    ))
}

fn oracles(ctx: &Context) -> Result<Verdict, CliError> {
    let mut rng = ctx.rng(10);
    let mut worst_c = 0.0f64;
    for _ in 0..50 {
        let k = rng.gen_range(2..=5);
        let mut entries = Vec::with_capacity(k);
        for _ in 0..k {
            let t = rng.gen_range(0.0..2.0 * PI);
            let r = if rng.gen_bool(0.5) {
                1.0
            } else {
                rng.gen_range(0.0..1.0f64).sqrt()
            };
            let (x, z) = (r * t.sin(), r * t.cos());
            let rho = DensityOperator::new(Mat2::from_real([
                [0.5 * (1.0 + z), 0.5 * x],
                [0.5 * x, 0.5 * (1.0 - z)],
            ]))?;
            entries.push((rng.gen_range(0.05..1.0), rho));
        }
        let total: f64 = entries.iter().map(|e| e.0).sum();
        let ens = Ensemble::new(entries.into_iter().map(|(w, r)| (w / total, r)).collect())?;
        let objective = BasisObjective::new(&ens);
        let brute = (0..100_000)
            .map(|i| objective.at_theta(PI * i as f64 / 99_999.0))
            .fold(f64::INFINITY, f64::min);
        worst_c = worst_c.max((basis_free_coherence_with(&ens, true, &ctx.settings.basis).value - brute).abs());
    }
    let mut worst_i = 0.0f64;
    for _ in 0..100 {
        let mut pick = || PureState::bloch(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
        let (a, b) = (pick(), pick());
        let ens = Ensemble::from_pure(vec![(0.5, a), (0.5, b)])?;
        let analytic = accessible_information_with(&ens, &ctx.settings.access).value;
        let optimized = optimized_accessible_information(&ens, &ctx.settings.access).value;
        worst_i = worst_i.max((analytic - optimized).abs());
    }
    Ok(verdict(
        10,
        "optimizers agree with brute force and closed forms",
        "1e-6",
        worst_c <= 1e-6 && worst_i <= 1e-6,
        format!("coherence {worst_c:.1e}, I_acc {worst_i:.1e}"),
    ))
}

fn continuity(ctx: &Context) -> Result<Verdict, CliError> {
    let ens = ctx.b92(FRAC_PI_8)?;
    let rho = DensityOperator::new(Mat2::from_real([[0.75, 0.15], [0.15, 0.25]]))?;
    let basis = MeasurementBasis::computational();
    let target = relative_entropy_coherence(&rho, &basis);
    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    for k in 2..=6 {
        let eps = 10f64.powi(-k);
        let gap = (ensemble_coherence_in_basis(&perturb_ensemble(&ens, &rho, 1.0 - eps)?, &basis) - target).abs();
        pass &= gap <= 4.0 * eps;
        worst_ratio = worst_ratio.max(gap / eps);
    }
    Ok(verdict(
        11,
        "perturbed ensemble coherence tends to the single-state value",
        "gap <= 4 * 10^-k",
        pass,
        format!("max gap / 10^-k = {worst_ratio:.2}"),
    ))
}

/// Runs the selected criteria (all if `only` is empty).
pub fn run(settings: &Settings, e_grid: usize, seed: u64, only: &[usize]) -> Result<Vec<Verdict>, CliError> {
    let want = |id: usize| only.is_empty() || only.contains(&id);
    let ctx = Context {
        settings,
        grid: entanglement_grid(e_grid),
        twenty: (1..=20).map(|k| k as f64 / 20.0).collect(),
        seed,
    };
    let needs_grid = [3, 4, 5, 9].iter().any(|&i| want(i));
    let b92 = if needs_grid {
        b92_sweep(&ctx.grid, settings)?
    } else {
        Vec::new()
    };
    let sym2 = if needs_grid {
        sym_sweep(2, &ctx.grid, settings)?
    } else {
        Vec::new()
    };
    let sym4 = if want(4) || want(5) {
        sym_sweep(4, &ctx.grid, settings)?
    } else {
        Vec::new()
    };
    let sym3 = if want(4) {
        sym_sweep(3, &ctx.grid, settings)?
    } else {
        Vec::new()
    };
    let mut even = Vec::new();
    if want(4) || want(6) {
        for n in [2, 4, 6] {
            even.push((n, sym_sweep(n, &ctx.twenty, settings)?));
        }
    }
    let sym256 = if want(4) || want(8) {
        sym_sweep(256, &ctx.twenty, settings)?
    } else {
        Vec::new()
    };

    let mut out = Vec::new();
    for id in (1..=CRITERIA).filter(|&i| want(i)) {
        log::info!("criterion {id}");
        out.push(match id {
            1 => equal_regime(&ctx)?,
            2 => endpoints(&ctx)?,
            3 => b92_maximum(&ctx, &b92)?,
            4 => sandwich(
                b92.iter()
                    .chain(&sym2)
                    .chain(&sym3)
                    .chain(&sym4)
                    .chain(even.iter().flat_map(|(_, r)| r))
                    .chain(&sym256),
            ),
            5 => gaps(&sym2, &sym4),
            6 => even_rotation(&ctx, &even),
            7 => asymptotic_maximum(&ctx)?,
            8 => split(&ctx, &sym256)?,
            9 => cross_construction(&ctx, &sym2, &b92)?,
            10 => oracles(&ctx)?,
            _ => continuity(&ctx)?,
        });
    }
    Ok(out)
}

/// Fixed-width verdict table.
pub fn table(verdicts: &[Verdict]) -> String {
    let cw = verdicts.iter().map(|v| v.claim.len()).max().unwrap_or(5).max(5);
    let mw = verdicts.iter().map(|v| v.measured.len()).max().unwrap_or(8).max(8);
    let tw = verdicts.iter().map(|v| v.tolerance.len()).max().unwrap_or(9).max(9);
    let mut s = format!(
        "{:>2}  {:<cw$}  {:<mw$}  {:<tw$}  verdict\n",
        "#", "claim", "measured", "tolerance"
    );
    for v in verdicts {
        let _ = writeln!(
            s,
            "{:>2}  {:<cw$}  {:<mw$}  {:<tw$}  {}",
            v.id,
            v.claim,
            v.measured,
            v.tolerance,
            if v.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use ensemble_coherence::qubit::C64;

    #[test]
    fn table_has_one_line_per_verdict() {
        let v = vec![
            verdict(1, "a", "t", true, "m".into()),
            verdict(2, "b", "t", false, "m".into()),
        ];
        let t = table(&v);
        assert_eq!(t.lines().count(), 3);
        assert!(t.lines().nth(2).unwrap().ends_with("FAIL"));
    }

    #[test]
    fn cheap_criteria_pass_by_default() {
        let settings = Settings::default();
        let v = run(&settings, 21, 1, &[1, 2, 11]).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|v| v.pass), "{}", table(&v));
    }

    #[test]
    fn complex_states_are_supported() {
        let ens = Ensemble::from_pure(vec![
            (0.5, PureState::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)).unwrap()),
            (0.5, PureState::bloch(1.0, 1.0)),
        ])
        .unwrap();
        assert_eq!(accessible_information(&ens).method, AccessMethod::AnalyticTwoPure);
    }
}
