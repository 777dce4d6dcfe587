use std::path::Path;

use super::{
    emit, order_arg, tol_arg, Cell, CheckArgs, CliError, CoeffsArgs, CsvTable, EvalArgs,
    FiguresArgs, GridArgs, KindArg, Reproduce2dArgs, ReproduceArgs, Toggle,
};
use crate::grid::{FrequencyGrid, Grid1D, Grid2D};
use crate::report::CheckReport;
use crate::reproduction::{
    reproduce_2d, reproduce_causal, reproduce_even_symmetric_factorized, reproduce_symmetric,
    symmetric_coefficients, ReproductionResult, ReproductionResult2D,
};
use crate::sequences::{
    causal_det_closed_form, causal_detail_mask, causal_mask, check_delta, det_condition,
    reproduction_coeffs_causal, symmetric_detail_mask, symmetric_mask,
};
use crate::special::Order;
use crate::splines::{
    check_derivative_relation_with, convolution_identity_residual, DerivativeOptions,
    FractionalSpline, Strategy, TruncationPolicy,
};

const DELTA_TERMS: usize = 64;
const DELTA_TOL: f64 = 1e-10;
const DET_WINDOW: i64 = 1 << 16;
const DET_GRID: usize = 512;
const DET_TOL: f64 = 1e-10;
const CONV_GRID: usize = 512;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn grid_1d(kind: KindArg, g: &GridArgs) -> Result<Grid1D, CliError> {
    let x0 = g.x0.unwrap_or(match kind {
        KindArg::Causal => 0.0,
        KindArg::Symmetric => -4.0,
    });
    Grid1D::half_open(x0, g.x1, g.step)
        .map_err(|e| usage(format!("--x0 {x0} --x1 {} --step {}: {e}", g.x1, g.step)))
}

fn kind_name(kind: KindArg) -> &'static str {
    match kind {
        KindArg::Causal => "causal",
        KindArg::Symmetric => "symmetric",
    }
}

pub(super) fn coeffs(a: &CoeffsArgs) -> Result<(), CliError> {
    let order = order_arg("alpha", a.alpha)?;
    if a.terms == 0 {
        return Err(usage("--terms 0: at least one row is required"));
    }
    let normalized = a.normalized == Toggle::On;
    let n = a.terms as i64;
    let mut solver = None;
    let (mask, detail, p) = match a.kind {
        KindArg::Causal => (
            causal_mask(order),
            causal_detail_mask(order, normalized),
            reproduction_coeffs_causal(order),
        ),
        KindArg::Symmetric => {
            let hw = a.terms.max(64) * 2;
            let (p, cond) = symmetric_coefficients(order, hw).map_err(usage)?;
            if cond.is_some() {
                solver = Some(hw);
            }
            (
                symmetric_mask(order),
                symmetric_detail_mask(order, normalized),
                p,
            )
        }
    };
    let mut t = CsvTable::new(["k", "a_k", "b_k", "p_k"]);
    t.comment(format!(
        "coeffs kind={} alpha={} terms={} normalized={}",
        kind_name(a.kind),
        a.alpha,
        a.terms,
        if normalized { "on" } else { "off" }
    ));
    if a.kind == KindArg::Symmetric {
        t.comment("symmetric sequences are even in k; rows list k >= 0");
    }
    if let Some(hw) = solver {
        t.comment(format!(
            "p_k from the regularized even solver on |k| <= {hw}"
        ));
    }
    let (av, bv, pv) = (
        mask.materialize(0, n - 1),
        detail.materialize(0, n - 1),
        p.materialize(0, n - 1),
    );
    for k in 0..a.terms {
        t.push(vec![
            Cell::Int(k as i64),
            av[k].into(),
            bv[k].into(),
            pv[k].into(),
        ]);
    }
    emit(a.out.as_deref(), &t.to_csv_string())
}

pub(super) fn eval(a: &EvalArgs) -> Result<(), CliError> {
    let order = order_arg("alpha", a.alpha)?;
    let grid = grid_1d(a.kind, &a.grid)?;
    let trunc = TruncationPolicy::new(a.terms, a.tol)
        .map_err(|e| usage(format!("--terms {} --tol {}: {e}", a.terms, a.tol)))?;
    let standard = FractionalSpline::standard(a.kind.into(), order);
    let spline =
        FractionalSpline::new(a.kind.into(), order, standard.strategy(), trunc).map_err(usage)?;
    let truncated = spline.strategy() == Strategy::TruncatedSeries;
    let mut t = if truncated {
        CsvTable::new(["x", "value", "tail_bound"])
    } else {
        CsvTable::new(["x", "value"])
    };
    t.comment(format!(
        "eval kind={} alpha={} strategy={:?} terms={} tail_tolerance={:e}",
        kind_name(a.kind),
        a.alpha,
        spline.strategy(),
        trunc.max_terms,
        trunc.tail_tolerance
    ));
    for (x, v) in grid.points().into_iter().zip(spline.eval_grid(&grid)) {
        let mut row = vec![Cell::Real(x), Cell::Real(v.value)];
        if truncated {
            row.push(Cell::Real(v.tail_bound.unwrap_or(0.0)));
        }
        t.push(row);
    }
    emit(a.out.as_deref(), &t.to_csv_string())
}

/// Symmetric runs of even integer order go through the factorized path with
/// the split `β₁ = β₂ = -(α+1)/2`.
fn reproduce_1d(
    kind: KindArg,
    order: Order,
    grid: &Grid1D,
    half_width: usize,
) -> Result<ReproductionResult, CliError> {
    match kind {
        KindArg::Causal => reproduce_causal(order, grid),
        KindArg::Symmetric if order.is_even_nonneg() => {
            let b = -(order.alpha() + 1.0) / 2.0;
            reproduce_even_symmetric_factorized(order, (b, b), grid, half_width)
        }
        KindArg::Symmetric => reproduce_symmetric(order, grid, half_width),
    }
    .map_err(usage)
}

fn result_table(r: &ReproductionResult, header: String) -> CsvTable {
    let mut t = CsvTable::new(["x", "target", "reconstruction", "abs_error"]);
    t.comment(header);
    for (i, x) in r.grid.points().into_iter().enumerate() {
        t.push(vec![
            x.into(),
            r.target[i].into(),
            r.values[i].into(),
            r.error[i].into(),
        ]);
    }
    t.footer(format!("max_error={:e}", r.max_error));
    t.footer(format!("max_error_at={}", r.max_error_at));
    t.footer(format!("excluded_points={}", r.excluded.len()));
    t.footer(format!("aligned={}", r.aligned));
    if let Some(tr) = &r.truncation {
        t.footer(format!("half_width={}", tr.half_width));
        t.footer(format!("tail_bound={:e}", tr.tail_bound));
        let cps: Vec<String> = tr
            .checkpoints
            .iter()
            .map(|(h, e)| format!("{h}:{e:e}"))
            .collect();
        t.footer(format!("checkpoints={}", cps.join(";")));
        if let Some(s) = tr.slope {
            t.footer(format!("slope={s}"));
        }
        if let Some(c) = tr.condition_estimate {
            t.footer(format!("condition_estimate={c:e}"));
        }
    }
    for n in &r.notes {
        t.footer(format!("note={n}"));
    }
    t
}

fn tolerance_gate(max_error: f64, tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && max_error <= tol {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!(
            "max error {max_error:e} exceeds tolerance {tol:e}"
        )))
    }
}

pub(super) fn reproduce(a: &ReproduceArgs) -> Result<(), CliError> {
    let order = order_arg("alpha", a.alpha)?;
    let tol = tol_arg(a.tol)?;
    let grid = grid_1d(a.kind, &a.grid)?;
    let r = reproduce_1d(a.kind, order, &grid, a.half_width)?;
    let header = format!(
        "reproduce kind={} alpha={} x0={} x1={} step={} half_width={} tol={}",
        kind_name(a.kind),
        a.alpha,
        grid.start(),
        a.grid.x1,
        a.grid.step,
        a.half_width,
        tol
    );
    emit(a.out.as_deref(), &result_table(&r, header).to_csv_string())?;
    tolerance_gate(r.max_error, tol)
}

fn result_table_2d(r: &ReproductionResult2D, header: String) -> CsvTable {
    let mut t = CsvTable::new(["x", "y", "target", "reconstruction", "abs_error"]);
    t.comment(header);
    let (xs, ys) = (r.grid.x.points(), r.grid.y.points());
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let k = r.grid.index(i, j);
            t.push(vec![
                x.into(),
                y.into(),
                r.target[k].into(),
                r.values[k].into(),
                r.error[k].into(),
            ]);
        }
    }
    t.footer(format!("max_error={:e}", r.max_error));
    if let Some((tx, ty)) = &r.truncation {
        t.footer(format!("half_width={}", tx.half_width));
        t.footer(format!("tail_bound_x={:e}", tx.tail_bound));
        t.footer(format!("tail_bound_y={:e}", ty.tail_bound));
    }
    t
}

fn reproduce_2d_run(
    kind: KindArg,
    o1: Order,
    o2: Order,
    grid: &Grid2D,
    half_width: usize,
) -> Result<ReproductionResult2D, CliError> {
    reproduce_2d(kind.into(), o1, o2, grid, half_width).map_err(usage)
}

pub(super) fn reproduce2d(a: &Reproduce2dArgs) -> Result<(), CliError> {
    let o1 = order_arg("alpha", a.alpha)?;
    let a2 = a.alpha2.unwrap_or(a.alpha);
    let o2 = order_arg("alpha2", a2)?;
    let tol = tol_arg(a.tol)?;
    let g = grid_1d(a.kind, &a.grid)?;
    let r = reproduce_2d_run(a.kind, o1, o2, &Grid2D::square(g), a.half_width)?;
    let header = format!(
        "reproduce2d kind={} alpha={} alpha2={} x0={} x1={} step={} half_width={} tol={}",
        kind_name(a.kind),
        a.alpha,
        a2,
        g.start(),
        a.grid.x1,
        a.grid.step,
        a.half_width,
        tol
    );
    emit(
        a.out.as_deref(),
        &result_table_2d(&r, header).to_csv_string(),
    )?;
    tolerance_gate(r.max_error, tol)
}

/// Numeric determinant of the causal mask pair against its closed form,
/// together with `|det(0) - 1|`.
fn det_check(order: Order) -> CheckReport {
    let grid = FrequencyGrid::uniform(DET_GRID).expect("nonempty grid");
    let a = causal_mask(order);
    let b = causal_detail_mask(order, true);
    let r = det_condition(&a, &b, &grid, (0, DET_WINDOW)).expect("nonempty window");
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for (d, &w) in r.values.iter().zip(grid.samples()) {
        let e = (d - causal_det_closed_form(order, w)).norm();
        if e > worst {
            worst = e;
            at = w;
        }
    }
    let at_zero = (r.first() - 1.0).norm();
    CheckReport::new("det_condition", worst.max(at_zero), DET_TOL)
        .at(at)
        .with("det0_error", at_zero)
        .with("min_abs", r.min_abs)
        .with("argmin", r.argmin)
}

/// Grid and options of the derivative line; `β = α/2`.
fn derivative_check(order: Order, tol: f64) -> Result<CheckReport, CliError> {
    let h = 1.0 / 64.0;
    // Negative orders blow up at the knots; sample between them instead.
    let x0 = if order.alpha() < 0.0 { h / 3.0 } else { 0.0 };
    let grid = Grid1D::new(x0, h, 769).expect("valid grid");
    let opts = DerivativeOptions {
        tolerance: tol,
        ..DerivativeOptions::default()
    };
    check_derivative_relation_with(
        order,
        order.alpha() / 2.0,
        &grid,
        &TruncationPolicy::default(),
        &opts,
    )
    .map_err(usage)
}

pub fn check_reports(
    alphas: &[f64],
    normalized: bool,
    tol: f64,
) -> Result<Vec<(f64, CheckReport)>, CliError> {
    if alphas.is_empty() {
        return Err(usage("--alpha: empty order set"));
    }
    let orders = alphas
        .iter()
        .map(|&a| order_arg("alpha", a))
        .collect::<Result<Vec<_>, _>>()?;
    let freq = FrequencyGrid::uniform(CONV_GRID).expect("nonempty grid");
    let mut out = Vec::new();
    for (i, &o) in orders.iter().enumerate() {
        let a = o.alpha();
        let b = causal_detail_mask(o, normalized);
        let p = reproduction_coeffs_causal(o);
        out.push((a, check_delta(&b, &p, DELTA_TERMS, DELTA_TOL)));
        out.push((a, det_check(o)));
        let partner = orders[(i + 1) % orders.len()];
        out.push((
            a,
            convolution_identity_residual(o, partner, &freq).with("alpha2", partner.alpha()),
        ));
        out.push((a, derivative_check(o, tol)?));
    }
    Ok(out)
}

pub(super) fn check(a: &CheckArgs) -> Result<(), CliError> {
    let tol = tol_arg(a.tol)?;
    let reports = check_reports(&a.alpha, a.normalized == Toggle::On, tol)?;
    let mut text = String::new();
    for (alpha, r) in &reports {
        text.push_str(&format!("alpha={alpha} {r}\n"));
    }
    let failed = reports.iter().filter(|(_, r)| !r.passed).count();
    text.push_str(&format!(
        "summary passed={} failed={failed}\n",
        reports.len() - failed
    ));
    emit(a.out.as_deref(), &text)?;
    if failed > 0 {
        return Err(CliError::Tolerance(format!(
            "{failed} identity check(s) failed"
        )));
    }
    Ok(())
}

struct FigureParams {
    file: &'static str,
    kind: KindArg,
    alpha: f64,
}

const FIG1: [FigureParams; 4] = [
    FigureParams {
        file: "fig1_causal_alpha_1-5.csv",
        kind: KindArg::Causal,
        alpha: 0.2,
    },
    FigureParams {
        file: "fig1_causal_alpha_3-4.csv",
        kind: KindArg::Causal,
        alpha: 0.75,
    },
    FigureParams {
        file: "fig1_causal_alpha_1.csv",
        kind: KindArg::Causal,
        alpha: 1.0,
    },
    FigureParams {
        file: "fig1_causal_alpha_5-4.csv",
        kind: KindArg::Causal,
        alpha: 1.25,
    },
];

const FIG2: [FigureParams; 4] = [
    FigureParams {
        file: "fig2_symmetric_alpha_1-2.csv",
        kind: KindArg::Symmetric,
        alpha: 0.5,
    },
    FigureParams {
        file: "fig2_symmetric_alpha_1.csv",
        kind: KindArg::Symmetric,
        alpha: 1.0,
    },
    FigureParams {
        file: "fig2_symmetric_alpha_3-2.csv",
        kind: KindArg::Symmetric,
        alpha: 1.5,
    },
    FigureParams {
        file: "fig2_symmetric_alpha_2.csv",
        kind: KindArg::Symmetric,
        alpha: 2.0,
    },
];

fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    emit(Some(&dir.join(name)), text)
}

/// Every figure dataset as `(file name, CSV text, max error)`.
pub fn figure_tables(half_width: usize) -> Result<Vec<(String, String, f64)>, CliError> {
    let mut out = Vec::new();
    let fig1_grid = Grid1D::inclusive(0.0, 8.0, 0.01).expect("valid grid");
    let fig2_grid = Grid1D::inclusive(-4.0, 4.0, 0.05).expect("valid grid");
    for (fig, grid) in FIG1
        .iter()
        .map(|s| (s, fig1_grid))
        .chain(FIG2.iter().map(|s| (s, fig2_grid)))
    {
        let order = order_arg("alpha", fig.alpha)?;
        let r = reproduce_1d(fig.kind, order, &grid, half_width)?;
        let header = format!(
            "figure kind={} alpha={} x0={} x1={} step={} half_width={}",
            kind_name(fig.kind),
            fig.alpha,
            grid.start(),
            grid.end(),
            grid.step(),
            half_width
        );
        let text = result_table(&r, header).to_csv_string();
        out.push((fig.file.to_string(), text, r.max_error));
    }
    let surfaces = [
        (
            "fig3_causal_1-4_8-3.csv",
            KindArg::Causal,
            0.25,
            8.0 / 3.0,
            0.0,
        ),
        (
            "fig3_symmetric_1-2_3-2.csv",
            KindArg::Symmetric,
            0.5,
            1.5,
            -4.0,
        ),
    ];
    for (file, kind, a1, a2, x0) in surfaces {
        let g = Grid1D::inclusive(x0, 4.0, 0.125).expect("valid grid");
        let (o1, o2) = (order_arg("alpha", a1)?, order_arg("alpha2", a2)?);
        let r = reproduce_2d_run(kind, o1, o2, &Grid2D::square(g), half_width)?;
        let header = format!(
            "figure kind={} alpha={a1} alpha2={a2} x0={x0} x1=4 step=0.125 half_width={half_width}",
            kind_name(kind)
        );
        out.push((
            file.to_string(),
            result_table_2d(&r, header).to_csv_string(),
            r.max_error,
        ));
    }
    Ok(out)
}

pub(super) fn figures(a: &FiguresArgs) -> Result<(), CliError> {
    if a.half_width < 2 {
        return Err(usage("--half-width must be at least 2"));
    }
    std::fs::create_dir_all(&a.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", a.out.display())))?;
    let mut summary = String::new();
    for (name, text, max_error) in figure_tables(a.half_width)? {
        write_file(&a.out, &name, &text)?;
        summary.push_str(&format!("{name} max_error={max_error:e}\n"));
    }
    emit(None, &summary)
}
