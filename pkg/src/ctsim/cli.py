"""Command-line front end: parameter sweeps, figure sets, verification.

Subcommands
-----------
sweep   evaluate the protocol figures over a (theta, alpha, r) grid, CSV out
figure  rerun one of the five standard figure parameter sets (CSV + SVG)
verify  run the oracle-equivalence suites and print pass/fail per invariant

All numeric output is fixed-format and seeded, so identical invocations
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend
from .channel import CoherentMsState, DampingParams, LindbladConfig, damp_vsp, lindblad_integrate
from .chart import Guide, Series, render_chart
from .encodings import CoherentEncoding, MsParams, ms_state_coherent, ms_state_vsp
from .hilbert import DensityOperator, project, trace_distance
from .nonlocality import SV_QUANTUM_MAX, maximize_svetlichny
from .teleport import (
    CtFigures,
    closed_form_vsp,
    coherent_conditioned_probabilities,
    ct_pipeline_coherent,
    ct_pipeline_vsp,
    fef_oracle,
    fully_entangled_fraction,
)

CSV_HEADER = "r,theta,alpha,F_c,F_nc,C_p,eta,sv_max"

FIGURE_THETAS = (0.0, math.pi / 6, math.pi / 4, math.pi / 3)
FIGURE_THETA_LABELS = ("0", "pi6", "pi4", "pi3")
FIGURE_ALPHAS = (0.20, 0.50, 1.25, 2.50)
SVETLICHNY_ALPHAS = (0.50, 1.25, 2.50)
FIGURE_R_STEP = 0.01
SVETLICHNY_R_STEP = 0.05


@dataclass(frozen=True)
class CurveRecord:
    """One sweep point; alpha is None for the vacuum/single-photon encoding."""

    r: float
    theta: float
    alpha: float | None
    f_c: float
    f_nc: float
    c_p: float
    eta: float
    sv_max: float | None = None

    def __post_init__(self):
        for name, val in (("F_c", self.f_c), ("F_nc", self.f_nc),
                          ("C_p", self.c_p), ("eta", self.eta)):
            if not -1e-9 <= val <= 1.0 + 1e-9:
                raise ValueError(f"{name} = {val} outside [0, 1]")
        if self.sv_max is not None and not 0.0 <= self.sv_max <= SV_QUANTUM_MAX + 1e-6:
            raise ValueError(f"sv_max = {self.sv_max} outside [0, 4*sqrt(2)]")


@dataclass(frozen=True)
class SweepConfig:
    encoding: str
    theta_list: tuple[float, ...]
    alpha_list: tuple[float, ...] = ()
    r_start: float = 0.0
    r_stop: float = 1.0
    r_step: float = 0.01
    svetlichny: bool = False
    n_starts: int = 64
    seed: int = 0
    out_path: str | None = None

    def __post_init__(self):
        if self.encoding not in ("vsp", "coherent"):
            raise ValueError(f"encoding must be vsp or coherent, got {self.encoding!r}")
        if not self.theta_list:
            raise ValueError("theta_list must not be empty")
        if self.r_step <= 0:
            raise ValueError(f"r_step must be positive, got {self.r_step}")
        if not 0.0 <= self.r_start <= self.r_stop <= 1.0:
            raise ValueError(
                f"r grid [{self.r_start}, {self.r_stop}] must lie inside [0, 1]"
            )
        if self.encoding == "coherent" and not self.alpha_list:
            raise ValueError("alpha_list must not be empty for the coherent encoding")
        if self.encoding == "vsp" and self.alpha_list:
            raise ValueError("alpha_list only applies to the coherent encoding")
        if self.n_starts < 1:
            raise ValueError(f"n_starts must be >= 1, got {self.n_starts}")

    def r_grid(self) -> list[float]:
        grid = []
        i = 0
        while True:
            r = self.r_start + i * self.r_step
            if r > self.r_stop + 1e-12:
                break
            grid.append(min(round(r, 12), self.r_stop))
            i += 1
        return grid


def _sweep_point(
    encoding: str,
    params: MsParams,
    alpha: float | None,
    p: DampingParams,
    svetlichny: bool,
    n_starts: int,
    seed: int,
) -> CurveRecord:
    if encoding == "vsp":
        fig: CtFigures = ct_pipeline_vsp(params, p)
        sv = None
        if svetlichny:
            state = damp_vsp(ms_state_vsp(params).to_density(), p)
            sv, _ = maximize_svetlichny(state, "vsp", n_starts=n_starts, seed=seed)
    else:
        enc = CoherentEncoding(alpha)
        fig = ct_pipeline_coherent(params, enc, p)
        sv = None
        if svetlichny:
            state = CoherentMsState.build(params, enc, p)
            sv, _ = maximize_svetlichny(state, "coherent", n_starts=n_starts, seed=seed)
    return CurveRecord(
        r=p.r, theta=params.theta, alpha=alpha,
        f_c=fig.f_c, f_nc=fig.f_nc, c_p=fig.c_p, eta=fig.eta, sv_max=sv,
    )


def run_sweep(cfg: SweepConfig) -> list[CurveRecord]:
    """Evaluate every (theta, alpha, r) grid point, ordered lexicographically.

    Points are independent pure-function evaluations; they are computed in
    sorted order so the output never depends on scheduling.
    """
    alphas: tuple[float | None, ...]
    alphas = tuple(sorted(set(cfg.alpha_list))) if cfg.encoding == "coherent" else (None,)
    records = []
    for theta in sorted(set(cfg.theta_list)):
        params = MsParams(theta)
        for alpha in alphas:
            for r in cfg.r_grid():
                records.append(
                    _sweep_point(
                        cfg.encoding, params, alpha, DampingParams(r),
                        cfg.svetlichny, cfg.n_starts, cfg.seed,
                    )
                )
    return records


def format_number(x: float) -> str:
    """Fixed-point with 12 fractional digits inside [1e-4, 1e4), else scientific."""
    if x == 0.0:
        return "0.000000000000"
    if 1e-4 <= abs(x) < 1e4:
        return f"{x:.12f}"
    return f"{x:.12e}"


def emit_csv(records: list[CurveRecord], path) -> None:
    """Write records under the fixed header; absent fields are empty strings."""
    if not records:
        raise ValueError("no records to write")
    lines = [CSV_HEADER]
    for rec in records:
        lines.append(
            ",".join(
                [
                    format_number(rec.r),
                    format_number(rec.theta),
                    "" if rec.alpha is None else format_number(rec.alpha),
                    format_number(rec.f_c),
                    format_number(rec.f_nc),
                    format_number(rec.c_p),
                    format_number(rec.eta),
                    "" if rec.sv_max is None else format_number(rec.sv_max),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


_QUANTITIES = {
    "F_c": ("conditioned fidelity F_c", lambda rec: rec.f_c),
    "F_nc": ("non-conditioned fidelity F_nc", lambda rec: rec.f_nc),
    "C_p": ("control power C_p", lambda rec: rec.c_p),
    "eta": ("efficiency eta", lambda rec: rec.eta),
    "sv_max": ("|S_v| max", lambda rec: rec.sv_max),
}


def _series_label(theta: float, alpha: float | None) -> str:
    label = f"theta={theta:.3g}"
    if alpha is not None:
        label += f", alpha={alpha:g}"
    else:
        label += ", vsp"
    return label


def _group_series(records, value_of, marker_vsp=False) -> list[Series]:
    keys = sorted({(rec.theta, -1.0 if rec.alpha is None else rec.alpha) for rec in records})
    series = []
    for theta, alpha_key in keys:
        alpha = None if alpha_key < 0 else alpha_key
        pts = [
            (rec.r, value_of(rec))
            for rec in records
            if rec.theta == theta and rec.alpha == alpha and value_of(rec) is not None
        ]
        if not pts:
            continue
        pts.sort()
        series.append(
            Series(
                label=_series_label(theta, alpha),
                xs=tuple(x for x, _ in pts),
                ys=tuple(y for _, y in pts),
                markers=marker_vsp and alpha is None,
            )
        )
    return series


def _guides_for(quantity: str) -> tuple[Guide, ...]:
    if quantity in ("F_c", "F_nc"):
        return (Guide(2.0 / 3.0, "classical bound 2/3"),)
    if quantity == "sv_max":
        return (
            Guide(4.0, "hybrid local bound 4"),
            Guide(SV_QUANTUM_MAX, "quantum maximum 4*sqrt(2)"),
        )
    return ()


def emit_plot(records: list[CurveRecord], path, quantity: str, marker_vsp: bool = False) -> None:
    """Write an SVG line chart of one quantity against the normalized time."""
    if quantity not in _QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; pick one of {sorted(_QUANTITIES)}")
    y_label, value_of = _QUANTITIES[quantity]
    series = _group_series(records, value_of, marker_vsp)
    if not series:
        raise ValueError(f"no data for quantity {quantity!r}")
    svg = render_chart(series, "normalized time r", y_label, _guides_for(quantity))
    Path(path).write_text(svg, encoding="utf-8", newline="\n")


def emit_parametric_plot(records: list[CurveRecord], path) -> None:
    """Efficiency versus maximized |S_v|, restricted to the violating region."""
    keys = sorted({(rec.theta, -1.0 if rec.alpha is None else rec.alpha) for rec in records})
    series = []
    for theta, alpha_key in keys:
        alpha = None if alpha_key < 0 else alpha_key
        pts = [
            (rec.r, rec.eta, rec.sv_max)
            for rec in records
            if rec.theta == theta
            and rec.alpha == alpha
            and rec.sv_max is not None
            and rec.sv_max > 4.0
        ]
        if not pts:
            continue
        pts.sort()
        series.append(
            Series(
                label=_series_label(theta, alpha),
                xs=tuple(eta for _, eta, _ in pts),
                ys=tuple(sv for _, _, sv in pts),
                markers=True,
            )
        )
    guides = (Guide(SV_QUANTUM_MAX, "quantum maximum 4*sqrt(2)"),)
    svg = render_chart(series, "efficiency eta", "|S_v| max", guides)
    Path(path).write_text(svg, encoding="utf-8", newline="\n")


def _write_panel(records, out_dir: Path, stem: str, quantity: str, marker_vsp=False) -> list[Path]:
    csv_path = out_dir / f"{stem}.csv"
    svg_path = out_dir / f"{stem}.svg"
    emit_csv(records, csv_path)
    emit_plot(records, svg_path, quantity, marker_vsp)
    return [csv_path, svg_path]


def reproduce_figure(fig_id: str, out_dir, seed: int = 0) -> list[Path]:
    """Rerun the parameter set of one standard figure; returns written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []

    if fig_id == "fig2":
        records = run_sweep(SweepConfig("vsp", FIGURE_THETAS, r_step=FIGURE_R_STEP, seed=seed))
        paths += _write_panel(records, out, "fig2_control_power", "C_p")
        fc_records = [rec for rec in records if rec.theta == 0.0]
        paths += _write_panel(fc_records, out, "fig2_conditioned_fidelity", "F_c")
    elif fig_id == "fig3":
        for theta, label in zip(FIGURE_THETAS, FIGURE_THETA_LABELS):
            records = run_sweep(
                SweepConfig("coherent", (theta,), FIGURE_ALPHAS, r_step=FIGURE_R_STEP, seed=seed)
            )
            paths += _write_panel(records, out, f"fig3_theta{label}_control_power", "C_p")
            paths += _write_panel(records, out, f"fig3_theta{label}_conditioned_fidelity", "F_c")
    elif fig_id == "fig4":
        for theta, label in zip(FIGURE_THETAS, FIGURE_THETA_LABELS):
            vsp = run_sweep(SweepConfig("vsp", (theta,), r_step=FIGURE_R_STEP, seed=seed))
            coh = run_sweep(
                SweepConfig("coherent", (theta,), FIGURE_ALPHAS, r_step=FIGURE_R_STEP, seed=seed)
            )
            paths += _write_panel(
                vsp + coh, out, f"fig4_theta{label}_efficiency", "eta", marker_vsp=True
            )
    elif fig_id == "fig5":
        records = run_sweep(
            SweepConfig(
                "vsp", FIGURE_THETAS, r_step=SVETLICHNY_R_STEP, svetlichny=True, seed=seed
            )
        )
        paths += _write_panel(records, out, "fig5_svetlichny", "sv_max")
        par_csv = out / "fig5_sv_vs_efficiency.csv"
        par_svg = out / "fig5_sv_vs_efficiency.svg"
        violating = [rec for rec in records if rec.sv_max is not None and rec.sv_max > 4.0]
        emit_csv(violating, par_csv)
        emit_parametric_plot(records, par_svg)
        paths += [par_csv, par_svg]
    elif fig_id == "fig6":
        for theta, label in zip(FIGURE_THETAS, FIGURE_THETA_LABELS):
            records = run_sweep(
                SweepConfig(
                    "coherent", (theta,), SVETLICHNY_ALPHAS,
                    r_step=SVETLICHNY_R_STEP, svetlichny=True, seed=seed,
                )
            )
            paths += _write_panel(records, out, f"fig6_theta{label}_svetlichny", "sv_max")
            violating = [rec for rec in records if rec.sv_max is not None and rec.sv_max > 4.0]
            par_svg = out / f"fig6_theta{label}_sv_vs_efficiency.svg"
            emit_parametric_plot(records, par_svg)
            paths.append(par_svg)
            if violating:
                par_csv = out / f"fig6_theta{label}_sv_vs_efficiency.csv"
                emit_csv(violating, par_csv)
                paths.append(par_csv)
    else:
        raise ValueError(f"unknown figure id {fig_id!r}")
    return paths


def _check(name: str, passed: bool, detail: str = "") -> bool:
    status = "PASS" if passed else "FAIL"
    print(f"[{status}] {name}{': ' + detail if detail else ''}")
    return passed


def run_verify(seed: int = 0) -> bool:
    """Oracle-equivalence and invariant suites; prints one line per check."""
    ok = True
    rng = np.random.default_rng(seed)

    # Analytic vacuum/single-photon map against the RK4 master equation.
    worst = 0.0
    for theta in (0.0, math.pi / 4, math.pi / 2):
        for r in (0.3, 0.6, 0.9):
            p = DampingParams(r)
            rho0 = ms_state_vsp(MsParams(theta)).to_density()
            numeric = lindblad_integrate(
                rho0, LindbladConfig(gamma_rate=1.0, t_final=p.time(), dt=0.002)
            )
            worst = max(worst, trace_distance(damp_vsp(rho0, p), numeric))
    ok &= _check("channel oracle, vsp", worst <= 1e-6, f"max trace distance {worst:.2e}")

    worst = 0.0
    for theta, alpha in ((0.0, 0.2), (math.pi / 4, 0.5)):
        p = DampingParams(0.5)
        enc = CoherentEncoding(alpha)
        rho0 = ms_state_coherent(MsParams(theta), enc).to_density()
        numeric = lindblad_integrate(
            rho0, LindbladConfig(gamma_rate=1.0, t_final=p.time(), dt=0.01)
        )
        analytic = CoherentMsState.build(MsParams(theta), enc, p).materialize()
        worst = max(worst, trace_distance(analytic, numeric))
    ok &= _check("channel oracle, coherent", worst <= 1e-5, f"max trace distance {worst:.2e}")

    # Magic-basis fidelity against brute-force maximization.
    worst = 0.0
    for _ in range(40):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = g @ g.conj().T
        rho = DensityOperator((2, 2), m / np.trace(m).real)
        worst = max(worst, abs(fully_entangled_fraction(rho) - fef_oracle(rho)))
    ok &= _check("fully entangled fraction oracle", worst <= 1e-6, f"max |df| {worst:.2e}")

    # Numeric pipeline against the closed-form fidelities.
    worst = 0.0
    for theta in np.linspace(0.0, math.pi / 2, 50):
        for r in np.linspace(0.0, 1.0, 50):
            fig = ct_pipeline_vsp(MsParams(theta), DampingParams(r))
            f_nc, f_c = closed_form_vsp(MsParams(theta), DampingParams(r))
            worst = max(worst, abs(fig.f_nc - f_nc), abs(fig.f_c - f_c))
    ok &= _check("pipeline vs closed form, vsp", worst <= 1e-9, f"max |dF| {worst:.2e}")

    # Measurement probabilities against their closed forms.
    worst = 0.0
    from .encodings import charlie_basis

    for theta in np.linspace(0.0, math.pi / 2, 9):
        params = MsParams(theta)
        rho = damp_vsp(ms_state_vsp(params).to_density(), DampingParams(0.4))
        for ket, expected in zip(charlie_basis(params),
                                 ((1 + params.d) / 2, (1 - params.d) / 2)):
            if expected < 1e-14:
                continue
            _, prob = project(rho, 0, ket)
            worst = max(worst, abs(prob - expected))
        enc = CoherentEncoding(0.5)
        rho_c = CoherentMsState.build(params, enc, DampingParams(0.4)).materialize()
        for ket, expected in zip(charlie_basis(params),
                                 coherent_conditioned_probabilities(params, enc)):
            if expected < 1e-14:
                continue
            _, prob = project(rho_c, 0, ket)
            worst = max(worst, abs(prob - expected))
    ok &= _check("conditioned probabilities", worst <= 1e-10, f"max |dP| {worst:.2e}")

    # Composition law: damping by r1 then r2 equals the combined channel.
    worst = 0.0
    for theta in (0.0, math.pi / 3):
        rho0 = ms_state_vsp(MsParams(theta)).to_density()
        p1, p2 = DampingParams(0.5), DampingParams(0.7)
        tau_sq = p1.tau**2 * p2.tau**2
        combined = DampingParams(math.sqrt(1.0 - tau_sq))
        two_step = damp_vsp(damp_vsp(rho0, p1), p2)
        worst = max(
            worst, float(np.max(np.abs(two_step.matrix - damp_vsp(rho0, combined).matrix)))
        )
    ok &= _check("damping semigroup composition", worst <= 1e-10, f"max |drho| {worst:.2e}")

    # Compiled and pure-Python kernels must agree.
    from . import _kernels_py
    from .nonlocality import correlation_tensor

    ghz = damp_vsp(ms_state_vsp(MsParams(0.0)).to_density(), DampingParams(0.2))
    tensor = correlation_tensor(ghz)
    state = CoherentMsState.build(MsParams(math.pi / 4), CoherentEncoding(0.5), DampingParams(0.3))
    worst = 0.0
    for _ in range(20):
        x = rng.uniform(-2.0, 2.0, size=12)
        worst = max(
            worst,
            abs(_backend.svetlichny_vsp(tensor, x) - _kernels_py.svetlichny_vsp(tensor, x)),
            abs(
                _backend.svetlichny_coherent(
                    state.weights, state.qubit, state.signs, state.gamma, x
                )
                - _kernels_py.svetlichny_coherent(
                    state.weights, state.qubit, state.signs, state.gamma, x
                )
            ),
        )
    backend_name = "compiled" if _backend.COMPILED else "pure-python (fallback active)"
    ok &= _check(f"kernel agreement ({backend_name})", worst <= 1e-9, f"max |dS| {worst:.2e}")

    # Maximal violation anchor.
    ghz0 = ms_state_vsp(MsParams(0.0)).to_density()
    best, _ = maximize_svetlichny(ghz0, "vsp", n_starts=64, seed=seed)
    err = abs(best - SV_QUANTUM_MAX)
    ok &= _check("Svetlichny GHZ anchor 4*sqrt(2)", err <= 1e-4, f"|S_v|max error {err:.2e}")

    print("verification " + ("PASSED" if ok else "FAILED"))
    return bool(ok)


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctsim",
        description="Controlled-teleportation protocol simulator for lossy optical qubits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="evaluate protocol figures over a parameter grid")
    sweep.add_argument("--encoding", required=True, choices=("vsp", "coherent"))
    sweep.add_argument("--theta", required=True, type=_parse_floats,
                       help="comma-separated channel angles in radians")
    sweep.add_argument("--alpha", type=_parse_floats, default=(),
                       help="comma-separated coherent amplitudes (coherent encoding only)")
    sweep.add_argument("--r-start", type=float, default=0.0,
                       help="first normalized time (default: 0)")
    sweep.add_argument("--r-stop", type=float, default=1.0,
                       help="last normalized time (default: 1)")
    sweep.add_argument("--r-step", type=float, default=0.01,
                       help="normalized-time step (default: 0.01)")
    sweep.add_argument("--svetlichny", action="store_true",
                       help="also maximize the Bell-Svetlichny function per grid point")
    sweep.add_argument("--n-starts", type=int, default=64,
                       help="multi-start count for the Svetlichny maximization (default: 64)")
    sweep.add_argument("--seed", type=int, default=0,
                       help="seed for the maximization starting points (default: 0)")
    sweep.add_argument("--out", required=True, help="output CSV path")

    figure = sub.add_parser("figure", help="reproduce a standard figure parameter set")
    figure.add_argument("--id", required=True,
                        choices=("fig2", "fig3", "fig4", "fig5", "fig6"))
    figure.add_argument("--out-dir", required=True)
    figure.add_argument("--seed", type=int, default=0)

    verify = sub.add_parser("verify", help="run oracle-equivalence suites")
    verify.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sweep":
        cfg = SweepConfig(
            encoding=args.encoding,
            theta_list=args.theta,
            alpha_list=args.alpha,
            r_start=args.r_start,
            r_stop=args.r_stop,
            r_step=args.r_step,
            svetlichny=args.svetlichny,
            n_starts=args.n_starts,
            seed=args.seed,
            out_path=args.out,
        )
        records = run_sweep(cfg)
        emit_csv(records, args.out)
        print(f"wrote {len(records)} records to {args.out}")
        return 0
    if args.command == "figure":
        paths = reproduce_figure(args.id, args.out_dir, seed=args.seed)
        for path in paths:
            print(f"wrote {path}")
        return 0
    if args.command == "verify":
        return 0 if run_verify(seed=args.seed) else 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
