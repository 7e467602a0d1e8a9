"""Command-line front end: point/grid evaluation, verification suites, and
plot-data emission in stable CSV/JSON.

Exit codes: 0 pass, 1 verification failure, 2 input/domain error, 3 budget
exhaustion.  Complex numbers are serialized as re,im column pairs with 17
significant digits; every report embeds the active configuration.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import acceptance, ask, bps, conformal, hk, specfn, twistor
from .budget import QuadratureSpec, TruncationBudget
from .errors import BudgetError, ConifoldError, DegenerateError, DomainError

SCHEMA_VERSION = "1"
CONFIG_ENV_VAR = "CONIFOLDHK_CONFIG"


@dataclass
class RunConfig:
    command: str = ""
    t: complex = 0.3 + 0.8j
    lam: complex = 0.0
    theta_beta: float = 0.0
    theta_beta_vee: float = 0.0
    theta_delta: float = 0.0
    grid: str | None = None
    series_tol: float = 1e-11
    quad_tol: float = 1e-10
    max_terms: int = 200_000
    r_scale: float = 1.0
    cutoff: complex = 1j / (2.0 * math.pi)
    fmt: str = "csv"
    out: str | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def budget(self) -> TruncationBudget:
        return TruncationBudget(
            series_tol=self.series_tol,
            quad_tol=self.quad_tol,
            max_terms=self.max_terms,
        )

    def quad(self) -> QuadratureSpec:
        return QuadratureSpec(tol=self.quad_tol)

    def header_lines(self) -> list[str]:
        items = {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "series_tol": self.series_tol,
            "quad_tol": self.quad_tol,
            "max_terms": self.max_terms,
            "r_scale": self.r_scale,
            "cutoff": _fmt_complex(self.cutoff),
            "theta_delta": self.theta_delta,
            "seed": self.seed,
        }
        return [f"# {k} = {v}" for k, v in items.items()]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _parse_complex(s: str) -> complex:
    try:
        return complex(s.replace(" ", ""))
    except ValueError as e:
        raise DomainError(f"cannot parse complex literal {s!r}") from e


def _parse_grid(spec: str) -> list[complex]:
    """Grid spec 're0:re1:n,im0:im1:m' -> row-major list of t values."""
    try:
        re_part, im_part = spec.split(",")
        r0, r1, nr = re_part.split(":")
        i0, i1, ni = im_part.split(":")
        res = np.linspace(float(r0), float(r1), int(nr))
        ims = np.linspace(float(i0), float(i1), int(ni))
    except ValueError as e:
        raise DomainError(f"bad grid spec {spec!r}") from e
    return [complex(r, i) for i in ims for r in res]


def _emit(cfg: RunConfig, columns: list[str], rows: list[list], stream) -> None:
    if cfg.fmt == "json":
        doc = {
            "schema": SCHEMA_VERSION,
            "command": cfg.command,
            "config": {
                k: (_fmt_complex(v) if isinstance(v, complex) else v)
                for k, v in asdict(cfg).items()
                if k not in ("extra",)
            },
            "columns": columns,
            "rows": rows,
        }
        json.dump(doc, stream, indent=1, default=_fmt)
        stream.write("\n")
        return
    for line in cfg.header_lines():
        stream.write(line + "\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(
            ",".join(_fmt(x) if isinstance(x, float) else str(x) for x in row)
            + "\n"
        )


def _open_out(cfg: RunConfig):
    if cfg.out:
        return open(cfg.out, "w", encoding="utf-8")
    return None


def _with_output(cfg: RunConfig, columns, rows) -> None:
    f = _open_out(cfg)
    try:
        _emit(cfg, columns, rows, f if f else sys.stdout)
    finally:
        if f:
            f.close()


def _t_values(cfg: RunConfig) -> list[complex]:
    if cfg.grid:
        return _parse_grid(cfg.grid)
    return [cfg.t]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_periods(cfg: RunConfig) -> int:
    cols = [
        "t_re", "t_im",
        "w0_re", "w0_im", "w1_re", "w1_im",
        "w2_re", "w2_im", "w3_re", "w3_im",
        "pf_residual",
    ]
    rows = []
    for t in _t_values(cfg):
        pv = ask.periods(t)
        rows.append(
            [t.real, t.imag]
            + [x for w in pv for x in (w.real, w.imag)]
            + [ask.pf_residual(t)]
        )
    _with_output(cfg, cols, rows)
    return 0


def cmd_metric(cfg: RunConfig) -> int:
    cols = [
        "t_re", "t_im", "theta_beta_vee", "theta_beta",
        "rho", "ev0", "ev1", "ev2", "ev3",
        "positive_definite", "tail_bound", "degenerate",
    ]
    rows = []
    for t in _t_values(cfg):
        p = hk.FiberPoint(t, cfg.theta_beta_vee, cfg.theta_beta, cfg.theta_delta)
        base = [t.real, t.imag, cfg.theta_beta_vee, cfg.theta_beta]
        try:
            g = hk.metric_gn(p, cfg.budget(), cfg.r_scale)
        except DegenerateError:
            rows.append(base + [math.nan] * 5 + [0, math.nan, 1])
            continue
        ev = g.eigenvalues()
        rho = ask.im_tau(t) + hk.n_inst_beta(p, cfg.budget(), cfg.r_scale).value.real
        rows.append(
            base
            + [rho]
            + [float(x) for x in ev]
            + [int(g.is_positive_definite()), g.tail_bound, 0]
        )
    _with_output(cfg, cols, rows)
    return 0


def cmd_ov_compare(cfg: RunConfig) -> int:
    kmax = int(cfg.extra.get("kmax", 4))
    budget = TruncationBudget(series_tol=1e-14, quad_tol=cfg.quad_tol)
    p0 = hk.FiberPoint(1e-3, cfg.theta_beta_vee, cfg.theta_beta, cfg.theta_delta)
    e2lim, e3lim = hk.eta_limits_at_origin(p0, budget)
    cols = [
        "k", "t_re", "t_im", "eta1_max",
        "eta2_err_vs_limit", "eta3_err_vs_limit",
    ]
    rows = []
    for k in range(1, kmax + 1):
        tk = 10.0 ** (-k) * cmath.exp(1j * math.pi / 4.0)
        p = hk.FiberPoint(tk, cfg.theta_beta_vee, cfg.theta_beta, cfg.theta_delta)
        e1, e2, e3 = hk.smoothing_eta(p, budget, cfg.r_scale, cfg.cutoff)
        rows.append(
            [
                k, tk.real, tk.imag,
                e1.max_abs(),
                e2.max_abs_diff(e2lim),
                (e3 - e3lim).max_abs(),
            ]
        )
    _with_output(cfg, cols, rows)
    return 0


def cmd_twistor_check(cfg: RunConfig) -> int:
    p = hk.FiberPoint(cfg.t, cfg.theta_beta_vee, cfg.theta_beta, cfg.theta_delta)
    res = twistor.varpi_coefficients(p, cfg.budget(), cfg.quad())
    _, w3 = hk.kahler_forms_complex(p, cfg.budget(), cfg.r_scale)
    ref = w3.as_coordinate_matrix()
    rel = float(np.max(np.abs(res.omega3 - ref)) / np.max(np.abs(ref)))
    cols = ["t_re", "t_im", "omega3_rel_err", "fit_residual"]
    _with_output(cfg, cols, [[cfg.t.real, cfg.t.imag, rel, res.fit_residual]])
    return 0


def cmd_conformal(cfg: RunConfig) -> int:
    lam = cfg.lam or conformal.mid_sector_lambda(cfg.t)
    ctx = conformal.build_sector_context(cfg.t, lam)
    inst = conformal.log_x_inst_beta_vee(ctx, cfg.budget())
    logx = conformal.log_conformal_x_beta_vee(cfg.t, lam, cfg.budget())
    sec = conformal.sector_of(cfg.t, lam)
    cols = [
        "t_re", "t_im", "lam_re", "lam_im",
        "sector_side", "sector_k", "b_sign",
        "log_x_re", "log_x_im", "log_x_inst_re", "log_x_inst_im", "tail_bound",
    ]
    _with_output(
        cfg,
        cols,
        [
            [
                cfg.t.real, cfg.t.imag, lam.real, lam.imag,
                sec.side, sec.k, ctx.b_sign,
                logx.real, logx.imag,
                inst.value.real, inst.value.imag, inst.tail_bound,
            ]
        ],
    )
    return 0


def cmd_conjecture(cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    pts = []
    if cfg.lam:
        pts.append((cfg.t, cfg.lam))
    else:
        n_points = int(cfg.extra.get("points", 10))
        for _ in range(n_points):
            t = complex(rng.uniform(-0.45, 0.45), rng.uniform(0.3, 1.5))
            lam = conformal.mid_sector_lambda(t, radius=float(rng.uniform(0.4, 1.6)))
            pts.append((t, lam))
    cols = [
        "t_re", "t_im", "lam_re", "lam_im",
        "relative_residual", "relative_residual_literal_constant",
        "predicted_literal_mismatch",
    ]
    rows = []
    for t, lam in pts:
        r = conformal.conjecture_residual(t, lam, cfg.budget())
        rows.append(
            [
                t.real, t.imag, lam.real, lam.imag,
                r["relative_residual"],
                r["relative_residual_literal_constant"],
                r["predicted_literal_mismatch"],
            ]
        )
    _with_output(cfg, cols, rows)
    return 0


def cmd_qdilog(cfg: RunConfig) -> int:
    lam = cfg.lam or 0.7j
    lc = lam / (2.0 * math.pi)
    h = specfn.quantum_dilog_h(cfg.t, specfn.OmegaPair(lc, 1.0), cfg.budget())
    qc = specfn.q_correction(cfg.t, 1.0, -lam)
    ts = [cfg.t + lc * s for s in np.linspace(0.0, 1.0, 40)]
    vals = specfn.f_non_pert_path(lam, ts, cfg.budget())
    res = vals[-1] - vals[0] + specfn.log_quantum_dilog_h(
        cfg.t, specfn.OmegaPair(lc, 1.0), cfg.budget()
    )
    cols = [
        "t_re", "t_im", "lam_re", "lam_im",
        "H_re", "H_im", "Q_H_re", "Q_H_im", "diffeq_residual",
    ]
    _with_output(
        cfg,
        cols,
        [
            [
                cfg.t.real, cfg.t.imag, lam.real, lam.imag,
                h.real, h.imag, qc.real, qc.imag, abs(res),
            ]
        ],
    )
    return 0


def cmd_verify_all(cfg: RunConfig) -> int:
    results = acceptance.run_all(cfg.budget())
    report = {
        "schema": SCHEMA_VERSION,
        "command": "verify-all",
        "seed": cfg.seed,
        "config": {
            "series_tol": cfg.series_tol,
            "quad_tol": cfg.quad_tol,
            "max_terms": cfg.max_terms,
            "r_scale": cfg.r_scale,
            "theta_delta": cfg.theta_delta,
            "cutoff": _fmt_complex(cfg.cutoff),
        },
        "cases": [
            {
                "suite": r.suite,
                "case": r.case,
                "measured": _fmt(r.measured),
                "tolerance": _fmt(r.tolerance),
                "pass": r.passed,
                "note": r.note,
            }
            for r in results
        ],
        "passed": int(sum(r.passed for r in results)),
        "total": len(results),
    }
    for r in results:
        print(r.line())
    print(f"{report['passed']}/{report['total']} criteria cases passed")
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=1)
            f.write("\n")
    return 0 if report["passed"] == report["total"] else 1


COMMANDS = {
    "periods": cmd_periods,
    "metric": cmd_metric,
    "ov-compare": cmd_ov_compare,
    "twistor-check": cmd_twistor_check,
    "conformal": cmd_conformal,
    "conjecture": cmd_conjecture,
    "qdilog": cmd_qdilog,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="conifoldhk",
        description="Resolved-conifold hyperkahler geometry and quantum "
        "dilogarithm verification toolkit",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--t", type=str, default=None, help="complex modulus, e.g. 0.3+0.8j")
        p.add_argument("--lambda", dest="lam", type=str, default=None)
        p.add_argument("--theta-beta", type=float, default=None)
        p.add_argument("--theta-beta-vee", type=float, default=None)
        p.add_argument("--theta-delta", type=float, default=None)
        p.add_argument("--grid", type=str, default=None, help="re0:re1:n,im0:im1:m")
        p.add_argument("--budget-series-tol", type=float, default=None)
        p.add_argument("--budget-quad-tol", type=float, default=None)
        p.add_argument("--budget-max-terms", type=int, default=None)
        p.add_argument("--r-scale", type=float, default=None)
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--points", type=int, default=None, help="panel size (conjecture)")
        p.add_argument("--kmax", type=int, default=None, help="depth of the t -> 0 ladder (ov-compare)")
    return ap


def _load_config_defaults() -> dict:
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    defaults = _load_config_defaults()
    for key, value in defaults.items():
        if hasattr(cfg, key):
            setattr(cfg, key, value)
    if args.t is not None:
        cfg.t = _parse_complex(args.t)
    if args.lam is not None:
        cfg.lam = _parse_complex(args.lam)
    for src, dst in (
        ("theta_beta", "theta_beta"),
        ("theta_beta_vee", "theta_beta_vee"),
        ("theta_delta", "theta_delta"),
        ("grid", "grid"),
        ("budget_series_tol", "series_tol"),
        ("budget_quad_tol", "quad_tol"),
        ("budget_max_terms", "max_terms"),
        ("r_scale", "r_scale"),
        ("fmt", "fmt"),
        ("out", "out"),
        ("seed", "seed"),
    ):
        val = getattr(args, src, None)
        if val is not None:
            setattr(cfg, dst, val)
    for opt in ("points", "kmax"):
        val = getattr(args, opt, None)
        if val is not None:
            cfg.extra[opt] = val
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        return COMMANDS[args.command](cfg)
    except BudgetError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 3
    except (DomainError, ConifoldError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
