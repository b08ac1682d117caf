"""Experiment drivers behind the command-line interface.

Each ``cmd_*`` function is a pure function of its arguments (seeds included)
and returns an :class:`ExperimentReport` whose CSV rendering is byte-stable
apart from the timestamp comment line.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import math
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError
from .majorant import (
    boundary_seminorm,
    fast_constant,
    interior_seminorm,
    power,
    slow_constant,
)
from .maps import boundary_map
from .operator import residual_sup
from .solver import SolverConfig, difference_quotient, solve
from .special import gamma, hyp2f1

__all__ = [
    "ExperimentReport",
    "kalaj_constant",
    "ladder_verdict",
    "richardson_limit",
    "cmd_heinz",
    "cmd_kalaj_constant",
    "cmd_kalaj",
    "cmd_hardy_littlewood",
    "cmd_gradient_bound",
    "cmd_residual",
    "cmd_selftest",
    "HEINZ_MARGIN",
]

HEINZ_MARGIN = 0.02
CENTER_TOL = 1e-8
DEFAULT_HEINZ_LADDER = (0.9, 0.99, 0.999)
DEFAULT_HL_LADDER = (0.9, 0.99, 0.999)
DEFAULT_GRADIENT_LADDER = (0.5, 0.9, 0.99, 0.999)


def _git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent, capture_output=True, text=True, timeout=5,
        )
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, np.ndarray):
        return " ".join(format(float(c), ".17g") for c in v)
    if v is None:
        return ""
    return str(v)


@dataclass
class ExperimentReport:
    """Table of result rows plus run metadata.

    Rendered as CSV: ``# key=value`` comment lines (metadata, verdict,
    summary), then a header row and one line per row, floats with 17
    significant digits, LF line endings.
    """

    command: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    verdict: bool | None = None

    def __post_init__(self):
        self.metadata.setdefault("version", __version__)
        self.metadata.setdefault("git", _git_describe())
        self.metadata.setdefault(
            "timestamp", _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))

    def add(self, **row) -> None:
        missing = set(self.columns) - set(row)
        if missing:
            raise ValueError(f"row lacks columns {sorted(missing)}")
        self.rows.append(row)

    def column(self, name: str) -> list:
        return [r[name] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# command={self.command}\n")
        for k, v in self.metadata.items():
            buf.write(f"# {k}={_fmt(v)}\n")
        for k, v in self.summary.items():
            buf.write(f"# summary.{k}={_fmt(v)}\n")
        if self.verdict is not None:
            buf.write(f"# verdict={'PASS' if self.verdict else 'FAIL'}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(r[c]) for c in self.columns])
        return buf.getvalue()

    def digest(self) -> str:
        """SHA-256 of the CSV without the timestamp line."""
        text = "".join(line for line in self.to_csv().splitlines(keepends=True)
                       if not line.startswith("# timestamp="))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def to_text(self) -> str:
        """Fixed-width rendering for terminals."""
        cells = [[_fmt_short(r[c]) for c in self.columns] for r in self.rows]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(self.columns)]
        lines = ["  ".join(c.ljust(wd) for c, wd in zip(self.columns, widths))]
        lines += ["  ".join(v.ljust(wd) for v, wd in zip(row, widths)) for row in cells]
        for k, v in self.summary.items():
            lines.append(f"{k}: {_fmt_short(v)}")
        if self.verdict is not None:
            lines.append(f"verdict: {'PASS' if self.verdict else 'FAIL'}")
        return "\n".join(lines)


def _fmt_short(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".6g")
    if isinstance(v, np.ndarray):
        return "(" + ", ".join(format(float(c), ".4g") for c in v) + ")"
    return _fmt(v)


# ---------------------------------------------------------------------------
# helpers

def kalaj_constant(n: int) -> float:
    """Sharp Heinz-type constant for proper harmonic self-maps of the n-ball.

    ``n! [1 + n - (n-2) F(1/2, 1; (n+3)/2; -1)] / (2^(3n/2) Gamma((n+1)/2) Gamma((n+3)/2))``
    """
    if int(n) != n or n < 2:
        raise ConfigError(f"n must be an integer >= 2, got {n}")
    f = hyp2f1((0.5, 1.0, (n + 3) / 2), -1.0)
    return (gamma(n + 1) * (1 + n - (n - 2) * f)
            / (2.0 ** (1.5 * n) * gamma((n + 1) / 2) * gamma((n + 3) / 2)))


def richardson_limit(r_ladder, values) -> float:
    """Linear extrapolation to ``r = 1`` from the two points closest to the boundary.

    Assumes ``q(r) = q(1) + c (1 - r) + o(1 - r)``.
    """
    order = np.argsort(r_ladder)
    r1, r2 = (float(r_ladder[i]) for i in order[-2:])
    q1, q2 = (float(values[i]) for i in order[-2:])
    e1, e2 = 1.0 - r1, 1.0 - r2
    return (e1 * q2 - e2 * q1) / (e1 - e2)


def ladder_verdict(values, factor: float = 2.0, atol: float = 1e-9) -> bool:
    """No-growth rule: the value at the last rung is at most ``factor`` times the median.

    Values below ``atol`` count as exact zeros, so an identically vanishing
    ladder passes.
    """
    v = np.where(np.abs(values) <= atol, 0.0, np.asarray(values, dtype=float))
    return bool(v[-1] <= factor * float(np.median(v)))


def _directions(n: int, count: int, seed: int) -> np.ndarray:
    if n == 2:
        offset = np.random.default_rng(seed).uniform(0, 2 * np.pi / count)
        th = offset + 2 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(th), np.sin(th)])
    g = np.random.default_rng(seed).standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _check_ladder(ladder) -> tuple[float, ...]:
    ladder = tuple(float(r) for r in ladder)
    if len(ladder) < 2 or any(not 0 < r < 1 for r in ladder):
        raise ConfigError("a ladder needs at least two radii in (0, 1)")
    if list(ladder) != sorted(ladder):
        raise ConfigError("ladder radii must be increasing")
    return ladder


def _eps_for(r_top: float) -> float:
    return min(1e-3, 1.0 - r_top)


# ---------------------------------------------------------------------------
# commands

def cmd_heinz(n: int, alpha: float, phi_name: str = "identity", r_ladder=DEFAULT_HEINZ_LADDER,
              zeta_count: int = 8, seed: int = 0, *, base_nodes: int = 64,
              node_growth: str = "graded", margin: float = HEINZ_MARGIN) -> ExperimentReport:
    """Boundary difference quotients of the solution for a unit-norm datum.

    ``alpha = 0`` compares against the sharp harmonic constant
    (:func:`kalaj_constant`), which presumes ``u(0) = 0`` (checked, up to
    ``CENTER_TOL``); ``alpha > n - 2`` compares against ``alpha/2 + 1 - n/2``
    with no centring assumption.
    Each direction's quotients are extrapolated to the boundary; the verdict
    is PASS when the smallest extrapolated value is at least the floor minus
    ``margin``.
    """
    if alpha == 0:
        branch, floor = "harmonic", kalaj_constant(n)
    elif alpha > n - 2:
        branch, floor = "weighted", alpha / 2 + 1 - n / 2
    else:
        raise ConfigError(f"heinz needs alpha = 0 or alpha > n - 2 = {n - 2}, got {alpha}")
    ladder = _check_ladder(r_ladder)
    phi = boundary_map(phi_name, n)
    if not phi.unit_norm:
        raise ConfigError(f"boundary map {phi_name!r} is not unit-norm")
    cfg = SolverConfig(n, alpha, base_nodes=base_nodes, node_growth=node_growth,
                       boundary_cap_epsilon=_eps_for(ladder[-1]), seed=seed)
    u = solve(phi, cfg)
    center = float(np.linalg.norm(u(np.zeros(n))))
    if branch == "harmonic" and center > CENTER_TOL:
        raise ConfigError(f"the alpha = 0 floor assumes u(0) = 0, but |u(0)| = {center:.3g} "
                          f"for {phi_name!r}")
    zetas = _directions(n, zeta_count, seed)
    cols = ["kind", "n", "alpha", "phi", "seed", "nodes", "policy", "zeta_index", "zeta",
            "r", "quotient", "extrapolated", "floor", "margin"]
    common = dict(n=n, alpha=float(alpha), phi=phi_name, seed=seed, nodes=base_nodes,
                  policy=node_growth, floor=floor)
    rep = ExperimentReport("heinz", cols, metadata=dict(
        n=n, alpha=float(alpha), seed=seed, phi=phi_name, node_policy=node_growth,
        nodes=base_nodes, branch=branch, r_ladder=" ".join(map(repr, ladder))))
    limits = []
    for i, z in enumerate(zetas):
        qs = [difference_quotient(phi, cfg, z, r, solution=u) for r in ladder]
        for r, q in zip(ladder, qs):
            rep.add(kind="sample", zeta_index=i, zeta=z, r=r, quotient=q,
                    extrapolated=None, margin=None, **common)
        lim = richardson_limit(ladder, qs)
        limits.append(lim)
        rep.add(kind="limit", zeta_index=i, zeta=z, r=1.0, quotient=None,
                extrapolated=lim, margin=lim - floor, **common)
    worst = min(limits)
    rep.summary = dict(floor=floor, min_extrapolated=worst, min_margin=worst - floor,
                       center_norm=center)
    rep.verdict = worst - floor >= -margin
    return rep


def cmd_kalaj_constant(n: int) -> float:
    return kalaj_constant(n)


def cmd_kalaj(n_values) -> ExperimentReport:
    """Table of :func:`kalaj_constant` over ``n_values``."""
    rep = ExperimentReport("kalaj", ["n", "constant"], metadata=dict(n=" ".join(map(str, n_values))))
    for n in n_values:
        rep.add(n=n, constant=kalaj_constant(n))
    return rep


def cmd_hardy_littlewood(n: int, alpha: float, beta: float, pairs: int = 4000,
                         r_ladder=DEFAULT_HL_LADDER, seed: int = 0, *,
                         phi_name: str = "holder", base_nodes: int = 32) -> ExperimentReport:
    """Interior versus boundary seminorm ladder for a Hoelder-``beta`` datum.

    ``alpha > 0`` checks that ``t^beta`` is fast; ``alpha = 0`` that it is
    slow. For each ``r_max`` the seminorm of the solution over the ball of
    radius ``r_max`` is divided by the boundary seminorm of the datum (used
    raw when the datum is constant). PASS when the last ratio is at most
    twice the ladder median.
    """
    if not 0 < beta < 1:
        raise ConfigError(f"beta must lie in (0, 1), got {beta}")
    if alpha < 0:
        raise ConfigError(f"alpha must be >= 0, got {alpha}")
    ladder = _check_ladder(r_ladder)
    w = power(beta)
    if alpha > 0:
        branch, const = "fast", fast_constant(w)
    else:
        branch, const = "slow", slow_constant(w)
    if not math.isfinite(const):
        raise ConfigError(f"t^{beta} is not a {branch} majorant")
    phi = boundary_map(phi_name, n, beta=beta)
    bnd = boundary_seminorm(phi, w, pairs, seed)
    cols = ["kind", "n", "alpha", "beta", "phi", "seed", "pairs", "nodes", "policy",
            "r_max", "seminorm", "ratio"]
    rep = ExperimentReport("hl", cols, metadata=dict(
        n=n, alpha=float(alpha), beta=beta, seed=seed, phi=phi_name, pairs=pairs,
        branch=branch, majorant_constant=const, r_ladder=" ".join(map(repr, ladder))))
    common = dict(n=n, alpha=float(alpha), beta=beta, phi=phi_name, seed=seed, pairs=pairs)
    rep.add(kind="boundary", nodes=None, policy=None, r_max=1.0, seminorm=bnd.value,
            ratio=None, **common)
    ratios = []
    for r_max in ladder:
        if n == 2:
            nodes = base_nodes * math.ceil(1.0 / (1.0 - r_max))
            cfg = SolverConfig(n, alpha, base_nodes=nodes, node_growth="fixed",
                               boundary_cap_epsilon=min(0.49, 1.0 - r_max))
        else:
            nodes = base_nodes
            cfg = SolverConfig(n, alpha, base_nodes=nodes, node_growth="graded",
                               boundary_cap_epsilon=min(0.49, 1.0 - r_max))
        u = solve(phi, cfg)
        est = interior_seminorm(u, w, r_max, pairs, seed, n=n)
        ratio = est.value / bnd.value if bnd.value > 0 else est.value
        ratios.append(ratio)
        rep.add(kind="interior", nodes=nodes, policy=cfg.node_growth, r_max=r_max,
                seminorm=est.value, ratio=ratio, **common)
    rep.summary = dict(boundary_seminorm=bnd.value, final_ratio=ratios[-1],
                       median_ratio=float(np.median(ratios)))
    rep.verdict = ladder_verdict(ratios)
    return rep


def cmd_gradient_bound(n: int, alpha: float, beta: float, r_ladder=DEFAULT_GRADIENT_LADDER,
                       seed: int = 0, *, phi_name: str = "holder", directions: int = 64,
                       base_nodes: int = 64) -> ExperimentReport:
    """Ladder of ``max_xi |grad u(r xi)| (1 - r) / (1 - r)^beta``.

    Directions are equally spaced on the circle (``n = 2``, which includes
    the kink of the Hoelder datum at ``e1`` only for ``seed``-offset 0, so
    ``e1`` is always added) or seeded uniform otherwise.
    """
    if not 0 < beta <= 1:
        raise ConfigError(f"beta must lie in (0, 1], got {beta}")
    if alpha < 0:
        raise ConfigError(f"alpha must be >= 0, got {alpha}")
    ladder = _check_ladder(r_ladder)
    w = power(beta)
    phi = boundary_map(phi_name, n, beta=beta)
    cfg = SolverConfig(n, alpha, base_nodes=base_nodes, node_growth="graded",
                       boundary_cap_epsilon=_eps_for(ladder[-1]), seed=seed)
    u = solve(phi, cfg)
    dirs = np.vstack([np.eye(n)[:1], _directions(n, directions, seed)])
    cols = ["n", "alpha", "beta", "phi", "seed", "directions", "r", "max_gradient",
            "argmax_direction", "scaled"]
    rep = ExperimentReport("gradbound", cols, metadata=dict(
        n=n, alpha=float(alpha), beta=beta, seed=seed, phi=phi_name, node_policy="graded",
        directions=directions, r_ladder=" ".join(map(repr, ladder))))
    scaled = []
    for r in ladder:
        norms = [np.linalg.norm(u.gradient(r * d), ord=2) for d in dirs]
        k = int(np.argmax(norms))
        val = norms[k] * (1.0 - r) / w(1.0 - r)
        scaled.append(val)
        rep.add(n=n, alpha=float(alpha), beta=beta, phi=phi_name, seed=seed,
                directions=directions, r=r, max_gradient=float(norms[k]),
                argmax_direction=dirs[k], scaled=val)
    rep.summary = dict(final=scaled[-1], median=float(np.median(scaled)))
    rep.verdict = ladder_verdict(scaled)
    return rep


def cmd_residual(n: int, alpha: float, phi_name: str = "one", grid_radius: float = 0.8,
                 grid_count: int = 25, h: float = 1e-3, *, base_nodes: int = 64,
                 node_growth: str = "graded", tol: float = 1e-4,
                 floor: float = 1e-6) -> ExperimentReport:
    """Operator residual of the solver output at steps ``h`` and ``h/2``.

    The refined run halves ``h`` and doubles every node count. PASS when the
    coarse residual is at most ``tol`` and, unless it is already below
    ``floor``, the refined residual is at most half of it.
    """
    phi = boundary_map(phi_name, n)
    cfg = SolverConfig(n, alpha, base_nodes=base_nodes, node_growth=node_growth, fd_step=h)
    fine = cfg.with_(base_nodes=2 * base_nodes, per_panel=2 * cfg.per_panel,
                     azimuth=2 * cfg.azimuth, fd_step=h / 2)
    cols = ["n", "alpha", "phi", "grid_radius", "grid_count", "policy", "nodes", "h", "residual"]
    rep = ExperimentReport("residual", cols, metadata=dict(
        n=n, alpha=float(alpha), phi=phi_name, seed=cfg.seed, node_policy=node_growth,
        grid_radius=grid_radius, grid_count=grid_count))
    res = []
    for c in (cfg, fine):
        val = residual_sup(phi, c, grid_radius, grid_count, c.fd_step)
        res.append(val)
        rep.add(n=n, alpha=float(alpha), phi=phi_name, grid_radius=grid_radius,
                grid_count=grid_count, policy=node_growth, nodes=c.base_nodes,
                h=c.fd_step, residual=val)
    ratio = res[1] / res[0] if res[0] > 0 else 0.0
    rep.summary = dict(residual=res[0], refined_residual=res[1], ratio=ratio)
    rep.verdict = res[0] <= tol and (res[0] <= floor or ratio <= 0.5)
    return rep


def cmd_selftest(perturb: float = 0.0) -> int:
    """Run the self-test table; print it and return the exit code (0 iff all pass).

    ``perturb`` scales the kernel constant by ``1 + perturb`` for the run, a
    mutation hook that must make the table fail.
    """
    from .selftest import run_selftest
    from .solver import perturbed_kernel_constant

    with perturbed_kernel_constant(perturb):
        rep = run_selftest()
    print(rep.to_text())
    return 0 if rep.verdict else 1
