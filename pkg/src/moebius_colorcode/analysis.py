"""Fits of logical failure rates: low-p power law and threshold crossing.

Low-p ansatz (natural logs throughout)::

    P_fail = beta * (N p) ** (alpha d + gamma)

so that ``log P = G(d) log p + A(d)`` with ``G = alpha d + gamma`` and
``A = (alpha d + gamma) log N + log beta``.

Threshold form::

    P_fail = A x**2 + B x + C,    x = (p - p_c) d ** (1 / nu0)
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .noise import MCResult

DISCARD_THRESHOLD = 5e-6
DEFAULT_WINDOW = (0.07, 0.11)
DEFAULT_INIT = (0.09, 1.5)


class FitError(ValueError):
    pass


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Ordinary least squares; returns (slope, intercept, r^2)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise FitError("linear fit needs at least two (x, y) points")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0.0:
        raise FitError("linear fit needs at least two distinct x values")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - slope * x - intercept) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r2


@dataclass
class PerDistance:
    d: int
    G: float
    A: float
    r2: float
    n_points: int


@dataclass
class LowPFit:
    alpha: float
    gamma: float
    N: float
    beta: float
    per_d: list[PerDistance]
    discard_threshold: float
    discarded_points: list[tuple[int, float]] = field(default_factory=list)
    alpha_stderr: float = float("nan")

    def predict(self, d: int, p: float) -> float:
        return self.beta * (self.N * p) ** (self.alpha * d + self.gamma)

    def to_dict(self) -> dict:
        return {
            "params": {"alpha": self.alpha, "gamma": self.gamma, "N": self.N, "beta": self.beta,
                       "alpha_stderr": self.alpha_stderr},
            "per_d": [asdict(x) for x in self.per_d],
            "discard_threshold": self.discard_threshold,
            "discarded_points": [list(x) for x in self.discarded_points],
        }


def _points(data: Iterable) -> list[tuple[int, float, float, float | None]]:
    out = []
    for r in data:
        if isinstance(r, MCResult):
            out.append((r.d, r.p, r.p_fail, r.stderr))
        else:
            d, p, pf, *rest = r
            out.append((int(d), float(p), float(pf), rest[0] if rest else None))
    return out


def fit_lowp(data: Iterable, discard_threshold: float = DISCARD_THRESHOLD) -> LowPFit:
    """Fit the low-p ansatz.  ``data`` holds MCResults or (d, p, p_fail) tuples."""
    pts = _points(data)
    kept: dict[int, list[tuple[float, float]]] = {}
    discarded = []
    for d, p, pf, _ in pts:
        if pf < discard_threshold or pf <= 0.0:
            discarded.append((d, p))
            continue
        kept.setdefault(d, []).append((p, pf))
    if not kept:
        raise FitError("every point lies below the discard threshold")
    per_d = []
    for d in sorted({d for d, *_ in pts}):
        rows = kept.get(d, [])
        if len({p for p, _ in rows}) < 3:
            raise FitError(f"d={d}: need >= 3 distinct p values above the discard threshold, have {len(rows)}")
        g, a, r2 = linear_fit([math.log(p) for p, _ in rows], [math.log(pf) for _, pf in rows])
        if g <= 0.0:
            raise FitError(f"d={d}: non-positive gradient {g:.4g}")
        per_d.append(PerDistance(d, g, a, r2, len(rows)))
    if len(per_d) < 3:
        raise FitError(f"need >= 3 distances, have {len(per_d)}")
    ds = np.array([x.d for x in per_d], dtype=float)
    gs = np.array([x.G for x in per_d])
    alpha, gamma, _ = linear_fit(ds, gs)
    resid = gs - (alpha * ds + gamma)
    dof = len(ds) - 2
    alpha_se = math.sqrt(np.sum(resid**2) / dof / np.sum((ds - ds.mean()) ** 2)) if dof > 0 else float("nan")
    slope_a, icpt_a, _ = linear_fit(ds, [x.A for x in per_d])
    log_n = slope_a / alpha
    log_beta = icpt_a - gamma * log_n
    return LowPFit(alpha, gamma, math.exp(log_n), math.exp(log_beta), per_d, discard_threshold,
                   discarded, alpha_se)


@dataclass
class ThresholdFit:
    p_c: float
    nu0: float
    A: float
    B: float
    C: float
    window: tuple[float, float]
    residual: float
    iterations: int
    residual_trace: list[float] = field(default_factory=list)

    def predict(self, d: int, p: float) -> float:
        x = (p - self.p_c) * d ** (1.0 / self.nu0)
        return self.A * x * x + self.B * x + self.C

    def to_dict(self) -> dict:
        return {
            "params": {"p_c": self.p_c, "nu0": self.nu0, "A": self.A, "B": self.B, "C": self.C},
            "residual": self.residual,
            "window": list(self.window),
            "iterations": self.iterations,
        }


def _crossing_model(theta, d, p):
    p_c, nu0, a, b, c = theta
    x = (p - p_c) * d ** (1.0 / nu0)
    return a * x * x + b * x + c


def _crossing_jacobian(theta, d, p):
    p_c, nu0, a, b, c = theta
    s = d ** (1.0 / nu0)
    x = (p - p_c) * s
    dfdx = 2 * a * x + b
    jac = np.empty((d.size, 5))
    jac[:, 0] = -dfdx * s
    jac[:, 1] = dfdx * x * (-np.log(d) / nu0**2)
    jac[:, 2] = x * x
    jac[:, 3] = x
    jac[:, 4] = 1.0
    return jac


def levenberg_marquardt(fun, jac, theta0, weights, max_iter=1000, tol=1e-10):
    """Damped Gauss-Newton on a weighted sum of squares.

    Only steps that lower the residual are accepted, so the returned trace is
    non-increasing.  Returns ``(theta, residual, iterations, trace, converged)``.
    """
    theta = np.asarray(theta0, dtype=float)
    sw = np.sqrt(weights)
    r = sw * fun(theta)
    cost = float(r @ r)
    lam = 1e-3
    trace = [cost]
    for it in range(1, max_iter + 1):
        j = sw[:, None] * jac(theta)
        jtj = j.T @ j
        g = j.T @ r
        while True:
            a = jtj + lam * np.diag(np.maximum(np.diag(jtj), 1e-12))
            try:
                step = -np.linalg.solve(a, g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            trial = theta + step
            rt = sw * fun(trial)
            ct = float(rt @ rt)
            if np.isfinite(ct) and ct <= cost:
                theta, r, cost = trial, rt, ct
                lam = max(lam / 3, 1e-15)
                trace.append(cost)
                break
            lam *= 4
            if lam > 1e16:
                return theta, cost, it, trace, True
        if np.max(np.abs(step)) <= tol * (1 + np.max(np.abs(theta))):
            return theta, cost, it, trace, True
    return theta, cost, max_iter, trace, False


def fit_threshold(data: Iterable, init: tuple[float, float] = DEFAULT_INIT,
                  window: tuple[float, float] = DEFAULT_WINDOW, max_iter: int = 1000,
                  tol: float = 1e-10) -> ThresholdFit:
    """Fit the quadratic finite-size crossing to points inside ``window``."""
    pts = [x for x in _points(data) if window[0] <= x[1] <= window[1]]
    if len({d for d, *_ in pts}) < 3:
        raise FitError("threshold fit needs >= 3 distinct distances inside the window")
    d = np.array([x[0] for x in pts], dtype=float)
    p = np.array([x[1] for x in pts])
    y = np.array([x[2] for x in pts])
    se = [x[3] for x in pts]
    if all(s is not None and s > 0 for s in se):
        w = 1.0 / np.asarray(se, dtype=float) ** 2
        w = w / w.mean()
    else:
        w = np.ones_like(y)
    p_c0, nu0 = init
    x0 = (p - p_c0) * d ** (1.0 / nu0)
    quad = np.polyfit(x0, y, 2, w=np.sqrt(w))
    theta0 = np.array([p_c0, nu0, *quad])
    theta, cost, it, trace, ok = levenberg_marquardt(
        lambda t: _crossing_model(t, d, p) - y, lambda t: _crossing_jacobian(t, d, p),
        theta0, w, max_iter, tol)
    if not ok:
        raise FitError(f"threshold fit did not converge in {max_iter} iterations; residual trace tail {trace[-5:]}")
    p_c, nu, a, b, c = (float(v) for v in theta)
    if not window[0] < p_c < window[1]:
        raise FitError(f"fitted p_c={p_c:.4g} falls outside the window {window}")
    return ThresholdFit(p_c, nu, a, b, c, tuple(window), cost, it, trace)


def read_mc_csv(path) -> list[MCResult]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return [MCResult.from_csv_row(r) for r in csv.DictReader(lines)]
