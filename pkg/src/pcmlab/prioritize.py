"""Priority vector derivation from a pairwise comparison matrix.

Five procedures: the principal right eigenvector (rev), logarithmic least
squares / row geometric means (llsm), simple normalized column sums (sncs),
and two optimization-based procedures (lua, srdm) solved by a small BFGS
descent in log coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, MatrixError, OptimizerError
from .matrix import PairwiseComparisonMatrix, PriorityVector

METHODS = ("rev", "llsm", "lua", "srdm", "sncs")


@dataclass(frozen=True)
class OptimizerSettings:
    """Budget and tolerances for the descent-based procedures."""

    tolerance: float = 1e-14
    max_iterations: int = 10_000
    restarts: int = 2

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise MatrixError("optimizer tolerance must be positive")
        if self.max_iterations < 1:
            raise MatrixError("optimizer needs at least one iteration")
        if not 1 <= self.restarts <= 2:
            raise MatrixError("restart count must be 1 or 2")


def rev_priority(
    m: PairwiseComparisonMatrix,
    *,
    tol: float = 1e-13,
    max_iterations: int = 10_000,
) -> tuple[PriorityVector, float]:
    """Normalized principal right eigenvector and its eigenvalue.

    Power method with repeated matrix squaring: the iterate after k rounds
    is the normalized row-sum vector of A^(2^k), so convergence is reached
    in a handful of rounds. Applies to reciprocal and arbitrary positive
    matrices alike. Raises ConvergenceError (carrying the last iterate) if
    the residual cannot be brought below 1e-10.
    """
    a = m.entries
    b = a / a.max()
    y = b.sum(axis=1)
    w = y / y.sum()
    converged = False
    for _ in range(min(max_iterations, 64)):
        b = b @ b
        peak = b.max()
        if not np.isfinite(peak) or peak <= 0.0:
            break
        b = b / peak
        y = b.sum(axis=1)
        nxt = y / y.sum()
        if np.max(np.abs(nxt - w)) < tol:
            w = nxt
            converged = True
            break
        w = nxt
    lam = float((a @ w).sum())
    residual = float(np.max(np.abs(a @ w - lam * w)))
    if not converged or residual > 1e-10:
        raise ConvergenceError(
            f"power iteration stalled (residual {residual:.3e})",
            last_vector=w,
            lambda_estimate=lam,
        )
    return PriorityVector(w), lam


def llsm_priority(m: PairwiseComparisonMatrix) -> PriorityVector:
    """Row geometric means, normalized; the closed-form log-least-squares fit."""
    gm = np.exp(np.mean(np.log(m.entries), axis=1))
    return PriorityVector(gm)


def sncs_priority(m: PairwiseComparisonMatrix) -> PriorityVector:
    """Average of column-normalized entries per row."""
    a = m.entries
    return PriorityVector(np.mean(a / a.sum(axis=0), axis=1))


def lua_objective(m: PairwiseComparisonMatrix, w) -> float:
    """Sum over rows of ln^2 of the row-aggregation ratio (A w)_i / (n w_i)."""
    v = w.values if isinstance(w, PriorityVector) else np.asarray(w, dtype=float)
    r = (m.entries @ v) / (m.n * v)
    lr = np.log(r)
    return float(lr @ lr)


def srdm_objective(m: PairwiseComparisonMatrix, w) -> float:
    """Sum over rows of squared relative deviation of (A w)_i / (n w_i) from 1."""
    v = w.values if isinstance(w, PriorityVector) else np.asarray(w, dtype=float)
    r = (m.entries @ v) / (m.n * v)
    return float((r - 1.0) @ (r - 1.0))


def _lua_fun_grad(a: np.ndarray, n: int, x: np.ndarray) -> tuple[float, np.ndarray]:
    w = np.exp(x)
    s = a @ w
    r = s / (n * w)
    lr = np.log(r)
    f = float(lr @ lr)
    g = 2.0 * w * (a.T @ (lr / s)) - 2.0 * lr
    return f, g


def _srdm_fun_grad(a: np.ndarray, n: int, x: np.ndarray) -> tuple[float, np.ndarray]:
    w = np.exp(x)
    s = a @ w
    r = s / (n * w)
    d = r - 1.0
    f = float(d @ d)
    g = (2.0 / n) * w * (a.T @ (d / w)) - 2.0 * d * r
    return f, g


def _scaled_gnorm(x: np.ndarray, g: np.ndarray) -> float:
    # Gradient with respect to the normalized weights: the objectives are
    # invariant under shifting x, so d/dw_i at w = exp(x)/sum(exp(x)) equals
    # g_i / w_i. This is the quantity finite differences on the simplex see.
    w = np.exp(x - np.max(x))
    return float(np.max(np.abs(g) * (w.sum() / w)))


def _bfgs(fun_grad, x0: np.ndarray, tolerance: float, max_iterations: int):
    """Descend until the scaled gradient is small or the objective stalls.

    Backtracking Armijo line search with a BFGS inverse-Hessian update.
    The objectives here are invariant under adding a constant to x, so the
    gradient always sums to zero and the flat direction is never explored.
    Final accuracy is left to the Newton polish.
    """
    x = x0.copy()
    f, g = fun_grad(x)
    dim = x.size
    eye = np.eye(dim)
    h = eye.copy()
    for _ in range(max_iterations):
        if _scaled_gnorm(x, g) <= 1e-6:
            break
        p = -(h @ g)
        slope = float(p @ g)
        if slope >= 0.0:
            h = eye.copy()
            p = -g
            slope = -float(g @ g)
        step = 1.0
        fn, gn, xn = f, g, x
        ok = False
        while step > 1e-18:
            xn = x + step * p
            fn, gn = fun_grad(xn)
            if np.isfinite(fn) and fn <= f + 1e-4 * step * slope:
                ok = True
                break
            step *= 0.5
        if not ok:
            break
        s = xn - x
        y = gn - g
        sy = float(s @ y)
        if sy > 1e-14 * math.sqrt(float(s @ s) * float(y @ y)):
            rho = 1.0 / sy
            left = eye - rho * np.outer(s, y)
            h = left @ h @ left.T + rho * np.outer(s, s)
        stalled = abs(f - fn) <= tolerance * max(1.0, abs(f))
        x, f, g = xn, fn, gn
        if stalled:
            break
    return x, f, g


def _newton_polish(fun_grad, x: np.ndarray, f: float, g: np.ndarray, rounds: int = 6):
    """Drive the gradient itself to zero with damped Newton steps.

    Root-finding on the gradient is not limited by the resolution of the
    objective value, which is what stalls a line-search descent near the
    minimum. The Hessian's null direction (a constant shift of x) is filled
    with a rank-one term; any step along it leaves the weights unchanged.
    """
    n = x.size
    h = 1e-6
    gnorm = _scaled_gnorm(x, g)
    for _ in range(rounds):
        if gnorm <= 1e-9:
            break
        hess = np.empty((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            _, gp = fun_grad(x + e)
            _, gm = fun_grad(x - e)
            hess[:, j] = (gp - gm) / (2.0 * h)
        hess = 0.5 * (hess + hess.T)
        fill = max(abs(float(np.trace(hess))) / n, 1.0) / n
        try:
            delta = np.linalg.solve(hess + fill * np.ones((n, n)), -g)
        except np.linalg.LinAlgError:
            break
        improved = False
        for scale in (1.0, 0.5, 0.25):
            xn = x + scale * delta
            fn, gn = fun_grad(xn)
            gnn = _scaled_gnorm(xn, gn)
            if np.isfinite(fn) and gnn < gnorm and fn <= f + 1e-12:
                x, f, g, gnorm = xn, fn, gn, gnn
                improved = True
                break
        if not improved:
            break
    return x, f, gnorm


def _solve_log_descent(m, fun_grad_impl, opt: OptimizerSettings, label: str):
    a = m.entries
    n = m.n

    def fun_grad(x):
        return fun_grad_impl(a, n, x)

    starts = [np.log(llsm_priority(m).values), np.zeros(n)]
    best = None
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for x0 in starts[: opt.restarts]:
            x, f, g = _bfgs(fun_grad, x0, opt.tolerance, opt.max_iterations)
            x, f, gnorm = _newton_polish(fun_grad, x, f, g)
            if best is None or f < best[1]:
                best = (x, f, gnorm)
    x, f, gnorm = best
    w = np.exp(x - np.max(x))
    if gnorm > 1e-7:
        raise OptimizerError(
            f"{label} descent did not converge (scaled gradient {gnorm:.3e})",
            best_vector=w / w.sum(),
            best_objective=f,
        )
    return PriorityVector(w), float(f)


def lua_priority(
    m: PairwiseComparisonMatrix, opt: OptimizerSettings | None = None
) -> tuple[PriorityVector, float]:
    """Minimizer of the logarithmic utility objective and its attained value."""
    return _solve_log_descent(m, _lua_fun_grad, opt or OptimizerSettings(), "lua")


def srdm_priority(
    m: PairwiseComparisonMatrix, opt: OptimizerSettings | None = None
) -> tuple[PriorityVector, float]:
    """Minimizer of the squared relative differences objective and its value."""
    return _solve_log_descent(m, _srdm_fun_grad, opt or OptimizerSettings(), "srdm")


def prioritize(
    m: PairwiseComparisonMatrix,
    method: str,
    opt: OptimizerSettings | None = None,
) -> PriorityVector:
    """Dispatch to one of the five procedures, returning only the vector."""
    if method == "rev":
        return rev_priority(m)[0]
    if method == "llsm":
        return llsm_priority(m)
    if method == "sncs":
        return sncs_priority(m)
    if method == "lua":
        return lua_priority(m, opt)[0]
    if method == "srdm":
        return srdm_priority(m, opt)[0]
    raise MatrixError(f"unknown prioritization method {method!r}")
