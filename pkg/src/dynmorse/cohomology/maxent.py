"""Large-deviations entropy of the product model as a maximum-entropy problem.

    b^l(c) = max { -sum_j p_j ln p_j : sum_j p_j d_j = l, sum_j p_j v_j = c }

over probability vectors p on the basis classes.  Interior targets are solved
through the Gibbs dual (p_j proportional to exp(lambda . (d_j, v_j))) by
damped Newton; targets on a face of the convex hull of the class points are
reduced to the classes on that face first, since the dual has no finite
minimizer there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog, minimize_scalar
from scipy.spatial import ConvexHull
from scipy.special import logsumexp

from .spec import MoleculeSpec

NEG_INF = float("-inf")
FACE_TOL = 1e-9
GRAD_TOL = 1e-12


@dataclass
class MaxEntResult:
    value: float
    p: np.ndarray | None = None
    multipliers: np.ndarray | None = None
    residual: float = math.nan
    iterations: int = 0
    face: str = "interior"

    @property
    def feasible(self) -> bool:
        return self.value != NEG_INF


def _newton_dual(Y: np.ndarray, max_iter: int = 200) -> tuple[np.ndarray, np.ndarray, int]:
    """Minimize log sum_j exp(lam . Y_j) for points Y centred at the target."""
    k = Y.shape[1]
    lam = np.zeros(k)

    def dual(l):
        return float(logsumexp(Y @ l))

    g_val = dual(lam)
    for it in range(1, max_iter + 1):
        z = Y @ lam
        p = np.exp(z - logsumexp(z))
        grad = p @ Y
        if np.abs(grad).max() <= GRAD_TOL:
            return lam, p, it
        hess = (Y * p[:, None]).T @ Y - np.outer(grad, grad)
        try:
            step = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(hess, grad, rcond=None)[0]
        slope = float(grad @ step)
        if slope >= 0:
            step, slope = -grad, -float(grad @ grad)
        alpha = 1.0
        for _ in range(60):
            trial = dual(lam + alpha * step)
            if trial <= g_val + 1e-4 * alpha * slope:
                break
            alpha *= 0.5
        lam = lam + alpha * step
        g_val = dual(lam)
    z = Y @ lam
    return lam, np.exp(z - logsumexp(z)), max_iter


def _entropy(p: np.ndarray) -> float:
    pos = p[p > 0]
    return float(-(pos * np.log(pos)).sum())


def _solve_on(points: np.ndarray, members: np.ndarray, target: np.ndarray, face: str) -> MaxEntResult:
    """Max-entropy over the classes ``members`` whose points span the relevant face."""
    B = len(points)
    sub = points[members]
    centre = sub.mean(axis=0)
    _, sv, vt = np.linalg.svd(sub - centre, full_matrices=False)
    rank = int((sv > 1e-12 * max(1.0, sv[0] if len(sv) else 1.0)).sum())
    p = np.zeros(B)
    if rank == 0:
        p[members] = 1.0 / len(members)
        return MaxEntResult(math.log(len(members)), p, np.zeros(0), float(np.abs(p @ points - target).max()), 0, face)
    basis = vt[:rank]
    Y = (sub - target) @ basis.T
    lam, q, iters = _newton_dual(Y)
    p[members] = q
    resid = float(np.abs(p @ points - target).max())
    return MaxEntResult(_entropy(p), p, lam, resid, iters, face)


def class_points(spec: MoleculeSpec) -> np.ndarray:
    return np.array([[c.degree, float(c.level)] for c in spec.classes], dtype=float)


@lru_cache(maxsize=64)
def _geometry(spec: MoleculeSpec):
    """Class points, affine rank and (for rank 2) the hull facets with unit normals."""
    pts = class_points(spec)
    sv = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    rank = int((sv > 1e-12).sum())
    if rank < 2:
        return pts, rank, None, None
    hull = ConvexHull(np.unique(pts, axis=0))
    scale = np.linalg.norm(hull.equations[:, :2], axis=1)
    return pts, rank, hull.equations[:, :2] / scale[:, None], hull.equations[:, 2] / scale


def _maxent_1d(points: np.ndarray, members: np.ndarray, target: np.ndarray, face: str) -> MaxEntResult:
    sub = points[members]
    centre = sub.mean(axis=0)
    _, sv, vt = np.linalg.svd(sub - centre, full_matrices=False)
    u = vt[0]
    normal = np.array([-u[1], u[0]])
    if abs((target - centre) @ normal) > FACE_TOL:
        return MaxEntResult(NEG_INF, face="infeasible")
    t = (sub - centre) @ u
    tx = float((target - centre) @ u)
    lo, hi = t.min(), t.max()
    if tx < lo - FACE_TOL or tx > hi + FACE_TOL:
        return MaxEntResult(NEG_INF, face="infeasible")
    for end, name in ((lo, "vertex"), (hi, "vertex")):
        if abs(tx - end) <= FACE_TOL:
            at = members[np.abs(t - end) <= FACE_TOL]
            return _solve_on(points, at, target, name)
    return _solve_on(points, members, target, face)


def maxent(spec: MoleculeSpec, ell: float, c: float) -> MaxEntResult:
    """Full solution record (value, class distribution, multipliers, residual)."""
    pts, rank, normals, offsets = _geometry(spec)
    target = np.array([float(ell), float(c)])
    allm = np.arange(len(pts))
    if rank == 0:
        if np.abs(target - pts[0]).max() <= FACE_TOL:
            return _solve_on(pts, allm, target, "vertex")
        return MaxEntResult(NEG_INF, face="infeasible")
    if rank == 1:
        return _maxent_1d(pts, allm, target, "segment")

    signed = normals @ target + offsets
    if signed.max() > FACE_TOL:
        return MaxEntResult(NEG_INF, face="infeasible")
    on = np.flatnonzero(np.abs(signed) <= FACE_TOL)
    if on.size:
        e = on[0]
        dist = np.abs(pts @ normals[e] + offsets[e])
        members = np.flatnonzero(dist <= FACE_TOL)
        return _maxent_1d(pts, members, target, "edge")
    return _solve_on(pts, allm, target, "interior")


def entropy_asymptotic(spec: MoleculeSpec, ell: float, c: float) -> float:
    """Per-site exponential growth rate b^l(c); -inf outside the convex hull."""
    return maxent(spec, ell, c).value


def _feasible_range(spec: MoleculeSpec, fixed_axis: int, value: float) -> tuple[float, float] | None:
    """Range of the other coordinate over the hull at ``coord[fixed_axis] == value``."""
    pts = class_points(spec)
    free = 1 - fixed_axis
    A_eq = np.vstack([np.ones(len(pts)), pts[:, fixed_axis]])
    b_eq = np.array([1.0, value])
    out = []
    for sign in (1.0, -1.0):
        res = linprog(sign * pts[:, free], A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status != 0:
            return None
        out.append(float(pts[:, free] @ res.x))
    return out[0], out[1]


def _max_along(f, lo: float, hi: float) -> tuple[float, float]:
    if hi - lo <= 1e-12:
        x = 0.5 * (lo + hi)
        return f(x), x
    res = minimize_scalar(lambda x: -f(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    cands = [(f(lo), lo), (f(hi), hi), (-res.fun, float(res.x))]
    return max(cands)


def betti_sum_entropy(spec: MoleculeSpec, c: float) -> float:
    """sup over l of b^l(c), by a bounded concave line search in l."""
    rng = _feasible_range(spec, 1, float(c))
    if rng is None:
        return NEG_INF
    lo, hi = rng
    value, _ = _max_along(lambda l: entropy_asymptotic(spec, l, c), lo, hi)
    return value


def box_entropy(spec: MoleculeSpec, ell: float, nu: float, c: float, delta: float) -> float:
    """max of b over the closed box [l-nu, l+nu] x [c-delta, c+delta]."""
    pts = class_points(spec)
    centroid = pts.mean(axis=0)
    box = [(ell - nu, ell + nu), (c - delta, c + delta)]
    if all(lo <= x <= hi for x, (lo, hi) in zip(centroid, box)):
        return math.log(spec.B)
    # concave objective with its maximizer outside the box: optimum sits on the box boundary
    best = NEG_INF
    for axis in (0, 1):
        for side in box[axis]:
            rng = _feasible_range(spec, axis, side)
            if rng is None:
                continue
            lo = max(rng[0], box[1 - axis][0])
            hi = min(rng[1], box[1 - axis][1])
            if lo > hi + FACE_TOL:
                continue
            hi = max(hi, lo)
            if axis == 0:
                f = lambda y, s=side: entropy_asymptotic(spec, s, y)
            else:
                f = lambda x, s=side: entropy_asymptotic(spec, x, s)
            val, _ = _max_along(f, lo, hi)
            best = max(best, val)
    return best
