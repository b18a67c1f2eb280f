"""Constraint data and the Newton machinery over scaled subspaces.

A conic problem pairs a cone with affine data in one of two forms:

* basis form: a pair (x0, s0) and an explicit basis of the subspace L, so
  the primal/dual affine sets are x0 + L and s0 + L-perp;
* operator form: maps/vectors (A, B, b, c, g) describing the same sets as
  ``s0 + L-perp = {c - Ay : By = g}`` and
  ``x0 + L = {x : A*x + B*z = b for some z}``.

For an interior scaling point w the relevant subspaces are
``L_w = Q(w^{-1/2}) L`` and ``L_w_perp = Q(w^{1/2}) L-perp``; the Newton
direction splits orthogonally as d = d1 - d2 across them, which also yields
computable divergence bounds (h_lb, h_ub), a guaranteed-descent step bound
t_max, and the scaling-dependent vector g_w that drives mu-selection.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import jordan
from .errors import (
    DegenerateConstraintsError,
    DomainError,
    IllConditionedBasisError,
    ProblemFormatError,
)
from .jordan import AlgebraElement, ConeDescriptor

__all__ = [
    "BasisForm",
    "OperatorForm",
    "ConicProblem",
    "ProjectorPair",
    "NewtonData",
    "scaled_projections",
    "newton_direction",
    "step_bound",
    "mu_candidates",
    "feasible_point",
    "duality_gap",
    "as_operator_form",
    "transform_problem",
    "affine_residuals",
]

# relative tolerance of the load-time basis rank check
_BASIS_RANK_TOL = 1e-10
# rank-loss threshold inside Gram-Schmidt
_MGS_RANK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BasisForm:
    """Affine data (x0, s0, basis of L)."""

    x0: AlgebraElement
    s0: AlgebraElement
    basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))


@dataclass(frozen=True, eq=False)
class OperatorForm:
    """Affine data (A, B, b, c, g); A is stored as a tuple of columns in J."""

    columns: tuple
    B: np.ndarray
    b: np.ndarray
    c: AlgebraElement
    g: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "B", np.atleast_2d(np.asarray(self.B, dtype=float)))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float).reshape(-1))
        object.__setattr__(self, "g", np.asarray(self.g, dtype=float).reshape(-1))


@dataclass(frozen=True, eq=False)
class ConicProblem:
    """A primal-dual pair over a symmetric cone (Slater assumed, not checked)."""

    cone: ConeDescriptor
    form: object

    def __post_init__(self):
        if isinstance(self.form, BasisForm):
            f = self.form
            jordan._same_cone(f.x0, f.s0)
            if f.x0.cone != self.cone:
                raise ProblemFormatError("x0 does not match the declared cone")
            for l in f.basis:
                if l.cone != self.cone:
                    raise ProblemFormatError("subspace basis element does not match the cone")
            self._check_basis_rank()
        elif isinstance(self.form, OperatorForm):
            f = self.form
            m = len(f.columns)
            for a in f.columns:
                if a.cone != self.cone:
                    raise ProblemFormatError("operator column does not match the cone")
            if f.c.cone != self.cone:
                raise ProblemFormatError("c does not match the declared cone")
            if f.B.size and f.B.shape[1] != m:
                raise ProblemFormatError("B must have one column per operator column")
            if f.b.shape[0] != m:
                raise ProblemFormatError("b must have one entry per operator column")
            d = f.B.shape[0] if f.B.size else 0
            if f.g.shape[0] != d:
                raise ProblemFormatError("g length must match the row count of B")
        else:
            raise ProblemFormatError(f"unsupported problem form: {type(self.form).__name__}")

    # ------------------------------------------------------------------
    @property
    def is_basis_form(self) -> bool:
        return isinstance(self.form, BasisForm)

    def _check_basis_rank(self) -> None:
        mat = self._basis_mc
        if mat.shape[1] == 0:
            return
        sv = np.linalg.svd(mat, compute_uv=False)
        if sv[-1] <= _BASIS_RANK_TOL * sv[0]:
            raise IllConditionedBasisError(
                f"subspace basis is numerically dependent (sigma_min/sigma_max = {sv[-1] / sv[0]:.3g})"
            )

    @functools.cached_property
    def _sqrt_metric(self) -> np.ndarray:
        return np.sqrt(jordan.metric_diag(self.cone))

    def _mc(self, x: AlgebraElement) -> np.ndarray:
        """Coordinates in which the dot product is the trace inner product."""
        return x.coords * self._sqrt_metric

    def _from_mc(self, v: np.ndarray) -> AlgebraElement:
        return jordan.element(self.cone, v / self._sqrt_metric)

    @functools.cached_property
    def _basis_mc(self) -> np.ndarray:
        """Metric coordinates of the basis of L (basis form), N x dim(L)."""
        f = self.form
        if not f.basis:
            return np.zeros((self.cone.dim, 0))
        return np.column_stack([self._mc(l) for l in f.basis])

    @functools.cached_property
    def basis_dim(self) -> int:
        """dim L."""
        if self.is_basis_form:
            return len(self.form.basis)
        return self.cone.dim - self._lperp_mc.shape[1]

    @functools.cached_property
    def _columns_mc(self) -> np.ndarray:
        """Metric coordinates of the operator columns, N x m."""
        f = self.form
        if not f.columns:
            return np.zeros((self.cone.dim, 0))
        return np.column_stack([self._mc(a) for a in f.columns])

    @functools.cached_property
    def _lperp_mc(self) -> np.ndarray:
        """Orthonormal basis of L-perp in metric coordinates.

        Basis form: full-space orthogonal complement of the basis of L (QR).
        Operator form: orthonormalized image of ker(B) under A.
        """
        if self.is_basis_form:
            mat = self._basis_mc
            ell = mat.shape[1]
            if ell == 0:
                return np.eye(self.cone.dim)
            q, _ = np.linalg.qr(mat, mode="complete")
            return q[:, ell:]
        f = self.form
        if f.B.size:
            nb = scipy.linalg.null_space(f.B)
        else:
            nb = np.eye(len(f.columns))
        span = self._columns_mc @ nb
        return _orthonormalize(span)

    @functools.cached_property
    def _representatives(self):
        """(x0, s0) representatives; direct for basis form, least-norm solves otherwise."""
        if self.is_basis_form:
            return self.form.x0, self.form.s0
        f = self.form
        m = len(f.columns)
        d = f.B.shape[0] if f.B.size else 0
        # A* x + B* z = b with unknown (x in metric coords, z)
        lhs = np.hstack([self._columns_mc.T, f.B.T.reshape(m, d)])
        sol, res, rank, _ = np.linalg.lstsq(lhs, f.b, rcond=None)
        if not np.allclose(lhs @ sol, f.b, atol=1e-8 * max(1.0, float(np.linalg.norm(f.b)))):
            raise DegenerateConstraintsError("primal affine set is empty (A*x + B*z = b unsolvable)")
        x0 = self._from_mc(sol[: self.cone.dim])
        if d:
            y, *_ = np.linalg.lstsq(f.B, f.g, rcond=None)
            if not np.allclose(f.B @ y, f.g, atol=1e-8 * max(1.0, float(np.linalg.norm(f.g)))):
                raise DegenerateConstraintsError("dual affine set is empty (By = g unsolvable)")
        else:
            y = np.zeros(m)
        s0 = f.c - self._from_mc(self._columns_mc @ y)
        return x0, s0

    @property
    def x0(self) -> AlgebraElement:
        return self._representatives[0]

    @property
    def s0(self) -> AlgebraElement:
        return self._representatives[1]


def _orthonormalize(cols: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with one reorthogonalization pass."""
    n, k = cols.shape
    out = np.zeros((n, k))
    got = 0
    for j in range(k):
        v = cols[:, j].copy()
        nrm0 = np.linalg.norm(v)
        for _ in range(2):
            if got:
                v -= out[:, :got] @ (out[:, :got].T @ v)
        nrm = np.linalg.norm(v)
        if nrm <= _MGS_RANK_TOL * max(nrm0, 1.0):
            raise IllConditionedBasisError("rank loss while orthonormalizing the scaled subspace basis")
        out[:, got] = v / nrm
        got += 1
    return out[:, :got]


@dataclass(frozen=True, eq=False)
class ProjectorPair:
    """Orthogonal projectors onto L_w and its complement (they sum to identity)."""

    problem: ConicProblem
    basis: np.ndarray  # orthonormal columns in metric coordinates
    spans_lw: bool  # whether ``basis`` spans L_w (else it spans L_w_perp)

    def _split(self, z: AlgebraElement):
        zm = self.problem._mc(z)
        inside = self.basis @ (self.basis.T @ zm)
        return inside, zm - inside

    def onto_lw(self, z: AlgebraElement) -> AlgebraElement:
        inside, rest = self._split(z)
        return self.problem._from_mc(inside if self.spans_lw else rest)

    def onto_lw_perp(self, z: AlgebraElement) -> AlgebraElement:
        inside, rest = self._split(z)
        return self.problem._from_mc(rest if self.spans_lw else inside)


def scaled_projections(problem: ConicProblem, w: AlgebraElement) -> ProjectorPair:
    """Projector pair for L_w = Q(w^{-1/2}) L and its orthogonal complement."""
    if not jordan.is_interior(w):
        raise DomainError("scaling point must be interior", eigenvalue=jordan.min_eigenvalue(w))
    w_half, w_inv_half = jordan.spectral_map_multi(w, (np.sqrt, lambda lam: lam ** -0.5))
    return _scaled_projections_cached(problem, w_half, w_inv_half)


def _scaled_projections_cached(
    problem: ConicProblem, w_half: AlgebraElement, w_inv_half: AlgebraElement
) -> ProjectorPair:
    if problem.is_basis_form:
        cols = [problem._mc(jordan.quad_rep(w_inv_half, l)) for l in problem.form.basis]
        mat = np.column_stack(cols) if cols else np.zeros((problem.cone.dim, 0))
        return ProjectorPair(problem, _orthonormalize(mat), spans_lw=True)
    raw = problem._lperp_mc
    cols = [
        problem._mc(jordan.quad_rep(w_half, problem._from_mc(raw[:, j])))
        for j in range(raw.shape[1])
    ]
    mat = np.column_stack(cols) if cols else np.zeros((problem.cone.dim, 0))
    return ProjectorPair(problem, _orthonormalize(mat), spans_lw=False)


@dataclass(frozen=True, eq=False)
class NewtonData:
    """Newton direction with its orthogonal summands and derived bounds.

    ``d = d1 - d2`` with d1 in L_w_perp and d2 in L_w; ``sum_inf`` is
    ||d1 + d2||_inf; ``h_lb``/``h_ub`` bound the divergence to the centered
    point (h_ub may be +inf); ``t_max`` bounds the guaranteed-descent step;
    ``g_w`` is the scaling vector used for mu-selection.
    """

    d: AlgebraElement
    d1: AlgebraElement
    d2: AlgebraElement
    norm_d: float
    norm_d_inf: float
    sum_inf: float
    h_lb: float
    h_ub: float
    t_max: float
    g_w: AlgebraElement


def _finish_newton_data(d, d1, d2, g_w) -> NewtonData:
    norm_d = jordan.norm2(d)
    norm_d_inf = jordan.norm_inf(d)
    sum_inf = jordan.norm_inf(d1 + d2)
    h_lb = norm_d ** 2 / (1.0 + sum_inf)
    h_ub = norm_d ** 2 / (1.0 - sum_inf) if sum_inf < 1.0 else math.inf
    return NewtonData(
        d=d,
        d1=d1,
        d2=d2,
        norm_d=norm_d,
        norm_d_inf=norm_d_inf,
        sum_inf=sum_inf,
        h_lb=h_lb,
        h_ub=h_ub,
        t_max=_t_max(norm_d, norm_d_inf, h_lb),
        g_w=g_w,
    )


def newton_direction(problem: ConicProblem, w: AlgebraElement, mu: float) -> NewtonData:
    """Newton direction at (w, mu) with bounds.

    Basis form uses the orthogonal-projection construction; operator form
    solves the dense saddle system and recovers the summands by projection.
    """
    mu = float(mu)
    if mu <= 0.0:
        raise DomainError("mu must be positive")
    if not jordan.is_interior(w):
        raise DomainError("scaling point must be interior", eigenvalue=jordan.min_eigenvalue(w))
    sqrt_mu = math.sqrt(mu)
    w_half, w_inv_half = jordan.spectral_map_multi(w, (np.sqrt, lambda lam: lam ** -0.5))
    proj = _scaled_projections_cached(problem, w_half, w_inv_half)
    e = jordan.identity(problem.cone)

    x0, s0 = problem._representatives
    u_p = jordan.quad_rep(w_inv_half, x0)
    u_d = jordan.quad_rep(w_half, s0)
    g_w = proj.onto_lw_perp(u_p) + proj.onto_lw(u_d)

    if problem.is_basis_form:
        d1 = proj.onto_lw_perp(u_p / sqrt_mu - e)
        d2 = proj.onto_lw(u_d / sqrt_mu - e)
        d = d1 - d2
    else:
        d = _saddle_direction(problem, w, w_half, mu)
        d1 = proj.onto_lw_perp(d)
        d2 = d1 - d
    return _finish_newton_data(d, d1, d2, g_w)


def _saddle_direction(problem, w, w_half, mu) -> AlgebraElement:
    f = problem.form
    m = len(f.columns)
    d_rows = f.B.shape[0] if f.B.size else 0
    sqrt_mu = math.sqrt(mu)
    qw_cols = np.column_stack(
        [problem._mc(jordan.quad_rep(w, a)) for a in f.columns]
    ) if m else np.zeros((problem.cone.dim, 0))
    amat = problem._columns_mc
    H = amat.T @ qw_cols
    K = np.zeros((m + d_rows, m + d_rows))
    K[:m, :m] = H
    if d_rows:
        K[:m, m:] = f.B.T
        K[m:, :m] = f.B
    rhs = np.concatenate(
        [
            (f.b + amat.T @ problem._mc(jordan.quad_rep(w, f.c))) / sqrt_mu
            - 2.0 * (amat.T @ problem._mc(w)),
            f.g / sqrt_mu,
        ]
    )
    try:
        sol = np.linalg.solve(K, rhs) if K.size else np.zeros(0)
    except np.linalg.LinAlgError as exc:
        raise DegenerateConstraintsError(f"saddle system is singular: {exc}") from exc
    y = sol[:m]
    ay = problem._from_mc(amat @ y)
    e = jordan.identity(problem.cone)
    return e - jordan.quad_rep(w_half, f.c / sqrt_mu - ay)


def _t_max(norm_d: float, norm_d_inf: float, h_lb: float) -> float:
    if norm_d == 0.0 or norm_d_inf == 0.0:
        return math.inf
    k = (norm_d / norm_d_inf) ** 2
    num = 2.0 * (h_lb + min(norm_d ** 2, 2.0 * k))
    den = norm_d_inf ** 2 * (h_lb + 2.0 * k)
    return num / den


def step_bound(nd: NewtonData) -> float:
    """Guaranteed-descent step bound t_max from the Newton data.

    Divergence to the centered point does not increase for t in [0, t_max].
    Returns +inf when d = 0 (already centered).
    """
    return _t_max(nd.norm_d, nd.norm_d_inf, nd.h_lb)


def mu_candidates(
    problem: ConicProblem, w: AlgebraElement, mu_cur: float, beta: float
) -> float:
    """Smallest mu with h_ub(w, mu) <= beta, from the closed-form bound.

    In r = sqrt(mu_cur/mu) >= 1 the bound reads
    ``(||g_w||^2 r^2/mu_cur - 2 tr(g_w) r/sqrt(mu_cur) + n) / k(r)`` with
    ``k(r) = min(lmin r, 2 - lmax r)/sqrt(mu_cur)``-scaled eigenvalues of
    g_w; the bound has a pole where k vanishes.  The largest feasible r is
    bracketed by factor-2 checkpoints (the bound is not assumed monotone)
    and then bisected; with huge beta the result clamps at the pole.
    """
    mu_cur = float(mu_cur)
    nd = newton_direction(problem, w, mu_cur)
    lam = jordan.eigenvalues(nd.g_w)
    lmin = float(lam.min()) / math.sqrt(mu_cur)
    lmax = float(lam.max()) / math.sqrt(mu_cur)
    gg = jordan.inner(nd.g_w, nd.g_w) / mu_cur
    tg = jordan.trace(nd.g_w) / math.sqrt(mu_cur)
    n = problem.cone.rank

    def h_of(r: float) -> float:
        k = min(lmin * r, 2.0 - lmax * r)
        if k <= 0.0:
            return math.inf
        return (gg * r * r - 2.0 * tg * r + n) / k

    if h_of(1.0) > beta:
        return mu_cur
    pole = math.inf if lmax <= 0.0 else 2.0 / lmax
    r_feas = 1.0
    r_viol = math.inf
    cand = 2.0
    for _ in range(200):
        r = cand if cand < pole else 0.5 * (r_feas + pole)
        if r <= r_feas * (1.0 + 1e-15):
            break
        if h_of(r) <= beta:
            r_feas = r
            cand = 2.0 * r
        else:
            r_viol = r
            break
    if math.isfinite(r_viol):
        for _ in range(200):
            if r_viol - r_feas <= 1e-13:
                break
            mid = 0.5 * (r_feas + r_viol)
            if h_of(mid) <= beta:
                r_feas = mid
            else:
                r_viol = mid
    return mu_cur / (r_feas * r_feas)


def feasible_point(problem: ConicProblem, w: AlgebraElement, mu: float, nd: NewtonData | None = None):
    """Feasible (x, s) built from the Newton direction, or None.

    Available exactly when ||d||_inf <= 1; then
    x = sqrt(mu) Q(w^{1/2})(e + d) and s = sqrt(mu) Q(w^{-1/2})(e - d) are
    cone members lying in the primal/dual affine sets.
    """
    if nd is None:
        nd = newton_direction(problem, w, mu)
    if nd.norm_d_inf > 1.0:
        return None
    sqrt_mu = math.sqrt(float(mu))
    w_half, w_inv_half = jordan.spectral_map_multi(w, (np.sqrt, lambda lam: lam ** -0.5))
    e = jordan.identity(problem.cone)
    x = sqrt_mu * jordan.quad_rep(w_half, e + nd.d)
    s = sqrt_mu * jordan.quad_rep(w_inv_half, e - nd.d)
    return x, s


def duality_gap(x: AlgebraElement, s: AlgebraElement) -> float:
    """Objective gap <x, s> of a primal-dual pair."""
    return jordan.inner(x, s)


def as_operator_form(problem: ConicProblem) -> ConicProblem:
    """Convert a basis-form problem to the equivalent operator form.

    A's columns are an orthonormal basis of L-perp (full-space complement of
    the stacked basis, via QR), c = s0, b = A* x0, and B/g are empty.
    """
    if not problem.is_basis_form:
        return problem
    lperp = problem._lperp_mc
    cols = tuple(problem._from_mc(lperp[:, j]) for j in range(lperp.shape[1]))
    b = np.array([jordan.inner(a, problem.form.x0) for a in cols])
    form = OperatorForm(
        columns=cols,
        B=np.zeros((0, len(cols))),
        b=b,
        c=problem.form.s0,
        g=np.zeros(0),
    )
    return ConicProblem(problem.cone, form)


def transform_problem(problem: ConicProblem, T: jordan.ConeAutomorphism) -> ConicProblem:
    """Image of the problem under a cone automorphism.

    The primal set maps through T and the dual set through (T^{-1})*.
    """
    if problem.is_basis_form:
        f = problem.form
        form = BasisForm(
            x0=jordan.apply_automorphism(T, f.x0),
            s0=jordan.apply_inverse_adjoint(T, f.s0),
            basis=tuple(jordan.apply_automorphism(T, l) for l in f.basis),
        )
        return ConicProblem(problem.cone, form)
    f = problem.form
    form = OperatorForm(
        columns=tuple(jordan.apply_inverse_adjoint(T, a) for a in f.columns),
        B=f.B.copy(),
        b=f.b.copy(),
        c=jordan.apply_inverse_adjoint(T, f.c),
        g=f.g.copy(),
    )
    return ConicProblem(problem.cone, form)


def affine_residuals(problem: ConicProblem, x: AlgebraElement, s: AlgebraElement):
    """Distances of x to x0 + L and of s to s0 + L-perp (unscaled projections)."""
    proj = scaled_projections(problem, jordan.identity(problem.cone))
    x0, s0 = problem._representatives
    rp = jordan.norm2(proj.onto_lw_perp(x - x0))
    rd = jordan.norm2(proj.onto_lw(s - s0))
    return rp, rd
