"""Causal-cone membership for Hermitian field-valued 2x2 elements.

An algebra element is the Hermitian matrix of fields [[a, -c], [-c*, b]]
with a, b real and c complex.  It belongs to the causal cone exactly when a
specific 4x4 Hermitian matrix, built pointwise from the first partials of
the fields and the Dirac gap, is positive semi-definite at every event.
With the derivative shorthand f0 = df/dt, f1 = df/dx and delta = d1 - d2,
that matrix is

    [ a0+a1        0          -(c0+c1)    -delta*c  ]
    [ 0            a0-a1      delta*c     -(c0-c1)  ]
    [ conj sym     conj sym   b0+b1       0         ]
    [ conj sym     conj sym   0           b0-b1     ]

Grid membership is a semi-decision: a violation at a node is exact, while
membership is certified only up to the sampling resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import fields
from .fields import DomainError, FieldExpr, eval_grid, parse, to_source
from .minkowski import SpacetimePoint
from .states import DiracData

#: Default relative eigenvalue tolerance for the PSD tests.
PSD_TOL = 1e-9
HERMITIAN_TOL = 1e-12
LEMMA_SLACK = 1e-12


class UnequalDiagonalError(ValueError):
    """The sufficient membership test needs structurally identical diagonal fields."""


@dataclass(frozen=True)
class AlgebraElement:
    """Field-valued Hermitian element [[a, -c], [-c*, b]] of the algebra."""

    a: FieldExpr
    b: FieldExpr
    c_re: FieldExpr
    c_im: FieldExpr

    @classmethod
    def from_sources(cls, a: str, b: str, c_re: str = "0", c_im: str = "0") -> "AlgebraElement":
        return cls(parse(a), parse(b), parse(c_re), parse(c_im))

    @classmethod
    def diagonal(cls, a: str, b: str) -> "AlgebraElement":
        return cls.from_sources(a, b)

    def to_dict(self) -> dict:
        return {
            "a": to_source(self.a),
            "b": to_source(self.b),
            "c": {"re": to_source(self.c_re), "im": to_source(self.c_im)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AlgebraElement":
        c = data.get("c", {"re": "0", "im": "0"})
        return cls.from_sources(str(data["a"]), str(data["b"]), str(c["re"]), str(c["im"]))


def add_elements(e1: AlgebraElement, e2: AlgebraElement) -> AlgebraElement:
    """Entrywise sum of two elements (the cone is convex under it)."""
    plus = lambda u, v: fields.BinOp("+", u, v)
    return AlgebraElement(
        plus(e1.a, e2.a), plus(e1.b, e2.b), plus(e1.c_re, e2.c_re), plus(e1.c_im, e2.c_im)
    )


@dataclass(frozen=True)
class ConeMatrix:
    """The pointwise 4x4 Hermitian matrix whose PSD-ness decides membership."""

    m: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.m, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL * scale:
            raise ValueError("matrix is not Hermitian")
        object.__setattr__(self, "m", m)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.m)[0])


@dataclass(frozen=True)
class RegionGrid:
    """A rectangular sampling grid on the (t, x) plane, traversed row-major in t."""

    t_min: float
    t_max: float
    x_min: float
    x_max: float
    nt: int
    nx: int

    def __post_init__(self) -> None:
        if not (self.t_min < self.t_max and self.x_min < self.x_max):
            raise ValueError("grid bounds must be ordered")
        if self.nt < 2 or self.nx < 2:
            raise ValueError("grid needs at least 2 nodes per axis")

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened node coordinates, t-major then x."""
        t = np.linspace(self.t_min, self.t_max, self.nt)
        x = np.linspace(self.x_min, self.x_max, self.nx)
        tt, xx = np.meshgrid(t, x, indexing="ij")
        return tt.ravel(), xx.ravel()

    def node(self, flat_index: int) -> SpacetimePoint:
        i, j = divmod(flat_index, self.nx)
        t = self.t_min + (self.t_max - self.t_min) * i / (self.nt - 1)
        x = self.x_min + (self.x_max - self.x_min) * j / (self.nx - 1)
        return SpacetimePoint(t, x)

    def contains(self, p: SpacetimePoint) -> bool:
        return self.t_min <= p.t <= self.t_max and self.x_min <= p.x <= self.x_max

    def to_dict(self) -> dict:
        return {
            "t_min": self.t_min,
            "t_max": self.t_max,
            "x_min": self.x_min,
            "x_max": self.x_max,
            "nt": self.nt,
            "nx": self.nx,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RegionGrid":
        return cls(
            float(data["t_min"]),
            float(data["t_max"]),
            float(data["x_min"]),
            float(data["x_max"]),
            int(data["nt"]),
            int(data["nx"]),
        )


def _element_jets(el: AlgebraElement, t, x):
    """Derivative data of all four fields at the given coordinates.

    Returns (a0p, a0m, b0p, b0m, c, c0, c1) where a0p = a_t + a_x etc. and
    the c entries are complex (value, d/dt, d/dx).
    """
    av, adt, adx = eval_grid(el.a, t, x)
    bv, bdt, bdx = eval_grid(el.b, t, x)
    rv, rdt, rdx = eval_grid(el.c_re, t, x)
    iv, idt, idx = eval_grid(el.c_im, t, x)
    c = rv + 1j * iv
    c0 = rdt + 1j * idt
    c1 = rdx + 1j * idx
    return adt + adx, adt - adx, bdt + bdx, bdt - bdx, c, c0, c1


def _assemble(el: AlgebraElement, dirac: DiracData, t, x) -> np.ndarray:
    """Stack of 4x4 cone matrices over coordinate arrays; Hermitian by construction."""
    ap, am, bp, bm, c, c0, c1 = _element_jets(el, np.atleast_1d(t), np.atleast_1d(x))
    delta = dirac.d1 - dirac.d2
    n = ap.shape[0]
    m = np.zeros((n, 4, 4), dtype=complex)
    m[:, 0, 0] = ap
    m[:, 1, 1] = am
    m[:, 2, 2] = bp
    m[:, 3, 3] = bm
    m[:, 0, 2] = -(c0 + c1)
    m[:, 1, 3] = -(c0 - c1)
    m[:, 0, 3] = -delta * c
    m[:, 1, 2] = delta * c
    m[:, 2, 0] = np.conj(m[:, 0, 2])
    m[:, 3, 1] = np.conj(m[:, 1, 3])
    m[:, 3, 0] = np.conj(m[:, 0, 3])
    m[:, 2, 1] = np.conj(m[:, 1, 2])
    return m


def cone_matrix_at(el: AlgebraElement, dirac: DiracData, p: SpacetimePoint) -> ConeMatrix:
    """The membership matrix of the element at a single event."""
    return ConeMatrix(_assemble(el, dirac, p.t, p.x)[0])


def _scales(mats: np.ndarray) -> np.ndarray:
    return np.maximum(1.0, np.abs(mats).reshape(mats.shape[0], -1).max(axis=1))


def is_psd(matrix: ConeMatrix | np.ndarray, tol: float = PSD_TOL) -> bool:
    """PSD test with a relative eigenvalue bound.

    True iff the smallest eigenvalue is >= -tol * scale where
    scale = max(1, largest absolute entry).
    """
    m = matrix.m if isinstance(matrix, ConeMatrix) else np.asarray(matrix, dtype=complex)
    scale = max(1.0, float(np.abs(m).max()))
    return float(np.linalg.eigvalsh(m)[0]) >= -tol * scale


def conformal_rescale_matrix(matrix: ConeMatrix, omega: float) -> ConeMatrix:
    """Pointwise effect of a conformal factor: the matrix scales by omega^2.

    Positive scaling preserves the signs of all eigenvalues, so the PSD
    verdict is unchanged; omega must be positive.
    """
    if not omega > 0.0:
        raise ValueError(f"conformal factor must be positive, got {omega}")
    return ConeMatrix(omega * omega * matrix.m)


def lemma_sufficient_check(el: AlgebraElement, dirac: DiracData, p: SpacetimePoint) -> bool:
    """Sufficient membership test for elements with equal diagonal fields.

    Requires a and b to be structurally identical expressions and checks
    a_t - |a_x| >= |c_t| + |c_x| + gap * |c| at the event (with a small
    slack for roundoff).  Passing implies the PSD condition holds there.
    """
    if el.a != el.b:
        raise UnequalDiagonalError("a and b must be the same expression")
    ap, am, _, _, c, c0, c1 = _element_jets(el, np.atleast_1d(p.t), np.atleast_1d(p.x))
    a_t = 0.5 * (ap[0] + am[0])
    a_x = 0.5 * (ap[0] - am[0])
    lhs = a_t - abs(a_x)
    rhs = abs(c0[0]) + abs(c1[0]) + dirac.gap * abs(c[0])
    return bool(lhs >= rhs - LEMMA_SLACK)


def lemma_margin_grid(el: AlgebraElement, dirac: DiracData, region: RegionGrid) -> np.ndarray:
    """Vectorised margin a_t - |a_x| - (|c_t| + |c_x| + gap |c|) over the grid."""
    if el.a != el.b:
        raise UnequalDiagonalError("a and b must be the same expression")
    t, x = region.mesh()
    ap, am, _, _, c, c0, c1 = _element_jets(el, t, x)
    a_t = 0.5 * (ap + am)
    a_x = 0.5 * (ap - am)
    return a_t - np.abs(a_x) - (np.abs(c0) + np.abs(c1) + dirac.gap * np.abs(c))


@dataclass(frozen=True)
class GridViolation:
    point: SpacetimePoint
    min_eigenvalue: float

    def to_dict(self) -> dict:
        return {"point": [self.point.t, self.point.x], "min_eigenvalue": self.min_eigenvalue}


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of the sampled membership test.

    member_on_grid certifies membership only up to the grid resolution; a
    recorded violation is exact at its node.  min_eigenvalue is the smallest
    (scaled-tolerance-free) eigenvalue seen anywhere on the grid, so callers
    can refine near-boundary cases.
    """

    member_on_grid: bool
    first_violation: Optional[GridViolation]
    min_eigenvalue: float
    n_nodes: int
    n_violations: int

    def to_dict(self) -> dict:
        return {
            "member_on_grid": self.member_on_grid,
            "first_violation": None if self.first_violation is None else self.first_violation.to_dict(),
            "min_eigenvalue": self.min_eigenvalue,
            "n_nodes": self.n_nodes,
            "n_violations": self.n_violations,
        }


def cone_membership(
    el: AlgebraElement, dirac: DiracData, region: RegionGrid, tol: float = PSD_TOL
) -> MembershipReport:
    """Test the PSD condition at every grid node, row-major in t.

    Raises DomainError annotated with the offending node when a field cannot
    be evaluated somewhere on the grid.
    """
    t, x = region.mesh()
    try:
        mats = _assemble(el, dirac, t, x)
    except DomainError as err:
        if err.index is not None:
            node = region.node(err.index)
            raise DomainError(
                f"{err.args[0].split(' in ')[0]} at grid node (t={node.t}, x={node.x})", err.expr
            ) from err
        raise
    min_eigs = np.linalg.eigvalsh(mats)[:, 0]
    bad = min_eigs < -tol * _scales(mats)
    n_violations = int(bad.sum())
    first: Optional[GridViolation] = None
    if n_violations:
        idx = int(np.argmax(bad))
        first = GridViolation(region.node(idx), float(min_eigs[idx]))
    return MembershipReport(
        member_on_grid=n_violations == 0,
        first_violation=first,
        min_eigenvalue=float(min_eigs.min()),
        n_nodes=len(min_eigs),
        n_violations=n_violations,
    )


def certify_grid_psd(
    el: AlgebraElement, dirac: DiracData, region: RegionGrid, tol: float = PSD_TOL
) -> bool:
    """Fast membership decision over the grid, equivalent to cone_membership.

    Screens with a batched Cholesky factorisation of the tolerance-shifted
    matrices (a principal-minors test) and falls back to eigenvalues only
    when the screen fails, so certifying a member costs a fraction of the
    full report.
    """
    t, x = region.mesh()
    mats = _assemble(el, dirac, t, x)
    shift = (tol * _scales(mats))[:, None, None] * np.eye(4)
    try:
        np.linalg.cholesky(mats + shift)
        return True
    except np.linalg.LinAlgError:
        min_eigs = np.linalg.eigvalsh(mats)[:, 0]
        return bool((min_eigs >= -tol * _scales(mats)).all())
