"""Adaptive Gauss-Kronrod quadrature and Cauchy principal values.

One 7-15 pair drives everything: finite panels are refined by bisecting
whichever panel carries the largest |K15 - G7| estimate, semi-infinite
domains grow dyadic tail panels until a whole panel contributes less than
the absolute tolerance, and principal values fold the integrand about the
pole so the singular parts cancel before any node is evaluated.

All nodes are interior, so integrands may be singular (integrably) at
panel endpoints, in particular at the origin of a semi-infinite domain.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

# 15-point Kronrod extension of 7-point Gauss-Legendre on [-1, 1]
# (nonnegative abscissae; the rule is symmetric).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# Embedded 7-point Gauss weights, matching the odd Kronrod abscissae.
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


class IntegrandError(ValueError):
    """The integrand returned a non-finite value."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget for one integral.

    tail_cut is the decay-based truncation threshold of semi-infinite
    domains: panel extension stops once a whole panel contributes less
    than this (defaults to abs_tol).
    """

    rel_tol: float = 1.0e-9
    abs_tol: float = 1.0e-14
    max_subdivisions: int = 2000
    tail_cut: float | None = None

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.tail_cut is not None and self.tail_cut <= 0:
            raise ValueError("tail_cut must be positive")

    @property
    def tail_threshold(self) -> float:
        return self.abs_tol if self.tail_cut is None else self.tail_cut

    def target(self, value: float) -> float:
        return max(self.rel_tol * abs(value), self.abs_tol)


@dataclass
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool
    subdivisions: int = 0

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            evaluations=self.evaluations + other.evaluations,
            converged=self.converged and other.converged,
            subdivisions=self.subdivisions + other.subdivisions,
        )


def kronrod_nodes_weights():
    """Full 15-node rule on [-1, 1]: (nodes, kronrod weights, gauss weights)."""
    nodes, wk, wg = [], [], []
    for i, x in enumerate(_XGK):
        gauss_w = _WG[(i - 1) // 2] if i % 2 == 1 else 0.0
        if x == 0.0:
            nodes.append(0.0)
            wk.append(_WGK[i])
            wg.append(_WG[3])
        else:
            nodes.extend((-x, x))
            wk.extend((_WGK[i], _WGK[i]))
            wg.extend((gauss_w, gauss_w))
    return tuple(nodes), tuple(wk), tuple(wg)


_NODES, _WTS_K, _WTS_G = kronrod_nodes_weights()


def _gk15(f: Callable[[float], float], a: float, b: float):
    """One Gauss-Kronrod panel; returns (kronrod value, |K-G| estimate)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    acc_k = 0.0
    acc_g = 0.0
    for x, wk, wg in zip(_NODES, _WTS_K, _WTS_G):
        fx = f(c + h * x)
        if not math.isfinite(fx):
            raise IntegrandError(f"integrand returned {fx!r} at x={c + h * x!r}")
        acc_k += wk * fx
        acc_g += wg * fx
    return h * acc_k, abs(h * (acc_k - acc_g))


@dataclass
class _Panel:
    a: float
    b: float
    value: float
    error: float

    def split(self, f) -> tuple["_Panel", "_Panel"]:
        m = 0.5 * (self.a + self.b)
        lv, le = _gk15(f, self.a, m)
        rv, re = _gk15(f, m, self.b)
        return _Panel(self.a, m, lv, le), _Panel(m, self.b, rv, re)


def _refine(f, panels: list[_Panel], spec: QuadratureSpec, evals: int) -> QuadratureResult:
    """Bisect worst panels until the summed error meets the tolerance."""
    heap = [(-p.error, i, p) for i, p in enumerate(panels)]
    heapq.heapify(heap)
    counter = len(panels)
    subdivisions = 0
    while True:
        total = math.fsum(item[2].value for item in heap)
        error = math.fsum(item[2].error for item in heap)
        if error <= spec.target(total):
            break
        if counter >= spec.max_subdivisions:
            return _finish(heap, evals, converged=False, subdivisions=subdivisions)
        _, _, worst = heapq.heappop(heap)
        left, right = worst.split(f)
        evals += 30
        subdivisions += 1
        heapq.heappush(heap, (-left.error, counter, left))
        counter += 1
        heapq.heappush(heap, (-right.error, counter, right))
        counter += 1
    return _finish(heap, evals, converged=True, subdivisions=subdivisions)


def _finish(heap, evals: int, converged: bool, subdivisions: int) -> QuadratureResult:
    # Deterministic reduction: panel contributions ordered by position.
    ordered = sorted((item[2] for item in heap), key=lambda p: p.a)
    value = math.fsum(p.value for p in ordered)
    error = math.fsum(p.error for p in ordered)
    return QuadratureResult(value, error, evals, converged, subdivisions)


def integrate_panels(f, edges: Sequence[float], spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Adaptive integral over panels bounded by the given ascending edges."""
    spec = spec or QuadratureSpec()
    if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValueError(f"edges must be strictly ascending, got {edges!r}")
    panels = []
    evals = 0
    for a, b in zip(edges, edges[1:]):
        value, error = _gk15(f, a, b)
        evals += 15
        panels.append(_Panel(a, b, value, error))
    return _refine(f, panels, spec, evals)


def dyadic_edges_upto(a: float, b: float, first_width: float = 1.0) -> tuple[float, ...]:
    """Panel edges a, a+1, a+2, a+4, ... clipped to end exactly at b."""
    edges = [a]
    width = first_width
    while edges[-1] + width < b:
        edges.append(edges[-1] + width)
        width *= 2.0
    edges.append(b)
    return tuple(edges)


def integrate_interval(f, a: float, b: float, spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Adaptive integral over a finite interval (endpoints never sampled)."""
    if not b > a:
        raise ValueError(f"empty interval [{a}, {b}]")
    return integrate_panels(f, (a, b), spec)


def _dyadic_edges(origin: float, first: float = 1.0):
    edge = origin + first
    width = first
    while True:
        yield edge
        width *= 2.0
        edge += width


def integrate_semi_infinite(
    f,
    spec: QuadratureSpec | None = None,
    origin: float = 0.0,
    first_width: float = 1.0,
) -> QuadratureResult:
    """Adaptive integral over (origin, infinity) for eventually decaying f.

    Panels extend dyadically, (0,1], (1,2], (2,4], ..., until an entire
    panel contributes below abs_tol twice in a row; the collected panels
    are then refined like any finite-domain integral.
    """
    spec = spec or QuadratureSpec()
    panels: list[_Panel] = []
    evals = 0
    lo = origin
    quiet = 0
    for hi in _dyadic_edges(origin, first_width):
        value, error = _gk15(f, lo, hi)
        evals += 15
        panels.append(_Panel(lo, hi, value, error))
        if abs(value) < spec.tail_threshold and error < spec.tail_threshold:
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
        if len(panels) >= spec.max_subdivisions:
            break
        lo = hi
    return _refine(f, panels, spec, evals)


def integrate_principal_value(
    g,
    pole: float,
    spec: QuadratureSpec | None = None,
    denominator: Callable[[float], float] | None = None,
    upper: float | None = None,
) -> QuadratureResult:
    """Cauchy principal value of g(x)/denominator(x) over (0, upper).

    The denominator defaults to (x - pole) and must have a simple zero at
    the pole and nowhere else in the domain.  On the symmetric window
    [pole-delta, pole+delta] the integral is taken as
    int_0^delta [h(pole+s) + h(pole-s)] ds with h the full integrand,
    which is regular at s = 0; outside the window ordinary adaptive
    quadrature applies.  upper = None means a semi-infinite domain.
    """
    spec = spec or QuadratureSpec()
    if pole <= 0.0:
        raise ValueError(f"pole must be positive, got {pole}")
    if upper is not None and upper <= pole:
        raise ValueError(f"pole {pole} not inside (0, {upper})")

    if denominator is None:
        def h(x: float) -> float:
            return g(x) / (x - pole)
    else:
        def h(x: float) -> float:
            return g(x) / denominator(x)

    delta = min(0.5, pole / 2.0)
    if upper is not None:
        delta = min(delta, (upper - pole) / 2.0)

    def folded(s: float) -> float:
        return h(pole + s) + h(pole - s)

    total = integrate_interval(folded, 0.0, delta, spec)
    if pole - delta > 0.0:
        total = total + integrate_interval(h, 0.0, pole - delta, spec)
    if upper is None:
        total = total + integrate_semi_infinite(h, spec, origin=pole + delta)
    elif upper > pole + delta:
        total = total + integrate_interval(h, pole + delta, upper, spec)
    return total


@dataclass
class Diagnostics:
    """Named quadrature results gathered while assembling a shift."""

    parts: dict = field(default_factory=dict)

    def record(self, name: str, result: QuadratureResult) -> QuadratureResult:
        self.parts[name] = result
        return result

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.parts.values())

    @property
    def error_estimate(self) -> float:
        return math.fsum(r.error_estimate for r in self.parts.values())

    @property
    def evaluations(self) -> int:
        return sum(r.evaluations for r in self.parts.values())

    def as_dict(self) -> dict:
        return {
            name: {
                "value": r.value,
                "error_estimate": r.error_estimate,
                "evaluations": r.evaluations,
                "converged": r.converged,
            }
            for name, r in self.parts.items()
        }
