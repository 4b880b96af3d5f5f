"""Wine glass paths and cycles, their closed-form energies and limit ratio.

A wine glass is five vertices ``p, q, r, s, t``: the stem ``q`` joins the two
base vertices ``p_j, p_{j+1}`` and the triangle ``r, s, t`` through ``r``.
The bases of ``k`` glasses form a path (``Wgp_k``, 5k+1 vertices) or a cycle
(``Wgc_k``, 5k vertices, ``p_k = p_0``).

The spectrum is governed by ``F(x) = x^2 - 3 - 2/((x+1)(x-2))``. For every
``y`` in [-2, 2] the equation ``F(x) = y`` has four real roots
``alpha < -1 < beta <= 0 < gamma < 2 < delta``, which are the roots of the
quartic ``x^4 - x^3 - (y+5) x^2 + (y+3) x + (2y+4)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Literal

import numpy as np

from .graph_core import Graph, from_edges

Kind = Literal["path", "cycle"]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class WineGlassSpec:
    kind: Kind
    k: int

    def __post_init__(self) -> None:
        if self.kind not in ("path", "cycle"):
            raise ValueError(f"unknown wine glass kind {self.kind!r}")
        lo = 1 if self.kind == "path" else 2
        if not isinstance(self.k, int) or self.k < lo:
            raise ValueError(f"wine glass {self.kind} needs k >= {lo}, got {self.k}")

    @property
    def num_vertices(self) -> int:
        return 5 * self.k + (1 if self.kind == "path" else 0)


def glass_vertices(spec: WineGlassSpec, j: int) -> dict[str, int]:
    """Vertex indices of glass ``j``: keys p, p_next, q, r, s, t."""
    k = spec.k
    p_next = 5 * (j + 1)
    if spec.kind == "cycle" and j == k - 1:
        p_next = 0
    b = 5 * j
    return {"p": b, "p_next": p_next, "q": b + 1, "r": b + 2, "s": b + 3, "t": b + 4}


def build_wineglass(spec: WineGlassSpec) -> Graph:
    edges = []
    for j in range(spec.k):
        v = glass_vertices(spec, j)
        edges += [
            (v["q"], v["p"]),
            (v["q"], v["p_next"]),
            (v["q"], v["r"]),
            (v["r"], v["s"]),
            (v["r"], v["t"]),
            (v["s"], v["t"]),
        ]
    return from_edges(spec.num_vertices, edges)


def wgp(k: int) -> Graph:
    return build_wineglass(WineGlassSpec("path", k))


def wgc(k: int) -> Graph:
    return build_wineglass(WineGlassSpec("cycle", k))


# --- F and its level-set roots ------------------------------------------------


def F(x: float) -> float:
    d = (x + 1) * (x - 2)
    if d == 0:
        raise ZeroDivisionError(f"F has a pole at x={x}")
    return x * x - 3 - 2 / d


def dF(x: float) -> float:
    d = (x + 1) * (x - 2)
    if d == 0:
        raise ZeroDivisionError(f"F has a pole at x={x}")
    return 2 * x + (4 * x - 2) / (d * d)


def quartic_coefficients(y: float) -> tuple[float, float, float, float, float]:
    """Coefficients (highest degree first) of the quartic whose roots solve F(x) = y."""
    return (1.0, -1.0, -(y + 5), y + 3, 2 * y + 4)


@dataclass(frozen=True)
class RootQuartet:
    y: float
    alpha: float
    beta: float
    gamma: float
    delta_root: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta_root)


class RootError(ArithmeticError):
    pass


def _solve_bracketed(
    g: Callable[[float], float],
    dg: Callable[[float], float],
    lo: float,
    hi: float,
    x0: float | None = None,
    max_iter: int = 200,
) -> float:
    """Root of ``g`` in [lo, hi] (sign change required): Newton, falling back to bisection."""
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return lo
    if ghi == 0:
        return hi
    if (glo > 0) == (ghi > 0):
        raise RootError(f"no sign change on [{lo}, {hi}]")
    rising = ghi > 0
    x = x0 if x0 is not None and lo < x0 < hi else 0.5 * (lo + hi)
    for _ in range(max_iter):
        gx = g(x)
        if gx == 0:
            return x
        if (gx > 0) == rising:
            hi = x
        else:
            lo = x
        if hi - lo <= 2 * _EPS * max(abs(lo), abs(hi)):
            break
        step = gx / dg(x)
        xn = x - step
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        elif abs(step) <= _EPS * abs(x):
            x = xn
            break
        x = xn
    else:
        raise RootError("bracketed Newton did not converge")
    return min((lo, x, hi), key=lambda t: abs(g(t)))


def _pole_side(y: float, pole: float, direction: float, want_below: bool) -> float:
    """Point ``pole + direction*eps`` where F is below (or above) ``y``."""
    eps = 0.5
    for _ in range(200):
        b = pole + direction * eps
        fb = F(b)
        if (fb < y) if want_below else (fb > y):
            return b
        eps *= 0.5
    raise RootError(f"could not bracket near pole {pole}")


def _deflate(coeffs: Iterable[float], root: float) -> list[float]:
    out: list[float] = []
    acc = 0.0
    for c in coeffs:
        acc = acc * root + c
        out.append(acc)
    return out[:-1]


def _quadratic_roots(a: float, b: float, c: float) -> tuple[float, float]:
    disc = max(b * b - 4 * a * c, 0.0)
    qq = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1 = qq / a
    r2 = c / qq if qq != 0 else -b / a - r1
    return (min(r1, r2), max(r1, r2))


def roots(y: float) -> RootQuartet:
    if not -2 <= y <= 2:
        raise ValueError(f"y={y} outside [-2, 2]")

    def g(x: float) -> float:
        return F(x) - y

    # alpha on (-inf, -1): F decreasing, F(-3) = 5.8 > 2, F -> -inf at -1 from the left
    alpha = _solve_bracketed(g, dF, -3.0, _pole_side(y, -1.0, -1.0, want_below=True))
    # beta on (-1, 0]: F decreasing from +inf to F(0) = -2
    beta = _solve_bracketed(g, dF, _pole_side(y, -1.0, 1.0, want_below=False), 0.0)

    cubic = _deflate(quartic_coefficients(y), alpha)
    quad = _deflate(cubic, beta)
    gamma0, delta0 = _quadratic_roots(*quad)

    # gamma on (0, 2): F(1/4) < -2 and F is increasing from there to the pole at 2
    gamma = _solve_bracketed(g, dF, 0.25, _pole_side(y, 2.0, -1.0, want_below=False), gamma0)
    # delta on (2, inf): F -> -inf at 2 from the right, F(3) = 5.5 > 2
    delta = _solve_bracketed(g, dF, _pole_side(y, 2.0, 1.0, want_below=True), 3.0, delta0)
    return RootQuartet(y, alpha, beta, gamma, delta)


def alpha(y: float) -> float:
    return roots(y).alpha


def beta(y: float) -> float:
    return roots(y).beta


def _alpha_beta_sum(y: float) -> float:
    r = roots(y)
    return r.alpha + r.beta


# --- closed-form energies -----------------------------------------------------


def energy_wgp_closed(k: int) -> float:
    if k < 1:
        raise ValueError("wine glass path needs k >= 1")
    ab = [_alpha_beta_sum(2 * math.cos(j * math.pi / (k + 1))) for j in range(1, k + 1)]
    return 2 * k - 2 * math.fsum(ab)


def _cycle_points(k: int) -> list[float]:
    ys = [2 * math.cos(2 * j * math.pi / k) for j in range(k)]
    ys[0] = 2.0
    if k % 2 == 0:
        ys[k // 2] = -2.0
    return ys


def energy_wgc_closed(k: int) -> float:
    if k < 2:
        raise ValueError("wine glass cycle needs k >= 2")
    return 2 * k - 2 * math.fsum(_alpha_beta_sum(y) for y in _cycle_points(k))


def energy_closed(spec: WineGlassSpec) -> float:
    return energy_wgp_closed(spec.k) if spec.kind == "path" else energy_wgc_closed(spec.k)


def ratio_convergence(kind: Kind, k_list: Iterable[int]) -> list[tuple[int, float]]:
    """Closed-form ``E / mu`` (with ``mu = 2k``) for each ``k``."""
    out = []
    for k in k_list:
        e = energy_closed(WineGlassSpec(kind, k))
        out.append((k, e / (2 * k)))
    return out


# --- limit constant -----------------------------------------------------------


class QuadratureError(ArithmeticError):
    pass


def tanh_sinh(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-11,
    max_level: int = 12,
    u_max: float = 3.5,
) -> tuple[float, float]:
    """Double-exponential quadrature of ``f`` over [a, b].

    Tolerates integrable endpoint singularities, including the square-root
    behaviour of ``arccos`` at +-1. Nodes are placed by their distance to the
    nearer endpoint so no precision is lost next to it. Returns
    ``(value, error_estimate)`` where the estimate is the change between the
    last two halvings of the step.
    """
    half = 0.5 * (b - a)
    if half == 0:
        return 0.0, 0.0

    def pair(u: float) -> float:
        s = 0.5 * math.pi * math.sinh(u)
        e = math.exp(-2 * abs(s))
        gap = half * 2 * e / (1 + e)  # half * (1 - tanh|s|)
        w = 0.5 * math.pi * math.cosh(u) * 4 * e / (1 + e) ** 2  # (pi/2) cosh u / cosh^2 s
        if gap == 0 or w == 0:
            return 0.0
        if u == 0:
            return w * f(a + half)
        return w * (f(a + gap) + f(b - gap))

    h = 1.0
    total = pair(0.0) + sum(pair(i * h) for i in range(1, int(u_max / h) + 1))
    prev = total * h * half
    err = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        total += sum(pair(i * h) for i in range(1, int(u_max / h) + 1, 2))
        cur = total * h * half
        err = abs(cur - prev)
        if level >= 3 and err <= tol:
            return cur, err
        prev = cur
    raise QuadratureError(f"tanh-sinh did not reach tol={tol} (estimate {err:.3g})")


def gauss_legendre(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-11,
    order: int = 16,
    max_panels: int = 1024,
) -> tuple[float, float]:
    """Composite Gauss-Legendre; panels doubled until two passes agree within ``tol``."""
    nodes, weights = np.polynomial.legendre.leggauss(order)

    def composite(panels: int) -> float:
        edges = np.linspace(a, b, panels + 1)
        parts = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, rad = 0.5 * (lo + hi), 0.5 * (hi - lo)
            parts.append(rad * math.fsum(w * f(mid + rad * t) for t, w in zip(nodes, weights)))
        return math.fsum(parts)

    panels = 2
    prev = composite(panels)
    while panels < max_panels:
        panels *= 2
        cur = composite(panels)
        err = abs(cur - prev)
        if err <= tol:
            return cur, err
        prev = cur
    raise QuadratureError(f"Gauss-Legendre did not reach tol={tol}")


@dataclass(frozen=True)
class LimitResult:
    L: float
    L_cos_form: float
    alpha_m2: float
    alpha_p2: float
    beta_p2: float
    quadrature_error_estimate: float


def _arccos_half_F(x: float) -> float:
    return math.acos(min(1.0, max(-1.0, 0.5 * F(x))))


def limit_L(quad_tol: float = 1e-11) -> LimitResult:
    """Limit of ``E/mu`` over both families, by two independent integral forms.

    ``L`` integrates ``arccos(F(x)/2)`` over the alpha and beta branches.
    ``L_cos_form`` integrates ``alpha(2 cos x) + beta(2 cos x)`` over [0, pi].
    """
    if quad_tol <= 0:
        raise ValueError("quad_tol must be positive")
    r_m2, r_p2 = roots(-2.0), roots(2.0)
    i_alpha, e_alpha = tanh_sinh(_arccos_half_F, r_p2.alpha, r_m2.alpha, quad_tol)
    i_beta, e_beta = tanh_sinh(_arccos_half_F, r_p2.beta, 0.0, quad_tol)
    big_l = 1 - r_m2.alpha + (i_alpha + i_beta) / math.pi

    i_cos, e_cos = gauss_legendre(lambda x: _alpha_beta_sum(2 * math.cos(x)), 0.0, math.pi, quad_tol)
    l_cos = 1 - i_cos / math.pi
    err = (e_alpha + e_beta) / math.pi + e_cos / math.pi
    return LimitResult(big_l, l_cos, r_m2.alpha, r_p2.alpha, r_p2.beta, err)
