r"""Computable error bounds and parameter selection.

For a model class with absolute-coefficient (wiener) or
squared-coefficient (korobov) norm, the gap between the exact loss term
and its compressed counterpart splits into a truncation part from the
finite frequency set and a quadrature part from the lattice:

.. math:: \mathrm{err}_1 + \mathrm{err}_2 \le \|g\| \,
          \bigl[ T(\nu) + Q(\nu)\, L^{-(\alpha - 1/2 - \delta - \tau)}
          \, c_{\alpha,\gamma,d}\, \zeta_{\delta,d}\,
          C_{\gamma,d}(\alpha - 1/2 - \delta, \tau) \bigr] \bar\mu_N ,

where the truncation factor ``T`` and the set-size factor ``Q`` depend
on the family and the norm.  The wiener-norm bounds hold with the
displayed constants; the korobov-norm bounds hold up to an absolute
constant, which this module reports as written (flagged ``exact =
False``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

from .index_sets import cross_cardinality_constant
from .lattice import ProductWeights, bound_constant_C
from .special import zeta

__all__ = [
    "BoundQuery",
    "BoundReport",
    "EnvelopeReport",
    "constants",
    "total_bound",
    "select_parameter",
    "loss_gap_envelope",
]

SPACES = ("wiener", "korobov")
FAMILIES = ("cross", "rectangle", "step-cross")


def constants(
    alpha: float,
    gamma: Union[ProductWeights, "tuple[float, ...]"],
    delta: float,
) -> tuple[float, float]:
    """The two weight-dependent constants of the quadrature bound.

    Returns ``(c, z)`` with ``c = sqrt(prod_j max(1, 2^(2 alpha)
    gamma_j))`` and ``z = (1 + 2 zeta(1 + 2 delta))^(d/2)``.

    Examples:
        >>> c, _ = constants(1.0, (1.0, 1.0), 0.5)
        >>> c
        4.0
    """
    alpha = float(alpha)
    delta = float(delta)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"constants need alpha > 0, got {alpha!r}")
    if not math.isfinite(delta) or delta <= 0.0:
        raise ValueError(f"constants need delta > 0, got {delta!r}")
    if not isinstance(gamma, ProductWeights):
        gamma = ProductWeights(tuple(gamma))
    prod = 1.0
    for gj in gamma:
        prod *= max(1.0, 2.0 ** (2.0 * alpha) * gj)
    c = math.sqrt(prod)
    z = (1.0 + 2.0 * zeta(1.0 + 2.0 * delta)) ** (gamma.d / 2.0)
    return c, z


@dataclass(frozen=True)
class BoundQuery:
    """Everything a bound evaluation needs.

    Attributes:
        space: "wiener" for the absolute-coefficient norm, "korobov"
            for the squared-coefficient norm.
        family: frequency-set family the truncation ran over.
        alpha: smoothness, strictly greater than 1.
        gamma: product weights of the space.
        L: lattice size.
        norm_g: norm of the compressed function in the stated space.
        mu_bar: mean absolute coefficient ``(1/N) sum |c_n|`` of the
            data sum.
        delta: quadrature smoothness give-up in (0, alpha - 1);
            defaults to (alpha - 1) / 2.
        tau: rate slack in (0, alpha - 1 - delta]; defaults to half of
            the upper end.
        eps: cardinality-bound slack, positive; used by korobov bounds.
        sigma: rate give-up used by parameter selection, in
            (0, alpha - 1/2).
    """

    space: str
    family: str
    alpha: float
    gamma: ProductWeights
    L: int
    norm_g: float
    mu_bar: float
    delta: Optional[float] = None
    tau: Optional[float] = None
    eps: float = 0.01
    sigma: float = 0.01

    def __post_init__(self) -> None:
        if self.space not in SPACES:
            raise ValueError(
                f"unknown space {self.space!r}, expected one of {SPACES}"
            )
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}, expected one of {FAMILIES}"
            )
        alpha = float(self.alpha)
        if not math.isfinite(alpha) or alpha <= 1.0:
            raise ValueError(
                f"bounds require smoothness alpha > 1, got {alpha!r}"
            )
        object.__setattr__(self, "alpha", alpha)
        if not isinstance(self.gamma, ProductWeights):
            object.__setattr__(
                self, "gamma", ProductWeights(tuple(self.gamma))
            )
        object.__setattr__(self, "L", int(self.L))
        if self.L < 1:
            raise ValueError(f"lattice size must be positive, got {self.L}")
        delta = (
            (alpha - 1.0) / 2.0 if self.delta is None else float(self.delta)
        )
        if not 0.0 < delta < alpha - 1.0:
            raise ValueError(
                f"delta = {delta!r} outside (0, alpha - 1) for "
                f"alpha = {alpha!r}"
            )
        object.__setattr__(self, "delta", delta)
        tau = (
            (alpha - 1.0 - delta) / 2.0
            if self.tau is None
            else float(self.tau)
        )
        if not 0.0 < tau <= alpha - 1.0 - delta:
            raise ValueError(
                f"tau = {tau!r} outside (0, alpha - 1 - delta] for "
                f"alpha = {alpha!r}, delta = {delta!r}"
            )
        object.__setattr__(self, "tau", tau)
        if not math.isfinite(self.eps) or self.eps <= 0.0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")
        if not 0.0 < self.sigma < alpha - 0.5:
            raise ValueError(
                f"sigma = {self.sigma!r} outside (0, alpha - 1/2)"
            )
        for name in ("norm_g", "mu_bar"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be finite and nonnegative")
            object.__setattr__(self, name, v)

    @property
    def d(self) -> int:
        return self.gamma.d

    def with_data(self, norm_g: float, mu_bar: float) -> "BoundQuery":
        return replace(self, norm_g=float(norm_g), mu_bar=float(mu_bar))


@dataclass(frozen=True)
class BoundReport:
    """Evaluated bound, already scaled by the norm and the data mean."""

    err1: float
    err2: float
    total: float
    exact: bool
    note: str
    level: float

    def to_json(self) -> dict:
        return {
            "err1": self.err1,
            "err2": self.err2,
            "total": self.total,
            "exact": self.exact,
            "note": self.note,
            "level": self.level,
        }


def _quadrature_core(q: BoundQuery) -> float:
    """Shared factor ``L^(-beta) c zeta_d C`` of every err2 term."""
    alpha_eff = q.alpha - 0.5 - q.delta
    beta = alpha_eff - q.tau
    c, z = constants(q.alpha, q.gamma, q.delta)
    big_c = bound_constant_C(alpha_eff, q.tau, q.gamma)
    return float(q.L) ** (-beta) * c * z * big_c


def total_bound(q: BoundQuery, level: Union[int, float]) -> BoundReport:
    """Evaluate the truncation-plus-quadrature bound at a set level.

    Args:
        q: the query; ``norm_g`` and ``mu_bar`` scale the result.
        level: the set parameter - level nu (> 1) for crosses and
            rectangles, order m (nonnegative integer) for step crosses.

    Returns:
        BoundReport with the two contributions and their sum.  Reports
        with ``exact = False`` hold up to an absolute constant.
    """
    core = _quadrature_core(q)
    a = q.alpha
    d = q.d
    if q.family == "step-cross":
        m = int(level)
        if m != level or m < 0:
            raise ValueError(
                f"step-cross bounds need a nonnegative integer order, "
                f"got {level!r}"
            )
        if q.space == "wiener":
            err1 = 2.0 ** (-(m - d + 1) / 2.0)
            err2 = 2.0 ** (m / 2.0) * core
            exact = True
            note = "holds as displayed"
        else:
            if m < d:
                raise ValueError(
                    f"the korobov step-cross bound needs m >= d, got "
                    f"m = {m}, d = {d}"
                )
            nu1 = 2.0 ** (m - d + 1)
            nu2 = 2.0 ** m
            ctil = cross_cardinality_constant(a, q.gamma, q.eps)
            err1 = (
                math.log(nu1) ** ((d - 1) / 2.0)
                * nu1 ** (-(0.5 - 1.0 / (4.0 * a)))
            )
            err2 = nu2 ** (0.5 + 1.0 / (4.0 * a) + q.eps) * ctil * core
            exact = False
            note = "holds up to an absolute constant"
    else:
        nu = float(level)
        if not math.isfinite(nu) or nu <= 1.0:
            raise ValueError(
                f"{q.family} bounds need a level nu > 1, got {level!r}"
            )
        if q.family == "cross":
            if q.space == "wiener":
                err1 = nu ** -0.5
                err2 = nu ** 0.5 * core
                exact = True
                note = "holds as displayed"
            else:
                ctil = cross_cardinality_constant(a, q.gamma, q.eps)
                err1 = (
                    math.log(nu) ** ((d - 1) / 2.0)
                    * nu ** (-(0.5 - 1.0 / (4.0 * a)))
                )
                err2 = nu ** (0.5 + 1.0 / (4.0 * a) + q.eps) * ctil * core
                exact = False
                note = "holds up to an absolute constant"
        else:
            if q.space == "wiener":
                err1 = nu ** -0.5
                err2 = nu ** (d / 2.0) * core
                exact = True
                note = "holds as displayed"
            else:
                err1 = nu ** (-(0.5 - 1.0 / (4.0 * a)))
                err2 = nu ** ((0.5 + 1.0 / (4.0 * a)) * d) * core
                exact = False
                note = "holds up to an absolute constant"
    scale = q.norm_g * q.mu_bar
    e1 = scale * err1
    e2 = scale * err2
    return BoundReport(e1, e2, e1 + e2, exact, note, float(level))


def select_parameter(q: BoundQuery, scale: float = 1.0) -> Union[int, float]:
    """Set level balancing truncation against quadrature for the query.

    The exponents equate the decay of the two error parts up to the
    rate give-up ``sigma``; ``scale`` multiplies the level (for step
    crosses it shifts the order by ``log2(scale)`` before rounding up).

    Returns:
        Level nu (float) for crosses and rectangles, order m (int) for
        step crosses.

    Examples:
        >>> q = BoundQuery("wiener", "cross", 1.5, ProductWeights.ones(1),
        ...                100, 1.0, 1.0, sigma=0.5)
        >>> round(select_parameter(q), 10)
        10.0
    """
    scale = float(scale)
    if not math.isfinite(scale) or scale <= 0.0:
        raise ValueError(f"scale must be positive, got {scale!r}")
    rate = q.alpha - 0.5 - q.sigma
    if q.family == "step-cross":
        m = math.ceil(
            rate * math.log2(q.L) + (q.d - 1) / 2.0 + math.log2(scale)
        )
        return max(0, int(m))
    if q.family == "cross":
        expo = rate
    elif q.space == "wiener":
        expo = 2.0 * rate / (1.0 + q.d)
    else:
        expo = rate * 4.0 * q.alpha / (
            (2.0 * q.alpha + 1.0) * q.d + 2.0 * q.alpha - 1.0
        )
    return scale * float(q.L) ** expo


@dataclass(frozen=True)
class EnvelopeReport:
    """Bound on the loss gap, combining the two weighted data sums."""

    quadratic: BoundReport
    cross: BoundReport
    total: float
    exact: bool

    def to_json(self) -> dict:
        return {
            "quadratic": self.quadratic.to_json(),
            "cross": self.cross.to_json(),
            "total": self.total,
            "exact": self.exact,
        }


def loss_gap_envelope(
    query: BoundQuery,
    level: Union[int, float],
    norm_f: float,
    norm_f2: float,
    mu_y: float,
) -> EnvelopeReport:
    """Bound on ``|exact loss - compressed loss|`` for one model.

    The quadratic term compresses ``f^2`` with unit coefficients and
    the cross term compresses ``f`` against the responses, so the gap
    is at most ``bound(f^2, mu=1) + 2 bound(f, mu=mean |y|)``.

    Args:
        query: template query fixing space, family, smoothness, weights
            and lattice size (its norm and mean fields are ignored).
        level: frequency-set level or order.
        norm_f: norm of the model in the query's space.
        norm_f2: norm of the squared model in the query's space.
        mu_y: mean absolute response ``(1/N) sum |y_n|``.
    """
    r_quad = total_bound(query.with_data(norm_f2, 1.0), level)
    r_cross = total_bound(query.with_data(norm_f, mu_y), level)
    total = r_quad.total + 2.0 * r_cross.total
    return EnvelopeReport(
        r_quad, r_cross, total, r_quad.exact and r_cross.exact
    )
