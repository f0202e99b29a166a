r"""Finite frequency sets adapted to weighted smoothness.

The decay profile :math:`r_\alpha(\gamma, k) = \prod_j \max(|k_j|^{2\alpha}
/ \gamma_j, 1)` induces three nested families of finite index sets:

* cross: :math:`\{k : r_\alpha(\gamma, k) \le \nu\}`,
* rectangle: :math:`\{k : \max_j r_\alpha(\gamma_j, k_j) \le \nu\}`,
* step cross: a union of dyadic rectangles
  :math:`\bigcup_{\|t\|_1 = m} \{k : r_\alpha(\gamma_j, k_j) \le 2^{t_j}\}`.

All boundary comparisons go through one shared predicate with a relative
slack of 1e-12, so enumeration and membership can never disagree about a
frequency sitting exactly on a level line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .lattice import ProductWeights
from .special import zeta

__all__ = [
    "CapExceeded",
    "DEFAULT_CAP",
    "r_alpha",
    "rectangle_halfwidths",
    "enumerate_cross",
    "enumerate_rectangle",
    "enumerate_shape_vectors",
    "enumerate_step_cross",
    "cross_cardinality_constant",
    "cardinality_bound_cross",
    "IndexSet",
]

DEFAULT_CAP = 10_000_000

# Multiplicative slack applied to every budget comparison.  Large enough
# to swallow last-ulp noise in the power evaluations, small enough never
# to admit a genuinely out-of-budget frequency.
_SLACK = 1.0 + 1e-12

FAMILIES = ("cross", "rectangle", "step-cross", "custom")


class CapExceeded(RuntimeError):
    """Raised when an enumeration would produce more rows than allowed."""

    def __init__(self, predicted: int, cap: int):
        self.predicted = int(predicted)
        self.cap = int(cap)
        super().__init__(
            f"index set would hold {predicted} frequencies, "
            f"above the cap of {cap}"
        )


def _as_gamma(gamma: Union[ProductWeights, Sequence[float]]) -> ProductWeights:
    if isinstance(gamma, ProductWeights):
        return gamma
    return ProductWeights(tuple(gamma))


def _coord_power(absk, two_alpha: float):
    """|k|^(2 alpha) through one NumPy code path for scalars and arrays."""
    return np.power(np.float64(absk) if np.isscalar(absk) else absk,
                    np.float64(two_alpha))


def _coord_factor(two_alpha: float, gamma_j: float, kj: int) -> float:
    """Per-coordinate profile max(|k_j|^(2 alpha) / gamma_j, 1)."""
    powk = _coord_power(abs(int(kj)), two_alpha)
    return float(max(powk / gamma_j, 1.0))


def _within(factor: float, budget: float) -> bool:
    """The one boundary predicate every enumeration and query shares."""
    return factor <= budget * _SLACK


def _halfwidth(two_alpha: float, gamma_j: float, budget: float) -> int:
    """Largest q >= 0 with max(q^(2 alpha) / gamma_j, 1) within budget.

    Returns -1 when not even q = 0 qualifies (budget below 1).
    """
    if not _within(1.0, budget):
        return -1
    guess = (gamma_j * budget * _SLACK) ** (1.0 / two_alpha)
    q = max(0, int(math.floor(guess)))
    while not _within(_coord_factor(two_alpha, gamma_j, q), budget):
        q -= 1
    while _within(_coord_factor(two_alpha, gamma_j, q + 1), budget):
        q += 1
    return q


def r_alpha(
    alpha: float,
    gamma: Union[ProductWeights, Sequence[float]],
    k: Sequence[int],
) -> float:
    """Decay profile ``prod_j max(|k_j|^(2 alpha) / gamma_j, 1)``.

    Args:
        alpha: smoothness parameter, any positive value.
        gamma: product weights; length must match ``k``.
        k: integer frequency vector.

    Returns:
        The profile value, always at least 1.

    Examples:
        >>> r_alpha(1.0, (0.25,), (2,))
        16.0
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"profile requires alpha > 0, got {alpha!r}")
    gamma = _as_gamma(gamma)
    if len(k) != gamma.d:
        raise ValueError(
            f"frequency has {len(k)} coordinates but {gamma.d} weights given"
        )
    two_alpha = 2.0 * alpha
    out = 1.0
    for gj, kj in zip(gamma, k):
        out = out * _coord_factor(two_alpha, gj, kj)
    return out


def _validate_geometry(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"index sets require alpha > 0, got {alpha!r}")
    return alpha


def rectangle_halfwidths(
    alpha: float,
    gamma: Union[ProductWeights, Sequence[float]],
    nu: float,
) -> np.ndarray:
    """Per-coordinate half-widths ``k*_j`` of the rectangle at level nu.

    ``k*_j`` is the largest integer with ``max(q^(2 alpha) / gamma_j, 1)``
    within the budget ``nu``; equivalently ``floor((gamma_j nu)^(1/(2
    alpha)))`` away from exact boundary ties.

    Examples:
        >>> rectangle_halfwidths(1.0, (1.0,), 16.0).tolist()
        [4]
    """
    alpha = _validate_geometry(alpha)
    gamma = _as_gamma(gamma)
    nu = float(nu)
    if not math.isfinite(nu) or nu < 1.0:
        raise ValueError(f"rectangle level must be at least 1, got {nu!r}")
    two_alpha = 2.0 * alpha
    return np.asarray(
        [_halfwidth(two_alpha, gj, nu) for gj in gamma], dtype=np.int64
    )


def _halfwidth_at_partial(
    two_alpha: float, gamma_j: float, partial: float, nu: float
) -> int:
    """Largest q >= 0 with ``partial * factor(q)`` within nu, else -1.

    The boundary is settled by the same left-to-right product a scalar
    membership query accumulates, so enumeration and membership agree
    bit for bit.
    """
    if not _within(partial * 1.0, nu):
        return -1
    guess = (gamma_j * (nu * _SLACK / partial)) ** (1.0 / two_alpha)
    q = max(0, int(math.floor(guess)))
    while q > 0 and not _within(
        partial * _coord_factor(two_alpha, gamma_j, q), nu
    ):
        q -= 1
    while _within(
        partial * _coord_factor(two_alpha, gamma_j, q + 1), nu
    ):
        q += 1
    return q


def _cross_recurse(
    two_alpha: float,
    gamma: tuple[float, ...],
    nu: float,
    j: int,
    partial: float,
    prefix: list[int],
    sink: Optional[list[tuple[int, ...]]],
) -> int:
    """Count (and optionally emit) cross frequencies below the prefix."""
    d = len(gamma)
    q = _halfwidth_at_partial(two_alpha, gamma[j], partial, nu)
    if q < 0:
        return 0
    if j == d - 1:
        if sink is not None:
            base = tuple(prefix)
            for kj in range(-q, q + 1):
                sink.append(base + (kj,))
        return 2 * q + 1
    total = 0
    for kj in range(-q, q + 1):
        f = _coord_factor(two_alpha, gamma[j], kj)
        prefix.append(kj)
        total += _cross_recurse(
            two_alpha, gamma, nu, j + 1, partial * f, prefix, sink
        )
        prefix.pop()
    return total


def enumerate_cross(
    alpha: float,
    gamma: Union[ProductWeights, Sequence[float]],
    nu: float,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """All frequencies with profile ``r_alpha(gamma, k) <= nu``.

    Args:
        alpha: smoothness parameter, positive.
        gamma: product weights, one per coordinate.
        nu: level of the cross, at least 1 (below 1 the set is empty of
            even the origin, which is rejected).
        cap: maximum cardinality; a counting pass runs first and raises
            :class:`CapExceeded` with the predicted size when breached.

    Returns:
        Array of shape (M, d) in lexicographic row order.

    Examples:
        >>> enumerate_cross(1.0, (1.0,), 1.0).ravel().tolist()
        [-1, 0, 1]
    """
    alpha = _validate_geometry(alpha)
    gamma = _as_gamma(gamma)
    nu = float(nu)
    if not math.isfinite(nu) or nu < 1.0:
        raise ValueError(f"cross level must be at least 1, got {nu!r}")
    two_alpha = 2.0 * alpha
    gam = tuple(gamma)
    count = _cross_recurse(two_alpha, gam, nu, 0, 1.0, [], None)
    if count > cap:
        raise CapExceeded(count, cap)
    rows: list[tuple[int, ...]] = []
    _cross_recurse(two_alpha, gam, nu, 0, 1.0, [], rows)
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), gamma.d)


def enumerate_rectangle(
    alpha: float,
    gamma: Union[ProductWeights, Sequence[float]],
    nu: float,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """All frequencies in the rectangle at level nu, lexicographically."""
    gamma = _as_gamma(gamma)
    widths = rectangle_halfwidths(alpha, gamma, nu)
    count = 1
    for w in widths:
        count *= 2 * int(w) + 1
    if count > cap:
        raise CapExceeded(count, cap)
    axes = [np.arange(-int(w), int(w) + 1, dtype=np.int64) for w in widths]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([gr.ravel() for gr in grids], axis=1)


def enumerate_shape_vectors(m: int, d: int) -> np.ndarray:
    """All nonnegative integer vectors of length d summing to m.

    Rows come out in lexicographic order; there are
    ``comb(d - 1 + m, d - 1)`` of them.

    Examples:
        >>> enumerate_shape_vectors(2, 2).tolist()
        [[0, 2], [1, 1], [2, 0]]
    """
    m = int(m)
    d = int(d)
    if m < 0 or d < 1:
        raise ValueError(f"need m >= 0 and d >= 1, got m={m}, d={d}")
    rows: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, coords_left: int) -> None:
        if coords_left == 1:
            rows.append(tuple(prefix) + (remaining,))
            return
        for t in range(remaining + 1):
            prefix.append(t)
            rec(prefix, remaining - t, coords_left - 1)
            prefix.pop()

    rec([], m, d)
    return np.asarray(rows, dtype=np.int64)


def _dyadic_bounds(
    two_alpha: float, gamma_j: float, t: int
) -> tuple[int, int]:
    """(lower, upper) half-widths of the dyadic annulus at level t.

    Upper bound: largest q with the coordinate profile within 2^t.  Lower
    bound: same at 2^(t-1); at t = 0 the subtracted set is empty, so the
    lower half-width is -1 and the piece is the whole interval.
    """
    up = _halfwidth(two_alpha, gamma_j, 2.0 ** t)
    if t == 0:
        return -1, up
    low = _halfwidth(two_alpha, gamma_j, 2.0 ** (t - 1))
    return low, up


def _step_cross_piece_sizes(
    two_alpha: float, gamma: tuple[float, ...], shapes: np.ndarray
) -> list[int]:
    """Exact cardinality of each disjoint rectangle-difference piece."""
    sizes: list[int] = []
    for t in shapes:
        size = 2 * _halfwidth(two_alpha, gamma[0], 2.0 ** int(t[0])) + 1
        for j in range(1, len(gamma)):
            tj = int(t[j])
            low, up = _dyadic_bounds(two_alpha, gamma[j], tj)
            if tj == 0:
                size *= 2 * up + 1
            else:
                size *= 2 * (up - low)
            if size == 0:
                break
        sizes.append(size)
    return sizes


def enumerate_step_cross(
    alpha: float,
    gamma: Union[ProductWeights, Sequence[float]],
    m: int,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """Union of dyadic rectangles over all shapes ``||t||_1 = m``.

    The set is assembled as the plain union of the cumulative boxes
    ``{k : per-coordinate profile <= 2^(t_j) for all j}`` over the shape
    vectors, with duplicates removed; the cap check uses the exact
    cardinality obtained from the equivalent disjoint decomposition.

    Examples:
        >>> enumerate_step_cross(1.0, (1.0,), 2).ravel().tolist()
        [-2, -1, 0, 1, 2]
    """
    alpha = _validate_geometry(alpha)
    gamma = _as_gamma(gamma)
    m = int(m)
    if m < 0:
        raise ValueError(f"step-cross order must be nonnegative, got {m}")
    two_alpha = 2.0 * alpha
    gam = tuple(gamma)
    shapes = enumerate_shape_vectors(m, gamma.d)
    total = sum(_step_cross_piece_sizes(two_alpha, gam, shapes))
    if total > cap:
        raise CapExceeded(total, cap)
    seen: set[tuple[int, ...]] = set()
    for t in shapes:
        widths = [
            _halfwidth(two_alpha, gam[j], 2.0 ** int(t[j]))
            for j in range(len(gam))
        ]
        if any(w < 0 for w in widths):
            continue
        axes = [range(-w, w + 1) for w in widths]
        stack = [()]
        for ax in axes:
            stack = [pre + (kj,) for pre in stack for kj in ax]
        seen.update(stack)
    rows = sorted(seen)
    if len(rows) != total:
        raise AssertionError(
            f"union size {len(rows)} disagrees with the disjoint "
            f"decomposition total {total}"
        )
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), gamma.d)


def _enumerate_step_cross_disjoint(
    alpha: float,
    gamma: Union[ProductWeights, Sequence[float]],
    m: int,
) -> np.ndarray:
    """Second route to the step cross: concatenate the disjoint pieces.

    Kept separate from :func:`enumerate_step_cross` so tests can confirm
    the two constructions produce the same set and that the pieces are
    pairwise disjoint.
    """
    alpha = _validate_geometry(alpha)
    gamma = _as_gamma(gamma)
    two_alpha = 2.0 * alpha
    gam = tuple(gamma)
    rows: list[tuple[int, ...]] = []
    for t in enumerate_shape_vectors(int(m), gamma.d):
        up0 = _halfwidth(two_alpha, gam[0], 2.0 ** int(t[0]))
        if up0 < 0:
            continue
        axes: list[list[int]] = [list(range(-up0, up0 + 1))]
        empty = False
        for j in range(1, len(gam)):
            low, up = _dyadic_bounds(two_alpha, gam[j], int(t[j]))
            if int(t[j]) == 0:
                vals = list(range(-up, up + 1))
            else:
                vals = [v for v in range(-up, up + 1) if abs(v) > low]
            if not vals:
                empty = True
                break
            axes.append(sorted(vals))
        if empty:
            continue
        piece = [()]
        for ax in axes:
            piece = [pre + (kj,) for pre in piece for kj in ax]
        rows.extend(piece)
    if len(rows) != len(set(rows)):
        raise AssertionError("disjoint pieces overlap")
    return np.asarray(sorted(rows), dtype=np.int64).reshape(
        len(rows), gamma.d
    )


def _min_dyadic_level(factor: float) -> int:
    """Smallest t >= 0 with the coordinate profile within 2^t."""
    if _within(factor, 1.0):
        return 0
    s = max(0, int(math.ceil(math.log2(factor))) - 1)
    while not _within(factor, 2.0 ** s):
        s += 1
    return s


def cross_cardinality_constant(
    alpha: float,
    gamma: Union[ProductWeights, Sequence[float]],
    eps: float,
) -> float:
    """Weight-dependent constant in the cross cardinality bound."""
    alpha = _validate_geometry(alpha)
    gamma = _as_gamma(gamma)
    eps = float(eps)
    if not math.isfinite(eps) or eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    z = zeta(1.0 + 2.0 * alpha * eps)
    expo = 1.0 / (2.0 * alpha) + eps
    out = 1.0
    for gj in gamma:
        out *= 1.0 + 2.0 * z * gj ** expo
    return out


def cardinality_bound_cross(
    alpha: float,
    gamma: Union[ProductWeights, Sequence[float]],
    nu: float,
    eps: float,
) -> float:
    """Upper bound ``nu^(1/(2 alpha) + eps) * C(alpha, eps, gamma)`` on
    the cross cardinality, valid for every nu >= 1 and eps > 0."""
    nu = float(nu)
    if not math.isfinite(nu) or nu < 1.0:
        raise ValueError(f"level must be at least 1, got {nu!r}")
    alpha = _validate_geometry(alpha)
    expo = 1.0 / (2.0 * alpha) + float(eps)
    return nu ** expo * cross_cardinality_constant(alpha, gamma, eps)


@dataclass(eq=False)
class IndexSet:
    """A finite frequency set with its generating metadata.

    Attributes:
        family: one of "cross", "rectangle", "step-cross", "custom".
        alpha: smoothness parameter the set was built for.
        gamma: product weights the set was built for.
        param: family parameter (level nu, or order m for step crosses);
            None for custom sets.
        frequencies: materialised rows (M, d) in lexicographic order, or
            None for a named family kept as a lazy descriptor.
        count: cardinality when known without materialising.
    """

    family: str
    alpha: float
    gamma: ProductWeights
    param: Optional[float] = None
    frequencies: Optional[np.ndarray] = None
    count: Optional[int] = field(default=None)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}, expected one of {FAMILIES}"
            )
        self.alpha = _validate_geometry(self.alpha)
        self.gamma = _as_gamma(self.gamma)
        if self.family == "custom":
            if self.frequencies is None:
                raise ValueError("custom sets must supply frequencies")
            if self.param is not None:
                raise ValueError("custom sets take no family parameter")
        elif self.param is None:
            raise ValueError(f"family {self.family!r} needs a parameter")
        if self.frequencies is not None:
            freq = np.asarray(self.frequencies, dtype=np.int64)
            if freq.ndim != 2 or freq.shape[1] != self.gamma.d:
                raise ValueError(
                    f"frequencies must be (M, {self.gamma.d}), "
                    f"got shape {freq.shape}"
                )
            order = np.lexsort(freq.T[::-1])
            freq = freq[order]
            if len(freq) > 1 and np.any(
                np.all(freq[1:] == freq[:-1], axis=1)
            ):
                if self.family != "custom":
                    raise ValueError("duplicate frequency rows")
                keep = np.ones(len(freq), dtype=bool)
                keep[1:] = np.any(freq[1:] != freq[:-1], axis=1)
                freq = freq[keep]
            freq.flags.writeable = False
            self.frequencies = freq
            if self.count is not None and self.count != len(freq):
                raise ValueError(
                    f"stored count {self.count} disagrees with "
                    f"{len(freq)} materialised rows"
                )
            self.count = len(freq)

    # -- constructors -------------------------------------------------

    @classmethod
    def cross(
        cls,
        alpha: float,
        gamma: Union[ProductWeights, Sequence[float]],
        nu: float,
        materialize: bool = True,
        cap: int = DEFAULT_CAP,
    ) -> "IndexSet":
        out = cls("cross", float(alpha), _as_gamma(gamma), float(nu))
        return out.materialized(cap) if materialize else out

    @classmethod
    def rectangle(
        cls,
        alpha: float,
        gamma: Union[ProductWeights, Sequence[float]],
        nu: float,
        materialize: bool = True,
        cap: int = DEFAULT_CAP,
    ) -> "IndexSet":
        out = cls("rectangle", float(alpha), _as_gamma(gamma), float(nu))
        return out.materialized(cap) if materialize else out

    @classmethod
    def step_cross(
        cls,
        alpha: float,
        gamma: Union[ProductWeights, Sequence[float]],
        m: int,
        materialize: bool = True,
        cap: int = DEFAULT_CAP,
    ) -> "IndexSet":
        out = cls("step-cross", float(alpha), _as_gamma(gamma), int(m))
        return out.materialized(cap) if materialize else out

    @classmethod
    def custom(
        cls,
        frequencies: Iterable[Sequence[int]],
        alpha: float,
        gamma: Union[ProductWeights, Sequence[float]],
    ) -> "IndexSet":
        freq = np.asarray(list(frequencies) if not isinstance(
            frequencies, np.ndarray) else frequencies, dtype=np.int64)
        if freq.ndim != 2:
            raise ValueError("custom frequencies must be a 2-d array")
        return cls("custom", float(alpha), _as_gamma(gamma), None, freq)

    # -- basic queries -------------------------------------------------

    @property
    def d(self) -> int:
        return self.gamma.d

    def descriptor(self) -> "IndexSet":
        """Metadata-only copy (frequencies dropped for named families)."""
        if self.family == "custom":
            return self
        return IndexSet(
            self.family, self.alpha, self.gamma, self.param, None, self.count
        )

    def materialized(self, cap: int = DEFAULT_CAP) -> "IndexSet":
        """This set with frequencies enumerated (no-op when present)."""
        if self.frequencies is not None:
            return self
        if self.family == "cross":
            freq = enumerate_cross(self.alpha, self.gamma, self.param, cap)
        elif self.family == "rectangle":
            freq = enumerate_rectangle(
                self.alpha, self.gamma, self.param, cap
            )
        else:
            freq = enumerate_step_cross(
                self.alpha, self.gamma, int(self.param), cap
            )
        return IndexSet(
            self.family, self.alpha, self.gamma, self.param, freq, self.count
        )

    def cardinality(self, cap: int = DEFAULT_CAP) -> int:
        """Exact cardinality, computed without materialising if needed."""
        if self.count is not None:
            return self.count
        two_alpha = 2.0 * self.alpha
        gam = tuple(self.gamma)
        if self.family == "cross":
            n = _cross_recurse(
                two_alpha, gam, float(self.param), 0, 1.0, [], None
            )
        elif self.family == "rectangle":
            n = 1
            for w in rectangle_halfwidths(self.alpha, gam, self.param):
                n *= 2 * int(w) + 1
        elif self.family == "step-cross":
            shapes = enumerate_shape_vectors(int(self.param), self.d)
            n = sum(_step_cross_piece_sizes(two_alpha, gam, shapes))
        else:
            n = len(self.frequencies)
        self.count = n
        return n

    @cached_property
    def _row_set(self) -> frozenset:
        if self.frequencies is None:
            raise ValueError("custom membership needs materialised rows")
        return frozenset(map(tuple, self.frequencies.tolist()))

    def contains(self, k: Sequence[int]) -> bool:
        """O(d) membership test from the family metadata alone.

        Custom sets fall back to a hashed lookup of the stored rows.
        """
        if len(k) != self.d:
            raise ValueError(
                f"frequency has {len(k)} coordinates, set has {self.d}"
            )
        if self.family == "custom":
            return tuple(int(v) for v in k) in self._row_set
        two_alpha = 2.0 * self.alpha
        if self.family == "cross":
            partial = 1.0
            for gj, kj in zip(self.gamma, k):
                partial = partial * _coord_factor(two_alpha, gj, kj)
                if not _within(partial, self.param):
                    return False
            return True
        if self.family == "rectangle":
            return all(
                _within(_coord_factor(two_alpha, gj, kj), self.param)
                for gj, kj in zip(self.gamma, k)
            )
        total = 0
        m = int(self.param)
        for gj, kj in zip(self.gamma, k):
            total += _min_dyadic_level(_coord_factor(two_alpha, gj, kj))
            if total > m:
                return False
        return True

    def require_space(
        self, alpha: float, gamma: Union[ProductWeights, Sequence[float]]
    ) -> None:
        """Guard against mixing a set with a different smoothness setup."""
        gamma = _as_gamma(gamma)
        if float(alpha) != self.alpha or tuple(gamma) != tuple(self.gamma):
            raise ValueError(
                f"index set was built for alpha={self.alpha}, "
                f"gamma={tuple(self.gamma)}; asked to serve "
                f"alpha={float(alpha)}, gamma={tuple(gamma)}"
            )

    # -- serialisation -------------------------------------------------

    def to_json(self) -> dict:
        obj: dict = {
            "family": self.family,
            "alpha": self.alpha,
            "gamma": list(self.gamma),
            "param": self.param,
            "count": self.count,
        }
        if self.family == "custom":
            obj["frequencies"] = self.frequencies.tolist()
        return obj

    @classmethod
    def from_json(
        cls,
        obj: dict,
        materialize: bool = True,
        cap: int = DEFAULT_CAP,
    ) -> "IndexSet":
        family = obj["family"]
        gamma = ProductWeights(tuple(float(v) for v in obj["gamma"]))
        if family == "custom":
            return cls(
                family, float(obj["alpha"]), gamma, None,
                np.asarray(obj["frequencies"], dtype=np.int64),
            )
        param = obj["param"]
        param = int(param) if family == "step-cross" else float(param)
        count = obj.get("count")
        out = cls(
            family, float(obj["alpha"]), gamma, param, None,
            None if count is None else int(count),
        )
        return out.materialized(cap) if materialize else out

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        if (
            self.family != other.family
            or self.alpha != other.alpha
            or tuple(self.gamma) != tuple(other.gamma)
            or self.param != other.param
            or self.count != other.count
        ):
            return False
        a, b = self.frequencies, other.frequencies
        if (a is None) != (b is None):
            return False
        return a is None or bool(np.array_equal(a, b))
