r"""Compressing a dataset onto lattice nodes.

Given data ``(x_n, y_n)`` in the unit cube, a rank-1 lattice ``Z`` and a
finite frequency set ``K``, the two weight vectors

.. math:: W_\ell = \frac{1}{N} \sum_{k \in K} \sum_{n=1}^{N}
          c_n\, e^{2 \pi i\, k \cdot (x_n - z_\ell)}

with coefficients ``c = 1`` and ``c = y`` carry everything a quadratic
loss needs from the data: evaluating a model on the ``L`` nodes and
taking two weighted dot products replaces the sweep over all ``N``
samples.

Four interchangeable algorithms produce the same vectors: a direct
reference summation, an FFT-bucketed route for arbitrary sets, and two
kernel routes (Dirichlet products) for rectangles and step crosses that
never enumerate the set at all.  A fifth route specialises to data that
itself sits on a rank-1 lattice.
"""

from __future__ import annotations

import base64
import json
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .index_sets import DEFAULT_CAP, CapExceeded, IndexSet
from .lattice import LatticeRule, generate_points

__all__ = [
    "Dataset",
    "WeightSet",
    "dirichlet_kernel",
    "weights_naive",
    "weights_general_fft",
    "weights_rectangle",
    "weights_step_cross",
    "weights_step_cross_pair",
    "weights_lattice_data",
    "compress",
]

_TWO_PI = 2.0 * math.pi

# Direct-summation guard: |K| * N * L beyond this is refused.
NAIVE_CAP = 400_000_000

# Imaginary parts below this are discarded for symmetric families.
_IMAG_TOL = 1e-9

_WEIGHT_MAGIC = b"LCW1"


@dataclass(eq=False)
class Dataset:
    """Supervised samples ``(X, Y)`` with points in the unit cube.

    Attributes:
        X: array (N, d) with every entry in [0, 1).
        Y: array (N,) of finite responses.
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=np.float64)
        Y = np.asarray(self.Y, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError(f"X must be 2-d, got shape {X.shape}")
        if Y.ndim != 1:
            raise ValueError(f"Y must be 1-d, got shape {Y.shape}")
        if X.shape[0] != Y.shape[0]:
            raise ValueError(
                f"{X.shape[0]} points but {Y.shape[0]} responses"
            )
        if X.shape[0] == 0:
            raise ValueError("dataset must hold at least one sample")
        if not np.all(np.isfinite(X)):
            i, j = map(int, np.argwhere(~np.isfinite(X))[0])
            raise ValueError(
                f"row {i}, coordinate {j + 1}: value {X[i, j]!r} not finite"
            )
        bad = (X < 0.0) | (X >= 1.0)
        if np.any(bad):
            i, j = map(int, np.argwhere(bad)[0])
            raise ValueError(
                f"row {i}, coordinate {j + 1}: value {X[i, j]!r} "
                f"outside [0, 1)"
            )
        if not np.all(np.isfinite(Y)):
            i = int(np.argwhere(~np.isfinite(Y))[0][0])
            raise ValueError(f"row {i}: response {Y[i]!r} not finite")
        X.flags.writeable = False
        Y.flags.writeable = False
        self.X = X
        self.Y = Y
        self._mean_y2 = float(np.mean(Y * Y))

    @property
    def N(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def mean_y2(self) -> float:
        """Mean squared response, the constant term of the loss."""
        return self._mean_y2


def _coefficients(data: Dataset, c: Union[str, Sequence[float]]) -> np.ndarray:
    """Resolve the coefficient vector: 'ones', 'responses', or explicit."""
    if isinstance(c, str):
        if c == "ones":
            return np.ones(data.N, dtype=np.float64)
        if c == "responses":
            return np.asarray(data.Y, dtype=np.float64)
        raise ValueError(
            f"coefficient choice must be 'ones', 'responses' or a vector, "
            f"got {c!r}"
        )
    arr = np.asarray(c, dtype=np.float64)
    if arr.shape != (data.N,):
        raise ValueError(
            f"coefficient vector has shape {arr.shape}, expected ({data.N},)"
        )
    return arr


def dirichlet_kernel(n: int, x):
    """Dirichlet kernel ``D_n(x) = sum_{|k| <= n} exp(2 pi i k x)``.

    Evaluated through the closed form ``sin(2 pi (n + 1/2) x) /
    sin(pi x)`` with the limit value ``2 n + 1`` substituted whenever x
    is within 1e-8 of an integer.

    Args:
        n: kernel order, nonnegative; order 0 is identically 1.
        x: scalar or array argument.

    Returns:
        Kernel values, same shape as ``x``.

    Examples:
        >>> dirichlet_kernel(1, 0.5)
        -1.0
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"kernel order must be nonnegative, got {n}")
    arr = np.asarray(x, dtype=np.float64)
    near = np.abs(arr - np.round(arr)) < 1e-8
    safe = np.where(near, 0.5, arr)
    out = np.sin(_TWO_PI * (n + 0.5) * safe) / np.sin(np.pi * safe)
    out = np.where(near, float(2 * n + 1), out)
    if np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0):
        return float(out)
    return out


def _require_frequencies(index_set: IndexSet, cap: int) -> np.ndarray:
    mat = index_set.materialized(cap)
    return mat.frequencies


def _check_dims(data_d: int, rule: LatticeRule, index_set: IndexSet) -> None:
    if rule.d != data_d or index_set.d != data_d:
        raise ValueError(
            f"dimension mismatch: data d={data_d}, rule d={rule.d}, "
            f"index set d={index_set.d}"
        )


def _block_bounds(n: int, block: int) -> list[tuple[int, int]]:
    return [(s, min(s + block, n)) for s in range(0, n, block)]


def _run_blocks(bounds, fn, threads: int) -> list:
    """Apply fn to the row blocks, in parallel when asked.

    Block boundaries depend only on the problem size, and the results are
    combined in block order afterwards, so the output is bitwise
    independent of the thread count.
    """
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            return list(pool.map(lambda se: fn(se[0], se[1]), bounds))
    return [fn(s, e) for s, e in bounds]


def weights_naive(
    data: Dataset,
    c: Union[str, Sequence[float]],
    rule: LatticeRule,
    index_set: IndexSet,
    cap: int = NAIVE_CAP,
) -> np.ndarray:
    """Reference weights by direct summation over nodes, samples and
    frequencies.  Cost O(L N |K|); refuses work above ``cap``.

    Every fast algorithm is tested against this one.
    """
    _check_dims(data.d, rule, index_set)
    freq = _require_frequencies(index_set, DEFAULT_CAP)
    work = rule.L * data.N * len(freq)
    if work > cap:
        raise CapExceeded(work, cap)
    cvec = _coefficients(data, c)
    nodes = generate_points(rule)
    out = np.empty(rule.L, dtype=np.complex128)
    ft = freq.T.astype(np.float64)
    for ell in range(rule.L):
        phase = (data.X - nodes[ell][None, :]) @ ft
        out[ell] = (cvec @ np.exp(2j * np.pi * phase)).sum()
    return out / data.N


def _adjoint_transform(
    X: np.ndarray, cvec: np.ndarray, freq: np.ndarray, threads: int
) -> np.ndarray:
    """phi_hat_k = (1/N) sum_n c_n exp(2 pi i k . x_n), blocked over n."""
    n_rows, m = X.shape[0], freq.shape[0]
    block = max(1, (1 << 22) // max(m, 1))
    ft = freq.T.astype(np.float64)

    def one(s: int, e: int) -> np.ndarray:
        ph = np.exp(2j * np.pi * (X[s:e] @ ft))
        return cvec[s:e] @ ph

    parts = _run_blocks(_block_bounds(n_rows, block), one, threads)
    acc = np.zeros(m, dtype=np.complex128)
    for p in parts:
        acc += p
    return acc / n_rows


def _fold_to_nodes(
    phihat: np.ndarray, freq: np.ndarray, rule: LatticeRule
) -> np.ndarray:
    """Bucket coefficients by residue -k.g mod L, then one inverse FFT."""
    residues = (-(freq @ np.asarray(rule.g, dtype=np.int64))) % rule.L
    h_re = np.bincount(residues, weights=phihat.real, minlength=rule.L)
    h_im = np.bincount(residues, weights=phihat.imag, minlength=rule.L)
    return rule.L * np.fft.ifft(h_re + 1j * h_im)


def weights_general_fft(
    data: Dataset,
    c: Union[str, Sequence[float]],
    rule: LatticeRule,
    index_set: IndexSet,
    threads: int = 1,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """Weights for an arbitrary frequency set.

    One adjoint nonequispaced transform gives the set's Fourier data;
    folding it onto the residues of ``k . g`` modulo L and a single
    length-L inverse FFT finish the job.  Cost O(d |K| N + L log L).
    """
    _check_dims(data.d, rule, index_set)
    freq = _require_frequencies(index_set, cap)
    cvec = _coefficients(data, c)
    phihat = _adjoint_transform(data.X, cvec, freq, threads)
    return _fold_to_nodes(phihat, freq, rule)


def _general_fft_pair(
    data: Dataset,
    rule: LatticeRule,
    index_set: IndexSet,
    threads: int,
    cap: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Both coefficient choices in one pass over the transform matrix."""
    freq = _require_frequencies(index_set, cap)
    m = freq.shape[0]
    block = max(1, (1 << 22) // max(m, 1))
    ft = freq.T.astype(np.float64)
    ones = np.ones(data.N, dtype=np.float64)

    def one(s: int, e: int) -> tuple[np.ndarray, np.ndarray]:
        ph = np.exp(2j * np.pi * (data.X[s:e] @ ft))
        return ones[s:e] @ ph, data.Y[s:e] @ ph

    parts = _run_blocks(_block_bounds(data.N, block), one, threads)
    acc1 = np.zeros(m, dtype=np.complex128)
    acc2 = np.zeros(m, dtype=np.complex128)
    for p1, p2 in parts:
        acc1 += p1
        acc2 += p2
    return (
        _fold_to_nodes(acc1 / data.N, freq, rule),
        _fold_to_nodes(acc2 / data.N, freq, rule),
    )


def _rectangle_pair_kernel(
    data: Dataset,
    rule: LatticeRule,
    widths: np.ndarray,
    cvecs: list[np.ndarray],
    threads: int,
) -> list[np.ndarray]:
    nodes = generate_points(rule)
    L, d = rule.L, data.d
    block = max(1, (1 << 21) // max(L, 1))

    def one(s: int, e: int) -> list[np.ndarray]:
        prod = dirichlet_kernel(
            int(widths[0]), data.X[s:e, 0][:, None] - nodes[None, :, 0]
        )
        for j in range(1, d):
            prod = prod * dirichlet_kernel(
                int(widths[j]), data.X[s:e, j][:, None] - nodes[None, :, j]
            )
        return [cv[s:e] @ prod for cv in cvecs]

    parts = _run_blocks(_block_bounds(data.N, block), one, threads)
    outs = [np.zeros(L, dtype=np.float64) for _ in cvecs]
    for part in parts:
        for i, p in enumerate(part):
            outs[i] += p
    return [o / data.N for o in outs]


def weights_rectangle(
    data: Dataset,
    c: Union[str, Sequence[float]],
    rule: LatticeRule,
    index_set: IndexSet,
    threads: int = 1,
) -> np.ndarray:
    """Weights for a rectangle set via products of Dirichlet kernels.

    The frequency sum factorises per coordinate, so the set is never
    enumerated.  Cost O(L N d), independent of the cardinality.
    """
    _check_dims(data.d, rule, index_set)
    if index_set.family != "rectangle":
        raise ValueError(
            f"rectangle kernel weights need a rectangle set, "
            f"got family {index_set.family!r}"
        )
    from .index_sets import rectangle_halfwidths

    widths = rectangle_halfwidths(
        index_set.alpha, index_set.gamma, index_set.param
    )
    cvec = _coefficients(data, c)
    return _rectangle_pair_kernel(data, rule, widths, [cvec], threads)[0]


def _step_cross_pair_kernel(
    data: Dataset,
    rule: LatticeRule,
    index_set: IndexSet,
    cvecs: list[np.ndarray],
    threads: int,
) -> list[np.ndarray]:
    from .index_sets import (
        _dyadic_bounds,
        enumerate_shape_vectors,
    )

    alpha = index_set.alpha
    gamma = tuple(index_set.gamma)
    m = int(index_set.param)
    two_alpha = 2.0 * alpha
    d, L = data.d, rule.L
    nodes = generate_points(rule)

    bounds_tbl = [
        [_dyadic_bounds(two_alpha, gamma[j], t) for t in range(m + 1)]
        for j in range(d)
    ]
    shapes = []
    for t in enumerate_shape_vectors(m, d):
        row = tuple(int(v) for v in t)
        empty = False
        for j in range(1, d):
            low, up = bounds_tbl[j][row[j]]
            if row[j] >= 1 and up == low:
                empty = True
                break
        if not empty:
            shapes.append(row)

    block = max(1, (1 << 28) // (8 * max(1, d * (m + 2) * L)))

    def one(s: int, e: int) -> list[np.ndarray]:
        diffs = [
            data.X[s:e, j][:, None] - nodes[None, :, j] for j in range(d)
        ]
        kernels: dict[tuple[int, int], np.ndarray] = {}

        def kernel(j: int, order: int) -> np.ndarray:
            key = (j, order)
            if key not in kernels:
                kernels[key] = dirichlet_kernel(order, diffs[j])
            return kernels[key]

        factors: dict[tuple[int, int], np.ndarray] = {}

        def factor(j: int, t: int) -> np.ndarray:
            key = (j, t)
            if key not in factors:
                low, up = bounds_tbl[j][t]
                if j == 0 or t == 0:
                    factors[key] = kernel(j, up)
                else:
                    factors[key] = kernel(j, up) - kernel(j, low)
            return factors[key]

        total = np.zeros((e - s, L), dtype=np.float64)
        stack: list[np.ndarray] = []
        prev: Optional[tuple[int, ...]] = None
        for row in shapes:
            keep = 0
            if prev is not None:
                while keep < d and row[keep] == prev[keep]:
                    keep += 1
            del stack[keep:]
            for j in range(keep, d):
                f = factor(j, row[j])
                stack.append(f if j == 0 else stack[-1] * f)
            total += stack[-1]
            prev = row
        return [cv[s:e] @ total for cv in cvecs]

    parts = _run_blocks(_block_bounds(data.N, block), one, threads)
    outs = [np.zeros(L, dtype=np.float64) for _ in cvecs]
    for part in parts:
        for i, p in enumerate(part):
            outs[i] += p
    return [o / data.N for o in outs]


def weights_step_cross(
    data: Dataset,
    c: Union[str, Sequence[float]],
    rule: LatticeRule,
    index_set: IndexSet,
    threads: int = 1,
) -> np.ndarray:
    """Weights for a step cross without enumerating it.

    The disjoint dyadic decomposition turns the frequency sum into a sum
    over shape vectors of per-coordinate Dirichlet kernel differences;
    within the lexicographic sweep over shapes, partial products are
    reused across shared prefixes.  Cost O(|shapes| L N d) at worst.
    """
    _check_dims(data.d, rule, index_set)
    if index_set.family != "step-cross":
        raise ValueError(
            f"step-cross kernel weights need a step-cross set, "
            f"got family {index_set.family!r}"
        )
    cvec = _coefficients(data, c)
    return _step_cross_pair_kernel(data, rule, index_set, [cvec], threads)[0]


def weights_step_cross_pair(
    data: Dataset,
    rule: LatticeRule,
    index_set: IndexSet,
    threads: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Both weight vectors of a step cross in one shared kernel pass."""
    _check_dims(data.d, rule, index_set)
    if index_set.family != "step-cross":
        raise ValueError(
            f"step-cross kernel weights need a step-cross set, "
            f"got family {index_set.family!r}"
        )
    ones = np.ones(data.N, dtype=np.float64)
    resp = np.asarray(data.Y, dtype=np.float64)
    w1, w2 = _step_cross_pair_kernel(
        data, rule, index_set, [ones, resp], threads
    )
    return w1, w2


def _points_on_rule(rule: LatticeRule, X: np.ndarray) -> bool:
    pts = generate_points(rule)
    return X.shape == pts.shape and bool(np.max(np.abs(X - pts)) <= 1e-12)


def _is_sublattice(data_rule: LatticeRule, rule: LatticeRule) -> bool:
    """Whether every node of ``rule`` is a node of ``data_rule``.

    It suffices that the first nonzero node is: z_1 = g / L equals some
    n h / N (mod 1) exactly when N g_i - n L h_i vanishes modulo L N for
    all i.  Checked in exact integer arithmetic.
    """
    N, h = data_rule.L, data_rule.g
    L, g = rule.L, rule.g
    mod = L * N
    for n in range(N):
        if all((N * gi - n * L * hi) % mod == 0 for gi, hi in zip(g, h)):
            return True
    return False


def weights_lattice_data(
    data_rule: LatticeRule,
    responses: Optional[Sequence[float]],
    rule: LatticeRule,
    index_set: IndexSet,
    dataset: Optional[Dataset] = None,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """Weights when the data sites are themselves a rank-1 lattice.

    With unit coefficients (``responses=None``) the Fourier data of the
    set is the dual-lattice indicator, free of charge; with responses it
    is one length-N FFT plus a gather.  If the node lattice is contained
    in the data lattice, the unit-coefficient weights collapse to the
    constant ``|K intersect dual(X)|``.  Cost O(d |K| + L log L), plus
    O(N log N) when responses are used.

    Args:
        data_rule: rule generating the data sites.
        responses: response values in node order, or None for unit
            coefficients.
        rule: node lattice of the compression.
        index_set: frequency set (materialised on demand).
        dataset: optional cross-check that the dataset really consists
            of the data lattice in canonical order.
    """
    if data_rule.d != rule.d:
        raise ValueError(
            f"data lattice d={data_rule.d}, node lattice d={rule.d}"
        )
    if index_set.d != rule.d:
        raise ValueError(
            f"index set d={index_set.d} does not match lattice d={rule.d}"
        )
    freq = _require_frequencies(index_set, cap)
    N = data_rule.L
    if dataset is not None:
        if dataset.N != N or not _points_on_rule(data_rule, dataset.X):
            raise ValueError(
                "dataset points are not the nodes of the stated data rule"
            )
    kh = (freq @ np.asarray(data_rule.g, dtype=np.int64)) % N
    if responses is None:
        on_dual = kh == 0
        if _is_sublattice(data_rule, rule):
            return np.full(rule.L, float(np.sum(on_dual)), dtype=np.complex128)
        phihat = on_dual.astype(np.complex128)
    else:
        resp = np.asarray(responses, dtype=np.float64)
        if resp.shape != (N,):
            raise ValueError(
                f"expected {N} responses in node order, got {resp.shape}"
            )
        phihat = np.fft.ifft(resp)[kh]
    return _fold_to_nodes(phihat, freq, rule)


@dataclass(eq=False)
class WeightSet:
    """The compressed form of a dataset on a lattice.

    Attributes:
        w_xz: weights of the quadratic term (coefficients all one).
        w_xyz: weights of the cross term (coefficients the responses).
        mean_y2: mean squared response of the source data.
        rule: node lattice the weights refer to.
        index_set: descriptor of the frequency set used.
        algorithm: name of the algorithm that produced the vectors.
    """

    w_xz: np.ndarray
    w_xyz: np.ndarray
    mean_y2: float
    rule: LatticeRule
    index_set: IndexSet
    algorithm: str

    def __post_init__(self) -> None:
        self.w_xz = np.asarray(self.w_xz)
        self.w_xyz = np.asarray(self.w_xyz)
        for name, arr in (("w_xz", self.w_xz), ("w_xyz", self.w_xyz)):
            if arr.shape != (self.rule.L,):
                raise ValueError(
                    f"{name} has shape {arr.shape}, expected ({self.rule.L},)"
                )
            if arr.dtype not in (np.float64, np.complex128):
                raise ValueError(
                    f"{name} must be float64 or complex128, got {arr.dtype}"
                )
        self.mean_y2 = float(self.mean_y2)

    @property
    def L(self) -> int:
        return self.rule.L

    @property
    def is_real(self) -> bool:
        return (
            self.w_xz.dtype == np.float64 and self.w_xyz.dtype == np.float64
        )

    def to_json(self) -> dict:
        if not self.is_real:
            raise ValueError(
                "complex weight vectors have no serialised form; "
                "symmetric families always produce real weights"
            )
        return {
            "format": "weight-set",
            "version": 1,
            "rule": self.rule.to_json(),
            "index_set": self.index_set.to_json(),
            "algorithm": self.algorithm,
            "mean_y2": self.mean_y2,
            "weights": {
                "encoding": "base64",
                "w_xz": base64.b64encode(
                    self.w_xz.astype("<f8").tobytes()
                ).decode("ascii"),
                "w_xyz": base64.b64encode(
                    self.w_xyz.astype("<f8").tobytes()
                ).decode("ascii"),
            },
        }

    def save(self, path: str, sidecar: bool = False) -> None:
        """Write the JSON envelope, optionally with a binary sidecar.

        The sidecar holds the two vectors as little-endian float64 after
        an 8-byte header (magic ``LCW1`` and the node count); it sits
        next to the envelope with an extra ``.w64`` suffix.
        """
        obj = self.to_json()
        if sidecar:
            data_path = path + ".w64"
            with open(data_path, "wb") as fh:
                fh.write(struct.pack("<4sI", _WEIGHT_MAGIC, self.rule.L))
                fh.write(self.w_xz.astype("<f8").tobytes())
                fh.write(self.w_xyz.astype("<f8").tobytes())
            obj["weights"] = {
                "encoding": "w64",
                "path": os.path.basename(data_path),
            }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "WeightSet":
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if obj.get("format") != "weight-set":
            raise ValueError(f"{path} is not a weight-set file")
        rule = LatticeRule.from_json(obj["rule"])
        index_set = IndexSet.from_json(obj["index_set"], materialize=False)
        enc = obj["weights"]["encoding"]
        if enc == "base64":
            w1 = np.frombuffer(
                base64.b64decode(obj["weights"]["w_xz"]), dtype="<f8"
            ).astype(np.float64)
            w2 = np.frombuffer(
                base64.b64decode(obj["weights"]["w_xyz"]), dtype="<f8"
            ).astype(np.float64)
        elif enc == "w64":
            data_path = os.path.join(
                os.path.dirname(os.path.abspath(path)),
                obj["weights"]["path"],
            )
            with open(data_path, "rb") as fh:
                magic, L = struct.unpack("<4sI", fh.read(8))
                if magic != _WEIGHT_MAGIC:
                    raise ValueError(
                        f"{data_path}: bad magic {magic!r}, "
                        f"expected {_WEIGHT_MAGIC!r}"
                    )
                if L != rule.L:
                    raise ValueError(
                        f"{data_path}: header says {L} nodes, "
                        f"envelope says {rule.L}"
                    )
                body = fh.read(2 * 8 * L)
                if len(body) != 2 * 8 * L:
                    raise ValueError(f"{data_path}: truncated payload")
            both = np.frombuffer(body, dtype="<f8").astype(np.float64)
            w1, w2 = both[:L].copy(), both[L:].copy()
        else:
            raise ValueError(f"unknown weight encoding {enc!r}")
        return cls(
            w1, w2, float(obj["mean_y2"]), rule, index_set, obj["algorithm"]
        )


def _realised(w: np.ndarray, context: str) -> np.ndarray:
    worst = float(np.max(np.abs(w.imag))) if w.size else 0.0
    if worst > _IMAG_TOL:
        raise ValueError(
            f"{context}: weights came out complex "
            f"(largest imaginary part {worst:.3e}); symmetric families "
            f"must produce real vectors"
        )
    return np.ascontiguousarray(w.real)


def compress(
    data: Dataset,
    rule: LatticeRule,
    index_set: IndexSet,
    algorithm: str = "auto",
    threads: int = 1,
    cap: int = DEFAULT_CAP,
) -> WeightSet:
    """Build both weight vectors of a dataset in one call.

    Args:
        data: samples to compress.
        rule: node lattice.
        index_set: frequency set; named families may arrive lazy.
        algorithm: "auto" picks the kernel route for rectangles and step
            crosses and the FFT route otherwise; explicit choices are
            "naive", "general-fft", "rectangle", "step-cross".
        threads: worker threads for the blocked passes; the result is
            bitwise identical for any value.
        cap: cardinality cap applied when the set must be enumerated.

    Returns:
        WeightSet with real vectors for the named symmetric families.
        Custom sets keep complex vectors when their symmetrisation does
        not cancel the imaginary parts.
    """
    _check_dims(data.d, rule, index_set)
    if algorithm == "auto":
        algorithm = {
            "rectangle": "rectangle",
            "step-cross": "step-cross",
        }.get(index_set.family, "general-fft")
    if algorithm == "rectangle":
        from .index_sets import rectangle_halfwidths

        if index_set.family != "rectangle":
            raise ValueError(
                f"algorithm 'rectangle' cannot serve family "
                f"{index_set.family!r}"
            )
        widths = rectangle_halfwidths(
            index_set.alpha, index_set.gamma, index_set.param
        )
        ones = np.ones(data.N, dtype=np.float64)
        w1, w2 = _rectangle_pair_kernel(
            data, rule, widths, [ones, np.asarray(data.Y)], threads
        )
    elif algorithm == "step-cross":
        w1, w2 = weights_step_cross_pair(data, rule, index_set, threads)
    elif algorithm == "general-fft":
        w1, w2 = _general_fft_pair(data, rule, index_set, threads, cap)
    elif algorithm == "naive":
        w1 = weights_naive(data, "ones", rule, index_set)
        w2 = weights_naive(data, "responses", rule, index_set)
    else:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; expected auto, naive, "
            f"general-fft, rectangle or step-cross"
        )
    if np.iscomplexobj(w1):
        if index_set.family == "custom":
            worst = max(
                float(np.max(np.abs(w1.imag))),
                float(np.max(np.abs(w2.imag))),
            )
            if worst <= _IMAG_TOL:
                w1 = np.ascontiguousarray(w1.real)
                w2 = np.ascontiguousarray(w2.real)
        else:
            w1 = _realised(w1, f"family {index_set.family!r}")
            w2 = _realised(w2, f"family {index_set.family!r}")
    spec = index_set.descriptor()
    spec.cardinality(cap)
    return WeightSet(w1, w2, data.mean_y2, rule, spec, algorithm)
