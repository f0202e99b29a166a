"""Built-in verification suites.

Each suite returns a plain dict with a name, a pass flag, the number of
checks performed, the worst residual seen and a list of human-readable
failure strings, so the command line can emit machine-readable reports
and tests can assert on the same data.
"""

from __future__ import annotations

import math

import numpy as np

from .analysis import BoundQuery, loss_gap_envelope, select_parameter
from .compression import (
    Dataset,
    compress,
    weights_general_fft,
    weights_naive,
    weights_rectangle,
    weights_step_cross,
)
from .index_sets import IndexSet, enumerate_cross, enumerate_step_cross
from .lattice import LatticeRule, ProductWeights, cbc_construct
from .model import (
    TrigModel,
    compressed_loss,
    eval_model,
    exact_loss,
    model_squared,
    wiener_norm,
)

__all__ = [
    "oracle_suite",
    "inclusion_suite",
    "aliasing_suite",
    "envelope_suite",
    "run_all",
    "SUITES",
]

_PRIMES = (29, 31, 53, 61)


def _result(name, checks, residual, failures):
    return {
        "name": name,
        "passed": not failures,
        "checks": int(checks),
        "max_residual": float(residual),
        "failures": list(failures),
    }


def _random_dataset(rng, n, d):
    return Dataset(rng.random((n, d)), rng.standard_normal(n))


def _relative_gap(w, ref):
    return float(np.max(np.abs(w - ref)) / (1.0 + np.max(np.abs(ref))))


def oracle_suite(
    seed: int = 0, instances: int = 12, inject_fault: bool = False,
    threads: int = 1,
) -> dict:
    """Fast weight algorithms against the direct-summation reference.

    Random instances cycle through the three named families plus custom
    (possibly asymmetric) sets.  With ``inject_fault`` the first
    instance's fast output is perturbed by 1e-3 in one entry, which the
    comparison must catch and localise.
    """
    rng = np.random.default_rng([int(seed), 101])
    failures: list[str] = []
    worst = 0.0
    checks = 0
    for i in range(int(instances)):
        L = int(rng.choice(_PRIMES))
        d = int(rng.integers(1, 4))
        n = int(rng.integers(5, 40))
        data = _random_dataset(rng, n, d)
        g = tuple(int(v) for v in rng.integers(1, L, size=d))
        rule = LatticeRule(L, g)
        gamma = ProductWeights.polynomial(1.0, d)
        kind = i % 4
        alpha = (1.0, 0.75, 1.001, 1.0)[kind]
        if kind == 0:
            spec = IndexSet.cross(alpha, gamma, 20.0)
            fast = weights_general_fft(data, "ones", rule, spec, threads)
        elif kind == 1:
            spec = IndexSet.rectangle(alpha, gamma, 12.0)
            fast = weights_rectangle(data, "ones", rule, spec, threads)
        elif kind == 2:
            spec = IndexSet.step_cross(alpha, gamma, 4)
            fast = weights_step_cross(data, "ones", rule, spec, threads)
        else:
            rows = rng.integers(-6, 7, size=(10, d))
            spec = IndexSet.custom(rows, alpha, gamma)
            fast = weights_general_fft(data, "responses", rule, spec, threads)
        c = "responses" if kind == 3 else "ones"
        ref = weights_naive(data, c, rule, spec)
        if inject_fault and i == 0:
            fast = np.array(fast, copy=True)
            fast[L // 2] += 1e-3
        gap = _relative_gap(fast, ref)
        worst = max(worst, gap)
        checks += 1
        if gap > 1e-9:
            node = int(np.argmax(np.abs(fast - ref)))
            failures.append(
                f"instance {i} ({spec.family}, L={L}, d={d}): weight at "
                f"node {node} deviates by {gap:.3e} relative"
            )
    return _result("oracle-equivalence", checks, worst, failures)


def inclusion_suite(seed: int = 0) -> dict:
    """Sandwich of the step cross between two crosses, plus the strict
    witness frequency that separates them."""
    del seed
    failures: list[str] = []
    checks = 0
    for d in (1, 2, 3):
        for alpha in (0.5, 1.0, 2.0):
            for gamma in (
                ProductWeights.ones(d),
                ProductWeights.geometric(0.5, d),
            ):
                for m in range(0, 7):
                    small = (
                        {
                            tuple(k)
                            for k in enumerate_cross(
                                alpha, gamma, 2.0 ** (m - d + 1)
                            )
                        }
                        if m - d + 1 >= 0
                        else set()
                    )
                    mid = {
                        tuple(k)
                        for k in enumerate_step_cross(alpha, gamma, m)
                    }
                    big = {
                        tuple(k)
                        for k in enumerate_cross(alpha, gamma, 2.0 ** m)
                    }
                    checks += 1
                    if not small <= mid:
                        failures.append(
                            f"inner cross escapes the step cross at "
                            f"d={d}, alpha={alpha}, m={m}"
                        )
                    if not mid <= big:
                        failures.append(
                            f"step cross escapes the outer cross at "
                            f"d={d}, alpha={alpha}, m={m}"
                        )
    witness = (6, 5)
    gamma2 = ProductWeights.ones(2)
    in_cross = IndexSet.cross(0.5, gamma2, 32.0).contains(witness)
    in_step = IndexSet.step_cross(0.5, gamma2, 5).contains(witness)
    checks += 1
    if not in_cross or in_step:
        failures.append(
            f"witness {witness}: cross(32) membership {in_cross}, "
            f"step(5) membership {in_step}; expected True, False"
        )
    return _result("set-inclusions", checks, 0.0, failures)


def aliasing_suite(seed: int = 0, instances: int = 10) -> dict:
    """Node average of the weights against the aliased coefficient sum.

    For every frequency set, ``(1/L) sum_ell W_ell`` must equal the sum
    of the transform coefficients over frequencies with ``k . g = 0
    (mod L)``.
    """
    rng = np.random.default_rng([int(seed), 202])
    failures: list[str] = []
    worst = 0.0
    checks = 0
    for i in range(int(instances)):
        L = int(rng.choice(_PRIMES))
        d = int(rng.integers(1, 4))
        n = int(rng.integers(5, 30))
        data = _random_dataset(rng, n, d)
        rule = LatticeRule(
            L, tuple(int(v) for v in rng.integers(1, L, size=d))
        )
        gamma = ProductWeights.ones(d)
        spec = IndexSet.cross(1.0, gamma, 16.0)
        w = weights_general_fft(data, "responses", rule, spec)
        freq = spec.frequencies
        phase = np.exp(
            2j * np.pi * (data.X @ freq.T.astype(np.float64))
        )
        phihat = (data.Y @ phase) / data.N
        on_dual = (freq @ np.asarray(rule.g, dtype=np.int64)) % L == 0
        lhs = complex(np.mean(w))
        rhs = complex(np.sum(phihat[on_dual]))
        gap = abs(lhs - rhs) / (1.0 + abs(rhs))
        worst = max(worst, gap)
        checks += 1
        if gap > 1e-9:
            failures.append(
                f"instance {i}: node average {lhs} vs aliased sum {rhs}"
            )
    return _result("aliasing-identity", checks, worst, failures)


def envelope_suite(seed: int = 0, threads: int = 1) -> dict:
    """Measured loss gap against the computed bound, at a small scale.

    A smooth model with absolutely summable coefficients is sampled
    with light noise; the wiener-norm step-cross bound must dominate
    the measured gap at every lattice size tried.
    """
    rng = np.random.default_rng([int(seed), 303])
    d = 2
    half = 8
    axes = np.arange(-half, half + 1)
    kk = np.stack(np.meshgrid(axes, axes, indexing="ij"), axis=-1)
    freq = kk.reshape(-1, 2)
    theta = np.prod(1.0 / (1.0 + np.abs(freq)) ** 3, axis=1)
    model = TrigModel(freq, theta.astype(np.complex128))
    n = 1500
    X = rng.random((n, d))
    fx = eval_model(model, X).real
    Y = fx + rng.uniform(-1e-3, 1e-3, size=n)
    data = Dataset(X, Y)
    alpha = 1.24
    gamma = ProductWeights.ones(d)
    alpha_cbc = alpha - 0.5 - 0.12
    failures: list[str] = []
    worst = 0.0
    checks = 0
    exact = exact_loss(model, data)
    sq = model_squared(model)
    norm_f = wiener_norm(model, alpha, gamma)
    norm_f2 = wiener_norm(sq, alpha, gamma)
    mu_y = float(np.mean(np.abs(Y)))
    for L in (31, 61):
        rule = cbc_construct(L, d, alpha_cbc, gamma)
        q = BoundQuery(
            "wiener", "step-cross", alpha, gamma, L, 1.0, 1.0,
            delta=0.12, tau=0.06,
        )
        m = select_parameter(q)
        spec = IndexSet.step_cross(alpha, gamma, m, materialize=False)
        ws = compress(data, rule, spec, threads=threads)
        approx = compressed_loss(model, ws)
        gap = abs(exact.value - approx.value)
        env = loss_gap_envelope(q, m, norm_f, norm_f2, mu_y)
        ratio = gap / env.total if env.total > 0 else math.inf
        worst = max(worst, ratio)
        checks += 1
        if gap > env.total:
            failures.append(
                f"L={L}: measured gap {gap:.3e} exceeds bound "
                f"{env.total:.3e}"
            )
    return _result("loss-gap-envelope", checks, worst, failures)


SUITES = {
    "oracle": oracle_suite,
    "inclusion": inclusion_suite,
    "aliasing": aliasing_suite,
    "envelope": envelope_suite,
}


def run_all(
    seed: int = 0, inject_fault: bool = False, threads: int = 1
) -> list[dict]:
    """Run every suite and collect the reports."""
    return [
        oracle_suite(seed, inject_fault=inject_fault, threads=threads),
        inclusion_suite(seed),
        aliasing_suite(seed),
        envelope_suite(seed, threads=threads),
    ]
