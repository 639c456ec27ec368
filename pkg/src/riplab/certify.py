"""Restricted isometry certification by exhaustive subset enumeration.

A matrix satisfies the restricted isometry property of order k with parameter
delta when every k-column submatrix acts on vectors like a near-isometry:
all eigenvalues of each k x k Gram submatrix lie in [1-delta, 1+delta].  The
exact parameter is the max over all C(N, k) column subsets of the spectral
deviation of the Gram submatrix from the identity.

`exact_rip` computes that max by scanning subsets in lexicographic order,
batching the small eigenproblems.  `lazy_certify` probes a small order m
exhaustively, then lifts the measured parameter to larger orders via the
bound delta_k <= eps*(k-1)/(m-1).  Enumeration is chunked on combination
ranks so parallel runs reduce deterministically: the reported witness is
always the lexicographically smallest argmax subset and the examined-subset
counter never depends on the worker count.
"""

import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, gram, spectral_deviation_from_identity

DEFAULT_BUDGET = 10**8
UNIT_COLUMN_TOL = 1e-9

# Directions a report's value can bound the true parameter from.
EXACT_MAX = "ExactMax"
UPPER_BOUND = "UpperBound"
LOWER_BOUND = "LowerBound"

# How the value was obtained.
EXHAUSTIVE = "Exhaustive"
LAZY = "Lazy"
WITNESS_LB = "WitnessLB"
BLOCK_COMPOSE = "BlockCompose"


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration would scan more subsets than the budget."""


class UnitColumnError(ValueError):
    """Raised when an operation requiring unit columns gets a matrix without them."""


@dataclass(frozen=True)
class RipReport:
    """Outcome of one certification run."""

    order: int
    value: float
    direction: str
    method: str
    subsets_examined: int
    elapsed_ns: int


@dataclass(frozen=True)
class Witness:
    """A column subset and unit vector exhibiting the reported deviation."""

    subset: tuple
    vector: np.ndarray
    deviation: float


@dataclass(frozen=True)
class LazyCertificate:
    """Result of probing order m and lifting to the largest certifiable order."""

    probe_order: int
    probe_parameter: float
    target_parameter: float
    max_certified_order: int


def worker_cap():
    """Worker count cap: RIP_LAB_THREADS if set, else available parallelism."""
    env = os.environ.get("RIP_LAB_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"RIP_LAB_THREADS must be a positive integer, got {env!r}")
        if cap < 1:
            raise ValueError(f"RIP_LAB_THREADS must be a positive integer, got {env!r}")
        return cap
    return os.cpu_count() or 1


def validate_unit_columns(phi, tol=UNIT_COLUMN_TOL):
    """True iff every column norm of phi lies in [1-tol, 1+tol]."""
    if tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")
    a = as_matrix(phi, "phi")
    norms = np.linalg.norm(a, axis=0)
    return bool(np.all(np.abs(norms - 1.0) <= tol))


def require_unit_columns(phi, tol=UNIT_COLUMN_TOL, context="this operation"):
    a = as_matrix(phi, "phi")
    norms = np.linalg.norm(a, axis=0)
    worst = int(np.argmax(np.abs(norms - 1.0)))
    if abs(norms[worst] - 1.0) > tol:
        raise UnitColumnError(
            f"{context} requires unit columns within {tol:.1e}; "
            f"column {worst} has norm {float(norms[worst])!r}"
        )
    return a


def coherence(phi):
    """Largest absolute inner product between two distinct columns."""
    a = as_matrix(phi, "phi")
    if a.shape[1] < 2:
        raise ValueError(f"coherence needs at least 2 columns, got {a.shape[1]}")
    g = gram(a)
    off = np.abs(g - np.diag(np.diag(g)))
    return float(off.max())


def check_subset(subset, ncols):
    """Validate a strictly increasing, in-range, nonempty index subset."""
    idx = tuple(int(i) for i in subset)
    if not idx:
        raise ValueError("index subset must be nonempty")
    for a, b in itertools.pairwise(idx):
        if b <= a:
            raise ValueError(f"indices must be strictly increasing, got {idx}")
    if idx[0] < 0 or idx[-1] >= ncols:
        raise ValueError(f"index out of range for {ncols} columns: {idx}")
    return idx


def subset_deviation(phi, subset):
    """Spectral deviation from identity of the Gram matrix of columns ``subset``."""
    a = as_matrix(phi, "phi")
    idx = check_subset(subset, a.shape[1])
    return spectral_deviation_from_identity(gram(a[:, idx]))


def unrank_combination(rank, n, k):
    """The combination of rank ``rank`` in the lexicographic order of all
    k-subsets of range(n) (combinatorial number system)."""
    total = math.comb(n, k)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range for C({n},{k}) = {total}")
    out = []
    r = rank
    c = 0
    for slots in range(k, 0, -1):
        while True:
            below = math.comb(n - 1 - c, slots - 1)
            if r < below:
                out.append(c)
                c += 1
                break
            r -= below
            c += 1
    return tuple(out)


def _combinations_from(n, k, first):
    # lexicographic successor loop, starting at a given combination
    cur = list(first)
    while True:
        yield tuple(cur)
        i = k - 1
        while i >= 0 and cur[i] == n - k + i:
            i -= 1
        if i < 0:
            return
        cur[i] += 1
        for j in range(i + 1, k):
            cur[j] = cur[j - 1] + 1


def _block_rows(k):
    # keep each eigvalsh batch around a few tens of MB regardless of k
    return max(256, min(65536, (1 << 22) // (k * k)))


def _materialize(source, count, k):
    flat = itertools.chain.from_iterable(itertools.islice(source, count))
    return np.fromiter(flat, dtype=np.int64, count=count * k).reshape(count, k)


def _block_deviations(g, block):
    sub = g[block[:, :, None], block[:, None, :]]
    w = np.linalg.eigvalsh(sub)
    return np.maximum(np.abs(w[:, 0] - 1.0), np.abs(w[:, -1] - 1.0))


_POOL = {}


def _pool_init(g, n, k):
    _POOL["g"] = g
    _POOL["n"] = n
    _POOL["k"] = k


def _pool_chunk(task):
    start, count = task
    n, k = _POOL["n"], _POOL["k"]
    source = _combinations_from(n, k, unrank_combination(start, n, k))
    return _block_deviations(_POOL["g"], _materialize(source, count, k))


def _scan_chunks(g, n, k, total, workers):
    """Yield (start_rank, deviations) for contiguous rank chunks, in rank order."""
    rows = _block_rows(k)
    starts = range(0, total, rows)
    if workers > 1 and total > rows:
        tasks = [(s, min(rows, total - s)) for s in starts]
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_pool_init, initargs=(g, n, k)
        ) as pool:
            for (s, _), devs in zip(tasks, pool.map(_pool_chunk, tasks)):
                yield s, devs
    else:
        source = itertools.combinations(range(n), k)
        for s in starts:
            count = min(rows, total - s)
            yield s, _block_deviations(g, _materialize(source, count, k))


def _build_witness(g, phi, subset):
    idx = np.asarray(subset, dtype=np.intp)
    sub = g[np.ix_(idx, idx)]
    w, v = np.linalg.eigh(sub)
    which = int(np.argmax(np.abs(w - 1.0)))
    vec = v[:, which].copy()
    peak = int(np.argmax(np.abs(vec)))
    if vec[peak] < 0.0:
        vec = -vec
    vec /= np.linalg.norm(vec)
    full = np.zeros(phi.shape[1])
    full[idx] = vec
    deviation = abs(float(w[which]) - 1.0)
    return Witness(tuple(int(i) for i in subset), full, deviation)


def exact_rip(phi, k, threshold=None, budget=DEFAULT_BUDGET, workers=None):
    """Exact restricted isometry parameter of order k by full enumeration.

    Scans all C(N, k) column subsets of ``phi`` in lexicographic order and
    returns the report together with a witness for the worst subset (ties
    broken toward the lexicographically smallest subset).

    If ``threshold`` is given, the scan stops at the first subset whose
    deviation strictly exceeds it; the report then carries direction
    ``LowerBound`` and the examined-subset count at the stopping point.

    ``budget`` bounds C(N, k); beyond it a :class:`BudgetExceededError` is
    raised before any work is done.  ``workers`` caps process parallelism
    (default: ``worker_cap()``); results are identical for every setting.
    """
    t0 = time.perf_counter_ns()
    a = as_matrix(phi, "phi")
    ncols = a.shape[1]
    k = int(k)
    if not 1 <= k <= ncols:
        raise ValueError(f"order must satisfy 1 <= k <= {ncols}, got {k}")
    if budget is not None and budget < 1:
        raise ValueError(f"budget must be positive, got {budget}")
    total = math.comb(ncols, k)
    if budget is not None and total > budget:
        raise BudgetExceededError(
            f"C({ncols},{k}) = {total} subsets exceeds the enumeration budget {budget}"
        )
    if workers is None:
        workers = worker_cap()

    g = gram(a)
    best_dev = -1.0
    best_rank = -1
    examined = 0
    stopped_at = None
    for start, devs in _scan_chunks(g, ncols, k, total, workers):
        if threshold is not None:
            over = devs > threshold
            if np.any(over):
                hit = int(np.argmax(over))
                best_dev = float(devs[hit])
                best_rank = start + hit
                examined = start + hit + 1
                stopped_at = best_rank
                break
        chunk_best = int(np.argmax(devs))
        if float(devs[chunk_best]) > best_dev:
            best_dev = float(devs[chunk_best])
            best_rank = start + chunk_best
        examined = start + len(devs)

    subset = unrank_combination(best_rank, ncols, k)
    witness = _build_witness(g, a, subset)
    if stopped_at is not None:
        direction, method = LOWER_BOUND, WITNESS_LB
    else:
        direction, method = EXACT_MAX, EXHAUSTIVE
    report = RipReport(
        order=k,
        value=best_dev,
        direction=direction,
        method=method,
        subsets_examined=examined,
        elapsed_ns=time.perf_counter_ns() - t0,
    )
    return report, witness


def lift_order(eps, m, k):
    """Parameter bound at order k implied by parameter eps at order m:
    eps*(k-1)/(m-1)."""
    m, k = int(m), int(k)
    if m < 2:
        raise ValueError(f"probe order must be at least 2, got {m}")
    if k < m:
        raise ValueError(f"target order {k} must be at least the probe order {m}")
    eps = float(eps)
    if eps < 0:
        raise ValueError(f"parameter must be nonnegative, got {eps}")
    return eps * (k - 1) / (m - 1)


def lazy_certify(phi, m, delta, budget=DEFAULT_BUDGET, workers=None):
    """Certify the largest order reachable from an exhaustive probe at order m.

    Computes eps = exact order-m parameter, then returns the largest
    k <= min(rows, cols) with eps*(k-1)/(m-1) <= delta (0 when even the
    probe order fails, i.e. eps > delta).  Requires unit columns within
    1e-9.  Returns the certificate together with the probe report.
    """
    a = require_unit_columns(phi, UNIT_COLUMN_TOL, "lazy certification")
    cap = min(a.shape)
    m = int(m)
    if not 2 <= m <= cap:
        raise ValueError(f"probe order must satisfy 2 <= m <= {cap}, got {m}")
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"target parameter must lie in (0, 1), got {delta}")

    report, _ = exact_rip(a, m, budget=budget, workers=workers)
    eps = report.value
    if eps > delta:
        k_max = 0
    elif eps == 0.0:
        k_max = cap
    else:
        k_max = min(cap, math.floor(delta * (m - 1) / eps) + 1)
        # settle float boundary cases so the lifted bound holds exactly as computed
        while k_max > m and lift_order(eps, m, k_max) > delta:
            k_max -= 1
        while k_max < cap and lift_order(eps, m, k_max + 1) <= delta:
            k_max += 1
    cert = LazyCertificate(
        probe_order=m,
        probe_parameter=eps,
        target_parameter=delta,
        max_certified_order=k_max,
    )
    return cert, report


def lifted_report(cert, elapsed_ns=0):
    """Upper-bound report at the certified order implied by a lazy certificate."""
    if cert.max_certified_order < cert.probe_order:
        raise ValueError("certificate certifies nothing beyond the probe order")
    value = lift_order(cert.probe_parameter, cert.probe_order, cert.max_certified_order)
    return RipReport(
        order=cert.max_certified_order,
        value=value,
        direction=UPPER_BOUND,
        method=LAZY,
        subsets_examined=0,
        elapsed_ns=int(elapsed_ns),
    )


def predicted_certified_order(m, n, cols, delta, c_abs=1.0):
    """Order the lazy route is predicted to certify for an n x cols Bernoulli
    matrix probed at order m: delta*sqrt(m*n/(c_abs*ln(e*cols/m))).

    The constant ``c_abs`` is an unspecified absolute constant (default 1);
    outputs are comparable across parameter settings, not absolute truths.
    The caller floors the result if an integer order is needed.
    """
    m, n, cols = int(m), int(n), int(cols)
    if m < 1:
        raise ValueError(f"probe order must be at least 1, got {m}")
    if n < 1:
        raise ValueError(f"row count must be positive, got {n}")
    if cols < m:
        raise ValueError(f"column count {cols} must be at least the probe order {m}")
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"target parameter must lie in (0, 1), got {delta}")
    c_abs = float(c_abs)
    if c_abs <= 0:
        raise ValueError(f"absolute constant must be positive, got {c_abs}")
    return delta * math.sqrt(m * n / (c_abs * math.log(math.e * cols / m)))


def quasipoly_probe_order(cols):
    """Probe order preset m = round(ln(cols)^3), the quasi-polynomial regime."""
    cols = int(cols)
    if cols < 2:
        raise ValueError(f"need at least 2 columns, got {cols}")
    return max(2, round(math.log(cols) ** 3))


def block_compose(a, b):
    """Block-diagonal composition diag(A, B) with zero off-diagonal blocks."""
    a = as_matrix(a, "first block")
    b = as_matrix(b, "second block")
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]))
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out
