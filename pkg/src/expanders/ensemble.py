"""Sampling from the column-sparse binary ensemble, neighbor counts,
exhaustive expansion certification, Monte Carlo tail estimates, and empirical
RIP-1 ratios.

Randomness uses Philox, a counter-based generator. Stochastic work is cut
into fixed-size trial blocks and each block draws from its own key
(seed, op, block), so estimates are bit-identical no matter how many threads
processed the blocks.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .domain import ExpanderParams, ProblemSize, ValidationError, validate

_BLOCK = 1 << 14
ENUMERATION_BUDGET = 10**8

# disjoint Philox key namespaces for the stochastic ops sharing one seed
_TAG_SAMPLE, _TAG_TAIL, _TAG_RIP = 1, 2, 3


class BudgetExceededError(RuntimeError):
    """Subset enumeration would exceed the 1e8-set budget."""


@dataclass(frozen=True)
class Seed:
    """64-bit unsigned seed for any stochastic operation."""

    value: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.value, int) or not 0 <= self.value < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """Column-sparse 0/1 matrix: N columns, each a sorted d-subset of [0, n)."""

    n: int
    N: int
    d: int
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.columns) != self.N:
            raise ValidationError("column count does not match N")
        for col in self.columns:
            if len(col) != self.d:
                raise ValidationError("every column needs exactly d indices")
            if any(not 0 <= r < self.n for r in col):
                raise ValidationError("row index out of range")
            if any(a >= b for a, b in zip(col, col[1:])):
                raise ValidationError("column indices must be strictly ascending")

    def column_array(self) -> np.ndarray:
        """(N, d) int64 array of row indices."""
        return np.array(self.columns, dtype=np.int64).reshape(self.N, self.d)

    def bitmasks(self) -> tuple[int, ...]:
        """Per-column row sets packed into arbitrary-width Python ints."""
        return tuple(sum(1 << r for r in col) for col in self.columns)

    def dense(self) -> np.ndarray:
        """(n, N) float64 dense copy; desk-scale sizes only."""
        out = np.zeros((self.n, self.N))
        for j, col in enumerate(self.columns):
            out[list(col), j] = 1.0
        return out


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of an exhaustive expansion check."""

    is_expander: bool
    worst_set: tuple[int, ...]
    worst_ratio: float
    sets_checked: int


@dataclass(frozen=True)
class TailEstimate:
    """Monte Carlo estimate with its binomial standard error."""

    p_hat: float
    std_err: float
    trials: int
    successes: int


def _generator(seed: Seed, tag: int, block: int) -> np.random.Generator:
    key = seed.value | (tag << 64) | (block << 80)
    return np.random.Generator(np.random.Philox(key=key))


def _partial_shuffle(rng: np.random.Generator, rows: int, n: int, d: int) -> np.ndarray:
    """First d entries of a Fisher-Yates shuffle of [0, n), one pool per row.

    Returns (rows, d) int32; each row is a uniform d-subset of [0, n),
    unsorted.
    """
    pool = np.broadcast_to(np.arange(n, dtype=np.int32), (rows, n)).copy()
    row_idx = np.arange(rows)
    for j in range(d):
        r = rng.integers(j, n, size=rows)
        left = pool[row_idx, j].copy()
        pool[row_idx, j] = pool[row_idx, r]
        pool[row_idx, r] = left
    return pool[:, :d]


def sample(size: ProblemSize, seed: Seed) -> SparseBinaryMatrix:
    """Draw a matrix from the ensemble: each column an independent uniform
    d-subset of [0, n). Deterministic for a fixed seed."""
    validate(size)
    rng = _generator(seed, _TAG_SAMPLE, 0)
    cols = np.sort(_partial_shuffle(rng, size.N, size.n, size.d), axis=1)
    return SparseBinaryMatrix(
        n=size.n,
        N=size.N,
        d=size.d,
        columns=tuple(tuple(int(r) for r in col) for col in cols),
    )


def neighbors(matrix: SparseBinaryMatrix, columns: Iterable[int]) -> int:
    """|Gamma(S)|: number of rows touched by the selected columns."""
    rows: set[int] = set()
    for j in columns:
        if not 0 <= j < matrix.N:
            raise ValidationError(f"column index {j} out of range")
        rows.update(matrix.columns[j])
    return len(rows)


def _enumeration_cost(N: int, sizes: Sequence[int]) -> int:
    return sum(math.comb(N, k) for k in sizes)


def certify(
    matrix: SparseBinaryMatrix,
    params: ExpanderParams,
    top_level_only: bool = False,
) -> CertificationReport:
    """Exhaustively check |Gamma(S)| >= (1 - eps) d |S| for every column set
    with |S| <= s (or |S| = s exactly when top_level_only is set).

    The threshold comparison is real-valued, no rounding. Refuses when the
    enumeration would exceed ENUMERATION_BUDGET sets.
    """
    validate(params)
    size = params.size
    if (matrix.n, matrix.N, matrix.d) != (size.n, size.N, size.d):
        raise ValidationError("matrix dimensions do not match params")
    sizes = [size.s] if top_level_only else list(range(1, size.s + 1))
    if _enumeration_cost(size.N, sizes) > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"enumeration of {_enumeration_cost(size.N, sizes)} sets exceeds budget"
        )
    masks = matrix.bitmasks()
    factor = (1.0 - params.epsilon) * size.d
    worst_ratio = math.inf
    worst_set: tuple[int, ...] = ()
    checked = 0
    for k in sizes:
        threshold = factor * k
        for combo in itertools.combinations(range(size.N), k):
            union = 0
            for j in combo:
                union |= masks[j]
            ratio = union.bit_count() / threshold
            checked += 1
            if ratio < worst_ratio:
                worst_ratio = ratio
                worst_set = combo
    return CertificationReport(
        is_expander=worst_ratio >= 1.0,
        worst_set=worst_set,
        worst_ratio=worst_ratio,
        sets_checked=checked,
    )


def _distinct_counts(indices: np.ndarray) -> np.ndarray:
    """Number of distinct values per row of a 2-D index array."""
    ordered = np.sort(indices, axis=1)
    return (np.diff(ordered, axis=1) > 0).sum(axis=1) + 1


def _bitmask_words(indices: np.ndarray, n: int) -> np.ndarray:
    """Pack (..., d) row indices into (..., W) uint64 bitmask words."""
    words = (n + 63) // 64
    out = np.zeros(indices.shape[:-1] + (words,), dtype=np.uint64)
    shifts = (indices & 63).astype(np.uint64)
    bits = np.left_shift(np.uint64(1), shifts)
    word_of = indices >> 6
    for w in range(words):
        out[..., w] = np.bitwise_or.reduce(
            np.where(word_of == w, bits, np.uint64(0)), axis=-1
        )
    return out


def _popcount(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def _tail_block_fixed(
    size: ProblemSize, a_s: float, seed: Seed, block: int, count: int
) -> int:
    rng = _generator(seed, _TAG_TAIL, block)
    idx = _partial_shuffle(rng, count * size.s, size.n, size.d)
    unions = _distinct_counts(idx.reshape(count, size.s * size.d))
    return int((unions <= a_s).sum())


def _tail_block_all(
    size: ProblemSize, a_s: float, seed: Seed, block: int, count: int
) -> int:
    rng = _generator(seed, _TAG_TAIL, block)
    idx = _partial_shuffle(rng, count * size.N, size.n, size.d)
    masks = _bitmask_words(idx.reshape(count, size.N, size.d), size.n)
    failed = np.zeros(count, dtype=bool)
    for k in range(1, size.s + 1):
        threshold = a_s * k / size.s
        for combo in itertools.combinations(range(size.N), k):
            union = masks[:, combo[0]]
            for j in combo[1:]:
                union = union | masks[:, j]
            failed |= _popcount(union) <= threshold
    return int(failed.sum())


def _run_blocks(worker, trials: int, threads: int) -> int:
    sizes = []
    left = trials
    while left > 0:
        take = min(_BLOCK, left)
        sizes.append(take)
        left -= take
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(worker, range(len(sizes)), sizes)
            )
    else:
        results = [worker(b, c) for b, c in enumerate(sizes)]
    return sum(results)


def _binomial_std_err(p_hat: float, trials: int) -> float:
    # degenerate estimates fall back to the rule-of-three bound
    if p_hat in (0.0, 1.0):
        return 3.0 / trials
    return math.sqrt(p_hat * (1.0 - p_hat) / trials)


def mc_tail(
    size: ProblemSize,
    a_s: float,
    fixed_set: bool,
    trials: int,
    seed: Seed,
    threads: int = 1,
) -> TailEstimate:
    """Monte Carlo estimate of the small-neighborhood event.

    fixed_set=True: fraction of trials where the first s columns of a fresh
    matrix satisfy |A_s| <= a_s. fixed_set=False: fraction of trials where
    ANY column set S with |S| <= s has at most a_s |S| / s neighbors, i.e.
    the proportionally scaled expansion-failure event that `certify` decides
    at full size (with a_s = (1 - eps) d s the two agree exactly).
    """
    validate(size)
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    if not fixed_set:
        sizes = list(range(1, size.s + 1))
        if _enumeration_cost(size.N, sizes) > ENUMERATION_BUDGET:
            raise BudgetExceededError("per-trial enumeration exceeds budget")
        worker = lambda b, c: _tail_block_all(size, a_s, seed, b, c)
    else:
        worker = lambda b, c: _tail_block_fixed(size, a_s, seed, b, c)
    successes = _run_blocks(worker, trials, threads)
    p_hat = successes / trials
    return TailEstimate(p_hat, _binomial_std_err(p_hat, trials), trials, successes)


def _rip_block(
    scaled: np.ndarray, N: int, s: int, seed: Seed, block: int, count: int
) -> tuple[float, float]:
    rng = _generator(seed, _TAG_RIP, block)
    supports = _partial_shuffle(rng, count, N, s)
    values = rng.standard_normal((count, s))
    x = np.zeros((count, N))
    np.put_along_axis(x, supports, values, axis=1)
    sketch_l1 = np.abs(x @ scaled.T).sum(axis=1)
    signal_l1 = np.abs(values).sum(axis=1)
    ratios = sketch_l1 / signal_l1
    return float(ratios.min()), float(ratios.max())


def rip1_ratio(
    matrix: SparseBinaryMatrix,
    s: int,
    trials: int,
    seed: Seed,
    threads: int = 1,
) -> tuple[float, float]:
    """Extremes of ||(A/d) x||_1 / ||x||_1 over random s-sparse x.

    Supports are uniform s-subsets of the columns, values standard normal.
    The max never exceeds 1; the min is at least 1 - 2 eps whenever the
    matrix expands at (s, d, eps).
    """
    if not 1 <= s <= matrix.N:
        raise ValidationError("s must lie in [1, N]")
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    scaled = matrix.dense() / matrix.d
    lows: list[float] = []
    highs: list[float] = []

    def worker(block: int, count: int) -> int:
        low, high = _rip_block(scaled, matrix.N, s, seed, block, count)
        lows.append(low)
        highs.append(high)
        return 0

    _run_blocks(worker, trials, threads)
    return min(lows), max(highs)


def to_text(matrix: SparseBinaryMatrix) -> str:
    """Bit-exact text form: header ``N n d``, then one sorted index line per
    column; LF endings, no trailing whitespace."""
    lines = [f"{matrix.N} {matrix.n} {matrix.d}"]
    lines.extend(" ".join(str(r) for r in col) for col in matrix.columns)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> SparseBinaryMatrix:
    """Parse the matrix text format, reporting the offending line on error."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError("line 1: empty matrix file")
    header = lines[0].split(" ")
    if len(header) != 3:
        raise ValueError("line 1: header must be 'N n d'")
    try:
        N, n, d = (int(tok) for tok in header)
    except ValueError:
        raise ValueError("line 1: header must hold three integers") from None
    if len(lines) - 1 != N:
        raise ValueError(f"line {len(lines)}: expected {N} column lines")
    columns = []
    for lineno, line in enumerate(lines[1:], start=2):
        toks = line.split(" ")
        try:
            col = tuple(int(tok) for tok in toks)
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer row index") from None
        columns.append(col)
    try:
        return SparseBinaryMatrix(n=n, N=N, d=d, columns=tuple(columns))
    except ValidationError as exc:
        raise ValueError(f"line 2..{len(lines)}: {exc}") from None


def write_matrix_file(matrix: SparseBinaryMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(to_text(matrix))


def read_matrix_file(path: str) -> SparseBinaryMatrix:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return from_text(handle.read())
