"""Exact evaluation of the counting recurrences behind the three families.

Each function evaluates a recurrence step by step, evaluates the matching
closed form independently, and raises ``ConsistencyError`` if they ever
disagree or a claimed inequality fails. All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


class ConsistencyError(ArithmeticError):
    pass


def _require(cond: bool, what: str):
    if not cond:
        raise ConsistencyError(what)


def _exact_int(x: Fraction, what: str) -> int:
    _require(x.denominator == 1, f"{what} = {x} is not an integer")
    return int(x)


# --- sizes ---------------------------------------------------------------

def tandem_size(level: int, id_bits: int | None = None) -> int:
    bits = level if id_bits is None else id_bits
    return 3 * 2 ** level + 2 * bits


def quartic_size(level: int) -> int:
    return 3 ** level - 1


def run_size(level: int) -> int:
    return 2 * 4 ** level


def gadget_size(sigma: int) -> int:
    """Side of the binary gadget needed for characters 0..sigma.

    ``k = 2 + ceil(sqrt(bits))`` where ``bits`` is the length of sigma in
    binary, so the (k-2)x(k-2) middle holds every character.
    """
    bits = max(1, sigma.bit_length())
    return 2 + math.isqrt(bits - 1) + 1


# --- quartics ------------------------------------------------------------

@dataclass(frozen=True)
class QuarticLevel:
    i: int
    M: int
    N: int
    Q: int
    S: int


@dataclass(frozen=True)
class QuarticCounts:
    level: int
    n: int
    levels: tuple[QuarticLevel, ...]

    @property
    def final(self) -> QuarticLevel:
        return self.levels[-1]

    @property
    def sigma(self) -> int:
        return self.final.S


def quartic_counts(level: int) -> QuarticCounts:
    if level < 1:
        raise ValueError("level must be >= 1")
    n = quartic_size(level)
    out = []
    M = N = Q = S = None
    for i in range(1, level + 1):
        if i == 1:
            M, N, S = 2, Fraction(n - 2, 3), 1
            Q = N + 1
            Q_alt = Fraction(n + 1, 3)
        else:
            M_prev, N_prev, Q_prev = M, N, Q
            M = 3 * M_prev + 2
            N = (N_prev - 2) / 3
            Q = 3 * Q_prev + 3 ** (i - 1) * ((N_prev - 2) / 3 + 1) * (M_prev + 1)
            Q_alt = 3 * Q_prev + Fraction(3) ** (i - 2) * (n + 1)
            S = 3 * S + 3 ** (i - 1)
        _require(Q == Q_alt, f"Q_{i}: shift-count recurrence {Q} != simplified {Q_alt}")
        _require(M == 3 ** i - 1, f"M_{i} closed form")
        _require(N == Fraction(n + 1, 3 ** i) - 1, f"N_{i} closed form")
        _require(Q == Fraction(3) ** (i - 2) * i * (n + 1), f"Q_{i} closed form")
        _require(S == i * 3 ** (i - 1), f"S_{i} closed form")
        out.append(QuarticLevel(i, M, _exact_int(N, f"N_{i}"), _exact_int(Q, f"Q_{i}"), S))
    # alphabet size including character 0
    _require(Fraction((n + 1) * level, 3) + 1 == out[-1].S + 1, "sigma closed form")
    return QuarticCounts(level, n, tuple(out))


@dataclass(frozen=True)
class BinaryQuarticCounts:
    level: int
    n: int
    k: int
    n_prime: int
    exact: tuple[int, ...]  # Q'_1 .. Q'_level
    lower_bound: Fraction

    @property
    def final(self) -> int:
        return self.exact[-1]


def binary_quartic_counts(level: int, k: int | None = None) -> BinaryQuarticCounts:
    if level < 2:
        raise ValueError("level must be >= 2")
    base = quartic_counts(level)
    n = base.n
    if k is None:
        k = gadget_size(base.sigma)
    qs = [_exact_int(Fraction(n * k - 2 * k, 3) + 1, "Q'_1")]
    for lv in range(2, level + 1):
        prev = base.levels[lv - 2]
        shifts = _exact_int(Fraction(prev.N * k - 2 * k, 3) + 1, f"shifts at level {lv}")
        qs.append(3 * qs[-1] + 3 ** (lv - 1) * shifts * (prev.M * k + 1))
    bound = Fraction(3) ** (level - 3) * k * k * ((level - 1) * n - Fraction(3 ** level, 2))
    if level >= 4:
        _require(qs[-1] > bound, f"Q'_{level} = {qs[-1]} does not exceed {bound}")
    return BinaryQuarticCounts(level, n, k, n * k, tuple(qs), bound)


# --- runs ----------------------------------------------------------------

@dataclass(frozen=True)
class RunLevel:
    i: int
    N: int
    R: int
    X: int
    Y: int


@dataclass(frozen=True)
class RunCounts:
    level: int
    n: int
    levels: tuple[RunLevel, ...]
    total: int
    bound: Fraction = field(default=Fraction(0))


def new_runs(i: int) -> int:
    """Runs created at level i between the two filled antidiagonals."""
    r = (2 * 4 ** (i - 1) - 1) ** 2
    _require(4 * r == 16 ** i - 4 * 4 ** i + 4, f"R_{i} closed form")
    return r


def run_counts(level: int) -> RunCounts:
    if level < 1:
        raise ValueError("level must be >= 1")
    X = {level: 1}
    Y = {level: 0}
    for i in range(level - 1, 0, -1):
        X[i] = 14 * X[i + 1] + 10 * Y[i + 1]
        Y[i] = 6 * Y[i + 1] + 2 * X[i + 1]
    levels = []
    for i in range(1, level + 1):
        _require(X[i] + Y[i] == 16 ** (level - i), f"X_{i} + Y_{i} != 16^{level - i}")
        if i < level:
            _require(X[i] >= 5 * Y[i], f"X_{i} < 5 Y_{i}")
        _require(6 * X[i] >= 5 * 16 ** (level - i), f"X_{i} < (5/6) 16^{level - i}")
        levels.append(RunLevel(i, run_size(i), new_runs(i), X[i], Y[i]))
    total = sum(lv.X * lv.R for lv in levels)
    bound = Fraction(level * 16 ** level, 24)
    if level >= 2:
        _require(total >= bound, f"run total {total} below l*16^l/24 = {bound}")
    return RunCounts(level, run_size(level), tuple(levels), total, bound)


# --- tandems -------------------------------------------------------------

@dataclass(frozen=True)
class TandemPrediction:
    level: int
    n: int
    witness_count: int


def tandem_counts(level: int, id_bits: int | None = None) -> TandemPrediction:
    if level < 1:
        raise ValueError("level must be >= 1")
    n = tandem_size(level, id_bits)
    return TandemPrediction(level, n, n * (n + 1) // 2 * 2 ** level)


def predicted_total(kind: str, level: int) -> int:
    """The witness-set size the construction of ``kind`` guarantees."""
    if kind == "tandem":
        return tandem_counts(level).witness_count
    if kind == "quartic":
        return quartic_counts(level).final.Q
    if kind == "quartic_binary":
        return binary_quartic_counts(level).final
    if kind == "run":
        return run_counts(level).total
    raise ValueError(f"unknown family kind {kind!r}")
