"""Generalized binomial coefficients and the three decomposition kinds.

Everything here is exact integer arithmetic on Python ints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb, factorial

from kkextremal.errors import InvalidInput


def binom(n: int, k: int) -> int:
    """Return n(n-1)...(n-k+1)/k! for any integer n, with 1 at k=0 and 0 for k<0."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    if n >= 0:
        return comb(n, k)
    # falling product of a negative top; exact division by k!
    num = 1
    for i in range(k):
        num *= n - i
    return num // factorial(k)


class Kind(enum.Enum):
    KBINOMIAL = "kbinomial"
    FULL = "full"
    SHADOW = "shadow"


@dataclass(frozen=True)
class Decomposition:
    kind: Kind
    k: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidInput(f"k must be positive, got {self.k}")
        c = self.coeffs
        if self.kind is Kind.KBINOMIAL:
            if not 1 <= len(c) <= self.k:
                raise InvalidInput("k-binomial decomposition needs 1..k terms")
            if any(a <= b for a, b in zip(c, c[1:])):
                raise InvalidInput("k-binomial coefficients must strictly decrease")
            if c[-1] < self.k - (len(c) - 1):
                raise InvalidInput("last k-binomial coefficient too small")
        elif self.kind is Kind.FULL:
            if len(c) != self.k:
                raise InvalidInput("full decomposition needs exactly k terms")
            if any(a <= b for a, b in zip(c[:-1], c[1:-1])) or (len(c) > 1 and c[-2] < c[-1]):
                raise InvalidInput("full coefficients violate monotonicity")
            if c[-1] < 1:
                raise InvalidInput("full decomposition needs a positive last coefficient")
        elif len(c) != self.k:
            # shadow coefficients may be non-positive; their ordering is checked
            # by the test suite rather than enforced here
            raise InvalidInput("shadow decomposition needs exactly k terms")

    def __len__(self) -> int:
        return len(self.coeffs)


def eval_decomposition(d: Decomposition) -> int:
    return sum(binom(a, d.k - i) for i, a in enumerate(d.coeffs))


def _largest_top(limit: int, bottom: int) -> int:
    """Largest a >= bottom with binom(a, bottom) <= limit (limit >= 1)."""
    lo = bottom
    hi = max(bottom + 1, 2)
    while binom(hi, bottom) <= limit:
        lo = hi
        hi *= 2
    # binom(lo) <= limit < binom(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if binom(mid, bottom) <= limit:
            lo = mid
        else:
            hi = mid
    return lo


def k_binomial_decomposition(m: int, k: int) -> Decomposition:
    """Greedy representation m = binom(a_0,k) + binom(a_1,k-1) + ... with a_0 > a_1 > ..."""
    if m <= 0:
        raise InvalidInput(f"m must be positive, got {m}")
    if k < 1:
        raise InvalidInput(f"k must be positive, got {k}")
    coeffs = []
    rest = m
    for i in range(k):
        if rest == 0:
            break
        a = _largest_top(rest, k - i)
        coeffs.append(a)
        rest -= binom(a, k - i)
    return Decomposition(Kind.KBINOMIAL, k, tuple(coeffs))


def full_k_binomial_decomposition(m: int, k: int) -> Decomposition:
    """Length-k representation obtained by expanding the last greedy term.

    binom(a, j) = binom(a-1, j) + binom(a-2, j-1) + ... + binom(a-j+1, 2) + binom(a-j+1, 1)
    when the greedy decomposition stops early.
    """
    dec = k_binomial_decomposition(m, k)
    coeffs = list(dec.coeffs)
    if len(coeffs) < k:
        last = coeffs.pop()
        j = k - len(coeffs)
        coeffs.extend(last - i for i in range(1, j))
        coeffs.append(last - (j - 1))
    return Decomposition(Kind.FULL, k, tuple(coeffs))


def kk_lower_bound(m: int, k: int, i: int) -> int:
    """Kruskal-Katona lower bound on the size of the i-th shadow of m k-sets."""
    if not 0 <= i <= k - 1:
        raise InvalidInput(f"i must lie in [0, {k - 1}], got {i}")
    if i == 0:
        return m
    dec = k_binomial_decomposition(m, k)
    return sum(binom(a, k - j - i) for j, a in enumerate(dec.coeffs))
