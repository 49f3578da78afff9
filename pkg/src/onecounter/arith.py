"""Small number-theoretic helpers: primes, LCM, bits and residue encodings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence


class DomainError(ValueError):
    pass


def primes_first(m: int) -> list[int]:
    """The first ``m`` primes in ascending order."""
    if m < 1:
        raise DomainError("need m >= 1")
    found: list[int] = []
    cand = 2
    while len(found) < m:
        if all(cand % p for p in found if p * p <= cand):
            found.append(cand)
        cand += 1
    return found


def lcm_upto(k: int) -> int:
    """LCM of {1, ..., k}."""
    if k < 1:
        raise DomainError("LCM is only defined for a non-empty set")
    return reduce(math.lcm, range(1, k + 1), 1)


def bit(i: int, n: int) -> int:
    """The i-th least significant bit of n (1-based)."""
    if i < 1:
        raise DomainError("bit positions start at 1")
    return (n >> (i - 1)) & 1


def parity_divisible_count(i: int, n: int) -> str:
    """Parity of |{n' in [1, n] : 2^(i-1) divides n'}|, returned as 'even'/'odd'.

    The count is floor(n / 2^(i-1)), so only its lowest bit matters.
    """
    if i < 1:
        raise DomainError("i must be >= 1")
    return "odd" if (n >> (i - 1)) & 1 else "even"


@dataclass(frozen=True)
class CrrAssignment:
    """One-hot residue encoding of a number: bits[(i, r)] = 1 iff M mod p_i = r.

    ``i`` is 1-based, matching the variable names x_{i,r}.
    """

    primes: tuple[int, ...]
    bits: Mapping[tuple[int, int], int]

    def __post_init__(self):
        for i, p in enumerate(self.primes, start=1):
            if sum(self.bits.get((i, r), 0) for r in range(p)) != 1:
                raise DomainError(f"residue block {i} is not one-hot")

    def residue(self, i: int) -> int:
        p = self.primes[i - 1]
        return next(r for r in range(p) if self.bits.get((i, r), 0))

    def residues(self) -> tuple[int, ...]:
        return tuple(self.residue(i) for i in range(1, len(self.primes) + 1))

    def value(self, i: int, r: int) -> int:
        return self.bits.get((i, r), 0)


def crr(primes: Sequence[int], M: int) -> CrrAssignment:
    modulus = math.prod(primes)
    if not 0 <= M < modulus:
        raise DomainError(f"M={M} outside [0, {modulus})")
    bits = {
        (i, r): int(M % p == r)
        for i, p in enumerate(primes, start=1)
        for r in range(p)
    }
    return CrrAssignment(tuple(primes), bits)


def crt_reconstruct(primes: Sequence[int], residues: Sequence[int]) -> int:
    """Inverse of crr for pairwise coprime moduli."""
    modulus = math.prod(primes)
    total = 0
    for p, r in zip(primes, residues):
        rest = modulus // p
        total += r * rest * pow(rest, -1, p)
    return total % modulus
