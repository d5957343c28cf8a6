"""Point counts of C_{n,k} over F_q, gonality lower bounds, Frey thresholds.

The fast count groups affine solutions by their progression ``(a, r)``:
the number of vectors with ``x_i^k = a + i*r`` for all ``i`` is the
product of the residue counts ``rho_k(a + i*r)``.  Summing over
``(a, r) != (0, 0)`` and dividing by ``q - 1`` gives the projective
count.  Scaling ``(a, r)`` by a k-th power leaves each product unchanged,
so only one ``r`` per coset of ``(F_q^*)^k`` needs to be visited.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .apcurve import genus
from .errors import InvalidArgument, InvariantViolation, ResourceLimit, UnsupportedCharacteristic
from .exactnum import primes_in_range
from .finitefield import FieldDescriptor, field_make, kth_roots, residue_table
from .linalg import normalize

BRUTE_FORCE_LIMIT = 10 ** 8
_CHUNK = 1 << 20


@dataclass(frozen=True)
class CountResult:
    n: int
    k: int
    p: int
    m: int
    count: int
    method: str

    @property
    def q(self) -> int:
        return self.p ** self.m


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("APSQ_THREADS", "1")))
    except ValueError:
        return 1


def _check(n: int, k: int):
    if n < 2 or k < 2:
        raise InvalidArgument(f"need n >= 2 and k >= 2, got n={n}, k={k}")


def _split(F: FieldDescriptor):
    codes = np.arange(F.q, dtype=np.int64)
    return codes % F.p, codes // F.p


def _shift_codes(F: FieldDescriptor, c0, c1, r: int, i: int):
    """Codes of ``a + i*r`` for every ``a`` given as split coordinates."""
    p = F.p
    r0, r1 = r % p, r // p
    return (c0 + i * r0) % p + ((c1 + i * r1) % p) * p


def _fiber_sum(F: FieldDescriptor, rho: np.ndarray, n: int, r: int, c0, c1) -> int:
    """``sum_a prod_{i=0..n} rho(a + i*r)`` as an exact Python int."""
    g_max = int(rho.max())
    exact_int64 = F.q * g_max ** (n + 1) < 2 ** 62
    prod = rho[_shift_codes(F, c0, c1, r, 0)]
    if not exact_int64:
        prod = prod.astype(object)
    for i in range(1, n + 1):
        prod = prod * rho[_shift_codes(F, c0, c1, r, i)]
    return int(prod.sum())


def coset_representatives(F: FieldDescriptor, k: int) -> list[int]:
    """One code per coset of the k-th powers in F_q^*, and the coset size."""
    g = math.gcd(k, F.q - 1)
    chars = F.vec_pow(np.arange(1, F.q, dtype=np.int64), (F.q - 1) // g)
    _, first = np.unique(chars, return_index=True)
    reps = sorted(int(i) + 1 for i in first)
    if len(reps) != g:
        raise InvariantViolation(f"expected {g} cosets of k-th powers, found {len(reps)}")
    return reps


def count_points(n: int, k: int, F: FieldDescriptor, threads: Optional[int] = None) -> CountResult:
    """#C_{n,k}(F_q) by the coset-reduced fiber formula."""
    _check(n, k)
    table = residue_table(F, k)
    rho = np.asarray(table.counts)
    c0, c1 = _split(F)
    q = F.q
    # r = 0: every coordinate satisfies x_i^k = a
    total = sum(int(x) ** (n + 1) for x in rho[1:] if x)
    reps = coset_representatives(F, k)
    size = (q - 1) // len(reps)
    threads = threads or default_threads()

    def work(r):
        return _fiber_sum(F, rho, n, r, c0, c1)

    if threads > 1 and len(reps) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partial = list(pool.map(work, reps))
    else:
        partial = [work(r) for r in reps]
    total += size * sum(partial)
    count, rem = divmod(total, q - 1)
    if rem:
        raise InvariantViolation(f"fiber sum {total} not divisible by q-1={q - 1}")
    return CountResult(n, k, F.p, F.m, count, "fiber-formula")


def count_points_reference(n: int, k: int, F: FieldDescriptor) -> CountResult:
    """The plain O(q^2 n) fiber sum over every ``r``; kept as a cross-check."""
    _check(n, k)
    rho = np.asarray(residue_table(F, k).counts)
    c0, c1 = _split(F)
    total = sum(_fiber_sum(F, rho, n, r, c0, c1) for r in range(F.q)) - 1
    count, rem = divmod(total, F.q - 1)
    if rem:
        raise InvariantViolation("reference fiber sum not divisible by q-1")
    return CountResult(n, k, F.p, F.m, count, "fiber-reference")


def count_points_bruteforce(n: int, k: int, F: FieldDescriptor) -> CountResult:
    """Enumerate leading-one representatives of P^n(F_q) and test membership."""
    _check(n, k)
    q, p = F.q, F.p
    if q ** n > BRUTE_FORCE_LIMIT:
        raise ResourceLimit(f"q^n = {q}^{n} exceeds the brute-force guard {BRUTE_FORCE_LIMIT}")
    pw = F.power_table(k)
    pw0, pw1 = pw % p, pw // p
    count = 0
    for lead in range(n + 1):
        free = n - lead
        total = q ** free
        for start in range(0, total, _CHUNK):
            idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            cols0, cols1 = [], []
            for j in range(n + 1):
                if j < lead:
                    v0 = v1 = np.zeros_like(idx)
                elif j == lead:
                    v0, v1 = np.ones_like(idx), np.zeros_like(idx)
                else:
                    code = (idx // q ** (j - lead - 1)) % q
                    v0, v1 = pw0[code], pw1[code]
                cols0.append(v0)
                cols1.append(v1)
            ok = np.ones(idx.shape, dtype=bool)
            for i in range(n - 1):
                ok &= (cols0[i] - 2 * cols0[i + 1] + cols0[i + 2]) % p == 0
                ok &= (cols1[i] - 2 * cols1[i + 1] + cols1[i + 2]) % p == 0
            count += int(ok.sum())
    return CountResult(n, k, F.p, F.m, count, "brute-force")


def enumerate_points(n: int, k: int, F: FieldDescriptor) -> list[tuple]:
    """Every point of C_{n,k}(F_q), lifted fiber by fiber, leading coordinate one.

    Scaling a point by c scales (a, r) by c^k, so (a, r) runs over r in a
    set of coset representatives of the k-th powers with a free, plus
    r = 0 with a over the same representatives.
    """
    _check(n, k)
    reps = [F.decode(c) for c in coset_representatives(F, k)]
    classes = [(F.decode(a), r) for r in reps for a in range(F.q)] + [(a, F.zero) for a in reps]
    found = set()
    for a, r in classes:
        roots = []
        for i in range(n + 1):
            rs = kth_roots(a + i * r, k)
            if not rs:
                break
            roots.append(rs)
        else:
            for P in itertools.product(*roots):
                if any(x != 0 for x in P):
                    found.add(normalize(P))
    return sorted(found, key=lambda P: tuple(x.code for x in P))


def hasse_weil_check(n: int, p: int, count: Optional[int] = None) -> bool:
    """``|#C_n(F_p) - (p+1)| <= 2 g_n sqrt(p)``, compared exactly after squaring."""
    if p <= n:
        raise UnsupportedCharacteristic(f"need p > n, got p={p}, n={n}")
    if count is None:
        count = count_points(n, 2, field_make(p)).count
    g = genus(n)
    return (count - (p + 1)) ** 2 <= 4 * g * g * p


@dataclass(frozen=True)
class GonalityReport:
    n: int
    k: int
    lower_bound: int
    witness: tuple[int, int, int]
    corollary_bound: Optional[Fraction]
    upper_bound: Optional[int]
    window: tuple[int, int]
    window_extended: bool
    candidates: list = field(default_factory=list)


def admissible_primes(n: int, k: int) -> tuple[list[int], tuple[int, int], bool]:
    """Primes n < p < hi with p not dividing k (and p = 1 mod k for odd k).

    The window starts at (n, 2n) and doubles until non-empty.
    """
    hi = 2 * n
    extended = False
    while True:
        ps = [p for p in primes_in_range(max(n, 2), hi - 1) if p > 2 and k % p]
        if k % 2:
            ps = [p for p in ps if p % k == 1]
        if ps:
            return ps, (n, hi), extended
        hi *= 2
        extended = True


def corollary_closed_form(n: int) -> Fraction:
    """The lower bound ``2^(n-1)/n`` for the gonality of C_n."""
    if n < 3:
        raise InvalidArgument("the corollary bound needs n >= 3")
    return Fraction(2 ** (n - 1), n)


def gonality_lower_bound(n: int, k: int = 2, m_max: int = 1) -> GonalityReport:
    """Best bound ``ceil(#C(F_q) / (q+1))`` over admissible primes and degrees."""
    if n < 2:
        raise InvalidArgument("need n >= 2")
    if m_max not in (1, 2):
        raise InvalidArgument("m_max must be 1 or 2")
    primes, window, extended = admissible_primes(n, k)
    best = None
    candidates = []
    for p in primes:
        for m in range(1, m_max + 1):
            F = field_make(p, m)
            c = count_points(n, k, F).count
            b = -(-c // (F.q + 1))
            candidates.append((p, m, c, b))
            if best is None or b > best[3]:
                best = (p, m, c, b)
    even = k == 2
    upper = 2 ** (n - 2) if even and n >= 3 else None
    if upper is not None and best[3] > upper:
        raise InvariantViolation(f"gonality lower bound {best[3]} exceeds upper bound {upper}")
    return GonalityReport(
        n=n,
        k=k,
        lower_bound=best[3],
        witness=best[:3],
        corollary_bound=corollary_closed_form(n) if even and n >= 3 else None,
        upper_bound=upper,
        window=window,
        window_extended=extended,
        candidates=candidates,
    )


@dataclass(frozen=True)
class FreyReport:
    d: int
    k: int
    closed_form_n: Optional[int]
    computed_n: dict


def frey_threshold(d: int, k: int = 2, m_values=(1, 2), n_max: int = 40) -> FreyReport:
    """Smallest n whose gonality bound exceeds 2d.

    ``closed_form_n`` uses ``2^(n-1)/n > 2d`` (k = 2 only); ``computed_n``
    maps each ``m_max`` to the smallest n with a computed bound above 2d.
    """
    if d < 1:
        raise InvalidArgument("degree d must be >= 1")
    closed = None
    if k == 2:
        closed = next(n for n in range(3, n_max + 1) if corollary_closed_form(n) > 2 * d)
    computed = {}
    for m in m_values:
        computed[m] = next(
            (n for n in range(3, n_max + 1) if gonality_lower_bound(n, k, m).lower_bound > 2 * d),
            None,
        )
    return FreyReport(d, k, closed, computed)
