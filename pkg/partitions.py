"""
Partitions of n and the Young-diagram combinatorics built on them:
conjugation, level, the tilde partition, hook-length dimensions and enumeration
A Partition labels both an irreducible character and a cycle type
"""

# --- Standard Library ---
import math
from functools import lru_cache, cached_property

# --- Third-Party Packages ---
from mpmath import mp

# --- Local Modules ---
from config_utils import get_config_entry
from errors import PreconditionError


class Partition(tuple):
    """Weakly decreasing tuple of positive parts; the empty tuple is the partition of 0."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p < 1 or (i and parts[i - 1] < p):
                raise PreconditionError("error.bad_partition", text=",".join(map(str, parts)))
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text):
        """Read the "5,3,1" text format; the empty string is the empty partition."""
        text = (text or "").strip()
        if not text:
            return cls(())
        try:
            parts = [int(p) for p in text.split(",") if p.strip()]
        except ValueError:
            raise PreconditionError("error.bad_partition", text=text) from None
        return cls(parts)

    @cached_property
    def n(self):
        return sum(self)

    @property
    def length(self):
        return len(self)

    def part(self, i):
        """i-th part (0-based), 0 past the end."""
        return self[i] if i < len(self) else 0

    def __str__(self):
        return ",".join(map(str, self))

    def __repr__(self):
        return f"{type(self).__name__}({str(self)})"


def as_partition(value):
    if isinstance(value, Partition):
        return value
    if isinstance(value, str):
        return Partition.parse(value)
    return Partition(value)


def canonical_order(items):
    """Reverse-lexicographic order (largest first parts first); every report table uses it."""
    return sorted(items, key=tuple, reverse=True)


@lru_cache(maxsize=None)
def _conjugate_parts(parts):
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > j) for j in range(parts[0]))


def conjugate(lam):
    lam = as_partition(lam)
    return Partition(_conjugate_parts(tuple(lam)))


def level(lam):
    lam = as_partition(lam)
    if lam.n == 0:
        raise PreconditionError("error.empty_partition")
    return min(lam.n - lam[0], lam.n - len(lam))


def tilde(lam):
    """
    The partition of d left after deleting the long first row of a level-d
    partition, or the first row of its conjugate when only the column is long.
    A tie deletes the row.
    """
    lam = as_partition(lam)
    if lam.n == 0:
        return Partition(())
    d = level(lam)
    if lam[0] == lam.n - d:
        return Partition(lam[1:])
    return Partition(conjugate(lam)[1:])


@lru_cache(maxsize=65536)
def _hook_dimension(parts):
    if not parts:
        return 1
    cols = _conjugate_parts(parts)
    hooks = 1
    for i, row in enumerate(parts):
        for j in range(row):
            hooks *= (row - j) + (cols[j] - i) - 1
    return math.factorial(sum(parts)) // hooks


def dimension(lam):
    """Number of standard Young tableaux of shape lam, by the hook-length formula."""
    return _hook_dimension(tuple(as_partition(lam)))


def standard_tableaux(lam):
    """
    Every standard Young tableau of shape lam, rows as tuples.
    Exponential; kept as an oracle for dimension() on small shapes.
    """
    lam = as_partition(lam)
    n = lam.n
    if n == 0:
        yield ()
        return
    shape = list(lam)
    for row in removable_rows(lam):
        smaller = shape.copy()
        smaller[row] -= 1
        smaller = Partition([p for p in smaller if p])
        for tab in standard_tableaux(smaller):
            rows = [list(r) for r in tab]
            if row == len(rows):
                rows.append([])
            rows[row].append(n)
            yield tuple(tuple(r) for r in rows)


def removable_rows(lam):
    """Rows whose last box is a removable corner."""
    return [i for i, p in enumerate(lam) if i + 1 == len(lam) or lam[i + 1] < p]


def remove_box(lam, row):
    parts = list(lam)
    parts[row] -= 1
    return Partition([p for p in parts if p])


def partitions_of(n):
    """
    Every partition of n exactly once, in reverse-lexicographic order.
    Iterative (Zoghbi-Stojmenovic ZS1), so n is not limited by recursion depth.
    """
    if n < 0:
        return
    if n == 0:
        yield Partition(())
        return

    x = [1] * (n + 1)
    x[1] = n
    m, h = 1, 1
    yield Partition(x[1:2])
    while x[1] != 1:
        if x[h] == 2:
            m, x[h], h = m + 1, 1, h - 1
        else:
            r = x[h] - 1
            t, x[h] = m - h + 1, r
            while t >= r:
                h += 1
                x[h], t = r, t - r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield Partition(x[1:m + 1])


@lru_cache(maxsize=None)
def partition_count(n):
    """p(n) by Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def partitions_of_level_at_most(n, d):
    """
    The partitions of n of level <= d, without enumerating all p(n) of them:
    each mu of k <= d is glued below a first row of length n-k, then conjugated.
    """
    if not 0 <= d < n:
        raise PreconditionError("error.level_range", n=n, d=d)
    found = set()
    for k in range(d + 1):
        for mu in partitions_of(k):
            if k == 0 or n - k >= mu[0]:
                lam = Partition((n - k,) + tuple(mu))
                found.add(lam)
                found.add(conjugate(lam))
    yield from canonical_order(found)


def partitions_of_level(n, d):
    for lam in partitions_of_level_at_most(n, d):
        if level(lam) == d:
            yield lam


# --- Exact against float comparisons ---

def log_at_least(lhs_log, rhs_log, guard=None, precision=None):
    """
    Decide log(lhs) >= log(rhs) where each side is a callable taking a math
    backend (math or an mpmath context) and returning the logarithm.
    Instances inside the relative guard band are re-checked at high precision.
    Returns (holds, lhs_value, rhs_value).
    """
    if guard is None:
        guard = get_config_entry("bounds", "log_guard", default=1e-9, value_type=float)
    if precision is None:
        precision = get_config_entry("bounds", "mp_precision_bits", default=256, value_type=int)

    a, b = lhs_log(math), rhs_log(math)
    scale = max(abs(a), abs(b), 1.0)
    if abs(a - b) > guard * scale:
        return a >= b, a, b

    with mp.workprec(precision):
        a_mp, b_mp = lhs_log(mp), rhs_log(mp)
        return bool(a_mp >= b_mp), float(a_mp), float(b_mp)
