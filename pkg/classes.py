"""
Cycle types, conjugacy-class sizes and class functions on S_n and A_n
A_n class functions live on the S_n-invariant subspace: they are indexed by
even S_n cycle types and take equal values on both halves of a split class
"""

# --- Standard Library ---
import math
import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache, cached_property

# --- Third-Party Packages ---
from mpmath import mp

# --- Local Modules ---
from errors import PreconditionError
from partitions import (
    Partition,
    partitions_of,
    as_partition,
    canonical_order,
)

GROUPS = ("S", "A")


class CycleType(Partition):
    """Cycle lengths of a permutation, fixed points included as 1s."""

    @classmethod
    def parse(cls, text):
        """Cycle lengths in any order: "1,1,1,9" and "9,1,1,1" name the same class."""
        try:
            parts = [int(p) for p in (text or "").split(",") if p.strip()]
        except ValueError:
            raise PreconditionError("error.bad_partition", text=text) from None
        return cls(sorted(parts, reverse=True))

    @cached_property
    def multiplicities(self):
        """f_i = number of cycles of length i."""
        return dict(Counter(self))

    @property
    def fixed_points(self):
        return self.multiplicities.get(1, 0)

    @property
    def number_of_cycles(self):
        return len(self)

    @classmethod
    def of_permutation(cls, perm):
        return cls(cycle_lengths(perm))


def as_cycle_type(value):
    if isinstance(value, CycleType):
        return value
    return CycleType(as_partition(value))


def check_group(group, n=None):
    if group not in GROUPS:
        raise PreconditionError("error.group_tag", group=group)
    if group == "A" and n is not None and n < 2:
        raise PreconditionError("error.an_small", n=n)
    return group


# --- Class sizes and parity ---

@lru_cache(maxsize=65536)
def _class_size(parts):
    denom = 1
    for length, f in Counter(parts).items():
        denom *= length ** f * math.factorial(f)
    return math.factorial(sum(parts)) // denom


def class_size(ct):
    """n! / prod(i^f_i * f_i!), the S_n-class size."""
    return _class_size(tuple(as_cycle_type(ct)))


def is_even(ct):
    return sum(p - 1 for p in ct) % 2 == 0


def parity(ct):
    return "even" if is_even(ct) else "odd"


def sign(ct):
    return 1 if is_even(ct) else -1


def group_order(n, group="S"):
    check_group(group, n)
    return math.factorial(n) if group == "S" else math.factorial(n) // 2


def density(ct, group="S"):
    ct = as_cycle_type(ct)
    return Fraction(class_size(ct), group_order(ct.n, group))


@lru_cache(maxsize=None)
def _cycle_types(n, group):
    types = [CycleType(p) for p in partitions_of(n)]
    if group == "A":
        types = [ct for ct in types if is_even(ct)]
    return tuple(types)


def cycle_types(n, group="S"):
    """Every cycle type indexing a class function on the group, in canonical order."""
    check_group(group, n)
    return _cycle_types(n, group)


def an_split_classes(n):
    """Even cycle types whose S_n class splits into two A_n classes: odd, pairwise distinct parts."""
    check_group("A", n)
    return [ct for ct in cycle_types(n, "A") if all(p % 2 for p in ct) and len(set(ct)) == len(ct)]


# --- Permutations (brute-force oracles) ---

def cycle_lengths(perm):
    """Cycle lengths of a permutation given as a tuple of images of 0..n-1, largest first."""
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        lengths.append(length)
    return sorted(lengths, reverse=True)


def compose(p, q):
    """(p q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def inverse(perm):
    inv = [0] * len(perm)
    for i, image in enumerate(perm):
        inv[image] = i
    return tuple(inv)


def representative(ct):
    """A permutation of the given cycle type, cycles laid out on consecutive points."""
    ct = as_cycle_type(ct)
    perm = list(range(ct.n))
    start = 0
    for length in ct:
        for k in range(length):
            perm[start + k] = start + (k + 1) % length
        start += length
    return tuple(perm)


def permutations(n, group="S"):
    check_group(group, n)
    for perm in itertools.permutations(range(n)):
        if group == "S" or is_even(cycle_lengths(perm)):
            yield perm


@lru_cache(maxsize=16)
def class_pair_counts(n, group="S"):
    """
    For each cycle type c, the counts N_c[(a, b)] of sigma in the group with
    type(sigma) = a and type(sigma tau_c) = b, tau_c a fixed representative of c.
    Exhaustive enumeration of the group; only used as an oracle at small n.
    """
    out = {}
    elements = [(perm, CycleType(cycle_lengths(perm))) for perm in permutations(n, group)]
    for c in cycle_types(n, group):
        tau = representative(c)
        counts = Counter()
        for sigma, a in elements:
            counts[(a, CycleType(cycle_lengths(compose(sigma, tau))))] += 1
        out[c] = dict(counts)
    return out


@lru_cache(maxsize=None)
def derangements(n):
    """Permutations of n points without fixed points: D(n) = (n-1)(D(n-1) + D(n-2))."""
    if n == 0:
        return 1
    if n == 1:
        return 0
    return (n - 1) * (derangements(n - 1) + derangements(n - 2))


def rencontres(n, k):
    """Permutations of n points with exactly k fixed points."""
    if not 0 <= k <= n:
        return 0
    return math.comb(n, k) * derangements(n - k)


# --- Class functions ---

def exact_json(value):
    value = Fraction(value)
    return {"num": str(value.numerator), "den": str(value.denominator)}


def exact_from_json(entry):
    return Fraction(int(entry["num"]), int(entry["den"]))


class ClassFunction:
    """
    Exact rational class function on S_n or on the S_n-invariant part of A_n.
    Cycle types not present in the value map are zero. Immutable.
    """

    __slots__ = ("group", "n", "_values")

    def __init__(self, n, group="S", values=None):
        check_group(group, n)
        clean = {}
        for ct, v in (values or {}).items():
            ct = as_cycle_type(ct)
            if ct.n != n:
                raise PreconditionError(
                    "error.size_mismatch", left="class function", left_n=n, right=str(ct), right_n=ct.n
                )
            if group == "A" and not is_even(ct):
                raise PreconditionError("error.odd_class", ct=str(ct), n=n)
            v = Fraction(v)
            if v:
                clean[ct] = v
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_values", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ClassFunction is immutable")

    @classmethod
    def constant(cls, n, group="S", value=1):
        return cls(n, group, {ct: value for ct in cycle_types(n, group)})

    @classmethod
    def from_function(cls, n, group, func):
        return cls(n, group, {ct: func(ct) for ct in cycle_types(n, group)})

    def __call__(self, ct):
        return self._values.get(as_cycle_type(ct), Fraction(0))

    def items(self):
        """(cycle type, value) over the whole domain, in canonical order."""
        for ct in cycle_types(self.n, self.group):
            yield ct, self._values.get(ct, Fraction(0))

    @property
    def support(self):
        return canonical_order(self._values)

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return (self.group, self.n, self._values) == (other.group, other.n, other._values)

    def __hash__(self):
        return hash((self.group, self.n, frozenset(self._values.items())))

    def __repr__(self):
        body = ", ".join(f"{ct}: {self._values[ct]}" for ct in self.support)
        return f"ClassFunction({self.group}_{self.n}, {{{body}}})"

    def check_compatible(self, other):
        if (self.group, self.n) != (other.group, other.n):
            raise PreconditionError(
                "error.tag_mismatch",
                left=f"{self.group}_{self.n}",
                right=f"{other.group}_{other.n}",
            )

    def __add__(self, other):
        self.check_compatible(other)
        keys = set(self._values) | set(other._values)
        return ClassFunction(self.n, self.group, {k: self(k) + other(k) for k in keys})

    def __sub__(self, other):
        self.check_compatible(other)
        keys = set(self._values) | set(other._values)
        return ClassFunction(self.n, self.group, {k: self(k) - other(k) for k in keys})

    def scale(self, factor):
        factor = Fraction(factor)
        return ClassFunction(self.n, self.group, {k: v * factor for k, v in self._values.items()})

    def density(self, ct):
        return density(ct, self.group)

    def mean(self):
        """E[f] under the uniform measure on the group."""
        return sum((self.density(ct) * v for ct, v in self._values.items()), Fraction(0))

    def inner(self, other):
        """<f, g> = E[f g]; all values are real."""
        self.check_compatible(other)
        return sum(
            (self.density(ct) * v * other(ct) for ct, v in self._values.items()),
            Fraction(0),
        )

    def is_symmetric(self):
        # sigma and its inverse share a cycle type
        return True

    def to_json(self):
        return {
            "group": self.group,
            "n": self.n,
            "values": [{"type": str(ct), **exact_json(v)} for ct, v in self.items()],
        }

    @classmethod
    def from_json(cls, data):
        values = {CycleType.parse(e["type"]): exact_from_json(e) for e in data.get("values", [])}
        return cls(int(data["n"]), data.get("group", "S"), values)


def normalized_class_indicator(ct, group="S"):
    """1_C / mu(C): the density of the uniform measure on one class, so ||f||_1 = 1."""
    ct = as_cycle_type(ct)
    check_group(group, ct.n)
    if group == "A" and not is_even(ct):
        raise PreconditionError("error.odd_class", ct=str(ct), n=ct.n)
    return ClassFunction(ct.n, group, {ct: 1 / density(ct, group)})


def normalized_set_indicator(types, group="S"):
    """1_A / mu(A) for the normal set A formed by a union of classes."""
    types = sorted({as_cycle_type(ct) for ct in types}, key=tuple, reverse=True)
    if not types:
        raise PreconditionError("error.empty_set", name="A")
    n = types[0].n
    check_group(group, n)
    for ct in types:
        if ct.n != n:
            raise PreconditionError(
                "error.size_mismatch", left=str(types[0]), left_n=n, right=str(ct), right_n=ct.n
            )
        if group == "A" and not is_even(ct):
            raise PreconditionError("error.odd_class", ct=str(ct), n=n)
    total = sum((density(ct, group) for ct in types), Fraction(0))
    return ClassFunction(n, group, {ct: 1 / total for ct in types})


def identity_delta(n, group="S"):
    return normalized_class_indicator(CycleType([1] * n), group)


# --- Norms ---

def lp_norm_power_exact(f, p):
    """||f||_p^p as an exact rational, for a positive integer p."""
    if isinstance(p, bool) or not isinstance(p, int) or p < 1:
        raise PreconditionError("error.exact_exponent", p=p)
    return sum((f.density(ct) * abs(v) ** p for ct, v in f.items() if v), Fraction(0))


def l2_norm_exact(f):
    """||f||_2^2, exact."""
    return lp_norm_power_exact(f, 2)


def lp_norm(f, p):
    if p < 1:
        raise PreconditionError("error.norm_exponent", minimum=1, p=p)
    if float(p).is_integer():
        power = lp_norm_power_exact(f, int(p))
        return float(mp.root(mp.mpf(power.numerator) / power.denominator, int(p)))
    total = math.fsum(float(f.density(ct)) * float(abs(v)) ** p for ct, v in f.items() if v)
    return total ** (1.0 / p)
