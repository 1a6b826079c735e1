"""
Harmonic analysis of class functions: Fourier coefficients, convolution,
L^q norms of characters, Kronecker coefficients and globalness certificates

On A_n a self-conjugate lambda splits into two characters of dimension
chi_lambda(1)/2. Only S_n-invariant functions are admitted, so both split
coefficients equal <f, chi_lambda>/2 and the pair is stored as that one aggregate.
"""

# --- Standard Library ---
import math
import random
import itertools
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

# --- Third-Party Packages ---
from mpmath import mp

# --- Local Modules ---
from config_utils import get_config_entry
from errors import PreconditionError, InternalDefect, VerificationFailure
from partitions import (
    Partition,
    as_partition,
    conjugate,
    dimension,
    level,
    partitions_of,
    tilde,
)
from classes import (
    ClassFunction,
    CycleType,
    check_group,
    class_pair_counts,
    cycle_lengths,
    cycle_types,
    density,
    group_order,
)
from characters import (
    branching_multiplicities,
    mn_value,
)


class SquaredNorm(NamedTuple):
    squared: Fraction
    value: float


def sqrt_value(x):
    x = Fraction(x)
    return float(mp.sqrt(mp.mpf(x.numerator) / x.denominator))


@lru_cache(maxsize=None)
def class_densities(n, group="S"):
    return tuple((ct, density(ct, group)) for ct in cycle_types(n, group))


@lru_cache(maxsize=4096)
def _character_row(lam, group):
    return tuple((ct, mn_value(lam, ct)) for ct in cycle_types(lam.n, group))


def character_row(lam, group="S"):
    """chi_lambda on every class of the group, in canonical order."""
    return list(_character_row(as_partition(lam), group))


def is_self_conjugate(lam):
    return lam == conjugate(lam)


class Irreducible(NamedTuple):
    """One Fourier label: lambda, how many irreducibles it stands for, and their common dimension."""
    label: Partition
    copies: int
    dim: Fraction


@lru_cache(maxsize=None)
def irreducibles(n, group="S"):
    """
    The labels a Fourier expansion is indexed by. On A_n each pair {lambda, lambda'}
    is represented by its reverse-lexicographically first member.
    """
    check_group(group, n)
    out = []
    for lam in partitions_of(n):
        dim = dimension(lam)
        if group == "S":
            out.append(Irreducible(lam, 1, Fraction(dim)))
            continue
        conj = conjugate(lam)
        if lam == conj:
            out.append(Irreducible(lam, 2, Fraction(dim, 2)))
        elif tuple(lam) > tuple(conj):
            out.append(Irreducible(lam, 1, Fraction(dim)))
    return tuple(out)


def fourier_coefficient(f, lam):
    """
    <f, chi_lambda> = E[f chi_lambda] on f's group; on A_n with self-conjugate
    lambda this is the aggregate over both split characters.
    """
    lam = as_partition(lam)
    if lam.n != f.n:
        raise PreconditionError(
            "error.tag_mismatch", left=f"{f.group}_{f.n}", right=f"chi_{lam} (n={lam.n})"
        )
    total = Fraction(0)
    for ct, chi in character_row(lam, f.group):
        v = f(ct)
        if v:
            total += f.density(ct) * v * chi
    return total


class FourierExpansion:
    """Coefficients indexed by irreducibles(n, group) labels; aggregates for split A_n pairs."""

    def __init__(self, n, group, coefficients):
        self.n = n
        self.group = group
        self.coefficients = dict(coefficients)

    def __getitem__(self, lam):
        return self.coefficients.get(as_partition(lam), Fraction(0))

    def items(self):
        for irr in irreducibles(self.n, self.group):
            yield irr, self.coefficients.get(irr.label, Fraction(0))

    def split_coefficient(self, irr, aggregate):
        """Coefficient of one irreducible the label stands for."""
        return aggregate / irr.copies

    def parseval_sum(self):
        """Sum of squared coefficients over all irreducibles; equals ||f||_2^2."""
        total = Fraction(0)
        for irr, c in self.items():
            total += irr.copies * self.split_coefficient(irr, c) ** 2
        return total

    def to_function(self):
        """Inverse expansion: f = sum over labels of the coefficient times chi_lambda."""
        values = {}
        for irr, c in self.items():
            if not c:
                continue
            # the two split characters sum to chi_lambda on S_n-invariant classes
            weight = self.split_coefficient(irr, c)
            for ct, chi in character_row(irr.label, self.group):
                values[ct] = values.get(ct, Fraction(0)) + weight * chi
        return ClassFunction(self.n, self.group, values)

    def to_json(self):
        return {
            "group": self.group,
            "n": self.n,
            "coefficients": [
                {"lambda": str(irr.label), "copies": irr.copies, "num": str(c.numerator), "den": str(c.denominator)}
                for irr, c in self.items()
            ],
        }


def fourier_expansion(f):
    return FourierExpansion(
        f.n, f.group, {irr.label: fourier_coefficient(f, irr.label) for irr in irreducibles(f.n, f.group)}
    )


def convolve(f, g):
    """
    f*g(tau) = E_sigma[f(sigma^-1) g(sigma tau)], through the coefficients
    f_hat g_hat / chi(1). Aggregated A_n pairs obey the same rule with the full chi_lambda(1).
    """
    f.check_compatible(g)
    fe, ge = fourier_expansion(f), fourier_expansion(g)
    coefficients = {}
    for irr in irreducibles(f.n, f.group):
        a, b = fe[irr.label], ge[irr.label]
        if a and b:
            coefficients[irr.label] = a * b / dimension(irr.label)
    return FourierExpansion(f.n, f.group, coefficients).to_function()


def convolve_bruteforce(f, g):
    """The defining double sum over the group; small n only."""
    f.check_compatible(g)
    cap = get_config_entry("mixing", "bruteforce_cap", default=8, value_type=int)
    if f.n > cap:
        raise PreconditionError("error.bruteforce_cap", cap=cap, n=f.n)
    order = group_order(f.n, f.group)
    values = {}
    for c, counts in class_pair_counts(f.n, f.group).items():
        total = sum((k * f(a) * g(b) for (a, b), k in counts.items()), Fraction(0))
        values[c] = total / order
    return ClassFunction(f.n, f.group, values)


# --- Norms of characters ---

def q_norm_exact(lam, q, group="S"):
    """||chi_lambda||_q^q, exact, over S_n or over A_n for the restricted character."""
    lam = as_partition(lam)
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise PreconditionError("error.exact_exponent", p=q)
    densities = dict(class_densities(lam.n, group))
    return sum(
        (densities[ct] * abs(chi) ** q for ct, chi in character_row(lam, group) if chi),
        Fraction(0),
    )


def q_norm(lam, q, group="S"):
    """
    ||chi_lambda||_q. Integer q goes through the exact power; any other q
    uses compensated float summation over the exact values.
    """
    if q < 1:
        raise PreconditionError("error.norm_exponent", minimum=1, p=q)
    lam = as_partition(lam)
    if float(q).is_integer():
        power = q_norm_exact(lam, int(q), group)
        return float(mp.root(mp.mpf(power.numerator) / power.denominator, int(q)))
    densities = dict(class_densities(lam.n, group))
    total = math.fsum(float(densities[ct]) * float(abs(chi)) ** q for ct, chi in character_row(lam, group) if chi)
    return total ** (1.0 / q)


def kronecker(lam, mu, nu):
    """g(lambda, mu, nu) = E[chi_lambda chi_mu chi_nu]; anything but a nonnegative integer is a defect."""
    lam, mu, nu = as_partition(lam), as_partition(mu), as_partition(nu)
    for other in (mu, nu):
        if other.n != lam.n:
            raise PreconditionError(
                "error.size_mismatch", left=str(lam), left_n=lam.n, right=str(other), right_n=other.n
            )
    a, b, c = (dict(character_row(p)) for p in (lam, mu, nu))
    total = Fraction(0)
    for ct, rho in class_densities(lam.n):
        total += rho * a[ct] * b[ct] * c[ct]
    if total.denominator != 1 or total < 0:
        raise InternalDefect("error.kronecker_defect", lam=str(lam), mu=str(mu), nu=str(nu), value=str(total))
    return total.numerator


def kronecker_power_trivial_multiplicity(lam, q):
    """Multiplicity of the trivial character in chi_lambda^q, by iterating kronecker()."""
    lam = as_partition(lam)
    shapes = list(partitions_of(lam.n))
    vector = {lam: 1}
    for _ in range(q - 1):
        nxt = {}
        for nu in shapes:
            total = sum(c * kronecker(kappa, lam, nu) for kappa, c in vector.items())
            if total:
                nxt[nu] = total
        vector = nxt
    return vector.get(Partition((lam.n,)), 0)


# --- Restrictions and globalness ---

def restriction_norm(lam, m):
    """L^2 norm of chi_lambda restricted to S_(n-m): sqrt(sum of squared branching multiplicities)."""
    lam = as_partition(lam)
    if not 0 <= m < lam.n:
        raise PreconditionError("error.restriction_range", n=lam.n, m=m)
    squared = Fraction(sum(c * c for c in branching_multiplicities(lam, m).values()))
    return SquaredNorm(squared, sqrt_value(squared))


def _check_tuples(n, I, J):
    I, J = tuple(I), tuple(J)
    valid = (
        len(I) == len(J) <= n
        and len(set(I)) == len(I)
        and len(set(J)) == len(J)
        and all(0 <= x < n for x in I + J)
    )
    if not valid:
        raise PreconditionError("error.bad_tuples", I=I, J=J, n=n)
    return I, J


def coset_permutations(n, I, J):
    """Every permutation sending I[k] to J[k] for all k."""
    I, J = _check_tuples(n, I, J)
    free_src = [x for x in range(n) if x not in I]
    free_dst = [x for x in range(n) if x not in J]
    base = [0] * n
    for i, j in zip(I, J):
        base[i] = j
    for images in itertools.permutations(free_dst):
        perm = base.copy()
        for src, dst in zip(free_src, images):
            perm[src] = dst
        yield tuple(perm)


def coset_restriction_norm_bruteforce(lam, I, J):
    """||chi_{I->J}||_2 by enumerating the (n-m)! permutations of the coset."""
    lam = as_partition(lam)
    cap = get_config_entry("harmonic", "bruteforce_cap", default=8, value_type=int)
    if lam.n > cap:
        raise PreconditionError("error.bruteforce_cap", cap=cap, n=lam.n)
    I, J = _check_tuples(lam.n, I, J)
    row = dict(character_row(lam))
    total = 0
    for perm in coset_permutations(lam.n, I, J):
        total += row[CycleType(cycle_lengths(perm))] ** 2
    squared = Fraction(total, math.factorial(lam.n - len(I)))
    return SquaredNorm(squared, sqrt_value(squared))


def canonical_tuple_pair(I, J):
    """
    Relabel the points of (I, J) in order of first appearance along I[0], J[0], I[1], J[1], ...
    Pairs related by simultaneous conjugation share this form, and their cosets share one norm.
    """
    labels = {}
    for x in itertools.chain.from_iterable(zip(I, J)):
        labels.setdefault(x, len(labels))
    return tuple(labels[x] for x in I), tuple(labels[x] for x in J)


def tuple_pair_orbit_size(n, I, J):
    """Number of (I, J) pairs conjugate to the given one: injections of its points into range(n)."""
    return math.perm(n, len(set(I) | set(J)))


def _orbit_representatives(n, m):
    reps = []

    def extend(I, J, used):
        if len(I) == m:
            reps.append((I, J))
            return
        for x in range(min(used + 1, n)):
            if x in I:
                continue
            after_x = max(used, x + 1)
            for y in range(min(after_x + 1, n)):
                if y not in J:
                    extend(I + (x,), J + (y,), max(after_x, y + 1))

    extend((), (), 0)
    return reps


def tuple_pairs(n, m, samples=None, seed=None, exhaustive_max=None):
    """
    Pairs (I, J) of ordered m-tuples to test coset norms on.
    Up to exhaustive_max points this is one canonical pair per conjugacy orbit, so every
    pair is covered; beyond it all pairs when there are at most `samples`, else a seeded sample.
    """
    if samples is None:
        samples = get_config_entry("harmonic", "coset_samples", default=200, value_type=int)
    if seed is None:
        seed = get_config_entry("harmonic", "seed", default=0x5EED, value_type=int)
    if exhaustive_max is None:
        exhaustive_max = get_config_entry("harmonic", "coset_exhaustive_max", default=7, value_type=int)
    if not 0 <= m < n:
        raise PreconditionError("error.restriction_range", n=n, m=m)
    if n <= exhaustive_max:
        return _orbit_representatives(n, m)
    total = (math.perm(n, m)) ** 2
    if total <= samples:
        tuples = list(itertools.permutations(range(n), m))
        return [(I, J) for I in tuples for J in tuples]
    rng = random.Random(seed * 1000 + m)
    return [(tuple(rng.sample(range(n), m)), tuple(rng.sample(range(n), m))) for _ in range(samples)]


def globalness_certificate(lam, n_cap=None, brute=False, strict=True, seed=None):
    """
    For every m < n, B(m) = sum of branching multiplicities, checked against
    2^m dim(tilde lambda) together with sum c^2 <= B(m)^2. With brute and n <= n_cap,
    coset norms are checked against the I = I norm and B(m): every (I, J) pair up to
    conjugation while n <= harmonic.coset_exhaustive_max, a seeded sample beyond.
    Also fits the least C with (C d / n)^d chi(1) >= B(m) / 2^m for every m.
    """
    lam = as_partition(lam)
    n = lam.n
    if n_cap is None:
        n_cap = get_config_entry("harmonic", "bruteforce_cap", default=8, value_type=int)
    d = level(lam)
    dim = dimension(lam)
    tilde_dim = dimension(tilde(lam))

    rows = []
    failures = []
    gamma = Fraction(0)
    for m in range(n):
        mult = branching_multiplicities(lam, m)
        b = sum(mult.values())
        squares = sum(c * c for c in mult.values())
        row = {
            "m": m,
            "sum_c": b,
            "sum_c_squared": squares,
            "bound": 2 ** m * tilde_dim,
            "passed": b <= 2 ** m * tilde_dim and squares <= b * b,
        }
        gamma = max(gamma, Fraction(b, 2 ** m))
        if not row["passed"]:
            failures.append(f"lambda={lam}, m={m}, sum_c={b}, bound={2 ** m * tilde_dim}")

        if brute and n <= n_cap:
            same = restriction_norm(lam, m).squared
            worst = Fraction(0)
            pairs = tuple_pairs(n, m, seed=seed)
            if n <= get_config_entry("harmonic", "coset_exhaustive_max", default=7, value_type=int):
                row["coset_pairs"] = sum(tuple_pair_orbit_size(n, I, J) for I, J in pairs)
            else:
                row["coset_pairs"] = len(pairs)
            for I, J in pairs:
                coset = coset_restriction_norm_bruteforce(lam, I, J).squared
                worst = max(worst, coset)
                if coset > same or coset > b * b:
                    row["passed"] = False
                    failures.append(f"lambda={lam}, m={m}, I={I}, J={J}")
            row["coset_max_squared"] = worst

        rows.append(row)

    if d == 0:
        fitted = 0.0
    else:
        ratio = gamma / dim
        fitted = float(mp.mpf(n) / d * mp.power(mp.mpf(ratio.numerator) / ratio.denominator, mp.mpf(1) / d))

    certificate = {
        "lambda": str(lam),
        "n": n,
        "level": d,
        "dimension": dim,
        "tilde_dimension": tilde_dim,
        "gamma": gamma,
        "fitted_C": fitted,
        "rows": rows,
        "passed": not failures,
        "failures": failures,
    }
    if failures and strict:
        raise VerificationFailure(
            "error.hard_failure", theorem="global", count=len(failures), witness=failures[0]
        )
    return certificate
