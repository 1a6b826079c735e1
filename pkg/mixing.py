"""
Normal random walks on S_n and A_n
Distances after l steps come from the Fourier coefficients raised to the l-th
power in exact arithmetic; value-space convolution is only used as an oracle
"""

# --- Standard Library ---
import math
from fractions import Fraction
from typing import NamedTuple
from concurrent.futures import ThreadPoolExecutor

# --- Third-Party Packages ---
from mpmath import mp

# --- Local Modules ---
from config_utils import get_config_entry
from errors import PreconditionError, VerificationFailure
from starter import t, worker_count
from partitions import Partition, dimension, level
from classes import (
    CycleType,
    as_cycle_type,
    class_size,
    cycle_lengths,
    cycle_types,
    density,
    group_order,
    is_even,
    l2_norm_exact,
    normalized_class_indicator,
    normalized_set_indicator,
    permutations,
    compose,
)
from harmonic import (
    FourierExpansion,
    SquaredNorm,
    sqrt_value,
    convolve_bruteforce,
    fourier_coefficient,
    irreducibles,
)
from bounds import solve_alpha


def _check_walk(f):
    """A walk density: ||f||_1 = 1 exactly, on a group small enough for spectral sums."""
    cap = get_config_entry("mixing", "spectral_cap", default=20, value_type=int)
    if f.n > cap:
        raise PreconditionError("error.table_cap", n=f.n, cap=cap)
    norm = sum((f.density(ct) * abs(v) for ct, v in f.items() if v), Fraction(0))
    if norm != 1:
        raise PreconditionError("error.unnormalized", norm=norm)
    return f


def _expansion(f, threads=None):
    """Fourier coefficients of f, computed label by label on the worker pool."""
    labels = [irr.label for irr in irreducibles(f.n, f.group)]
    workers = min(worker_count(threads), len(labels))
    if workers > 1 and f.n > 8:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda lam: fourier_coefficient(f, lam), labels))
    else:
        values = [fourier_coefficient(f, lam) for lam in labels]
    return FourierExpansion(f.n, f.group, dict(zip(labels, values)))


def _product_expansion(expansions):
    """Coefficients of f_1 * ... * f_l: the product of aggregates over chi(1)^(l-1)."""
    first = expansions[0]
    steps = len(expansions)
    coefficients = {}
    for irr in irreducibles(first.n, first.group):
        value = Fraction(1)
        for e in expansions:
            value *= e[irr.label]
            if not value:
                break
        if value:
            coefficients[irr.label] = value / dimension(irr.label) ** (steps - 1)
    return FourierExpansion(first.n, first.group, coefficients)


def _pairing(left, right):
    """<u, v> from two expansions: sum over irreducibles of the products of split coefficients."""
    total = Fraction(0)
    for irr, a in left.items():
        b = right[irr.label]
        if a and b:
            total += irr.copies * left.split_coefficient(irr, a) * right.split_coefficient(irr, b)
    return total


def _distance_squared(expansion):
    """||g - 1||_2^2 = ||g||_2^2 - 2 g_hat(trivial) + 1."""
    trivial = expansion[Partition((expansion.n,))]
    return expansion.parseval_sum() - 2 * trivial + 1


def _l1_distance(expansion):
    g = expansion.to_function()
    return sum((g.density(ct) * abs(v - 1) for ct, v in g.items()), Fraction(0))


def _as_squared_norm(squared):
    return SquaredNorm(squared, sqrt_value(squared))


# --- Distances ---

def spectral_l2_distance(f, steps, threads=None):
    """||f^(*steps) - 1||_2 as an exact square and its float root."""
    _check_walk(f)
    if steps < 1:
        raise PreconditionError("error.steps", steps=steps)
    fe = _expansion(f, threads)
    return _as_squared_norm(_distance_squared(_product_expansion([fe] * steps)))


def bruteforce_l2_distance(f, steps):
    """The same distance by iterating the defining convolution sum; small n only."""
    g = f
    for _ in range(steps - 1):
        g = convolve_bruteforce(g, f)
    squared = sum((g.density(ct) * (v - 1) ** 2 for ct, v in g.items()), Fraction(0))
    return _as_squared_norm(squared)


def multi_convolution_distance(functions, threads=None):
    """||f_1 * ... * f_l - 1||_2 for walks on one group."""
    functions = list(functions)
    if not functions:
        raise PreconditionError("error.empty_set", name="f_1..f_l")
    for f in functions:
        functions[0].check_compatible(f)
        _check_walk(f)
    expansions = [_expansion(f, threads) for f in functions]
    return _as_squared_norm(_distance_squared(_product_expansion(expansions)))


def multi_convolution_report(functions, epsilon, threads=None):
    """
    Distance of the l-fold product alongside, for each f_i, the alpha_i with
    ||f_i||_2 = n^(alpha_i n^alpha_i). Whether sum(alpha_i) <= l - 1 goes with
    distance < epsilon is recorded, not asserted.
    """
    functions = list(functions)
    distance = multi_convolution_distance(functions, threads)
    n = functions[0].n
    alphas = []
    for f in functions:
        log_norm = 0.5 * math.log(float(l2_norm_exact(f)))
        alphas.append(solve_alpha(log_norm / math.log(n), n) if n > 1 else 0.0)
    within = sum(alphas) <= len(functions) - 1
    mixed = distance.squared < Fraction(epsilon) ** 2
    return {
        "group": functions[0].group,
        "n": n,
        "steps": len(functions),
        "alphas": alphas,
        "alpha_sum": sum(alphas),
        "within_budget": within,
        "distance": distance,
        "mixed": mixed,
        "agrees": within == mixed,
    }


class MixingProfile:
    """Distances ||f^(*l) - 1|| for l = 1..steps, in one convention."""

    def __init__(self, f, distances, convention="l2"):
        self.f = f
        self.group = f.group
        self.n = f.n
        self.distances = list(distances)
        self.convention = convention

    def first_below(self, epsilon):
        """Smallest l with distance < epsilon, or None."""
        bound = Fraction(epsilon)
        for step, d in enumerate(self.distances, start=1):
            value = d.squared if self.convention == "l2" else d
            if value < (bound * bound if self.convention == "l2" else bound):
                return step
        return None

    def to_json(self):
        steps = []
        for step, d in enumerate(self.distances, start=1):
            if self.convention == "l2":
                exact, value = d.squared, d.value
            else:
                exact, value = d, float(d)
            steps.append({"step": step, "num": str(exact.numerator), "den": str(exact.denominator), "value": value})
        return {
            "group": self.group,
            "n": self.n,
            "convention": t.t(f"mixing.convention_{self.convention}"),
            "squared": self.convention == "l2",
            "walk": self.f.to_json(),
            "distances": steps,
        }


def mixing_profile(f, steps, p=2, threads=None):
    if p not in (1, 2):
        raise PreconditionError("error.norm_exponent", minimum=1, p=p)
    _check_walk(f)
    if steps < 1:
        raise PreconditionError("error.steps", steps=steps)
    fe = _expansion(f, threads)
    distances = []
    for ell in range(1, steps + 1):
        expansion = _product_expansion([fe] * ell)
        if p == 2:
            distances.append(_as_squared_norm(_distance_squared(expansion)))
        else:
            distances.append(_l1_distance(expansion))
    return MixingProfile(f, distances, "l2" if p == 2 else "l1")


def mixing_time(f, epsilon, p=2, cap=None, threads=None):
    """
    Least l <= cap with ||f^(*l) - 1||_p < epsilon, or None when the cap is hit.
    p = 2 is read off the spectrum, p = 1 needs the reconstructed distribution.
    """
    if p not in (1, 2):
        raise PreconditionError("error.norm_exponent", minimum=1, p=p)
    if cap is None:
        cap = get_config_entry("mixing", "max_steps", default=64, value_type=int)
    _check_walk(f)
    fe = _expansion(f, threads)
    bound = Fraction(epsilon)
    for ell in range(1, cap + 1):
        expansion = _product_expansion([fe] * ell)
        if p == 2:
            if _distance_squared(expansion) < bound * bound:
                return ell
        elif _l1_distance(expansion) < bound:
            return ell
    return None


# --- Two steps ---

class TwoStepReturn(NamedTuple):
    at_identity: Fraction
    norm_squared: Fraction
    norm: float
    distance: SquaredNorm


def two_step_return(f, threads=None):
    """
    f*f at the identity and ||f*f - 1||_2. For a class function f(sigma) = f(sigma^-1),
    so f*f(1) = E[f^2] = ||f||_2^2; that identity is checked exactly.
    """
    _check_walk(f)
    fe = _expansion(f, threads)
    square = _product_expansion([fe, fe])
    identity = CycleType([1] * f.n)
    at_identity = square.to_function()(identity)
    norm_squared = l2_norm_exact(f)
    if at_identity != norm_squared:
        raise VerificationFailure(
            "error.hard_failure", theorem="two-step", count=1,
            witness=f"f*f(1) = {at_identity} but ||f||_2^2 = {norm_squared}",
        )
    return TwoStepReturn(at_identity, norm_squared, sqrt_value(norm_squared), _as_squared_norm(_distance_squared(square)))


def two_step_family_report(n, threads=None):
    """
    Walks on the even classes 1^m (n-m) of A_n: density against the two-step
    distance, with whether the distance falls as the density grows.
    """
    rows = []
    for m in range(n - 1):
        ct = CycleType([n - m] + [1] * m)
        if not is_even(ct):
            continue
        f = normalized_class_indicator(ct, "A")
        rows.append({"type": ct, "density": density(ct, "A"), "distance": two_step_return(f, threads).distance})
    rows.sort(key=lambda row: row["density"])
    monotone = all(a["distance"].squared >= b["distance"].squared for a, b in zip(rows, rows[1:]))
    return {"n": n, "rows": rows, "monotone": monotone, "note": t.t("mixing.two_step_note")}


# --- Lower-bound walk ---

def lower_bound_walk(n, steps):
    """
    The class with m = floor(n^(1 - 1/steps)) fixed points and one (n-m)-cycle,
    m raised by one when that cycle would be odd. Its density in A_n is 2/(m!(n-m)).
    """
    if steps < 2:
        raise PreconditionError("error.steps", steps=steps)
    target = n ** (steps - 1)
    m = int(mp.floor(mp.power(n, 1 - mp.mpf(1) / steps)))
    while (m + 1) ** steps <= target:
        m += 1
    while m > 0 and m ** steps > target:
        m -= 1
    if (n - m) % 2 == 0:
        m += 1
    if m + 1 >= n:
        raise PreconditionError("error.degenerate_walk", n=n, ell=steps, m=m)

    ct = CycleType([n - m] + [1] * m)
    expected = Fraction(2, math.factorial(m) * (n - m))
    if density(ct, "A") != expected:
        raise VerificationFailure(
            "error.hard_failure", theorem="lower-bound-walk", count=1,
            witness=f"density of {ct} is {density(ct, 'A')}, expected {expected}",
        )
    return ct


def lower_bound_report(n, steps, threads=None):
    """Distances of the lower-bound walk after steps and steps + 1 moves."""
    ct = lower_bound_walk(n, steps)
    f = normalized_class_indicator(ct, "A")
    fe = _expansion(f, threads)
    before = _as_squared_norm(_distance_squared(_product_expansion([fe] * steps)))
    after = _as_squared_norm(_distance_squared(_product_expansion([fe] * (steps + 1))))
    return {
        "n": n,
        "steps": steps,
        "type": ct,
        "density": density(ct, "A"),
        "distance": before,
        "distance_next": after,
        "non_increasing": after.squared <= before.squared,
    }


# --- Product mixing ---

class ProductTerm(NamedTuple):
    label: Partition
    level: int
    term: Fraction


def product_mixing(a_types, b_types, c_types, group="A", threads=None):
    """
    <f*g, h> - 1 for the normalized indicators of three normal sets, with the
    per-character terms f_hat g_hat h_hat / chi(1) of the nontrivial characters.
    """
    f, g, h = (normalized_set_indicator(types, group) for types in (a_types, b_types, c_types))
    f.check_compatible(g)
    f.check_compatible(h)
    fe, ge, he = (_expansion(x, threads) for x in (f, g, h))
    trivial = Partition((f.n,))
    terms = []
    for irr in irreducibles(f.n, group):
        if irr.label == trivial:
            continue
        a, b, c = fe[irr.label], ge[irr.label], he[irr.label]
        if a and b and c:
            terms.append(ProductTerm(irr.label, level(irr.label), a * b * c / (dimension(irr.label) * irr.copies)))
    lhs = _pairing(_product_expansion([fe, ge]), he) - 1
    return lhs, terms


def triple_expectation_bruteforce(f, g, h):
    """E over sigma, tau of f(sigma) g(tau) h(sigma tau), by enumerating pairs."""
    f.check_compatible(g)
    f.check_compatible(h)
    cap = get_config_entry("mixing", "triple_cap", default=6, value_type=int)
    if f.n > cap:
        raise PreconditionError("error.bruteforce_cap", cap=cap, n=f.n)
    elements = [(perm, CycleType(cycle_lengths(perm))) for perm in permutations(f.n, f.group)]
    total = Fraction(0)
    for sigma, a in elements:
        fa = f(a)
        if not fa:
            continue
        for tau, b in elements:
            gb = g(b)
            if gb:
                total += fa * gb * h(CycleType(cycle_lengths(compose(sigma, tau))))
    order = group_order(f.n, f.group)
    return total / (order * order)


# --- Spectrum and covering ---

class WalkEigenvalue(NamedTuple):
    label: Partition
    ratio: Fraction
    multiplicity: Fraction


def walk_eigenvalues(ct, group="S"):
    """
    Spectrum of the walk that multiplies by a uniform element of the class of ct:
    chi(sigma)/chi(1) with multiplicity chi(1)^2, per label (split pairs counted together).
    """
    f = normalized_class_indicator(ct, group)
    out = []
    for irr in irreducibles(f.n, group):
        coefficient = fourier_coefficient(f, irr.label)
        dim = dimension(irr.label)
        out.append(WalkEigenvalue(irr.label, Fraction(coefficient, dim), irr.copies * irr.dim ** 2))
    return out


def covered_classes(types, k, group="A", threads=None):
    """Classes met by A^k, A the union of the given classes: where f^(*k) is positive."""
    if k < 1:
        raise PreconditionError("error.steps", steps=k)
    f = normalized_set_indicator(types, group)
    _check_walk(f)
    power = _product_expansion([_expansion(f, threads)] * k).to_function()
    return [ct for ct, v in power.items() if v > 0]


def covers_group(types, k, group="A", threads=None):
    """A^k is the whole group."""
    types = list(types)
    if not types:
        raise PreconditionError("error.empty_set", name="A")
    n = as_cycle_type(types[0]).n
    return len(covered_classes(types, k, group, threads)) == len(cycle_types(n, group))


# --- Non-mixer construction ---

def non_mixer_class(n, scale=None):
    """
    t fixed points and one (n-t)-cycle, t near scale * n^(1/3) + 1 but kept in
    [2D, n - D - 1] with D = floor(n^(1/3)) and n - t odd, so the long-cycle
    identity makes every character of level <= D positive there.
    """
    if scale is None:
        scale = get_config_entry("mixing", "non_mixer_scale", default=10, value_type=float)
    cube = round(n ** (1 / 3))
    while cube ** 3 > n:
        cube -= 1
    while (cube + 1) ** 3 <= n:
        cube += 1
    target = math.ceil(scale * n ** (1 / 3) + 1)
    low, high = 2 * cube, n - cube - 1
    candidates = [t_ for t_ in range(low, high + 1) if (n - t_) % 2 == 1]
    if not candidates:
        raise PreconditionError("error.degenerate_walk", n=n, ell=cube, m=target)
    fixed = min(candidates, key=lambda t_: (abs(t_ - target), -t_))
    return CycleType([n - fixed] + [1] * fixed), cube


def non_mixer_report(n, scale=None, threads=None):
    """
    The sharpness class for product mixing on A_n. Every term of level <= n^(1/3)
    in sum f_hat^3 / chi(1) must be nonnegative (hard); reports whether
    Pr[ab in A] exceeds 1.01 mu(A).
    """
    ct, cube = non_mixer_class(n, scale)
    lhs, terms = product_mixing([ct], [ct], [ct], "A", threads)
    low = [term for term in terms if term.level <= cube]
    negative = [term for term in low if term.term < 0]
    if negative:
        raise VerificationFailure(
            "error.hard_failure", theorem="non-mixer", count=len(negative),
            witness=f"n={n}, type={ct}, lambda={negative[0].label}, term={negative[0].term}",
        )
    return {
        "n": n,
        "type": ct,
        "fixed_points": ct.fixed_points,
        "level_cap": cube,
        "density": density(ct, "A"),
        "low_level_terms": len(low),
        "excess": lhs,
        "exceeds_1_01": lhs > Fraction(1, 100),
        "class_size": class_size(ct),
    }
