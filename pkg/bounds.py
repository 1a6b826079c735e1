"""
Bound formulas, exact verifiers and constant-fitting sweeps

Statements without hidden constants (dimension bounds, the long-cycle identity,
the no-short-cycle recursion, branching chains, Hoelder chains) are checked
exactly and fail the run when violated. Statements with unspecified absolute
constants are turned into fits: each sweep reports the least C (or the largest c)
that makes every instance it saw pass, together with the instance attaining it.
"""

# --- Standard Library ---
import csv
import io
import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

# --- Third-Party Packages ---
from mpmath import mp

# --- Local Modules ---
from config_utils import get_config_entry
from errors import PreconditionError, VerificationFailure
from starter import report, t, worker_count
from partitions import (
    Partition,
    conjugate,
    dimension,
    level,
    log_at_least,
    partitions_of,
    partitions_of_level,
    partitions_of_level_at_most,
    tilde,
)
from classes import (
    CycleType,
    class_size,
    cycle_lengths,
    cycle_types,
    density,
    permutations,
    rencontres,
)
from characters import (
    branching_multiplicities,
    mn_long_cycle_value,
    mn_value,
)
from harmonic import (
    globalness_certificate,
    kronecker,
    q_norm_exact,
)


def _log(x):
    """Natural log of a positive int or Fraction, exact inputs of any size."""
    x = Fraction(x)
    return math.log(x.numerator) - math.log(x.denominator)


def _guard():
    return get_config_entry("bounds", "log_guard", default=1e-9, value_type=float)


# --- Reports ---

class BoundReport:
    """
    Result of one sweep. Failing instances are kept in full; passing ones only
    counted. Fitted constants merge by keeping the extremum, so shards can be
    combined in any grouping and give the same constants.
    """

    def __init__(self, theorem, ranges=None, hard=True):
        self.theorem = theorem
        self.ranges = dict(ranges or {})
        self.hard = hard
        self.instances = 0
        self.failures = []
        self.soft_failures = 0
        self.constants = {}
        self.observed = {}
        self.rows = []
        self.notes = []

    @property
    def range_tag(self):
        return ",".join(f"{k}={_render(v)}" for k, v in sorted(self.ranges.items()))

    @property
    def passed(self):
        return not self.failures

    def record(self, passed, witness=None, hard=None):
        """One instance. Soft instances (hard=False) are tallied but never fail the report."""
        self.instances += 1
        if passed:
            return
        if hard if hard is not None else self.hard:
            self.failures.append(witness)
        else:
            self.soft_failures += 1

    def fit(self, kind, value, witness, mode="max"):
        """Offer an instance's required constant; mode max keeps the least feasible C, min the largest feasible c."""
        self.observed.setdefault(kind, []).append(value)
        current = self.constants.get(kind)
        if current is None or (value > current["value"] if mode == "max" else value < current["value"]):
            self.constants[kind] = {"value": value, "witness": witness, "mode": mode}

    def note(self, key, **fields):
        text = t.t(key, **fields)
        if text not in self.notes:
            self.notes.append(text)

    def merge(self, other):
        self.instances += other.instances
        self.failures.extend(other.failures)
        self.soft_failures += other.soft_failures
        self.rows.extend(other.rows)
        for note in other.notes:
            if note not in self.notes:
                self.notes.append(note)
        for kind, entry in other.constants.items():
            for value in other.observed.get(kind, []):
                self.observed.setdefault(kind, []).append(value)
            current = self.constants.get(kind)
            if current is None or (
                entry["value"] > current["value"] if entry["mode"] == "max" else entry["value"] < current["value"]
            ):
                self.constants[kind] = dict(entry)
        return self

    def resubstitutes(self):
        """Every observed instance passes with the fitted constant put back in."""
        guard = _guard()
        for kind, entry in self.constants.items():
            best = entry["value"]
            for value in self.observed.get(kind, []):
                if entry["mode"] == "max" and value > best * (1 + guard):
                    return False
                if entry["mode"] == "min" and value < best * (1 - guard):
                    return False
        return True

    def raise_on_failure(self):
        if self.failures:
            raise VerificationFailure(
                "error.hard_failure", theorem=self.theorem, count=len(self.failures), witness=self.failures[0]
            )

    def to_json(self):
        return {
            "theorem": self.theorem,
            "ranges": {k: _render(v) for k, v in self.ranges.items()},
            "hard": self.hard,
            "passed": self.passed,
            "instances": self.instances,
            "soft_failures": self.soft_failures,
            "failures": [str(f) for f in self.failures],
            "constants": {
                kind: {"value": _render(e["value"]), "mode": e["mode"], "witness": {k: _render(v) for k, v in e["witness"].items()}}
                for kind, e in sorted(self.constants.items())
            },
            "rows": [{k: _render(v) for k, v in row.items()} for row in self.rows],
            "notes": list(self.notes),
        }

    def to_csv(self):
        """One table per section, separated by a blank line."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["theorem", "instances", "passed", "soft_failures"])
        writer.writerow([self.theorem, self.instances, self.passed, self.soft_failures])
        writer.writerow([])
        writer.writerow(["constant", "mode", "value", "witness"])
        for kind, e in sorted(self.constants.items()):
            witness = ";".join(f"{k}={_render(v)}" for k, v in e["witness"].items())
            writer.writerow([kind, e["mode"], _render(e["value"]), witness])
        if self.rows:
            writer.writerow([])
            keys = list(self.rows[0].keys())
            writer.writerow(keys)
            for row in self.rows:
                writer.writerow([_render(row.get(k)) for k in keys])
        if self.failures:
            writer.writerow([])
            writer.writerow(["failure"])
            for f in self.failures:
                writer.writerow([str(f)])
        return buffer.getvalue()


def _render(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)) and not isinstance(value, Partition):
        return ",".join(str(v) for v in value)
    if isinstance(value, int):
        return str(value)
    return str(value)


def _sweep(items, func, threads=None):
    """Map func over items on the worker pool, results in input order."""
    items = list(items)
    workers = min(worker_count(threads), max(1, len(items)))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _reduce(report_, parts):
    for part in parts:
        report_.merge(part)
    return report_


# --- Formula evaluators ---

def log_main_bound_rhs(n, d, q, dim, C):
    if q < 2:
        raise PreconditionError("error.norm_exponent", minimum=2, p=q)
    if q == 2 or d == 0:
        return 0.0
    return d * math.log(C * q / math.log(q)) + (1 - 2 / q) * (d * math.log(d) + _log(dim) - d * math.log(n))


def main_bound_rhs(n, d, q, dim, C):
    """(C q / log q)^d (d^d chi(1) / n^d)^(1 - 2/q); 1 for q = 2 or level 0."""
    return math.exp(log_main_bound_rhs(n, d, q, dim, C))


def log_main_lower_rhs(n, d, q, dim, c):
    if q < 2:
        raise PreconditionError("error.norm_exponent", minimum=2, p=q)
    if d == 0:
        return 0.0
    return d * math.log(c * q / math.log(q * d)) + (1 - 2 / q) * (d * math.log(d) + _log(dim) - d * math.log(n))


def main_lower_rhs(n, d, q, dim, c):
    """(c q / log(q d))^d (d^d chi(1) / n^d)^(1 - 2/q)."""
    return math.exp(log_main_lower_rhs(n, d, q, dim, c))


def ratio_upper_rhs(n, d, alpha, C):
    """n^(d(alpha-1)) (C alpha log n / (log(alpha n^alpha log n) - log d))^d."""
    gap = math.log(alpha * n ** alpha * math.log(n)) - math.log(d)
    return n ** (d * (alpha - 1)) * (C * alpha * math.log(n) / gap) ** d


def ratio_lower_rhs(n, d, alpha, c):
    """n^(d(alpha-1)) (c alpha)^d."""
    return n ** (d * (alpha - 1)) * (c * alpha) ** d


def fourier_rhs(n, d, dim, norm1, M, C):
    """chi(1) ||f||_1 (C log M / (n log(log M / d)))^d."""
    log_m = math.log(M)
    return float(dim) * norm1 * (C * log_m / (n * math.log(log_m / d))) ** d


def kronecker_symmetric_rhs(n, levels, dims, C):
    total = sum(levels)
    scale = C ** total * math.prod(d ** d for d in levels) / n ** total
    return (scale * math.prod(float(x) for x in dims)) ** (1 / 3)


def kronecker_pair_rhs(n, levels, dims, C):
    total = sum(levels)
    scale = C ** total * math.prod(d ** d for d in levels) / n ** total
    return (scale * math.prod(float(x) for x in dims)) ** 0.5


def kronecker_q_rhs(n, d, dim, q, C):
    return math.exp(d * math.log(C * q / math.log(q)) + (1 - 2 / q) * (_log(dim) + d * math.log(d) - d * math.log(n)))


def fourier_regime(norm2, d):
    """
    Which Fourier-coefficient regime applies to a level-d character and ||f||_2 (with ||f||_1 = 1):
    1 when d <= log^0.9 ||f||_2 and ||f||_2 > e, 2 when d <= log ||f||_2, 3 otherwise.
    """
    log_norm = _log(norm2) if isinstance(norm2, (int, Fraction)) else math.log(norm2)
    if log_norm > 1 and d <= log_norm ** 0.9:
        return 1
    if d <= log_norm:
        return 2
    return 3


def solve_alpha(value, n):
    """The alpha in (0, 1] with alpha n^alpha = value, by bracketed root finding."""
    if value <= 0:
        return 0.0
    if value >= n:
        return 1.0
    root = mp.findroot(lambda a: a * mp.power(n, a) - value, (mp.mpf("1e-12"), mp.mpf(1)), solver="illinois")
    return float(root)


# --- Moments and probabilities ---

@lru_cache(maxsize=None)
def bell(k):
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def poisson_central_moment(k):
    """E[(X - 1)^k] for X ~ Poisson(1); raw moments are the Bell numbers."""
    return sum(math.comb(k, j) * bell(j) * (-1) ** (k - j) for j in range(k + 1))


def fixed_point_moment(n, q):
    """E[(fix(sigma) - 1)^q] over S_n from the rencontres numbers; equals ||chi_(n-1,1)||_q^q."""
    return Fraction(sum(rencontres(n, k) * (k - 1) ** q for k in range(n + 1)), math.factorial(n))


@lru_cache(maxsize=64)
def _no_short_cycles_table(d, r_max):
    # P[r] = (1 + P[d+1] + ... + P[r-d-1]) / r, kept with prefix sums
    probs = {}
    prefix = [Fraction(0)] * (r_max + 1)
    for r in range(d + 1, r_max + 1):
        tail = prefix[r - d - 1] if r - d - 1 >= d + 1 else Fraction(0)
        probs[r] = (1 + tail) / r
        prefix[r] = prefix[r - 1] + probs[r]
    return probs


def no_short_cycles_prob(r, d):
    """Pr[every cycle of a uniform sigma in S_r is longer than d], exact."""
    if not (d >= 1 and r > d):
        raise PreconditionError("error.prob_range", r=r, d=d)
    size = max(r, 64)
    size = 1 << (size - 1).bit_length()
    return _no_short_cycles_table(d, size)[r]


@lru_cache(maxsize=16)
def _shortest_cycle_counts(r):
    return Counter(min(cycle_lengths(perm)) for perm in permutations(r))


def no_short_cycles_bruteforce(r, d):
    """The same probability by enumerating S_r."""
    hits = sum(k for shortest, k in _shortest_cycle_counts(r).items() if shortest > d)
    return Fraction(hits, math.factorial(r))


def prob_recursion_check(r_max=None, brute_max=None):
    if r_max is None:
        r_max = get_config_entry("bounds", "prob_r_max", default=500, value_type=int)
    if brute_max is None:
        brute_max = get_config_entry("bounds", "prob_bruteforce_max", default=9, value_type=int)
    rep = BoundReport("prob-recursion", {"r_max": r_max, "brute_max": brute_max})
    report("report.verify_start", theorem=rep.theorem, n_max=r_max)
    for d in range(1, r_max):
        worst = None
        for r in range(d + 1, r_max + 1):
            p = no_short_cycles_prob(r, d)
            rep.record(p >= Fraction(1, 10 * d), f"r={r}, d={d}, P={p}")
            if worst is None or p * 10 * d < worst[0]:
                worst = (p * 10 * d, r)
            if r <= brute_max:
                rep.record(p == no_short_cycles_bruteforce(r, d), f"r={r}, d={d}: recursion != enumeration")
        rep.fit("min_10d_P", worst[0], {"d": d, "r": worst[1]}, mode="min")
    return rep


# --- Dimension bounds ---

def _a_dimension(lam):
    dim = dimension(lam)
    return Fraction(dim, 2) if lam == conjugate(lam) else Fraction(dim)


def dim_bounds_check(n_max=None, group="S", large_ns=None, d_max=None):
    """
    Exact dimension bounds on every partition of n <= n_max, then the
    level-restricted lower bound dim >= (n/(e d))^d at the large n, through logs.
    With group A the A_n dimensions are used (dim/2 for self-conjugate lambda)
    and the large-n bound carries its factor 1/2.
    """
    if n_max is None:
        n_max = get_config_entry("bounds", "exact_n_max", default=30, value_type=int)
    if large_ns is None:
        large_ns = get_config_entry("bounds", "large_ns", default=[200, 400, 600], value_type=list)
    if d_max is None:
        d_max = get_config_entry("bounds", "large_d_max", default=5, value_type=int)

    rep = BoundReport(f"dims-{group}" if group == "A" else "dims", {"n_max": n_max, "large_ns": large_ns, "d_max": d_max})
    report("report.verify_start", theorem=rep.theorem, n_max=n_max)

    for n in range(2 if group == "A" else 1, n_max + 1):
        squares = 0
        for lam in partitions_of(n):
            d = level(lam)
            dim = dimension(lam)
            squares += dim * dim
            if group == "A":
                dim_a = _a_dimension(lam)
                rep.record(dim_a * dim_a * math.factorial(d) <= n ** (2 * d), f"A: lambda={lam}, dim={dim_a}")
                continue
            small = dimension(tilde(lam))
            rep.record(dim >= math.comb(n - d, d) * small, f"lower: lambda={lam}, dim={dim}, tilde={small}")
            rep.record(dim <= math.comb(n, d) * small, f"upper: lambda={lam}, dim={dim}, tilde={small}")
            rep.record(dim * dim * math.factorial(d) <= n ** (2 * d), f"sqrt: lambda={lam}, dim={dim}")
        rep.record(squares == math.factorial(n), f"sum of squares at n={n}: {squares}")

    for n in large_ns:
        for d in range(1, d_max + 1):
            count = 0
            for lam in partitions_of_level(n, d):
                dim = _a_dimension(lam) if group == "A" else dimension(lam)
                shift = math.log(2) if group == "A" else 0.0

                def rhs(lib, n=n, d=d, shift=shift):
                    return d * (lib.log(n) - 1 - lib.log(d)) - shift

                def lhs(lib, dim=dim):
                    return lib.log(dim.numerator) - lib.log(dim.denominator) if isinstance(dim, Fraction) else lib.log(dim)

                holds, _, _ = log_at_least(lhs, rhs)
                rep.record(holds, f"large: n={n}, d={d}, lambda={lam}")
                count += 1
            rep.rows.append({"n": n, "d": d, "partitions": count})
    return rep


# --- Branching chain, long-cycle identity ---

def branching_check(n_max=20, brute_max=7, dim_m_max=4, threads=None, seed=None):
    """
    Sum c_mu <= 2^m dim(tilde) and sum c_mu^2 <= (sum c_mu)^2 for all lambda, m;
    restriction keeps the dimension for m <= dim_m_max; coset norms up to brute_max.
    """
    n_max = min(n_max, 20)
    rep = BoundReport("branching", {"n_max": n_max, "brute_max": brute_max})
    report("report.verify_start", theorem=rep.theorem, n_max=n_max)

    def one(lam):
        part = BoundReport("branching")
        cert = globalness_certificate(lam, n_cap=brute_max, brute=lam.n <= brute_max, strict=False, seed=seed)
        for row in cert["rows"]:
            part.record(row["passed"], f"lambda={lam}, m={row['m']}")
        for m in range(min(dim_m_max, lam.n) + 1):
            mult = branching_multiplicities(lam, m)
            total = sum(c * dimension(mu) for mu, c in mult.items())
            part.record(total == dimension(lam), f"lambda={lam}, m={m}: restricted dimension {total}")
        if cert["level"] > 0:
            part.fit("global_C", cert["fitted_C"], {"lambda": lam}, mode="max")
        return part

    for n in range(1, n_max + 1):
        _reduce(rep, _sweep(partitions_of(n), one, threads))
        report("report.sweep_progress", theorem=rep.theorem, n=n, instances=rep.instances)
    if n_max > brute_max:
        rep.note("notes.reduction", cap=brute_max)
    return rep


def mn_long_check(n_max=25, threads=None):
    """The long-cycle identity on 1^ell (n-ell), and on 1^ell with two long cycles where they fit."""
    n_max = min(n_max, 25)
    rep = BoundReport("mn-long", {"n_max": n_max})
    report("report.verify_start", theorem=rep.theorem, n_max=n_max)

    def one(lam):
        part = BoundReport("mn-long")
        n = lam.n
        d = n - lam[0]
        second = lam[1] if len(lam) > 1 else 0
        for ell in range(d + second, n - d):
            witnesses = [None]
            if n - ell >= 2 * (d + 1):
                witnesses.append([n - ell - (d + 1), d + 1])
            for cycles in witnesses:
                try:
                    mn_long_cycle_value(lam, ell, cycles)
                    part.record(True)
                except VerificationFailure as e:
                    part.record(False, e.message)
        return part

    for n in range(1, n_max + 1):
        _reduce(rep, _sweep(partitions_of(n), one, threads))
    return rep


# --- Norm theorem ---

def fit_main_bound(n_range, d_max=3, q_set=(4, 6), threads=None):
    """
    For every lambda of level 1..d_max and even q, the least C of the upper
    bound and the largest c of the lower bound (on d < n/(q+1)) that the exact
    q-norms allow. Level 0 characters must have norm exactly 1, (n-1,1) must
    match the fixed-point moments, and the long-cycle witness lower bound
    Pr[E] dim(mu)^q <= ||chi||_q^q is checked exactly.
    """
    n_range = list(n_range)
    q_set = tuple(sorted(q_set))
    if (
        not n_range
        or max(n_range) > 30
        or d_max > 6
        or any(q not in (4, 6, 8) for q in q_set)
    ):
        raise PreconditionError("error.sweep_cap", theorem="main-norm")

    rep = BoundReport(
        "main-norm",
        {"n": f"{min(n_range)}..{max(n_range)}", "d_max": d_max, "q": list(q_set)},
    )
    report("report.verify_start", theorem=rep.theorem, n_max=max(n_range))

    def one(lam):
        part = BoundReport("main-norm")
        n = lam.n
        d = level(lam)
        dim = dimension(lam)
        shape = lam if lam[0] == n - d else conjugate(lam)
        second = shape[1] if len(shape) > 1 else 0
        for q in q_set:
            power = q_norm_exact(lam, q)
            if d == 0:
                part.record(power == 1, f"lambda={lam}, q={q}: level 0 norm {power}")
                continue
            if shape == Partition((n - 1, 1)) and n >= 2:
                part.record(power == fixed_point_moment(n, q), f"lambda={lam}, q={q}: fixed-point moment")

            log_x = d * math.log(d) + _log(dim) - d * math.log(n)
            spread = (_log(power) / q - (1 - 2 / q) * log_x) / d
            witness = {"lambda": lam, "n": n, "d": d, "q": q}
            part.fit("C", math.exp(math.log(math.log(q)) - math.log(q) + spread), witness, mode="max")
            if d < n / (q + 1):
                part.fit("c", math.exp(math.log(math.log(q * d)) - math.log(q) + spread), witness, mode="min")

            for ell in range(d + second, n - d):
                mu = Partition((ell - d,) + tuple(shape[1:]))
                prob = no_short_cycles_prob(n - ell, d) / math.factorial(ell)
                part.record(
                    prob * dimension(mu) ** q <= power,
                    f"lambda={lam}, q={q}, ell={ell}: witness mass exceeds the norm",
                )
        return part

    for n in n_range:
        _reduce(rep, _sweep(partitions_of_level_at_most(n, min(d_max, n - 1)), one, threads))
        report("report.sweep_progress", theorem=rep.theorem, n=n, instances=rep.instances)

    rep.record(rep.resubstitutes(), "fitted constants do not resubstitute")
    if "C" in rep.constants and "c" in rep.constants:
        rep.record(rep.constants["c"]["value"] <= rep.constants["C"]["value"], "lower constant exceeds upper constant")
    rep.note("notes.fit_only")
    return rep


# --- Character ratios ---

def ratio_bound_check(n, alpha, threads=None):
    """
    Every cycle type against every character at one n.

    Few-cycles form: each type gets the alpha with (#cycles) = alpha n^alpha and the
    conclusion |ratio| <= chi(1)^(alpha-1) is tested there; at the given alpha the
    largest c is reported for which no failing type has <= c alpha n^alpha cycles.
    Density form: over types of density >= n^(-2 alpha n^alpha), the least C in the
    upper bound n^(d(alpha-1)) (C alpha log n / (log(alpha n^alpha log n) - log d))^d.
    """
    if not 0 < alpha < 1:
        raise PreconditionError("error.alpha_range", alpha=alpha)
    if n > 25:
        raise PreconditionError("error.sweep_cap", theorem="ratio")

    rep = BoundReport("ratio", {"n": n, "alpha": alpha}, hard=False)
    report("report.verify_start", theorem=rep.theorem, n_max=n)
    log_n = math.log(n)
    budget = alpha * n ** alpha
    types = [(ct, solve_alpha(len(ct), n), _log(density(ct))) for ct in cycle_types(n)]

    def one(lam):
        part = BoundReport("ratio", hard=False)
        dim = dimension(lam)
        d = level(lam)
        if dim == 1:
            part.record(True)
            return part
        log_dim = math.log(dim)
        for ct, alpha_tight, log_density in types:
            value = mn_value(lam, ct)
            if value == 0:
                part.record(True)
                continue
            log_ratio = math.log(abs(value)) - log_dim
            exponent = 1 + log_ratio / log_dim
            part.record(exponent <= alpha_tight * (1 + _guard()) or alpha_tight >= 1, f"lambda={lam}, type={ct}")
            witness = {"lambda": lam, "type": ct}
            if exponent > alpha:
                part.fit("c_few_cycles", len(ct) / budget, witness, mode="min")

            if d >= 1 and log_density >= -2 * budget * log_n:
                gap = math.log(budget * log_n) - math.log(d)
                if gap > 0:
                    need = math.exp(log_ratio / d - (alpha - 1) * log_n) * gap / (alpha * log_n)
                    part.fit("C_density", need, witness, mode="max")
        return part

    _reduce(rep, _sweep(partitions_of(n), one, threads))
    tight = [a for ct, a, _ in types if a < 1]
    if tight:
        rep.note("notes.alpha_range_empty", low=f"{min(tight):.4f}", high=f"{max(tight):.4f}")
    return rep


def ratio_lower_construction(n, alpha, epsilon=0.1, threads=None):
    """
    Witness classes 1^(ell-1)(n-ell+1) and 1^ell(n-ell) with ell = ceil(alpha n^alpha),
    evaluated through the long-cycle identity (checked against the recursion) on
    every lambda it applies to. Reports the worst exponent on the first witness and
    the largest c with |ratio| >= n^(d(alpha-1)) (c alpha)^d on the second.
    """
    if not 0 < alpha < 1:
        raise PreconditionError("error.alpha_range", alpha=alpha)
    ell = math.ceil(alpha * n ** alpha)
    rep = BoundReport("ratio-lower", {"n": n, "alpha": alpha, "epsilon": epsilon, "ell": ell})
    if ell >= n:
        rep.note("notes.cor_range_empty", detail=f"ell={ell} >= n={n}")
        return rep

    budget = alpha * n ** alpha

    def one(lam):
        part = BoundReport("ratio-lower")
        d = n - lam[0]
        second = lam[1] if len(lam) > 1 else 0
        dim = dimension(lam)
        witness = {"lambda": lam, "d": d}

        few = ell - 1
        if d + second <= few and n - few > d:
            value = mn_long_cycle_value(lam, few)
            part.record(True)
            if d >= 1 and dim > 1:
                exponent = 1 + (math.log(value) - math.log(dim)) / math.log(dim)
                part.fit("exponent_few_cycles", exponent, witness, mode="min")
                part.record(exponent >= alpha - epsilon, f"lambda={lam}: exponent {exponent}", hard=False)

        if d + second <= ell and n - ell > d and d <= 0.5 * budget:
            value = mn_long_cycle_value(lam, ell)
            if d == 0:
                part.record(value == dim, f"lambda={lam}: level 0 ratio")
            else:
                ratio = math.exp((math.log(value) - math.log(dim)) / d)
                part.fit("c_actual_lower", ratio / (alpha * n ** (alpha - 1)), witness, mode="min")
        return part

    _reduce(rep, _sweep(partitions_of(n), one, threads))
    rep.rows.append({
        "witness_density_ok": _log(density(CycleType([n - ell] + [1] * ell))) >= -2 * budget * math.log(n),
    })
    rep.note("notes.cor_range_empty", detail="d + lambda_2 <= ell and n - ell > d (where the long-cycle identity applies) instead of d < ell/200")
    return rep


# --- Fourier coefficients ---

def fourier_coeff_bound_check(n, m_grid=None, epsilon=1.0, threads=None):
    """
    f runs over normalized class indicators, so <f, chi> = chi(sigma) and
    ||f||_2 = density^(-1/2). Cauchy-Schwarz is checked exactly; the constants of
    the general bound (for M = ||f||_2 and each grid M above it) and of the first two
    regimes are fitted; the envelope max(eps^d, 2^(-n^(3/5))) chi(1)^(alpha-1) is tallied.
    """
    if n > 20:
        raise PreconditionError("error.sweep_cap", theorem="fourier")
    m_grid = sorted(float(m) for m in (m_grid or []))
    rep = BoundReport("fourier", {"n": n, "M_grid": m_grid or "tight", "epsilon": epsilon})
    report("report.verify_start", theorem=rep.theorem, n_max=n)
    order = math.factorial(n)
    log_n = math.log(n)
    floor = 2.0 ** (-(n ** 0.6))

    def one(ct):
        part = BoundReport("fourier")
        size = class_size(ct)
        log_norm = 0.5 * (math.log(order) - math.log(size))
        alpha_f = solve_alpha(log_norm / log_n, n)
        grid = [log_norm] + [math.log(m) for m in m_grid if math.log(m) >= log_norm]
        envelope = {"pass": 0, "total": 0}
        for lam in partitions_of(n):
            d = level(lam)
            if d == 0:
                continue
            value = mn_value(lam, ct)
            part.record(value * value * size <= order, f"type={ct}, lambda={lam}: Cauchy-Schwarz")
            if value == 0:
                continue
            dim = dimension(lam)
            root = math.exp((math.log(abs(value)) - math.log(dim)) / d)
            witness = {"type": ct, "lambda": lam}

            regime = fourier_regime(math.exp(log_norm), d)
            if regime == 1:
                part.fit("C_regime1", root * n * math.log(log_norm) / log_norm, witness, mode="max")
            elif regime == 2:
                part.fit("C_regime2", root * n / log_norm, witness, mode="max")

            for log_m in grid:
                if d < log_m:
                    need = root * n * math.log(log_m / d) / log_m
                    part.fit("C_fourier", need, {**witness, "logM": log_m}, mode="max")

            bound = max(epsilon ** d, floor) * dim ** (alpha_f - 1)
            envelope["total"] += 1
            envelope["pass"] += abs(value) / dim <= bound * (1 + _guard())
        part.rows.append({"type": ct, "alpha_f": alpha_f, "envelope_pass": envelope["pass"], "envelope_total": envelope["total"]})
        return part

    _reduce(rep, _sweep(cycle_types(n), one, threads))
    rep.note("notes.fit_only")
    return rep


# --- Kronecker coefficients ---

def kronecker_bounds_check(n, d_cap=4, C=None, threads=None):
    """
    g(lambda, mu, nu) for lambda, mu of level 1..d_cap and nu over all partitions
    (small n) or level <= d_cap. Hoelder chains and g(lambda, mu, (n)) = delta are
    exact checks; the least C of each Kronecker bound is fitted, and with C given the rhs is tallied.
    """
    if n > 16 or d_cap > 4:
        raise PreconditionError("error.sweep_cap", theorem="kronecker")
    nu_all = get_config_entry("bounds", "kronecker_nu_all_max_n", default=10, value_type=int)
    d_cap = min(d_cap, n - 1)
    rep = BoundReport("kronecker", {"n": n, "d_cap": d_cap})
    report("report.verify_start", theorem=rep.theorem, n_max=n)
    rep.note("notes.nu_levels", cap=nu_all, d=d_cap)

    low = [lam for lam in partitions_of_level_at_most(n, d_cap) if level(lam) >= 1]
    nus = list(partitions_of(n)) if n <= nu_all else list(partitions_of_level_at_most(n, d_cap))
    trivial = Partition((n,))

    def one(pair):
        lam, mu = pair
        part = BoundReport("kronecker")
        d1, d2 = level(lam), level(mu)
        dim1, dim2 = dimension(lam), dimension(mu)
        cube1, cube2 = q_norm_exact(lam, 3), q_norm_exact(mu, 3)
        four1, four2 = q_norm_exact(lam, 4), q_norm_exact(mu, 4)
        part.record(kronecker(lam, mu, trivial) == (1 if lam == mu else 0), f"g({lam},{mu},({n}))")
        for nu in nus:
            g = kronecker(lam, mu, nu)
            d3, dim3 = level(nu), dimension(nu)
            witness = {"lambda": lam, "mu": mu, "nu": nu, "g": g}
            part.record(g ** 3 <= cube1 * cube2 * q_norm_exact(nu, 3), f"{witness}: 3-3-3 Hoelder")
            part.record(g ** 4 <= four1 * four2, f"{witness}: 4-4-2 Hoelder")
            if g == 0:
                continue
            if d3 >= 1:
                levels = (d1, d2, d3)
                total = sum(levels)
                need = math.exp(
                    (3 * math.log(g) + total * math.log(n) - sum(d * math.log(d) for d in levels)
                     - math.log(dim1) - math.log(dim2) - math.log(dim3)) / total
                )
                part.fit("C_symmetric", need, witness, mode="max")
                if C is not None:
                    part.record(g <= kronecker_symmetric_rhs(n, levels, (dim1, dim2, dim3), C) * (1 + _guard()), witness, hard=False)
            need = math.exp(
                (2 * math.log(g) + (d1 + d2) * math.log(n) - d1 * math.log(d1) - d2 * math.log(d2)
                 - math.log(dim1) - math.log(dim2)) / (d1 + d2)
            )
            part.fit("C_pair", need, witness, mode="max")
            if C is not None:
                part.record(g <= kronecker_pair_rhs(n, (d1, d2), (dim1, dim2), C) * (1 + _guard()), witness, hard=False)
            q = (math.log(dim2) + math.log(dim3)) / d1
            if q >= 2:
                log_x = math.log(dim1) + d1 * math.log(d1) - d1 * math.log(n)
                need = math.log(q) / q * math.exp((math.log(g) - (1 - 2 / q) * log_x) / d1)
                part.fit("C_q", need, witness, mode="max")
                if C is not None:
                    part.record(g <= kronecker_q_rhs(n, d1, dim1, q, C) * (1 + _guard()), witness, hard=False)
        return part

    pairs = [(lam, mu) for i, lam in enumerate(low) for mu in low[i:]]
    _reduce(rep, _sweep(pairs, one, threads))
    return rep


# --- Registry used by the CLI ---

@dataclass(frozen=True)
class SweepOptions:
    """Knobs of a verify run that the report must echo to be reproducible."""
    q_set: tuple = (4, 6)
    d_max: int = 3
    kronecker_d_cap: int = 4
    seed: int = None


def _alpha_grid():
    return get_config_entry("bounds", "alpha_grid", default=[0.25, 0.5, 0.75], value_type=list)


def _verify_ratio(n_max, threads, options):
    n = min(n_max, 25)
    epsilon = get_config_entry("bounds", "epsilon", default=0.1, value_type=float)
    out = []
    for alpha in _alpha_grid():
        out.append(ratio_bound_check(n, float(alpha), threads))
        out.append(ratio_lower_construction(n, float(alpha), epsilon, threads))
    return out


def _verify_main_norm(n_max, threads, options):
    top = min(n_max, 20)
    return [fit_main_bound(range(2, top + 1), options.d_max, tuple(options.q_set), threads)]


def _verify_kronecker(n_max, threads, options, constants=None):
    n = min(n_max, 16)
    C = (constants or {}).get("C")
    return [kronecker_bounds_check(n, options.kronecker_d_cap, C, threads)]


THEOREMS = {
    "dims": lambda n_max, threads, options: [dim_bounds_check(min(n_max, 30)), dim_bounds_check(min(n_max, 30), "A")],
    "branching": lambda n_max, threads, options: [branching_check(n_max, threads=threads, seed=options.seed)],
    "mn-long": lambda n_max, threads, options: [mn_long_check(n_max, threads)],
    "prob-recursion": lambda n_max, threads, options: [prob_recursion_check()],
    "main-norm": _verify_main_norm,
    "ratio": _verify_ratio,
    "fourier": lambda n_max, threads, options: [fourier_coeff_bound_check(min(n_max, 20), threads=threads)],
    "kronecker": _verify_kronecker,
}


def verify(theorem, n_max, threads=None, options=None):
    """Run one theorem's sweeps (or all of them) and return their reports in a fixed order."""
    if theorem != "all" and theorem not in THEOREMS:
        raise PreconditionError("error.unknown_theorem", theorem=theorem)
    options = options or SweepOptions()
    names = list(THEOREMS) if theorem == "all" else [theorem]
    reports = []
    main_constants = {}
    for name in names:
        if name == "kronecker":
            batch = _verify_kronecker(n_max, threads, options, main_constants)
        else:
            batch = THEOREMS[name](n_max, threads, options)
        for rep in batch:
            if rep.theorem == "main-norm" and "C" in rep.constants:
                main_constants["C"] = rep.constants["C"]["value"]
            if rep.failures:
                report("report.verify_fail", theorem=rep.theorem, failures=len(rep.failures), instances=rep.instances)
            else:
                report("report.verify_pass", theorem=rep.theorem, instances=rep.instances)
            for kind, entry in sorted(rep.constants.items()):
                report("report.verify_constant", kind=kind, value=_render(entry["value"]))
        reports.extend(batch)
    return reports
