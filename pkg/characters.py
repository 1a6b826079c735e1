"""
Exact character values of S_n
CharacterEvaluator runs the Murnaghan-Nakayama recursion on beta-sets with a
sharded, bounded memo; branching multiplicities come from Young's rule
"""

# --- Standard Library ---
import csv
import io
import pickle
import pathlib
import threading
from collections import Counter
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor

# --- Local Modules ---
from config_utils import get_config_entry
from errors import PreconditionError, VerificationFailure
from starter import report, worker_count
from partitions import (
    Partition,
    as_partition,
    canonical_order,
    conjugate,
    dimension,
    partitions_of,
    removable_rows,
    remove_box,
)
from classes import (
    CycleType,
    as_cycle_type,
    cycle_types,
    is_even,
)


def _beta_set(parts):
    length = len(parts)
    return [p + length - 1 - i for i, p in enumerate(parts)]


def _from_beta_set(beta):
    beta = sorted(beta, reverse=True)
    length = len(beta)
    return tuple(p for p in (b - (length - 1 - i) for i, b in enumerate(beta)) if p)


def rim_hooks(parts, k):
    """
    (remaining shape, height) for every rim hook of length k of the shape.
    A hook is a bead moved from b to b-k on the beta-set; its height is the
    number of beads jumped over.
    """
    beta = _beta_set(parts)
    beads = set(beta)
    out = []
    for b in beta:
        target = b - k
        if target < 0 or target in beads:
            continue
        height = sum(1 for x in beta if target < x < b)
        moved = [target if x == b else x for x in beta]
        out.append((_from_beta_set(moved), height))
    return out


class CharacterEvaluator:
    """
    Memoized Murnaghan-Nakayama engine: (lambda, cycle type) -> chi_lambda(cycle type).
    The memo is keyed by the shape and the multiset of cycles still to consume,
    split into shards with one lock each, and reset as a whole when a shard
    outgrows its share of memo_cap.
    """

    def __init__(self, memo_cap=None, shards=None):
        self.memo_cap = memo_cap or get_config_entry("characters", "memo_cap", default=1 << 24, value_type=int)
        self.shard_count = max(1, shards or get_config_entry("characters", "memo_shards", default=16, value_type=int))
        self._shards = [{} for _ in range(self.shard_count)]
        self._locks = [threading.Lock() for _ in range(self.shard_count)]
        self.resets = 0

    def __len__(self):
        return sum(len(s) for s in self._shards)

    def _lookup(self, key):
        idx = hash(key) % self.shard_count
        with self._locks[idx]:
            return self._shards[idx].get(key)

    def _store(self, key, value):
        idx = hash(key) % self.shard_count
        overflow = False
        with self._locks[idx]:
            self._shards[idx][key] = value
            overflow = len(self._shards[idx]) > self.memo_cap // self.shard_count
        if overflow:
            self.clear()
            self.resets += 1

    def clear(self):
        for lock, shard in zip(self._locks, self._shards):
            with lock:
                shard.clear()

    def value(self, lam, ct):
        lam, ct = as_partition(lam), as_cycle_type(ct)
        if lam.n != ct.n:
            raise PreconditionError(
                "error.size_mismatch", left=str(lam), left_n=lam.n, right=str(ct), right_n=ct.n
            )
        return self._value(tuple(lam), tuple(ct))

    def _value(self, parts, cycles):
        # cycles is sorted longest first, so cycles[0] is the one consumed
        if not cycles or cycles[0] == 1:
            return dimension(Partition(parts))

        key = (parts, cycles)
        cached = self._lookup(key)
        if cached is not None:
            return cached

        rest = cycles[1:]
        total = 0
        for shape, height in rim_hooks(parts, cycles[0]):
            term = self._value(shape, rest)
            total += -term if height % 2 else term

        self._store(key, total)
        return total

    # --- persistence ---

    def snapshot(self):
        out = {}
        for lock, shard in zip(self._locks, self._shards):
            with lock:
                out.update(shard)
        return out

    def update(self, entries):
        for key, value in entries.items():
            self._store(key, value)

    def save(self, path, version=None):
        if version is None:
            version = get_config_entry("characters", "cache_version", default=1, value_type=int)
        entries = self.snapshot()
        path = pathlib.Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "wb") as f:
            pickle.dump({"version": version, "entries": entries}, f, protocol=pickle.HIGHEST_PROTOCOL)
        tmp.replace(path)
        return len(entries)

    def load(self, path, version=None):
        """Merge a saved memo; a missing, unreadable or differently versioned file loads nothing."""
        if version is None:
            version = get_config_entry("characters", "cache_version", default=1, value_type=int)
        path = pathlib.Path(path)
        if not path.exists():
            return 0
        try:
            with open(path, "rb") as f:
                payload = pickle.load(f)
        except (OSError, pickle.UnpicklingError, EOFError, AttributeError, ValueError) as e:
            report("error.cache_unreadable", path=path, e=e)
            return 0
        if not isinstance(payload, dict) or payload.get("version") != version:
            return 0
        entries = payload.get("entries") or {}
        self.update(entries)
        return len(entries)


EVALUATOR = CharacterEvaluator()


def cache_file(cache_dir, version=None):
    if version is None:
        version = get_config_entry("characters", "cache_version", default=1, value_type=int)
    return pathlib.Path(cache_dir) / f"mn_cache_v{version}.pickle"


def mn_value(lam, ct, evaluator=None):
    """chi_lambda at the class of ct, exact."""
    return (evaluator or EVALUATOR).value(lam, ct)


def character_ratio(lam, ct, evaluator=None):
    return Fraction(mn_value(lam, ct, evaluator), dimension(lam))


def long_cycle_witness(n, ell, cycles=None):
    """1^ell followed by the given long cycles (default: one (n-ell)-cycle)."""
    if cycles is None:
        cycles = [n - ell] if n > ell else []
    return CycleType(sorted(list(cycles) + [1] * ell, reverse=True))


def mn_long_cycle_value(lam, ell, cycles=None, evaluator=None):
    """
    chi_lambda on a class with ell fixed points and all other cycles longer
    than d = n - lambda_1, which equals dimension(mu) with mu the shape left
    after cutting the first row down to ell - d.
    The value is checked against mn_value on the witness class.
    """
    lam = as_partition(lam)
    n = lam.n
    d = n - lam.part(0)
    second = lam.part(1)
    if not (d + second <= ell <= n and (ell == n or n - ell > d)):
        raise PreconditionError("error.long_cycle_pre", lam=str(lam), ell=ell)
    if cycles is not None and (sum(cycles) != n - ell or any(c <= d for c in cycles)):
        raise PreconditionError("error.long_cycle_pre", lam=str(lam), ell=ell)

    mu = Partition((ell - d,) + tuple(lam[1:])) if ell - d > 0 else Partition(lam[1:])
    value = dimension(mu)

    witness = long_cycle_witness(n, ell, cycles)
    direct = mn_value(lam, witness, evaluator)
    if direct != value:
        raise VerificationFailure(
            "error.hard_failure",
            theorem="mn-long",
            count=1,
            witness=f"lambda={lam}, type={witness}: {direct} != {value}",
        )
    return value


def branching_multiplicities(lam, m):
    """Restriction of chi_lambda to S_(n-m): mu -> number of m-step corner-removal paths lambda -> mu."""
    lam = as_partition(lam)
    if not 0 <= m <= lam.n:
        raise PreconditionError("error.branching_range", n=lam.n, m=m)
    layer = Counter({lam: 1})
    for _ in range(m):
        nxt = Counter()
        for mu, c in layer.items():
            for row in removable_rows(mu):
                nxt[remove_box(mu, row)] += c
        layer = nxt
    return {mu: layer[mu] for mu in canonical_order(layer)}


def an_character_value(lam, ct, evaluator=None):
    """Value of the irreducible restriction of chi_lambda to A_n; lambda must not be self-conjugate."""
    lam, ct = as_partition(lam), as_cycle_type(ct)
    if lam == conjugate(lam):
        raise PreconditionError("error.self_conjugate", lam=str(lam), n=lam.n)
    if not is_even(ct):
        raise PreconditionError("error.odd_class", ct=str(ct), n=ct.n)
    return mn_value(lam, ct, evaluator)


# --- Character tables ---

class CharacterTable:
    """Rows are partitions, columns cycle types, both in canonical order."""

    def __init__(self, n, rows, cols, values):
        self.n = n
        self.rows = rows
        self.cols = cols
        self.values = values
        self._row_index = {lam: i for i, lam in enumerate(rows)}
        self._col_index = {ct: j for j, ct in enumerate(cols)}

    def value(self, lam, ct):
        return self.values[self._row_index[as_partition(lam)]][self._col_index[as_cycle_type(ct)]]

    def row(self, lam):
        return dict(zip(self.cols, self.values[self._row_index[as_partition(lam)]]))

    def to_json(self):
        return {
            "n": self.n,
            "rows": [str(lam) for lam in self.rows],
            "cols": [str(ct) for ct in self.cols],
            "values": [[str(v) for v in row] for row in self.values],
        }

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["lambda"] + [str(ct) for ct in self.cols])
        for lam, row in zip(self.rows, self.values):
            writer.writerow([str(lam)] + [str(v) for v in row])
        return buffer.getvalue()


_tables = {}
_tables_lock = threading.Lock()


def character_table(n, evaluator=None, threads=None):
    cap = get_config_entry("characters", "table_cap", default=20, value_type=int)
    if n > cap:
        raise PreconditionError("error.table_cap", n=n, cap=cap)

    evaluator = evaluator or EVALUATOR
    if evaluator is EVALUATOR:
        with _tables_lock:
            if n in _tables:
                return _tables[n]

    rows = list(partitions_of(n))
    cols = list(cycle_types(n))

    def build_row(lam):
        return tuple(evaluator.value(lam, ct) for ct in cols)

    workers = min(worker_count(threads), max(1, len(rows)))
    if workers > 1 and n > 8:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = tuple(pool.map(build_row, rows))
    else:
        values = tuple(build_row(lam) for lam in rows)

    table = CharacterTable(n, rows, cols, values)
    report("report.table_progress", n=n, rows=len(rows), cols=len(cols))

    if evaluator is EVALUATOR:
        with _tables_lock:
            _tables[n] = table
    return table
