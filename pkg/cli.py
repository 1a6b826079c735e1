"""
Command-line surface of the harness
Parses the subcommands, runs them, writes the JSON/CSV report and keeps the
fitted-constant lock file in step with what the sweeps produce
"""

# --- Standard Library ---
import os
import sys
import csv
import io
import json
import math
import pathlib
import argparse
from dataclasses import asdict, dataclass, field
from fractions import Fraction

# --- Local Modules ---
from config_utils import get_config_entry, resource_path
from errors import (
    ConfigError,
    LockDrift,
    PreconditionError,
    SymHarmonicError,
)
from starter import (
    acquire_cache_lock,
    release_cache_lock,
    report,
    set_quiet,
    start_logging,
    stop_logging,
    t,
)
from partitions import Partition
from classes import CycleType, exact_json, normalized_class_indicator
from characters import (
    EVALUATOR,
    CharacterTable,
    an_character_value,
    cache_file,
    character_table,
    mn_value,
)
from harmonic import (
    SquaredNorm,
    globalness_certificate,
    kronecker,
    q_norm,
    q_norm_exact,
)
from bounds import BoundReport, SweepOptions, verify
from mixing import (
    MixingProfile,
    lower_bound_report,
    mixing_profile,
    mixing_time,
    non_mixer_report,
    product_mixing,
    covers_group,
)

SUBCOMMANDS = ("char", "norm", "kronecker", "global", "verify", "mix")
THEOREM_IDS = ("dims", "branching", "mn-long", "prob-recursion", "main-norm", "ratio", "fourier", "kronecker", "all")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    action: str = None
    partition: Partition = None
    mu: Partition = None
    nu: Partition = None
    cycle_type: CycleType = None
    group: str = "S"
    n: int = None
    n_max: int = 10
    q: float = None
    exact: bool = False
    brute: bool = False
    theorem: str = "all"
    steps: int = 8
    epsilon: float = 0.25
    p: int = 2
    ell: int = 2
    sets: tuple = field(default_factory=tuple)
    out: pathlib.Path = None
    fmt: str = "json"
    threads: int = None
    update_locks: bool = False
    seed: int = None
    q_set: tuple = (4, 6)
    d_max: int = 3
    kronecker_d_cap: int = 4


# --- Argument parsing ---

def _partition(text):
    try:
        return Partition.parse(text)
    except PreconditionError as e:
        raise argparse.ArgumentTypeError(e.message) from None


def _cycle_type(text):
    try:
        return CycleType.parse(text)
    except PreconditionError as e:
        raise argparse.ArgumentTypeError(e.message) from None


def _int_list(text):
    try:
        values = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        values = ()
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(t.t("error.bad_integer_list", text=text))
    return values


def _type_list(text):
    """Cycle types separated by ';', e.g. "3,1,1;5"."""
    return tuple(_cycle_type(part) for part in text.split(";") if part.strip())


def _output_options(parser, default):
    parser.add_argument("--format", dest="fmt", choices=("json", "csv"), default=default)
    parser.add_argument("--out", "--json", dest="out", type=pathlib.Path, default=default)
    parser.add_argument("--threads", type=int, default=default)


def build_parser():
    parser = argparse.ArgumentParser(prog="symharmonic", description="Exact harmonic analysis on S_n and A_n.")
    _output_options(parser, None)
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    char = sub.add_parser("char", help="character values and tables")
    char.add_argument("action", choices=("eval", "table"))
    char.add_argument("--lambda", dest="partition", type=_partition)
    char.add_argument("--type", dest="cycle_type", type=_cycle_type)
    char.add_argument("--group", choices=("S", "A"), default="S")
    char.add_argument("--n", type=int)

    norm = sub.add_parser("norm", help="L^q norm of a character")
    norm.add_argument("--lambda", dest="partition", type=_partition, required=True)
    norm.add_argument("--q", type=float, required=True)
    norm.add_argument("--exact", action="store_true")
    norm.add_argument("--group", choices=("S", "A"), default="S")

    kron = sub.add_parser("kronecker", help="Kronecker coefficient g(lambda, mu, nu)")
    kron.add_argument("--lambda", dest="partition", type=_partition, required=True)
    kron.add_argument("--mu", type=_partition, required=True)
    kron.add_argument("--nu", type=_partition, required=True)

    glob = sub.add_parser("global", help="globalness certificate of a character")
    glob.add_argument("--lambda", dest="partition", type=_partition, required=True)
    glob.add_argument("--brute", action="store_true")

    ver = sub.add_parser("verify", help="exact checks and constant fits")
    ver.add_argument("--theorem", choices=THEOREM_IDS, default="all")
    ver.add_argument("--n-max", dest="n_max", type=int, default=10)
    ver.add_argument("--update-locks", dest="update_locks", action="store_true")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--q-set", dest="q_set", type=_int_list)
    ver.add_argument("--d-max", dest="d_max", type=int)
    ver.add_argument("--kronecker-d-cap", dest="kronecker_d_cap", type=int)

    mix = sub.add_parser("mix", help="normal random walks")
    mix.add_argument("action", nargs="?", choices=("walk", "lower-bound", "product", "non-mixer", "cover"), default="walk")
    mix.add_argument("--group", choices=("S", "A"), default="A")
    mix.add_argument("--n", type=int)
    mix.add_argument("--class", dest="cycle_type", type=_cycle_type)
    mix.add_argument("--steps", type=int, default=8)
    mix.add_argument("--epsilon", type=float, default=0.25)
    mix.add_argument("--p", type=int, choices=(1, 2), default=2)
    mix.add_argument("--ell", type=int, default=2)
    mix.add_argument("--a", type=_type_list)
    mix.add_argument("--b", type=_type_list)
    mix.add_argument("--c", type=_type_list)

    # accepted after the subcommand too; SUPPRESS keeps the global value when absent
    for subparser in (char, norm, kron, glob, ver, mix):
        _output_options(subparser, argparse.SUPPRESS)
    return parser


def config_from_args(args):
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    if args.subcommand == "mix":
        values["sets"] = tuple(s for s in (args.a, args.b, args.c) if s)
    if "seed" not in values:
        values["seed"] = get_config_entry("harmonic", "seed", default=0x5EED, value_type=int)
    if "fmt" not in values:
        values["fmt"] = get_config_entry("report", "format", default="json", value_type=str)
    if values["fmt"] not in ("json", "csv"):
        raise ConfigError("error.config", detail=f"report.format = {values['fmt']}")
    return RunConfig(**values)


# --- Serialization ---

def jsonable(value):
    """Exact values become decimal strings; small ints stay numbers."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Partition):
        return str(value)
    if isinstance(value, int):
        return value if abs(value) < 2 ** 53 else str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, SquaredNorm):
        return {"squared": str(value.squared), "value": value.value}
    if isinstance(value, (BoundReport, CharacterTable, MixingProfile)):
        return jsonable(value.to_json())
    if isinstance(value, tuple) and hasattr(value, "_asdict"):
        return jsonable(value._asdict())
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def render(payload, fmt):
    if fmt == "json":
        return json.dumps(jsonable(payload), indent=2, ensure_ascii=False) + "\n"
    if isinstance(payload, dict) and "table" in payload:
        return payload["table"].to_csv()
    if isinstance(payload, dict) and "reports" in payload:
        return "\n".join(rep.to_csv() for rep in payload["reports"])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in jsonable(payload).items():
        writer.writerow([key, json.dumps(value, ensure_ascii=False) if isinstance(value, (dict, list)) else value])
    return buffer.getvalue()


def write_output(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    out = pathlib.Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    report("report.written", path=out)


# --- Constant locks ---

def lock_path():
    path = pathlib.Path(get_config_entry("report", "lock_file", default="constants.lock", value_type=str)).expanduser()
    return path if path.is_absolute() else resource_path(path)


def lock_key(rep, kind):
    return f"{rep.theorem}.{kind}@{rep.range_tag}"


def check_locks(reports, path=None, update=False):
    """
    Compare every fitted constant with the lock file. Keys not yet locked are
    added; with update all keys are rewritten. Drift beyond the tolerance raises LockDrift.
    """
    path = pathlib.Path(path) if path else lock_path()
    tolerance = get_config_entry("report", "lock_tolerance", default=1e-6, value_type=float)
    try:
        locked = json.loads(path.read_text(encoding="utf-8")) if path.exists() else {}
    except (OSError, ValueError) as e:
        raise ConfigError("error.config", detail=f"{path}: {e}") from None

    changed = 0
    drift = []
    for rep in reports:
        for kind, entry in sorted(rep.constants.items()):
            value = float(entry["value"])
            if not math.isfinite(value):
                continue
            key = lock_key(rep, kind)
            text = repr(value)
            if key not in locked or update:
                if locked.get(key) != text:
                    locked[key] = text
                    changed += 1
                    report("report.lock_new", lock=key, value=text)
                continue
            previous = float(locked[key])
            if abs(value - previous) > tolerance * max(abs(previous), abs(value)):
                drift.append((key, locked[key], text))
            else:
                report("report.lock_ok", lock=key, value=text)

    if changed:
        path.write_text(json.dumps(dict(sorted(locked.items())), indent=2) + "\n", encoding="utf-8")
        report("report.lock_updated", count=changed, path=path)
    if drift:
        key, old, new = drift[0]
        raise LockDrift("error.lock_drift", lock=key, locked=old, computed=new)
    return locked


# --- Subcommands ---

def _require(value, flag):
    if value is None:
        raise ConfigError("error.config", detail=f"missing {flag}")
    return value


def run_char(config):
    if config.action == "table":
        table = character_table(_require(config.n, "--n"), threads=config.threads)
        return {"table": table} if config.fmt == "csv" else table.to_json()
    lam, ct = _require(config.partition, "--lambda"), _require(config.cycle_type, "--type")
    value = an_character_value(lam, ct) if config.group == "A" else mn_value(lam, ct)
    return {"lambda": lam, "type": ct, "group": config.group, "value": value}


def _harmonic_payload(op, inputs, exact=None, value=None, witness=None):
    """Report shape shared by norm, kronecker and global."""
    return {
        "op": op,
        "inputs": inputs,
        "exact": exact_json(exact) if exact is not None else None,
        "float": float(exact) if value is None and exact is not None else value,
        "witness": witness,
    }


def run_norm(config):
    """exact holds ||chi||_q^q (with --exact), float holds ||chi||_q."""
    lam = config.partition
    q = config.q
    power = None
    if config.exact:
        if not float(q).is_integer():
            raise PreconditionError("error.exact_exponent", p=q)
        q = int(q)
        power = q_norm_exact(lam, q, config.group)
    inputs = {"lambda": lam, "q": q, "group": config.group}
    return _harmonic_payload("norm", inputs, power, q_norm(lam, config.q, config.group))


def run_kronecker(config):
    g = kronecker(config.partition, config.mu, config.nu)
    return _harmonic_payload("kronecker", {"lambda": config.partition, "mu": config.mu, "nu": config.nu}, g)


def run_global(config):
    """exact holds gamma = max_m B(m) / 2^m; the certificate is the witness."""
    cert = globalness_certificate(config.partition, brute=config.brute)
    return _harmonic_payload("global", {"lambda": config.partition, "brute": config.brute}, cert["gamma"], witness=cert)


def run_verify(config):
    options = SweepOptions(config.q_set, config.d_max, config.kronecker_d_cap, config.seed)
    reports = verify(config.theorem, config.n_max, config.threads, options)
    passed = all(rep.passed for rep in reports)
    payload = {
        "theorem": config.theorem,
        "n_max": config.n_max,
        "settings": asdict(options),
        "passed": passed,
        "reports": reports,
    }
    return payload, reports


def run_mix(config):
    if config.action == "lower-bound":
        return lower_bound_report(_require(config.n, "--n"), config.ell, config.threads)
    if config.action == "non-mixer":
        return non_mixer_report(_require(config.n, "--n"), threads=config.threads)
    if config.action == "product":
        if len(config.sets) != 3:
            raise ConfigError("error.config", detail="mix product needs --a, --b and --c")
        lhs, terms = product_mixing(*config.sets, group=config.group, threads=config.threads)
        return {"group": config.group, "lhs": lhs, "lhs_float": float(lhs), "terms": terms}
    if config.action == "cover":
        types = config.sets[0] if config.sets else (_require(config.cycle_type, "--class"),)
        return {"group": config.group, "types": list(types), "k": config.steps, "covers": covers_group(types, config.steps, config.group, config.threads)}

    ct = _require(config.cycle_type, "--class")
    if config.n is not None and config.n != ct.n:
        raise PreconditionError("error.size_mismatch", left="--n", left_n=config.n, right=str(ct), right_n=ct.n)
    f = normalized_class_indicator(ct, config.group)
    profile = mixing_profile(f, config.steps, config.p, config.threads)
    steps = mixing_time(f, config.epsilon, config.p, threads=config.threads)
    cap = get_config_entry("mixing", "max_steps", default=64, value_type=int)
    payload = profile.to_json()
    payload["epsilon"] = config.epsilon
    payload["mixing_time"] = steps if steps is not None else t.t("mixing.cap_exceeded", cap=cap)
    return payload


def run(config):
    """Execute one RunConfig and write its report; returns the exit code."""
    if config.subcommand not in SUBCOMMANDS:
        raise ConfigError("error.unknown_command", command=config.subcommand)

    reports = []
    if config.subcommand == "verify":
        payload, reports = run_verify(config)
    else:
        payload = {
            "char": run_char,
            "norm": run_norm,
            "kronecker": run_kronecker,
            "global": run_global,
            "mix": run_mix,
        }[config.subcommand](config)

    write_output(render(payload, config.fmt), config.out)

    if reports:
        check_locks(reports, update=config.update_locks)
        failed = [rep for rep in reports if not rep.passed]
        if failed:
            first = failed[0]
            print(t.t("error.hard_failure", theorem=first.theorem, count=len(first.failures), witness=first.failures[0]), file=sys.stderr)
            return 1
    return 0


# --- Memo persistence ---

def _load_cache():
    cache_dir = os.getenv("SYMH_CACHE_DIR")
    if not cache_dir:
        return None
    cache_dir = pathlib.Path(cache_dir).expanduser()
    cache_dir.mkdir(parents=True, exist_ok=True)
    lock = acquire_cache_lock(cache_dir)
    if lock is None:
        return None
    path = cache_file(cache_dir)
    count = EVALUATOR.load(path)
    if count:
        report("report.cache_loaded", count=count, path=path)
    return lock, path


def _save_cache(state):
    if state is None:
        return
    lock, path = state
    try:
        count = EVALUATOR.save(path)
        report("report.cache_saved", count=count, path=path)
    finally:
        release_cache_lock(lock)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.quiet:
        set_quiet(True)

    log_file = start_logging()
    if log_file is not None:
        report("report.log_file", path=log_file)
    state = None
    try:
        config = config_from_args(args)
        state = _load_cache()
        return run(config)
    except SymHarmonicError as e:
        print(e.message, file=sys.stderr)
        return e.exit_code
    finally:
        _save_cache(state)
        stop_logging()
