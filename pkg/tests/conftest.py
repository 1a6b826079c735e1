"""
Shared fixtures. The override config is written before any project module is
imported, so the catalogue, log tee and lock file never touch the user's directory.
"""

import os
import json
import random
import pathlib
import tempfile
from fractions import Fraction

import pytest

_SESSION_DIR = pathlib.Path(tempfile.mkdtemp(prefix="symh-tests-"))
_BASE_OVERRIDE = {
    "system": {"write_logs": False, "quiet": True, "threads": 1},
    "report": {"lock_file": str(_SESSION_DIR / "constants.lock")},
}
(_SESSION_DIR / "config.json").write_text(json.dumps(_BASE_OVERRIDE), encoding="utf-8")
os.environ["SYMH_CONFIG"] = str(_SESSION_DIR / "config.json")
os.environ.pop("SYMH_CACHE_DIR", None)

from config_utils import reset_config_cache  # noqa: E402
from classes import ClassFunction, cycle_types  # noqa: E402


@pytest.fixture
def config_override():
    """Merge extra sections into the override file for one test."""
    path = pathlib.Path(os.environ["SYMH_CONFIG"])

    def apply(**sections):
        data = json.loads(json.dumps(_BASE_OVERRIDE))
        for section, values in sections.items():
            data.setdefault(section, {}).update(values)
        path.write_text(json.dumps(data), encoding="utf-8")
        reset_config_cache()

    yield apply
    path.write_text(json.dumps(_BASE_OVERRIDE), encoding="utf-8")
    reset_config_cache()


@pytest.fixture
def lock_file(tmp_path):
    return tmp_path / "constants.lock"


def random_walk(n, group, rng, high=9):
    """A nonnegative class function with ||f||_1 = 1 and seeded random values."""
    raw = {ct: rng.randint(0, high) for ct in cycle_types(n, group)}
    if not any(raw.values()):
        raw[next(iter(raw))] = 1
    f = ClassFunction(n, group, raw)
    return f.scale(1 / f.mean())


def random_class_function(n, group, rng, low=-5, high=5):
    return ClassFunction(n, group, {ct: Fraction(rng.randint(low, high), rng.randint(1, 3)) for ct in cycle_types(n, group)})


@pytest.fixture
def rng():
    return random.Random(0x5EED)
