"""
Read and write the harness configuration
Every module reads its caps, seeds and tolerances through get_config_entry,
so the shipped defaults and the user's overrides are resolved in one place
"""

# --- Standard Library ---
import os
import sys
import json
import copy
import platform
import pathlib

APP_NAME = "SymHarmonic"
APP_ROOT = pathlib.Path(__file__).resolve().parent
DEFAULTS_FILE = APP_ROOT / "config.json"


def resource_path(relative_path):
    """
    Returns the absolute path to a file shipped next to the modules
    (config.json, constants.lock, Langs/...).
    Works both for normal Python scripts and frozen executables.
    """
    if getattr(sys, "frozen", False):
        base_path = pathlib.Path(sys.executable).resolve().parent
    else:
        base_path = APP_ROOT
    return base_path / relative_path


def get_config_path(app_name=APP_NAME, create=False):
    system = platform.system()

    if system == "Windows":
        base_dir = os.getenv("LOCALAPPDATA") or str(pathlib.Path.home())
        config_path = pathlib.Path(base_dir) / app_name
    elif system == "Darwin":  # macOS
        config_path = pathlib.Path.home() / "Library" / "Application Support" / app_name
    else:  # Linux and others
        config_path = pathlib.Path.home() / ".config" / app_name

    if create:
        config_path.mkdir(parents=True, exist_ok=True)
    return config_path


def user_config_file():
    explicit = os.getenv("SYMH_CONFIG")
    if explicit:
        return pathlib.Path(explicit).expanduser()
    return get_config_path() / "config.json"


_cached = None
_cached_stamp = None


def _read_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _merge(defaults, overrides):
    merged = copy.deepcopy(defaults)
    for section, values in overrides.items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section].update(values)
        else:
            merged[section] = values
    return merged


def load_config():
    """Shipped defaults with the user's override file merged over them, section by section."""
    global _cached, _cached_stamp

    override = user_config_file()
    stamp = (str(override), override.stat().st_mtime if override.exists() else None)
    if _cached is not None and stamp == _cached_stamp:
        return _cached

    try:
        defaults = _read_json(resource_path("config.json"))
    except (OSError, ValueError) as e:
        print(f"FAILED DEFAULT CONFIG JSON: {e}", file=sys.stderr)
        defaults = {}

    overrides = {}
    if override.exists():
        try:
            overrides = _read_json(override)
        except ValueError as e:
            # a broken override falls back to the shipped defaults
            print(f"FAILED CONFIG JSON: {e}", file=sys.stderr)

    _cached = _merge(defaults, overrides)
    _cached_stamp = stamp
    return _cached


def reset_config_cache():
    global _cached, _cached_stamp
    _cached = None
    _cached_stamp = None


def get_config_entry(section: str, key: str = None, default=None, value_type=str, values_only=False):
    config = load_config()

    value = config.get(section) if key is None else config.get(section, {}).get(key)

    if value is None or (isinstance(value, str) and not value.strip()):
        return default

    try:
        if value_type == bool:
            if isinstance(value, bool):
                return value
            value_lower = str(value).strip().lower()
            if value_lower in ("true", "yes", "1"):
                return True
            elif value_lower in ("false", "no", "0"):
                return False
            else:
                return default

        elif value_type == list:
            if isinstance(value, list):
                return value if value else default
            elif isinstance(value, dict):
                # only return values if explicitly requested
                return list(value.values()) if values_only else list(value.keys())
            return default

        elif value_type == dict and values_only:
            return list(value.values()) if isinstance(value, dict) else default

        return value_type(value)

    except (ValueError, TypeError):
        return default
