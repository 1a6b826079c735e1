"""
Holds the start-up plumbing shared by every module:
the message catalogue, the console/log tee, the memo-cache lock and worker sizing
"""

# --- Standard Library ---
import atexit
import json
import os
import sys
import time
import pathlib
from datetime import datetime

# --- Third-Party Packages ---
import psutil

# --- Local Modules ---
from config_utils import (
    resource_path,
    get_config_path,
    get_config_entry,
)


# --- Setting up Translator ---
class Translator:
    def __init__(self, lang="en", lang_dir="Langs"):
        self.lang_dir = lang_dir
        self.set_language(lang)

    def set_language(self, lang):
        self.lang = lang
        self.data = load_langs(lang, self.lang_dir)

    def t(self, key, /, **kwargs):
        """Translate a key with optional formatting arguments."""
        value = self.data
        try:
            for p in key.split("."):
                value = value[p]
        except (KeyError, TypeError):
            return key  # fallback: return key name if missing

        # If it's a string, format it. Otherwise, just return it.
        if isinstance(value, str):
            try:
                return value.format(**kwargs)
            except (KeyError, IndexError):
                return value
        return value


def load_langs(lang, lang_dir="Langs"):
    langs_file = resource_path(pathlib.Path(lang_dir) / f"{lang}.json")
    if not langs_file.exists():
        # fallback to English
        langs_file = resource_path(pathlib.Path(lang_dir) / "en.json")
    try:
        with open(langs_file, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        print(f"FAILED LANGS JSON: {e}", file=sys.__stderr__)
        return {}


t = Translator(get_config_entry("system", "language", default="en", value_type=str))


# --- Quiet mode ---

_quiet_override = None


def set_quiet(value):
    global _quiet_override
    _quiet_override = bool(value)


def is_quiet():
    if _quiet_override is not None:
        return _quiet_override
    return get_config_entry("system", "quiet", default=False, value_type=bool)


def report(key, /, **kwargs):
    """Progress line for long sweeps; silent in quiet mode."""
    if not is_quiet():
        print(t.t(key, **kwargs), file=sys.stderr)


# --- Log Output ---
class CombinedStdout:
    def __init__(self, stream, logfile):
        self.console = stream
        self.log = logfile

    def write(self, s):
        self.console.write(s)
        self.log.write(s)
        self.log.flush()

    def flush(self):
        self.console.flush()
        self.log.flush()


_log_handle = None


def prune_logs(log_dir, keep_days):
    hold_duration = keep_days * 24 * 60 * 60  # seconds
    now = time.time()

    for file_path in pathlib.Path(log_dir).iterdir():
        if not file_path.is_file():
            continue
        try:
            if now - file_path.stat().st_mtime > hold_duration:
                file_path.unlink()
        except OSError:
            pass  # ignore files that can't be accessed/deleted


def start_logging():
    """Tee stdout and stderr into a timestamped file under <config dir>/Log."""
    global _log_handle

    if _log_handle is not None or not get_config_entry("system", "write_logs", default=True, value_type=bool):
        return None

    log_dir = get_config_path(create=True) / "Log"
    log_dir.mkdir(parents=True, exist_ok=True)
    prune_logs(log_dir, get_config_entry("system", "keep_logs_days", default=7, value_type=int))

    clock = datetime.now().strftime("%Y_%m_%d_%H_%M_%S")
    log_file = log_dir / f"output_{clock}.log"
    _log_handle = open(log_file, "a", encoding="utf-8")

    sys.stdout = CombinedStdout(sys.__stdout__, _log_handle)
    sys.stderr = CombinedStdout(sys.__stderr__, _log_handle)
    return log_file


def stop_logging():
    global _log_handle
    if _log_handle is None:
        return
    sys.stdout = sys.__stdout__
    sys.stderr = sys.__stderr__
    _log_handle.close()
    _log_handle = None


# --- Worker pool sizing ---

def worker_count(requested=None):
    if requested is None:
        requested = get_config_entry("system", "threads", default=0, value_type=int)
    if requested and requested > 0:
        return requested
    return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1


# --- Memo cache lock ---
# Guards SYMH_CACHE_DIR so two runs never write the persisted memo at once

def is_process_running(pid):
    return psutil.pid_exists(pid)


def acquire_cache_lock(cache_dir):
    """Returns the lock path on success, None when another live run holds it."""
    lockfile = pathlib.Path(cache_dir) / "mn_cache.lock"

    if lockfile.exists():
        try:
            old_pid = int(lockfile.read_text().strip())
            if old_pid != os.getpid() and is_process_running(old_pid):
                print(t.t("error.cache_locked", path=cache_dir, pid=old_pid), file=sys.stderr)
                return None
        except ValueError:
            print(t.t("error.broken_lock"), file=sys.stderr)

    lockfile.write_text(str(os.getpid()))
    atexit.register(release_cache_lock, lockfile)
    return lockfile


def release_cache_lock(lockfile):
    lockfile = pathlib.Path(lockfile)
    try:
        if lockfile.exists() and lockfile.read_text().strip() == str(os.getpid()):
            lockfile.unlink()
    except OSError:
        pass
