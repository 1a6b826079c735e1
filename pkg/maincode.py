"""
Runs the harness
"""

# --- Standard Library ---
import os
import sys
import pathlib
import traceback

# --- Save root folder ---
APP_ROOT = pathlib.Path(sys.argv[0]).resolve().parent

if str(APP_ROOT) not in sys.path:
    sys.path.insert(0, str(APP_ROOT))

# --- Local Modules ---
from starter import report, stop_logging, t
from cli import main


if __name__ == "__main__":
    code = 1
    try:
        code = main()
    except KeyboardInterrupt:
        print(t.t("error.interrupted"), file=sys.stderr)
        code = 130
    except Exception as e:
        print(t.t("error.unexpected", e=e), file=sys.stderr)
        traceback.print_exc()
        code = 1
    finally:
        stop_logging()
        report("report.cleanup")
    sys.exit(code)
