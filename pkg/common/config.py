# common/config.py
import os

from dotenv import load_dotenv

load_dotenv()

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _int_from_env(name, default):
    raw = os.getenv(name, str(default))
    try:
        return int(raw)
    except ValueError:
        return default


THREADS = max(1, _int_from_env("HTYPE_THREADS", os.cpu_count() or 1))
EXTENDED_DPS = max(16, _int_from_env("HTYPE_EXTENDED_DPS", 40))
MAX_LATTICE_RADIUS = max(4, _int_from_env("HTYPE_MAX_LATTICE_RADIUS", 400))
SEARCH_BUDGET = max(1000, _int_from_env("HTYPE_SEARCH_BUDGET", 4_000_000))
LOG_LEVEL = os.getenv("HTYPE_LOG_LEVEL", "INFO").upper()

RESULT_DIR = os.environ.get("RESULT_DIR", os.path.join(ROOT_DIR, "result"))

cors_origins_raw = os.getenv("CORS_ORIGINS", "*")
if cors_origins_raw and cors_origins_raw != "*":
    CORS_ORIGINS = [origin.strip() for origin in cors_origins_raw.split(",") if origin.strip()] or "*"
else:
    CORS_ORIGINS = "*"


def ensure_result_dir(path=None):
    target = path or RESULT_DIR
    os.makedirs(target, exist_ok=True)
    return target
