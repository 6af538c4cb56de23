# strohhacker/config.py
import logging
import os

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("[config] ignoring %s=%r, expected an integer", name, raw)
        return default
    return max(minimum, value)


THREADS = _int_env("STROHHACKER_THREADS", os.cpu_count() or 1)
LOG_LEVEL = os.getenv("STROHHACKER_LOG_LEVEL", "WARNING").upper()
DEFAULT_ORDER = _int_env("STROHHACKER_DEFAULT_ORDER", 32, minimum=0)
ANGULAR_COUNT = _int_env("STROHHACKER_ANGULAR_COUNT", 4096, minimum=8)

TOOL_VERSION = "0.3.0"


def configure_logging(level: str | None = None) -> None:
    logging.basicConfig(
        level=(level or LOG_LEVEL),
        format="%(levelname)s %(name)s %(message)s",
    )
