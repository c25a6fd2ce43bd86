import logging
import os

log = logging.getLogger("isoprod")

_requested = os.environ.get("ISOPROD_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"ISOPROD_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"


def configure_logging() -> None:
    level = os.environ.get("ISOPROD_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
