"""Numerical checks for minimal surfaces and curvature flows."""

from . import _minsurf
from ._minsurf import *  # noqa: F401,F403
from ._minsurf import Error

__all__ = [name for name in dir(_minsurf) if not name.startswith("_")]


def main() -> int:
    import sys

    code, out, err = _minsurf.run_cli(sys.argv[1:])
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
