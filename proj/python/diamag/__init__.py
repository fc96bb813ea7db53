"""Python bindings for the diamag C++ library."""

import json as _json

from ._diamag import *  # noqa: F401,F403
from ._diamag import __version__, run_invariant_battery as _battery


def invariant_battery(seed=1, budget=20000, corrupt=""):
    """Run the invariant battery and return the parsed report."""
    return _json.loads(_battery(seed, budget, corrupt))
