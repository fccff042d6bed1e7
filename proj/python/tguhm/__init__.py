"""Change-point segmentation of copy-number ratio series.

The compiled core lives in ``tguhm._tguhm``. This wrapper adds dict-based
scenario handling on top of it.
"""

import json as _json

from ._tguhm import *  # noqa: F401,F403
from ._tguhm import (
    ContractError,
    InputError,
    evaluate_json as _evaluate_json,
    generate_replicate as _generate_replicate,
)

__version__ = "0.1.0"


def _scenario_text(scenario):
    return scenario if isinstance(scenario, str) else _json.dumps(scenario)


def generate_replicate(scenario, sigma, r):
    """Return (y, truth, true_change_points, seed) for replicate r (1-based)."""
    return _generate_replicate(_scenario_text(scenario), sigma, r)


def evaluate(scenario, c_stars=(1, 2), sweep=(), lambda_=None, match_window=2, threads=1):
    """Score each c* on a simulated scenario; returns the report as a dict.

    With a non-empty ``sweep`` every method also gets one ROC curve per sigma.
    """
    text = _evaluate_json(_scenario_text(scenario), list(c_stars), list(sweep), lambda_, match_window, threads)
    return _json.loads(text)
