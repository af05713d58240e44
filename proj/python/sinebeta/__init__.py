"""Python access to the Sine-beta CLT numerical lab."""

import json as _json

from ._sinebeta import *  # noqa: F401,F403
from ._sinebeta import (
    run_clt_experiment_json as _run_clt,
    verify_energy_expansion_json as _expansion,
    verify_energy_splitting_json as _splitting,
)


def run_clt_experiment(config=None, **overrides):
    """Run a CLT experiment. Keys follow the JSON config of `clt run`; returns the report as a dict."""
    cfg = dict(config or {})
    cfg.update(overrides)
    return _json.loads(_run_clt(_json.dumps(cfg)))


def verify_energy_splitting(transport, eta):
    return _json.loads(_splitting(transport, eta))


def verify_energy_expansion(transport, eta):
    return _json.loads(_expansion(transport, eta))
