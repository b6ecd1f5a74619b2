"""Python bindings for termflow. Every analysis returns a decoded JSON dict."""

import json

try:
    from . import _termflow as _native
except ImportError:
    import _termflow as _native

TermflowError = _native.TermflowError
ParseError = _native.ParseError
WellFormednessError = _native.WellFormednessError
PreconditionError = _native.PreconditionError
BudgetExceeded = _native.BudgetExceeded
EvalError = _native.EvalError

__version__ = _native.version


def exponent(text, certificate=False):
    return json.loads(_native.exponent(text, certificate))


def threshold(text, d):
    return json.loads(_native.threshold(text, d))


def dispersion(text, n, budget=0, jobs=1):
    return json.loads(_native.dispersion(text, n, budget, jobs))


def max_solutions(text, n, budget=0, jobs=1):
    return json.loads(_native.max_solutions(text, n, budget, jobs))


def perfect(text, n, budget=0, jobs=1):
    return json.loads(_native.perfect(text, n, budget, jobs))


def guessing(text, n, budget=0, jobs=1):
    return json.loads(_native.guessing(text, n, budget, jobs))


def normalize(text):
    return json.loads(_native.normalize(text))


def run_cli(args):
    """Runs the command line in-process; returns (exit_code, stdout, stderr)."""
    return _native.run_cli(list(args))
