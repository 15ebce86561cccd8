"""Python front for the prepair core: load a system, check it, repair it."""
import json

from ._prepair import (  # noqa: F401
    Document,
    InputError,
    UnsupportedError,
    corpus_names,
    explicit_reach,
    load,
    load_corpus,
    parse,
)
from . import _prepair

__all__ = [
    "Document", "InputError", "UnsupportedError", "load", "parse", "load_corpus",
    "corpus_names", "check", "deadlock", "repair", "explicit_reach",
]


def _doc(x):
    if isinstance(x, Document):
        return x
    if isinstance(x, dict):
        return parse(json.dumps(x))
    return load(str(x))


def check(system, max_safe_size=False):
    """Parameterized safety check. `system` is a Document, a path, or a dict."""
    return json.loads(_prepair._check(_doc(system), max_safe_size))


def deadlock(system, confirm=4):
    return json.loads(_prepair._deadlock(_doc(system), confirm))


def repair(system, mode="full", deadlock_check=None, max_iter=0, prefer=None):
    """Run the repair loop; returns the JSON report as a dict.

    prefer: decision-order text (one id per line, '-' prefix tries removal first).
    """
    return json.loads(_prepair._repair(_doc(system), mode, deadlock_check, max_iter, prefer or ""))
