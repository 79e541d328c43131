"""Shared helpers: every witness a test produces goes through ``roundtrip``."""

import json
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ramseyfin import cli  # noqa: E402
from ramseyfin.formats import witness_to_json  # noqa: E402
from ramseyfin.search import validate_witness  # noqa: E402

ROUNDTRIP = {"count": 0, "failures": []}
ACCEPTANCE = {}


def roundtrip(w, ctx, context_text, tmp_dir):
    """Check ``w`` with validate_witness and with the CLI verifier on its JSON form."""
    diag = []
    ok_lib = validate_witness(w, ctx, diag)
    path = os.path.join(str(tmp_dir), f"w{ROUNDTRIP['count']}.json")
    with open(path, "w") as fh:
        json.dump(witness_to_json(w, context_text), fh)
    out = _Sink()
    code = cli.run(["verify-witness", path], stdout=out, stderr=_Sink())
    ok_cli = code == 0 and json.loads(out.text)["result"]["valid"]
    ROUNDTRIP["count"] += 1
    if not (ok_lib and ok_cli):
        ROUNDTRIP["failures"].append((w, diag))
    return ok_lib and ok_cli


class _Sink:
    def __init__(self):
        self.text = ""

    def write(self, s):
        self.text += s


def run_cli(argv):
    """Run the CLI in-process; returns (exit code, parsed report or None, stderr text)."""
    out, err = _Sink(), _Sink()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, (json.loads(out.text) if out.text.strip() else None), err.text


@pytest.fixture
def rt(tmp_path):
    def check(w, ctx, context_text):
        assert roundtrip(w, ctx, context_text, tmp_path), f"witness failed round-trip: {w}"
    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
    terminalreporter.write_line(
        f"witness round-trips this session: {ROUNDTRIP['count']}, failures: {len(ROUNDTRIP['failures'])}")
