"""Shared fixtures and the acceptance-criteria terminal summary.

The continuation scans are the single most expensive shared input, so one
session-scoped fixture builds them for every model family and size and the
acceptance tests slice what they need.  A terminal-summary hook prints one
pass/fail line per numbered criterion, aggregating test functions that
share a criterion number.
"""

import re

import pytest

from iprep import models, rg

SCAN_MODELS = ("central_spin", "constant_spacing", "random_uniform")
SCAN_SIZES = tuple(range(3, 10))
RANDOM_SPEC_SEED = 42
SNAPSHOT_COUNT = 16


def make_spec(name, n_sites):
    """Model spec by family name; the random family gets a fixed seed."""
    if name == "random_uniform":
        return models.random_uniform(n_sites, RANDOM_SPEC_SEED)
    return models.MODEL_FACTORIES[name](n_sites)


@pytest.fixture(scope="session")
def scan_suite():
    """Continuation scans with evenly spaced snapshots, keyed (model, N)."""
    suite = {}
    for name in SCAN_MODELS:
        for n in SCAN_SIZES:
            spec = make_spec(name, n)
            g_target = rg.default_g_target(spec)
            couplings = [
                g_target * k / SNAPSHOT_COUNT
                for k in range(1, SNAPSHOT_COUNT + 1)
            ]
            scan = rg.continuation_scan(spec, snapshot_couplings=couplings)
            suite[name, n] = (spec, scan)
    return suite


CRITERION_LABELS = {
    1: "path-minimum gap scales like 1/N",
    2: "strong-coupling end gap and pair witness",
    3: "cross-sector magnetization bound",
    4: "weak-coupling gap certificate",
    5: "certified root-separation audit",
    6: "continuation matches dense joint spectra",
    7: "quasiparticle parent gap and integer spectrum",
    8: "cosine-charge Gram structure and block bound",
    9: "dispersion-minimum closed form",
    10: "phase-factor derivative closed forms",
    11: "dressing-equation limiting values",
    12: "sector-gap finite-size slopes",
    13: "swept preparation fidelity and step scaling",
    14: "module property spot checks",
}

_CRITERION_PATTERN = re.compile(r"test_criterion_(\d+)")
_criterion_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    _criterion_outcomes.clear()


def pytest_runtest_logreport(report):
    match = _CRITERION_PATTERN.search(report.nodeid)
    if not match:
        return
    number = int(match.group(1))
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criterion_outcomes.setdefault(number, []).append(report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criterion_outcomes):
        verdict = "PASS" if all(_criterion_outcomes[number]) else "FAIL"
        label = CRITERION_LABELS.get(number, "unlabeled")
        terminalreporter.write_line(
            f"criterion {number:02d} ({label}): {verdict}"
        )
