"""Acceptance gate: every verification-suite check must pass at full size.

Runs the suite once per session and asserts each check separately, printing
one PASS/FAIL line per criterion (visible with `pytest -s` or on failure).
"""

import pytest

from padicgabor.verify import CHECKS, run_suite

_RESULTS = None


def suite_results():
    global _RESULTS
    if _RESULTS is None:
        _RESULTS = {r.name: r for r in run_suite(p_list=(2, 3), size="full")}
    return _RESULTS

CRITERIA = [
    "onb-gram-identity",            # Gram = identity, count = dim, tol 1e-12
    "tight-frame-constant",         # all eigenvalues at p**2, tol 1e-9
    "section-trichotomy",           # ONB / TightFrame(p) / Incomplete
    "section-density-one",          # section counts p**n, ratios exactly 1
    "product-lattice-density",      # ratios exactly p**2k at admissible scales
    "stft-energy-identity",         # ||V_g f||_2 = ||f|| ||g||, tol 1e-10
    "sample-sum-amalgam-bound",     # sampled energy <= N_0 * amalgam^2 + 1e-10
    "wiener-two-route-equality",    # sum route == integral route, exact floats
    "transform-unitarity",          # Plancherel + fast-vs-naive, tol 1e-12
    "dual-reconstruction",          # rel err 1e-8; dual bounds (1/B, 1/A)
    "repeated-point-bound-growth",  # B(N) >= N ||phi||^2, nondecreasing, 1e-9
    "separated-decomposition",      # exact multiset checks on random corpora
    "scale-propagation-bound",      # per-ball caps propagate, exact
    "automorphism-invariance",      # squared-map ratios equal row-by-row
    "frame-density-necessity",      # frames >= 1, Riesz bases exactly 1
]


def test_suite_covers_all_criteria():
    assert len(CHECKS) == len(CRITERIA) == 15
    assert set(suite_results()) == set(CRITERIA)


@pytest.mark.parametrize("name", CRITERIA)
def test_criterion(name):
    result = suite_results()[name]
    print(result.line())
    assert result.passed, result.line()
