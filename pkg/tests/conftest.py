"""Shared test configuration.

Registers a bounded hypothesis profile (the suites must stay inside a
two-minute budget) and prints one summary line per acceptance criterion
after the run, keyed off test names in test_acceptance.py.
"""

import os
import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "bounded",
    max_examples=int(os.environ.get("RIBBONKIT_HYPOTHESIS_EXAMPLES", "25")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("bounded")

CRITERIA = {
    1: "category FP dimension equals 2p^3 on both ring constructions",
    2: "ring isomorphism V[s] -> X[s,+], chi*V[s] -> X[s,-] from independent builds",
    3: "hexagon solutions in span{f, id} are exactly the four candidates, pairwise inverse",
    4: "standard-module braiding equals zeta^{1/2}*f + zeta^{-1/2}; intrinsic dim -(q+q^{-1})",
    5: "Jones-Wenzl: idempotent, hook-killing, signed closures, vanishing closure at n = p-1",
    6: "Mueger candidates of the triplet-side ring = {X[1,+]} with the named eigenvalues",
    7: "inverse quantum-side twist table matches triplet-side twist table under the label map",
    8: "weight-space phases reproduce -q^{-3/2} and q^{1/2}; squares match monodromy q^{-3}",
    9: "Grothendieck correspondences: label map, I'.I = F, projective image, singlet candidates",
    10: "property suites: associativity, functoriality, snake, Yang-Baxter, balancing, DSL round-trip",
}

_CRITERION_RE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(status, []):
            m = _CRITERION_RE.search(getattr(rep, "nodeid", ""))
            if m is None:
                continue
            num = int(m.group(1))
            # a single failed phase (setup/call) marks the criterion failed
            prev = outcomes.get(num)
            outcomes[num] = "FAIL" if status in ("failed", "error") else (prev or "PASS")
    if not outcomes:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for num in sorted(outcomes):
        desc = CRITERIA.get(num, "")
        terminalreporter.write_line(f"  [criterion {num:2d}] {outcomes[num]}  {desc}")
