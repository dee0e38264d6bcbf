import numpy as np
import pytest

from kerrpurify import (
    BranchState,
    ModeLabel,
    Party,
    PhaseTag,
    Pol,
    PureState,
    Spatial,
    ZERO_PHASE,
)

ALL_PORT_MODES = tuple(
    ModeLabel(p, s, pol)
    for p in Party
    for s in (Spatial.UPPER, Spatial.LOWER)
    for pol in Pol
)

PROBE_POOL = (
    ZERO_PHASE,
    PhaseTag(1, 4),
    PhaseTag(3, 4),
    PhaseTag(1, 2),
    PhaseTag(3, 2),
    PhaseTag(1),
)


def random_pure_state(rng, max_branches=4, max_photons=4, with_probe=True) -> PureState:
    """Random normalized state on the eight port modes."""
    while True:
        branches = []
        for _ in range(rng.integers(1, max_branches + 1)):
            n = int(rng.integers(0, max_photons + 1))
            occ = {}
            for _ in range(n):
                m = ALL_PORT_MODES[rng.integers(len(ALL_PORT_MODES))]
                occ[m] = occ.get(m, 0) + 1
            amp = complex(rng.normal(), rng.normal())
            if with_probe:
                probe = (
                    PROBE_POOL[rng.integers(len(PROBE_POOL))],
                    PROBE_POOL[rng.integers(len(PROBE_POOL))],
                )
            else:
                probe = (ZERO_PHASE, ZERO_PHASE)
            branches.append(BranchState.of(occ, amp, probe))
        state = PureState.of(branches)
        if state.norm_squared() > 1e-6:
            return state.normalize()


def assert_states_equal(actual: PureState, expected: PureState, tol=1e-10):
    a = {b.key(): b.amplitude for b in actual.branches}
    e = {b.key(): b.amplitude for b in expected.branches}
    assert set(a) == set(e), f"branch keys differ: {set(a) ^ set(e)}"
    for k in a:
        assert abs(a[k] - e[k]) <= tol, f"amplitude mismatch at {k}: {a[k]} vs {e[k]}"


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
