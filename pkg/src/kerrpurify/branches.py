"""Reference branch transformations for the four QND detector gadgets.

Each case pins down the exact normalized output (occupation patterns,
amplitudes, probe phase tags) that a detector must produce for one
physically meaningful input class: single emitted pairs with and
without a transmission bit flip, double emissions with zero, one or
two flipped pairs, the four two-pair Bell products through the
parity-check detector, and the opposite-shift parity layout.

States are written as sums of products of creation-term groups; the
builder expands the polynomial and applies creation operators with
bosonic factors, so input and expectation share one convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .fock import (
    BranchState,
    ModeLabel,
    Party,
    PhaseTag,
    Pol,
    PureState,
    Spatial,
    ZERO_PHASE,
    PI,
    create_photon,
)
from .qnd import QndConfig, Variant, apply_qnd, default_config

A1H = ModeLabel(Party.ALICE, Spatial.UPPER, Pol.H)
A1V = ModeLabel(Party.ALICE, Spatial.UPPER, Pol.V)
A2H = ModeLabel(Party.ALICE, Spatial.LOWER, Pol.H)
A2V = ModeLabel(Party.ALICE, Spatial.LOWER, Pol.V)
B1H = ModeLabel(Party.BOB, Spatial.UPPER, Pol.H)
B1V = ModeLabel(Party.BOB, Spatial.UPPER, Pol.V)
B2H = ModeLabel(Party.BOB, Spatial.LOWER, Pol.H)
B2V = ModeLabel(Party.BOB, Spatial.LOWER, Pol.V)

# one-pair creation terms: clean (U*) and with Bob's photon flipped (F*)
U1, U2, U3, U4 = (A1H, B1H), (A1V, B1V), (A2H, B2H), (A2V, B2V)
F1, F2, F3, F4 = (A1V, B1H), (A1H, B1V), (A2V, B2H), (A2H, B2V)
CLEAN = (U1, U2, U3, U4)
FLIPPED = (F1, F2, F3, F4)

# output-port terms of the two-Kerr detector acting on a flipped pair
G1, G2, G3, G4 = (A1V, B2H), (A1H, B2V), (A2V, B1H), (A2H, B1V)


def _pol4(p1, p2, p3, p4):
    """Four single photons in order (a1, b1, a2, b2)."""
    return (
        ModeLabel(Party.ALICE, Spatial.UPPER, p1),
        ModeLabel(Party.BOB, Spatial.UPPER, p2),
        ModeLabel(Party.ALICE, Spatial.LOWER, p3),
        ModeLabel(Party.BOB, Spatial.LOWER, p4),
    )


H, V = Pol.H, Pol.V
HHHH = _pol4(H, H, H, H)
HHVV = _pol4(H, H, V, V)
VVHH = _pol4(V, V, H, H)
VVVV = _pol4(V, V, V, V)
HHHV = _pol4(H, H, H, V)
HHVH = _pol4(H, H, V, H)
VVHV = _pol4(V, V, H, V)
VVVH = _pol4(V, V, V, H)
VHHH = _pol4(V, H, H, H)
VHVV = _pol4(V, H, V, V)
HVHH = _pol4(H, V, H, H)
HVVV = _pol4(H, V, V, V)
VHVH = _pol4(V, H, V, H)
VHHV = _pol4(V, H, H, V)
HVVH = _pol4(H, V, V, H)
HVHV = _pol4(H, V, H, V)


def operator_state(entries) -> PureState:
    """Build sum_k coeff_k * prod(group sums) |0>, normalized.

    entries: (coeff, groups[, (tag_a, tag_b)]) with groups a sequence
    of term lists; every term is a tuple of modes to create.
    """
    branches = []
    for entry in entries:
        coeff, groups = entry[0], entry[1]
        probe = entry[2] if len(entry) > 2 else (ZERO_PHASE, ZERO_PHASE)
        for combo in iproduct(*groups):
            s = PureState((BranchState.of((), coeff, probe),))
            for term in combo:
                for m in term:
                    s = create_photon(s, m)
            branches.extend(s.branches)
    return PureState.of(branches).normalize()


def _tags(cfg: QndConfig):
    t = cfg.theta
    tp = cfg.theta_prime if cfg.theta_prime is not None else ZERO_PHASE
    return {
        "0": ZERO_PHASE,
        "pi": PI,
        "t": t,
        "tp": tp,
        "2t": t * 2,
        "2tp": tp * 2,
        "t+tp": t + tp,
        "-t": -t,
    }


@dataclass(frozen=True)
class BranchCase:
    case_id: str
    variant: Variant
    description: str
    input_entries: tuple
    expected_entries: tuple  # (coeff, groups, (tag_recipe_a, tag_recipe_b))

    def input_state(self) -> PureState:
        return operator_state(self.input_entries)

    def expected_state(self, cfg: QndConfig) -> PureState:
        tags = _tags(cfg)
        entries = [
            (coeff, groups, (tags[ra], tags[rb]))
            for coeff, groups, (ra, rb) in self.expected_entries
        ]
        return operator_state(entries)


BRANCH_CASES = (
    BranchCase(
        "qnd1-single-clean", Variant.QND1,
        "one emitted pair, no errors: equal shifts, spatial classes split",
        ((1, (CLEAN,)),),
        (
            (1, ((U1, U4),), ("t", "t")),
            (1, ((U2, U3),), ("tp", "tp")),
        ),
    ),
    BranchCase(
        "qnd1-single-flipped", Variant.QND1,
        "one emitted pair with a bit flip: the parties read different shifts",
        ((1, (FLIPPED,)),),
        (
            (1, ((F1, F4),), ("tp", "t")),
            (1, ((F2, F3),), ("t", "tp")),
        ),
    ),
    BranchCase(
        "qnd1-double-clean", Variant.QND1,
        "double emission, no errors: equal shifts 2t, 2t' or t+t'",
        ((1, (CLEAN, CLEAN)),),
        (
            (1, ((U1, U4), (U1, U4)), ("2t", "2t")),
            (1, ((U2, U3), (U2, U3)), ("2tp", "2tp")),
            (2, ((U1, U4), (U2, U3)), ("t+tp", "t+tp")),
        ),
    ),
    BranchCase(
        "qnd1-double-one-flip", Variant.QND1,
        "double emission, one pair flipped: no branch with equal shifts",
        ((1, (CLEAN, FLIPPED)),),
        (
            (1, ((U1, U4), (F1, F4)), ("t+tp", "2t")),
            (1, ((U1, U4), (F2, F3)), ("2t", "t+tp")),
            (1, ((U2, U3), (F1, F4)), ("2tp", "t+tp")),
            (1, ((U2, U3), (F2, F3)), ("t+tp", "2tp")),
        ),
    ),
    BranchCase(
        "qnd1-double-two-flips", Variant.QND1,
        "double emission, both pairs flipped: t+t' branch survives the keep rule",
        ((1, (FLIPPED, FLIPPED)),),
        (
            (1, ((F2, F3), (F2, F3)), ("2t", "2tp")),
            (1, ((F1, F4), (F1, F4)), ("2tp", "2t")),
            (2, ((F1, F4), (F2, F3)), ("t+tp", "t+tp")),
        ),
    ),
    BranchCase(
        "qnd2-phi-phi", Variant.QND2,
        "phi+ x phi+ through the parity gadget: equal shifts pi,pi or 0,0",
        ((1, ((HHHH, HHVV, VVHH, VVVV),)),),
        (
            (1, ((HHHH, VVVV),), ("pi", "pi")),
            (1, ((HHVV, VVHH),), ("0", "0")),
        ),
    ),
    BranchCase(
        "qnd2-phi-psi", Variant.QND2,
        "phi+ x psi+: the parties never read equal shifts",
        ((1, ((HHHV, HHVH, VVHV, VVVH),)),),
        (
            (1, ((HHVH, VVHV),), ("0", "pi")),
            (1, ((HHHV, VVVH),), ("pi", "0")),
        ),
    ),
    BranchCase(
        "qnd2-psi-phi", Variant.QND2,
        "psi+ x phi+: the parties never read equal shifts",
        ((1, ((VHHH, VHVV, HVHH, HVVV),)),),
        (
            (1, ((VHHH, HVVV),), ("0", "pi")),
            (1, ((VHVV, HVHH),), ("pi", "0")),
        ),
    ),
    BranchCase(
        "qnd2-psi-psi", Variant.QND2,
        "psi+ x psi+: equal shifts, kept and indistinguishable from no-error",
        ((1, ((VHVH, VHHV, HVVH, HVHV),)),),
        (
            (1, ((VHVH, HVHV),), ("pi", "pi")),
            (1, ((VHHV, HVVH),), ("0", "0")),
        ),
    ),
    BranchCase(
        "qnd3-single-clean", Variant.QND3,
        "one pair, no errors, two-Kerr detector: equal shifts per output port",
        ((1, (CLEAN,)),),
        (
            (1, ((U1, U2),), ("t", "t")),
            (1, ((U3, U4),), ("tp", "tp")),
        ),
    ),
    BranchCase(
        "qnd3-single-flipped", Variant.QND3,
        "one flipped pair, two-Kerr detector: different shifts, crossed ports",
        ((1, (FLIPPED,)),),
        (
            (1, ((G1, G2),), ("t", "tp")),
            (1, ((G3, G4),), ("tp", "t")),
        ),
    ),
    BranchCase(
        "qnd3-double-clean", Variant.QND3,
        "double emission, no errors, two-Kerr detector: keep the t+t' class",
        ((1, (CLEAN, CLEAN)),),
        (
            (1, ((U1, U2), (U1, U2)), ("2t", "2t")),
            (1, ((U3, U4), (U3, U4)), ("2tp", "2tp")),
            (2, ((U1, U2), (U3, U4)), ("t+tp", "t+tp")),
        ),
    ),
    BranchCase(
        "qnd3-double-two-flips", Variant.QND3,
        "double emission, both pairs flipped, two-Kerr detector",
        ((1, (FLIPPED, FLIPPED)),),
        (
            (1, ((G3, G4), (G3, G4)), ("2tp", "2t")),
            (1, ((G1, G2), (G1, G2)), ("2t", "2tp")),
            (2, ((G1, G2), (G3, G4)), ("t+tp", "t+tp")),
        ),
    ),
    BranchCase(
        "qnd4-two-pair-parity", Variant.QND4,
        "opposite-shift parity layout: even parity at 0, odd split into +t / -t",
        ((1, ((HHHH, VVVV, HHVV, VVHH),)),),
        (
            (1, ((HHHH, VVVV),), ("0", "0")),
            (1, ((HHVV,),), ("t", "t")),
            (1, ((VVHH,),), ("-t", "-t")),
        ),
    ),
)

CASE_IDS = tuple(c.case_id for c in BRANCH_CASES)


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    description: str
    passed: bool
    detail: str = ""


def compare_states(actual: PureState, expected: PureState, tol: float = 1e-10) -> str:
    """Return '' if equal branch-by-branch, else a description of the first mismatch."""
    a = {b.key(): b.amplitude for b in actual.branches}
    e = {b.key(): b.amplitude for b in expected.branches}
    for key in sorted(set(a) | set(e), key=lambda k: (str(k[0]), str(k[1]))):
        occ, probe = key
        label = f"branch {dict(occ)} probes ({probe[0]}, {probe[1]})"
        if key not in a:
            return f"missing {label} (expected amplitude {e[key]:.6g})"
        if key not in e:
            return f"unexpected {label} (amplitude {a[key]:.6g})"
        if abs(a[key] - e[key]) > tol:
            return f"{label}: amplitude {a[key]:.12g}, expected {e[key]:.12g}"
    return ""


def run_branch_case(case: BranchCase, cfg: QndConfig | None = None) -> CaseResult:
    cfg = (cfg or default_config(case.variant)).validate()
    actual = apply_qnd(case.input_state(), cfg)
    detail = compare_states(actual, case.expected_state(cfg))
    return CaseResult(case.case_id, case.description, detail == "", detail)


def run_branch_suite(theta: PhaseTag | None = None,
                     theta_prime: PhaseTag | None = None,
                     only=None) -> list:
    """Run the transformation suite, optionally restricted to some case ids.

    theta/theta_prime override the defaults of the one- and two-Kerr
    detectors (the parity gadget keeps its fixed pi, the opposite-shift
    layout uses theta).
    """
    if only:
        unknown = set(only) - set(CASE_IDS)
        if unknown:
            raise ValueError(f"unknown case ids: {sorted(unknown)}")
    results = []
    for case in BRANCH_CASES:
        if only and case.case_id not in only:
            continue
        base = default_config(case.variant)
        if case.variant == Variant.QND2:
            cfg = base
        elif case.variant == Variant.QND4:
            cfg = QndConfig(Variant.QND4, theta or base.theta).validate()
        else:
            cfg = QndConfig(
                case.variant,
                theta or base.theta,
                theta_prime or base.theta_prime,
            ).validate()
        results.append(run_branch_case(case, cfg))
    return results
