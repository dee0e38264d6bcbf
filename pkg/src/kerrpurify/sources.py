"""Photon-pair sources and the noise channels the protocol purifies.

A down-conversion source emits one pair into a superposition of the
upper and lower mode pairs (four creation terms, equal weight), or two
pairs.  The two-pair expansion below carries *pair-level* statistics:
each emitted pair behaves as an independent copy of the single-pair
superposition, so a doubled emission pattern weighs half of a crossed
one (4:2 in probability).  This is the weighting the closed-form
stage-1 fidelity accounting assumes, and it also makes bit-flip noise
independent per pair by construction.

Bit-flip noise acts on Bob's photon of a pair (convention; the mixed
states involved are symmetric under which side flips).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .elements import sigma_x
from .fock import (
    BranchState,
    EnsembleState,
    ModeLabel,
    Party,
    Pol,
    PureState,
    Spatial,
    create_photon,
    product_state,
)


@dataclass(frozen=True)
class PdcSourceParams:
    """Relative weights of one-pair and two-pair emission events."""

    p1: float
    p2: float

    def validate(self) -> "PdcSourceParams":
        if self.p1 < 0 or self.p2 < 0:
            raise ValueError("emission probabilities must be non-negative")
        if self.p1 + self.p2 > 1 + 1e-12:
            raise ValueError("p1 + p2 must not exceed 1")
        return self


@dataclass(frozen=True)
class NoiseParams:
    """f0: probability that a pair crosses the channel without a bit flip."""

    f0: float

    def validate(self) -> "NoiseParams":
        if not 0.0 <= self.f0 <= 1.0:
            raise ValueError("f0 must lie in [0, 1]")
        return self


def pair_emission_terms(flipped: bool = False) -> list:
    """The four creation terms of one emitted pair.

    Each term is (Alice mode, Bob mode); ``flipped`` applies the bit
    flip on Bob's photon.
    """
    terms = []
    for spatial in (Spatial.UPPER, Spatial.LOWER):
        for pol in (Pol.H, Pol.V):
            bob_pol = pol if not flipped else (Pol.V if pol == Pol.H else Pol.H)
            terms.append((
                ModeLabel(Party.ALICE, spatial, pol),
                ModeLabel(Party.BOB, spatial, bob_pol),
            ))
    return terms


def single_pair_state(flipped: bool = False) -> PureState:
    """Normalized one-pair emission (four branches, amplitude 1/2)."""
    branches = []
    for term in pair_emission_terms(flipped):
        s = PureState.vacuum()
        for m in term:
            s = create_photon(s, m)
        branches.extend(s.branches)
    return PureState.of(branches).normalize()


def pdc_emit(params: PdcSourceParams, order: int) -> PureState:
    """Normalized emission of the given order (1 or 2 pairs).

    Order 2 uses the pair-level weights described in the module
    docstring: crossed patterns carry amplitude 2, doubled patterns
    sqrt(2), before normalization.
    """
    params.validate()
    if order == 1:
        return single_pair_state()
    if order != 2:
        raise ValueError("emission order must be 1 or 2")
    terms = pair_emission_terms()
    branches = []
    for (i, t1), (j, t2) in combinations_with_replacement(list(enumerate(terms)), 2):
        occ: dict[ModeLabel, int] = {}
        for m in t1 + t2:
            occ[m] = occ.get(m, 0) + 1
        amp = 2.0 if i != j else math.sqrt(2.0)
        branches.append(BranchState.of(occ, amp))
    return PureState.of(branches).normalize()


def apply_bitflip_noise(state: PureState, params: NoiseParams) -> EnsembleState:
    """Channel acting on one pair: flip Bob's photon with probability 1 - f0."""
    params.validate()
    return EnsembleState.of([
        (params.f0, state),
        (1.0 - params.f0, sigma_x(state, Party.BOB)),
    ])


def independent_pair_noise(pair_states, params: NoiseParams) -> list:
    """Independent bit-flip noise on each pair of a multi-pair emission.

    Returns (weight, states, flips) triples covering all flip patterns
    with nonzero weight; weights multiply out to f0^k (1-f0)^(n-k).
    """
    params.validate()
    components = [(1.0, tuple(), tuple())]
    for s in pair_states:
        expanded = []
        for w, states, flips in components:
            for flip, wf in ((False, params.f0), (True, 1.0 - params.f0)):
                if wf == 0.0:
                    continue
                out = sigma_x(s, Party.BOB) if flip else s
                expanded.append((w * wf, states + (out,), flips + (flip,)))
        components = expanded
    return components


BELL_KINDS = ("phi+", "phi-", "psi+", "psi-")


def bell_pair(kind: str, spatial: Spatial = Spatial.UPPER) -> PureState:
    """One of the four Bell pairs on (Alice, spatial) x (Bob, spatial)."""
    if kind not in BELL_KINDS:
        raise ValueError(f"unknown Bell state {kind!r}")
    same_pol = kind.startswith("phi")
    sign = 1.0 if kind.endswith("+") else -1.0
    branches = []
    for pol, amp in ((Pol.H, 1.0), (Pol.V, sign)):
        bob_pol = pol if same_pol else (Pol.V if pol == Pol.H else Pol.H)
        s = PureState.vacuum()
        s = create_photon(s, ModeLabel(Party.ALICE, spatial, pol))
        s = create_photon(s, ModeLabel(Party.BOB, spatial, bob_pol))
        branches.extend(b.with_amplitude(b.amplitude * amp) for b in s.branches)
    return PureState.of(branches).normalize()


def two_pair_components(fidelity: float) -> list:
    """The four-component mixture of two pairs drawn from the same source.

    Each pair is phi+ with probability F and psi+ otherwise; the first
    pair sits on the upper ports, the second on the lower ports.
    Returns (weight, (kind1, kind2), joint state) triples.
    """
    if not 0.0 < fidelity <= 1.0:
        raise ValueError("fidelity must lie in (0, 1]")
    comps = []
    for kind1, w1 in (("phi+", fidelity), ("psi+", 1.0 - fidelity)):
        for kind2, w2 in (("phi+", fidelity), ("psi+", 1.0 - fidelity)):
            w = w1 * w2
            if w == 0.0:
                continue
            joint = product_state(
                bell_pair(kind1, Spatial.UPPER), bell_pair(kind2, Spatial.LOWER)
            )
            comps.append((w, (kind1, kind2), joint))
    return comps


def ideal_mixed_pairs(fidelity: float, n_pairs: int) -> EnsembleState:
    """Mixture F |phi+><phi+| + (1-F) |psi+><psi+|, for one or two pairs."""
    if n_pairs == 1:
        return EnsembleState.of([
            (fidelity, bell_pair("phi+", Spatial.UPPER)),
            (1.0 - fidelity, bell_pair("psi+", Spatial.UPPER)),
        ])
    if n_pairs != 2:
        raise ValueError("n_pairs must be 1 or 2")
    return EnsembleState.of(
        (w, joint) for w, _, joint in two_pair_components(fidelity)
    )
