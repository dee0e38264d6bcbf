"""Passive linear optics and local unitaries.

Polarizing beam splitter (H transmits, V reflects), the two-port
coupler that folds a party's spatial modes into one output, bit- and
phase-flips, diagonal-basis measurement, and the bilateral 45-degree
rotation that swaps phase-flip errors into bit-flip errors.

Everything here is a pure function on immutable states; photon number
and norm are preserved (measurements preserve summed probability).
"""

from __future__ import annotations

import math
from itertools import permutations

from .fock import (
    AmbiguousRoutingError,
    BranchState,
    ModeLabel,
    OccupancyViolationError,
    Party,
    Pol,
    PureState,
    Spatial,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def pbs(state: PureState, party: Party, in_upper: Spatial = Spatial.UPPER,
        in_lower: Spatial = Spatial.LOWER) -> PureState:
    """Polarizing beam splitter on one party's two spatial ports.

    H-polarized photons keep their port, V-polarized photons swap
    ports.  Applying the same PBS twice is the identity.
    """
    if in_upper == in_lower:
        raise ValueError("PBS needs two distinct spatial ports")

    def route(m: ModeLabel) -> ModeLabel:
        if m.party != party or m.pol != Pol.V:
            return m
        if m.spatial == in_upper:
            return ModeLabel(party, in_lower, Pol.V)
        if m.spatial == in_lower:
            return ModeLabel(party, in_upper, Pol.V)
        return m

    return state.map_branches(lambda b: b.map_modes(route))


def coupler(state: PureState, party: Party) -> PureState:
    """Fold a party's spatial modes into the single merged output port.

    By protocol construction the preceding homodyne outcome already
    fixed which spatial port each polarization occupies, so the merge
    is deterministic.  A branch holding same-polarization photons in
    two different ports has no well-defined routing and signals a
    pipeline bug upstream.
    """
    def merge(b: BranchState) -> BranchState:
        for polarization in Pol:
            occupied = {
                m.spatial
                for m, n in b.occupations
                if m.party == party and m.pol == polarization and n > 0
            }
            if len(occupied - {Spatial.MERGED}) > 1:
                raise AmbiguousRoutingError(
                    f"{party.name}: {polarization.name} photons in both spatial ports"
                )
        return b.map_modes(
            lambda m: ModeLabel(party, Spatial.MERGED, m.pol) if m.party == party else m
        )

    return state.map_branches(merge)


def sigma_x(state: PureState, party: Party, spatials=None) -> PureState:
    """Bit flip: swap H and V occupations for one party's photons."""
    targets = set(spatials) if spatials is not None else set(Spatial)

    def flip(m: ModeLabel) -> ModeLabel:
        if m.party == party and m.spatial in targets:
            return ModeLabel(m.party, m.spatial, Pol.V if m.pol == Pol.H else Pol.H)
        return m

    return state.map_branches(lambda b: b.map_modes(flip))


def sigma_z(state: PureState, party: Party, spatials=None) -> PureState:
    """Phase flip: each V photon of the party contributes a factor -1."""
    targets = set(spatials) if spatials is not None else set(Spatial)

    def phase(b: BranchState) -> BranchState:
        n_v = sum(
            n for m, n in b.occupations
            if m.party == party and m.spatial in targets and m.pol == Pol.V
        )
        return b.with_amplitude(b.amplitude * (-1) ** n_v)

    return state.map_branches(phase)


def diagonal_outcomes(state: PureState, party: Party, spatial: Spatial) -> dict:
    """Measure the single photon at (party, spatial) in the |+/-> basis.

    Returns {'+': (prob, post), '-': (prob, post)}; the measured photon
    is absorbed.  Every branch must hold exactly one photon in the
    designated port.
    """
    h = ModeLabel(party, spatial, Pol.H)
    v = ModeLabel(party, spatial, Pol.V)
    for b in state.branches:
        if b.occupation(h) + b.occupation(v) != 1:
            raise OccupancyViolationError(
                f"diagonal measurement at {party.name}/{spatial.name} needs exactly one photon"
            )

    results = {}
    for outcome, v_coeff in (("+", INV_SQRT2), ("-", -INV_SQRT2)):
        projected = []
        for b in state.branches:
            if b.occupation(h) == 1:
                coeff = INV_SQRT2
                removed = h
            else:
                coeff = v_coeff
                removed = v
            occ = dict(b.occupations)
            occ[removed] -= 1
            projected.append(BranchState.of(occ, b.amplitude * coeff, b.probe))
        post = PureState.of(projected)
        prob = post.norm_squared()
        results[outcome] = (prob, post.normalize() if prob > 1e-24 else post)
    return results


def measure_diagonal(state: PureState, party: Party, spatial: Spatial, outcome: str):
    """Project onto one diagonal-basis outcome ('+' or '-')."""
    prob, post = diagonal_outcomes(state, party, spatial)[outcome]
    return prob, post


def apply_mode_pair_unitary(state: PureState, mode_x: ModeLabel, mode_y: ModeLabel,
                            u) -> PureState:
    """Apply a 2x2 unitary to a pair of modes at the creation-operator level.

    x+ -> u[0][0] x+ + u[1][0] y+ ,  y+ -> u[0][1] x+ + u[1][1] y+ .
    Handles multiple occupation via binomial expansion with bosonic
    normalization factors.
    """
    def transform(b: BranchState):
        nx = b.occupation(mode_x)
        ny = b.occupation(mode_y)
        if nx == 0 and ny == 0:
            return [b]
        base = dict(b.occupations)
        base.pop(mode_x, None)
        base.pop(mode_y, None)
        # monomial coefficient of the normalized input state
        c0 = b.amplitude / math.sqrt(math.factorial(nx) * math.factorial(ny))
        out = []
        for j in range(nx + 1):
            for k in range(ny + 1):
                coeff = (
                    math.comb(nx, j) * (u[0][0] ** j) * (u[1][0] ** (nx - j))
                    * math.comb(ny, k) * (u[0][1] ** k) * (u[1][1] ** (ny - k))
                )
                n_new_x = j + k
                n_new_y = (nx - j) + (ny - k)
                occ = dict(base)
                if n_new_x:
                    occ[mode_x] = occ.get(mode_x, 0) + n_new_x
                if n_new_y:
                    occ[mode_y] = occ.get(mode_y, 0) + n_new_y
                amp = c0 * coeff * math.sqrt(
                    math.factorial(n_new_x) * math.factorial(n_new_y)
                )
                out.append(BranchState.of(occ, amp, b.probe))
        return out

    return state.map_branches(transform)


_ROT45 = ((INV_SQRT2, INV_SQRT2), (INV_SQRT2, -INV_SQRT2))


def bilateral_rotation(state: PureState) -> PureState:
    """45-degree polarization rotation on every photon of both parties.

    H -> (H+V)/sqrt2, V -> (H-V)/sqrt2.  Self-inverse; conjugates a
    phase flip into a bit flip.
    """
    out = state
    for party in Party:
        for spatial in Spatial:
            out = apply_mode_pair_unitary(
                out,
                ModeLabel(party, spatial, Pol.H),
                ModeLabel(party, spatial, Pol.V),
                _ROT45,
            )
    return out


def permanent(matrix) -> complex:
    """Permanent by permutation sum; only used for small oracle checks."""
    n = len(matrix)
    total = 0.0 + 0.0j
    for perm in permutations(range(n)):
        prod = 1.0 + 0.0j
        for i, j in enumerate(perm):
            prod *= matrix[i][j]
        total += prod
    return total
