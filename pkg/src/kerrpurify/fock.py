"""Sparse multi-mode Fock states with exact probe-phase bookkeeping.

Core representation used by every other module:

- A state is a superposition of *branches*.  Each branch holds an
  occupation pattern (photon counts per optical mode), one complex
  amplitude, and one phase accumulator per party for that party's
  coherent probe beam.
- Probe phases are exact rationals of pi (``PhaseTag``).  Postselection
  compares phases for *equality*, so they must never pass through
  floating point.
- Optical modes are labeled by (party, spatial port, polarization);
  at most 12 distinct modes ever occur.

Amplitudes are ordinary complex floats: they are products of small
rationals and square roots of integers, so true zeros arise only from
exact cancellation and anything below ``PRUNE_TOL`` is round-off noise.

All values are immutable; operations return new states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Callable, Iterable, Mapping

PRUNE_TOL = 1e-12
NORM_TOL = 1e-10


class SimulationError(Exception):
    """Base class for simulator errors."""


class ZeroNormError(SimulationError):
    """State has no surviving branches (norm 0)."""


class OccupancyViolationError(SimulationError):
    """An operation's occupancy precondition is violated."""


class AmbiguousRoutingError(SimulationError):
    """A coupler input holds same-polarization photons in both spatial ports."""


class ConfigError(SimulationError):
    """Invalid or degenerate configuration."""


class Party(IntEnum):
    ALICE = 0
    BOB = 1


class Spatial(IntEnum):
    UPPER = 1
    LOWER = 2
    MERGED = 3


class Pol(IntEnum):
    H = 0
    V = 1


@dataclass(frozen=True, order=True)
class ModeLabel:
    """One optical mode: (party, spatial port, polarization)."""

    party: Party
    spatial: Spatial
    pol: Pol

    def __repr__(self) -> str:
        p = "ab"[self.party]
        s = {Spatial.UPPER: "1", Spatial.LOWER: "2", Spatial.MERGED: "m"}[self.spatial]
        return f"{p}{s}{self.pol.name}"


def mode(party: Party, spatial: Spatial, pol: Pol) -> ModeLabel:
    return ModeLabel(party, spatial, pol)


class PhaseTag:
    """A phase (value)*pi with value an exact rational in [0, 2).

    Arithmetic is exact and taken modulo 2*pi; equality of two tags is
    therefore a decidable, float-free comparison.  ``PhaseTag(3, 4)``
    is the phase 3*pi/4.
    """

    __slots__ = ("frac",)

    def __init__(self, numerator=0, denominator=1):
        object.__setattr__(self, "frac", Fraction(numerator, denominator) % 2)

    def __setattr__(self, name, value):
        raise AttributeError("PhaseTag is immutable")

    @property
    def value(self) -> Fraction:
        """Phase in units of pi, reduced, in [0, 2)."""
        return self.frac

    def __add__(self, other: "PhaseTag") -> "PhaseTag":
        return PhaseTag(self.frac + other.frac)

    def __neg__(self) -> "PhaseTag":
        return PhaseTag(-self.frac)

    def __sub__(self, other: "PhaseTag") -> "PhaseTag":
        return PhaseTag(self.frac - other.frac)

    def __mul__(self, n: int) -> "PhaseTag":
        return PhaseTag(self.frac * n)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, PhaseTag) and self.frac == other.frac

    def __lt__(self, other: "PhaseTag") -> bool:
        return self.frac < other.frac

    def __le__(self, other: "PhaseTag") -> bool:
        return self.frac <= other.frac

    def __hash__(self) -> int:
        return hash(("PhaseTag", self.frac))

    def is_zero(self) -> bool:
        return self.frac == 0

    def magnitude_class(self) -> "PhaseTag":
        """Canonical representative of the {+phi, -phi} pair.

        An X-quadrature readout cannot tell +phi from -phi; both map to
        the same class, represented by min(phi, 2*pi - phi).
        """
        neg = -self
        return self if self.frac <= neg.frac else neg

    def radians(self) -> float:
        return float(self.frac) * math.pi

    @classmethod
    def parse(cls, text: str) -> "PhaseTag":
        """Parse 'p/q' or 'p' as the phase (p/q)*pi."""
        return cls(Fraction(text.strip()))

    def __repr__(self) -> str:
        return f"PhaseTag({self.frac}*pi)"


ZERO_PHASE = PhaseTag(0)
PI = PhaseTag(1)

_NO_PROBE = (ZERO_PHASE, ZERO_PHASE)


def _canonical_occupations(occupations) -> tuple:
    if isinstance(occupations, Mapping):
        items = occupations.items()
    else:
        items = occupations
    kept = [(m, int(n)) for m, n in items if n != 0]
    for m, n in kept:
        if n < 0:
            raise OccupancyViolationError(f"negative occupation on {m}")
    return tuple(sorted(kept))


@dataclass(frozen=True)
class BranchState:
    """One coherent branch: occupation pattern, amplitude, probe phases.

    ``occupations`` is a sorted tuple of (mode, count) pairs with all
    counts > 0; ``probe`` is indexed by ``Party``.
    """

    occupations: tuple
    amplitude: complex
    probe: tuple = _NO_PROBE

    @staticmethod
    def of(occupations, amplitude, probe=_NO_PROBE) -> "BranchState":
        return BranchState(_canonical_occupations(occupations), complex(amplitude), tuple(probe))

    def key(self):
        return (self.occupations, self.probe)

    def sort_key(self):
        occ = tuple(((m.party, m.spatial, m.pol), n) for m, n in self.occupations)
        pr = tuple((t.frac.numerator, t.frac.denominator) for t in self.probe)
        return (occ, pr)

    def occupation(self, m: ModeLabel) -> int:
        for mm, n in self.occupations:
            if mm == m:
                return n
        return 0

    def total_photons(self) -> int:
        return sum(n for _, n in self.occupations)

    def photons(self, party=None, spatial=None, pol=None) -> int:
        """Count photons matching the given mode filters."""
        total = 0
        for m, n in self.occupations:
            if party is not None and m.party != party:
                continue
            if spatial is not None and m.spatial != spatial:
                continue
            if pol is not None and m.pol != pol:
                continue
            total += n
        return total

    def with_amplitude(self, amplitude) -> "BranchState":
        return BranchState(self.occupations, complex(amplitude), self.probe)

    def with_probe(self, party: Party, tag: PhaseTag) -> "BranchState":
        probe = list(self.probe)
        probe[party] = tag
        return BranchState(self.occupations, self.amplitude, tuple(probe))

    def add_probe(self, party: Party, tag: PhaseTag) -> "BranchState":
        return self.with_probe(party, self.probe[party] + tag)

    def map_modes(self, fn: Callable[[ModeLabel], ModeLabel]) -> "BranchState":
        """Relabel modes; counts landing on the same label add."""
        new: dict[ModeLabel, int] = {}
        for m, n in self.occupations:
            nm = fn(m)
            new[nm] = new.get(nm, 0) + n
        return BranchState(_canonical_occupations(new), self.amplitude, self.probe)


@dataclass(frozen=True)
class PureState:
    """Superposition of branches, kept in canonical (merged, sorted) form."""

    branches: tuple

    @staticmethod
    def of(branches: Iterable[BranchState]) -> "PureState":
        merged: dict = {}
        for b in branches:
            k = b.key()
            if k in merged:
                merged[k] = merged[k].with_amplitude(merged[k].amplitude + b.amplitude)
            else:
                merged[k] = b
        kept = [b for b in merged.values() if abs(b.amplitude) >= PRUNE_TOL]
        kept.sort(key=BranchState.sort_key)
        return PureState(tuple(kept))

    @staticmethod
    def vacuum() -> "PureState":
        return PureState((BranchState.of((), 1.0),))

    def norm_squared(self) -> float:
        return sum(abs(b.amplitude) ** 2 for b in self.branches)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def scale(self, factor) -> "PureState":
        return PureState.of(b.with_amplitude(b.amplitude * factor) for b in self.branches)

    def normalize(self) -> "PureState":
        n2 = self.norm_squared()
        if n2 <= PRUNE_TOL**2 or not self.branches:
            raise ZeroNormError("state has zero norm")
        return self.scale(1.0 / math.sqrt(n2))

    def map_branches(self, fn) -> "PureState":
        """Apply fn to each branch; fn may return one branch or a list."""
        out = []
        for b in self.branches:
            r = fn(b)
            if isinstance(r, BranchState):
                out.append(r)
            else:
                out.extend(r)
        return PureState.of(out)

    def photon_distribution(self) -> dict:
        """Probability mass on each total photon number."""
        dist: dict[int, float] = {}
        for b in self.branches:
            n = b.total_photons()
            dist[n] = dist.get(n, 0.0) + abs(b.amplitude) ** 2
        return dist

    def __len__(self) -> int:
        return len(self.branches)


def create_photon(state: PureState, m: ModeLabel) -> PureState:
    """Apply the creation operator for mode ``m`` to every branch.

    Bosonic convention: a branch with n photons already in the mode
    picks up a factor sqrt(n+1).  The result is NOT renormalized; the
    caller normalizes once a full source term has been assembled.
    """
    def bump(b: BranchState) -> BranchState:
        n = b.occupation(m)
        occ = dict(b.occupations)
        occ[m] = n + 1
        return BranchState.of(occ, b.amplitude * math.sqrt(n + 1), b.probe)

    return state.map_branches(bump)


def normalize(state: PureState) -> PureState:
    return state.normalize()


def product_state(a: PureState, b: PureState) -> PureState:
    """Tensor product of states living on disjoint mode sets.

    Probe phases add.  Raises if the two states share an occupied mode
    (a general bosonic product would need symmetrization there).
    """
    out = []
    for ba in a.branches:
        modes_a = {m for m, _ in ba.occupations}
        for bb in b.branches:
            if modes_a & {m for m, _ in bb.occupations}:
                raise OccupancyViolationError("product_state requires disjoint modes")
            occ = dict(ba.occupations)
            occ.update(bb.occupations)
            probe = tuple(ba.probe[p] + bb.probe[p] for p in Party)
            out.append(BranchState.of(occ, ba.amplitude * bb.amplitude, probe))
    return PureState.of(out)


def probe_outcomes(state: PureState, party: Party) -> dict:
    """Probability of each distinct probe phase for one party."""
    dist: dict[PhaseTag, float] = {}
    for b in state.branches:
        t = b.probe[party]
        dist[t] = dist.get(t, 0.0) + abs(b.amplitude) ** 2
    return dict(sorted(dist.items(), key=lambda kv: kv[0].frac))


def project_probe(state: PureState, party: Party, outcome: PhaseTag):
    """Project one party's probe register onto an exact phase value.

    Returns (probability, post-measurement state); the measured
    register resets to 0.  Phase comparison is exact, never float.
    """
    matching = [b for b in state.branches if b.probe[party] == outcome]
    prob = sum(abs(b.amplitude) ** 2 for b in matching)
    if not matching or prob <= PRUNE_TOL**2:
        raise ZeroNormError(f"probe outcome {outcome} has probability 0")
    post = PureState.of(b.with_probe(party, ZERO_PHASE) for b in matching).normalize()
    return prob, post


def inner(a: PureState, b: PureState) -> complex:
    """<b|a> over canonical branches (occupations and probes both label the basis)."""
    amps_b = {br.key(): br.amplitude for br in b.branches}
    total = 0.0 + 0.0j
    for br in a.branches:
        other = amps_b.get(br.key())
        if other is not None:
            total += other.conjugate() * br.amplitude
    return total


def overlap(a: PureState, b: PureState) -> float:
    """|<b|a>|^2."""
    return abs(inner(a, b)) ** 2


@dataclass(frozen=True)
class EnsembleState:
    """Weighted mixture of pure states."""

    components: tuple

    @staticmethod
    def of(pairs, check: bool = True) -> "EnsembleState":
        comps = tuple((float(w), s) for w, s in pairs if w > 0.0)
        if check:
            if any(w < 0 for w, _ in comps):
                raise ValueError("negative ensemble weight")
            total = sum(w for w, _ in comps)
            if abs(total - 1.0) > NORM_TOL:
                raise ValueError(f"ensemble weights sum to {total}, not 1")
        return EnsembleState(comps)

    @staticmethod
    def pure(state: PureState) -> "EnsembleState":
        return EnsembleState(((1.0, state),))

    def overlap(self, target: PureState) -> float:
        """<target| rho |target>."""
        return sum(w * overlap(s, target) for w, s in self.components)

    def purity(self) -> float:
        """tr(rho^2), from the Gram matrix of the components."""
        total = 0.0
        for wi, si in self.components:
            for wj, sj in self.components:
                total += wi * wj * abs(inner(si, sj)) ** 2
        return total

    def __len__(self) -> int:
        return len(self.components)
