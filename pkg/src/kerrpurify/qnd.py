"""The four cross-Kerr QND detector gadgets and the probe homodyne readout.

A Kerr medium couples one signal mode to one party's coherent probe:
n photons in the signal mode shift that probe's phase by n*theta and
leave the photons untouched.  Each detector gadget is a fixed stack of
Kerr couplings (plus an internal PBS for the two-Kerr variant) whose
end-to-end branch map is pinned down by the transformation table in
``branches``; the internal layout below is one realization of those
maps, not the only possible one.

Couplings per party (Alice shown; Bob is the mirror image):

  QND1  four Kerr media, no rerouting:
            (upper,H) -> theta     (lower,V) -> theta
            (upper,V) -> theta'    (lower,H) -> theta'
  QND2  PBS-ringed pair of media with theta = pi on the two modes whose
        joint occupancy is the polarization parity of the party's pair:
            (upper,H) -> pi        (lower,V) -> pi
  QND3  PBS merging the two ports first (V photons swap ports), then
        one medium per output port:
            upper output -> theta  (both polarizations)
            lower output -> theta' (both polarizations)
  QND4  parity-check layout with opposite shifts on the H components:
            (upper,H) -> +theta    (lower,H) -> -theta

An ideal homodyne readout resolves the exact probe phase (used with
QND1-QND3).  An X-quadrature readout cannot distinguish +phi from
-phi: the two tags fall in one outcome class, and postselecting that
class leaves a *mixture* of the +phi and -phi branch groups, never
their superposition.  That coarse-graining is what makes QND4 strictly
weaker than QND2 for keeping the odd-parity component.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .elements import pbs
from .fock import (
    ConfigError,
    EnsembleState,
    ModeLabel,
    OccupancyViolationError,
    Party,
    PhaseTag,
    Pol,
    PureState,
    Spatial,
    PI,
    ZERO_PHASE,
    probe_outcomes,
)


class Variant(Enum):
    QND1 = "qnd1"
    QND2 = "qnd2"
    QND3 = "qnd3"
    QND4 = "qnd4"


@dataclass(frozen=True)
class KerrMedium:
    """One cross-Kerr coupling: signal mode -> probe phase per photon."""

    signal_mode: ModeLabel
    phase_per_photon: PhaseTag
    probe_party: Party


def apply_kerr(state: PureState, medium: KerrMedium) -> PureState:
    """Shift the probe by n * phase for the n photons in the signal mode."""
    def shift(b):
        n = b.occupation(medium.signal_mode)
        return b.add_probe(medium.probe_party, medium.phase_per_photon * n) if n else b

    return state.map_branches(shift)


@dataclass(frozen=True)
class QndConfig:
    variant: Variant
    theta: PhaseTag
    theta_prime: PhaseTag | None = None

    def validate(self) -> "QndConfig":
        if self.variant in (Variant.QND1, Variant.QND3):
            if self.theta_prime is None:
                raise ConfigError(f"{self.variant.value} needs theta_prime")
            if self.theta == self.theta_prime:
                raise ConfigError("theta and theta_prime must differ mod 2*pi")
            classes = [
                ZERO_PHASE,
                self.theta,
                self.theta_prime,
                self.theta * 2,
                self.theta_prime * 2,
                self.theta + self.theta_prime,
            ]
            if len(set(classes)) != 6:
                raise ConfigError(
                    "phase classes {0, t, t', 2t, 2t', t+t'} must be pairwise distinct mod 2*pi"
                )
        elif self.variant == Variant.QND2:
            if self.theta != PI:
                raise ConfigError("qnd2 requires theta = pi exactly")
        elif self.variant == Variant.QND4:
            if self.theta == ZERO_PHASE or self.theta == PI:
                raise ConfigError("qnd4 requires theta with +theta != -theta mod 2*pi")
        return self


DEFAULT_THETA = PhaseTag(1, 4)
DEFAULT_THETA_PRIME = PhaseTag(3, 4)


def default_config(variant: Variant) -> QndConfig:
    if variant == Variant.QND2:
        return QndConfig(variant, PI).validate()
    if variant == Variant.QND4:
        return QndConfig(variant, DEFAULT_THETA).validate()
    return QndConfig(variant, DEFAULT_THETA, DEFAULT_THETA_PRIME).validate()


def _require_variant(cfg: QndConfig, variant: Variant) -> None:
    if cfg.variant != variant:
        raise ConfigError(f"config is for {cfg.variant.value}, not {variant.value}")
    cfg.validate()


def _require_one_photon_per_port(state: PureState) -> None:
    """Two single-photon pairs: one photon in each party's upper and lower port."""
    for b in state.branches:
        for party in Party:
            for spatial in (Spatial.UPPER, Spatial.LOWER):
                if b.photons(party=party, spatial=spatial) != 1:
                    raise OccupancyViolationError(
                        "detector expects one photon per spatial port of each party"
                    )


def _apply_media(state: PureState, media) -> PureState:
    for medium in media:
        state = apply_kerr(state, medium)
    return state


def qnd1(state: PureState, cfg: QndConfig) -> PureState:
    _require_variant(cfg, Variant.QND1)
    media = []
    for party in Party:
        media += [
            KerrMedium(ModeLabel(party, Spatial.UPPER, Pol.H), cfg.theta, party),
            KerrMedium(ModeLabel(party, Spatial.LOWER, Pol.V), cfg.theta, party),
            KerrMedium(ModeLabel(party, Spatial.UPPER, Pol.V), cfg.theta_prime, party),
            KerrMedium(ModeLabel(party, Spatial.LOWER, Pol.H), cfg.theta_prime, party),
        ]
    return _apply_media(state, media)


def qnd2(state: PureState, cfg: QndConfig) -> PureState:
    _require_variant(cfg, Variant.QND2)
    _require_one_photon_per_port(state)
    media = []
    for party in Party:
        media += [
            KerrMedium(ModeLabel(party, Spatial.UPPER, Pol.H), cfg.theta, party),
            KerrMedium(ModeLabel(party, Spatial.LOWER, Pol.V), cfg.theta, party),
        ]
    return _apply_media(state, media)


def qnd3(state: PureState, cfg: QndConfig) -> PureState:
    _require_variant(cfg, Variant.QND3)
    out = state
    for party in Party:
        out = pbs(out, party)
        out = _apply_media(out, [
            KerrMedium(ModeLabel(party, Spatial.UPPER, Pol.H), cfg.theta, party),
            KerrMedium(ModeLabel(party, Spatial.UPPER, Pol.V), cfg.theta, party),
            KerrMedium(ModeLabel(party, Spatial.LOWER, Pol.H), cfg.theta_prime, party),
            KerrMedium(ModeLabel(party, Spatial.LOWER, Pol.V), cfg.theta_prime, party),
        ])
    return out


def qnd4(state: PureState, cfg: QndConfig) -> PureState:
    _require_variant(cfg, Variant.QND4)
    _require_one_photon_per_port(state)
    media = []
    for party in Party:
        media += [
            KerrMedium(ModeLabel(party, Spatial.UPPER, Pol.H), cfg.theta, party),
            KerrMedium(ModeLabel(party, Spatial.LOWER, Pol.H), -cfg.theta, party),
        ]
    return _apply_media(state, media)


_DETECTORS = {
    Variant.QND1: qnd1,
    Variant.QND2: qnd2,
    Variant.QND3: qnd3,
    Variant.QND4: qnd4,
}


def apply_qnd(state: PureState, cfg: QndConfig) -> PureState:
    return _DETECTORS[cfg.variant](state, cfg)


class HomodyneModel(Enum):
    IDEAL = "ideal"
    MAGNITUDE_ONLY = "magnitude_only"


@dataclass(frozen=True)
class HomodyneOutcome:
    outcome: PhaseTag
    probability: float
    post_state: EnsembleState


def homodyne_x(state: PureState, party: Party,
               model: HomodyneModel = HomodyneModel.IDEAL) -> list:
    """Enumerate the homodyne outcome classes for one party's probe.

    IDEAL resolves the exact phase tag; the post-state of each outcome
    is pure.  MAGNITUDE_ONLY groups +phi with -phi; within one outcome
    class the branch groups with different exact tags decohere, so the
    post-state is an ensemble with one component per surviving tag.
    The measured probe register resets to 0 either way.
    """
    groups: dict[PhaseTag, dict[PhaseTag, list]] = {}
    for b in state.branches:
        tag = b.probe[party]
        cls = tag if model == HomodyneModel.IDEAL else tag.magnitude_class()
        groups.setdefault(cls, {}).setdefault(tag, []).append(b)

    outcomes = []
    for cls in sorted(groups, key=lambda t: t.frac):
        by_tag = groups[cls]
        cls_prob = sum(
            abs(b.amplitude) ** 2 for branches in by_tag.values() for b in branches
        )
        comps = []
        for tag in sorted(by_tag, key=lambda t: t.frac):
            comp = PureState.of(
                b.with_probe(party, ZERO_PHASE) for b in by_tag[tag]
            )
            w = comp.norm_squared() / cls_prob
            comps.append((w, comp.normalize()))
        outcomes.append(HomodyneOutcome(cls, cls_prob, EnsembleState.of(comps)))
    return outcomes


__all__ = [
    "Variant",
    "KerrMedium",
    "apply_kerr",
    "QndConfig",
    "default_config",
    "qnd1",
    "qnd2",
    "qnd3",
    "qnd4",
    "apply_qnd",
    "HomodyneModel",
    "HomodyneOutcome",
    "homodyne_x",
    "probe_outcomes",
]
