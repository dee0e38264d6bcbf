"""End-to-end purification pipelines, exact enumeration and Monte Carlo.

Stage 1 (down-conversion source + one- or two-Kerr detector): an
emission event is one pair with relative weight p1/(p1+p2), else two
pairs.  Each pair independently suffers a bit flip with probability
1-f0, passes the detector, and both parties compare homodyne readings.
Single-pair events are always kept (Alice flips her photon when the
readings differ).  Double emissions are kept only when both parties
read theta+theta', the class whose photons exit one per port; those
events yield two pairs.  Double emissions where both parties read the
same doubled shift (2*theta or 2*theta') leave both pairs bunched at
one port: they are tallied separately (``kept_same_port``) and excluded
from the headline fidelity, which then matches the closed form

    (p1 + p2 f0^2 / 2) / (p1 + p2 [f0^2 + (1-f0)^2] / 2)

exactly.  Metrics under the convention that also counts the bunched
events appear in the report extras.

Stage 2 (two pairs from an ideal source + the pi parity detector):
keep when both parties read the same shift, flip the upper pair on the
0,0 outcome, measure the lower pair diagonally, phase-correct on
unequal outcomes.  Kept fidelity follows F^2 / (F^2 + (1-F)^2) with
yield F^2 + (1-F)^2.  The PBS baseline runs the same mixture through
polarizing beam splitters and keeps four-port coincidences only, which
halves the yield at identical fidelity.

Monte Carlo trials draw their randomness from a counter-based
generator keyed by (seed, trial index): trial t always consumes the
same words no matter how trials are batched, so parallel and serial
runs aggregate to identical counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import product as iproduct

import numpy as np

from .elements import coupler, diagonal_outcomes, pbs, sigma_x, sigma_z
from .fock import (
    ConfigError,
    Party,
    PhaseTag,
    PureState,
    SimulationError,
    Spatial,
    ZERO_PHASE,
    overlap,
    probe_outcomes,
    project_probe,
)
from .qnd import QndConfig, Variant, apply_qnd, default_config
from .sources import (
    NoiseParams,
    PdcSourceParams,
    bell_pair,
    single_pair_state,
    two_pair_components,
)

PHI_PLUS_MERGED = bell_pair("phi+", Spatial.MERGED)
PSI_PLUS_MERGED = bell_pair("psi+", Spatial.MERGED)
PHI_PLUS_UPPER = bell_pair("phi+", Spatial.UPPER)
PSI_PLUS_UPPER = bell_pair("psi+", Spatial.UPPER)

_FID_TOL = 1e-9


class Verdict(Enum):
    KEPT_CORRECT = "kept_correct"
    KEPT_ERRONEOUS = "kept_erroneous"
    DISCARDED = "discarded"


COUNT_KEYS = ("kept_correct", "kept_erroneous", "kept_same_port", "discarded")


@dataclass(frozen=True)
class OutcomeRecord:
    """One enumerated leaf of a pipeline: readings, verdict, kept state."""

    probe_alice: PhaseTag | None
    probe_bob: PhaseTag | None
    verdict: Verdict
    final_state: PureState | None
    weight: float
    fidelity: float | None = None
    order: int | None = None
    kept_pairs: int = 0
    same_port_keep: bool = False

    def bucket(self) -> str:
        if self.same_port_keep:
            return "kept_same_port"
        return self.verdict.value


@dataclass
class RunReport:
    """Summary statistics of one pipeline run (exact ratios or MC estimates)."""

    pipeline: str
    mode: str
    fidelity: float | None
    yield_fraction: float | None
    counts: dict
    trials: int | None = None
    seed: int | None = None
    fidelity_stderr: float | None = None
    yield_stderr: float | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "pipeline": self.pipeline,
            "mode": self.mode,
            "fidelity": self.fidelity,
            "yield": self.yield_fraction,
            "counts": dict(self.counts),
            "trials": self.trials,
            "seed": self.seed,
            "fidelity_stderr": self.fidelity_stderr,
            "yield_stderr": self.yield_stderr,
            "extras": dict(self.extras),
        }


def stage1_fidelity_closed_form(p1: float, p2: float, f0: float) -> float:
    """Kept-pair fidelity of stage 1 as a closed form."""
    denom = p1 + 0.5 * p2 * (f0**2 + (1.0 - f0) ** 2)
    if denom == 0.0:
        raise ZeroDivisionError("p1 and p2 cannot both be zero")
    return (p1 + 0.5 * p2 * f0**2) / denom


def stage2_fidelity_map(fidelity: float) -> float:
    """One round of the stage-2 fidelity map."""
    return fidelity**2 / (fidelity**2 + (1.0 - fidelity) ** 2)


def stage2_yield(fidelity: float) -> float:
    """Fraction of two-pair groups kept by one stage-2 round."""
    return fidelity**2 + (1.0 - fidelity) ** 2


@dataclass(frozen=True)
class RoundRow:
    round: int
    fidelity: float
    round_yield: float
    cumulative_yield: float


def stage2_iterate(f0: float, rounds: int) -> list:
    """Iterate the stage-2 map; fidelity increases monotonically toward 1.

    Cumulative yield is per initial two-pair group: the first round's
    own yield, then multiplied by yield/2 for every later round (each
    round consumes pairs two at a time).
    """
    if not 0.5 < f0 <= 1.0:
        raise ConfigError("iteration requires fidelity in (1/2, 1]")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    rows = []
    fid = f0
    cumulative = 1.0
    for k in range(1, rounds + 1):
        y = stage2_yield(fid)
        fid = stage2_fidelity_map(fid)
        cumulative = y if k == 1 else cumulative * y / 2.0
        rows.append(RoundRow(k, fid, y, cumulative))
    return rows


# ---------------------------------------------------------------------------
# stage 1: exact enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairLeaf:
    """One homodyne outcome of a single pair run through the detector."""

    probability: float
    tag_alice: PhaseTag
    tag_bob: PhaseTag
    flipped: bool
    state: PureState  # post-measurement, probes cleared


def single_pair_leaves(variant: Variant, cfg: QndConfig, flipped: bool) -> tuple:
    state = apply_qnd(single_pair_state(flipped), cfg)
    leaves = []
    for tag_a in probe_outcomes(state, Party.ALICE):
        p_a, post_a = project_probe(state, Party.ALICE, tag_a)
        for tag_b in probe_outcomes(post_a, Party.BOB):
            p_b, post = project_probe(post_a, Party.BOB, tag_b)
            leaves.append(PairLeaf(p_a * p_b, tag_a, tag_b, flipped, post))
    leaves.sort(key=lambda l: (l.tag_alice.frac, l.tag_bob.frac))
    return tuple(leaves)


def _couple_pair(state: PureState) -> PureState:
    return coupler(coupler(state, Party.ALICE), Party.BOB)


def _verdict(fid_phi: float, fid_psi: float) -> Verdict:
    if fid_phi > 1.0 - _FID_TOL:
        return Verdict.KEPT_CORRECT
    if fid_psi > 1.0 - _FID_TOL:
        return Verdict.KEPT_ERRONEOUS
    raise SimulationError(
        f"kept pair is neither phi+ nor psi+ (overlaps {fid_phi:.3g}, {fid_psi:.3g})"
    )


def _order2_outcome(l1: PairLeaf, l2: PairLeaf, keep_tag: PhaseTag):
    """Classify a joint double-emission outcome from its two pair leaves.

    Returns (bucket, fidelity, final_pair_state, tag_alice, tag_bob);
    fidelity/state are None unless the event is kept under the
    headline rule.
    """
    tag_a = l1.tag_alice + l2.tag_alice
    tag_b = l1.tag_bob + l2.tag_bob
    if tag_a != tag_b:
        return "discarded", None, None, tag_a, tag_b
    if tag_a != keep_tag:
        return "kept_same_port", None, None, tag_a, tag_b
    finals = [_couple_pair(l.state) for l in (l1, l2)]
    fids = [overlap(f, PHI_PLUS_MERGED) for f in finals]
    verdicts = [_verdict(f, overlap(final, PSI_PLUS_MERGED))
                for f, final in zip(fids, finals)]
    if verdicts[0] != verdicts[1]:
        raise SimulationError("the two kept pairs disagree on correctness")
    return verdicts[0].value, fids[0], finals[0], tag_a, tag_b


def _stage1_config(variant, cfg) -> tuple:
    if isinstance(variant, str):
        variant = Variant(variant)
    if variant not in (Variant.QND1, Variant.QND3):
        raise ConfigError("stage 1 runs with the qnd1 or qnd3 detector")
    cfg = cfg or default_config(variant)
    if cfg.variant != variant:
        raise ConfigError("config variant does not match the requested detector")
    cfg.validate()
    return variant, cfg


def stage1_records(src: PdcSourceParams, noise: NoiseParams,
                   variant=Variant.QND1, cfg: QndConfig | None = None) -> list:
    """Exhaustive outcome enumeration of one stage-1 emission event."""
    variant, cfg = _stage1_config(variant, cfg)
    src.validate()
    noise.validate()
    total = src.p1 + src.p2
    if total <= 0:
        raise ConfigError("p1 + p2 must be positive")
    w1, w2 = src.p1 / total, src.p2 / total
    leaves = {
        False: single_pair_leaves(variant, cfg, False),
        True: single_pair_leaves(variant, cfg, True),
    }
    keep_tag = cfg.theta + cfg.theta_prime
    noise_weights = [(False, noise.f0), (True, 1.0 - noise.f0)]

    records = []
    if w1 > 0:
        for flipped, wn in noise_weights:
            if wn == 0.0:
                continue
            for leaf in leaves[flipped]:
                st = leaf.state
                if leaf.tag_alice != leaf.tag_bob:
                    st = sigma_x(st, Party.ALICE)
                final = _couple_pair(st)
                fid = overlap(final, PHI_PLUS_MERGED)
                verdict = _verdict(fid, overlap(final, PSI_PLUS_MERGED))
                records.append(OutcomeRecord(
                    leaf.tag_alice, leaf.tag_bob, verdict, final,
                    w1 * wn * leaf.probability, fidelity=fid,
                    order=1, kept_pairs=1,
                ))
    if w2 > 0:
        for flip1, wn1 in noise_weights:
            if wn1 == 0.0:
                continue
            for flip2, wn2 in noise_weights:
                if wn2 == 0.0:
                    continue
                for l1, l2 in iproduct(leaves[flip1], leaves[flip2]):
                    w = w2 * wn1 * wn2 * l1.probability * l2.probability
                    bucket, fid, final, tag_a, tag_b = _order2_outcome(l1, l2, keep_tag)
                    if bucket in ("kept_correct", "kept_erroneous"):
                        records.append(OutcomeRecord(
                            tag_a, tag_b, Verdict(bucket), final, w,
                            fidelity=fid, order=2, kept_pairs=2,
                        ))
                    else:
                        records.append(OutcomeRecord(
                            tag_a, tag_b, Verdict.DISCARDED, None, w,
                            order=2, same_port_keep=(bucket == "kept_same_port"),
                        ))
    return records


def _counts_from_records(records) -> dict:
    counts = {k: 0.0 for k in COUNT_KEYS}
    for r in records:
        counts[r.bucket()] += r.weight
    return counts


def _stage1_extras(counts, records, src, noise) -> dict:
    kept = counts["kept_correct"] + counts["kept_erroneous"]
    same = counts["kept_same_port"]
    pairs = sum(r.weight * r.kept_pairs for r in records)
    incl_kept = kept + same
    return {
        "closed_form_fidelity": stage1_fidelity_closed_form(src.p1, src.p2, noise.f0),
        "kept_pairs_per_event": pairs,
        "fidelity_including_same_port":
            (counts["kept_correct"] + same) / incl_kept if incl_kept > 0 else None,
        "yield_including_same_port": incl_kept,
        "kept_pairs_per_event_including_same_port": pairs + same,
    }


def _report(pipeline, records, extras, mode="exact", trials=None, seed=None) -> RunReport:
    counts = _counts_from_records(records)
    kept = counts["kept_correct"] + counts["kept_erroneous"]
    if kept > 0:
        fid = sum(
            r.weight * r.fidelity for r in records
            if r.verdict != Verdict.DISCARDED
        ) / kept
    else:
        fid = None
    return RunReport(
        pipeline=pipeline, mode=mode, fidelity=fid, yield_fraction=kept,
        counts=counts, trials=trials, seed=seed, extras=extras,
    )


def stage1_exact(src: PdcSourceParams, noise: NoiseParams,
                 variant=Variant.QND1, cfg: QndConfig | None = None) -> RunReport:
    records = stage1_records(src, noise, variant, cfg)
    counts = _counts_from_records(records)
    return _report("stage1", records, _stage1_extras(counts, records, src, noise))


# ---------------------------------------------------------------------------
# stage 2 and the PBS baseline: exact enumeration
# ---------------------------------------------------------------------------

def _finish_kept_pair(state: PureState, records, weight, tag_a, tag_b) -> None:
    """Diagonal-measure the lower pair, phase-correct, classify the upper pair."""
    for oa, (pa, s1) in diagonal_outcomes(state, Party.ALICE, Spatial.LOWER).items():
        if pa == 0.0:
            continue
        for ob, (pb, s2) in diagonal_outcomes(s1, Party.BOB, Spatial.LOWER).items():
            if pb == 0.0:
                continue
            final = sigma_z(s2, Party.ALICE, {Spatial.UPPER}) if oa != ob else s2
            fid = overlap(final, PHI_PLUS_UPPER)
            verdict = _verdict(fid, overlap(final, PSI_PLUS_UPPER))
            records.append(OutcomeRecord(
                tag_a, tag_b, verdict, final, weight * pa * pb,
                fidelity=fid, kept_pairs=1,
            ))


def stage2_records(fidelity: float, cfg: QndConfig | None = None) -> list:
    """Exhaustive outcome enumeration of one stage-2 purification round."""
    cfg = cfg or default_config(Variant.QND2)
    if cfg.variant != Variant.QND2:
        raise ConfigError("stage 2 runs with the qnd2 detector")
    cfg.validate()
    records = []
    for w, _kinds, joint in two_pair_components(fidelity):
        st = apply_qnd(joint, cfg)
        for tag_a in probe_outcomes(st, Party.ALICE):
            p_a, post_a = project_probe(st, Party.ALICE, tag_a)
            for tag_b in probe_outcomes(post_a, Party.BOB):
                p_b, post = project_probe(post_a, Party.BOB, tag_b)
                w_out = w * p_a * p_b
                if tag_a != tag_b:
                    records.append(OutcomeRecord(
                        tag_a, tag_b, Verdict.DISCARDED, None, w_out,
                    ))
                    continue
                kept = post
                if tag_a == ZERO_PHASE:
                    kept = sigma_x(kept, Party.ALICE, {Spatial.UPPER})
                    kept = sigma_x(kept, Party.BOB, {Spatial.UPPER})
                _finish_kept_pair(kept, records, w_out, tag_a, tag_b)
    return records


def stage2_exact(fidelity: float, cfg: QndConfig | None = None) -> RunReport:
    records = stage2_records(fidelity, cfg)
    extras = {
        "closed_form_fidelity": stage2_fidelity_map(fidelity),
        "closed_form_yield": stage2_yield(fidelity),
    }
    return _report("stage2", records, extras)


def _four_port_split(state: PureState) -> tuple:
    """Project onto one-photon-per-port branches: (probability, kept state)."""
    keep = []
    p_keep = 0.0
    for b in state.branches:
        if all(
            b.photons(party=p, spatial=s) == 1
            for p in Party for s in (Spatial.UPPER, Spatial.LOWER)
        ):
            keep.append(b)
            p_keep += abs(b.amplitude) ** 2
    kept_state = PureState.of(keep)
    return p_keep, (kept_state.normalize() if p_keep > 1e-24 else kept_state)


def pbs_records(fidelity: float) -> list:
    """Exhaustive enumeration of the PBS parity-check baseline round."""
    records = []
    for w, _kinds, joint in two_pair_components(fidelity):
        st = pbs(pbs(joint, Party.ALICE), Party.BOB)
        p_keep, kept = _four_port_split(st)
        if p_keep < 1.0 - 1e-15:
            records.append(OutcomeRecord(
                None, None, Verdict.DISCARDED, None, w * (1.0 - p_keep),
            ))
        if p_keep > 0.0:
            _finish_kept_pair(kept, records, w * p_keep, None, None)
    return records


def pbs_exact(fidelity: float) -> RunReport:
    records = pbs_records(fidelity)
    extras = {
        "closed_form_fidelity": stage2_fidelity_map(fidelity),
        "closed_form_yield": 0.5 * stage2_yield(fidelity),
    }
    return _report("pbs", records, extras)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

WORDS_PER_TRIAL = 8

_BUCKET_IDS = {k: i for i, k in enumerate(COUNT_KEYS)}


def trial_uniforms(seed: int, n_trials: int, start: int = 0) -> np.ndarray:
    """Uniform draws for trials [start, start + n_trials).

    Counter-based: trial t always maps to the same fixed block of the
    keyed stream, so any partition of the trial range reproduces the
    same per-trial values.
    """
    bg = np.random.Philox(key=np.uint64(seed))
    blocks_per_trial = WORDS_PER_TRIAL // 4
    if start:
        bg.advance(start * blocks_per_trial)
    raw = bg.random_raw(n_trials * WORDS_PER_TRIAL)
    u = (raw >> np.uint64(11)) * (2.0 ** -53)
    return u.reshape(n_trials, WORDS_PER_TRIAL)


def _mc_report(pipeline, bucket_counts, trials, seed, extras) -> RunReport:
    counts = {k: int(bucket_counts[i]) for k, i in _BUCKET_IDS.items()}
    c, e = counts["kept_correct"], counts["kept_erroneous"]
    kept = c + e
    fid = c / kept if kept > 0 else None
    fid_err = math.sqrt(fid * (1.0 - fid) / kept) if kept >= 2 else None
    y = kept / trials
    y_err = math.sqrt(y * (1.0 - y) / trials) if trials >= 2 else None
    return RunReport(
        pipeline=pipeline, mode="mc", fidelity=fid, yield_fraction=y,
        counts=counts, trials=trials, seed=seed,
        fidelity_stderr=fid_err, yield_stderr=y_err, extras=extras,
    )


def _stage1_mc_buckets(src, noise, variant, cfg, trials, seed, start=0):
    """Per-trial bucket ids and kept-pair counts for a slice of trials."""
    variant, cfg = _stage1_config(variant, cfg)
    src.validate()
    noise.validate()
    total = src.p1 + src.p2
    if total <= 0:
        raise ConfigError("p1 + p2 must be positive")
    p1n = src.p1 / total
    leaves = {
        False: single_pair_leaves(variant, cfg, False),
        True: single_pair_leaves(variant, cfg, True),
    }
    keep_tag = cfg.theta + cfg.theta_prime
    for leaf_list in leaves.values():
        if len(leaf_list) != 2:
            raise SimulationError("expected two homodyne classes per single pair")
    # leaf-combination lookup: type = flipped*2 + leaf index, combo = 4*type1 + type2
    lut = np.empty(16, dtype=np.int64)
    pairs_lut = np.empty(16, dtype=np.int64)
    for t1 in range(4):
        for t2 in range(4):
            l1 = leaves[bool(t1 // 2)][t1 % 2]
            l2 = leaves[bool(t2 // 2)][t2 % 2]
            bucket, _, _, _, _ = _order2_outcome(l1, l2, keep_tag)
            lut[4 * t1 + t2] = _BUCKET_IDS[bucket]
            pairs_lut[4 * t1 + t2] = 2 if bucket in ("kept_correct", "kept_erroneous") else 0

    u = trial_uniforms(seed, trials, start)
    p_flip = 1.0 - noise.f0
    order2 = u[:, 0] >= p1n
    flip1 = u[:, 1] < p_flip
    flip2 = u[:, 2] < p_flip
    # index within the (sorted) two-leaf list of each pair
    leaf_split = leaves[False][0].probability
    bit1 = (u[:, 3] >= leaf_split).astype(np.int64)
    bit2 = (u[:, 4] >= leaf_split).astype(np.int64)
    combo = 4 * (2 * flip1.astype(np.int64) + bit1) + (2 * flip2.astype(np.int64) + bit2)

    buckets = np.where(order2, lut[combo], _BUCKET_IDS["kept_correct"])
    pairs = np.where(order2, pairs_lut[combo], 1)
    return buckets, pairs


def stage1_monte_carlo(src, noise, variant=Variant.QND1, cfg=None,
                       trials: int = 100_000, seed: int = 0) -> RunReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    buckets, pairs = _stage1_mc_buckets(src, noise, variant, cfg, trials, seed)
    bucket_counts = np.bincount(buckets, minlength=4)
    extras = {
        "closed_form_fidelity": stage1_fidelity_closed_form(src.p1, src.p2, noise.f0),
        "kept_pairs_per_event": float(pairs.sum()) / trials,
    }
    report = _mc_report("stage1", bucket_counts, trials, seed, extras)
    c, e, s = (report.counts["kept_correct"], report.counts["kept_erroneous"],
               report.counts["kept_same_port"])
    incl = c + e + s
    report.extras["fidelity_including_same_port"] = (c + s) / incl if incl else None
    report.extras["yield_including_same_port"] = incl / trials
    report.extras["kept_pairs_per_event_including_same_port"] = \
        float(pairs.sum() + s) / trials
    return report


def _stage2_component_table(fidelity, cfg, baseline: bool):
    """(weights, keep probability, kept bucket id) per mixture component."""
    weights, keep_probs, verdicts = [], [], []
    for w, kinds, joint in two_pair_components(fidelity):
        weights.append(w)
        if baseline:
            st = pbs(pbs(joint, Party.ALICE), Party.BOB)
            p_keep, _kept = _four_port_split(st)
        else:
            st = apply_qnd(joint, cfg)
            p_keep = 0.0
            for tag_a in probe_outcomes(st, Party.ALICE):
                p_a, post_a = project_probe(st, Party.ALICE, tag_a)
                for tag_b, p_b in probe_outcomes(post_a, Party.BOB).items():
                    if tag_a == tag_b:
                        p_keep += p_a * p_b
        # the kept verdict is determined by the component: both pairs clean
        # or both flipped survive, and end exactly in phi+ / psi+
        if kinds == ("phi+", "phi+"):
            verdicts.append(_BUCKET_IDS["kept_correct"])
        elif kinds == ("psi+", "psi+"):
            verdicts.append(_BUCKET_IDS["kept_erroneous"])
        else:
            verdicts.append(_BUCKET_IDS["discarded"])
        keep_probs.append(p_keep)
    return np.array(weights), np.array(keep_probs), np.array(verdicts, dtype=np.int64)


def _stage2_mc_buckets(fidelity, cfg, trials, seed, start=0, baseline=False):
    weights, keep_probs, verdicts = _stage2_component_table(fidelity, cfg, baseline)
    cum = np.cumsum(weights)
    cum[-1] = 1.0  # guard against float round-off at the top edge
    u = trial_uniforms(seed, trials, start)
    comp = np.searchsorted(cum, u[:, 0], side="right")
    kept = u[:, 1] < keep_probs[comp]
    buckets = np.where(kept, verdicts[comp], _BUCKET_IDS["discarded"])
    return buckets


def stage2_monte_carlo(fidelity: float, cfg=None, trials: int = 100_000,
                       seed: int = 0, baseline: bool = False) -> RunReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not baseline:
        cfg = cfg or default_config(Variant.QND2)
        if cfg.variant != Variant.QND2:
            raise ConfigError("stage 2 runs with the qnd2 detector")
        cfg.validate()
    buckets = _stage2_mc_buckets(fidelity, cfg, trials, seed, baseline=baseline)
    bucket_counts = np.bincount(buckets, minlength=4)
    extras = {
        "closed_form_fidelity": stage2_fidelity_map(fidelity),
        "closed_form_yield": (0.5 if baseline else 1.0) * stage2_yield(fidelity),
    }
    return _mc_report("pbs" if baseline else "stage2", bucket_counts,
                      trials, seed, extras)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def _check_stage2_domain(fidelity: float) -> None:
    if not 0.0 < fidelity <= 1.0:
        raise ConfigError("fidelity must lie in (0, 1]")


def stage1_run(src: PdcSourceParams, noise: NoiseParams, variant=Variant.QND1,
               mode: str = "exact", trials: int = 100_000, seed: int = 0,
               cfg: QndConfig | None = None) -> RunReport:
    if mode == "exact":
        return stage1_exact(src, noise, variant, cfg)
    if mode == "mc":
        return stage1_monte_carlo(src, noise, variant, cfg, trials, seed)
    raise ConfigError(f"unknown mode {mode!r}")


def stage2_run(fidelity: float, mode: str = "exact", trials: int = 100_000,
               seed: int = 0, cfg: QndConfig | None = None) -> RunReport:
    _check_stage2_domain(fidelity)
    if mode == "exact":
        return stage2_exact(fidelity, cfg)
    if mode == "mc":
        return stage2_monte_carlo(fidelity, cfg, trials, seed)
    raise ConfigError(f"unknown mode {mode!r}")


def pbs_baseline(fidelity: float, mode: str = "exact", trials: int = 100_000,
                 seed: int = 0) -> RunReport:
    _check_stage2_domain(fidelity)
    if mode == "exact":
        return pbs_exact(fidelity)
    if mode == "mc":
        return stage2_monte_carlo(fidelity, None, trials, seed, baseline=True)
    raise ConfigError(f"unknown mode {mode!r}")


def enumerate_exact(pipeline: str, params: dict) -> list:
    """Full outcome enumeration of a named pipeline; weights sum to 1."""
    if pipeline == "stage1":
        return stage1_records(
            PdcSourceParams(params["p1"], params["p2"]),
            NoiseParams(params["f0"]),
            params.get("variant", Variant.QND1),
            params.get("cfg"),
        )
    if pipeline == "stage2":
        return stage2_records(params["F"], params.get("cfg"))
    if pipeline == "pbs":
        return pbs_records(params["F"])
    raise ConfigError(f"unknown pipeline {pipeline!r}")


def monte_carlo(pipeline: str, params: dict, trials: int, seed: int = 0) -> RunReport:
    """Seeded Monte Carlo run of a named pipeline; same seed, same report."""
    if pipeline == "stage1":
        return stage1_monte_carlo(
            PdcSourceParams(params["p1"], params["p2"]),
            NoiseParams(params["f0"]),
            params.get("variant", Variant.QND1),
            params.get("cfg"),
            trials, seed,
        )
    if pipeline == "stage2":
        _check_stage2_domain(params["F"])
        return stage2_monte_carlo(params["F"], params.get("cfg"), trials, seed)
    if pipeline == "pbs":
        _check_stage2_domain(params["F"])
        return stage2_monte_carlo(params["F"], None, trials, seed, baseline=True)
    raise ConfigError(f"unknown pipeline {pipeline!r}")
