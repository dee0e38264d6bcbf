"""Core state representation: exact phases, branches, projection."""

import math
from collections import Counter
from fractions import Fraction

import pytest

from kerrpurify import (
    BranchState,
    EnsembleState,
    ModeLabel,
    Party,
    PhaseTag,
    Pol,
    PureState,
    Spatial,
    Variant,
    ZeroNormError,
    ZERO_PHASE,
    PI,
    create_photon,
    default_config,
    inner,
    normalize,
    overlap,
    probe_outcomes,
    product_state,
    project_probe,
    qnd1,
    single_pair_state,
)
from kerrpurify.branches import U1, U2, U3, U4, operator_state

from conftest import random_pure_state, assert_states_equal

A1H = ModeLabel(Party.ALICE, Spatial.UPPER, Pol.H)
B1H = ModeLabel(Party.BOB, Spatial.UPPER, Pol.H)


class TestPhaseTag:
    def test_canonical_reduction(self):
        assert PhaseTag(2, 8).value == Fraction(1, 4)
        assert PhaseTag(9, 4).value == Fraction(1, 4)
        assert PhaseTag(-1, 4).value == Fraction(7, 4)

    def test_addition_exact(self):
        assert PhaseTag(1, 4) + PhaseTag(3, 4) == PhaseTag(1)
        assert PhaseTag(3, 2) + PhaseTag(3, 4) == PhaseTag(1, 4)

    def test_wraparound(self):
        t = PhaseTag(5, 7)
        assert t + PhaseTag(2) == t

    def test_associativity_random(self, rng):
        for _ in range(1000):
            nums = rng.integers(-20, 20, size=3)
            dens = rng.integers(1, 12, size=3)
            a, b, c = (PhaseTag(int(n), int(d)) for n, d in zip(nums, dens))
            assert (a + b) + c == a + (b + c)

    def test_scalar_multiple(self):
        assert PhaseTag(1, 4) * 3 == PhaseTag(3, 4)
        assert 2 * PhaseTag(3, 4) == PhaseTag(3, 2)
        assert PhaseTag(1, 2) * 4 == ZERO_PHASE

    def test_magnitude_class(self):
        assert PhaseTag(1, 4).magnitude_class() == PhaseTag(1, 4)
        assert PhaseTag(7, 4).magnitude_class() == PhaseTag(1, 4)
        assert PI.magnitude_class() == PI
        assert ZERO_PHASE.magnitude_class() == ZERO_PHASE

    def test_parse_and_radians(self):
        assert PhaseTag.parse("3/4") == PhaseTag(3, 4)
        assert PhaseTag.parse("1") == PI
        assert abs(PhaseTag(1, 2).radians() - math.pi / 2) < 1e-15

    def test_hash_consistency(self):
        assert len({PhaseTag(1, 4), PhaseTag(2, 8), PhaseTag(9, 4)}) == 1


class TestCreatePhoton:
    def test_single_on_vacuum(self):
        st = create_photon(PureState.vacuum(), A1H)
        assert len(st) == 1
        assert st.branches[0].occupation(A1H) == 1
        assert abs(st.branches[0].amplitude - 1.0) < 1e-12

    def test_bosonic_factor(self):
        st = create_photon(create_photon(PureState.vacuum(), A1H), A1H)
        assert st.branches[0].occupation(A1H) == 2
        assert abs(st.branches[0].amplitude - math.sqrt(2)) < 1e-12

    def test_squared_pair_operator_against_polynomial_oracle(self):
        # (sum of four pair terms)^2 on vacuum, checked monomial by monomial
        terms = [U1, U2, U3, U4]

        def apply_sum(state):
            branches = []
            for t in terms:
                s = state
                for m in t:
                    s = create_photon(s, m)
                branches.extend(s.branches)
            return PureState.of(branches)

        engine = apply_sum(apply_sum(PureState.vacuum())).normalize()

        # oracle: expand the operator polynomial over ordered term pairs
        amplitudes = {}
        for t1 in terms:
            for t2 in terms:
                pattern = tuple(sorted(Counter(t1 + t2).items()))
                amplitudes[pattern] = amplitudes.get(pattern, 0) + 1
        expected = {
            pattern: coeff * math.sqrt(math.prod(math.factorial(n) for _, n in pattern))
            for pattern, coeff in amplitudes.items()
        }
        norm = math.sqrt(sum(a * a for a in expected.values()))

        assert len(engine) == 10
        assert len(expected) == 10
        got = {b.occupations: b.amplitude for b in engine.branches}
        for pattern, amp in expected.items():
            assert abs(got[pattern] - amp / norm) < 1e-12


class TestNormalize:
    def test_scalar(self):
        st = PureState.of([BranchState.of({A1H: 1}, 3.0)])
        assert abs(normalize(st).branches[0].amplitude - 1.0) < 1e-12

    def test_two_equal_branches(self):
        st = PureState.of([
            BranchState.of({A1H: 1}, 1.0),
            BranchState.of({B1H: 1}, 1.0),
        ])
        out = normalize(st)
        for b in out.branches:
            assert abs(b.amplitude - 1 / math.sqrt(2)) < 1e-12

    def test_destructive_interference_raises(self):
        st = PureState.of([
            BranchState.of({A1H: 1}, 1.0),
            BranchState.of({A1H: 1}, -1.0),
        ])
        with pytest.raises(ZeroNormError):
            normalize(st)

    def test_idempotent(self, rng):
        for _ in range(200):
            st = random_pure_state(rng)
            assert_states_equal(st.normalize(), st, tol=1e-12)


class TestMergeCanonical:
    def test_order_independent(self, rng):
        for _ in range(200):
            st = random_pure_state(rng)
            reversed_build = PureState.of(reversed(st.branches))
            assert reversed_build == st


class TestProjectProbe:
    def test_clean_pair_after_detector(self):
        cfg = default_config(Variant.QND1)
        st = qnd1(single_pair_state(), cfg)
        prob, post = project_probe(st, Party.ALICE, cfg.theta)
        assert abs(prob - 0.5) < 1e-12
        # Bob's probe is still theta on every surviving branch
        assert all(b.probe[Party.BOB] == cfg.theta for b in post.branches)
        expected = operator_state([(1, ((U1, U4),), (ZERO_PHASE, cfg.theta))])
        assert_states_equal(post, expected)

    def test_uniform_zero_probe(self, rng):
        st = random_pure_state(rng, with_probe=False)
        prob, post = project_probe(st, Party.ALICE, ZERO_PHASE)
        assert abs(prob - 1.0) < 1e-12
        assert_states_equal(post, st)

    def test_no_match_raises(self):
        st = single_pair_state()
        with pytest.raises(ZeroNormError):
            project_probe(st, Party.ALICE, PhaseTag(1, 3))

    def test_weighted_class_superposition(self):
        # superposition of the three normalized double-emission phase
        # classes with weights 1 : 1 : 2; the heaviest class carries 4/6
        cfg = default_config(Variant.QND1)
        t, tp = cfg.theta, cfg.theta_prime
        g1 = operator_state([(1, ((U1, U4), (U1, U4)), (2 * t, 2 * t))])
        g2 = operator_state([(1, ((U2, U3), (U2, U3)), (2 * tp, 2 * tp))])
        g3 = operator_state([(1, ((U1, U4), (U2, U3)), (t + tp, t + tp))])
        combined = PureState.of(
            list(g1.branches) + list(g2.branches) + list(g3.scale(2.0).branches)
        ).normalize()
        prob, _ = project_probe(combined, Party.ALICE, t + tp)
        assert abs(prob - 4.0 / 6.0) < 1e-12

    def test_outcome_probabilities_sum_to_one(self, rng):
        for _ in range(300):
            st = random_pure_state(rng)
            for party in Party:
                total = sum(probe_outcomes(st, party).values())
                assert abs(total - 1.0) < 1e-10


class TestProductAndOverlap:
    def test_product_disjoint(self):
        a = create_photon(PureState.vacuum(), A1H)
        b = create_photon(PureState.vacuum(), B1H)
        joint = product_state(a, b)
        assert joint.branches[0].total_photons() == 2

    def test_product_collision_raises(self):
        a = create_photon(PureState.vacuum(), A1H)
        with pytest.raises(Exception):
            product_state(a, a)

    def test_overlap_self(self, rng):
        for _ in range(50):
            st = random_pure_state(rng)
            assert abs(overlap(st, st) - 1.0) < 1e-10

    def test_inner_orthogonal(self):
        a = create_photon(PureState.vacuum(), A1H)
        b = create_photon(PureState.vacuum(), B1H)
        assert inner(a, b) == 0


class TestEnsemble:
    def test_weight_validation(self):
        st = single_pair_state()
        with pytest.raises(ValueError):
            EnsembleState.of([(0.5, st)])

    def test_purity_of_pure(self):
        ens = EnsembleState.pure(single_pair_state())
        assert abs(ens.purity() - 1.0) < 1e-12

    def test_mixture_purity(self):
        a = create_photon(PureState.vacuum(), A1H)
        b = create_photon(PureState.vacuum(), B1H)
        ens = EnsembleState.of([(0.5, a), (0.5, b)])
        assert abs(ens.purity() - 0.5) < 1e-12
