"""Realized codebooks, the likelihood encoder, ML decoding and exact / Monte Carlo metrics."""

import numpy as np
import pytest

from helpers import LN2, random_source, z_scheme
from src.errors import ResourceBudgetError, UsageError
from src.oneshot import OneShotParams
from src.probkit import Channel
from src.protosim import (
    EXACT,
    Codebook,
    LetterModel,
    SimResult,
    SimulationBudget,
    average_over_codebooks,
    build_codebook,
    decode,
    encode,
    encoder_posteriors,
    evaluate_codebook,
    exact_evaluate,
    run_monte_carlo,
    soundness_report,
)
from src.protosim.codebook import _sample_rows
from src.protosim.coding import decode_table
from src.protosim.evaluate import SoundnessEntry, block_conditional, key_distribution_target
from src.protosim.montecarlo import wilson_std_error
from src.regions import AuxScheme, SourceSpec


def direct_codebook(source, u_words, I_list=(2, 1), J_list=(1,)):
    """Codebook with hand-picked u-words and constant s-words at n = 1."""
    model = LetterModel.from_scheme(source, z_scheme(source))
    params = OneShotParams(I_list, J_list)
    u = np.array(u_words)
    s = tuple(np.zeros((params.I, J, 1), dtype=np.int64) for J in J_list)
    return Codebook(model, params, 1, 0, u, s)


def random_scheme(source, seed, u_card=2, s_card=2):
    rng = np.random.default_rng(seed)
    return AuxScheme(
        Channel.random(rng, (source.z_size,), u_card),
        tuple(Channel.random(rng, (u_card, source.z_size), s_card) for _ in source.receivers),
    )


class TestLetterModel:
    def test_noiseless_laws(self, noiseless_source):
        model = LetterModel.from_scheme(noiseless_source, z_scheme(noiseless_source))
        np.testing.assert_allclose(model.q_u, [0.5, 0.5])
        np.testing.assert_allclose(model.q_z_given_u, np.eye(2))
        np.testing.assert_allclose(model.receiver_given_z(1), np.eye(2))
        assert model.s_cards == (1,)

    def test_order_relabels_receivers(self, copy_bsc_source):
        model = LetterModel.from_scheme(copy_bsc_source, z_scheme(copy_bsc_source), order=(2, 1))
        np.testing.assert_allclose(model.receiver_given_z(2), np.eye(2))
        np.testing.assert_allclose(model.receiver_given_z(1), Channel.binary_symmetric(0.11).rows)


class TestCodebook:
    def test_shape_is_checked(self, noiseless_source):
        with pytest.raises(UsageError):
            direct_codebook(noiseless_source, [[0], [1], [0]])

    def test_tables_are_read_only(self, noiseless_source):
        cb = direct_codebook(noiseless_source, [[0], [1]])
        with pytest.raises(ValueError):
            cb.u_words[0, 0] = 1

    def test_build_is_deterministic(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, z_scheme(bsc_source))
        params = OneShotParams((4, 4), (3,))
        a = build_codebook(model, params, 8, seed=5)
        b = build_codebook(model, params, 8, seed=5)
        c = build_codebook(model, params, 8, seed=6)
        np.testing.assert_array_equal(a.u_words, b.u_words)
        np.testing.assert_array_equal(a.s_words[0], b.s_words[0])
        assert a.u_words.shape == (16, 8)
        assert a.s_words[0].shape == (16, 3, 8)
        assert not np.array_equal(a.u_words, c.u_words)

    def test_codewords_follow_support(self, noiseless_source):
        model = LetterModel.from_scheme(noiseless_source, z_scheme(noiseless_source))
        cb = build_codebook(model, OneShotParams((8, 1), (2,)), 4, seed=1)
        assert set(np.unique(cb.u_words)) <= {0, 1}
        assert np.all(cb.s_words[0] == 0)

    def test_budget(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, z_scheme(bsc_source))
        with pytest.raises(ResourceBudgetError) as info:
            build_codebook(model, OneShotParams((4, 4), (2,)), 8, budget=SimulationBudget(max_table_cells=10))
        assert info.value.exit_status == 4

    def test_sampler_skips_trailing_zero_mass(self):
        class FixedDraws:
            def random(self, shape):
                return np.full(shape, 1.0 - 1e-13)

        # rounded cumulative sum of [0.5, 0.5, 0.0]
        cdf = np.array([[0.5, 1.0 - 1e-12, 1.0 - 1e-12]])
        np.testing.assert_array_equal(_sample_rows(FixedDraws(), cdf, (1,)), [1])

    def test_bad_blocklength(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, z_scheme(bsc_source))
        with pytest.raises(UsageError):
            build_codebook(model, OneShotParams((2, 1), (1,)), 0)


class TestCoding:
    def test_encoder_picks_matching_word(self, noiseless_source):
        cb = direct_codebook(noiseless_source, [[0], [1]])
        out = encode(cb, [0], seed=3)
        assert out.v == (0, 0)
        assert out.key == 0
        assert out.message(1) == (0, 0)
        assert encode(cb, [1], seed=3).v == (1, 0)

    def test_posteriors_are_distributions(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, random_scheme(bsc_source, 1, s_card=3))
        cb = build_codebook(model, OneShotParams((3, 2), (2,)), 3, seed=0)
        post = encoder_posteriors(cb, [0, 1, 1])
        assert post.v.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(post.w[0].sum(axis=1), 1.0)

    @pytest.mark.slow
    def test_encoder_draws_follow_posteriors(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, random_scheme(bsc_source, 6))
        cb = build_codebook(model, OneShotParams((2, 2), (2,)), 2, seed=0)
        post = encoder_posteriors(cb, [0, 1])
        rng = np.random.default_rng(7)
        counts = np.zeros_like(post.w[0])
        draws = 10**5
        for _ in range(draws):
            out = encode(cb, [0, 1], seed=rng)
            counts[np.ravel_multi_index(out.v, cb.index_shape), out.w_tilde[0]] += 1
        joint = post.v[:, None] * post.w[0]
        assert np.abs(counts / draws - joint).sum() <= 0.02

    def test_uniform_fallback(self, noiseless_source):
        cb = direct_codebook(noiseless_source, [[0], [0]])
        post = encoder_posteriors(cb, [1])
        assert post.v_fallback
        np.testing.assert_allclose(post.v, [0.5, 0.5])
        assert encode(cb, [1]).v_fallback

    def test_block_validation(self, noiseless_source):
        cb = direct_codebook(noiseless_source, [[0], [1]])
        with pytest.raises(UsageError):
            encode(cb, [0, 1])
        with pytest.raises(UsageError):
            encode(cb, [2])

    def test_decoder_recovers_key(self, noiseless_source):
        cb = direct_codebook(noiseless_source, [[0], [1]])
        assert decode(cb, 1, [1], (0, 0)) == 1
        assert decode(cb, 1, [0], (0, 0)) == 0

    def test_decoder_ties_go_to_smallest(self, independent_source):
        cb = direct_codebook(independent_source, [[0], [1]])
        assert decode(cb, 1, [1], (0, 0)) == 0

    def test_decoder_validation(self, noiseless_source):
        cb = direct_codebook(noiseless_source, [[0], [1]])
        with pytest.raises(UsageError):
            decode(cb, 0, [0], (0, 0))
        with pytest.raises(UsageError):
            decode(cb, 1, [0], (0,))
        with pytest.raises(UsageError):
            decode(cb, 1, [0], (1, 0))

    @pytest.mark.parametrize("l", [1, 2])
    def test_table_matches_decoder(self, copy_bsc_source, l):
        model = LetterModel.from_scheme(copy_bsc_source, random_scheme(copy_bsc_source, 2))
        params = OneShotParams((2, 2, 2), (2, 3))
        cb = build_codebook(model, params, 2, seed=4)
        table = decode_table(cb, l)
        known_sizes = params.I_list[1 : l + 1]
        for a in range(table.shape[0]):
            known = np.unravel_index(a, known_sizes)
            for w in range(params.J_list[l - 1]):
                for x in range(table.shape[2]):
                    x_block = np.unravel_index(x, (2, 2))
                    assert table[a, w, x] == decode(cb, l, x_block, (w,) + tuple(int(k) for k in known))


class TestExactEvaluation:
    def test_noiseless_direct_codebook(self, noiseless_source):
        result = evaluate_codebook(direct_codebook(noiseless_source, [[0], [1]]))
        assert result.mode == EXACT
        assert result.error[0] == pytest.approx(0.0, abs=1e-12)
        assert result.leakage[0] == pytest.approx(0.0, abs=1e-12)
        assert result.tv[0] == pytest.approx(0.0, abs=1e-12)
        assert result.tv_joint == pytest.approx(0.0, abs=1e-12)

    def test_independent_receiver_guesses(self, independent_source):
        result = evaluate_codebook(direct_codebook(independent_source, [[0], [1]]))
        assert result.error[0] == pytest.approx(0.5)
        assert result.tv[0] == pytest.approx(1.0)
        assert result.epsilon_n == pytest.approx(0.5)

    def test_single_key_is_trivial(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, z_scheme(bsc_source))
        result = exact_evaluate(model, OneShotParams((1, 2), (1,)), 2, codebook_seed=0)
        assert result.error[0] == pytest.approx(0.0, abs=1e-12)
        assert result.leakage[0] == pytest.approx(0.0, abs=1e-12)
        assert result.tv[0] == pytest.approx(0.0, abs=1e-12)

    def test_leakage_of_revealed_key(self, noiseless_source):
        # S = Z with s-words (0, 1) under both keys: w~_1 equals the key index
        aux = AuxScheme(Channel.identity(2), (Channel.from_function((2, 2), 2, lambda u, z: z),))
        model = LetterModel.from_scheme(noiseless_source, aux)
        s = np.array([[[0], [1]], [[0], [1]]])
        cb = Codebook(model, OneShotParams((2, 1), (2,)), 1, 0, np.array([[0], [1]]), (s,))
        result = evaluate_codebook(cb)
        assert result.leakage[0] == pytest.approx(LN2)
        assert result.error[0] == pytest.approx(0.0, abs=1e-12)

    def test_metrics_are_in_range(self, copy_bsc_source):
        model = LetterModel.from_scheme(copy_bsc_source, random_scheme(copy_bsc_source, 3))
        result = exact_evaluate(model, OneShotParams((2, 2, 1), (2, 1)), 2, codebook_seed=1)
        assert result.m == 2
        assert all(0.0 <= e <= 1.0 for e in result.error)
        assert all(-1e-9 <= v <= LN2 + 1e-9 for v in result.leakage)
        assert all(0.0 <= t <= 2.0 for t in result.tv)
        assert 0.0 <= result.tv_joint <= 2.0

    def test_is_deterministic(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, random_scheme(bsc_source, 4))
        params = OneShotParams((2, 2), (2,))
        assert exact_evaluate(model, params, 2, 9) == exact_evaluate(model, params, 2, 9)

    def test_enumeration_budget(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, z_scheme(bsc_source))
        with pytest.raises(ResourceBudgetError):
            exact_evaluate(model, OneShotParams((2, 1), (1,)), 4, budget=SimulationBudget(max_enumeration_states=8))

    def test_block_conditional(self):
        q = np.array([[[0.5, 0.5], [0.0, 0.0]], [[0.0, 0.0], [0.25, 0.75]]])
        table = block_conditional(q, [0, 1])
        assert table.shape == (4, 4)
        assert table.sum() == pytest.approx(1.0)
        # x_1-block (0, 1), x_2-block (0, 1)
        assert table[1, 1] == pytest.approx(0.5 * 0.75)

    def test_key_target(self):
        np.testing.assert_allclose(key_distribution_target(2, 2), [[0.5, 0.0], [0.0, 0.5]])

    def test_average(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, random_scheme(bsc_source, 5))
        averaged = average_over_codebooks(model, OneShotParams((2, 2), (2,)), 1, [0, 1, 2])
        assert averaged.mean.codebook_seeds == (0, 1, 2)
        expected = np.mean([r.error[0] for r in averaged.per_seed])
        assert averaged.mean.error[0] == pytest.approx(expected)


class TestSimResult:
    def test_validation(self):
        with pytest.raises(UsageError):
            SimResult("guess", 1, 2, (0.0,), (0.0,), (0.0,), 0.0)
        with pytest.raises(UsageError):
            SimResult(EXACT, 1, 2, (1.5,), (0.0,), (0.0,), 0.0)
        with pytest.raises(UsageError):
            SimResult(EXACT, 1, 2, (0.1,), (0.0,), (0.0,), 0.0, std_errors=(0.1,))

    def test_summary_metrics(self):
        result = SimResult(EXACT, 1, 2, (0.1, 0.3), (0.2, 0.05), (0.0, 0.0), 0.0)
        assert result.epsilon_n == 0.3
        assert result.nu_n == 0.2
        assert result.std_errors == (0.0, 0.0)
        assert result.as_dict()["epsilon_n"] == 0.3


    def test_relabel_lists_receivers_by_label(self):
        result = SimResult(EXACT, 1, 2, (0.1, 0.3), (0.2, 0.05), (0.4, 0.6), 0.7, fallback_w=(0.0, 0.5))
        swapped = result.relabeled((2, 1))
        assert swapped.error == (0.3, 0.1)
        assert swapped.leakage == (0.05, 0.2)
        assert swapped.tv == (0.6, 0.4)
        assert swapped.fallback_w == (0.5, 0.0)
        assert swapped.tv_joint == 0.7
        assert result.relabeled((1, 2)) == result
        with pytest.raises(UsageError):
            result.relabeled((1, 1))


class TestSoundness:
    def test_entry_flags(self):
        entry = SoundnessEntry(receiver=1, error=0.3, bound=0.2, variant_bound=0.5)
        assert entry.applicable and not entry.sound and entry.variant_sound
        assert SoundnessEntry(receiver=1, error=0.3, bound=1.7, variant_bound=1.7).sound

    def test_report_structure(self, noiseless_source):
        report = soundness_report(noiseless_source, z_scheme(noiseless_source), OneShotParams((2, 2), (2,)), 1, [0, 1])
        assert len(report.entries) == 1
        assert report.entries[0].receiver == 1
        assert report.sound
        payload = report.as_dict()
        assert payload["entries"][0]["applicable"] is False
        assert payload["averaged"]["codebook_seeds"] == [0, 1]

    @pytest.mark.slow
    def test_averaged_error_respects_bound(self, noiseless_source):
        report = soundness_report(
            noiseless_source,
            z_scheme(noiseless_source),
            OneShotParams((2, 512), (16,)),
            6,
            range(20),
            SimulationBudget(max_enumeration_states=10**9),
        )
        assert report.entries[0].applicable
        assert report.sound

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(5))
    def test_random_sources_respect_bound(self, seed):
        source = random_source(np.random.default_rng(400 + seed), 2, (2,))
        report = soundness_report(source, z_scheme(source), OneShotParams((2, 2), (2,)), 2, range(20))
        assert report.sound

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(3))
    def test_nearly_noiseless_sources_respect_bound(self, seed):
        rng = np.random.default_rng(500 + seed)
        q = rng.uniform(0.4, 0.6)
        source = SourceSpec.from_channels(np.array([q, 1 - q]), [Channel.binary_symmetric(rng.uniform(0.0, 1e-3))])
        report = soundness_report(
            source,
            z_scheme(source),
            OneShotParams((2, 512), (16,)),
            6,
            range(20),
            SimulationBudget(max_enumeration_states=10**9),
        )
        assert report.sound


class TestMonteCarlo:
    def test_wilson_half_width(self):
        assert wilson_std_error(50, 100) == pytest.approx(0.05, rel=0.05)
        assert wilson_std_error(0, 100) > 0.0

    def test_is_deterministic(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, z_scheme(bsc_source))
        params = OneShotParams((2, 1), (1,))
        a = run_monte_carlo(model, params, 2, 200, codebook_seed=1, source_seed=2)
        b = run_monte_carlo(model, params, 2, 200, codebook_seed=1, source_seed=2, workers=2)
        assert a.error == b.error
        assert a.leakage == b.leakage
        assert a.leakage_biased

    def test_needs_trials(self, bsc_source):
        model = LetterModel.from_scheme(bsc_source, z_scheme(bsc_source))
        with pytest.raises(UsageError):
            run_monte_carlo(model, OneShotParams((2, 1), (1,)), 1, 0)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(10))
    def test_agrees_with_exact(self, seed):
        source = random_source(np.random.default_rng(300 + seed), 2, (2,))
        model = LetterModel.from_scheme(source, random_scheme(source, 10 + seed))
        params = OneShotParams((2, 2), (2,))
        exact = exact_evaluate(model, params, 3, codebook_seed=seed)
        mc = run_monte_carlo(model, params, 3, 10**4, codebook_seed=seed, source_seed=seed)
        assert abs(mc.error[0] - exact.error[0]) <= 4 * mc.std_errors[0] + 1e-3
