"""Verdicts against independent oracles: fiber tables vs explicit loops,
checks vs dense Gramians, specialized vs generic evaluation."""

import numpy as np
import pytest

from gtiframes import (
    NotAMultiplierError,
    Signal,
    StructureMismatchError,
    apply_multiplier,
    check_gabor_duality,
    check_orthogonality,
    check_parseval_super,
    check_super_duality,
    check_wavelet_duality,
    check_wavepacket_duality,
    commutation_defect,
    delta_signal,
    dft_naive,
    dual_integrability_sum,
    fiber_table,
    frame_operator_matrix,
    full_subgroup,
    gabor_system,
    gramian_identity_residual,
    idft,
    make_group,
    mixed_dual_gramian,
    multiplier_symbol,
    quadratic_form_series,
    random_signal,
    subgroup_from_generators,
    wavelet_system,
    wavepacket_system,
)
from gtiframes import Spectrum, automorphism_from_matrix, identity_automorphism
from gtiframes.sweeps import dual_pair, matched_random_pair, random_automorphism
from gtiframes.systems import GtiLayer, SuperSystemDescriptor, WeightedGenerator

from helpers import brute_character, channel_split_parseval, delta_system


def loop_fiber_value(f_sys, h_sys, n1, n2, alpha, xi):
    """Literal triple-loop evaluation with naive transforms and a floating
    character test for annihilator membership."""
    group = f_sys.group
    total = 0.0 + 0.0j
    for lf, lh in zip(f_sys.layers, h_sys.layers):
        in_annihilator = all(
            abs(brute_character(group, alpha, gamma) - 1) < 1e-9
            for gamma in lf.subgroup.elements()
        )
        if not in_annihilator:
            continue
        for gf, gh in zip(lf.generators, lh.generators):
            h_hat = dft_naive(gh.windows[n1])
            g_hat = dft_naive(gf.windows[n2])
            total += gf.weight * np.conj(h_hat[xi]) * g_hat[group.add(xi, alpha)]
    return total


class TestFiberTable:
    def test_delta_system_unit_fiber(self):
        g = make_group([5])
        sys = delta_system(g)
        table = fiber_table(sys, sys)
        assert list(table.data) == [0]
        assert np.abs(table.data[0][0, 0] - 1.0).max() < 1e-12

    def test_zero_analysis_windows_zero_fibers(self):
        g = make_group([8])
        f_sys = delta_system(g)
        h_sys = delta_system(g, scale=0.0)
        table = fiber_table(f_sys, h_sys)
        for block in table.data.values():
            assert np.abs(block).max() == 0.0

    def test_matches_triple_loop_oracle(self):
        g = make_group([8])
        rng = np.random.default_rng(61)
        sub = subgroup_from_generators(g, [(2,)])
        f_sys, h_sys = matched_random_pair(rng, g, 2, 1, 2)
        # Force the layer onto <2> so nontrivial offsets exist.
        f_sys.layers[0].subgroup = sub
        h_sys.layers[0].subgroup = sub
        table = fiber_table(f_sys, h_sys)
        assert sorted(table.data) == [int(i) for i in sub.annihilator.indices]
        for off_idx in table.data:
            alpha = g.element_at(off_idx)
            for n1 in range(2):
                for n2 in range(2):
                    for xi in g.elements():
                        expected = loop_fiber_value(f_sys, h_sys, n1, n2, alpha, xi)
                        got = table.data[off_idx][n1, n2, g.index_of(xi)]
                        assert got == pytest.approx(expected, abs=1e-10)

    def test_contributing_layers_recorded(self):
        g = make_group([4])
        sub = subgroup_from_generators(g, [(2,)])
        w = random_signal(g, 1)
        layers = [
            GtiLayer(full_subgroup(g), [WeightedGenerator(1.0, (w,))]),
            GtiLayer(sub, [WeightedGenerator(1.0, (w,))]),
        ]
        sys = SuperSystemDescriptor(g, 1, layers)
        table = fiber_table(sys, sys)
        assert table.contributors[0] == (0, 1)
        assert table.contributors[g.index_of((2,))] == (1,)

    def test_structure_mismatch_rejected(self):
        g = make_group([4])
        rng = np.random.default_rng(3)
        a, _ = matched_random_pair(rng, g, 1, 1, 2)
        b, _ = matched_random_pair(rng, g, 1, 1, 3)
        with pytest.raises(StructureMismatchError):
            fiber_table(a, b)

    def test_empty_generator_layer_contributes_zero_fibers(self):
        g = make_group([4])
        sub = subgroup_from_generators(g, [(2,)])
        sys = SuperSystemDescriptor(g, 1, [GtiLayer(sub, [])])
        table = fiber_table(sys, sys)
        assert sorted(table.data) == [int(i) for i in sub.annihilator.indices]
        for block in table.data.values():
            assert np.abs(block).max() == 0.0
        assert check_orthogonality(sys, sys).passed


class TestOrthogonality:
    def test_zero_windows_pass(self):
        g = make_group([6])
        verdict = check_orthogonality(delta_system(g), delta_system(g, scale=0.0))
        assert verdict.passed and verdict.max_residual == 0.0

    def test_delta_vs_itself_fails_at_zero_offset(self):
        g = make_group([6])
        verdict = check_orthogonality(delta_system(g), delta_system(g))
        assert not verdict.passed
        assert verdict.max_residual == pytest.approx(1.0)
        top = verdict.witnesses[0]
        assert top.offset == (0,) * g.ndim

    def test_pointwise_unitary_columns_are_orthogonal(self):
        g = make_group([8])
        rng = np.random.default_rng(67)
        g_hat = np.empty((2, 8), dtype=np.complex128)
        h_hat = np.empty((2, 8), dtype=np.complex128)
        for xi in range(8):
            mat = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            q, _ = np.linalg.qr(mat)
            g_hat[:, xi] = q[:, 0]
            h_hat[:, xi] = q[:, 1]
        def build(hats):
            gens = [
                WeightedGenerator(1.0, (idft(Spectrum(g, hats[p])),)) for p in range(2)
            ]
            return SuperSystemDescriptor(g, 1, [GtiLayer(full_subgroup(g), gens)])
        verdict = check_orthogonality(build(g_hat), build(h_hat))
        assert verdict.passed

    def test_agreement_with_gramian(self):
        g = make_group([8])
        rng = np.random.default_rng(71)
        f_sys, h_sys = matched_random_pair(rng, g, 1, 2, 2)
        verdict = check_orthogonality(f_sys, h_sys)
        oracle = float(np.abs(mixed_dual_gramian(f_sys, h_sys)).max())
        assert verdict.passed == (oracle <= verdict.tolerance)


class TestSuperDuality:
    def test_channel_split_parseval_passes(self):
        g = make_group([4])
        sys = channel_split_parseval(g)
        verdict = check_super_duality(sys, sys)
        assert verdict.passed
        assert verdict.blocks[(0, 0)].passed and verdict.blocks[(1, 1)].passed
        assert verdict.blocks[(0, 1)].passed and verdict.blocks[(1, 0)].passed

    def test_scaled_channel_fails_with_exact_residual(self):
        g = make_group([4])
        sys = channel_split_parseval(g)
        bad = channel_split_parseval(g)
        # Double the second-channel window of the second generator.
        gen = bad.layers[0].generators[1]
        gen.windows[1].values *= 2.0
        verdict = check_super_duality(bad, bad, tol=1e-9)
        assert not verdict.passed
        assert verdict.max_residual == pytest.approx(3.0)  # |4 - 1|
        assert verdict.witnesses[0].channels == (1, 1)
        assert verdict.witnesses[0].offset == (0,)

    def test_certified_pair_agrees_with_oracle(self):
        g = make_group([8])
        rng = np.random.default_rng(73)
        f_sys, h_sys = dual_pair(rng, g, channels=2)
        verdict = check_super_duality(f_sys, h_sys)
        oracle = gramian_identity_residual(mixed_dual_gramian(f_sys, h_sys))
        assert verdict.passed and oracle <= verdict.tolerance

    def test_block_decomposition_matches_gramian_blocks(self):
        g = make_group([8])
        rng = np.random.default_rng(79)
        f_sys, h_sys = dual_pair(rng, g, channels=2)
        # Break only the (1,1) block by scaling channel 1 of H.
        for gen in h_sys.layers[0].generators:
            gen.windows[1].values *= 1.5
        verdict = check_super_duality(f_sys, h_sys)
        assert not verdict.passed
        assert verdict.blocks[(0, 0)].passed
        assert not verdict.blocks[(1, 1)].passed
        matrix = mixed_dual_gramian(f_sys, h_sys)
        size = g.size
        block00 = matrix[:size, :size]
        block11 = matrix[size:, size:]
        tol = verdict.tolerance
        assert np.abs(block00 - np.eye(size)).max() <= tol
        assert np.abs(block11 - np.eye(size)).max() > tol


class TestParseval:
    def test_trivial_pair(self):
        g = make_group([4])
        assert check_parseval_super(channel_split_parseval(g)).passed

    def test_scaled_delta_fails(self):
        g = make_group([4])
        verdict = check_parseval_super(delta_system(g, scale=2.0))
        assert not verdict.passed
        assert verdict.max_residual == pytest.approx(3.0)

    def test_inverse_sqrt_frame_operator_gives_parseval_window(self):
        g = make_group([8])
        gamma = subgroup_from_generators(g, [(2,)])
        lam = subgroup_from_generators(g, [(2,)])
        w = random_signal(g, 83)
        op = frame_operator_matrix(gabor_system([[w]], gamma, lam))
        eigvals, eigvecs = np.linalg.eigh(op)
        inv_sqrt = (eigvecs * (1.0 / np.sqrt(eigvals))) @ eigvecs.conj().T
        tight = Signal(g, inv_sqrt @ w.values)
        verdict = check_parseval_super(gabor_system([[tight]], gamma, lam))
        assert verdict.passed


class TestMultiplierSymbol:
    def test_delta_system_symbol_is_one(self):
        g = make_group([6])
        s = multiplier_symbol(delta_system(g), delta_system(g))
        assert np.abs(s.values - 1.0).max() < 1e-12

    def test_zero_windows_symbol_is_zero(self):
        g = make_group([6])
        s = multiplier_symbol(delta_system(g), delta_system(g, scale=0.0))
        assert np.abs(s.values).max() == 0.0

    def test_full_group_symbol_matches_window_product_and_oracle(self):
        g = make_group([8])
        rng = np.random.default_rng(89)
        f_sys, h_sys = matched_random_pair(rng, g, 1, 1, 1, full_group_layers=True,
                                           random_weights=False)
        s = multiplier_symbol(f_sys, h_sys)
        g_hat = dft_naive(f_sys.layers[0].generators[0].windows[0]).values
        h_hat = dft_naive(h_sys.layers[0].generators[0].windows[0]).values
        assert np.abs(s.values - h_hat.conj() * g_hat).max() < 1e-10
        matrix = mixed_dual_gramian(f_sys, h_sys)
        for col in range(g.size):
            basis = Signal(g, np.eye(g.size)[col])
            via_symbol = apply_multiplier(s, basis).values
            assert np.abs(via_symbol - matrix[:, col]).max() < 1e-10

    def test_non_multiplier_is_refused(self):
        g = make_group([4])
        sub = subgroup_from_generators(g, [(2,)])
        sys = SuperSystemDescriptor(
            g, 1, [GtiLayer(sub, [WeightedGenerator(1.0, (delta_signal(g),))])]
        )
        with pytest.raises(NotAMultiplierError):
            multiplier_symbol(sys, sys)

    def test_multi_channel_needs_explicit_channel(self):
        g = make_group([4])
        sys = channel_split_parseval(g)
        with pytest.raises(ValueError, match="channel"):
            multiplier_symbol(sys, sys)
        for channel in (0, 1):
            s = multiplier_symbol(sys, sys, channel=channel)
            assert np.abs(s.values - 1.0).max() < 1e-12


class TestCommutation:
    def test_delta_system_commutes(self):
        g = make_group([6])
        assert commutation_defect(delta_system(g), delta_system(g)) < 1e-12

    def test_full_group_layers_always_commute(self):
        g = make_group([8])
        rng = np.random.default_rng(97)
        f_sys, h_sys = matched_random_pair(rng, g, 1, 2, 2, full_group_layers=True)
        assert commutation_defect(f_sys, h_sys) < 1e-10

    def test_engineered_positive_defect(self):
        g = make_group([4])
        sub = subgroup_from_generators(g, [(2,)])
        sys = SuperSystemDescriptor(
            g, 1, [GtiLayer(sub, [WeightedGenerator(1.0, (delta_signal(g),))])]
        )
        defect = commutation_defect(sys, sys)
        assert defect > 1.0
        table = fiber_table(sys, sys)
        off = table.data[g.index_of((2,))]
        assert np.abs(off).max() > 0.5

    def test_defect_zero_iff_fibers_vanish(self):
        rng = np.random.default_rng(101)
        for _ in range(6):
            g = make_group([8])
            f_sys, h_sys = matched_random_pair(rng, g, 1, 2, 2)
            defect = commutation_defect(f_sys, h_sys)
            table = fiber_table(f_sys, h_sys)
            off_translation = max(
                (np.abs(block).max() for off, block in table.data.items() if off != 0),
                default=0.0,
            )
            tol = 1e-9
            assert (defect <= tol) == (off_translation <= tol)


class TestQuadraticSeries:
    def test_dual_pair_constant_form(self):
        g = make_group([8])
        rng = np.random.default_rng(103)
        f_sys, h_sys = dual_pair(rng, g, channels=1)
        f = random_signal(g, 104)
        rep = quadratic_form_series(f_sys, h_sys, f)
        energy = f.norm() ** 2
        assert np.abs(rep.quadratic_values - energy).max() < 1e-9 * energy
        for offset, coeff in rep.offset_coefficients.items():
            expected = energy if offset == (0,) else 0.0
            assert coeff == pytest.approx(expected, abs=1e-9 * energy)

    def test_zero_signal(self):
        g = make_group([4])
        sys = delta_system(g)
        rep = quadratic_form_series(sys, sys, Signal(g, np.zeros(4)))
        assert np.abs(rep.quadratic_values).max() == 0.0
        assert rep.series_residual == 0.0

    def test_random_pair_series_identity(self):
        g = make_group([8])
        rng = np.random.default_rng(107)
        f_sys, h_sys = matched_random_pair(rng, g, 1, 2, 3)
        f = random_signal(g, 108)
        rep = quadratic_form_series(f_sys, h_sys, f)
        scale = max(1.0, float(np.abs(rep.quadratic_values).max()))
        assert rep.series_residual < 1e-9 * scale


class TestIntegrabilitySum:
    def test_zero_signal(self):
        g = make_group([4])
        sys = delta_system(g)
        assert dual_integrability_sum(sys, sys, Signal(g, np.zeros(4))) == 0.0

    def test_zero_windows(self):
        g = make_group([4])
        assert dual_integrability_sum(
            delta_system(g), delta_system(g, scale=0.0), delta_signal(g)
        ) == 0.0

    def test_delta_system_hand_value(self):
        g = make_group([4])
        sys = delta_system(g)
        assert dual_integrability_sum(sys, sys, delta_signal(g)) == pytest.approx(1.0)


class TestSpecializedChecks:
    def test_gabor_trivial_reduces_to_delta(self):
        g = make_group([4])
        verdict = check_gabor_duality(
            [[delta_signal(g)]],
            [[delta_signal(g)]],
            full_subgroup(g),
            subgroup_from_generators(g, []),
        )
        assert verdict.passed

    def test_wavelet_identity_trivial_case(self):
        g = make_group([4])
        verdict = check_wavelet_duality(
            [[delta_signal(g)]],
            [[delta_signal(g)]],
            [identity_automorphism(g)],
            full_subgroup(g),
        )
        assert verdict.passed

    def test_gabor_three_way_agreement(self):
        g = make_group([6])
        rng = np.random.default_rng(109)
        gamma = subgroup_from_generators(g, [(2,)])
        lam = subgroup_from_generators(g, [(3,)])
        fw = [(random_signal(g, rng),) for _ in range(2)]
        hw = [(random_signal(g, rng),) for _ in range(2)]
        specialized = check_gabor_duality(fw, hw, gamma, lam)
        f_sys = gabor_system(fw, gamma, lam)
        h_sys = gabor_system(hw, gamma, lam)
        generic = check_super_duality(f_sys, h_sys)
        assert specialized.max_residual == pytest.approx(generic.max_residual, abs=1e-10)
        oracle = gramian_identity_residual(mixed_dual_gramian(f_sys, h_sys))
        assert specialized.passed == (oracle <= specialized.tolerance)
        assert generic.passed == specialized.passed

    def test_wavelet_coherence_with_generic(self):
        g = make_group([8])
        rng = np.random.default_rng(113)
        gamma = subgroup_from_generators(g, [(4,)])
        autos = [automorphism_from_matrix(g, [[3]]), automorphism_from_matrix(g, [[5]])]
        fw = [(random_signal(g, rng),)]
        hw = [(random_signal(g, rng),)]
        specialized = check_wavelet_duality(fw, hw, autos, gamma)
        generic = check_super_duality(
            wavelet_system(fw, autos, gamma), wavelet_system(hw, autos, gamma)
        )
        assert specialized.max_residual == pytest.approx(generic.max_residual, abs=1e-10)

    def test_wavepacket_coherence_with_generic(self):
        g = make_group([3, 3])
        rng = np.random.default_rng(127)
        gamma = subgroup_from_generators(g, [(1, 0)])
        lam = subgroup_from_generators(g, [(0, 1)])
        autos = [identity_automorphism(g), automorphism_from_matrix(g, [[1, 1], [0, 1]])]
        fw = [(random_signal(g, rng), random_signal(g, rng))]
        hw = [(random_signal(g, rng), random_signal(g, rng))]
        specialized = check_wavepacket_duality(fw, hw, autos, gamma, lam)
        generic = check_super_duality(
            wavepacket_system(fw, autos, gamma, lam),
            wavepacket_system(hw, autos, gamma, lam),
        )
        assert specialized.max_residual == pytest.approx(generic.max_residual, abs=1e-10)

    def test_random_automorphism_cases(self):
        rng = np.random.default_rng(131)
        for orders in [(8,), (2, 4), (3, 3)]:
            g = make_group(orders)
            gamma = subgroup_from_generators(g, [g.element_at(g.size // 2)])
            autos = [random_automorphism(rng, g) for _ in range(2)]
            fw = [(random_signal(g, rng),)]
            hw = [(random_signal(g, rng),)]
            specialized = check_wavelet_duality(fw, hw, autos, gamma)
            generic = check_super_duality(
                wavelet_system(fw, autos, gamma), wavelet_system(hw, autos, gamma)
            )
            assert specialized.max_residual == pytest.approx(
                generic.max_residual, abs=1e-10
            )


class TestVerdictProperties:
    def test_scale_covariance_of_fibers(self):
        g = make_group([8])
        rng = np.random.default_rng(137)
        f_sys, h_sys = matched_random_pair(rng, g, 2, 2, 2)
        c = 0.7 - 1.3j
        table = fiber_table(f_sys, h_sys)
        for layer in f_sys.layers:
            for gen in layer.generators:
                for w in gen.windows:
                    w.values *= c
        for layer in h_sys.layers:
            for gen in layer.generators:
                for w in gen.windows:
                    w.values *= 1.0 / np.conj(c)
        rescaled = fiber_table(f_sys, h_sys)
        for off in table.data:
            assert np.abs(table.data[off] - rescaled.data[off]).max() < 1e-12 * max(
                1.0, np.abs(table.data[off]).max()
            )

    def test_tolerance_monotonicity(self):
        g = make_group([8])
        rng = np.random.default_rng(139)
        f_sys, h_sys = dual_pair(rng, g, channels=1)
        loose = check_super_duality(f_sys, h_sys, tol=1e-6)
        tight = check_super_duality(f_sys, h_sys, tol=1e-16)
        assert loose.max_residual == tight.max_residual
        assert loose.passed or not tight.passed  # tightening never flips fail -> pass

    def test_witnesses_sorted_and_truncated(self):
        g = make_group([8])
        rng = np.random.default_rng(149)
        f_sys, h_sys = matched_random_pair(rng, g, 2, 2, 2)
        verdict = check_super_duality(f_sys, h_sys, top_k=3)
        assert len(verdict.witnesses) == 3
        residuals = [w.residual for w in verdict.witnesses]
        assert residuals == sorted(residuals, reverse=True)
        assert verdict.max_residual == residuals[0]

    def test_bessel_bound_recorded(self):
        g = make_group([4])
        verdict = check_super_duality(delta_system(g), delta_system(g))
        assert verdict.bessel_bound == pytest.approx(1.0, abs=1e-9)
