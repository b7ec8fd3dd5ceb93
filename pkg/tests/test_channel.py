import cmath

import pytest

from nmqem.channel import (
    AlphaOutOfRange,
    Basis4,
    NotNormalized,
    basis_for_gate,
    computational_basis,
    input_labels,
    m_tensor,
    multiplet_basis,
    population_channel,
    predict_table,
    to_computational,
    v_element,
)

MB = multiplet_basis()
CB = computational_basis()
MT_M = m_tensor(MB)
MT_C = m_tensor(CB)


def affine_coefficients(cells):
    """(a, b) per cell for cell(alpha) = a + b*alpha, probed at two alphas."""
    a0, a1 = cells
    out = []
    for x0, x1 in zip(a0, a1):
        b = (x1 - x0) / 0.1
        out.append((x0, b))
    return out


class TestBases:
    def test_orthonormal(self):
        # constructors run the orthonormality check themselves
        multiplet_basis()
        computational_basis()

    def test_bad_basis_rejected(self):
        with pytest.raises(ValueError):
            Basis4("broken", ((1, 0, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))

    def test_basis_for_gate(self):
        assert basis_for_gate("swap").name == "multiplet_swap"
        assert basis_for_gate("identity").name == "computational"
        with pytest.raises(ValueError):
            basis_for_gate("cnot")

    def test_input_labels(self):
        assert input_labels("swap") == ("m1", "m2", "m3", "m4")
        assert input_labels("identity") == ("00", "01", "10", "11")


class TestMTensor:
    def test_sum_rule(self):
        for mt in (MT_M, MT_C):
            for a in range(1, 5):
                for c in range(1, 5):
                    expected = 1.5 if a == c else 0.0
                    assert mt.diag_sum(a, c) == pytest.approx(expected, abs=1e-12)

    def test_exchange_symmetry(self):
        for mt in (MT_M, MT_C):
            for a in range(1, 5):
                for b in range(1, 5):
                    for c in range(1, 5):
                        for d in range(1, 5):
                            assert mt.at(a, b, c, d) == pytest.approx(
                                mt.at(c, d, a, b), abs=1e-13
                            )

    def test_multiplet_spot_values(self):
        assert MT_M.at(2, 1, 1, 2) == pytest.approx(0.5, abs=1e-13)
        assert MT_M.at(1, 1, 1, 1) == pytest.approx(0.5, abs=1e-13)
        assert MT_M.at(3, 1, 1, 3) == pytest.approx(0.0, abs=1e-13)


class TestVElement:
    def test_diagonal_real_for_complex_k(self):
        k = 0.03 + 0.7j
        for a in range(1, 5):
            for c in range(1, 5):
                v = v_element(MB, MT_M, k, a, a, c, c)
                assert abs(v.imag) < 1e-12

    def test_k_zero_is_identity(self):
        for a in range(1, 5):
            for c in range(1, 5):
                v = v_element(MB, MT_M, 0.0 + 0.0j, a, a, c, c)
                assert v == pytest.approx(1.0 if a == c else 0.0, abs=1e-13)

    def test_time_dependence_is_pure_phase(self):
        basis = multiplet_basis(energies=(0.0, 1.0, 2.0, 0.5))
        mt = m_tensor(basis)
        k = 0.02 + 0.0j
        t = 0.37
        for a in range(1, 5):
            for b in range(1, 5):
                v0 = v_element(basis, mt, k, a, b, 1, 1)
                vt = v_element(basis, mt, k, a, b, 1, 1, t=t)
                phase = cmath.exp(-1j * t * (basis.energies[a - 1] - basis.energies[b - 1]))
                assert vt == pytest.approx(phase * v0, abs=1e-13)


# channel matrices as affine functions of alpha: matrix[out][in] = a + b*alpha
SWAP_CHANNEL = (
    ((1, -2), (0, 1), (0, 0), (0, 1)),
    ((0, 1), (1, -3), (0, 1), (0, 1)),
    ((0, 0), (0, 1), (1, -2), (0, 1)),
    ((0, 1), (0, 1), (0, 1), (1, -3)),
)
ID_CHANNEL = (
    ((1, -2), (0, 1), (0, 1), (0, 0)),
    ((0, 1), (1, -2), (0, 0), (0, 1)),
    ((0, 1), (0, 0), (1, -2), (0, 1)),
    ((0, 0), (0, 1), (0, 1), (1, -2)),
)


class TestPopulationChannel:
    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.1])
    def test_swap_matrix(self, alpha):
        ch = population_channel("swap", alpha)
        for i in range(4):
            for j in range(4):
                a, b = SWAP_CHANNEL[i][j]
                assert ch.matrix[i][j] == pytest.approx(a + b * alpha, abs=1e-14)

    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.1])
    def test_identity_matrix(self, alpha):
        ch = population_channel("identity", alpha)
        for i in range(4):
            for j in range(4):
                a, b = ID_CHANNEL[i][j]
                assert ch.matrix[i][j] == pytest.approx(a + b * alpha, abs=1e-14)

    def test_columns_stochastic(self):
        for gate in ("swap", "identity"):
            ch = population_channel(gate, 0.07)
            for j in range(4):
                assert sum(ch.column(j)) == pytest.approx(1.0, abs=1e-12)
                assert all(v >= 0 for v in ch.column(j))

    def test_determinants_factorize(self):
        from nmqem.linalg import det

        alpha = 0.06
        d_swap = det(population_channel("swap", alpha).to_cmat())
        d_id = det(population_channel("identity", alpha).to_cmat())
        assert d_swap == pytest.approx((1 - 2 * alpha) * (1 - 4 * alpha) ** 2, abs=1e-13)
        assert d_id == pytest.approx((1 - 2 * alpha) ** 2 * (1 - 4 * alpha), abs=1e-13)

    def test_alpha_domain(self):
        with pytest.raises(AlphaOutOfRange):
            population_channel("swap", -0.01)
        with pytest.raises(AlphaOutOfRange):
            population_channel("swap", 0.5)
        population_channel("swap", 0.49)  # in domain

    def test_unknown_gate(self):
        with pytest.raises(ValueError):
            population_channel("cz", 0.1)


class TestToComputational:
    def test_multiplet_mixing(self):
        # a pure central-multiplet population splits evenly over 01 and 10
        assert to_computational((0, 1, 0, 0), MB) == pytest.approx((0, 0.5, 0.5, 0))
        assert to_computational((0, 0, 0, 1), MB) == pytest.approx((0, 0.5, 0.5, 0))

    def test_extremal_states_pass_through(self):
        assert to_computational((1, 0, 0, 0), MB) == pytest.approx((1, 0, 0, 0))
        assert to_computational((0, 0, 1, 0), MB) == pytest.approx((0, 0, 0, 1))

    def test_computational_basis_is_identity_map(self):
        p = (0.1, 0.2, 0.3, 0.4)
        assert to_computational(p, CB) == pytest.approx(p)

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            to_computational((0.5, 0.5, 0.5, 0.0), MB)


# predicted tables as affine functions: table[out][in] = a + b*alpha
SWAP_TABLE = (
    ((1, -2), (0, 1), (0, 0), (0, 1)),
    ((0, 1), (0.5, -1), (0, 1), (0.5, -1)),
    ((0, 1), (0.5, -1), (0, 1), (0.5, -1)),
    ((0, 0), (0, 1), (1, -2), (0, 1)),
)


class TestPredictTable:
    @pytest.mark.parametrize("alpha", [0.0, 0.02, 0.1, 1.0 / 3.0])
    def test_swap_table(self, alpha):
        table = predict_table("swap", alpha)
        for i in range(4):
            for j in range(4):
                a, b = SWAP_TABLE[i][j]
                assert table[i][j] == pytest.approx(a + b * alpha, abs=1e-14)

    @pytest.mark.parametrize("alpha", [0.0, 0.02, 0.1])
    def test_identity_table_is_channel_matrix(self, alpha):
        table = predict_table("identity", alpha)
        ch = population_channel("identity", alpha)
        for i in range(4):
            for j in range(4):
                assert table[i][j] == pytest.approx(ch.matrix[i][j], abs=1e-15)

    def test_columns_sum_to_one(self):
        for gate in ("swap", "identity"):
            table = predict_table(gate, 0.08)
            for j in range(4):
                assert sum(table[i][j] for i in range(4)) == pytest.approx(1.0, abs=1e-12)

    def test_domain(self):
        with pytest.raises(AlphaOutOfRange):
            predict_table("swap", 0.34)
        with pytest.raises(AlphaOutOfRange):
            predict_table("identity", -1e-9)
