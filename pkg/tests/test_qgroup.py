import numpy as np
import pytest

from foelab.hamiltonians import ChainSpec, build_normalized_chain, build_xxz_chain
from foelab.linalg import commutator_maxabs
from foelab.qgroup import (
    QParam,
    droplet_bandwidth,
    droplet_csv_rows,
    droplet_energy,
    finite_droplet_energy,
    q_casimir,
    q_casimir_value,
    q_sector_energies,
    suq2_generators,
)
from foelab.sectors import sector_energies, sector_labels
from foelab.spinops import HalfInt, HilbertShape, spin_matrices


class TestQParam:
    def test_delta_roundtrip(self):
        qp = QParam(0.5)
        assert np.isclose(qp.delta, 1.25, atol=1e-15)
        back = QParam.from_delta(qp.delta)
        assert abs(back.q - 0.5) <= 1e-14

    def test_invalid(self):
        for bad in (0.0, 1.0, 1.5, -0.3):
            with pytest.raises(ValueError):
                QParam(bad)
        with pytest.raises(ValueError):
            QParam.from_delta(1.0)


class TestGenerators:
    def test_single_site_undeformed(self):
        gen = suq2_generators(1, QParam(0.4))
        ops = spin_matrices(HalfInt(1))
        assert np.allclose(gen.sqplus.dense(), ops.splus)
        assert np.allclose(gen.sqminus.dense(), ops.sminus)

    def test_two_site_raising_action(self):
        q = 0.6
        gen = suq2_generators(2, QParam(q))
        down_down = np.array([0.0, 0.0, 0.0, 1.0])
        out = gen.sqplus.dense() @ down_down
        # S+ x 1 gives |+->, t x S+ dresses |-> with q before raising site 2
        assert np.allclose(out, [0.0, 1.0, q, 0.0])

    @pytest.mark.parametrize("q", [0.3, 0.7])
    @pytest.mark.parametrize("L", [2, 3, 4, 5, 6])
    def test_commutation_relations(self, L, q):
        gen = suq2_generators(L, QParam(q))
        s3, sp, sm = gen.s3.dense(), gen.sqplus.dense(), gen.sqminus.dense()
        assert np.abs((s3 @ sp - sp @ s3) - sp).max() <= 1e-10
        assert np.abs((s3 @ sm - sm @ s3) + sm).max() <= 1e-10
        m = np.diag(s3)
        rhs = np.diag((q ** (2 * m) - q ** (-2 * m)) / (q - 1.0 / q))
        assert np.abs((sp @ sm - sm @ sp) - rhs).max() <= 1e-10

    @pytest.mark.parametrize("L", [2, 4, 6, 8])
    def test_xxz_invariance(self, L):
        qp = QParam(0.5)
        h = build_xxz_chain(L, qp.delta)
        gen = suq2_generators(L, qp)
        scale = max(1.0, abs(h.dense()).max()) if L <= 6 else 10.0
        for op in (gen.sqplus, gen.sqminus, gen.s3):
            assert commutator_maxabs(h.matrix, op.matrix) <= 1e-9 * scale


class TestQCasimir:
    def test_single_site_scalar(self):
        qp = QParam(0.5)
        c = q_casimir(1, qp).dense()
        expected = (0.5 ** -2 + 0.5 ** 2) / (2.0 - 0.5) ** 2
        assert np.allclose(c, expected * np.eye(2))
        assert np.isclose(expected, q_casimir_value(HalfInt(1), qp))

    def test_two_site_multiplicities(self):
        qp = QParam(0.5)
        w = np.sort(np.linalg.eigvals(q_casimir(2, qp).dense()).real)
        v0, v1 = q_casimir_value(HalfInt(0), qp), q_casimir_value(HalfInt(2), qp)
        assert np.allclose(w, sorted([v0] + [v1] * 3), atol=1e-10)

    @pytest.mark.parametrize("L", [2, 3, 4, 5, 6])
    def test_commutes_with_chain(self, L):
        qp = QParam(0.5)
        h = build_xxz_chain(L, qp.delta)
        c = q_casimir(L, qp)
        assert commutator_maxabs(h.matrix, c.matrix) <= 1e-9

    @pytest.mark.parametrize("L", [2, 3, 4])
    def test_eigenvalue_family(self, L):
        qp = QParam(0.37)
        w = np.linalg.eigvals(q_casimir(L, qp).dense()).real
        family = [q_casimir_value(S, qp)
                  for S in sector_labels(HilbertShape([HalfInt(1)] * L))]
        for e in w:
            assert min(abs(e - f) for f in family) <= 1e-8

    def test_near_one_guarded(self):
        with pytest.raises(ValueError):
            q_casimir(2, QParam(1.0 - 1e-9))


class TestQSectorEnergies:
    @pytest.mark.parametrize("q", [0.2, 0.5, 0.8])
    def test_two_site_exact(self, q):
        report = q_sector_energies(2, QParam(q))
        assert abs(report.entries[HalfInt(2)][0]) <= 1e-10
        assert abs(report.entries[HalfInt(0)][0] - 1.0) <= 1e-10
        assert report.qfoel_ok

    @pytest.mark.parametrize("q", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("L", [3, 4, 5, 6])
    def test_strictly_decreasing(self, L, q):
        report = q_sector_energies(L, QParam(q))
        assert report.qfoel_ok
        assert all(g > 1e-8 for _, _, g in report.margins)

    def test_dimensions_match_undeformed(self):
        report = q_sector_energies(5, QParam(0.3))
        labels = sector_labels(HilbertShape([HalfInt(1)] * 5))
        assert {s: d for s, (_, d) in report.entries.items()} == labels

    def test_continuity_toward_isotropic(self):
        # q -> 1: the sector energies approach those of the isotropic chain
        # with bonds 1/4 - S.S (the zero-boundary-field limit)
        L = 4
        report = q_sector_energies(L, QParam(1.0 - 1e-3))
        iso = build_normalized_chain(ChainSpec([HalfInt(1)] * L, [0.25] * (L - 1)))
        iso_report = sector_energies(iso, HilbertShape([HalfInt(1)] * L))
        for S, (e, _) in report.entries.items():
            assert abs(e - iso_report.entries[S].min_energy) <= 1e-2


class TestDropletFormulas:
    def test_spot_values(self):
        qp = QParam(0.5)
        assert abs(droplet_energy(1, qp) - 0.2) <= 1e-15
        assert abs(droplet_bandwidth(1, qp) - 2.0) <= 1e-15

    def test_small_q_limits(self):
        qp = QParam(1e-9)
        for n in (1, 2, 3):
            assert abs(droplet_energy(n, qp) - 1.0) <= 1e-8
            assert droplet_bandwidth(n, qp) <= 1e-8

    def test_monotone_in_droplet_size(self):
        qp = QParam(0.5)
        es = [droplet_energy(n, qp) for n in range(1, 11)]
        assert all(b > a for a, b in zip(es, es[1:]))

    def test_bandwidth_ratio_tends_to_inverse_q(self):
        qp = QParam(0.5)
        ratio = droplet_bandwidth(8, qp) / droplet_bandwidth(9, qp)
        assert abs(ratio - 1.0 / qp.q) <= 1e-2

    def test_invalid_size(self):
        with pytest.raises(ValueError):
            droplet_energy(0, QParam(0.5))


class TestFiniteDroplet:
    def test_two_site_value(self):
        # the n=1 sector of the two-site chain is the deformed singlet at 1
        assert abs(finite_droplet_energy(2, 1, QParam(0.5)) - 1.0) <= 1e-12

    def test_monotone_decreasing_in_volume(self):
        qp = QParam(0.5)
        es = [finite_droplet_energy(L, 2, qp) for L in range(5, 15)]
        assert all(b < a for a, b in zip(es, es[1:]))

    def test_bounded_below_by_infinite_volume(self):
        qp = QParam(0.5)
        for n in (1, 2, 3):
            for L in range(2 * n, 13):
                assert finite_droplet_energy(L, n, qp) >= droplet_energy(n, qp)

    def test_domain(self):
        with pytest.raises(ValueError):
            finite_droplet_energy(4, 3, QParam(0.5))

    def test_sweep_rows(self):
        qp = QParam(0.5)
        rows = droplet_csv_rows(range(4, 9), [1, 2], qp)
        assert all(r[3] >= r[4] for r in rows)  # finite >= infinite volume
        by_n = {}
        for L, n, _, e, _, _ in rows:
            by_n.setdefault(n, []).append((L, e))
        for seq in by_n.values():
            es = [e for _, e in sorted(seq)]
            assert all(b < a for a, b in zip(es, es[1:]))
