import itertools
from math import comb

import numpy as np
import pytest

from foelab.errors import NumericalError, ReducibleMatrixError
from foelab.hamiltonians import ChainSpec, build_normalized_chain
from foelab.sectors import highest_weight_space, sector_energies, sector_labels
from foelab.spinops import HalfInt, HilbertShape, total_spin_ops
from foelab.temperley_lieb import (
    ArcDiagram,
    check_dominance,
    embed_diagram,
    enumerate_arc_diagrams,
    expand_diagram_to_tensor,
    fk_hamiltonian_matrix,
    fk_highest_weight_basis,
    min_spec_comparison,
    perron_ground_vector,
    tl_generator_action,
    tl_hamiltonian_matrix,
)


def brute_force_diagrams(k, n):
    """Oracle: filter all pairings of all 2n-subsets with direct predicates."""
    found = set()

    def matchings(verts):
        if not verts:
            yield ()
            return
        a = verts[0]
        for i in range(1, len(verts)):
            b = verts[i]
            rest = verts[1:i] + verts[i + 1:]
            for m in matchings(rest):
                yield ((a, b),) + m

    for subset in itertools.combinations(range(1, k + 1), 2 * n):
        for arcs in matchings(list(subset)):
            unpaired = set(range(1, k + 1)) - set(subset)
            noncrossing = all(
                not (a < c < b < d or c < a < d < b)
                for (a, b), (c, d) in itertools.combinations(arcs, 2)
            )
            nospan = all(not (x < u < y) for x, y in arcs for u in unpaired)
            if noncrossing and nospan:
                found.add(tuple(sorted(arcs)))
    return found


class TestArcDiagram:
    def test_rejects_crossing(self):
        with pytest.raises(ValueError, match="cross"):
            ArcDiagram(4, [(1, 3), (2, 4)])

    def test_rejects_span_over_unpaired(self):
        with pytest.raises(ValueError, match="unpaired"):
            ArcDiagram(3, [(1, 3)])

    def test_rejects_shared_vertex(self):
        with pytest.raises(ValueError, match="two arcs"):
            ArcDiagram(4, [(1, 2), (2, 3)])

    def test_nested_ok(self):
        d = ArcDiagram(4, [(1, 4), (2, 3)])
        assert d.partner(1) == 4 and d.unpaired() == ()


class TestEnumeration:
    def test_counts_small(self):
        assert len(enumerate_arc_diagrams(5, 2)) == 5
        assert len(enumerate_arc_diagrams(2, 1)) == 1
        assert len(enumerate_arc_diagrams(4, 2)) == 2

    @pytest.mark.parametrize("k", range(2, 9))
    def test_matches_brute_force(self, k):
        for n in range(0, k // 2 + 1):
            ours = {d.arcs for d in enumerate_arc_diagrams(k, n)}
            assert ours == brute_force_diagrams(k, n)

    @pytest.mark.parametrize("k", range(2, 11))
    def test_count_formula_and_sector_dimension(self, k):
        shape = HilbertShape([HalfInt(1)] * k)
        labels = sector_labels(shape)
        for n in range(0, k // 2 + 1):
            count = len(enumerate_arc_diagrams(k, n))
            assert count == comb(k, n) - (comb(k, n - 1) if n else 0)
            assert count == labels[HalfInt(k - 2 * n)]

    @pytest.mark.parametrize("k", range(2, 9))
    def test_embedding_is_basis_prefix(self, k):
        for n in range(0, k // 2 + 1):
            basis_k = enumerate_arc_diagrams(k, n)
            basis_k1 = enumerate_arc_diagrams(k + 1, n)
            assert basis_k1[: len(basis_k)] == [embed_diagram(d) for d in basis_k]


class TestGeneratorAction:
    def test_bubble(self):
        d = ArcDiagram(2, [(1, 2)])
        combo = tl_generator_action(d, 1, q=1.0)
        assert combo.terms == {d: -2.0}

    def test_q_bubble_value(self):
        d = ArcDiagram(2, [(1, 2)])
        combo = tl_generator_action(d, 1, q=0.5)
        assert np.isclose(combo.terms[d], -2.5)

    def test_unpaired_pair_annihilates(self):
        d = ArcDiagram(2, [])
        assert len(tl_generator_action(d, 1)) == 0

    def test_rearch(self):
        d = ArcDiagram(3, [(1, 2)])
        combo = tl_generator_action(d, 2)
        assert combo.terms == {ArcDiagram(3, [(2, 3)]): 1.0}

    def test_double_rearch(self):
        d = ArcDiagram(4, [(1, 2), (3, 4)])
        combo = tl_generator_action(d, 2)
        assert combo.terms == {ArcDiagram(4, [(1, 4), (2, 3)]): 1.0}

    @pytest.mark.parametrize("q", [1.0, 0.5])
    @pytest.mark.parametrize("k", [3, 4, 5, 6])
    def test_rules_match_operator_action(self, k, q):
        """Strong oracle: the graphical rules reproduce the actual projector
        operator acting on the expanded tensor vectors."""
        xi = np.array([0.0, q, -1.0, 0.0])
        u_local = -np.outer(xi, xi) / q
        for n in range(0, k // 2 + 1):
            basis = enumerate_arc_diagrams(k, n)
            for d in basis:
                v = expand_diagram_to_tensor(d, q)
                for x in range(1, k):
                    left, right = 2 ** (x - 1), 2 ** (k - x - 1)
                    u_op = np.kron(np.kron(np.eye(left), u_local), np.eye(right))
                    expected = u_op @ v
                    combo = tl_generator_action(d, x, q)
                    got = np.zeros_like(expected)
                    for beta, coeff in combo.terms.items():
                        got += coeff * expand_diagram_to_tensor(beta, q)
                    assert np.abs(got - expected).max() <= 1e-12


class TestTLMatrix:
    def test_one_by_one(self):
        tl = tl_hamiltonian_matrix(2, 1, [1.0])
        assert tl.A.shape == (1, 1)
        assert np.isclose(tl.A[0, 0], 4.0)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_off_diagonals_nonpositive(self, seed):
        rng = np.random.default_rng(seed)
        for k in range(2, 9):
            js = 2.0 * (1.0 - rng.random(k - 1))
            for n in range(0, k // 2 + 1):
                tl = tl_hamiltonian_matrix(k, n, js)
                assert tl.off_diagonal_max() <= 0.0

    @pytest.mark.parametrize("k", range(2, 9))
    def test_spectrum_equals_sector_spectrum(self, k):
        rng = np.random.default_rng(k)
        js = 2.0 * (1.0 - rng.random(k - 1))
        shape = HilbertShape([HalfInt(1)] * k)
        h = build_normalized_chain(ChainSpec([HalfInt(1)] * k, js))
        for n in range(0, k // 2 + 1):
            tl = tl_hamiltonian_matrix(k, n, js)
            v = highest_weight_space(shape, HalfInt(k - 2 * n)).vectors
            hs = v.T @ (h.matrix @ v)
            w_sector = np.sort(np.linalg.eigvalsh(0.5 * (hs + hs.T)))
            w_tl = np.sort(np.linalg.eigvals(tl.A).real)
            assert np.abs(w_sector - w_tl).max() <= 1e-9

    def test_coupling_count_enforced(self):
        with pytest.raises(ValueError):
            tl_hamiltonian_matrix(4, 1, [1.0])


class TestDominance:
    def test_two_to_three(self):
        a = tl_hamiltonian_matrix(2, 1, [1.0])
        b = tl_hamiltonian_matrix(3, 1, [1.0, 1.0])
        verdict = check_dominance(a, b)
        assert verdict.ok and verdict.dims_ok
        # the spin-1/2 chain prefix is exactly equal (no strict surplus)
        assert verdict.max_violation == 0.0

    def test_five_to_six(self):
        rng = np.random.default_rng(5)
        js = 2.0 * (1.0 - rng.random(5))
        a = tl_hamiltonian_matrix(5, 2, js[:4])
        b = tl_hamiltonian_matrix(6, 2, js)
        assert check_dominance(a, b).ok

    def test_misaligned_input_rejected(self):
        a = tl_hamiltonian_matrix(4, 1, [1.0] * 3)
        b = tl_hamiltonian_matrix(6, 1, [1.0] * 5)
        with pytest.raises(ValueError):
            check_dominance(a, b)


class TestPerron:
    def test_trivial(self):
        res = perron_ground_vector(np.array([[3.0]]))
        assert res.vector[0] == 1.0 and res.eigenvalue == 3.0

    def test_k4_n1(self):
        res = perron_ground_vector(tl_hamiltonian_matrix(4, 1, [1.0] * 3))
        assert res.vector.shape == (3,)
        assert res.vector.min() > 0

    def test_k5_n2(self):
        res = perron_ground_vector(tl_hamiltonian_matrix(5, 2, [1.0] * 4))
        assert res.vector.shape == (5,)
        assert res.vector.min() > 0
        assert res.gap > 1e-10

    def test_reducible_rejected(self):
        block = np.diag([1.0, 2.0])
        with pytest.raises(ReducibleMatrixError):
            perron_ground_vector(block)


class TestMinSpecComparison:
    def test_equal_matrices(self):
        a = np.array([[1.0, -0.5], [-0.5, 2.0]])
        v = min_spec_comparison(a, a)
        assert v.hypotheses_ok and v.inequality_ok
        assert v.strict_condition == ""

    def test_strict_via_outer_entry(self):
        a = np.zeros((1, 1))
        b = np.array([[0.0, -1.0], [-1.0, 0.0]])
        v = min_spec_comparison(a, b)
        assert v.hypotheses_ok and v.inequality_ok
        assert np.isclose(v.inf_b, -1.0)
        assert v.strict_condition == "ii" and v.strict_ok

    def test_strict_via_block_entry(self):
        a = np.array([[0.0, -0.1], [-0.1, 0.0]])
        b = np.array([[0.0, -0.5], [-0.5, 0.0]])
        v = min_spec_comparison(a, b)
        assert v.strict_condition == "i" and v.strict_ok

    def test_hypothesis_violation_reported(self):
        a = np.zeros((1, 1))
        b = np.array([[0.0, 0.5], [0.5, 0.0]])
        v = min_spec_comparison(a, b)
        assert not v.hypotheses_ok and "positive off-diagonal" in v.reason

    @pytest.mark.parametrize("seed", [3, 4])
    def test_randomized_spectral_radius_lemma(self, seed):
        # nonnegative entrywise dominance implies spectral-radius dominance
        rng = np.random.default_rng(seed)
        for _ in range(50):
            m = int(rng.integers(2, 9))
            b = rng.random((m, m))
            a = b * rng.random((m, m))  # 0 <= a <= b entrywise
            ra = np.max(np.abs(np.linalg.eigvals(a)))
            rb = np.max(np.abs(np.linalg.eigvals(b)))
            assert ra <= rb + 1e-10


class TestConsequenceChain:
    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 7])
    def test_sector_energy_decreases_with_growth(self, k):
        """Dominance + comparison theorem force E(H_{k+1}, S+1/2) <= E(H_k, S),
        and both infima match the sector energies computed independently."""
        rng = np.random.default_rng(100 + k)
        js = 2.0 * (1.0 - rng.random(k))
        h_k = build_normalized_chain(ChainSpec([HalfInt(1)] * k, js[: k - 1]))
        h_k1 = build_normalized_chain(ChainSpec([HalfInt(1)] * (k + 1), js))
        rep_k = sector_energies(h_k, HilbertShape([HalfInt(1)] * k))
        rep_k1 = sector_energies(h_k1, HilbertShape([HalfInt(1)] * (k + 1)))
        for n in range(0, k // 2 + 1):
            a = tl_hamiltonian_matrix(k, n, js[: k - 1])
            b = tl_hamiltonian_matrix(k + 1, n, js)
            v = min_spec_comparison(a, b)
            assert v.hypotheses_ok and v.inequality_ok
            e_k = rep_k.entries[HalfInt(k - 2 * n)].min_energy
            e_k1 = rep_k1.entries[HalfInt(k + 1 - 2 * n)].min_energy
            assert abs(v.inf_a - e_k) <= 1e-9
            assert abs(v.inf_b - e_k1) <= 1e-9
            assert e_k1 <= e_k + 1e-9


class TestQDeformedSpectra:
    @pytest.mark.parametrize("q", [0.3, 0.7])
    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 7, 8])
    def test_tl_matrix_matches_xxz_sector_spectrum(self, k, q):
        """With couplings 1/(2(q + 1/q)) the diagram matrix carries exactly
        the deformed chain's sector spectrum."""
        from foelab.hamiltonians import build_xxz_chain
        from foelab.linalg import kernel_basis
        from foelab.qgroup import QParam, suq2_generators
        from foelab.sectors import s3_blocks

        qp = QParam(q)
        shape = HilbertShape([HalfInt(1)] * k)
        h = build_xxz_chain(k, qp.delta)
        gen = suq2_generators(k, qp)
        blocks = s3_blocks(shape)
        j = 1.0 / (2.0 * (q + 1.0 / q))
        for n in range(0, k // 2 + 1):
            S = HalfInt(k - 2 * n)
            cols = blocks[S]
            rows = blocks.get(S + HalfInt(2), np.zeros(0, dtype=int))
            kern = kernel_basis(gen.sqplus.matrix[rows][:, cols])
            hb = h.matrix.tocsr()[cols][:, cols].toarray()
            hs = kern.T @ hb @ kern
            w_sector = np.sort(np.linalg.eigvalsh(0.5 * (hs + hs.T)))
            tl = tl_hamiltonian_matrix(k, n, [j] * (k - 1), q)
            w_tl = np.sort(np.linalg.eigvals(tl.A).real)
            assert np.abs(w_sector - w_tl).max() <= 1e-9


def su2_raising(k):
    sp = np.array([[0.0, 1.0], [0.0, 0.0]])
    out = np.zeros((2 ** k, 2 ** k))
    for x in range(k):
        out += np.kron(np.kron(np.eye(2 ** x), sp), np.eye(2 ** (k - 1 - x)))
    return out


class TestExpansion:
    def test_singlet(self):
        v = expand_diagram_to_tensor(ArcDiagram(2, [(1, 2)]), q=1.0)
        assert np.array_equal(v, [0.0, 1.0, -1.0, 0.0])

    def test_single_vertex(self):
        v = expand_diagram_to_tensor(ArcDiagram(1, []), q=1.0)
        assert np.array_equal(v, [1.0, 0.0])

    def test_gram_nonsingular(self):
        basis = enumerate_arc_diagrams(5, 2)
        v = np.column_stack([expand_diagram_to_tensor(d) for d in basis])
        gram = v.T @ v
        assert np.linalg.matrix_rank(gram) == 5

    @pytest.mark.parametrize("k,n", [(3, 1), (4, 2), (5, 2), (6, 3)])
    def test_annihilated_by_raising(self, k, n):
        sp = su2_raising(k)
        for d in enumerate_arc_diagrams(k, n):
            assert np.abs(sp @ expand_diagram_to_tensor(d)).max() <= 1e-10

    @pytest.mark.parametrize("q", [0.3, 0.7])
    def test_annihilated_by_q_raising(self, q):
        from foelab.qgroup import QParam, suq2_generators

        k = 5
        gen = suq2_generators(k, QParam(q))
        for n in range(0, 3):
            for d in enumerate_arc_diagrams(k, n):
                v = expand_diagram_to_tensor(d, q)
                assert np.abs(gen.sqplus.matrix @ v).max() <= 1e-10

    @pytest.mark.parametrize("k", [3, 4, 5, 6])
    def test_tl_relations_on_operators(self, k):
        # U^2 = -2U and U_x U_{x+-1} U_x = U_x at q = 1
        xi = np.array([0.0, 1.0, -1.0, 0.0])
        u_local = -np.outer(xi, xi)
        ops = []
        for x in range(1, k):
            left, right = 2 ** (x - 1), 2 ** (k - x - 1)
            ops.append(np.kron(np.kron(np.eye(left), u_local), np.eye(right)))
        for u in ops:
            assert np.abs(u @ u + 2 * u).max() <= 1e-10
        for u, w in zip(ops, ops[1:]):
            assert np.abs(u @ w @ u - u).max() <= 1e-10
            assert np.abs(w @ u @ w - w).max() <= 1e-10


class TestFKBasis:
    def test_spin_half_reduces_to_diagrams(self):
        spins = [HalfInt(1)] * 5
        basis = fk_highest_weight_basis(spins, HalfInt(1))
        diagrams = enumerate_arc_diagrams(5, 2)
        assert len(basis) == len(diagrams)
        for vec, d in zip(basis, diagrams):
            assert vec.arcs == d.arcs
            assert np.abs(vec.expanded - expand_diagram_to_tensor(d)).max() <= 1e-12

    def test_two_spin_ones(self):
        basis = fk_highest_weight_basis([HalfInt(2)] * 2, HalfInt(2))
        assert len(basis) == 1
        assert [b.n_down for b in basis[0].blocks] == [0, 1]

    def test_three_spin_ones_s2(self):
        basis = fk_highest_weight_basis([HalfInt(2)] * 3, HalfInt(4))
        assert len(basis) == 2

    @pytest.mark.parametrize(
        "spins", [(2, 2), (2, 2, 2), (1, 2, 1), (3, 1, 2), (2, 1, 1, 2)]
    )
    def test_counts_and_highest_weight(self, spins):
        spins = [HalfInt(t) for t in spins]
        shape = HilbertShape(spins)
        tot = total_spin_ops(shape)
        for S, dim in sector_labels(shape).items():
            basis = fk_highest_weight_basis(spins, S)
            assert len(basis) == dim
            if basis:
                v = np.column_stack([b.expanded for b in basis])
                assert np.abs(tot.sptot.matrix @ v).max() <= 1e-10
                assert np.abs(tot.s3tot.matrix @ v - S.value * v).max() <= 1e-10
                assert np.linalg.matrix_rank(v.T @ v) == dim

    def test_invalid_label_rejected(self):
        with pytest.raises(ValueError):
            fk_highest_weight_basis([HalfInt(2)] * 2, HalfInt(3))


class TestFKMatrix:
    def test_two_halves_matches_tl(self):
        a = fk_hamiltonian_matrix([HalfInt(1)] * 2, [1.0], HalfInt(0))
        assert np.allclose(a, [[4.0]])

    def test_two_ones(self):
        a = fk_hamiltonian_matrix([HalfInt(2)] * 2, [1.0], HalfInt(2))
        assert np.allclose(a, [[2.0]], atol=1e-12)

    @pytest.mark.parametrize("spins", [(2, 2), (2, 2, 2), (3, 1, 2)])
    def test_spectrum_matches_sector(self, spins):
        spins = [HalfInt(t) for t in spins]
        rng = np.random.default_rng(sum(s.twice for s in spins))
        js = 2.0 * (1.0 - rng.random(len(spins) - 1))
        shape = HilbertShape(spins)
        h = build_normalized_chain(ChainSpec(spins, js))
        rep = sector_energies(h, shape)
        for S in sector_labels(shape):
            a = fk_hamiltonian_matrix(spins, js, S)
            w = np.sort(np.linalg.eigvals(a).real)
            assert np.isclose(w[0], rep.entries[S].min_energy, atol=1e-9)
            assert np.isclose(w[-1], rep.entries[S].max_energy, atol=1e-9)

    def test_off_diagonal_sign_audit_three_ones(self):
        spins = [HalfInt(2)] * 3
        for S in sector_labels(HilbertShape(spins)):
            a = fk_hamiltonian_matrix(spins, [1.0, 1.0], S)
            off = a - np.diag(np.diag(a))
            assert off.max() <= 1e-10

    def test_ill_conditioned_gram_refused(self):
        with pytest.raises(NumericalError, match="condition"):
            fk_hamiltonian_matrix([HalfInt(1)] * 4, [1.0] * 3, HalfInt(0),
                                  cond_limit=1e-1)
