import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clifftorsion import classification as cl
from clifftorsion import generators as gens
from clifftorsion import permutations as P
from clifftorsion import torsion
from clifftorsion.generators import GeneratorIndex
from clifftorsion.monomial import MonomialMatrix
from clifftorsion.permutations import CliffordPermutation, ShapeNotBlockStructured
from clifftorsion.torsion import TorsionPoint

G = GeneratorIndex.parse


@st.composite
def clifford_perms(draw, k=None):
    k = draw(st.integers(1, 6)) if k is None else k
    return CliffordPermutation(k, draw(st.integers(0, 2**k - 1)), draw(st.booleans()))


class TestSwitch:
    @pytest.mark.parametrize(
        "k, j, cycles",
        [(3, 1, "(13)(24)(57)(68)"), (1, 0, "(12)"), (3, 2, "(15)(26)(37)(48)")],
    )
    def test_examples(self, k, j, cycles):
        s = P.switch_permutation(k, j)
        assert s.cycles() == cycles
        assert s.perm == P.block_swap_oracle(k, j)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_xor_matches_block_list(self, k):
        for j in range(k):
            perm = P.switch_permutation(k, j).perm
            assert perm == P.block_swap_oracle(k, j)
            assert P.compose_perms(perm, perm) == tuple(range(2**k))
            assert k == 1 or P.is_even(perm)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            P.switch_permutation(2, 2)
        with pytest.raises(ValueError):
            P.block_swap_oracle(2, -1)


class TestCliffordPermutation:
    def test_names(self):
        assert CliffordPermutation(3, 0b101).name == "A4∘(1)∘A1"
        assert CliffordPermutation(1, 0, True).name == "i·(1)"
        assert CliffordPermutation(1, 1, True).name == "i·A1"
        assert CliffordPermutation(3, 0).name == "(1)"

    def test_realized_perm_is_composition(self):
        for bits in range(8):
            p = CliffordPermutation(3, bits)
            want = tuple(range(8))
            for level in range(1, 4):  # S_1 first
                if bits >> (level - 1) & 1:
                    want = P.compose_perms(P.switch_permutation(3, level - 1).perm, want)
            assert p.row_permutation == want

    @pytest.mark.parametrize("k", range(1, 7))
    def test_derangement_by_transpositions(self, k):
        for bits in range(1, 2**k):
            cyc = P.cycles_of(CliffordPermutation(k, bits).row_permutation)
            assert len(cyc) == 2 ** (k - 1) and all(len(c) == 2 for c in cyc)

    def test_validation(self):
        with pytest.raises(ValueError):
            CliffordPermutation(2, 4)
        with pytest.raises(ValueError):
            CliffordPermutation(0, 0)


class TestInduced:
    def test_k1_examples(self):
        assert P.induced_permutation(G(1, "e1")) == CliffordPermutation(1, 0, True)
        assert P.induced_permutation(G(1, "e2")) == CliffordPermutation(1, 1, True)
        assert P.induced_permutation(G(1, "e12")) == CliffordPermutation(1, 1, False)
        pts = [TorsionPoint(1, 2, tuple(e)) for e in itertools.product(range(2), repeat=4)]
        p = P.induced_permutation(G(1, "e12"))
        rep = gens.generator_rep(G(1, "e12"))
        assert all(P.clifford_perm_act(p, v) == torsion.monomial_act(rep, v) for v in pts)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_bijection_onto_pairs(self, k):
        images = {P.induced_permutation(c.canonical) for c in cl.classify(k)}
        assert images == set(P.all_clifford_permutations(k))

    def test_not_block_structured(self):
        with pytest.raises(ShapeNotBlockStructured):
            P.induced_permutation(MonomialMatrix((1, 2, 3, 0), (0, 0, 0, 0)))
        with pytest.raises(ShapeNotBlockStructured):
            # block pattern fine at the top level but the two inner blocks differ
            P.induced_permutation(MonomialMatrix((0, 1, 3, 2), (0, 0, 0, 0)))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_action_exhaustive(self, k):
        report = P.verify_induced_action(k)
        assert report.passed and report.details["points"] == "all"

    def test_action_sampled_k4(self):
        assert P.verify_induced_action(4, samples=2000, seed=1).passed


class TestAction:
    def test_worked_example(self):
        v = TorsionPoint.from_label("01230123")
        out = P.clifford_perm_act(CliffordPermutation(3, 0b101), v)
        digits = v.label
        assert out.label == "".join(digits[i - 1] for i in (6, 5, 8, 7, 2, 1, 4, 3))

    def test_identity_and_i(self):
        v = TorsionPoint.from_label("0213")
        assert P.clifford_perm_act(CliffordPermutation(2, 0), v) == v
        assert P.clifford_perm_act(CliffordPermutation(2, 0, True), TorsionPoint.from_label("1111")).label == "2222"

    def test_mismatch(self):
        with pytest.raises(ValueError):
            P.clifford_perm_act(CliffordPermutation(1, 0), TorsionPoint(1, 3, (0,) * 4))
        with pytest.raises(ValueError):
            P.clifford_perm_act(CliffordPermutation(2, 0), TorsionPoint.from_label("01"))


class TestCompose:
    def test_example(self):
        a = CliffordPermutation(3, 0b101)
        b = CliffordPermutation(3, 0b011)
        c = P.compose_clifford(a, b)
        assert c.name == "A4∘A2∘(1)"
        assert c.row_permutation == P.compose_perms(a.row_permutation, b.row_permutation)

    @given(st.integers(1, 6).flatmap(lambda k: st.tuples(clifford_perms(k), clifford_perms(k))))
    def test_group_laws(self, pair):
        p, q = pair
        ident = CliffordPermutation(p.k, 0)
        assert p @ p == ident
        assert p @ ident == p
        assert p @ q == q @ p
        assert (p @ q).row_permutation == P.compose_perms(p.row_permutation, q.row_permutation)

    @given(st.integers(1, 3).flatmap(lambda k: st.tuples(clifford_perms(k), clifford_perms(k))))
    def test_compose_matches_action(self, pair):
        p, q = pair
        for v in torsion.sample_torsion(p.k, 2, 5, 0):
            assert P.clifford_perm_act(p @ q, v) == P.clifford_perm_act(p, P.clifford_perm_act(q, v))

    def test_mismatch(self):
        with pytest.raises(ValueError):
            P.compose_clifford(CliffordPermutation(1, 0), CliffordPermutation(2, 0))


class TestGroupStructure:
    @pytest.mark.parametrize("k", range(1, 7))
    def test_report(self, k):
        report = P.verify_group_structure(k)
        assert report.passed, report.failures
        assert report.details["real_group_order"] == 2**k
        assert ("alternating" in report.checks) == (k >= 2)
        assert ("isomorphism" in report.checks) == (k <= 4)

    def test_k1_is_not_alternating(self):
        assert not P.is_even(CliffordPermutation(1, 1).row_permutation)

    def test_format_cycles(self):
        assert P.format_cycles(tuple(range(4))) == "(1)"
        assert P.format_cycles(P.switch_permutation(4, 0).perm).startswith("(1 2)(3 4)")
