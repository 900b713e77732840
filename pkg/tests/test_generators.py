import functools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clifftorsion import generators as gens
from clifftorsion.generators import GeneratorIndex
from clifftorsion.monomial import B, E1, E12, I2, EntryType, identity, mono_kron, to_dense, type_of

# independent complex oracle for the vector generators
_E1 = np.array([[1j, 0], [0, -1j]])
_E2 = np.array([[0, 1j], [1j, 0]])
_B = np.array([[0, -1j], [1j, 0]])
_I = np.eye(2)


def oracle_vector(k, i):
    j = (i + 1) // 2
    factors = [_I] * (k - j) + [_E1 if i % 2 else _E2] + [_B] * (j - 1)
    return functools.reduce(np.kron, factors, np.eye(1))


def oracle_generator(k, indices):
    out = np.eye(2**k, dtype=complex)
    for i in indices:
        out = out @ oracle_vector(k, i)
    return out


def dense(m):
    d = to_dense(m)
    return d.re + 1j * d.im


class TestGeneratorIndex:
    @pytest.mark.parametrize(
        "label, k, indices, negative",
        [("e14", 2, (1, 4), False), ("-e2", 1, (2,), True), ("e", 3, (), False), ("e1.10", 5, (1, 10), False)],
    )
    def test_parse(self, label, k, indices, negative):
        g = GeneratorIndex.parse(k, label)
        assert g.indices == indices and g.negative == negative
        assert g.label == label

    @given(st.integers(1, 6).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, 4**k - 1), st.booleans())))
    def test_label_roundtrip(self, args):
        k, mask, neg = args
        g = GeneratorIndex(k, mask, neg)
        assert GeneratorIndex.parse(k, g.label) == g

    @pytest.mark.parametrize("bad", ["f1", "e21", "e5", "e1x"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            GeneratorIndex.parse(2, bad)

    def test_mask_bounds(self):
        with pytest.raises(ValueError):
            GeneratorIndex(1, 0b100)
        with pytest.raises(ValueError):
            GeneratorIndex(0, 0)


class TestRepresentations:
    def test_vector_examples(self):
        assert gens.vector_generator_rep(1, 1) == E1
        assert gens.vector_generator_rep(2, 1) == mono_kron(I2, E1)
        assert gens.vector_generator_rep(2, 3) == mono_kron(E1, B)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_vectors_match_oracle(self, k):
        for i in range(1, 2 * k + 1):
            assert np.array_equal(dense(gens.vector_generator_rep(k, i)), oracle_vector(k, i))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_all_generators_match_oracle(self, k):
        for g in gens.enumerate_unsigned(k):
            assert np.array_equal(dense(gens.generator_rep(g)), oracle_generator(k, g.indices)), g

    def test_generator_examples(self):
        assert gens.generator_rep(GeneratorIndex(2, 0)) == identity(4)
        assert gens.generator_rep(GeneratorIndex.parse(1, "e12")) == E12
        g = GeneratorIndex.parse(4, "e1268")
        lifted = gens.vector_generator_rep(4, 1) @ gens.vector_generator_rep(4, 2) @ mono_kron(
            gens.generator_rep(GeneratorIndex.parse(3, "e46")), I2
        )
        assert gens.generator_rep(g) == lifted == gens.lifted_rep(g)

    def test_negative_generator(self):
        g = GeneratorIndex.parse(2, "-e3")
        assert gens.generator_rep(g) == -gens.generator_rep(g.unsigned())

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_lifting_recursion_exhaustive(self, k):
        for g in gens.enumerate_gamma_hat(k):
            assert gens.lifted_rep(g) == gens.generator_rep(g)

    @pytest.mark.parametrize("k, count", [(1, 8), (2, 32), (3, 128)])
    def test_gamma_hat_size(self, k, count):
        elems = list(gens.enumerate_gamma_hat(k))
        assert len(elems) == len(set(elems)) == count

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_pure_type(self, k):
        for rep in gens.all_reps(k):
            assert type_of(rep) in (EntryType.REAL, EntryType.IMAGINARY)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_verify_representations(self, k):
        report = gens.verify_representations(k)
        assert report.passed, report.failures

    def test_k_cap(self):
        with pytest.raises(ValueError):
            gens.all_reps(7)
        with pytest.raises(ValueError):
            list(gens.enumerate_unsigned(0))


class TestRelations:
    @pytest.mark.parametrize("k", range(1, 7))
    def test_relations(self, k):
        report = gens.clifford_relations_check(k)
        assert report.passed and report.details["vector_generators"] == 2 * k

    def test_corruption_detected_and_restored(self):
        with gens.corrupted_vector_generator(2, 3):
            report = gens.clifford_relations_check(2)
            assert not report.passed
            assert {f["invariant"] for f in report.failures} >= {"square"}
        assert gens.clifford_relations_check(2).passed
        assert gens.vector_generator_rep(2, 3) == mono_kron(E1, B)


class TestLifting:
    def test_examples(self):
        lifts = gens.lift_generator(GeneratorIndex.parse(3, "e46"))
        assert [g.label for g in lifts] == ["e68", "e168", "e268", "e1268"]
        assert [g.label for g in gens.lift_generator(GeneratorIndex(1, 0))] == ["e", "e1", "e2", "e12"]
        assert [g.label for g in gens.lift_generator(GeneratorIndex.parse(1, "e1"))] == [
            "e3", "e13", "e23", "e123",
        ]

    def test_signed_rejected(self):
        with pytest.raises(ValueError):
            gens.lift_generator(GeneratorIndex(1, 1, True))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_shifted_lift_is_tensor(self, k):
        for g in gens.enumerate_unsigned(k):
            gens.lift_generator(g, verify=True)
