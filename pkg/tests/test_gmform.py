import random

import pytest

from crosscap.f2core import Genus, H1Matrix, H1Vector, SingularMatrixError, compose, transvection
from crosscap.gmform import (
    basis_value,
    preserves_q,
    q_eval,
    q_eval_recursive,
    q_table,
    z4_str,
)


def vec(g, text):
    return H1Vector.parse(Genus(g), text)


class TestEvaluation:
    def test_basis_values(self):
        assert q_eval(vec(4, "x1")) == 1
        assert q_eval(vec(4, "x3")) == 1
        assert q_eval(vec(4, "x2")) == 3
        assert q_eval(vec(4, "x4")) == 3
        assert q_eval(vec(4, "0")) == 0

    def test_two_index_values(self):
        assert q_eval(vec(4, "x1+x3")) == 2
        assert q_eval_recursive(vec(4, "x1+x3")) == 2
        assert q_eval(vec(4, "x1+x2")) == 0
        assert q_eval_recursive(vec(4, "x1+x2")) == 0  # 1 + 3 + 2*0 mod 4

    def test_four_index_value(self):
        assert q_eval(vec(4, "x1+x2+x3+x4")) == 0
        assert q_eval_recursive(vec(4, "x1+x2+x3+x4")) == 0

    @pytest.mark.parametrize("g", range(1, 11))
    def test_oracle_equality_exhaustive(self, g):
        genus = Genus(g)
        for bits in range(1 << g):
            v = H1Vector(genus, bits)
            assert q_eval(v) == q_eval_recursive(v)

    @pytest.mark.parametrize("g", range(1, 7))
    def test_quadratic_refinement_exhaustive(self, g):
        genus = Genus(g)
        qt = q_table(genus)
        for v in range(1 << g):
            for w in range(1 << g):
                lhs = qt[v ^ w]
                rhs = (qt[v] + qt[w] + 2 * ((v & w).bit_count() & 1)) % 4
                assert lhs == rhs

    def test_basis_value_function(self):
        assert basis_value(1) == 1
        assert basis_value(2) == 3
        assert basis_value(7) == 1

    def test_display(self):
        assert [z4_str(v) for v in range(4)] == ["0", "1", "2", "3"]
        assert [z4_str(v, signed=True) for v in range(4)] == ["0", "+1", "2", "-1"]


class TestPreservation:
    def test_identity(self):
        assert preserves_q(H1Matrix.identity(Genus(5))).preserves

    def test_good_transvection(self):
        assert preserves_q(transvection(vec(4, "x1+x3"))).preserves

    def test_bad_transvection_with_witness(self):
        verdict = preserves_q(transvection(vec(4, "x1+x2")))
        assert not verdict.preserves
        assert verdict.witness == vec(4, "x1")
        assert verdict.mode == "exhaustive"

    @pytest.mark.parametrize("g", range(2, 7))
    def test_transvection_criterion_exhaustive(self, g):
        # a transvection preserves the form exactly when its axis has value 2
        genus = Genus(g)
        for bits in range(1, 1 << g):
            if bits.bit_count() % 2:
                continue
            a = H1Vector(genus, bits)
            verdict = preserves_q(transvection(a))
            assert verdict.preserves == (q_eval(a) == 2)

    @pytest.mark.parametrize("g", range(2, 6))
    def test_triple_criterion_exhaustive(self, g):
        genus = Genus(g)
        vectors = [H1Vector(genus, b) for b in range(1, 1 << g)]
        zeros = [v for v in vectors if q_eval(v) == 0]
        for a in zeros:
            for b in zeros:
                if a == b or q_eval(a + b) != 0:
                    continue
                m = compose(
                    compose(transvection(a), transvection(b)), transvection(a + b)
                )
                assert preserves_q(m).preserves

    def test_basis_mode_matches_exhaustive(self):
        rng = random.Random(99)
        genus = Genus(6)
        for _ in range(200):
            while True:
                cols = tuple(rng.randrange(1 << 6) for _ in range(6))
                try:
                    m = H1Matrix(genus, cols)
                    break
                except SingularMatrixError:
                    continue
            full = preserves_q(m, mode="exhaustive")
            basis = preserves_q(m, mode="basis")
            assert full.preserves == basis.preserves
            if not basis.preserves:
                w = basis.witness
                assert q_eval(m.apply(w)) != q_eval(w)

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            preserves_q(H1Matrix.identity(Genus(3)), mode="quick")
