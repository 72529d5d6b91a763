from fractions import Fraction

import pytest

import ermm


def test_sequences():
    assert ermm.catalan(3) == 5
    assert ermm.d_seq(3, 3)[-1] == 189
    assert all(isinstance(v, Fraction) for v in ermm.h_seq(2, 4))


def test_oracle_matches_diagrams():
    third = Fraction(1, 3)
    assert ermm.exact_cumulant("Y", 2, 1, 4, third) == Fraction(20, 3)
    assert ermm.exact_cumulant("Y", 2, 2, 4, "1/3") == Fraction(848, 27)
    for k in (1, 2):
        assert ermm.exact_cumulant("Y", 2, k, 5, third) == ermm.cumulant_via_diagrams("Y", 2, k, 5, third)


def test_quartic_identity():
    lhs, rhs = ermm.quartic_identity(4, Fraction(1, 2), 2)
    assert lhs == rhs


def test_full_limit():
    v = ermm.limit_cumulant("Y", 2, 2, "full", p=Fraction(1, 2))
    assert v["variable"] == ""
    assert v["exact"] == 4


def test_walk_stat_triangle():
    k3 = [(0, 1), (1, 2), (0, 2)]
    assert ermm.walk_stat(3, k3, 3, "X") == 6
    assert ermm.walk_stat(3, k3, 3, "Y") == 24


def test_simulate_is_deterministic():
    a = ermm.simulate("Y", 2, 50, 0.1, 40, seed=7, kmax=2)
    b = ermm.simulate("Y", 2, 50, 0.1, 40, seed=7, kmax=2, threads=2)
    assert a == b
    assert len(a["values"]) == 40
    assert [k for k, _, _ in a["cumulants"]] == [1, 2]
    assert ermm.sample_edges(30, 0.2, 7, 3) == ermm.sample_edges(30, 0.2, 7, 3)


def test_errors():
    with pytest.raises(ermm.ResourceError):
        ermm.exact_cumulant("Y", 3, 4, 20, Fraction(1, 10))
    with pytest.raises(ValueError):
        ermm.limit_cumulant("Y", 2, 2, "nowhere")


def test_cli():
    code, out, _ = ermm.run_cli(["tables", "--seq", "catalan", "--kmax", "4"])
    assert code == 0
    assert "quantity,paper_ref,value,target,stderr,pass" in out
    code, _, _ = ermm.run_cli(["no-such-command"])
    assert code == 2
