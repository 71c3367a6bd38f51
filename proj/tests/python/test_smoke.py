import os
from pathlib import Path

import pytest

import lfbsde

DATA = Path(os.environ.get("LFBSDE_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def ex2():
    c = lfbsde.CoeffMatrix(f=[5, 3, 5], b=[3, 1, -2], sigma=[5, 2, 4])
    return lfbsde.LinearFBSDE(c, -4.0, 1.0, 1.0)


def ex313():
    c = lfbsde.CoeffMatrix(f=[-2, 0, 1], b=[1, -1, -2], sigma=[0, 2, 1])
    return lfbsde.LinearFBSDE(c, -1.0, 1.0, 1.0)


def test_polynomials():
    f = ex2()
    assert lfbsde.l_poly(f.coeffs) == (-8, -23, 11, 5)
    assert lfbsde.h_poly(f.coeffs) == (8, -23, -11, 5)
    roots = lfbsde.real_roots(8, -23, -11, 5)
    assert any(abs(r + 0.658) < 1e-3 for r in roots)


def test_criteria():
    f = ex313()
    assert lfbsde.check_monotonicity(f)["decided"] == "NotDecided"
    v = lfbsde.check_lemma38(f)
    assert v["decided"] == "WellPosed"
    assert v["criterion"] == "Lemma3.8(i)"


def test_transform():
    t = lfbsde.transform(ex2(), 1.0, -0.658)
    assert t["verdict"]["criterion"] == "Prop4.2(i)"
    assert t["h_tilde"] == pytest.approx(1.55, abs=0.01)
    assert abs(t["tilde"]["f"][0]) < 0.01


def test_verify_small():
    rep = lfbsde.verify_instance(ex313(), dt=2e-3, paths=500, seed=3)
    assert rep["within_bound"]


def test_solve_lq_printed():
    lq = lfbsde.LQProblem(1, 1, 1, 2, 1, 2, -1, -4, 1, 1)
    sol = lfbsde.solve_lq(lq, printed=True, paths=200)
    assert sol["route"] == "Prop4.2(i)"
    assert sol["law"]["rendered"] == "u = 2 x + y + 2 z"


def test_parse_config_and_errors():
    doc = lfbsde.parse_config((DATA / "ex313.json").read_text())
    assert doc["h"] == -1
    with pytest.raises(lfbsde.Error):
        lfbsde.parse_config('{"kind":"fbsde","b":[0,0,0]}')
