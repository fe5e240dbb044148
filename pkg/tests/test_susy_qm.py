import numpy as np
import pytest

from superkit.susy_qm import build_operators, index, safe_states, verify_susy_qm


def test_basis_layout():
    assert index(3, 0, 5) == 3 and index(3, 1, 5) == 8
    assert len(safe_states(5)) == 8
    with pytest.raises(ValueError):
        build_operators(1)


def test_exact_and_float_agree():
    ex = build_operators(4, exact=True)
    fl = build_operators(4)
    for k in ("H", "Q", "a", "c+"):
        assert np.allclose(np.array(ex[k].tolist(), dtype=float), fl[k])


def test_full_report_passes():
    rep = verify_susy_qm(12)
    assert rep.passed, [c.name for c in rep.failures()]
    assert len(rep.checks) == 17


def test_hamiltonian_is_Q_squared_not_twice():
    ops = build_operators(6)
    safe = safe_states(6)
    QQ = ops["Q"] @ ops["Q"]
    assert np.allclose(QQ[:, safe], ops["H"][:, safe])
    assert not np.allclose(2 * QQ[:, safe], ops["H"][:, safe])


def test_negative_control():
    rep = verify_susy_qm(8, fermion_weight=2)
    assert not rep.passed
    names = {c.name for c in rep.failures()}
    assert "Q^2 = H on safe states (exact)" in names
