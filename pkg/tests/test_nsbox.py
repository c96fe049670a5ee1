import numpy as np
import pytest

from oracles import chsh_value
from ucorr import nsbox


def mixture(seed, n=2, m=2):
    rng = np.random.default_rng(seed)
    dets = nsbox.deterministic_boxes(n, m)
    lam = rng.dirichlet(np.ones(len(dets)))
    return nsbox.mixture_box(lam, dets)


def test_uniform_box_passes():
    ok, report = nsbox.is_nonsignalling(nsbox.uniform_box(2, 2).p)
    assert ok and report["violations"] == []


def test_deterministic_box_passes():
    box = nsbox.deterministic_box((1, 0), (0, 1), 2, 2)
    ok, _ = nsbox.is_nonsignalling(box.p)
    assert ok


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        nsbox.is_nonsignalling(np.zeros((2, 3, 2, 2)))


def test_constructed_signalling_violation_flags_correct_condition():
    box = nsbox.uniform_box(2, 2).p.copy()
    # move mass between Bob outputs in a single input slice: Alice's
    # summed-out marginal now depends on x
    box[0, 0, 0, 0] -= 0.2
    box[0, 1, 0, 0] += 0.2
    ok, report = nsbox.is_nonsignalling(box)
    assert not ok
    assert "alice_no_signalling" in [v["condition"] for v in report["violations"]]


def test_alice_marginal_depending_on_y_flags_condition_four():
    box = nsbox.uniform_box(2, 2).p.copy()
    # move mass between Alice outputs in slice (x, y) = (1, 1): Alice's
    # marginal at x = 1 differs between y = 0 and y = 1 by 0.2
    box[0, 0, 1, 1] -= 0.2
    box[1, 0, 1, 1] += 0.2
    ok, report = nsbox.is_nonsignalling(box)
    assert not ok
    conditions = [v["condition"] for v in report["violations"]]
    assert "bob_no_signalling" in conditions


def test_pr_box_passes_and_is_nonlocal():
    pr = nsbox.pr_box()
    ok, _ = nsbox.is_nonsignalling(pr.p)
    assert ok
    assert np.allclose(pr.p.sum(axis=0), 0.5)
    assert np.allclose(pr.p.sum(axis=1), 0.5)
    dist, _ = nsbox.local_hull_fit(pr)
    assert dist > 1e-4
    # independent certificate: the two-input correlation functional
    # separates the box from every deterministic vertex
    dets = nsbox.deterministic_boxes(2, 2)
    assert chsh_value(pr.p) == pytest.approx(4.0)
    assert max(chsh_value(v.p) for v in dets) == pytest.approx(2.0)


def test_pr_box_single_entry_perturbations_all_fail():
    pr = nsbox.pr_box()
    for idx in np.ndindex(pr.p.shape):
        for delta in (0.1, -0.1):
            bad = pr.p.copy()
            bad[idx] += delta
            ok, _ = nsbox.is_nonsignalling(bad)
            assert not ok


def test_mixtures_pass_and_fit_inside_hull():
    for seed in range(10):
        box = mixture(seed)
        ok, _ = nsbox.is_nonsignalling(box.p)
        assert ok
        dist, w = nsbox.local_hull_fit(box)
        assert dist <= 1e-8
        assert w.sum() == pytest.approx(1.0, abs=1e-9)


def test_to_functional_roundtrip_exact():
    for seed in range(50):
        box = mixture(seed)
        func = nsbox.to_functional(box)
        assert func.unit == pytest.approx(1.0, abs=1e-12)
        back = nsbox.from_functional(func)
        assert np.array_equal(back.p, box.p)


def test_to_functional_rejects_signalling_table():
    bad = nsbox.uniform_box(2, 2)
    bad.p[0, 0, 0, 0] += 0.2
    bad.p[0, 1, 0, 0] -= 0.2
    with pytest.raises(ValueError):
        nsbox.to_functional(bad)


def test_to_functional_is_affine():
    p = nsbox.pr_box()
    q = nsbox.uniform_box(2, 2)
    lam = 0.375
    mixed = nsbox.NSBox(2, 2, lam * p.p + (1 - lam) * q.p)
    lhs = nsbox.to_functional(mixed).coeffs
    rhs = lam * nsbox.to_functional(p).coeffs + (1 - lam) * nsbox.to_functional(q).coeffs
    assert np.array_equal(lhs, rhs)


def test_make_box_rejects_negative():
    p = nsbox.uniform_box(2, 2).p.copy()
    p[0, 0, 0, 0] -= 0.3
    p[1, 1, 0, 0] += 0.3
    with pytest.raises(ValueError):
        nsbox.make_box(p)


def test_larger_alphabet_roundtrip():
    box = mixture(3, n=2, m=3)
    ok, _ = nsbox.is_nonsignalling(box.p)
    assert ok
    back = nsbox.from_functional(nsbox.to_functional(box))
    assert np.array_equal(back.p, box.p)
