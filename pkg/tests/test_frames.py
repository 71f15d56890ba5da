"""Tight discrete coherent-state frames: Parseval, symbols, trace identity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylcs.domains import rectangle_domain
from weylcs.frames import (
    FrameError,
    adjoint,
    analytic_symbol,
    build_frame,
    forward,
    load_phase,
    phase_space_moment,
    save_phase,
    symbol,
    trace_via_frame,
)
from weylcs.operators import assemble_euclidean, assemble_hyperbolic
from weylcs.windows import c_constants, grad_norm_sq, make_bump_window, \
    make_cosine_window, scale


def frame_1d(N=128, h=0.05, eps=0.2):
    win = scale(make_cosine_window(1), eps)
    return build_frame(((0.0, N * h),), h, win)


def smooth_bump(t, center, radius):
    u = (t - center) / radius
    inside = np.abs(u) < 1.0
    safe = np.where(inside, 1.0 - u * u, 1.0)
    return np.where(inside, np.exp(-1.0 / safe), 0.0)


def test_parseval_1d():
    fr = frame_1d()
    rng = np.random.default_rng(0)
    for _ in range(100):
        f = rng.standard_normal(fr.n) + 1j * rng.standard_normal(fr.n)
        nf = fr.grid_norm_sq(f)
        assert abs(forward(fr, f).norm_sq() - nf) <= 1e-12 * nf


def test_lattice_sum_near_one():
    fr = frame_1d(N=160, h=0.0125, eps=0.2)
    assert abs(fr.s - 1.0) < 0.01


def test_no_wrap_rejected():
    win = scale(make_cosine_window(1), 0.6)
    with pytest.raises(FrameError):
        build_frame(((0.0, 1.0),), 0.05, win)


def test_non_cubic_rejected():
    win = scale(make_cosine_window(2), 0.1)
    with pytest.raises(FrameError):
        build_frame(((0.0, 1.0), (0.0, 2.0)), 0.05, win)


def test_forward_zero():
    fr = frame_1d(N=32)
    F = forward(fr, np.zeros(fr.n))
    assert np.all(F.values == 0.0)


def test_forward_impulse():
    fr = frame_1d(N=64)
    f = np.zeros(fr.n)
    f[20] = 1.0
    P = np.abs(forward(fr, f).values) ** 2  # [y, xi]
    assert np.max(P.std(axis=1)) < 1e-14 * P.max()
    offs = fr.h * 20 - fr.y_axis()
    offs = np.where(offs >= fr.L / 2, offs - fr.L, offs)
    offs = np.where(offs < -fr.L / 2, offs + fr.L, offs)
    g2 = fr.window(offs[:, None]) ** 2
    col = P[:, 0]
    sel = g2 > 1e-12 * g2.max()
    scale_fac = col[sel][0] / g2[sel][0]
    assert np.allclose(col[sel], scale_fac * g2[sel], rtol=1e-12)
    assert np.all(col[~sel] < 1e-12 * col.max())


def test_adjoint_inverts_forward():
    fr = frame_1d(N=64)
    rng = np.random.default_rng(1)
    f = rng.standard_normal(fr.n) + 1j * rng.standard_normal(fr.n)
    back = adjoint(fr, forward(fr, f))
    assert np.max(np.abs(back - f)) < 1e-12


def test_adjoint_zero():
    fr = frame_1d(N=32)
    F = forward(fr, np.zeros(fr.n))
    assert np.all(adjoint(fr, F) == 0.0)


def test_adjointness_by_direct_summation():
    fr = frame_1d(N=16, h=0.1)
    rng = np.random.default_rng(2)
    f = rng.standard_normal(fr.n) + 1j * rng.standard_normal(fr.n)
    F = forward(fr, rng.standard_normal(fr.n) + 1j * rng.standard_normal(fr.n))
    w = fr.weight_xi * fr.weight_y * fr.measure_normalizer / fr.s
    lhs = w * np.vdot(forward(fr, f).values * math.sqrt(fr.s),
                      F.values * math.sqrt(fr.s))
    rhs = fr.weight_y * np.vdot(f, adjoint(fr, F))
    assert abs(lhs - rhs) < 1e-12 * abs(rhs)


def test_symbol_converges_to_c1():
    eps = 0.2
    win = scale(make_cosine_window(1), eps)
    c1 = c_constants(win).c1
    errs = []
    for h in (eps / 20, eps / 40):
        dom = rectangle_domain(((0.0, 2.0),), h)
        op = assemble_euclidean(dom)
        fr = build_frame(((0.0, 2.0),), h, win)
        sv = symbol(fr, op, 0.0, 1.0)
        assert not sv.truncated
        errs.append(abs(sv.value - c1))
    assert 3.0 <= errs[0] / errs[1] <= 5.0


def test_symbol_general_xi():
    eps = 0.25
    win = scale(make_cosine_window(1), eps)
    h = eps / 50
    dom = rectangle_domain(((0.0, 2.0),), h)
    op = assemble_euclidean(dom)
    fr = build_frame(((0.0, 2.0),), h, win)
    for xi in (0.5, 1.7, 3.0):
        sv = symbol(fr, op, xi, 1.0)
        ref = analytic_symbol("euclidean", win, xi)
        assert abs(sv.value - ref) < 20.0 * (1.0 + xi ** 2) * h ** 2 / eps ** 2


def test_symbol_truncated_flag_near_boundary():
    eps = 0.3
    win = scale(make_cosine_window(1), eps)
    h = 0.02
    dom = rectangle_domain(((0.0, 2.0),), h)
    op = assemble_euclidean(dom)
    fr = build_frame(((0.0, 2.0),), h, win)
    assert symbol(fr, op, 0.0, 0.1).truncated
    assert not symbol(fr, op, 0.0, 1.0).truncated


def test_analytic_symbol_formulas():
    win = make_cosine_window(2)
    c = c_constants(win)
    assert analytic_symbol("euclidean", win, (0.0, 0.0)) == \
        pytest.approx(grad_norm_sq(win))
    win1 = make_cosine_window(1)
    c1 = c_constants(win1).c1
    assert analytic_symbol("hyperbolic", win1, (1.5,), (0.3,)) == \
        pytest.approx(1.5 ** 2 + c1)
    val = analytic_symbol("hyperbolic", win, (1.0, 1.0), (0.0, 0.5))
    assert val == pytest.approx(1.0 + c.c3 + c.c2 + c.c1, rel=1e-12)
    with pytest.raises(ValueError):
        analytic_symbol("elliptic", win, (0.0,))


def test_hyperbolic_symbol_d2():
    eps = 0.2 * math.sqrt(2.0)
    win = scale(make_cosine_window(2), eps)
    h = 1 / 60
    dom = rectangle_domain(((0.0, 1.0), (0.0, 1.0)), h)
    op = assemble_hyperbolic(dom)
    fr = build_frame(((0.0, 1.0), (0.0, 1.0)), h, win)
    sv = symbol(fr, op, (1.3, -0.7), (0.45, 0.5))
    ref = analytic_symbol("hyperbolic", win, (1.3, -0.7), (0.45, 0.5))
    assert not sv.truncated
    assert abs(sv.value - ref) < 0.05 * ref


def test_trace_identity_matrix():
    fr = frame_1d(N=16, h=0.1)
    tr = trace_via_frame(fr, np.eye(fr.n))
    assert tr == pytest.approx(fr.n, rel=1e-12)


def test_trace_random_diagonal():
    fr = frame_1d(N=32, h=0.1)
    d = np.random.default_rng(5).random(fr.n)
    tr = trace_via_frame(fr, np.diag(d))
    assert abs(tr - d.sum()) <= 1e-10 * d.sum()


def test_trace_rejects_asymmetric():
    fr = frame_1d(N=16, h=0.1)
    T = np.zeros((fr.n, fr.n))
    T[0, 1] = 1.0
    with pytest.raises(ValueError):
        trace_via_frame(fr, T)


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 8))
@settings(max_examples=60, deadline=None)
def test_jensen_direction(seed, n):
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((n, n))
    A = 0.5 * (B + B.T)
    e = rng.standard_normal(n)
    e /= np.linalg.norm(e)
    lam = rng.uniform(-3.0, 3.0)
    vals, vecs = np.linalg.eigh(A)
    T = (vecs * np.clip(lam - vals, 0.0, None)) @ vecs.T
    lhs = e @ T @ e
    rhs = max(lam - e @ A @ e, 0.0)
    assert lhs >= rhs - 1e-12


def test_frame_form_identity_xi1():
    # sum W xi^2 |Phi psi|^2 = ||D1 psi||^2 + c1 ||psi||^2 + O(h^2)
    L = 2.0
    win_base = make_bump_window(1)
    errs = []
    for N in (512, 1024):
        h = L / N
        win = scale(win_base, 0.25)
        fr = build_frame(((0.0, L),), h, win)
        psi = smooth_bump(fr.y_axis(), 1.0, 0.55)
        c = c_constants(win)
        lhs = phase_space_moment(fr, psi, lambda xi, y: xi[0] ** 2)
        d1 = (np.roll(psi, -1) - psi) / h
        rhs = h * np.sum(d1 ** 2) + c.c1 * h * np.sum(psi ** 2)
        errs.append(abs(lhs - rhs))
    assert 3.0 <= errs[0] / errs[1] <= 5.0


def test_frame_form_identity_tilde():
    # sum W e^{2 y1} xi2^2 |Phi psi|^2 = c2 ||e^{x1} psi||^2
    #                                  + c3 ||e^{x1} D2 psi||^2 + O(h^2)
    L = 2.0
    win_base = make_bump_window(2)
    errs = []
    for N in (64, 128):
        h = L / N
        win = scale(win_base, 0.25)
        fr = build_frame(((0.0, L), (0.0, L)), h, win)
        xs = fr.y_axis()
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        psi = smooth_bump(X, 1.0, 0.55) * smooth_bump(Y, 1.0, 0.55) \
            * np.cos(10.0 * math.pi * Y)
        c = c_constants(win)
        lhs = phase_space_moment(
            fr, psi.ravel(), lambda xi, y: math.exp(2.0 * y[0]) * xi[1] ** 2)
        d2 = (np.roll(psi, -1, axis=1) - psi) / h
        rhs = c.c2 * h * h * np.sum(np.exp(2.0 * X) * psi ** 2) \
            + c.c3 * h * h * np.sum(np.exp(2.0 * X) * d2 ** 2)
        errs.append(abs(lhs - rhs))
    assert 3.0 <= errs[0] / errs[1] <= 5.0


def test_phase_roundtrip(tmp_path):
    fr = frame_1d(N=32, h=0.1)
    rng = np.random.default_rng(9)
    F = forward(fr, rng.standard_normal(fr.n))
    path = tmp_path / "phase.bin"
    save_phase(F, path)
    back = load_phase(path, fr)
    ref = np.asarray(F.values, dtype=np.complex64)
    assert np.array_equal(np.asarray(back.values, dtype=np.complex64), ref)


def test_phase_file_layout(tmp_path):
    import struct

    fr = frame_1d(N=16, h=0.1)
    F = forward(fr, np.ones(fr.n))
    path = tmp_path / "phase.bin"
    save_phase(F, path)
    raw = path.read_bytes()
    assert raw[:8] == b"WCSPSF1\n"
    d, N = struct.unpack("<ii", raw[8:16])
    h, L, eps = struct.unpack("<ddd", raw[16:40])
    assert (d, N) == (1, 16)
    assert h == 0.1 and L == pytest.approx(1.6) and eps == 0.2
    assert len(raw) == 40 + 8 * fr.n * fr.n


def test_phase_load_rejects_mismatch(tmp_path):
    fr = frame_1d(N=16, h=0.1)
    other = frame_1d(N=32, h=0.1)
    F = forward(fr, np.ones(fr.n))
    path = tmp_path / "phase.bin"
    save_phase(F, path)
    with pytest.raises(FrameError):
        load_phase(path, other)
