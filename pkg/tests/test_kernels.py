"""Kernel closed forms, tensor quadrature against an independent oracle, and
the zero-padded convolution paths."""

import math

import numpy as np
import pytest
from scipy import integrate, special

from pnpb.errors import DimensionMismatch, SingularAtZero, ValidationError
from pnpb.kernels import (
    KernelSpec,
    KernelTable,
    build_tensor,
    convolve,
    eval_kernel,
    load_table,
    save_table,
)
from pnpb.model import Grid


class TestClosedForms:
    def test_laplace_psi(self):
        assert eval_kernel(KernelSpec("laplace-psi", 1), 2.0) == pytest.approx(-1.0)
        assert eval_kernel(KernelSpec("laplace-psi", 2), 1.0) == pytest.approx(0.0)
        assert eval_kernel(KernelSpec("laplace-psi", 3), 1.0) == pytest.approx(
            1.0 / (4 * math.pi)
        )

    def test_screened_w(self):
        s = KernelSpec("screened-w", 1, lam=2.0)
        assert eval_kernel(s, 2.0) == pytest.approx(math.exp(-1.0) / 4.0)
        s = KernelSpec("screened-w", 2, lam=1.0)
        assert eval_kernel(s, 0.5) == pytest.approx(special.k0(0.5) / (2 * math.pi))
        s = KernelSpec("screened-w", 3, lam=1.0)
        assert eval_kernel(s, 1.0) == pytest.approx(math.exp(-1.0) / (4 * math.pi))

    def test_fourpbik_1d(self):
        s = KernelSpec("fourpbik-k", 1, lam=2.0, nu=3.0)
        r = 1.5
        assert eval_kernel(s, r) == pytest.approx(-(r + 2.0 * math.exp(-r / 2.0)) / 18.0)

    def test_fourpbik_3d_removable_singularity(self):
        s = KernelSpec("fourpbik-k", 3, lam=2.0, nu=1.0)
        limit = 1.0 / (4 * math.pi * 2.0)
        assert eval_kernel(s, 0.0) == pytest.approx(limit)
        # continuous approach to the limit
        assert eval_kernel(s, 1e-8) == pytest.approx(limit, rel=1e-7)

    def test_picard_and_log(self):
        s = KernelSpec("screened-1d-picard", 1, lam=0.5, nu=2.0)
        assert eval_kernel(s, 1.0) == pytest.approx(0.5 / 8.0 * math.exp(-2.0))
        assert eval_kernel(KernelSpec("log-2d", 2), 1.0) == pytest.approx(0.0)

    def test_singular_families_raise_at_zero(self):
        for fam, d in [("laplace-psi", 2), ("laplace-psi", 3), ("screened-w", 2),
                       ("screened-w", 3), ("fourpbik-k", 2), ("log-2d", 2)]:
            with pytest.raises(SingularAtZero):
                eval_kernel(KernelSpec(fam, d, lam=1.0), 0.0)

    def test_negative_radius_rejected(self):
        with pytest.raises(ValidationError):
            eval_kernel(KernelSpec("laplace-psi", 1), -1.0)

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            KernelSpec("no-such-family", 1)
        with pytest.raises(ValidationError):
            KernelSpec("screened-w", 2, lam=0.0)
        with pytest.raises(ValidationError):
            KernelSpec("log-2d", 1)
        with pytest.raises(ValidationError):
            KernelSpec("screened-1d-picard", 2, lam=1.0)


def oracle_tensor_1d(spec, dx, m, tol=1e-12):
    """Independent hat-weighted quadrature, single adaptive pass with explicit
    breakpoints at the hat kink and the kernel kink."""
    pts = [0.0]
    if -1.0 < m < 1.0:
        pts.append(float(m))

    def f(x):
        return eval_kernel(spec, abs((m - x) * dx)) * (1.0 - abs(x))

    val, err = integrate.quad(f, -1.0, 1.0, points=sorted(set(pts)),
                              epsabs=tol, epsrel=tol, limit=400)
    return dx * val


def oracle_tensor_2d(spec, dx, m, n):
    """Independent dblquad over the four unit squares of the hat support."""
    total = 0.0
    for ax in (-1.0, 0.0):
        for ay in (-1.0, 0.0):
            def f(y, x):
                r = math.hypot((m - x) * dx, (n - y) * dx)
                if r == 0.0:
                    return 0.0
                return eval_kernel(spec, r) * (1.0 - abs(x)) * (1.0 - abs(y))

            val, _ = integrate.dblquad(f, ax, ax + 1.0, ay, ay + 1.0,
                                       epsabs=1e-12, epsrel=1e-12)
            total += val
    return dx * dx * total


class TestTensor1D:
    def test_picard_center_value_closed_form(self):
        # dx * int_0^1 e^{-dx x}(1-x) dx at dx = 1/2 evaluates to -1 + 2 e^{-1/2}
        grid = Grid(1, 2, half_extent=1.0)
        table = build_tensor(KernelSpec("screened-1d-picard", 1, 1.0, 1.0), grid)
        assert table.value_at(0) == pytest.approx(-1.0 + 2.0 * math.exp(-0.5), abs=1e-13)
        assert table.value_at(0) == pytest.approx(0.2130613194252668, abs=1e-13)

    @pytest.mark.parametrize("family,lam,nu", [
        ("screened-1d-picard", 1.0, 1.0),
        ("screened-1d-picard", 0.3, 2.0),
        ("fourpbik-k", 1.0, 1.0),
        ("laplace-psi", 0.0, 1.0),
        ("screened-w", 0.7, 1.0),
    ])
    def test_matches_adaptive_oracle(self, family, lam, nu):
        grid = Grid(1, 5, half_extent=0.5)
        spec = KernelSpec(family, 1, lam, nu)
        table = build_tensor(spec, grid)
        for m in (-7, -1, 0, 1, 2, 10):
            assert table.value_at(m) == pytest.approx(
                oracle_tensor_1d(spec, grid.dx, m), abs=1e-10
            )

    def test_even_symmetry(self):
        grid = Grid(1, 8)
        table = build_tensor(KernelSpec("fourpbik-k", 1, 1.0, 1.0), grid)
        assert np.array_equal(table.values, table.values[::-1])


@pytest.fixture(scope="module")
def log_table():
    grid = Grid(2, 4, half_extent=0.16)
    spec = KernelSpec("log-2d", 2, 0.0, 1.0)
    return grid, spec, build_tensor(spec, grid)


class TestTensor2D:
    def test_matches_dblquad_oracle(self, log_table):
        grid, spec, table = log_table
        for m, n in [(0, 0), (1, 0), (1, 1), (2, 1), (5, 3), (8, 0)]:
            assert table.value_at(m, n) == pytest.approx(
                oracle_tensor_2d(spec, grid.dx, m, n), abs=1e-10
            )

    def test_full_symmetry_group(self, log_table):
        _, _, table = log_table
        v = table.values
        assert np.array_equal(v, v.T)
        assert np.array_equal(v, v[::-1, ::-1])
        assert np.array_equal(v, v[::-1, :])

    def test_separable_structure(self):
        grid = Grid(2, 3, half_extent=0.3)
        t2 = build_tensor(KernelSpec("separable-x-1d", 2, 1.0, 1.0), grid)
        g1 = Grid(1, 3, half_extent=0.3)
        t1 = build_tensor(KernelSpec("screened-1d-picard", 1, 1.0, 1.0), g1)
        assert np.allclose(t2.values[:, 2 * grid.n], t1.values, atol=1e-14)
        mask = np.ones(t2.values.shape[1], dtype=bool)
        mask[2 * grid.n] = False
        assert np.all(t2.values[:, mask] == 0.0)

    def test_dim_mismatch_rejected(self):
        with pytest.raises(DimensionMismatch):
            build_tensor(KernelSpec("log-2d", 2), Grid(1, 4))


class TestConvolve:
    def test_matches_toeplitz_sum_1d(self):
        grid = Grid(1, 8)
        table = build_tensor(KernelSpec("screened-1d-picard", 1, 1.0, 1.0), grid)
        rng = np.random.default_rng(7)
        rho = rng.standard_normal(grid.n_cells_axis)
        expected = np.zeros_like(rho)
        for j in range(-grid.n, grid.n + 1):
            for p in range(-grid.n, grid.n + 1):
                expected[j + grid.n] += rho[p + grid.n] * table.value_at(j - p)
        for method in ("fft", "direct"):
            assert np.allclose(convolve(table, rho, method), expected, atol=1e-13)

    def test_matches_toeplitz_sum_2d(self):
        grid = Grid(2, 3, half_extent=0.3)
        table = build_tensor(KernelSpec("separable-x-1d", 2, 1.0, 1.0), grid)
        rng = np.random.default_rng(3)
        rho = rng.standard_normal(grid.shape)
        k = grid.n
        expected = np.zeros_like(rho)
        for j1 in range(-k, k + 1):
            for j2 in range(-k, k + 1):
                for p1 in range(-k, k + 1):
                    for p2 in range(-k, k + 1):
                        expected[j1 + k, j2 + k] += rho[p1 + k, p2 + k] * table.value_at(
                            j1 - p1, j2 - p2
                        )
        for method in ("fft", "direct"):
            assert np.allclose(convolve(table, rho, method), expected, atol=1e-12)

    def test_no_periodic_wrap(self):
        # a point mass at the left edge must not leak to the right edge through
        # any circular wrap: the response must be the translated kernel row
        grid = Grid(1, 16)
        table = build_tensor(KernelSpec("screened-1d-picard", 1, 0.2, 1.0), grid)
        rho = np.zeros(grid.n_cells_axis)
        rho[0] = 1.0
        phi = convolve(table, rho)
        expected = np.array([table.value_at(j) for j in range(0, 2 * grid.n + 1)])
        assert np.allclose(phi, expected, atol=1e-15)

    def test_fft_direct_agree(self):
        grid = Grid(1, 256)
        table = build_tensor(KernelSpec("screened-1d-picard", 1, 1.0, 1.0), grid)
        rng = np.random.default_rng(11)
        rho = rng.standard_normal(grid.n_cells_axis)
        a = convolve(table, rho, "fft")
        b = convolve(table, rho, "direct")
        assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))

    def test_shape_check(self):
        grid = Grid(1, 8)
        table = build_tensor(KernelSpec("screened-1d-picard", 1, 1.0, 1.0), grid)
        with pytest.raises(DimensionMismatch):
            convolve(table, np.zeros(5))


class TestCache:
    def test_roundtrip_bit_exact(self, tmp_path):
        grid = Grid(1, 12, half_extent=0.6)
        table = build_tensor(KernelSpec("fourpbik-k", 1, 0.7, 1.3), grid)
        path = tmp_path / "table.bin"
        save_table(table, path)
        loaded = load_table(path)
        assert loaded.spec == table.spec
        assert loaded.n == table.n and loaded.dx == table.dx
        assert np.array_equal(loaded.values, table.values)

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"not a table")
        with pytest.raises(ValidationError):
            load_table(path)
