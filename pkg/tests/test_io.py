import numpy as np
import pytest
import sympy as sp

from weylab import io
from weylab.errors import InvalidParameterError
from weylab.families import random_function, random_symbol
from weylab.grids import PhaseGrid, SymbolField, UniformGrid
from weylab.quantization import build_kernel
from weylab.symbolic import phase_space_symbols

x, xi = phase_space_symbols(1)


def test_field_binary_round_trip(rng):
    a = random_symbol(PhaseGrid(1, 4, 16), rng)
    b = io.field_from_bytes(io.field_to_bytes(a))
    assert b.grid == a.grid
    assert np.array_equal(b.values, a.values)


def test_generator_survives_round_trip():
    g = PhaseGrid(1, 4, 16)
    a = SymbolField.from_generator(g, x * xi + sp.exp(-x**2))
    for b in (io.field_from_bytes(io.field_to_bytes(a)), io.field_from_json(io.field_to_json(a))):
        assert sp.simplify(b.generator.expr - a.generator.expr) == 0
        assert np.array_equal(b.values, a.values)


def test_function_field_round_trip(rng):
    f = random_function(UniformGrid(2, 3, 8), rng)
    b = io.field_from_bytes(io.field_to_bytes(f))
    assert b.grid == f.grid and np.array_equal(b.values, f.values)


def test_single_precision_payload(rng):
    a = random_symbol(PhaseGrid(1, 4, 16), rng)
    b = io.field_from_bytes(io.field_to_bytes(a, np.complex64))
    assert np.abs(b.values - a.values).max() <= 1e-6 * np.abs(a.values).max()
    with pytest.raises(InvalidParameterError):
        io.field_to_bytes(a, np.float64)


def test_kernel_round_trip(tmp_path, rng):
    K = build_kernel(random_symbol(PhaseGrid(1, 4, 32), rng), 0.25)
    path = tmp_path / "k.bin"
    io.save_kernel(path, K)
    K2 = io.load_kernel(path)
    assert K2.t == 0.25 and K2.scaled == K.scaled
    assert np.array_equal(K2.K, K.K)


def test_bad_magic(rng):
    K = build_kernel(random_symbol(PhaseGrid(1, 4, 16), rng), 0.5)
    with pytest.raises(InvalidParameterError):
        io.field_from_bytes(io.kernel_to_bytes(K))
    a = random_symbol(PhaseGrid(1, 4, 16), rng)
    with pytest.raises(InvalidParameterError):
        io.kernel_from_bytes(io.field_to_bytes(a))


def test_load_any_field(tmp_path, rng):
    a = random_symbol(PhaseGrid(1, 4, 16), rng)
    (tmp_path / "a.json").write_text(io.field_to_json(a))
    io.save_field(tmp_path / "a.bin", a)
    for name in ("a.json", "a.bin"):
        assert np.allclose(io.load_any_field(tmp_path / name).values, a.values, rtol=0, atol=1e-15)
