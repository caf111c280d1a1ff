"""Binary and JSON containers for fields and kernels.

Binary layout (little endian)::

    magic      4 bytes   b"WLF1" (field) or b"WLK1" (kernel)
    kind       uint8     0 = symbol on a phase grid, 1 = configuration function
    n          uint32    base dimension
    L          float64
    N          uint32
    dtype      uint8     0 = complex64, 1 = complex128
    [kernel only] t float64, scaled uint8
    payload    row-major values
    [field only] uint32 length + UTF-8 sympy srepr of the generator (0 if none)
"""
from __future__ import annotations

import json
import struct

import numpy as np
import sympy as sp

from .errors import InvalidParameterError
from .grids import FunctionField, PhaseGrid, SymbolField, UniformGrid
from .quantization import OperatorKernel
from .symbolic import Analytic

FIELD_MAGIC = b"WLF1"
KERNEL_MAGIC = b"WLK1"
_HEAD = struct.Struct("<4sBIdIB")
_KERN = struct.Struct("<dB")
_DTYPES = {0: np.complex64, 1: np.complex128}


def _dtype_flag(dtype):
    dtype = np.dtype(dtype)
    if dtype == np.complex64:
        return 0
    if dtype == np.complex128:
        return 1
    raise InvalidParameterError(f"unsupported payload dtype {dtype}")


def _grid_of(field):
    if isinstance(field, SymbolField):
        return 0, field.grid.n
    return 1, field.grid.dim


def field_to_bytes(field, dtype=np.complex128):
    kind, n = _grid_of(field)
    g = field.grid
    head = _HEAD.pack(FIELD_MAGIC, kind, n, g.L, g.N, _dtype_flag(dtype))
    payload = np.ascontiguousarray(field.values, dtype=dtype).astype(np.dtype(dtype).newbyteorder("<")).tobytes()
    expr = sp.srepr(field.generator.expr).encode() if isinstance(field.generator, Analytic) else b""
    return head + payload + struct.pack("<I", len(expr)) + expr


def field_from_bytes(data):
    magic, kind, n, L, N, flag = _HEAD.unpack_from(data, 0)
    if magic != FIELD_MAGIC:
        raise InvalidParameterError(f"not a field container (magic {magic!r})")
    dtype = np.dtype(_DTYPES[flag]).newbyteorder("<")
    grid = PhaseGrid(n, L, N) if kind == 0 else UniformGrid(n, L, N)
    off = _HEAD.size
    count = grid.size
    values = np.frombuffer(data, dtype=dtype, count=count, offset=off).astype(np.complex128)
    off += count * dtype.itemsize
    gen = None
    if off < len(data):
        (k,) = struct.unpack_from("<I", data, off)
        if k:
            expr = sp.sympify(data[off + 4 : off + 4 + k].decode())
            cls_vars = SymbolField._variables(grid) if kind == 0 else FunctionField._variables(grid)
            gen = Analytic(expr, cls_vars)
    cls = SymbolField if kind == 0 else FunctionField
    return cls(grid, values.reshape(grid.shape), gen)


def kernel_to_bytes(kernel, dtype=np.complex128):
    g = kernel.grid
    head = _HEAD.pack(KERNEL_MAGIC, 1, g.dim, g.L, g.N, _dtype_flag(dtype))
    head += _KERN.pack(kernel.t, int(kernel.scaled))
    payload = np.ascontiguousarray(kernel.K, dtype=dtype).astype(np.dtype(dtype).newbyteorder("<")).tobytes()
    return head + payload


def kernel_from_bytes(data):
    magic, _, n, L, N, flag = _HEAD.unpack_from(data, 0)
    if magic != KERNEL_MAGIC:
        raise InvalidParameterError(f"not a kernel container (magic {magic!r})")
    t, scaled = _KERN.unpack_from(data, _HEAD.size)
    grid = UniformGrid(n, L, N)
    dtype = np.dtype(_DTYPES[flag]).newbyteorder("<")
    K = np.frombuffer(data, dtype=dtype, count=grid.size**2, offset=_HEAD.size + _KERN.size)
    return OperatorKernel(grid, t, K.astype(np.complex128).reshape(grid.size, grid.size), bool(scaled))


def save_field(path, field, dtype=np.complex128):
    with open(path, "wb") as fh:
        fh.write(field_to_bytes(field, dtype))


def load_field(path):
    with open(path, "rb") as fh:
        return field_from_bytes(fh.read())


def save_kernel(path, kernel, dtype=np.complex128):
    with open(path, "wb") as fh:
        fh.write(kernel_to_bytes(kernel, dtype))


def load_kernel(path):
    with open(path, "rb") as fh:
        return kernel_from_bytes(fh.read())


def field_to_json(field):
    kind, n = _grid_of(field)
    g = field.grid
    out = {
        "kind": "symbol" if kind == 0 else "function",
        "n": n,
        "L": g.L,
        "N": g.N,
        "real": field.values.real.ravel().tolist(),
        "imag": field.values.imag.ravel().tolist(),
    }
    if isinstance(field.generator, Analytic):
        out["expr"] = sp.srepr(field.generator.expr)
    return json.dumps(out, sort_keys=True)


def field_from_json(text):
    d = json.loads(text)
    if d["kind"] == "symbol":
        grid, cls = PhaseGrid(d["n"], d["L"], d["N"]), SymbolField
    else:
        grid, cls = UniformGrid(d["n"], d["L"], d["N"]), FunctionField
    values = np.asarray(d["real"]) + 1j * np.asarray(d["imag"])
    gen = None
    if "expr" in d:
        gen = Analytic(sp.sympify(d["expr"]), cls._variables(grid))
    return cls(grid, values.reshape(grid.shape), gen)


def load_any_field(path):
    """Load a field from the binary container or, for ``.json`` paths, from JSON."""
    if str(path).endswith(".json"):
        with open(path) as fh:
            return field_from_json(fh.read())
    return load_field(path)
