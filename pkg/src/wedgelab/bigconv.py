"""Truncated products of integer sequences by Kronecker substitution.

Both operands are packed into single big integers (one fixed-width slot per
coefficient), multiplied once, and unpacked. Signed coefficients are handled
with a per-slot bias so packing and unpacking stay linear in the total bit
length. GMP (through gmpy2) does the multiplication when it is available.
"""

from __future__ import annotations

try:
    import gmpy2

    def _bigmul(x: int, y: int) -> int:
        return int(gmpy2.mpz(x) * gmpy2.mpz(y))

except ImportError:  # pragma: no cover - gmpy2 is a declared dependency

    def _bigmul(x: int, y: int) -> int:
        return x * y


def _bias_constant(count: int, nbytes: int) -> int:
    bias = 1 << (8 * nbytes - 1)
    return int.from_bytes(bias.to_bytes(nbytes, "little") * count, "little")


def pack(values: list[int], nbytes: int) -> int:
    """sum(values[i] * 2**(8*nbytes*i)); requires |v| < 2**(8*nbytes-1)."""
    bias = 1 << (8 * nbytes - 1)
    buf = b"".join((v + bias).to_bytes(nbytes, "little") for v in values)
    return int.from_bytes(buf, "little") - _bias_constant(len(values), nbytes)


def unpack(value: int, count: int, nbytes: int, total: int) -> list[int]:
    """Inverse of :func:`pack` for the first ``count`` of ``total`` slots."""
    bias = 1 << (8 * nbytes - 1)
    shifted = value + _bias_constant(total, nbytes)
    raw = shifted.to_bytes(total * nbytes + 1, "little")
    return [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - bias
        for i in range(count)
    ]


def _max_abs(values: list[int]) -> int:
    return max((abs(v) for v in values), default=0)


def convolve(a: list[int], b: list[int], n_out: int) -> list[int]:
    """First ``n_out`` coefficients of the product of two integer polynomials."""
    a = a[:n_out]
    b = b[:n_out]
    if n_out <= 0:
        return []
    if not a or not b:
        return [0] * n_out
    ma, mb = _max_abs(a), _max_abs(b)
    if ma == 0 or mb == 0:
        return [0] * n_out
    bound = min(len(a), len(b)) * ma * mb
    nbytes = (bound.bit_length() + 2 + 7) // 8
    prod = _bigmul(pack(a, nbytes), pack(b, nbytes))
    total = len(a) + len(b) - 1
    out = unpack(prod, min(n_out, total), nbytes, total)
    if len(out) < n_out:
        out.extend([0] * (n_out - len(out)))
    return out


def convolve_naive(a: list[int], b: list[int], n_out: int) -> list[int]:
    """Schoolbook reference product; used as an oracle in tests."""
    out = [0] * n_out
    for i, x in enumerate(a[:n_out]):
        if x:
            for j, y in enumerate(b[: n_out - i]):
                out[i + j] += x * y
    return out
