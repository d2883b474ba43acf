"""Engine selection: compiled kernel when available and applicable, else pure.

The compiled kernel handles factors up to 64 bits each (products up to 128
bits), which covers everything the outer search produces for targets up to
127 bits. Larger tasks always run on the pure engine.
"""

from __future__ import annotations

try:
    from . import _kernel
except ImportError:  # built without the extension; pure engine still works
    _kernel = None

BACKENDS = ("auto", "pure", "compiled")


def kernel_available() -> bool:
    return _kernel is not None


def kernel_fits(a_bits: int, b_bits: int) -> bool:
    return a_bits <= 64 and b_bits <= 64 and a_bits + b_bits <= 128


def resolve_backend(requested: str, a_bits: int, b_bits: int) -> str:
    """Concrete backend for one task; raises if an explicit request can't be met."""
    if requested == "pure":
        return "pure"
    if requested == "compiled":
        if _kernel is None:
            raise RuntimeError("compiled kernel is not installed")
        if not kernel_fits(a_bits, b_bits):
            raise ValueError(
                f"compiled kernel limited to 64-bit factors, got {a_bits}+{b_bits} bits"
            )
        return "compiled"
    if requested == "auto":
        if _kernel is not None and kernel_fits(a_bits, b_bits):
            return "compiled"
        return "pure"
    raise ValueError(f"unknown backend {requested!r}; expected one of {BACKENDS}")


def get_kernel():
    return _kernel
