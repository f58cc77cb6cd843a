"""Reproducing kernels and Galerkin matrices of measure-driven Toeplitz operators.

Two kernels are instantiated: the Fock/Bargmann kernel exp(z.conj(w)/2) on
C^d with Gaussian weight (2 pi)^{-d} exp(-|z|^2/2) dm, and the Bergman kernel
of a polydisk (product of per-coordinate disk kernels).  For an atomic
measure the operator has finite rank and its Galerkin matrix on the
orthonormalized monomial basis is a diagonal rescaling of the moment matrix,
so the two ranks agree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import ComplexPoint, DiscreteMeasure, Polydisk, PolynomialWeight
from .moments import IndexBasis, NumericalError, monomial_table

__all__ = [
    "KernelSpec",
    "GalerkinMatrix",
    "DomainError",
    "kernel_eval",
    "toeplitz_apply",
    "galerkin_matrix",
    "spectrum",
]

_FACTORIAL_CAP = 40


class DomainError(ValueError):
    """A point required to lie inside the kernel's domain does not."""


@dataclass(frozen=True)
class KernelSpec:
    """Reproducing-kernel choice: "bargmann" (no domain) or "bergman_polydisk"."""

    kind: str
    domain: Polydisk | None = None

    def __post_init__(self):
        if self.kind not in ("bargmann", "bergman_polydisk"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "bergman_polydisk" and self.domain is None:
            raise ValueError("bergman_polydisk requires a domain")
        if self.kind == "bargmann" and self.domain is not None:
            raise ValueError("bargmann takes no domain")

    def check_point(self, point: ComplexPoint) -> None:
        if self.kind != "bergman_polydisk":
            return
        for z, c, r in zip(point.coords, self.domain.center.coords, self.domain.radii):
            if abs(z - c) >= r:
                raise DomainError(
                    f"point coordinate {z} lies outside the open disk of radius {r} "
                    f"around {c}"
                )


class GalerkinMatrix:
    """Entries (T e_alpha, e_beta) over the orthonormalized monomial basis."""

    def __init__(self, kernel: KernelSpec, basis: IndexBasis, entries: np.ndarray):
        entries = np.asarray(entries, dtype=complex)
        if entries.shape != (basis.size, basis.size):
            raise ValueError("entries shape does not match basis size")
        self.kernel = kernel
        self.basis = basis
        self.entries = entries

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def max_degree(self) -> int:
        return self.basis.max_degree

    def __repr__(self) -> str:
        return f"GalerkinMatrix({self.kernel.kind}, d={self.dimension}, D={self.max_degree})"


def kernel_eval(kernel: KernelSpec, z: ComplexPoint, w: ComplexPoint) -> complex:
    """Evaluate the reproducing kernel K(z, w)."""
    if z.dimension != w.dimension:
        raise ValueError("points must share a dimension")
    if kernel.kind == "bargmann":
        return complex(np.exp(sum(a * b.conjugate() for a, b in zip(z.coords, w.coords)) / 2))
    kernel.check_point(z)
    kernel.check_point(w)
    value = 1.0 + 0j
    for zj, wj, cj, rj in zip(
        z.coords, w.coords, kernel.domain.center.coords, kernel.domain.radii
    ):
        value *= (rj**2 / math.pi) / (rj**2 - (zj - cj) * (wj - cj).conjugate()) ** 2
    return value


def toeplitz_apply(
    kernel: KernelSpec, m: DiscreteMeasure, u: PolynomialWeight, z: ComplexPoint
) -> complex:
    """Apply the finite-rank operator of an atomic measure to a polynomial.

    (T u)(z) = sum_k K(z, zeta_k) lambda_k u(zeta_k); the image always lies in
    the span of the kernel sections K(., zeta_k).
    """
    if u.dimension != m.dimension or z.dimension != m.dimension:
        raise ValueError("dimension mismatch")
    total = 0j
    for atom in m.atoms:
        total += kernel_eval(kernel, z, atom.location) * atom.weight * u.evaluate(
            atom.location
        )
    return total


def _log_normalizers(kernel: KernelSpec, basis: IndexBasis) -> np.ndarray:
    """log of 1/||z^alpha|| for the kernel's monomial basis, per basis index.

    bargmann: ||z^alpha||^2 = 2^|alpha| alpha! under the Gaussian weight.
    bergman polydisk: per coordinate ||(z_j - c_j)^a||^2 = pi r^(2a+2) / (a+1),
    taken in the recentred coordinates (the atoms are recentred to match).
    """
    if basis.max_degree > _FACTORIAL_CAP:
        raise ValueError(
            f"basis degree {basis.max_degree} exceeds the factorial cap {_FACTORIAL_CAP}"
        )
    logs = np.zeros(basis.size)
    for i, mi in enumerate(basis.indices):
        if kernel.kind == "bargmann":
            log_norm_sq = mi.degree * math.log(2.0) + sum(
                math.lgamma(a + 1) for a in mi.entries
            )
        else:
            log_norm_sq = sum(
                math.log(math.pi) + (2 * a + 2) * math.log(r) - math.log(a + 1)
                for a, r in zip(mi.entries, kernel.domain.radii)
            )
        logs[i] = -0.5 * log_norm_sq
    return logs


def galerkin_matrix(
    kernel: KernelSpec, m: DiscreteMeasure, max_degree: int
) -> GalerkinMatrix:
    """Galerkin matrix (T e_alpha, e_beta) = sum_k lambda_k e_alpha(zeta_k) conj(e_beta(zeta_k)).

    e_alpha are the orthonormalized monomials of the kernel's space, so the
    result equals D A D for the moment matrix A (in recentred coordinates for
    the polydisk case) and a positive diagonal D; the ranks coincide.
    """
    basis = IndexBasis(m.dimension, max_degree)
    if kernel.kind == "bergman_polydisk":
        if kernel.domain.dimension != m.dimension:
            raise ValueError("kernel domain dimension does not match measure")
        for atom in m.atoms:
            kernel.check_point(atom.location)
        center = np.array(kernel.domain.center.coords, dtype=complex)
        points = m.locations_matrix() - center[np.newaxis, :]
    else:
        points = m.locations_matrix()
    if m.atoms:
        table = monomial_table(points, basis)
        scale = np.exp(_log_normalizers(kernel, basis))
        scaled = table * scale[np.newaxis, :]
        entries = (scaled * m.weights_vector()[:, np.newaxis]).T @ scaled.conj()
    else:
        entries = np.zeros((basis.size, basis.size), dtype=complex)
    return GalerkinMatrix(kernel, basis, entries)


def spectrum(gal: GalerkinMatrix) -> np.ndarray:
    """Eigenvalues of the Galerkin matrix, sorted by descending modulus.

    A dense nonsymmetric solver is used throughout: complex atom weights make
    the matrix non-Hermitian in general, and one code path keeps the ordering
    deterministic.
    """
    try:
        values = np.linalg.eigvals(gal.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver failed: {exc}") from exc
    order = np.lexsort((values.imag, values.real, -np.abs(values)))
    return values[order]
