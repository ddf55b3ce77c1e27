"""Exception hierarchy shared by every module of the lab."""

from __future__ import annotations


class SpectralLabError(Exception):
    """Base class for all errors raised by spectral_lab."""


class DomainError(SpectralLabError, ValueError):
    """An argument lies outside the domain of an operation."""


class QuadratureError(SpectralLabError):
    """Adaptive quadrature failed to converge.

    ``trace`` records the bisection walk used to localise the failure as
    ``(a, b, value, abs_error, converged)`` tuples, outermost interval first.
    """

    def __init__(self, message: str, trace=()):
        super().__init__(message)
        self.trace = tuple(trace)

    def __str__(self) -> str:
        base = super().__str__()
        if not self.trace:
            return base
        lines = [base, "bisection trace:"]
        for a, b, value, err, ok in self.trace:
            flag = "ok" if ok else "FAILED"
            lines.append(f"  [{a:.6g}, {b:.6g}] value={value:.6g} err={err:.3g} {flag}")
        return "\n".join(lines)


class AmbiguousAtomError(SpectralLabError):
    """More than one atom matches a mass query within tolerance."""


class RenormalizationError(SpectralLabError):
    """Renormalization undefined (no particle atom, or Z = 0)."""


class PairingDivergentError(SpectralLabError):
    """The measure/test-function pairing does not converge."""


class DegreeUndetectableError(SpectralLabError):
    """The scaled values are too noisy or change sign; no degree can be fitted."""


class TheoremViolationError(SpectralLabError):
    """A finite-mass measure produced a degree above the free value.

    The bound is a theorem, so this always indicates a numerical fault in the
    pipeline (quadrature, grid, or fit window), never a physical result.
    """


class FitError(SpectralLabError):
    """A regression could not be performed on the supplied data."""
