"""Exception hierarchy shared by every hybridom module."""


class HybridomError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HybridomError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class ContractError(HybridomError, ValueError):
    """Inputs are individually valid but inconsistent with each other."""


class SolverError(HybridomError, RuntimeError):
    """A root finder failed to produce an admissible solution."""


class ArityError(HybridomError, ValueError):
    """Too few samples (or too short a record) for the requested operation."""


class GridTooCoarseError(HybridomError, ValueError):
    """Adjacent phase samples are too far apart to unwrap unambiguously."""

    def __init__(self, index, increment):
        self.index = index
        self.increment = increment
        super().__init__(
            f"grid too coarse: phase increment {increment:.6g} rad at index {index} "
            "is within 1e-6 of pi"
        )


class ConvergenceError(HybridomError, RuntimeError):
    """An adaptive refinement loop ran out of iterations."""

    def __init__(self, message, previous, last):
        self.previous = previous
        self.last = last
        super().__init__(f"{message} (last two estimates: {previous!r}, {last!r})")


class InstabilityError(HybridomError, RuntimeError):
    """The time-domain integration blew up."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"trajectory diverged at t = {t:.6g} s")


class StiffnessError(HybridomError, RuntimeError):
    """The adaptive step size underflowed."""

    def __init__(self, t):
        self.t = t
        super().__init__(
            f"step size underflow at t = {t:.6g} s; the problem is too stiff for the "
            "explicit integrator, use a relaxed gamma_m preset"
        )


class AlignmentError(HybridomError, ValueError):
    """A demodulation window does not span a whole number of beat periods."""


class ConfigError(HybridomError, ValueError):
    """Malformed scenario configuration."""


class UnknownKeyError(ConfigError):
    pass


class MissingKeyError(ConfigError):
    pass


class UnitSuffixError(ConfigError):
    pass


class ScenarioError(HybridomError, RuntimeError):
    """Every point of a scenario failed."""
