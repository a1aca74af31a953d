"""Exception hierarchy shared by every beamhop module."""

from typing import Iterable


class BeamHoppingError(Exception):
    """Base class for all domain errors."""


class ScenarioParseError(BeamHoppingError, ValueError):
    """A scenario, population or pattern file could not be parsed."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ScenarioValidationError(BeamHoppingError, ValueError):
    """A scenario violates one of its invariants."""


class BelowHorizonError(ScenarioValidationError):
    """A cell is not visible from the satellite."""

    def __init__(self, cell_ids: Iterable[int]):
        self.cell_ids = sorted(int(i) for i in cell_ids)
        super().__init__(f"cells below the horizon (elevation <= 0 deg): {self.cell_ids}")


class GridExtentError(BeamHoppingError, ValueError):
    """More cells were requested than the tiling can provide."""


class InfeasibleInstanceError(BeamHoppingError):
    """The beam budget cannot illuminate every cell once (N_c > N_slot * N_b)."""


class DecodingInfeasibleError(BeamHoppingError):
    """Some cell cannot exceed the SINR threshold even without interference."""

    def __init__(self, cell_ids: Iterable[int]):
        self.cell_ids = sorted(int(i) for i in cell_ids)
        super().__init__(f"decoding infeasible for cells {self.cell_ids} (g_ii * rho <= gamma_th)")


class ProbabilityDomainError(BeamHoppingError, ValueError):
    """A probability formula was evaluated outside its domain."""


class InstanceTooLargeError(BeamHoppingError, ValueError):
    """An exhaustive or dense oracle was asked to handle too large an instance."""


class AffineTargetError(BeamHoppingError, ValueError):
    """Row-sum and column-sum targets of the affine set are inconsistent."""


class SylvesterSingularError(BeamHoppingError):
    """A and -B share an eigenvalue, so AX + XB = C has no unique solution."""


class PatternShapeError(BeamHoppingError, ValueError):
    """A pattern does not match the scenario dimensions."""


class UnservedCellError(BeamHoppingError, ValueError):
    """A pattern leaves some cell without any illuminated slot."""

    def __init__(self, cell_ids: Iterable[int]):
        self.cell_ids = sorted(int(i) for i in cell_ids)
        super().__init__(f"cells never illuminated: {self.cell_ids}")
