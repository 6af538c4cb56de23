import hashlib
import json
from enum import Enum

from pydantic import BaseModel, Field, field_validator, model_validator

from strohhacker import config
from strohhacker.config import ANGULAR_COUNT, TOOL_VERSION


# ── Enums ─────────────────────────────────────────────
class FunctionalKind(str, Enum):
    CONVEXITY = "Convexity"          # 1 + z f''/f'
    STARLIKENESS = "Starlikeness"    # z f'/f
    SQRT_DERIVATIVE = "SqrtDerivative"  # sqrt(f' / (p z^(p-1)))
    POWER_RATIO = "PowerRatio"       # f / z^p


class TheoremId(str, Enum):
    T22 = "T22"
    T24 = "T24"
    T25 = "T25"
    T31 = "T31"
    T32 = "T32"
    T33 = "T33"
    T37 = "T37"
    T38 = "T38"
    LEMMA_PHI = "LemmaPhi"


class PsiId(str, Enum):
    T22 = "PsiT22"
    T24 = "PsiT24"
    T25 = "PsiT25"
    T31 = "PsiT31"
    T32 = "PsiT32"
    T33 = "PsiT33"
    T37 = "PsiT37"
    T38 = "PsiT38"


class FamilyId(str, Enum):
    MONOMIAL = "Monomial"
    HALF_PLANE_KERNEL = "HalfPlaneKernel"
    CONVEX_EXTREMAL = "ConvexExtremal"
    FIXED_B_PERTURBATION = "FixedBPerturbation"
    RANDOM_BOUNDED = "RandomBounded"
    DILATED_KERNEL = "DilatedKernel"          # (1 - rz)^(-b/r)
    KERNEL_PERTURBATION = "KernelPerturbation"  # (1 - z/2)^(-2b) (1 + eps tail)


class Status(str, Enum):
    HYPOTHESIS_FAILS = "HypothesisFails"
    VERIFIED = "Verified"
    VIOLATION = "VIOLATION"


# ── Disk sampling ─────────────────────────────────────
class DiskGrid(BaseModel):
    radii: tuple[float, ...]
    angular_count: int = ANGULAR_COUNT

    @field_validator("radii")
    @classmethod
    def _radii_increasing(cls, radii: tuple[float, ...]) -> tuple[float, ...]:
        if not radii:
            raise ValueError("at least one radius is required")
        if radii[0] <= 0 or radii[-1] >= 1:
            raise ValueError("radii must lie in (0, 1)")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly increasing")
        return radii

    @field_validator("angular_count")
    @classmethod
    def _power_of_two(cls, count: int) -> int:
        if count < 8 or count & (count - 1):
            raise ValueError("angular_count must be a power of two and at least 8")
        return count

    @classmethod
    def default(cls, levels: int = 10, angular_count: int = ANGULAR_COUNT) -> "DiskGrid":
        """Radii r_j = 1 - 2^(-j), j = 1..levels."""
        return cls(radii=tuple(1.0 - 2.0 ** (-j) for j in range(1, levels + 1)),
                   angular_count=angular_count)

    @classmethod
    def toward(cls, r_max: float, levels: int = 10, angular_count: int = ANGULAR_COUNT) -> "DiskGrid":
        """The default schedule cut below r_max, with r_max itself as the outermost radius."""
        inner = [1.0 - 2.0 ** (-j) for j in range(1, levels)]
        return cls(radii=tuple([r for r in inner if r < r_max] + [r_max]),
                   angular_count=angular_count)

    def refined(self, factor: int = 2) -> "DiskGrid":
        return DiskGrid(radii=self.radii, angular_count=self.angular_count * factor)

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    @property
    def fingerprint(self) -> str:
        payload = json.dumps({"radii": [repr(r) for r in self.radii],
                              "angular_count": self.angular_count}, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


class InfEstimate(BaseModel):
    value: float
    argmin: tuple[float, float]
    per_radius_min: list[float]
    min_modulus_denominator: float
    truncation_warning: bool = False

    @model_validator(mode="after")
    def _value_is_last(self) -> "InfEstimate":
        if self.per_radius_min and self.per_radius_min[-1] != self.value:
            raise ValueError("value must equal the minimum at the largest radius")
        return self

    @property
    def argmin_z(self) -> complex:
        return complex(*self.argmin)


class FunctionalCheck(BaseModel):
    kind: FunctionalKind
    bound: float
    margin: float
    passed: bool
    estimate: InfEstimate
    grid_fingerprint: str
    mode: str = "pointwise"


# ── Thresholds ────────────────────────────────────────
class ThresholdSpec(BaseModel):
    theorem_id: TheoremId
    p: int = Field(ge=1)
    b: float | None = Field(default=None, ge=0)
    input_level: float | None = None
    output_level: float


class RootQuadruple(BaseModel):
    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float


# ── Admissibility ─────────────────────────────────────
class AdmissibilityProblem(BaseModel):
    psi_id: PsiId
    p: int = Field(ge=1)
    b: float = Field(default=0.0, ge=0)
    level: float | None = None
    curve_k: float = Field(gt=0)
    zeta: float | None = None
    threshold: float


class SupReport(BaseModel):
    psi_id: PsiId
    sup_value: float
    arg_rho: float
    attained_at_infinity: bool
    margin: float
    threshold: float
    numeric_max: float
    asymptotic_limit: float
    curve_k: float
    rho_max: float
    samples: int
    certified: bool
    notes: list[str] = []


# ── Corpus ────────────────────────────────────────────
class FamilySpec(BaseModel):
    family_id: FamilyId
    p: int = Field(ge=1)
    b: float | None = Field(default=None, ge=0)
    parameter: float = 0.0
    seed: int = 0
    order: int = Field(default_factory=lambda: config.DEFAULT_ORDER, ge=0)


class CorpusEntry(BaseModel):
    function_id: str
    spec: FamilySpec
    p: int
    b: float | None
    unit_coeffs: list[list[float]]


class CorpusManifest(BaseModel):
    seed: int
    entries: list[CorpusEntry] = []


# ── Verification ──────────────────────────────────────
class Condition(BaseModel):
    kind: FunctionalKind
    bound: float


class ImplicationCase(BaseModel):
    case_id: str
    theorem_id: TheoremId
    p: int
    b: float | None = None
    level: float | None = None
    hypothesis: Condition
    conclusion: Condition

    @property
    def fixed_coefficient(self) -> bool:
        return self.theorem_id in {TheoremId.T31, TheoremId.T32, TheoremId.T33,
                                   TheoremId.T37, TheoremId.T38}


class VerificationReport(BaseModel):
    function_id: str
    case_id: str
    hypothesis_margin: float
    conclusion_margin: float
    status: Status
    grid_fingerprint: str
    truncation_warning: bool = False
    rechecked: bool = False


class CaseSummary(BaseModel):
    case_id: str
    counts: dict[str, int]
    skipped: int = 0


class SuiteReport(BaseModel):
    grid_fingerprint: str
    cases: list[CaseSummary] = []
    reports: list[VerificationReport] = []
    violations: int = 0
    passed: bool = True


class SharpnessResult(BaseModel):
    case_id: str
    seed: int
    evaluations: int
    accepted: int
    penalty_weight: float
    hypothesis_margin: float
    conclusion_margin: float
    objective_history: list[float]
    best_unit_coeffs: list[list[float]]
    status: Status


class RunMeta(BaseModel):
    tool_version: str = TOOL_VERSION
    seed: int | None = None
    grid_fingerprint: str | None = None
    notes: list[str] = []


# ── Service requests ──────────────────────────────────
class CertifyRequest(BaseModel):
    psi_id: PsiId
    p: int = Field(ge=1)
    b: float = Field(default=0.0, ge=0)
    level: float | None = None
    rho_max: float = Field(default=1e3, gt=0)
    samples: int = Field(default=2001, ge=64, le=200_001)


class CheckRequest(BaseModel):
    theorem_id: TheoremId
    p: int = Field(ge=1)
    b: float | None = Field(default=None, ge=0)
    level: float | None = None
    unit_coeffs: list[list[float]]
    levels: int = Field(default=10, ge=1, le=20)
    angular_count: int = ANGULAR_COUNT


class SharpnessRequest(BaseModel):
    theorem_id: TheoremId
    p: int = Field(ge=1)
    b: float | None = Field(default=None, ge=0)
    level: float | None = None
    free_degrees: int = Field(default=8, ge=1, le=64)
    budget: int = Field(default=200, ge=1, le=5000)
    seed: int = 0
    warm_start: bool = False
