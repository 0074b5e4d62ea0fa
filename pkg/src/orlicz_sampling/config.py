"""JSON run configuration with strict field checking."""

import json
from dataclasses import asdict, dataclass, field

from .errors import ConfigError, OrliczError
from .nfunction import make_nfunction
from .sampling import CHECK_GROUPS, FAMILY_KINDS, FamilySpec

NF_KEYS = {"family", "alpha", "beta", "gamma", "normalize"}
FAMILY_KEYS = {"kind", "count", "seed"}
TOLERANCE_KEYS = {"tol_rel"}
T_GRID_KEYS = {"min", "max", "points"}
CONDITION_KEYS = {"sigma", "gamma", "p"}


@dataclass
class RunConfig:
    nfunctions: list
    degrees: list
    family: dict = field(default_factory=lambda: {"kind": "mixed", "count": 100, "seed": 0})
    checks: list = field(default_factory=lambda: ["simple", "zygmund", "upper", "lower"])
    tolerances: dict = field(default_factory=dict)
    output_dir: str = "out"
    claimed_cphi: float = None
    t_grid: dict = field(default_factory=lambda: {"min": 1e-6, "max": 1.0, "points": 200})
    condition_params: dict = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not isinstance(self.nfunctions, list) or not self.nfunctions:
            raise ConfigError("nfunctions must be a nonempty list")
        for spec in self.nfunctions:
            _keys(spec, NF_KEYS, "nfunction", required={"family", "alpha"})
        if not isinstance(self.degrees, list):
            raise ConfigError("degrees must be a list")
        if any(not isinstance(n, int) or isinstance(n, bool) or n < 1 for n in self.degrees):
            raise ConfigError("degrees must be positive integers")
        _keys(self.family, FAMILY_KEYS, "family", required=FAMILY_KEYS)
        if self.family["kind"] not in FAMILY_KINDS:
            raise ConfigError(f"family kind must be one of {FAMILY_KINDS}")
        if not isinstance(self.family["count"], int) or self.family["count"] < 1:
            raise ConfigError("family count must be a positive integer")
        if not isinstance(self.family["seed"], int) or self.family["seed"] < 0:
            raise ConfigError("family seed must be a non-negative integer")
        if not isinstance(self.checks, list) or any(c not in CHECK_GROUPS for c in self.checks):
            raise ConfigError(f"checks must be drawn from {sorted(CHECK_GROUPS)}")
        _keys(self.tolerances, TOLERANCE_KEYS, "tolerances")
        if not isinstance(self.output_dir, str) or not self.output_dir:
            raise ConfigError("output_dir must be a nonempty string")
        if self.claimed_cphi is not None and not _positive(self.claimed_cphi):
            raise ConfigError("claimed_cphi must be a positive number")
        _keys(self.t_grid, T_GRID_KEYS, "t_grid", required=T_GRID_KEYS)
        g = self.t_grid
        if not (0 < g["min"] < g["max"] <= 1) or not isinstance(g["points"], int) or g["points"] < 2:
            raise ConfigError("t_grid needs 0 < min < max <= 1 and points >= 2")
        if self.condition_params is not None:
            _keys(self.condition_params, CONDITION_KEYS, "condition_params", required=CONDITION_KEYS)
        self.phis()

    def phis(self):
        try:
            return [make_nfunction(**spec) for spec in self.nfunctions]
        except (OrliczError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad nfunction spec: {exc}") from None

    def family_spec(self, seed=None):
        f = self.family
        return FamilySpec(f["kind"], f["count"], f["seed"] if seed is None else seed)

    def to_dict(self):
        return asdict(self)

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config fields: {sorted(extra)}")
        missing = {"nfunctions", "degrees"} - set(data)
        if missing:
            raise ConfigError(f"missing config fields: {sorted(missing)}")
        return cls(**data)

    @classmethod
    def loads(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                return cls.loads(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None


def _positive(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and x > 0


def _keys(d, allowed, what, required=()):
    if not isinstance(d, dict):
        raise ConfigError(f"{what} must be an object")
    extra = set(d) - set(allowed)
    if extra:
        raise ConfigError(f"unknown {what} fields: {sorted(extra)}")
    missing = set(required) - set(d)
    if missing:
        raise ConfigError(f"missing {what} fields: {sorted(missing)}")
