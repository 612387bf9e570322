"""Run configuration shared by the command-line tools."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .coneshear import ConeParams, ConeSystem, ConeValidationError, feasible_jmax
from .filters1d import DEFAULT_THETA
from .gaborwin import max_epsilon
from .groupshear import GroupParams, GroupSystem, GroupValidationError

CONFIG_VERSION = "gaborshear-config/1"


class ConfigError(ValueError):
    """Raised for malformed or inconsistent configurations."""


@dataclass(frozen=True)
class RunConfig:
    N: int = 256
    system: str = "cone"
    family: str = "meyer"
    nu_kind: str = "poly4"
    M: int = 16
    epsilon: float | None = None
    N0: int = 4
    tau: int = 3
    j0: int = 0
    jmax: int | None = None
    slope_max: float = 2.0
    spacing1: float = 0.35
    spacing2: float = 0.7
    min_samples: int = 16
    seed: int = 0

    def __post_init__(self) -> None:
        def fail(key: str, msg: str) -> None:
            raise ConfigError(f"{key}: {msg}")

        for key in ("N", "M", "N0", "tau", "j0", "min_samples", "seed"):
            if not isinstance(getattr(self, key), int) or isinstance(getattr(self, key), bool):
                fail(key, f"must be an integer, got {getattr(self, key)!r}")
        if self.jmax is not None and (not isinstance(self.jmax, int) or isinstance(self.jmax, bool)):
            fail("jmax", f"must be an integer or null, got {self.jmax!r}")
        if self.N < 4 or self.N & (self.N - 1):
            fail("N", f"must be a power of two >= 4, got {self.N}")
        if self.system not in ("group", "cone"):
            fail("system", f"must be 'group' or 'cone', got {self.system!r}")
        if self.family not in ("meyer", "shannon"):
            fail("family", f"must be 'meyer' or 'shannon', got {self.family!r}")
        if self.nu_kind not in ("poly4", "step"):
            fail("nu_kind", f"must be 'poly4' or 'step', got {self.nu_kind!r}")
        if self.M != 16:
            fail("M", f"the shearlet systems use 16 bands, got {self.M}")
        if self.tau < 1 or self.N0 < 1:
            fail("tau", "N0 and tau must be positive")
        if self.system == "cone" and self.tau >= self.N0:
            fail("tau", f"must be smaller than N0, got tau={self.tau}, N0={self.N0}")
        if self.j0 < 0:
            fail("j0", "must be non-negative")
        theta = 0.0 if self.family == "shannon" else DEFAULT_THETA
        top = feasible_jmax(self.N, theta)
        if self.jmax is not None and self.jmax > top:
            fail("jmax", f"{self.jmax} is too large for N={self.N}; the largest feasible value is {top}")
        if self.jmax is not None and self.jmax < self.j0:
            fail("jmax", f"{self.jmax} is below j0={self.j0}")
        if self.j0 > top:
            fail("j0", f"{self.j0} exceeds the largest feasible scale {top} for N={self.N}")
        eps = self.effective_epsilon
        if not 0 < eps <= 0.5:
            fail("epsilon", f"must lie in (0, 1/2], got {eps}")
        if self.system == "cone" and eps > max_epsilon(self.N0, self.tau) + 1e-12:
            fail("epsilon", f"{eps} exceeds {max_epsilon(self.N0, self.tau):.6g}, the tight limit for N0={self.N0}, tau={self.tau}")
        for key in ("slope_max", "spacing1", "spacing2"):
            if not getattr(self, key) > 0:
                fail(key, "must be positive")

    @property
    def effective_epsilon(self) -> float:
        if self.epsilon is not None:
            return float(self.epsilon)
        if self.system == "group":
            return 0.25
        return min(0.5, max_epsilon(self.N0, self.tau)) if self.tau < self.N0 else 0.25

    @property
    def effective_jmax(self) -> int:
        theta = 0.0 if self.family == "shannon" else DEFAULT_THETA
        return feasible_jmax(self.N, theta) if self.jmax is None else self.jmax

    def cone_params(self) -> ConeParams:
        return ConeParams(
            N0=self.N0, tau=self.tau, epsilon=self.effective_epsilon, family=self.family, profile=self.nu_kind,
            j0=self.j0, jmax=self.effective_jmax, spacing1=self.spacing1, spacing2=self.spacing2,
            min_samples=self.min_samples,
        )

    def group_params(self) -> GroupParams:
        return GroupParams(
            epsilon=self.effective_epsilon, family=self.family, profile=self.nu_kind, j0=self.j0,
            jmax=self.effective_jmax, slope_max=self.slope_max, spacing1=self.spacing1, spacing2=self.spacing2,
            min_samples=self.min_samples,
        )

    def build_system(self) -> ConeSystem | GroupSystem:
        try:
            if self.system == "cone":
                return ConeSystem(self.cone_params(), self.N)
            return GroupSystem(self.group_params(), self.N)
        except (ConeValidationError, GroupValidationError) as exc:
            raise ConfigError(str(exc)) from None

    def effective(self) -> dict[str, Any]:
        """All fields with defaults resolved, plus the format version."""
        out = dataclasses.asdict(self)
        out["epsilon"] = self.effective_epsilon
        out["jmax"] = self.effective_jmax
        out["version"] = CONFIG_VERSION
        return out


def config_from_dict(data: dict[str, Any], **overrides: Any) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    known = {f.name for f in dataclasses.fields(RunConfig)}
    extra = sorted(set(data) - known - {"version"})
    if extra:
        raise ConfigError(f"unknown key(s): {', '.join(extra)}")
    merged = {k: v for k, v in data.items() if k != "version"}
    merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None, **overrides: Any) -> RunConfig:
    """Read a JSON configuration; ``None`` gives the defaults. Overrides that are not ``None`` win."""
    if path is None:
        return config_from_dict({}, **overrides)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return config_from_dict(data, **overrides)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
