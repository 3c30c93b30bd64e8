"""Run configuration.

A run is described by a JSON document such as::

    {
      "profiles": {"kind": "constant", "parameters": {"rho0": 1.0}},
      "flow": {"d": 1.0, "g": 2.0, "p0": -1.0, "Lambda": 6.283185307179586},
      "background": "laminar",
      "amplitude": 0.01,
      "grid": {"Nx": 48, "Ny": 24},
      "options": {"tau_samples": 9, "period_multiple": 3, "j_max": 4, "tol_zero": 1e-6},
      "output": {"out_dir": "stratawave-out"}
    }

Every section is optional. Command-line flags override file values.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from stratawave.errors import ConfigurationError
from stratawave.flow.field import FlowParameters, WaveField
from stratawave.flow.laminar import LaminarProfile, bifurcation_tau, solve_laminar
from stratawave.flow.profiles import FluidProfiles, ProfileKind, make_profiles
from stratawave.flow.stokes import stokes_field

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
BACKGROUNDS = ("laminar", "stokes")
BLOCH_FORMS = ("quasiperiodic", "shifted")
SECTIONS = {"profiles", "flow", "background", "amplitude", "grid", "options", "output"}


@dataclass
class ProfileConfig:
    kind: str = "constant"
    parameters: Dict[str, Any] = field(default_factory=dict)


@dataclass
class FlowConfig:
    """Physical parameters.

    ``Lambda`` fixes the period of a laminar background; ``period_scale``,
    when set, replaces it by that multiple of the bifurcation period. A
    Stokes background expands at ``tau`` when given, otherwise at the
    bifurcation wavenumber divided by ``period_scale`` (1 when unset).
    """

    d: float = 1.0
    g: float = 2.0
    p0: float = -1.0
    Lambda: Optional[float] = 2.0 * math.pi
    period_scale: Optional[float] = None
    tau: Optional[float] = None


@dataclass
class GridConfig:
    Nx: int = 48
    Ny: int = 24


@dataclass
class SpectralOptions:
    """Command options and tolerances."""

    tau_samples: int = 9
    period_multiple: int = 3
    j_max: int = 4
    tol_zero: float = 1e-6
    margin_floor: float = 1e-8
    kernel_tol: float = 5e-2
    lhs_tol: float = 1e-8
    u1_zero_tol: float = 1e-6
    curvature: Optional[float] = None
    bloch_window: int = 2
    bloch_form: str = "quasiperiodic"
    seed: int = 1234


@dataclass
class OutputConfig:
    out_dir: str = "stratawave-out"
    export_coo: bool = False


@dataclass
class RunConfig:
    """Resolved configuration of one command."""

    profiles: ProfileConfig = field(default_factory=ProfileConfig)
    flow: FlowConfig = field(default_factory=FlowConfig)
    background: str = "laminar"
    amplitude: float = 0.01
    grid: GridConfig = field(default_factory=GridConfig)
    options: SpectralOptions = field(default_factory=SpectralOptions)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Build a configuration, raising on any invalid entry.

        Raises:
            ConfigurationError: Listing every problem found.
        """
        errors = validate_config(data)
        if errors:
            raise ConfigurationError("Invalid configuration", errors)
        return cls(
            profiles=ProfileConfig(**data.get("profiles", {})),
            flow=FlowConfig(**data.get("flow", {})),
            background=data.get("background", "laminar"),
            amplitude=float(data.get("amplitude", 0.01)),
            grid=GridConfig(**data.get("grid", {})),
            options=SpectralOptions(**data.get("options", {})),
            output=OutputConfig(**data.get("output", {})),
        )

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "RunConfig":
        """Load a configuration file.

        Raises:
            FileNotFoundError: If the file does not exist.
            ConfigurationError: On JSON syntax errors (with line and column)
                or invalid values.
        """
        text = Path(path).read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigurationError(
                f"Cannot parse {path}",
                [f"line {e.lineno}, column {e.colno}: {e.msg}"],
            ) from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"Cannot parse {path}", ["top level must be an object"])
        return cls.from_dict(data)

    def with_overrides(self, **flags: Any) -> "RunConfig":
        """Copy with command-line overrides applied (``None`` values are ignored).

        Recognized flags: grid (Nx, Ny), tau_samples, period_multiple,
        amplitude, tol_zero, out_dir, seed, j_max, bloch_window, curvature,
        background.
        """
        config = self.to_dict()
        mapping = {
            "tau_samples": ("options", "tau_samples"),
            "period_multiple": ("options", "period_multiple"),
            "tol_zero": ("options", "tol_zero"),
            "seed": ("options", "seed"),
            "j_max": ("options", "j_max"),
            "bloch_window": ("options", "bloch_window"),
            "curvature": ("options", "curvature"),
            "out_dir": ("output", "out_dir"),
            "export_coo": ("output", "export_coo"),
        }
        for key, value in flags.items():
            if value is None:
                continue
            if key == "grid":
                config["grid"] = {"Nx": int(value[0]), "Ny": int(value[1])}
            elif key in ("amplitude", "background"):
                config[key] = value
            elif key in mapping:
                section, name = mapping[key]
                config[section][name] = value
            else:
                raise ConfigurationError(f"Unknown override '{key}'")
        return RunConfig.from_dict(config)

    @classmethod
    def from_args(cls, args: Any) -> "RunConfig":
        """Resolve a parsed command line: the ``--config`` file, then flags."""
        path = getattr(args, "config", None)
        base = cls.from_json(path) if path else cls()
        grid = getattr(args, "grid", None)
        return base.with_overrides(
            grid=parse_grid(grid) if isinstance(grid, str) else grid,
            tau_samples=getattr(args, "tau_samples", None),
            period_multiple=getattr(args, "period_multiple", None),
            amplitude=getattr(args, "amplitude", None),
            tol_zero=getattr(args, "tol_zero", None),
            out_dir=getattr(args, "out", None),
            seed=getattr(args, "seed", None),
            j_max=getattr(args, "j_max", None),
            bloch_window=getattr(args, "bloch_window", None),
            curvature=getattr(args, "curvature", None),
            background=getattr(args, "background", None),
            export_coo=getattr(args, "export_coo", None) or None,
        )


def parse_grid(text: str) -> Tuple[int, int]:
    """Parse ``"Nx,Ny"``.

    Raises:
        ConfigurationError: If the text is not two comma-separated integers.
    """
    parts = text.replace("x", ",").split(",")
    try:
        Nx, Ny = (int(p) for p in parts)
    except ValueError:
        raise ConfigurationError(
            f"Invalid grid '{text}'", ["--grid: expected two integers such as 48,24"]
        ) from None
    return Nx, Ny


def _number(
    errors: List[str],
    section: Dict[str, Any],
    key: str,
    label: str,
    positive: bool = False,
    negative: bool = False,
) -> None:
    if key not in section or section[key] is None:
        return
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append(f"{label}.{key}: must be a number, got {value!r}")
    elif not math.isfinite(value):
        errors.append(f"{label}.{key}: must be finite, got {value}")
    elif positive and value <= 0:
        errors.append(f"{label}.{key}: must be positive, got {value}")
    elif negative and value >= 0:
        errors.append(f"{label}.{key}: must be negative, got {value}")


def _integer(errors: List[str], section: Dict[str, Any], key: str, label: str, minimum: int):
    if key not in section:
        return
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"{label}.{key}: must be an integer, got {value!r}")
    elif value < minimum:
        errors.append(f"{label}.{key}: must be at least {minimum}, got {value}")


def _unknown(errors: List[str], section: Dict[str, Any], allowed, label: str):
    for key in section:
        if key not in allowed:
            errors.append(f"{label}: unknown key '{key}'")


def validate_config(config: Dict[str, Any]) -> List[str]:
    """Validate a run configuration mapping.

    Args:
        config: Configuration dictionary to validate.

    Returns:
        List of validation error messages. Empty list if valid.

    Example:
        >>> validate_config({"flow": {"p0": 1.0}})
        ['flow.p0: must be negative, got 1.0']
    """
    errors: List[str] = []
    _unknown(errors, config, SECTIONS, "config")

    sections = {}
    for name in ("profiles", "flow", "grid", "options", "output"):
        section = config.get(name, {})
        if not isinstance(section, dict):
            errors.append(f"{name}: must be an object")
            section = {}
        sections[name] = section

    profiles = sections["profiles"]
    _unknown(errors, profiles, {"kind", "parameters"}, "profiles")
    kind = profiles.get("kind", "constant")
    if kind not in {k.value for k in ProfileKind}:
        errors.append(
            f"profiles.kind: invalid kind '{kind}'. "
            f"Must be one of: {sorted(k.value for k in ProfileKind)}"
        )
    if not isinstance(profiles.get("parameters", {}), dict):
        errors.append("profiles.parameters: must be an object")

    flow = sections["flow"]
    _unknown(errors, flow, set(FlowConfig.__dataclass_fields__), "flow")
    _number(errors, flow, "d", "flow", positive=True)
    _number(errors, flow, "g", "flow", positive=True)
    _number(errors, flow, "p0", "flow", negative=True)
    _number(errors, flow, "Lambda", "flow", positive=True)
    _number(errors, flow, "period_scale", "flow", positive=True)
    _number(errors, flow, "tau", "flow", positive=True)

    background = config.get("background", "laminar")
    if background not in BACKGROUNDS:
        errors.append(f"background: must be one of {list(BACKGROUNDS)}, got '{background}'")
    if "amplitude" in config:
        _number(errors, config, "amplitude", "config")

    grid = sections["grid"]
    _unknown(errors, grid, {"Nx", "Ny"}, "grid")
    _integer(errors, grid, "Nx", "grid", 4)
    _integer(errors, grid, "Ny", "grid", 3)
    if isinstance(grid.get("Nx"), int) and grid["Nx"] % 2:
        errors.append(f"grid.Nx: must be even, got {grid['Nx']}")

    options = sections["options"]
    _unknown(errors, options, set(SpectralOptions.__dataclass_fields__), "options")
    _integer(errors, options, "tau_samples", "options", 1)
    _integer(errors, options, "period_multiple", "options", 1)
    _integer(errors, options, "j_max", "options", 1)
    _integer(errors, options, "bloch_window", "options", 0)
    _integer(errors, options, "seed", "options", 0)
    for key in ("tol_zero", "margin_floor", "kernel_tol", "lhs_tol", "u1_zero_tol"):
        _number(errors, options, key, "options", positive=True)
    _number(errors, options, "curvature", "options")
    if type(options.get("curvature")) in (int, float) and options["curvature"] == 0:
        errors.append("options.curvature: must be nonzero")
    if options.get("bloch_form", "quasiperiodic") not in BLOCH_FORMS:
        errors.append(f"options.bloch_form: must be one of {list(BLOCH_FORMS)}")

    output = sections["output"]
    _unknown(errors, output, {"out_dir", "export_coo"}, "output")
    if not isinstance(output.get("out_dir", ""), str):
        errors.append("output.out_dir: must be a string")
    return errors


def build_background(
    config: RunConfig,
) -> Tuple[WaveField, FluidProfiles, LaminarProfile]:
    """Solve the laminar flow and build the configured background field.

    Returns:
        (field, profiles, laminar profile; carrying the bifurcation mode when
        one was computed).
    """
    profiles = make_profiles(config.profiles.kind, config.profiles.parameters, config.flow.p0)
    params = FlowParameters(
        d=config.flow.d,
        g=config.flow.g,
        p0=config.flow.p0,
        Lambda=config.flow.Lambda or 2.0 * math.pi,
    )
    laminar = solve_laminar(profiles, params)
    Nx, Ny = config.grid.Nx, config.grid.Ny

    if config.background == "stokes":
        if config.flow.tau is not None:
            tau, laminar = config.flow.tau, laminar.with_mode(config.flow.tau, profiles)
        else:
            tau, laminar = bifurcation_tau(laminar, profiles)
            if config.flow.period_scale is not None:
                tau = tau / config.flow.period_scale
                laminar = laminar.with_mode(tau, profiles)
        field = stokes_field(laminar, tau, config.amplitude, Nx=Nx, Ny=Ny)
    else:
        Lambda = params.Lambda
        if config.flow.period_scale is not None:
            tau, laminar = bifurcation_tau(laminar, profiles)
            Lambda = config.flow.period_scale * 2.0 * math.pi / tau
        laminar = replace(laminar, params=replace(laminar.params, Lambda=Lambda))
        field = WaveField.from_laminar(laminar, Nx, Ny)
    logger.info(
        f"Background {config.background}: Lambda={field.params.Lambda:.6g}, grid {Nx}x{Ny}"
    )
    return field, profiles, laminar
