"""Run configuration: flat key-value files, validation, and domain-object builders.

Config sources are flat ``key = value`` text with dotted keys for nesting
(``schedule.a.theta = pi/2``) plus command-line overrides, which win. Angle
values accept plain radians or symbolic fractions of pi ("pi/8", "-pi/8",
"3pi/4"). A parsed ``RunConfig`` can be dumped back to the same flat text;
parsing that dump reproduces an equal config, which is what makes output
sidecars replayable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields as dc_fields
from pathlib import Path
from typing import Mapping

from .coins import (
    CoinSpec,
    GeneralCoin,
    RandomPhaseAlpha,
    RandomPhaseBeta,
    SiteTanhRotation,
    UniformRotation,
)
from .errors import ConfigError
from .evolution import (
    AlternatingEvenOdd,
    Composite,
    ProbabilisticChoice,
    Single,
    StrategySchedule,
    is_stochastic_schedule,
    with_derived_seeds,
)
from .state import BlochCoinState, LatticeGeometry, WalkerState
from .sweep import (
    BLOCH_PARAMETERS,
    COIN_PARAMETERS,
    GridAxis,
    GridSpec,
    ScheduleTemplate,
)

MODES = ("walk", "ensemble", "sweep-coin", "sweep-initial", "classical")

COIN_KINDS = ("uniform", "tanh", "general", "random-alpha", "random-beta")
SCHEDULE_KINDS = ("single", "composite", "alternating", "probabilistic")

_PI_FORM = re.compile(
    r"^(?P<sign>[+-]?)\s*(?P<coef>\d+(?:\.\d+)?)?\s*pi(?:\s*/\s*(?P<den>\d+(?:\.\d+)?))?$",
    re.IGNORECASE,
)


def parse_angle(text: str, key: str = "angle") -> float:
    """Radians from a plain number or a pi-fraction string like '-pi/8' or '3pi/4'."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_FORM.match(text)
    if not m:
        raise ConfigError(f"{key}={text!r} is neither a number nor a pi fraction")
    value = math.pi * float(m.group("coef") or 1.0)
    if m.group("den"):
        value /= float(m.group("den"))
    return -value if m.group("sign") == "-" else value


def _parse_bool(text: str, key: str) -> bool:
    t = str(text).strip().lower()
    if t in ("true", "1", "yes", "on"):
        return True
    if t in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"{key}={text!r} is not a boolean")


def _parse_int(text: str, key: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise ConfigError(f"{key}={text!r} is not an integer") from None


def _parse_float(text: str, key: str) -> float:
    return parse_angle(text, key)


@dataclass
class InitialConfig:
    theta: float = math.pi  # spin-down by default
    phi: float = 0.0
    x0: int = 0


@dataclass
class CoinConfig:
    kind: str
    theta: float | None = None
    theta_minus: float | None = None
    theta_plus: float | None = None
    q: float | None = None
    alpha: float | None = None
    beta: float | None = None
    seed: int | None = None


@dataclass
class ScheduleConfig:
    kind: str
    a: CoinConfig | None = None
    b: CoinConfig | None = None
    m: int = 0
    n: int = 0
    q: float | None = None
    seed: int | None = None
    interleaved: bool = False


@dataclass
class AxisConfig:
    name: str
    lower: float
    upper: float
    count: int


@dataclass
class SweepConfig:
    family: str | None = None
    m: int = 0
    n: int = 0


@dataclass
class RunConfig:
    mode: str
    sites: int | None = None
    steps: int = 0
    initial: InitialConfig = field(default_factory=InitialConfig)
    schedule: ScheduleConfig | None = None
    sweep: SweepConfig | None = None
    axis1: AxisConfig | None = None
    axis2: AxisConfig | None = None
    grid_fixed: dict = field(default_factory=dict)
    seed: int | None = None
    iterations: int = 5000
    workers: int = 1
    record_full: bool = False
    tie_tolerance: float = 1e-9
    p_right: float = 0.5
    out_dir: str = "out"


# ---------------------------------------------------------------------------
# flat text <-> key/value mapping
# ---------------------------------------------------------------------------


def read_flat_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment, blank lines ignored."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        values[key] = value
    return values


_COIN_ANGLE_FIELDS = ("theta", "theta_minus", "theta_plus", "alpha", "beta")


def _build_coin_config(flat: Mapping[str, str], prefix: str) -> CoinConfig | None:
    kind_key = f"{prefix}.kind"
    if kind_key not in flat:
        return None
    kind = flat[kind_key].strip().lower()
    if kind not in COIN_KINDS:
        raise ConfigError(f"{kind_key}={kind!r}; expected one of {COIN_KINDS}")
    cc = CoinConfig(kind=kind)
    for name in _COIN_ANGLE_FIELDS:
        key = f"{prefix}.{name}"
        if key in flat:
            setattr(cc, name, parse_angle(flat[key], key))
    if f"{prefix}.q" in flat:
        cc.q = _parse_float(flat[f"{prefix}.q"], f"{prefix}.q")
    if f"{prefix}.seed" in flat:
        cc.seed = _parse_int(flat[f"{prefix}.seed"], f"{prefix}.seed")
    return cc


def _build_axis(flat: Mapping[str, str], prefix: str) -> AxisConfig | None:
    if f"{prefix}.name" not in flat:
        return None
    missing = [k for k in ("min", "max", "count") if f"{prefix}.{k}" not in flat]
    if missing:
        raise ConfigError(f"{prefix} is missing {', '.join(missing)}")
    return AxisConfig(
        name=flat[f"{prefix}.name"].strip(),
        lower=parse_angle(flat[f"{prefix}.min"], f"{prefix}.min"),
        upper=parse_angle(flat[f"{prefix}.max"], f"{prefix}.max"),
        count=_parse_int(flat[f"{prefix}.count"], f"{prefix}.count"),
    )


def config_from_flat(flat: Mapping[str, str]) -> RunConfig:
    """Assemble a RunConfig from a flat key/value mapping (no validation yet)."""
    known_scalar = {
        "mode", "sites", "steps", "seed", "iterations", "workers",
        "record_full", "tie_tolerance", "p_right", "out",
    }
    prefixes = ("initial.", "schedule.", "sweep.", "grid.")
    for key in flat:
        if key not in known_scalar and not key.startswith(prefixes):
            raise ConfigError(f"unknown config key {key!r}")

    mode = flat.get("mode", "").strip().lower()
    cfg = RunConfig(mode=mode)
    if "sites" in flat:
        cfg.sites = _parse_int(flat["sites"], "sites")
    if "steps" in flat:
        cfg.steps = _parse_int(flat["steps"], "steps")
    if "seed" in flat:
        cfg.seed = _parse_int(flat["seed"], "seed")
    if "iterations" in flat:
        cfg.iterations = _parse_int(flat["iterations"], "iterations")
    if "workers" in flat:
        cfg.workers = _parse_int(flat["workers"], "workers")
    if "record_full" in flat:
        cfg.record_full = _parse_bool(flat["record_full"], "record_full")
    if "tie_tolerance" in flat:
        cfg.tie_tolerance = _parse_float(flat["tie_tolerance"], "tie_tolerance")
    if "p_right" in flat:
        cfg.p_right = _parse_float(flat["p_right"], "p_right")
    if "out" in flat:
        cfg.out_dir = flat["out"]

    if "initial.theta" in flat:
        cfg.initial.theta = parse_angle(flat["initial.theta"], "initial.theta")
    if "initial.phi" in flat:
        cfg.initial.phi = parse_angle(flat["initial.phi"], "initial.phi")
    if "initial.x0" in flat:
        cfg.initial.x0 = _parse_int(flat["initial.x0"], "initial.x0")

    if "schedule.kind" in flat:
        kind = flat["schedule.kind"].strip().lower()
        if kind not in SCHEDULE_KINDS:
            raise ConfigError(
                f"schedule.kind={kind!r}; expected one of {SCHEDULE_KINDS}"
            )
        sc = ScheduleConfig(kind=kind)
        sc.a = _build_coin_config(flat, "schedule.a")
        sc.b = _build_coin_config(flat, "schedule.b")
        if "schedule.m" in flat:
            sc.m = _parse_int(flat["schedule.m"], "schedule.m")
        if "schedule.n" in flat:
            sc.n = _parse_int(flat["schedule.n"], "schedule.n")
        if "schedule.q" in flat:
            sc.q = _parse_float(flat["schedule.q"], "schedule.q")
        if "schedule.seed" in flat:
            sc.seed = _parse_int(flat["schedule.seed"], "schedule.seed")
        if "schedule.interleaved" in flat:
            sc.interleaved = _parse_bool(
                flat["schedule.interleaved"], "schedule.interleaved"
            )
        cfg.schedule = sc

    if "sweep.family" in flat:
        sw = SweepConfig(family=flat["sweep.family"].strip().lower())
        if "sweep.m" in flat:
            sw.m = _parse_int(flat["sweep.m"], "sweep.m")
        if "sweep.n" in flat:
            sw.n = _parse_int(flat["sweep.n"], "sweep.n")
        cfg.sweep = sw

    cfg.axis1 = _build_axis(flat, "grid.axis1")
    cfg.axis2 = _build_axis(flat, "grid.axis2")
    for key, value in flat.items():
        if key.startswith("grid.fixed."):
            cfg.grid_fixed[key[len("grid.fixed."):]] = parse_angle(flat[key], key)
    return cfg


def config_to_flat(cfg: RunConfig) -> dict[str, str]:
    """Flat key/value echo of a RunConfig; parsing it back gives an equal config."""
    out: dict[str, str] = {"mode": cfg.mode}

    def put(key, value):
        if value is None:
            return
        if isinstance(value, bool):
            out[key] = "true" if value else "false"
        elif isinstance(value, float):
            out[key] = repr(value)
        else:
            out[key] = str(value)

    put("sites", cfg.sites)
    put("steps", cfg.steps)
    put("seed", cfg.seed)
    put("iterations", cfg.iterations)
    put("workers", cfg.workers)
    put("record_full", cfg.record_full)
    put("tie_tolerance", cfg.tie_tolerance)
    put("p_right", cfg.p_right)
    put("out", cfg.out_dir)
    put("initial.theta", cfg.initial.theta)
    put("initial.phi", cfg.initial.phi)
    put("initial.x0", cfg.initial.x0)
    if cfg.schedule is not None:
        sc = cfg.schedule
        put("schedule.kind", sc.kind)
        put("schedule.m", sc.m)
        put("schedule.n", sc.n)
        put("schedule.q", sc.q)
        put("schedule.seed", sc.seed)
        put("schedule.interleaved", sc.interleaved)
        for label, cc in (("a", sc.a), ("b", sc.b)):
            if cc is None:
                continue
            put(f"schedule.{label}.kind", cc.kind)
            for f in dc_fields(cc):
                if f.name == "kind":
                    continue
                put(f"schedule.{label}.{f.name}", getattr(cc, f.name))
    if cfg.sweep is not None:
        put("sweep.family", cfg.sweep.family)
        put("sweep.m", cfg.sweep.m)
        put("sweep.n", cfg.sweep.n)
    for label, axis in (("axis1", cfg.axis1), ("axis2", cfg.axis2)):
        if axis is None:
            continue
        put(f"grid.{label}.name", axis.name)
        put(f"grid.{label}.min", axis.lower)
        put(f"grid.{label}.max", axis.upper)
        put(f"grid.{label}.count", axis.count)
    for name, value in sorted(cfg.grid_fixed.items()):
        put(f"grid.fixed.{name}", value)
    return out


def dumps_config(cfg: RunConfig) -> str:
    return "".join(f"{k} = {v}\n" for k, v in config_to_flat(cfg).items())


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


def _validate_quantum_geometry(cfg: RunConfig):
    _require(cfg.sites is not None, f"mode={cfg.mode} requires 'sites'")
    _require(cfg.sites % 2 == 1, f"sites={cfg.sites} is even; the lattice must be odd")
    _require(cfg.sites >= 3, f"sites={cfg.sites} is too small; need at least 3")
    _require(cfg.steps >= 0, f"steps={cfg.steps} must be nonnegative")
    _require(
        cfg.sites >= 2 * cfg.steps + 1,
        f"sites={cfg.sites} < 2*steps+1={2 * cfg.steps + 1} for steps={cfg.steps}",
    )


def _validate_initial(cfg: RunConfig):
    ini = cfg.initial
    _require(0.0 <= ini.theta <= math.pi, f"initial.theta={ini.theta} outside [0, pi]")
    _require(
        0.0 <= ini.phi < 2.0 * math.pi, f"initial.phi={ini.phi} outside [0, 2*pi)"
    )
    if cfg.sites is not None:
        half = (cfg.sites - 1) // 2
        _require(
            abs(ini.x0) <= half,
            f"initial.x0={ini.x0} outside the lattice [-{half}, {half}]",
        )


def build_coin(cc: CoinConfig, key: str) -> CoinSpec:
    try:
        if cc.kind == "uniform":
            _require(cc.theta is not None, f"{key}.theta is required for a uniform coin")
            return UniformRotation(cc.theta)
        if cc.kind == "tanh":
            _require(
                cc.theta_minus is not None and cc.theta_plus is not None,
                f"{key}.theta_minus and {key}.theta_plus are required for a tanh coin",
            )
            return SiteTanhRotation(cc.theta_minus, cc.theta_plus)
        if cc.kind == "general":
            _require(
                cc.q is not None and cc.alpha is not None and cc.beta is not None,
                f"{key}.q, {key}.alpha and {key}.beta are required for a general coin",
            )
            return GeneralCoin(cc.q, cc.alpha, cc.beta)
        if cc.kind == "random-alpha":
            return RandomPhaseAlpha(seed=cc.seed)
        if cc.kind == "random-beta":
            return RandomPhaseBeta(seed=cc.seed)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    raise ConfigError(f"{key}.kind={cc.kind!r} is not a coin kind")


def build_schedule(cfg: RunConfig) -> StrategySchedule:
    """Concrete schedule from the config, deriving missing stochastic seeds
    from the top-level seed when one is given."""
    sc = cfg.schedule
    _require(sc is not None, f"mode={cfg.mode} requires a schedule section")
    _require(sc.a is not None, "schedule.a is required")
    a = build_coin(sc.a, "schedule.a")
    b = build_coin(sc.b, "schedule.b") if sc.b is not None else None

    try:
        if sc.kind == "single":
            schedule: StrategySchedule = Single(a)
        elif sc.kind == "composite":
            _require(b is not None, "schedule.b is required for a composite schedule")
            schedule = Composite(a, b, sc.m, sc.n, interleaved=sc.interleaved)
        elif sc.kind == "alternating":
            _require(b is not None, "schedule.b is required for an alternating schedule")
            schedule = AlternatingEvenOdd(a, b)
        else:
            _require(b is not None, "schedule.b is required for a probabilistic schedule")
            _require(sc.q is not None, "schedule.q is required for a probabilistic schedule")
            schedule = ProbabilisticChoice(a, b, sc.q, seed=sc.seed)
    except ValueError as exc:
        raise ConfigError(f"schedule: {exc}") from exc

    if cfg.seed is not None and is_stochastic_schedule(schedule):
        needs_seed = (
            isinstance(schedule, ProbabilisticChoice) and schedule.seed is None
        ) or any(
            isinstance(spec, (RandomPhaseAlpha, RandomPhaseBeta)) and spec.seed is None
            for spec in _specs_of(schedule)
        )
        if needs_seed:
            schedule = with_derived_seeds(schedule, cfg.seed, 0)
    return schedule


def _specs_of(schedule: StrategySchedule):
    if isinstance(schedule, Single):
        return (schedule.spec,)
    return (schedule.a, schedule.b)


def _check_runnable(schedule: StrategySchedule, cfg: RunConfig):
    if isinstance(schedule, ProbabilisticChoice) and schedule.seed is None:
        raise ConfigError(
            "probabilistic schedule needs schedule.seed or a top-level seed"
        )
    for name, spec in zip(("a", "b"), _specs_of(schedule) + (None,)):
        if isinstance(spec, (RandomPhaseAlpha, RandomPhaseBeta)) and spec.seed is None:
            raise ConfigError(
                f"schedule.{name} is a random-phase coin and needs "
                f"schedule.{name}.seed or a top-level seed"
            )


def build_geometry(cfg: RunConfig) -> LatticeGeometry:
    return LatticeGeometry(cfg.sites)


def build_initial_state(cfg: RunConfig) -> WalkerState:
    bloch = BlochCoinState(theta=cfg.initial.theta, phi=cfg.initial.phi)
    return WalkerState.localized(build_geometry(cfg), bloch, cfg.initial.x0)


def _build_grid_axes(cfg: RunConfig, allowed: tuple[str, ...]):
    _require(cfg.axis1 is not None and cfg.axis2 is not None,
             f"mode={cfg.mode} requires grid.axis1 and grid.axis2")
    axes = []
    for label, ac in (("grid.axis1", cfg.axis1), ("grid.axis2", cfg.axis2)):
        _require(
            ac.name in allowed,
            f"{label}.name={ac.name!r}; expected one of {allowed}",
        )
        try:
            axes.append(GridAxis(ac.name, ac.lower, ac.upper, ac.count))
        except ValueError as exc:
            raise ConfigError(f"{label}: {exc}") from exc
    return axes


def build_grid_spec(cfg: RunConfig) -> GridSpec:
    if cfg.mode == "sweep-coin":
        axis1, axis2 = _build_grid_axes(cfg, COIN_PARAMETERS)
        _require(cfg.sweep is not None and cfg.sweep.family is not None,
                 "mode=sweep-coin requires sweep.family")
        try:
            template = ScheduleTemplate(cfg.sweep.family, m=cfg.sweep.m, n=cfg.sweep.n)
        except ValueError as exc:
            raise ConfigError(f"sweep.family: {exc}") from exc
        bound = set(cfg.grid_fixed) | {axis1.name, axis2.name}
        missing = [p for p in template.required_parameters() if p not in bound]
        _require(
            not missing,
            f"sweep.family={cfg.sweep.family} needs parameter(s) "
            f"{', '.join(missing)} bound by an axis or grid.fixed.*",
        )
        schedule = template
    else:
        axis1, axis2 = _build_grid_axes(cfg, BLOCH_PARAMETERS)
        schedule = build_schedule(cfg)
        if cfg.seed is None:
            _check_runnable(schedule, cfg)

    bloch = BlochCoinState(theta=cfg.initial.theta, phi=cfg.initial.phi)
    return GridSpec(
        axis1=axis1,
        axis2=axis2,
        schedule=schedule,
        steps=cfg.steps,
        geometry=build_geometry(cfg),
        initial=bloch,
        x0=cfg.initial.x0,
        fixed=dict(cfg.grid_fixed),
        master_seed=cfg.seed,
        tie_tolerance=cfg.tie_tolerance,
    )


def validate(cfg: RunConfig) -> RunConfig:
    """Check every invariant the mode requires; raises ConfigError on the first."""
    _require(cfg.mode in MODES, f"mode={cfg.mode!r}; expected one of {MODES}")
    _require(cfg.workers >= 1, f"workers={cfg.workers} must be >= 1")
    _require(cfg.tie_tolerance >= 0.0, f"tie_tolerance={cfg.tie_tolerance} must be >= 0")
    if cfg.seed is not None:
        _require(cfg.seed >= 0, f"seed={cfg.seed} must be nonnegative")

    if cfg.mode == "classical":
        _require(cfg.steps >= 0, f"steps={cfg.steps} must be nonnegative")
        _require(
            0.0 <= cfg.p_right <= 1.0, f"p_right={cfg.p_right} outside [0, 1]"
        )
        return cfg

    _validate_quantum_geometry(cfg)
    _validate_initial(cfg)

    if cfg.mode in ("walk", "ensemble"):
        schedule = build_schedule(cfg)
        _check_runnable(schedule, cfg)
        if cfg.mode == "ensemble":
            _require(cfg.iterations >= 1, f"iterations={cfg.iterations} must be >= 1")
            _require(cfg.seed is not None, "mode=ensemble requires a master seed")
    else:
        build_grid_spec(cfg)
    return cfg


def parse_and_validate(
    config_path: str | Path | None = None,
    overrides: Mapping[str, str] | None = None,
) -> RunConfig:
    """Read the config file (if any), apply flag overrides, and validate.

    Overrides use the same flat keys as the file and take precedence.
    """
    flat: dict[str, str] = {}
    if config_path is not None:
        path = Path(config_path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        flat.update(read_flat_text(path.read_text()))
    if overrides:
        flat.update({k: str(v) for k, v in overrides.items() if v is not None})
    if "mode" not in flat:
        raise ConfigError("mode is required (config file key 'mode' or subcommand)")
    return validate(config_from_flat(flat))
