"""Line-oriented configuration: `section.key = value`, `#` comments.

Repeatable keys describe series terms:

    friction.term  = j k a b   (cos/sin coefficients for harmonic j, x power k)
    boundary.phi1b = j a b     (relative harmonic terms, scaled by boundary.eps)
    boundary.phi2b = j a b

Everything has a documented default (see DEFAULTS); parsing validates all
numeric ranges and reports every violation at once, not just the first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boundary import BoundaryData
from .errors import ConfigError
from .friction import FrictionSpec
from .gas import GasParams
from .ibvp import BoundaryMode

# key -> (type tag, default); "terms" keys accumulate
DEFAULTS = {
    "gas.gamma": ("float", 2.0),
    "gas.alpha": ("float", 1.0),
    "gas.rho_bar": ("float", 1.0),
    "gas.L": ("float", 1.0),
    "gas.P": ("float", 1.0),
    "friction.kind": ("str", "constant"),
    "friction.b0": ("float", 0.5),
    "friction.c0": ("float", None),
    "friction.term": ("term4", []),
    "boundary.eps": ("float", 0.01),
    "boundary.phi1b": ("term3", [(1, 0.0, 1.0)]),
    "boundary.phi2b": ("term3", [(1, 1.0, 0.0)]),
    "grid.nt": ("int", 256),
    "grid.nx": ("int", 256),
    "grid.cfl": ("float", 0.9),
    "solver.tol_fp": ("float", 1e-10),
    "solver.max_iter": ("int", 100),
    "stability.K": ("int", 8),
    "stability.amplitude": ("float", None),
    "stability.mode": ("str", "dirichlet"),
    "stability.K1": ("float", 0.0),
    "stability.K2": ("float", 0.0),
    "output.directory": ("str", "out"),
    "output.snapshot_every": ("float", 0.125),
}

_REPEATABLE = {"friction.term", "boundary.phi1b", "boundary.phi2b"}


@dataclass
class SimulationConfig:
    gas: GasParams
    friction: FrictionSpec
    boundary: BoundaryData
    nt: int
    nx: int
    cfl: float
    tol_fp: float
    max_iter: int
    windows: int
    amplitude: float
    mode: BoundaryMode
    out_dir: str
    snapshot_every: float

    @property
    def grid(self) -> tuple[int, int]:
        return (self.nt, self.nx)


def _parse_scalar(kind, text, key, errors):
    try:
        if kind == "float":
            return float(text)
        if kind == "int":
            return int(text)
        return text.strip()
    except ValueError:
        errors.append(f"{key}: cannot parse {text!r} as {kind}")
        return None


def _parse_term(text, nfields, key, errors):
    parts = text.split()
    if len(parts) != nfields:
        errors.append(f"{key}: expected {nfields} fields, got {len(parts)} in {text!r}")
        return None
    try:
        head = [int(v) for v in parts[: nfields - 2]]
        tail = [float(v) for v in parts[nfields - 2:]]
        return tuple(head + tail)
    except ValueError:
        errors.append(f"{key}: cannot parse term {text!r}")
        return None


def parse_config(text: str) -> SimulationConfig:
    """Parse and fully validate; raises ConfigError with every violation."""
    errors: list[str] = []
    values = {}
    terms = {k: [] for k in _REPEATABLE}
    seen = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'section.key = value', got {raw!r}")
            continue
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in DEFAULTS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        kind = DEFAULTS[key][0]
        if key in _REPEATABLE:
            term = _parse_term(val, 4 if kind == "term4" else 3, key, errors)
            if term is not None:
                terms[key].append(term)
        else:
            if key in seen:
                errors.append(f"line {lineno}: duplicate key {key!r}")
                continue
            seen.add(key)
            parsed = _parse_scalar(kind, val, key, errors)
            if parsed is not None:
                values[key] = parsed

    def get(key):
        if key in _REPEATABLE:
            return terms[key] if terms[key] else list(DEFAULTS[key][1])
        return values.get(key, DEFAULTS[key][1])

    # range validation (collect everything before building objects)
    def check(cond, msg):
        if not cond:
            errors.append(msg)

    gamma = get("gas.gamma")
    alpha = get("gas.alpha")
    rho_bar = get("gas.rho_bar")
    L = get("gas.L")
    P = get("gas.P")
    check(gamma > 1.0, f"gas.gamma: gamma must exceed 1 (got {gamma})")
    check(alpha > 0.0, f"gas.alpha: alpha must be positive (got {alpha})")
    check(rho_bar > 0.0, f"gas.rho_bar: must be positive (got {rho_bar})")
    check(L > 0.0, f"gas.L: must be positive (got {L})")
    check(P > 0.0, f"gas.P: must be positive (got {P})")

    kind = get("friction.kind")
    check(kind in ("constant", "trig_series"),
          f"friction.kind: must be 'constant' or 'trig_series' (got {kind!r})")
    c0 = get("friction.c0")
    if c0 is not None:
        check(c0 > 0.0, f"friction.c0: must be positive (got {c0})")
    if kind == "trig_series" and c0 is None:
        errors.append("friction.c0: required for kind trig_series")
    for j, k, _, _ in get("friction.term"):
        check(0 <= j <= 32, f"friction.term: harmonic {j} outside [0, 32]")
        check(0 <= k <= 2, f"friction.term: x power {k} outside [0, 2]")
    eps = get("boundary.eps")
    check(eps >= 0.0, f"boundary.eps: must be non-negative (got {eps})")
    for key in ("boundary.phi1b", "boundary.phi2b"):
        for j, _, _ in get(key):
            check(0 <= j <= 32, f"{key}: harmonic {j} outside [0, 32]")
    nt = get("grid.nt")
    nx = get("grid.nx")
    check(nt >= 16, f"grid.nt: must be at least 16 (got {nt})")
    check(nx >= 16, f"grid.nx: must be at least 16 (got {nx})")
    cfl = get("grid.cfl")
    check(0.0 < cfl <= 0.95, f"grid.cfl: must lie in (0, 0.95] (got {cfl})")
    tol_fp = get("solver.tol_fp")
    check(tol_fp > 0.0, f"solver.tol_fp: must be positive (got {tol_fp})")
    max_iter = get("solver.max_iter")
    check(max_iter >= 1, f"solver.max_iter: must be at least 1 (got {max_iter})")
    windows = get("stability.K")
    check(windows >= 1, f"stability.K: must be at least 1 (got {windows})")
    mode = get("stability.mode")
    check(mode in ("dirichlet", "reflective"),
          f"stability.mode: must be 'dirichlet' or 'reflective' (got {mode!r})")
    K1 = get("stability.K1")
    K2 = get("stability.K2")
    check(abs(K1) < 1.0, f"stability.K1: |K1| must be < 1 (got {K1})")
    check(abs(K2) < 1.0, f"stability.K2: |K2| must be < 1 (got {K2})")
    snap = get("output.snapshot_every")
    check(snap > 0.0, f"output.snapshot_every: must be positive (got {snap})")
    amplitude = get("stability.amplitude")
    if amplitude is None:
        amplitude = eps / 2.0

    if errors:
        raise ConfigError(errors)

    gas = GasParams(gamma, alpha, rho_bar, L, P)
    if kind == "constant":
        fric = FrictionSpec.constant(get("friction.b0"), gas, c0)
    else:
        fric = FrictionSpec.series(get("friction.term"), c0, gas)
    bdata = BoundaryData.from_terms(eps, get("boundary.phi1b"), get("boundary.phi2b"), P)
    bmode = BoundaryMode(mode, K1, K2)
    return SimulationConfig(
        gas=gas, friction=fric, boundary=bdata,
        nt=nt, nx=nx, cfl=cfl,
        tol_fp=tol_fp, max_iter=max_iter,
        windows=windows, amplitude=amplitude, mode=bmode,
        out_dir=get("output.directory"), snapshot_every=snap,
    )


def default_config() -> SimulationConfig:
    return parse_config("")
