"""Deterministic command-line front end: JSON scenario configs in, CSV out.

Subcommands: ``qfi`` (Fisher matrix, QFI, Cramer-Rao bound), ``sweep``
(sensitivity curves over phi / alpha / beta / eta), ``regimes`` (optimal-PMC
atlas over the coherent amplitudes), ``heisenberg`` (power-fraction scaling)
and ``verify`` (closed-form vs Fock-oracle equivalence suite).

CSV goes to stdout or ``-o``; the human-readable report goes to stderr.  Output
bytes are a pure function of config plus seed.  Exit codes: 0 success,
2 config error, 3 verification failure, 4 truncation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import IO

import numpy as np

from . import detection, losses, oracle
from .errors import ConfigError, FlatObjective, MzGaussError, TruncationError
from .fisher import fisher_matrix, qcrb, qfi, qfi_closed_form
from .heisenberg import PowerFractions, asymptotic_qfi, heisenberg_optima
from .interferometer import BsConvention, MziScenario
from .pmc import PmcSet, apply_pmc, boundaries, classify
from .states import GaussianPort

_CONFIG_KEYS = {
    "port1.alpha.magnitude": 0.0,
    "port1.alpha.phase": 0.0,
    "port1.zeta.factor": 0.0,
    "port1.zeta.phase": 0.0,
    "port0.beta.magnitude": 0.0,
    "port0.beta.phase": 0.0,
    "port0.xi.factor": 0.0,
    "port0.xi.phase": 0.0,
    "convention": "symmetric",
    "phase": 0.0,
    "efficiency": 1.0,
    "scheme": "df,sg,hom",
    "homodyne.local_phase": None,
    "pmc": None,
    "shots": 1,
}

_ANGLE_KEYS = {
    "port1.alpha.phase", "port1.zeta.phase", "port0.beta.phase",
    "port0.xi.phase", "phase", "homodyne.local_phase",
}

_SCHEME_NAMES = {
    "df": "df", "difference": "df",
    "sg": "sg", "single": "sg",
    "hom": "hom", "homodyne": "hom",
}


def parse_angle(value, key: str = "") -> float:
    """Numbers pass through; strings may carry a '*pi' suffix for exactness."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    text = str(value).strip().replace(" ", "")
    try:
        if text.endswith("pi"):
            head = text[:-2].rstrip("*")
            if head in ("", "+"):
                return math.pi
            if head == "-":
                return -math.pi
            return float(head) * math.pi
        return float(text)
    except ValueError:
        raise ConfigError(f"field {key or 'angle'}: cannot parse angle {value!r}") from None


def _parse_number(value, key: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"field {key}: expected a number, got {value!r}") from None


def load_config(path: str | None, overrides: list[str]) -> dict:
    cfg = dict(_CONFIG_KEYS)
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a flat JSON object")
        for key, value in raw.items():
            if key not in cfg:
                raise ConfigError(f"{path}: unknown config key {key!r}")
            cfg[key] = value
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in cfg:
            raise ConfigError(f"--set: unknown config key {key!r}")
        cfg[key] = value.strip()
    return cfg


def _schemes_from_config(cfg: dict) -> list[str]:
    names = []
    for part in str(cfg["scheme"]).split(","):
        part = part.strip().lower()
        if not part:
            continue
        if part not in _SCHEME_NAMES:
            raise ConfigError(f"field scheme: unknown detection scheme {part!r}")
        tag = _SCHEME_NAMES[part]
        if tag not in names:
            names.append(tag)
    if not names:
        raise ConfigError("field scheme: at least one detection scheme is required")
    return names


def _scheme_object(tag: str, cfg: dict) -> detection.DetectionScheme:
    if tag == "df":
        return detection.DifferenceIntensity()
    if tag == "sg":
        return detection.SingleModeIntensity()
    local = cfg["homodyne.local_phase"]
    return detection.Homodyne(None if local is None else parse_angle(local, "homodyne.local_phase"))


def _normalized(cfg: dict) -> dict:
    """Numeric view of the config used for scenario building and CSV comments."""
    out = {}
    for key, value in cfg.items():
        if key in ("convention", "scheme", "pmc"):
            out[key] = value if value is None else str(value).lower()
        elif key == "shots":
            out[key] = int(_parse_number(value, key))
        elif key == "homodyne.local_phase":
            out[key] = None if value is None else parse_angle(value, key)
        elif key in _ANGLE_KEYS:
            out[key] = parse_angle(value, key)
        else:
            out[key] = _parse_number(value, key)
    return out


def build_scenario(cfg: dict) -> MziScenario:
    n = _normalized(cfg)
    try:
        convention = BsConvention(n["convention"])
    except ValueError:
        raise ConfigError(f"field convention: expected symmetric|cube, got {cfg['convention']!r}") from None

    if n["pmc"] is not None:
        try:
            family = PmcSet(n["pmc"])
        except ValueError:
            names = ", ".join(p.value for p in PmcSet)
            raise ConfigError(f"field pmc: expected one of {names}, got {cfg['pmc']!r}") from None
        port1, port0 = apply_pmc(
            family, n["port1.alpha.phase"],
            n["port1.alpha.magnitude"], n["port0.beta.magnitude"],
            n["port0.xi.factor"], n["port1.zeta.factor"], convention,
        )
    else:
        port1 = GaussianPort.from_params(
            n["port1.alpha.magnitude"], n["port1.alpha.phase"],
            n["port1.zeta.factor"], n["port1.zeta.phase"])
        port0 = GaussianPort.from_params(
            n["port0.beta.magnitude"], n["port0.beta.phase"],
            n["port0.xi.factor"], n["port0.xi.phase"])
    try:
        return MziScenario(port1, port0, convention, n["phase"], n["efficiency"])
    except MzGaussError as exc:
        raise ConfigError(str(exc)) from None


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _config_comment(cfg: dict) -> str:
    return "# config: " + json.dumps(_normalized(cfg), sort_keys=True)


def _write_csv(stream: IO[str], comments: list[str], header: list[str], rows) -> None:
    for line in comments:
        stream.write(line + "\n")
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


# --- subcommands --------------------------------------------------------------

def cmd_qfi(cfg: dict, out: IO[str], err: IO[str]) -> int:
    scenario = build_scenario(cfg)
    n = _normalized(cfg)
    fm = fisher_matrix(scenario)
    value = qfi(fm)
    bound = qcrb(value, n["shots"]) if value > 0 else math.inf
    limits = boundaries(scenario.port0.squeeze.factor, scenario.port1.squeeze.factor)
    comments = [
        _config_comment(cfg),
        f"# alpha_lim_13 = {fmt(limits.alpha_13)}",
        f"# alpha_lim_23 = {fmt(limits.alpha_23)}",
        f"# alpha_lim_circ = {fmt(limits.alpha_circ)}",
        f"# beta_lim_12 = {fmt(limits.beta_12)}",
        f"# alpha_lim_single = {fmt(limits.alpha_lim_single)}",
    ]
    _write_csv(out, comments, ["f_ss", "f_dd", "f_sd", "qfi", "qcrb"],
               [[fm.f_ss, fm.f_dd, fm.f_sd, value, bound]])
    err.write(f"qfi: F = {fmt(value)}, QCRB = {fmt(bound)} at {n['shots']} shot(s)\n")
    return 0


def _sensitivities(schemes, cfg, scenario, at_optimum: bool):
    values = []
    for tag in schemes:
        scheme = _scheme_object(tag, cfg)
        try:
            if at_optimum:
                if scenario.efficiency < 1.0:
                    point = losses.lossy_optimal_working_point(scheme, scenario)
                else:
                    point = detection.optimal_working_point(scheme, scenario)
            else:
                point = losses.lossy_sensitivity(scheme, scenario)
        except FlatObjective:
            point = detection.SensitivityPoint(scenario.phase, math.inf)
        values.append(point.delta_phi)
    return values


def cmd_sweep(cfg: dict, axis: str, start, stop, steps: int, out: IO[str], err: IO[str]) -> int:
    if steps < 2:
        raise ConfigError("sweep requires steps >= 2")
    schemes = _schemes_from_config(cfg)
    n = _normalized(cfg)
    lo = parse_angle(start, "start") if axis == "phi" else _parse_number(start, "start")
    hi = parse_angle(stop, "stop") if axis == "phi" else _parse_number(stop, "stop")
    grid = np.linspace(lo, hi, steps)

    rows = []
    for value in grid:
        local = dict(cfg)
        if axis == "phi":
            local["phase"] = float(value)
        elif axis == "alpha":
            local["port1.alpha.magnitude"] = float(value)
        elif axis == "beta":
            local["port0.beta.magnitude"] = float(value)
        elif axis == "eta":
            local["efficiency"] = float(value)
        else:
            raise ConfigError(f"unknown sweep axis {axis!r}")
        scenario = build_scenario(local)
        fisher_value = qfi(fisher_matrix(scenario))
        bound = qcrb(fisher_value, n["shots"]) if fisher_value > 0 else math.inf
        at_optimum = axis in ("alpha", "beta")
        rows.append([value, *_sensitivities(schemes, local, scenario, at_optimum), bound])

    header = [axis] + [f"delta_phi_{tag}" for tag in schemes] + ["delta_phi_qcrb"]
    _write_csv(out, [_config_comment(cfg), f"# axis: {axis} from {fmt(lo)} to {fmt(hi)} in {steps} steps"],
               header, rows)
    err.write(f"sweep: {steps} rows over {axis}\n")
    return 0


def cmd_regimes(r: float, z: float, alpha_min: float, alpha_max: float,
                beta_min: float, beta_max: float, points: int, spacing: str,
                out: IO[str], err: IO[str]) -> int:
    if r < 0 or z < 0:
        raise ConfigError("squeeze factors r and z must be >= 0")
    if points < 1:
        raise ConfigError("regimes requires points >= 1")
    limits = boundaries(r, z)

    def axis(lo, hi):
        if points == 1:
            return np.array([lo])
        if spacing == "log":
            if lo <= 0:
                raise ConfigError("log spacing requires positive axis bounds")
            return np.geomspace(lo, hi, points)
        return np.linspace(lo, hi, points)

    rows = []
    for a in axis(alpha_min, alpha_max):
        for b in axis(beta_min, beta_max):
            rows.append([
                a, b, classify(a, b, r, z).value,
                qfi_closed_form(a, b, r, z, pmc=PmcSet.PMC1),
                qfi_closed_form(a, b, r, z, pmc=PmcSet.PMC2),
                qfi_closed_form(a, b, r, z, pmc=PmcSet.PMC3),
            ])
    comments = [
        f"# config: {json.dumps({'r': r, 'z': z, 'alpha_min': alpha_min, 'alpha_max': alpha_max, 'beta_min': beta_min, 'beta_max': beta_max, 'points': points, 'spacing': spacing}, sort_keys=True)}",
        f"# alpha_lim_13 = {fmt(limits.alpha_13)}",
        f"# alpha_lim_23 = {fmt(limits.alpha_23)}",
        f"# alpha_lim_circ = {fmt(limits.alpha_circ)}",
        f"# beta_lim_12 = {fmt(limits.beta_12)}",
        f"# alpha_lim_single = {fmt(limits.alpha_lim_single)}",
        f"# beta_lim_23(alpha_circ) = {fmt(limits.beta_23(limits.alpha_circ))}",
        f"# beta_lim_13(alpha_circ) = {fmt(limits.beta_13(limits.alpha_circ))}",
    ]
    _write_csv(out, comments, ["alpha", "beta", "pmc", "qfi_pmc1", "qfi_pmc2", "qfi_pmc3"], rows)
    err.write(f"regimes: {len(rows)} grid points at r={fmt(r)}, z={fmt(z)}\n")
    return 0


def _parse_fraction(text: str, key: str) -> float:
    text = text.strip()
    try:
        if "/" in text:
            num, _, den = text.partition("/")
            return float(num) / float(den)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"field {key}: cannot parse fraction {text!r}") from None


def cmd_heisenberg(pmc_name: str, fractions_text: str, n_tot: float,
                   out: IO[str], err: IO[str]) -> int:
    try:
        family = PmcSet(pmc_name.lower())
    except ValueError:
        names = ", ".join(p.value for p in PmcSet)
        raise ConfigError(f"--pmc: expected one of {names}, got {pmc_name!r}") from None
    parts = [p for p in fractions_text.split(",") if p.strip()]
    if len(parts) != 4:
        raise ConfigError("--fractions expects f_alpha,f_beta,f_r,f_z")
    vals = [_parse_fraction(p, "fractions") for p in parts]
    try:
        fractions = PowerFractions(*vals, n_tot=n_tot)
    except ValueError as exc:
        raise ConfigError(f"--fractions: {exc}") from None

    asymptotic = asymptotic_qfi(family, fractions)
    alpha, beta, r, z = fractions.to_magnitudes()
    exact = qfi_closed_form(alpha, beta, r, z, pmc=family)
    n2 = n_tot ** 2
    comments = [
        f"# config: {json.dumps({'pmc': family.value, 'fractions': vals, 'n_tot': n_tot}, sort_keys=True)}",
    ]
    for manifold in heisenberg_optima(family).manifolds:
        comments.append("# optimum: " + json.dumps(manifold, sort_keys=True))
    _write_csv(out, comments,
               ["f_alpha", "f_beta", "f_r", "f_z", "n_tot",
                "asymptotic_qfi", "asymptotic_ratio", "exact_qfi", "exact_ratio"],
               [[*vals, n_tot, asymptotic, asymptotic / n2, exact, exact / n2]])
    err.write(f"heisenberg: {family.value} asymptotic F/N^2 = {fmt(asymptotic / n2)}\n")
    return 0


def _relerr(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1.0)


def cmd_verify(samples: int, phases: int, seed: int, n_max: int,
               alpha_max: float, beta_max: float, squeeze_max: float,
               out: IO[str], err: IO[str]) -> int:
    rng = np.random.default_rng(seed)
    rows = []
    failures = 0
    if samples <= 0:
        err.write("verify: empty box, vacuous pass\n")
        _write_csv(out, ["# verify: empty box"],
                   ["case", "quantity", "phi", "closed", "oracle", "relerr", "pass"], [])
        return 0

    schemes = [("mean_nd", detection.DifferenceIntensity(), "n_diff", 1e-8),
               ("mean_n4", detection.SingleModeIntensity(), "n4", 1e-8),
               ("mean_x", detection.Homodyne(), "quad", 1e-8)]

    for case in range(samples):
        port1 = GaussianPort.from_params(
            rng.uniform(0.0, alpha_max), rng.uniform(0.0, 2.0 * math.pi),
            rng.uniform(0.0, squeeze_max), rng.uniform(0.0, 2.0 * math.pi))
        port0 = GaussianPort.from_params(
            rng.uniform(0.0, beta_max), rng.uniform(0.0, 2.0 * math.pi),
            rng.uniform(0.0, squeeze_max), rng.uniform(0.0, 2.0 * math.pi))
        convention = BsConvention.SYMMETRIC if case % 2 == 0 else BsConvention.CUBE
        base = MziScenario(port1, port0, convention)
        state = oracle.prepare(base, n_max)

        for phi in rng.uniform(0.0, 2.0 * math.pi, phases):
            scenario = base.with_phase(float(phi))
            evolved = oracle.evolve(state, float(phi), convention)
            local = scenario.port1.displacement.phase
            for name, scheme, obs, tol in schemes:
                closed = detection.observable_mean(scheme, scenario)
                meas = oracle.measure_stats(evolved, obs, local)
                rel = _relerr(closed, meas)
                ok = rel < tol
                failures += not ok
                rows.append([case, name, phi, closed, meas, rel, int(ok)])

                vname = name.replace("mean", "var")
                closed_v = detection.observable_variance(scheme, scenario)
                meas_v = (oracle.measure_stats(evolved, obs + "_sq", local)
                          - meas ** 2) if obs != "quad" else (
                    oracle.measure_stats(evolved, "quad_sq", local) - meas ** 2)
                rel_v = _relerr(closed_v, meas_v)
                ok_v = rel_v < 1e-6
                failures += not ok_v
                rows.append([case, vname, phi, closed_v, meas_v, rel_v, int(ok_v)])

        closed_fm = fisher_matrix(base)
        fd_fm = oracle.numerical_fisher(base, n_max)
        scale = max(closed_fm.f_ss, closed_fm.f_dd, 1.0)
        for qty, a, b in (("f_ss", closed_fm.f_ss, fd_fm.f_ss),
                          ("f_dd", closed_fm.f_dd, fd_fm.f_dd),
                          ("f_sd", abs(closed_fm.f_sd), abs(fd_fm.f_sd))):
            rel = abs(a - b) / max(abs(a), abs(b), 1e-6 * scale)
            ok = rel < 1e-4
            failures += not ok
            rows.append([case, qty, "", a, b, rel, int(ok)])

    comments = [
        f"# config: {json.dumps({'samples': samples, 'phases': phases, 'seed': seed, 'n_max': n_max, 'alpha_max': alpha_max, 'beta_max': beta_max, 'squeeze_max': squeeze_max}, sort_keys=True)}",
    ]
    _write_csv(out, comments, ["case", "quantity", "phi", "closed", "oracle", "relerr", "pass"], rows)
    if failures:
        err.write(f"verify: {failures} of {len(rows)} checks FAILED\n")
        return 3
    err.write(f"verify: all {len(rows)} checks passed\n")
    return 0


# --- entry point ---------------------------------------------------------------

def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="JSON config file (flat dotted keys)")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key; angles accept a '*pi' suffix")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzgauss",
        description="Phase-estimation performance of a Mach-Zehnder interferometer "
                    "with Gaussian input states (CSV to stdout, report to stderr; "
                    "plain text only, NO_COLOR is always honored).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-o", "--output", metavar="FILE", help="write CSV here instead of stdout")
        return p

    p = add("qfi", "Fisher matrix, QFI and Cramer-Rao bound")
    _add_config_arguments(p)

    p = add("sweep", "sensitivity curves over one axis")
    _add_config_arguments(p)
    p.add_argument("--axis", required=True, choices=("phi", "alpha", "beta", "eta"))
    p.add_argument("--start", required=True)
    p.add_argument("--stop", required=True)
    p.add_argument("--steps", required=True, type=int)

    p = add("regimes", "optimal-PMC atlas over (|alpha|, |beta|)")
    p.add_argument("--r", required=True, type=float)
    p.add_argument("--z", required=True, type=float)
    p.add_argument("--alpha-min", type=float, default=0.05)
    p.add_argument("--alpha-max", type=float, default=500.0)
    p.add_argument("--beta-min", type=float, default=0.05)
    p.add_argument("--beta-max", type=float, default=500.0)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--spacing", choices=("log", "linear"), default="log")

    p = add("heisenberg", "power-fraction scaling evaluation")
    p.add_argument("--pmc", required=True)
    p.add_argument("--fractions", required=True, metavar="FA,FB,FR,FZ")
    p.add_argument("--n-tot", type=float, default=1e4)

    p = add("verify", "closed forms vs truncated Fock oracle")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--phases", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--n-max", type=int, default=60)
    p.add_argument("--alpha-max", type=float, default=1.2)
    p.add_argument("--beta-max", type=float, default=1.2)
    p.add_argument("--squeeze-max", type=float, default=0.6)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    err = sys.stderr

    try:
        if args.output:
            out = open(args.output, "w", encoding="utf-8", newline="\n")
        else:
            out = sys.stdout
        try:
            if args.command == "qfi":
                cfg = load_config(args.config, args.set)
                return cmd_qfi(cfg, out, err)
            if args.command == "sweep":
                cfg = load_config(args.config, args.set)
                return cmd_sweep(cfg, args.axis, args.start, args.stop, args.steps, out, err)
            if args.command == "regimes":
                return cmd_regimes(args.r, args.z, args.alpha_min, args.alpha_max,
                                   args.beta_min, args.beta_max, args.points,
                                   args.spacing, out, err)
            if args.command == "heisenberg":
                return cmd_heisenberg(args.pmc, args.fractions, args.n_tot, out, err)
            if args.command == "verify":
                return cmd_verify(args.samples, args.phases, args.seed, args.n_max,
                                  args.alpha_max, args.beta_max, args.squeeze_max, out, err)
            raise ConfigError(f"unknown command {args.command!r}")
        finally:
            if args.output:
                out.close()
    except ConfigError as exc:
        err.write(f"config error: {exc}\n")
        return 2
    except TruncationError as exc:
        err.write(f"truncation error: {exc}\n")
        return 4
    except MzGaussError as exc:
        err.write(f"error: {exc}\n")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
