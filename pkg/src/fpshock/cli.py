"""Command-line front end: config parsing, subcommand dispatch and CSV output."""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import evolve as ev
from . import hugoniot, models, profiles, spectral
from .errors import AdmissibilityError, DomainError, FPShockError, NumericError

EXIT_OK, EXIT_CONFIG, EXIT_ADMISSIBILITY, EXIT_NUMERIC = 0, 1, 2, 3
OUTPUT_ENV = "FPSHOCK_OUTPUT_DIR"
CONSISTENCY_TOL = 1e-9


class ConfigError(DomainError):
    """Malformed, out-of-range or contradictory configuration."""


def _floats(text):
    return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]


SCHEMA = {
    "model": {"kind": str, "theta": float, "pressure_c": float, "gamma": float},
    "state": {"n": float, "rho": float, "u": float, "sign": int, "rho_far": float},
    "reduced": {"tau": float, "tau_fraction": float, "kappa": float, "n_star": float,
                "eps": float, "u_sign": int},
    "sweep": {"kappa_min": float, "kappa_max": float, "n_kappa": int, "kappas": _floats,
              "n_points": int, "param_min": float, "param_max": float, "samples": int},
    "evolve": {"eps": float, "t_end": float, "cfl_hyp": float, "cfl_visc": float,
               "snapshot_every": int, "n_cells": int, "x_left": float, "x_right": float,
               "initial": str, "left": _floats, "right": _floats, "amplitude": float,
               "width": float, "component": int, "center": float},
    "output": {"dir": str, "precision": int, "prefix": str},
}

DEFAULTS = {
    "model": {"kind": "euler", "pressure_c": 1.0, "gamma": 2.0},
    "state": {"sign": 1},
    "reduced": {"n_star": 1.0, "u_sign": 1},
    "sweep": {"kappa_min": 0.05, "kappa_max": 12.0, "n_kappa": 200, "kappas": [0.5, 1.0, 2.0, 3.0, 5.0],
              "n_points": 200, "param_min": 0.1, "param_max": 10.0, "samples": 101},
    "evolve": {"eps": 0.01, "t_end": 1.0, "cfl_hyp": 0.4, "cfl_visc": 0.4, "snapshot_every": 50,
               "n_cells": 1024, "initial": "riemann", "amplitude": 0.0, "width": 0.1,
               "component": 0, "center": 0.0},
    "output": {"precision": 15},
}


@dataclass
class OutputSpec:
    directory: Path
    precision: int = 15
    prefix: str = ""

    def fmt(self, v):
        if isinstance(v, (bool, np.bool_)):
            return "1" if v else "0"
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return f"{float(v):.{self.precision}g}"

    def path(self, name):
        return self.directory / f"{self.prefix}{name}"

    def write_csv(self, name, header, rows):
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path(name)
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(v if isinstance(v, str) else self.fmt(v) for v in row) + "\n")
        return path


@dataclass
class RunConfig:
    model: models.Model
    values: dict
    output: OutputSpec
    given: dict = field(default_factory=dict)  # keys present in the input, per section

    def get(self, section, key, default=None):
        return self.values[section].get(key, default)

    def has(self, section, key):
        return key in self.given.get(section, set())


def _parse_value(section, key, raw):
    kind = SCHEMA[section][key]
    try:
        return kind(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r}") from exc


def parse_config(path=None, overrides=(), text=None):
    """Read an ini-style config (file or text) and apply section.key=value overrides."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        if text is not None:
            cp.read_string(text)
        elif path is not None:
            with open(path) as fh:
                cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    raw = {s: dict(cp[s]) for s in cp.sections()}
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, name = key.strip().partition(".")
        if not (sep and dot):
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        raw.setdefault(section, {})[name] = value
    values, given = {}, {}
    for section, items in raw.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in items:
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
        given[section] = set(items)
    for section in SCHEMA:
        merged = dict(DEFAULTS.get(section, {}))
        merged.update({k: _parse_value(section, k, v) for k, v in raw.get(section, {}).items()})
        values[section] = merged
    return _validate(values, given)


def _check(cond, message):
    if not cond:
        raise ConfigError(message)


def _validate(values, given):
    m = values["model"]
    kind = m["kind"].lower()
    _check(kind in (models.BURGERS, models.EULER), f"model kind must be burgers or euler, got {kind!r}")
    theta = m.get("theta", 1.0 if kind == models.BURGERS else 0.0)
    _check(theta >= 0, "theta must be non-negative")
    if kind == models.BURGERS:
        model = models.Model.burgers(theta)
    else:
        _check(m["pressure_c"] > 0, "pressure_c must be positive")
        _check(m["gamma"] > 1, "gamma must exceed 1")
        model = models.Model.euler(models.GammaLaw(m["pressure_c"], m["gamma"]), theta)

    r = values["reduced"]
    if "tau" in r:
        _check(0 < r["tau"] < 1, "τ must lie in (0,1)")
    if "tau_fraction" in r:
        _check(r["tau_fraction"] > 0, "tau_fraction must be positive")
        _check("tau" not in r, "give either tau or tau_fraction, not both")
    if "kappa" in r:
        _check(r["kappa"] > 0, "kappa must be positive")
    _check(r["n_star"] > 0, "n_star must be positive")
    _check(r["u_sign"] in (1, -1), "u_sign must be 1 or -1")
    if "eps" in r:
        _check(r["eps"] >= 0, "eps must be non-negative")
    s = values["state"]
    _check(s["sign"] in (1, -1), "sign must be 1 or -1")
    for key in ("n", "rho", "rho_far"):
        if key in s:
            _check(s[key] >= 0, f"{key} must be non-negative")

    sw = values["sweep"]
    _check(0 < sw["kappa_min"] < sw["kappa_max"], "need 0 < kappa_min < kappa_max")
    _check(sw["n_kappa"] >= 2 and sw["n_points"] >= 2, "sample counts must be at least 2")
    _check(0 < sw["param_min"] < sw["param_max"], "need 0 < param_min < param_max")
    _check(sw["samples"] >= 3, "samples must be at least 3")
    _check(all(k > 0 for k in sw["kappas"]) and sw["kappas"], "kappas must be positive")

    e = values["evolve"]
    _check(e["initial"] in ("riemann", "profile"), "evolve initial must be riemann or profile")
    _check(e["n_cells"] >= 16, "n_cells must be at least 16")
    _check(e["width"] > 0, "perturbation width must be positive")
    _check(0 <= e["component"] < model.m, "perturbation component out of range")
    try:
        ev.EvolveConfig(e["eps"], e["t_end"], e["cfl_hyp"], e["cfl_visc"], e["snapshot_every"])
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc

    o = values["output"]
    _check(6 <= o["precision"] <= 17, "precision must lie in [6, 17]")
    directory = Path(o.get("dir") or os.environ.get(OUTPUT_ENV) or ".")
    out = OutputSpec(directory, o["precision"], o.get("prefix", ""))
    return RunConfig(model, values, out, given)


# ------------------------------------------------------------ state assembly

def _base_state(cfg):
    s = cfg.values["state"]
    if cfg.model.kind == models.BURGERS:
        _check("rho" in s and "u" in s, "[state] needs rho and u")
        return models.burgers_state(s["rho"], s["u"])
    _check("n" in s and "rho" in s and "u" in s, "[state] needs n, rho and u")
    return models.euler_state(s["n"], s["rho"], s["u"])


def _agree(a, b):
    return abs(a - b) <= CONSISTENCY_TOL * max(1.0, abs(a), abs(b))


def reduced_parameters(cfg):
    """ReducedParams from either the raw base state or (tau, kappa, n_star).

    When both are present every supplied reduced value must agree with the
    one implied by the raw state.
    """
    model = cfg.model
    _check(model.kind == models.EULER, "reduced parameters need the euler model")
    s, r = cfg.values["state"], cfg.values["reduced"]
    law = model.law
    raw = any(k in s for k in ("n", "rho", "u"))
    reduced = any(k in r for k in ("tau", "tau_fraction", "kappa"))
    _check(raw or reduced, "give a base state ([state] n, rho, u) or [reduced] tau and kappa")
    eps_given = "eps" in r
    theta_given = cfg.has("model", "theta")
    if raw:
        W = _base_state(cfg)
        n, rho, u = models.to_primitive(model, W)
        theta = model.theta
        if eps_given and not theta_given:
            theta = r["eps"] * law.eval(n)[0] / (n + rho)
        params = profiles.reduced_params(n, n + rho, u, law, theta)
        checks = [("tau", params.tau), ("kappa", params.kappa), ("n_star", params.n_star),
                  ("eps", params.eps)]
        for key, implied in checks:
            if key in r and (key != "n_star" or cfg.has("reduced", "n_star")):
                _check(_agree(r[key], implied),
                       f"contradictory inputs: {key}={r[key]!r} but the base state implies {float(implied)!r}")
        if "u_sign" in r and cfg.has("reduced", "u_sign"):
            _check(r["u_sign"] == params.u_sign, "contradictory inputs: u_sign disagrees with u")
        if "tau_fraction" in r:
            sharp = profiles.tau_sharp(params.kappa, params.pbar)
            _check(_agree(r["tau_fraction"] * sharp.tau_hash, params.tau),
                   "contradictory inputs: tau_fraction disagrees with the base state")
        return params
    _check("kappa" in r, "[reduced] needs kappa")
    _check("tau" in r or "tau_fraction" in r, "[reduced] needs tau or tau_fraction")
    pbar = profiles.RescaledPressure.of(law, r["n_star"])
    if "tau_fraction" in r and r["tau_fraction"] >= 1:
        # tau at or above tau_# is an admissibility question even when it also exceeds 1
        raise AdmissibilityError(f"tau_fraction={r['tau_fraction']!r}: tau >= tau_#, no admissible profile")
    tau = r["tau"] if "tau" in r else r["tau_fraction"] * profiles.tau_sharp(r["kappa"], pbar).tau_hash
    _check(0 < tau < 1, "τ must lie in (0,1)")
    eps = r.get("eps", 0.0)
    if theta_given:
        implied = model.theta * (r["n_star"] / tau) / pbar.p_star
        if eps_given:
            _check(_agree(eps, implied), f"contradictory inputs: eps={eps!r} but theta implies {float(implied)!r}")
        eps = implied
    return profiles.reduced_from(tau, r["kappa"], law, r["n_star"], eps, r["u_sign"])


# ------------------------------------------------------------ subcommands

def _state_columns(model):
    return ["rho", "w"] if model.kind == models.BURGERS else ["r", "rho", "w"]


def _analyze(cfg):
    model = cfg.model
    W = _base_state(cfg)
    rows = []
    rep = spectral.eigenstructure(model, W)
    for i, v in enumerate(rep.eigenvalues):
        rows.append((f"lambda_{i}", v))
    for i, v in enumerate(rep.solver_eigenvalues):
        rows.append((f"solver_lambda_{i}", v))
    rows.append(("strictly_hyperbolic", rep.strictly_hyperbolic))
    if rep.gn_indicators is not None:
        for i, (v, c) in enumerate(zip(rep.gn_indicators, rep.classification)):
            rows.append((f"gn_{i}", v))
            rows.append((f"class_{i}", c))
    st = spectral.stability_report(model, W)
    sym = st.symmetrizer
    rows += [("xa_defect", sym.xa_defect), ("xd_defect", sym.xd_defect),
             ("xd_min_eig", sym.xd_min_eig), ("xd_rank", sym.xd_rank),
             ("det_x", sym.det_x), ("det_d", sym.det_d), ("det_xd", sym.det_xd)]
    for i, (v, ok) in enumerate(zip(st.ks.norms, st.ks.passes)):
        rows.append((f"ks_norm_{i}", v))
        rows.append((f"ks_pass_{i}", ok))
    rows.append(("majda_pego_delta", st.majda_pego_delta))
    if st.dsym_interval is not None:
        rows += [("dsym_theta1", st.dsym_interval.theta1), ("dsym_theta2", st.dsym_interval.theta2)]
    if st.pego is not None:
        rows += [("pego_l_d_r", st.pego.l_d_r), ("pego_redet_max", st.pego.redet_max)]
    path = cfg.output.write_csv("analyze.csv", ["quantity", "value"], rows)
    return {"file": str(path), "rows": len(rows)}


def _hugoniot(cfg):
    model = cfg.model
    W = _base_state(cfg)
    sw, sign = cfg.values["sweep"], cfg.values["state"]["sign"]
    rng = (sw["param_min"], sw["param_max"])
    if model.kind == models.BURGERS:
        branch = hugoniot.burgers_branch(W, model.theta, sign, rng, sw["samples"])
    else:
        branch = hugoniot.euler_branch(W, model.law, model.theta, sign, rng, sw["samples"])
    liu = hugoniot.liu_check(branch)
    rows = [(p, *Wb, c, ok) for p, Wb, c, ok in branch.rows()]
    header = ["param", *_state_columns(model), "c", "liu_ok"]
    path = cfg.output.write_csv("branch.csv", header, rows)
    return {"file": str(path), "rows": len(rows), "liu_violation": liu.model_violation}


def compute_profile(cfg):
    model = cfg.model
    if model.kind == models.BURGERS:
        s = cfg.values["state"]
        _check("rho_far" in s, "[state] needs rho_far for a Burgers profile")
        W_star = _base_state(cfg)
        u, c = hugoniot.burgers_jump(s["rho_far"], W_star, model.theta, s["sign"])
        W_far = models.burgers_state(s["rho_far"], float(u))
        return profiles.profile_burgers(W_star, W_far, float(c), model.theta)
    params = reduced_parameters(cfg)
    if params.theta > 0:
        return profiles.profile_theta(params)
    return profiles.profile_theta0(params)


def _profile(cfg):
    prof = compute_profile(cfg)
    prim = prof.primitive()
    if prof.model.kind == models.BURGERS:
        rho, w = prof.states[:, 0], prof.states[:, 1]
        r, n, u = 1 + rho, np.ones_like(rho), prim[:, 1]
    else:
        r, rho, w = prof.states.T
        n, u = prim[:, 0], prim[:, 2]
    rows = zip(prof.grid, r, rho, w, n, u, prof.residuals)
    path = cfg.output.write_csv("profile.csv", ["y", "r", "rho", "w", "n", "u", "residual"], rows)
    return {"file": str(path), "rows": len(prof.grid), "residual_sup": prof.residual_sup,
            "monotone": prof.monotone, "c": prof.c}


def _primitive_to_state(model, vals):
    _check(len(vals) == model.m, f"expected {model.m} primitive values, got {len(vals)}")
    if model.kind == models.BURGERS:
        return models.burgers_state(*vals)
    return models.euler_state(*vals)


def _evolve(cfg):
    model = cfg.model
    e = cfg.values["evolve"]
    conf = ev.EvolveConfig(e["eps"], e["t_end"], e["cfl_hyp"], e["cfl_visc"], e["snapshot_every"])
    if e["initial"] == "riemann":
        _check("left" in e and "right" in e, "[evolve] riemann initial data needs left and right")
        WL = _primitive_to_state(model, e["left"])
        WR = _primitive_to_state(model, e["right"])
        xl, xr = e.get("x_left", -5.0), e.get("x_right", 5.0)
        _check(xr > xl, "x_right must exceed x_left")
        traj = ev.evolve_viscous(model, ev.riemann_grid(WL, WR, xl, xr, e["n_cells"]), conf)
        component, drift = 0, None
    else:
        prof = compute_profile(cfg)
        half = 64 * e["eps"]
        xl, xr = e.get("x_left", -half), e.get("x_right", half)
        bump = ev.Perturbation(e["amplitude"], e["width"], e["component"], e["center"])
        run = ev.perturb_and_evolve(prof.model, prof, bump, conf, xl, xr, e["n_cells"])
        traj, component = run.trajectory, (0 if model.kind == models.BURGERS else 1)
        drift = {"distance": float(run.distance[-1]), "relative": float(run.relative[-1]),
                 "decays": run.decays}
    cols = _state_columns(model)
    for k, (t, U) in enumerate(zip(traj.times, traj.snapshots)):
        cfg.output.write_csv(f"snapshot_{k:04d}.csv", ["x", *cols],
                             ((x, *W) for x, W in zip(traj.x, U)))
    header = ["t", *(f"total_{c}" for c in cols), "entropy", "front"]
    rows = ((t, *tot, ent, fr) for t, tot, ent, fr in zip(traj.times, traj.totals, traj.entropy, traj.front))
    cfg.output.write_csv("diagnostics.csv", header, rows)
    speed = ev.measure_wave_speed(traj, component)
    out = {"snapshots": len(traj.times), "steps": traj.steps,
           "speed": speed.speed, "speed_uncertainty": speed.uncertainty}
    if drift is not None:
        out["drift"] = drift
    return out


def _law_pbar(cfg):
    _check(cfg.model.kind == models.EULER, "sweeps need the euler model")
    return profiles.RescaledPressure.of(cfg.model.law, cfg.values["reduced"]["n_star"])


def _sweep_tau(cfg):
    pbar = _law_pbar(cfg)
    sw = cfg.values["sweep"]
    grid = np.geomspace(sw["kappa_min"], sw["kappa_max"], sw["n_kappa"])
    ks = pbar.kappa_star
    if sw["kappa_min"] <= ks <= sw["kappa_max"] and not np.any(grid == ks):
        grid = np.sort(np.append(grid, ks))
    rows = []
    for k in grid:
        sharp = profiles.tau_sharp(k, pbar)
        rows.append((k, sharp.n_hash, sharp.tau_hash, profiles.n_cross(k, pbar).n))
    path = cfg.output.write_csv("sweep_tau.csv", ["kappa", "n_hash", "tau_hash", "n_cross"], rows)
    return {"file": str(path), "rows": len(rows)}


def _sweep_g(cfg):
    pbar = _law_pbar(cfg)
    sw = cfg.values["sweep"]
    files = []
    for k in sw["kappas"]:
        top = profiles.n_bar(k, pbar)
        ns = np.linspace(0, top, sw["n_points"] + 2)[1:-1]
        rows = [(n, profiles.g_kappa(n, k, pbar)[0]) for n in ns]
        files.append(str(cfg.output.write_csv(f"sweep_g_kappa_{k:g}.csv", ["n", "g"], rows)))
    return {"files": files}


COMMANDS = {
    "analyze": _analyze,
    "hugoniot": _hugoniot,
    "profile": _profile,
    "evolve": _evolve,
    "sweep-tau": _sweep_tau,
    "sweep-g": _sweep_g,
}


def run(cfg, command):
    """Run one subcommand and return a JSON-able summary; raises on failure."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    return COMMANDS[command](cfg)


def exit_code(exc):
    if isinstance(exc, AdmissibilityError):
        return EXIT_ADMISSIBILITY
    if isinstance(exc, (NumericError, ArithmeticError)):
        return EXIT_NUMERIC
    return EXIT_CONFIG


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="fpshock", description="Shock waves in fluid-particle flow models.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", "-c", help="ini-style config file")
    p.add_argument("--set", "-s", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override one config value (repeatable)")
    return p


def _fail(exc):
    code = exit_code(exc)
    line = {"error": type(exc).__name__, "exit": code, "message": str(exc)}
    print(json.dumps(line), file=sys.stderr)
    return code


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = parse_config(args.config, args.set)
        summary = run(cfg, args.command)
    except (FPShockError, ValueError, ArithmeticError) as exc:
        return _fail(exc)
    print(json.dumps(summary, sort_keys=True, default=float))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
