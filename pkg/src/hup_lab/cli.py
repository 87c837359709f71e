"""``hup-lab`` command line: run one experiment from a TOML config, or a named suite.

    hup-lab run <config.toml>
    hup-lab suite <identities|hup|weyl|all> [--jobs K] [--out DIR] [--seed S] [--param key=value ...]

Exit status: 0 for PASS/EXPLORATORY, 1 for FAIL, 2 for configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import tomli

from . import hup_experiments as hx
from . import weyl
from .geometry import ConeSampler, RegionSpec
from .harmonics import BigradedPolynomial
from .schema import SCHEMA_VERSION

log = logging.getLogger("hup_lab")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
MAX_SEED = 2**64 - 1


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key (and line when known)."""


# ----------------------------------------------------------------- registry
#
# Each experiment kind lists its parameters with defaults, its tolerances with
# defaults, and its allowed expectations (first = default).

_REGION_DEFAULT = {"kind": "disk", "radius": 1.0, "center": [0.0, 0.0]}

KINDS: dict[str, dict] = {
    "hs_identity": {
        "params": {"region": _REGION_DEFAULT, "N": 2, "M": 40, "kernel_route": True},
        "tolerances": {"rel_err": 0.02, "kernel_agreement": 1e-4},
        "expect": [None],
    },
    "annihilation_probe": {
        "params": {"region": _REGION_DEFAULT, "N": 2, "M": 40},
        "tolerances": {"near_one": 1e-6, "max_sigma_gap": 1e-3},
        "expect": ["no-common-element", "common-element"],
    },
    "sap_estimate": {
        "params": {"region": _REGION_DEFAULT, "N": 2, "M": 12, "trials": 500, "band": None},
        "tolerances": {"stability": 0.05},
        "expect": [None],
    },
    "plancherel": {
        "params": {"M": 40, "trials": 10, "lam": 1.0},
        "tolerances": {"rel": 0.01},
        "expect": [None],
    },
    "finite_rank_annihilation": {
        "params": {"region": _REGION_DEFAULT, "N": 2, "M": 40, "trials": 4, "iterations": 200},
        "tolerances": {"min_defect": 0.05},
        "expect": ["bounded-away", "common-element"],
    },
    "hup_rank": {
        "params": {"n": 2, "L": 3, "samples": 16, "radii": [0.5, 1.0, 1.5, 2.0], "threshold": 1e-8,
                   "variant": "sft", "K": None, "theta_count": None,
                   "cone": {"kind": "H", "a": 4.0}},
        "tolerances": {"nullspace_residual": 1e-8, "spot_check": 1e-5, "sigma_ratio": 1e-6},
        "expect": ["full-rank", "nullspace"],
    },
    "spectral_determinacy": {
        "params": {"r1": 1.0, "r2": 1.7, "L": 3, "K": 12, "n": 2, "adversarial": None},
        "tolerances": {"witness": 1e-6, "zero_block": 1e-9},
        "expect": ["full-rank"],
    },
    "funk_hecke": {"params": {"n": 2, "lmax": 6, "trials": 5}, "tolerances": {"spread": 1e-6}, "expect": [None]},
    "bessel_form": {"params": {"n": 2}, "tolerances": {"spread": 1e-5, "zero_alignment": 1e-6}, "expect": [None]},
    "hecke_bochner": {"params": {"n": 2, "kmax": 6, "pmax": 2, "r": 1.3},
                      "tolerances": {"spread": 1e-5, "zero_branch": 1e-9}, "expect": [None]},
    "hermite_laguerre_sum": {"params": {"nmax": 2, "kmax": 3, "lams": [1.0, 2.0], "points": 10},
               "tolerances": {"abs": 1e-7}, "expect": [None]},
    "geodesic_equivalence": {"params": {"n": 2, "L": 4, "trials": 10}, "tolerances": {"abs": 1e-7},
                             "expect": [None]},
    "laguerre_zeros": {"params": {"n": 2, "kmax": 20}, "tolerances": {"gap": 1e-8}, "expect": [None]},
}

_EXPERIMENT_KEYS = {"kind", "seed", "output_dir", "expect", "csv", "name"}
_REGION_KEYS = {"kind", "radius", "center", "inner", "lower", "upper", "parts"}
_CONE_KEYS = {"kind", "a", "terms", "lines", "dimension"}


@dataclass
class RunConfig:
    kind: str
    params: dict
    tolerances: dict
    seed: int = 0
    output_dir: str = "reports"
    expect: str | None = None
    csv: bool = False
    name: str | None = None
    path: str | None = None

    def inputs(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "params": self.params, "tolerances": self.tolerances,
                "expect": self.expect, "config_path": self.path}


# ------------------------------------------------------------- config parsing


def _line_of(text: str, key: str) -> str:
    for i, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped.startswith(key) and stripped[len(key):].lstrip().startswith("="):
            return f" (line {i})"
        if stripped.startswith("[") and stripped.strip("[]").strip() == key:
            return f" (line {i})"
    return ""


def _check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= MAX_SEED:
        raise ConfigError(f"experiment.seed must be an integer in [0, 2^64 - 1], got {seed!r}")
    return seed


def _merge_params(kind: str, given: dict, text: str = "") -> dict:
    spec = KINDS[kind]["params"]
    out = dict(spec)
    for key, val in given.items():
        if key not in spec:
            raise ConfigError(f"unknown key params.{key} for experiment {kind!r}{_line_of(text, key)}")
        out[key] = val
    return out


def _merge_tolerances(kind: str, given: dict, text: str = "") -> dict:
    spec = KINDS[kind]["tolerances"]
    out = dict(spec)
    for key, val in given.items():
        if key not in spec:
            raise ConfigError(f"unknown key tolerances.{key} for experiment {kind!r}{_line_of(text, key)}")
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not val > 0:
            raise ConfigError(f"tolerances.{key} must be a positive number, got {val!r}{_line_of(text, key)}")
        out[key] = float(val)
    return out


def parse_config(text: str, path: str | None = None) -> RunConfig:
    """Parse and validate a TOML run configuration."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"malformed TOML: {exc}") from exc
    for section in data:
        if section not in ("experiment", "params", "tolerances"):
            raise ConfigError(f"unknown section [{section}]{_line_of(text, section)}")
    exp = data.get("experiment")
    if not isinstance(exp, dict):
        raise ConfigError("missing [experiment] section")
    for key in exp:
        if key not in _EXPERIMENT_KEYS:
            raise ConfigError(f"unknown key experiment.{key}{_line_of(text, key)}")
    kind = exp.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"experiment.kind must be one of {sorted(KINDS)}, got {kind!r}{_line_of(text, 'kind')}")
    params = _merge_params(kind, data.get("params", {}), text)
    tolerances = _merge_tolerances(kind, data.get("tolerances", {}), text)
    expect = exp.get("expect", KINDS[kind]["expect"][0])
    if expect not in KINDS[kind]["expect"]:
        raise ConfigError(f"experiment.expect for {kind!r} must be one of {KINDS[kind]['expect']}, got {expect!r}")
    cfg = RunConfig(kind, params, tolerances, _check_seed(exp.get("seed", 0)), str(exp.get("output_dir", "reports")),
                    expect, bool(exp.get("csv", False)), exp.get("name"), path)
    _validate_params(cfg)
    return cfg


def load_config(path: str | os.PathLike) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path))


def _validate_params(cfg: RunConfig) -> None:
    p = cfg.params
    try:
        if "region" in p:
            build_region(p["region"])
        if cfg.kind == "hup_rank":
            build_cone(p["cone"], p["n"], cfg.seed)
            hx.RankExperimentConfig(n=p["n"], L=p["L"], samples=p["samples"], radii=tuple(p["radii"]),
                                    threshold=p["threshold"], variant=p["variant"], K=p["K"],
                                    theta_count=p["theta_count"])
        for key in ("N", "M", "L", "K", "trials", "n", "samples"):
            v = p.get(key)
            if v is not None and (isinstance(v, bool) or not isinstance(v, int) or v < 0):
                raise ConfigError(f"params.{key} must be a non-negative integer, got {v!r}")
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"invalid params for {cfg.kind!r}: {exc}") from exc


def build_region(spec: dict) -> RegionSpec:
    if not isinstance(spec, dict):
        raise ConfigError("params.region must be a table")
    unknown = set(spec) - _REGION_KEYS
    if unknown:
        raise ConfigError(f"unknown key params.region.{sorted(unknown)[0]}")
    kind = spec.get("kind", "disk")
    if kind == "union":
        return RegionSpec("union", parts=tuple(build_region(s) for s in spec.get("parts", [])),
                          center=tuple(spec.get("center", (0.0, 0.0))))
    kw = {k: (tuple(v) if isinstance(v, list) else v) for k, v in spec.items() if k not in ("kind", "parts")}
    try:
        return RegionSpec(kind, **kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid region: {exc}") from exc


def build_cone(spec: dict, n: int, seed: int) -> ConeSampler:
    if not isinstance(spec, dict):
        raise ConfigError("params.cone must be a table")
    unknown = set(spec) - _CONE_KEYS
    if unknown:
        raise ConfigError(f"unknown key params.cone.{sorted(unknown)[0]}")
    kind = spec.get("kind", "H")
    if kind == "H":
        return hx.h_cone(n, float(spec.get("a", 4.0)), seed=seed)
    if kind == "lines":
        return hx.lines_cone(n, int(spec.get("lines", 24)), seed=seed)
    if kind == "harmonic":
        return hx.harmonic_cone(harmonic_from_terms(spec.get("terms"), n), seed=seed)
    if kind == "armitage":
        return ConeSampler("armitage_Ka", a=float(spec.get("a", 0.5)), dimension=int(spec.get("dimension", 2 * n)),
                           seed=seed)
    raise ConfigError(f"params.cone.kind must be one of H, lines, harmonic, armitage; got {kind!r}")


def harmonic_from_terms(terms, n: int) -> BigradedPolynomial:
    """``terms = [{alpha=[..], beta=[..], re=.., im=..}, ...]``; default ``|z_1|^2 - |z_2|^2``."""
    if terms is None:
        if n < 2:
            raise ConfigError("default harmonic cone needs n >= 2")
        e1 = tuple(1 if i == 0 else 0 for i in range(n))
        e2 = tuple(1 if i == 1 else 0 for i in range(n))
        return BigradedPolynomial.from_dict(n, {(e1, e1): 1.0, (e2, e2): -1.0})
    table = {}
    for t in terms:
        a, b = tuple(t["alpha"]), tuple(t["beta"])
        if len(a) != n or len(b) != n:
            raise ConfigError(f"harmonic term multi-indices must have length n={n}")
        table[(a, b)] = complex(t.get("re", 0.0), t.get("im", 0.0))
    Y = BigradedPolynomial.from_dict(n, table)
    if not Y.is_harmonic():
        raise ConfigError("params.cone.terms do not define a harmonic polynomial")
    return Y


# ---------------------------------------------------------------- execution


def execute(kind: str, params: dict, tolerances: dict, seed: int, expect: str | None):
    """Run one experiment; returns ``(report, verdict, reasons, warnings)``.  Pure and picklable."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = _dispatch(kind, params, seed)
    verdict, reasons = judge(kind, report, tolerances, expect)
    msgs = sorted({f"{w.category.__name__}: {w.message}" for w in caught})
    return report, verdict, reasons, msgs


def _dispatch(kind: str, p: dict, seed: int) -> hx.ExperimentReport:
    t0 = time.perf_counter()
    if kind == "hs_identity":
        A = build_region(p["region"])
        hs = weyl.hs_identity(A, p["N"], p["M"], kernel_route=p["kernel_route"])
        rep = hx.ExperimentReport("hs_identity", dict(p), "COMPUTED", residuals={"rel_err": hs.rel_err},
                                  details=hs.as_dict(), calibration=hx.calibration_block())
    elif kind == "annihilation_probe":
        A = build_region(p["region"])
        pr = weyl.annihilation_probe(A, p["N"], p["M"])
        rep = hx.ExperimentReport("annihilation_probe", dict(p), "COMPUTED",
                                  singular_values=[float(s) for s in pr.singular_values],
                                  details={k: v for k, v in pr.as_dict().items() if k != "singular_values"},
                                  calibration=hx.calibration_block())
    elif kind == "sap_estimate":
        A = build_region(p["region"])
        sr = weyl.sap_estimate(A, p["N"], p["M"], trials=p["trials"], seed=seed, band=p["band"])
        rep = hx.ExperimentReport("sap_estimate", dict(p), "COMPUTED", details=sr.as_dict(),
                                  calibration=hx.calibration_block())
    elif kind == "plancherel":
        rep = hx.check_plancherel(M=p["M"], trials=p["trials"], seed=seed, lam=p["lam"])
    elif kind == "finite_rank_annihilation":
        rep = hx.finite_rank_annihilation(build_region(p["region"]), p["N"], p["M"], trials=p["trials"],
                                          iterations=p["iterations"], seed=seed)
        rep.calibration = hx.calibration_block()
    elif kind == "hup_rank":
        cfg = hx.RankExperimentConfig(n=p["n"], L=p["L"], samples=p["samples"], radii=tuple(p["radii"]),
                                      threshold=p["threshold"], variant=p["variant"], K=p["K"],
                                      theta_count=p["theta_count"], seed=seed)
        cone_spec = p["cone"]
        rep = hx.hup_rank(cfg, build_cone(cone_spec, p["n"], seed))
        if cone_spec.get("kind") == "harmonic":
            Y = harmonic_from_terms(cone_spec.get("terms"), p["n"])
            c = hx.coefficient_vector(Y, p["n"], p["L"])
            rep.residuals["chosen_harmonic_distance"] = hx.nullspace_distance(rep, c)
    elif kind == "spectral_determinacy":
        r2 = p["r2"]
        adv = p["adversarial"]
        if adv is not None:
            r2 = hx.adversarial_radius(p["n"], adv["p"], adv["q"], adv["k0"])
        rep = hx.spectral_determinacy(p["r1"], r2, p["L"], p["K"], n=p["n"], seed=seed)
        rep.details["adversarial"] = adv
    elif kind == "funk_hecke":
        rep = hx.check_funk_hecke(n=p["n"], lmax=p["lmax"], trials=p["trials"], seed=seed)
    elif kind == "bessel_form":
        rep = hx.check_bessel_form(n=p["n"], seed=seed)
    elif kind == "hecke_bochner":
        rep = hx.check_hecke_bochner(n=p["n"], kmax=p["kmax"], pmax=p["pmax"], r=p["r"], seed=seed)
    elif kind == "hermite_laguerre_sum":
        rep = hx.check_hermite_laguerre_sum(nmax=p["nmax"], kmax=p["kmax"], lams=tuple(p["lams"]), points=p["points"], seed=seed)
    elif kind == "geodesic_equivalence":
        rep = hx.check_geodesic_equivalence(n=p["n"], L=p["L"], trials=p["trials"], seed=seed)
    elif kind == "laguerre_zeros":
        rep = hx.check_laguerre_zeros(n=p["n"], kmax=p["kmax"])
    else:  # pragma: no cover - guarded by parse_config
        raise ConfigError(f"unknown experiment kind {kind!r}")
    if not rep.wall_time:
        rep.wall_time = time.perf_counter() - t0
    return rep


def judge(kind: str, rep: hx.ExperimentReport, tol: dict, expect: str | None) -> tuple[str, list[str]]:
    """Map an experiment outcome to PASS / FAIL / EXPLORATORY with human-readable reasons."""
    r, d = rep.residuals, rep.details
    checks: list[tuple[bool, str]] = []
    if kind == "hs_identity":
        checks.append((d["rel_err"] < tol["rel_err"], f"rel_err {d['rel_err']:.3e} < {tol['rel_err']}"))
        if d.get("kernel_rel_diff") is not None:
            checks.append((d["kernel_rel_diff"] < tol["kernel_agreement"],
                           f"kernel/basis agreement {d['kernel_rel_diff']:.3e} < {tol['kernel_agreement']}"))
        if d["truncation_dominated"]:
            checks.append((False, f"truncation-dominated: tail bound {d['tail_bound']:.3e}"))
    elif kind == "annihilation_probe":
        sv = rep.singular_values
        top = sv[0] if sv else 0.0
        checks.append((d["count_near_one"] <= d["bound"],
                       f"count_near_one {d['count_near_one']} <= floor(HS^2) {d['bound']}"))
        if expect == "no-common-element":
            checks.append((d["count_near_one"] == 0, f"count_near_one {d['count_near_one']} == 0"))
            checks.append((top < 1 - tol["max_sigma_gap"], f"sigma_max {top:.6f} < 1 - {tol['max_sigma_gap']}"))
        else:
            checks.append((d["count_near_one"] > 0, f"count_near_one {d['count_near_one']} > 0"))
    elif kind == "sap_estimate":
        h = d["history"]
        change = abs(h[-1] - h[0]) / h[-1] if len(h) > 1 and h[-1] else 0.0
        checks.append((change < tol["stability"], f"estimate change {change:.3e} < {tol['stability']}"))
    elif kind == "plancherel":
        checks.append((r["max_rel_defect"] < tol["rel"], f"Plancherel defect {r['max_rel_defect']:.3e} < {tol['rel']}"))
        if d.get("truncation_dominated") or r["max_tail_fraction"] > tol["rel"]:
            checks.append((False, f"truncation-dominated: discarded HS fraction {r['max_tail_fraction']:.3e}"))
    elif kind == "finite_rank_annihilation":
        ld = d["limiting_defect"]
        if expect == "bounded-away":
            checks.append((ld > tol["min_defect"], f"limiting defect {ld:.4f} > {tol['min_defect']}"))
        else:
            checks.append((ld < tol["min_defect"], f"limiting defect {ld:.4f} < {tol['min_defect']}"))
    elif kind == "hup_rank":
        checks.append((r["spot_check_rel"] < tol["spot_check"],
                       f"assembled entries vs quadrature {r['spot_check_rel']:.3e} < {tol['spot_check']}"))
        checks.append((d["threshold_robust"], "nullity stable under x10 threshold changes"))
        if expect == "full-rank":
            checks.append((d["sigma_ratio"] > tol["sigma_ratio"],
                           f"sigma_min/sigma_max {d['sigma_ratio']:.3e} > {tol['sigma_ratio']}"))
            if d["direct_vanishing_count"]:
                checks.append((False, f"{d['direct_vanishing_count']} independent harmonics of degree <= "
                                      f"{rep.config['L']} vanish on the sampled cone (it is a harmonic cone)"))
        else:
            checks.append((d["nullity"] > 0, f"nullity {d['nullity']} > 0"))
            checks.append((r["nullspace_residual"] < tol["nullspace_residual"],
                           f"nullspace residual {r['nullspace_residual']:.3e} < {tol['nullspace_residual']}"))
            checks.append((d["nullity"] == d["direct_vanishing_count"],
                           f"nullity {d['nullity']} == direct vanishing count {d['direct_vanishing_count']}"))
            if "chosen_harmonic_distance" in r:
                checks.append((r["chosen_harmonic_distance"] < tol["nullspace_residual"],
                               f"chosen harmonic in nullspace: {r['chosen_harmonic_distance']:.3e}"))
        if d["exploratory"]:
            return "EXPLORATORY", [f"real cone ({'; '.join(m for _, m in checks)})"]
    elif kind == "spectral_determinacy":
        checks.append((rep.outcome == "FULL-RANK", f"outcome {rep.outcome}"))
        checks.append((all(w["max_factor"] > tol["witness"] for w in d["witness"]),
                       f"every (p,q) witnessed by a Laguerre factor > {tol['witness']}"))
        checks.append((r["zero_block_max"] <= tol["zero_block"], f"k<q blocks max {r['zero_block_max']:.1e}"))
    else:
        key = {"funk_hecke": ("max_spread", "spread"), "bessel_form": ("max_spread", "spread"),
               "hecke_bochner": ("max_spread", "spread"), "hermite_laguerre_sum": ("max_abs_error", "abs")}.get(kind)
        if key:
            checks.append((r[key[0]] < tol[key[1]], f"{key[0]} {r[key[0]]:.3e} < {tol[key[1]]}"))
        if kind == "bessel_form":
            checks.append((r["zero_alignment"] < tol["zero_alignment"],
                           f"zero alignment {r['zero_alignment']:.3e} < {tol['zero_alignment']}"))
        if kind == "hecke_bochner":
            checks.append((r["zero_branch_max"] < tol["zero_branch"],
                           f"k<q branch {r['zero_branch_max']:.3e} < {tol['zero_branch']}"))
        if kind == "geodesic_equivalence":
            checks.append((max(r["forward_max_mean"], r["backward_max_projection"]) < tol["abs"],
                           f"equivalence residual < {tol['abs']}"))
            checks.append((r["generic_min_mean"] > 1e3 * tol["abs"], "generic f has non-vanishing means"))
        if kind == "laguerre_zeros":
            rows = d["table"]
            checks.append((all(row["count"] == row["k"] for row in rows), "k real zeros for every k"))
            checks.append((r["min_gap"] > tol["gap"], f"min gap {r['min_gap']:.3e} > {tol['gap']}"))
    ok = all(c for c, _ in checks)
    return ("PASS" if ok else "FAIL"), [("ok: " if c else "FAILED: ") + m for c, m in checks]


# ------------------------------------------------------------------ output


def report_document(cfg: RunConfig, rep: hx.ExperimentReport, verdict: str, reasons: list, msgs: list) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "experiment": cfg.kind,
        "inputs": hx._jsonable(cfg.inputs()),
        "results": rep.results_block(),
        "calibration": hx._jsonable(rep.calibration or hx.calibration_block()),
        "verdict": verdict,
        "verdict_reasons": reasons,
        "warnings": msgs,
        "timing": {"wall_time_s": float(rep.wall_time)},
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def atomic_write(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory and ``os.replace``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_documents(rep: hx.ExperimentReport) -> dict[str, str]:
    """CSV side outputs: ``spectrum`` (index, sigma) and ``table`` (columns of ``details.table``);
    reports with neither get a ``summary`` (quantity, value) of their scalar results."""
    out = {}
    if rep.singular_values:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "sigma"])
        for i, s in enumerate(rep.singular_values):
            w.writerow([i, repr(float(s))])
        out["spectrum"] = buf.getvalue()
    table = rep.details.get("table") or rep.details.get("witness")
    if table:
        rows = hx._jsonable(table)
        keys = sorted({k for row in rows for k in row})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        out["table"] = buf.getvalue()
    if not out:
        scalars = {k: v for k, v in {**rep.residuals, **rep.details}.items()
                   if isinstance(v, (int, float, bool, np.floating, np.integer)) or v is None}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "value"])
        for k in sorted(scalars):
            v = scalars[k]
            w.writerow([k, repr(float(v)) if isinstance(v, (float, np.floating)) else v])
        out["summary"] = buf.getvalue()
    return out


def run(config_path: str, out_dir: str | None = None) -> int:
    """``hup-lab run``: returns the exit status; the report is written atomically."""
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if out_dir is not None:
        cfg.output_dir = out_dir
    try:
        rep, verdict, reasons, msgs = execute(cfg.kind, cfg.params, cfg.tolerances, cfg.seed, cfg.expect)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    doc = report_document(cfg, rep, verdict, reasons, msgs)
    stem = cfg.name or Path(config_path).stem
    target = Path(cfg.output_dir) / f"{stem}.json"
    atomic_write(target, dumps(doc))
    if cfg.csv:
        for tag, text in csv_documents(rep).items():
            atomic_write(Path(cfg.output_dir) / f"{stem}-{tag}.csv", text)
    print(f"{cfg.kind}: {verdict} -> {target}")
    for line in reasons:
        print(f"  {line}")
    return EXIT_OK if verdict in ("PASS", "EXPLORATORY") else EXIT_FAIL


# ------------------------------------------------------------------- suites


@dataclass(frozen=True)
class Member:
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    expect: str | None = None
    tolerances: dict = field(default_factory=dict)


_HARMONIC_Y = [{"alpha": [1, 0], "beta": [1, 0], "re": 1.0}, {"alpha": [0, 1], "beta": [0, 1], "re": -1.0}]

SUITES: dict[str, list[Member]] = {
    "identities": [
        Member("funk_hecke", "funk_hecke"),
        Member("hermite_laguerre_sum", "hermite_laguerre_sum"),
        Member("hecke_bochner", "hecke_bochner"),
        Member("bessel_form", "bessel_form"),
        Member("plancherel", "plancherel"),
    ],
    "hup": [
        Member("hup_rank_H_cone", "hup_rank", {"cone": {"kind": "H", "a": 4.0}}, "full-rank"),
        Member("hup_rank_harmonic_cone", "hup_rank", {"cone": {"kind": "harmonic", "terms": _HARMONIC_Y}},
               "nullspace"),
        Member("hup_rank_lines_cone", "hup_rank", {"cone": {"kind": "lines", "lines": 24}, "samples": 24},
               "full-rank"),
        Member("spectral_determinacy_generic", "spectral_determinacy", {"r1": 1.0, "r2": 1.7}, "full-rank"),
        Member("spectral_determinacy_adversarial", "spectral_determinacy",
               {"r1": 1.0, "adversarial": {"p": 1, "q": 0, "k0": 2}}, "full-rank"),
        Member("geodesic_equivalence", "geodesic_equivalence"),
        Member("laguerre_zeros", "laguerre_zeros"),
    ],
    "weyl": [
        Member("plancherel", "plancherel"),
        Member("hs_identity", "hs_identity", {"N": 2, "M": 40}),
        Member("annihilation_probe", "annihilation_probe", {"N": 2, "M": 40}, "no-common-element"),
        Member("finite_rank_annihilation", "finite_rank_annihilation", {"N": 2, "M": 40}, "bounded-away"),
        Member("sap_estimate", "sap_estimate", {"N": 2, "M": 12}),
    ],
}
SUITES["all"] = SUITES["identities"] + SUITES["hup"] + [m for m in SUITES["weyl"] if m.name != "plancherel"]


def _coerce(value: str):
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        return value


def parse_overrides(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _coerce(v.strip())
    return out


def _member_task(args):
    name, kind, params, tolerances, seed, expect = args
    rep, verdict, reasons, msgs = execute(kind, params, tolerances, seed, expect)
    return name, kind, rep, verdict, reasons, msgs


def suite(name: str, jobs: int = 1, out: str = "reports", seed: int = 0, overrides: dict | None = None) -> int:
    """``hup-lab suite``: run members (optionally in parallel), aggregate, write reports."""
    if name not in SUITES:
        print(f"config error: unknown suite {name!r}; choose from {sorted(SUITES)}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        seed = _check_seed(seed)
        overrides = overrides or {}
        tasks = []
        used = set()
        for m in SUITES[name]:
            params = _merge_params(m.kind, m.params)
            for k, v in overrides.items():
                if k in params:
                    params[k] = v
                    used.add(k)
            tol = _merge_tolerances(m.kind, m.tolerances)
            expect = m.expect if m.expect is not None else KINDS[m.kind]["expect"][0]
            _validate_params(RunConfig(m.kind, params, tol, seed))
            tasks.append((m.name, m.kind, params, tol, seed, expect))
        unused = set(overrides) - used
        if unused:
            raise ConfigError(f"--param {sorted(unused)[0]} is not a parameter of any member of suite {name!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    t0 = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_member_task, tasks))
    else:
        results = [_member_task(t) for t in tasks]

    members = []
    out_dir = Path(out)
    for (mname, kind, rep, verdict, reasons, msgs), task in zip(results, tasks):
        cfg = RunConfig(kind, task[2], task[3], seed, out, task[5], name=mname)
        atomic_write(out_dir / name / f"{mname}.json", dumps(report_document(cfg, rep, verdict, reasons, msgs)))
        members.append({"name": mname, "experiment": kind, "verdict": verdict, "verdict_reasons": reasons,
                        "results": rep.results_block(), "timing": {"wall_time_s": float(rep.wall_time)}})
        print(f"  {mname:<36s} {verdict:<11s} {rep.wall_time:7.2f}s")
    aggregate = "PASS" if all(m["verdict"] == "PASS" for m in members) else "FAIL"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "suite": name,
        "seed": seed,
        "overrides": hx._jsonable(overrides),
        "members": members,
        "calibration": hx._jsonable(hx.calibration_block()),
        "verdict": aggregate,
        "timing": {"wall_time_s": time.perf_counter() - t0},
    }
    target = out_dir / f"suite-{name}.json"
    atomic_write(target, dumps(doc))
    print(f"suite {name}: {aggregate} -> {target}")
    return EXIT_OK if aggregate == "PASS" else EXIT_FAIL


def results_blocks(doc: dict) -> str:
    """Canonical serialization of a suite report's deterministic part."""
    return json.dumps([{"name": m["name"], "verdict": m["verdict"], "results": m["results"]} for m in doc["members"]],
                      sort_keys=True)


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hup-lab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment from a TOML config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="override experiment.output_dir")
    p_suite = sub.add_parser("suite", help="run a named acceptance battery")
    p_suite.add_argument("name")
    p_suite.add_argument("--jobs", type=int, default=1)
    p_suite.add_argument("--out", default="reports")
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                         help="override a parameter in every member that has it (e.g. M=10)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, matching the config-error status
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    np.seterr(all="ignore")
    if args.command == "run":
        return run(args.config, args.out)
    try:
        overrides = parse_overrides(args.param)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.jobs < 1:
        print("config error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    return suite(args.name, jobs=args.jobs, out=args.out, seed=args.seed, overrides=overrides)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
