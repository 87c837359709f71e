"""Acceptance battery: twelve criteria at their stated tolerances.

Each test prints (and records for the terminal summary) one line::

    criterion <k>: PASS|FAIL  <name>  <measured quantities>

Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""
import json
import time

import pytest

from hup_lab import cli
from hup_lab import hup_experiments as hx
from hup_lab import weyl
from hup_lab.geometry import disk
from hup_lab.harmonics import BigradedPolynomial

from conftest import ACCEPTANCE_LINES


def _verdict(k: int, name: str, ok: bool, detail: str) -> None:
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {name}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_funk_hecke():
    r = hx.check_funk_hecke(n=2, lmax=6, trials=5, tol=1e-6)
    s = r.residuals["max_spread"]
    _verdict(1, "Funk-Hecke eigenvalue property", s < 1e-6, f"max relative spread {s:.2e} (< 1e-6)")


def test_criterion_02_bessel_form():
    r = hx.check_bessel_form(n=2, classes=((0, 0), (1, 0), (1, 1), (2, 1)), tol=1e-5, zero_tol=1e-6)
    s, z = r.residuals["max_spread"], r.residuals["zero_alignment"]
    _verdict(2, "Bessel-form structure of the symplectic transform", s < 1e-5 and z < 1e-6,
             f"ratio spread {s:.2e} (< 1e-5), zero alignment {z:.2e} (< 1e-6)")


def test_criterion_03_hecke_bochner():
    r = hx.check_hecke_bochner(n=2, kmax=6, pmax=2, tol=1e-5, zero_tol=1e-9)
    s, z = r.residuals["max_spread"], r.residuals["zero_branch_max"]
    _verdict(3, "Hecke-Bochner proportionality", s < 1e-5 and z < 1e-9,
             f"spread {s:.2e} (< 1e-5), k<q branch {z:.1e} (< 1e-9)")


def test_criterion_04_special_hermite_laguerre_sum():
    r = hx.check_hermite_laguerre_sum(nmax=2, kmax=3, lams=(1.0, 2.0), points=10, tol=1e-7)
    e = r.residuals["max_abs_error"]
    _verdict(4, "diagonal special Hermite sum = Laguerre function", e < 1e-7, f"max abs error {e:.2e} (< 1e-7)")


def test_criterion_05_weyl_plancherel():
    r = hx.check_plancherel(M=40, trials=10, tol=0.01)
    d, tail = r.residuals["max_rel_defect"], r.residuals["max_tail_fraction"]
    _verdict(5, "Weyl transform Plancherel", d < 0.01 and not r.details["truncation_dominated"],
             f"max relative defect {d:.2e} (< 1e-2), logged tail fraction {tail:.1e}")


def test_criterion_06_hs_norm_of_EA_FN():
    t0 = time.perf_counter()
    parts, ok = [], True
    for N in (1, 2, 4):
        h = weyl.hs_identity(disk(), N, 40, kernel_route=True)
        ok &= h.rel_err < 0.02 and h.kernel_rel_diff < 1e-4 and not h.truncation_dominated
        parts.append(f"N={N}: {h.computed:.5f} vs {h.predicted:.5f} (rel {h.rel_err:.1e}, kernel {h.kernel_rel_diff:.1e})")
    elapsed = time.perf_counter() - t0
    ok &= elapsed <= 300
    _verdict(6, "||E_A F_N||_HS^2 on the unit disk", ok, "; ".join(parts) + f"; {elapsed:.1f}s (<= 300s)")


def test_criterion_07_annihilation_probe():
    parts, ok = [], True
    for N in (1, 2, 4):
        for M in (40, 60):
            p = weyl.annihilation_probe(disk(), N, M, near_one=1e-6)
            ok &= p.count_near_one == 0 and p.count_near_one <= p.bound
            parts.append(f"N={N},M={M}: sigma_max {p.singular_values[0]:.6f}, near-one {p.count_near_one} "
                         f"<= {p.bound}")
    _verdict(7, "no singular value of E_A F_N near 1", ok, "; ".join(parts))


@pytest.fixture(scope="module")
def y11():
    return BigradedPolynomial.from_dict(2, {((1, 0), (1, 0)): 1.0, ((0, 1), (0, 1)): -1.0})


def test_criterion_08_cone_uniqueness_both_directions(y11):
    # non-harmonic direction: the H-cone with a = 4 at L = 3
    h = hx.hup_rank(hx.RankExperimentConfig(n=2, L=3), hx.h_cone(2, 4.0))
    ratio = h.details["sigma_ratio"]
    ok_h = ratio > 1e-6
    # harmonic direction: zero set of a chosen Y in H_{1,1}
    r = hx.hup_rank(hx.RankExperimentConfig(n=2, L=3), hx.harmonic_cone(y11))
    dist = hx.nullspace_distance(r, hx.coefficient_vector(y11, 2, 3))
    ok_y = (dist < 1e-8 and r.residuals["nullspace_residual"] < 1e-8
            and r.details["nullity"] == r.details["direct_vanishing_count"] > 0)
    _verdict(8, "cone uniqueness (H-cone full rank; harmonic cone nullspace)", ok_h and ok_y,
             f"H-cone sigma_min/sigma_max {ratio:.1e} (> 1e-6: {'ok' if ok_h else 'NO'}; "
             f"direct vanishing count {h.details['direct_vanishing_count']}); "
             f"harmonic cone: distance {dist:.1e}, residual {r.residuals['nullspace_residual']:.1e}, "
             f"nullity {r.details['nullity']} == direct count {r.details['direct_vanishing_count']} "
             f"({'ok' if ok_y else 'NO'})")


def test_criterion_09_spectral_determinacy():
    g = hx.spectral_determinacy(1.0, 1.7, L=3, K=12)
    r2 = hx.adversarial_radius(2, 1, 0, 2)
    a = hx.spectral_determinacy(1.0, r2, L=3, K=12)
    w = next(x for x in a.details["witness"] if (x["p"], x["q"]) == (1, 0))
    zero_max = max(g.residuals["zero_block_max"], a.residuals["zero_block_max"])
    ok = (g.outcome == "FULL-RANK" and a.outcome == "FULL-RANK" and w["factors"][2] < 1e-12
          and w["max_factor"] > 1e-6 and zero_max <= 1e-9)
    _verdict(9, "spectral determinacy from two spheres", ok,
             f"generic {g.outcome}; adversarial r2={r2:.6f} {a.outcome} (witness k={w['k']}, "
             f"factor {w['max_factor']:.3f}); k<q blocks max {zero_max:.1e}")


def test_criterion_10_geodesic_equivalence():
    r = hx.check_geodesic_equivalence(n=2, L=4, trials=10, tol=1e-7)
    fwd, back = r.residuals["forward_max_mean"], r.residuals["backward_max_projection"]
    _verdict(10, "geodesic means vs projections", r.outcome == "PASS",
             f"forward {fwd:.1e}, backward {back:.1e} (< 1e-7); generic mean {r.residuals['generic_min_mean']:.2e}")


def test_criterion_11_laguerre_zeros():
    r = hx.check_laguerre_zeros(n=2, kmax=20, gap_tol=1e-8)
    g = r.residuals["min_gap"]
    _verdict(11, "simple zeros of L_k^1, k <= 20", r.outcome == "PASS", f"min gap {g:.3e} (> 1e-8)")


def test_criterion_12_suite_all_deterministic(tmp_path):
    texts = []
    for run in ("a", "b"):
        cli.suite("all", out=str(tmp_path / run), seed=0)
        doc = json.loads((tmp_path / run / "suite-all.json").read_text())
        texts.append(cli.results_blocks(doc))
    same = texts[0] == texts[1]
    _verdict(12, "suite all is deterministic", same, f"{len(json.loads(texts[0]))} members, result blocks "
             f"{'byte-identical' if same else 'DIFFER'} ({len(texts[0])} bytes)")
