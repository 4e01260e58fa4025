"""Blow-up scenarios described by a JSON config.

Keys::

    ambient     structure string or "CPn:<n>"
    omega       symplectic class on the ambient (cochain expression; "h" for CP^n)
    sub         structure string, "torus", or "point"
    frame       tangent vectors spanning a subtorus of a nilmanifold ambient
    hyperplane  i*(h) as a cochain expression on the sub (CP^n ambient only)
    sigma       symplectic class on the sub (default i*omega)
    chern       per-degree coefficient lists for c_1 .. c_(k-1) (default zeros)
    massey      ambient triples, e.g. [["1", "2", "1"]]
    sub_massey  submanifold triples
    checks      subset of ["betti", "lefschetz", "massey", "predictions"]
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .blowup import (BlowupInput, BlowupRing, build_blowup, check_predictions,
                     lefschetz_report_generic, make_blowup_input, predict_general,
                     predict_surface_blowup)
from .cemodel import parse_cochain, parse_structure
from .cohomring import (CERing, CohomologyRing, RingElement, RingMap, compute_cohomology,
                        point_inclusion, point_ring, projective_space_ring,
                        restriction_from_subtorus, ring_map_from_degree2, torus_ring)
from .errors import HypothesisError, InternalCheckError, UsageError
from .lefschetz import full_report
from .massey import (is_trivial, survives_blowup_ambient, survives_blowup_submanifold,
                     triple_product)

ALL_CHECKS = ("betti", "lefschetz", "massey", "predictions")


@dataclass
class Scenario:
    ambient: CohomologyRing
    omega: RingElement
    sub: CohomologyRing
    imap: RingMap
    sigma: Optional[RingElement]
    data: BlowupInput
    ring: BlowupRing
    massey: List[tuple] = field(default_factory=list)
    sub_massey: List[tuple] = field(default_factory=list)
    checks: tuple = ALL_CHECKS


def _ring_from_text(text: str) -> CohomologyRing:
    text = text.strip()
    if text.lower().startswith("cpn:"):
        return projective_space_ring(int(text.split(":", 1)[1]))
    if text == "point":
        return point_ring()
    return compute_cohomology(parse_structure(text))


def element_from_text(ring: CohomologyRing, text: str) -> RingElement:
    """Parse a class: a cochain expression on a CE ring, or "h"/"c*h" on CP^n."""
    if isinstance(ring, CERing):
        return ring.class_of(parse_cochain(text, ring.spec.n))
    t = text.replace(" ", "")
    if t.endswith("h"):
        coeff = t[:-1].rstrip("*") or "1"
        coeff = {"-": "-1", "+": "1"}.get(coeff, coeff)
        return ring.basis_element(2, 0).scale(Fraction(coeff))
    raise UsageError(f"cannot parse {text!r} as a class of a presented ring")


def load_config(source) -> Scenario:
    if isinstance(source, (str, Path)):
        try:
            cfg = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {source}: {exc}") from exc
    else:
        cfg = dict(source)
    unknown = set(cfg) - {"ambient", "omega", "sub", "frame", "hyperplane", "sigma", "chern",
                          "massey", "sub_massey", "checks"}
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}")
    if "ambient" not in cfg:
        raise UsageError("config needs an 'ambient' entry")
    ambient = _ring_from_text(cfg["ambient"])
    omega_text = cfg.get("omega", "h" if not isinstance(ambient, CERing) else None)
    if omega_text is None:
        raise UsageError("config needs 'omega' for a nilmanifold ambient")
    omega = element_from_text(ambient, omega_text)

    sub_text = cfg.get("sub", "point")
    if sub_text == "point":
        sub = point_ring()
        imap = point_inclusion(ambient, sub)
    elif "frame" in cfg:
        if not isinstance(ambient, CERing):
            raise UsageError("'frame' needs a nilmanifold ambient")
        frame = [[Fraction(str(c)) for c in v] for v in cfg["frame"]]
        sub = torus_ring(len(frame))
        if sub_text not in ("torus", None):
            spec = parse_structure(sub_text)
            if spec.n != len(frame) or not spec.is_abelian():
                raise UsageError("'sub' must be the torus spanned by the frame")
        imap = restriction_from_subtorus(ambient, frame, sub)
    elif "hyperplane" in cfg:
        if isinstance(ambient, CERing):
            raise UsageError("'hyperplane' needs a CPn ambient")
        sub = _ring_from_text(sub_text)
        imap = ring_map_from_degree2(ambient, sub, element_from_text(sub, cfg["hyperplane"]))
        if not imap.check_multiplicative():
            raise UsageError("hyperplane image does not give a ring map")
    else:
        raise UsageError("a non-point 'sub' needs 'frame' or 'hyperplane'")

    sigma = element_from_text(sub, cfg["sigma"]) if "sigma" in cfg else None
    k = (ambient.dimension - sub.dimension) // 2
    chern = None
    if "chern" in cfg:
        raw = cfg["chern"]
        if len(raw) != k - 1:
            raise UsageError(f"'chern' needs {k - 1} entries")
        chern = [sub.element(2 * j, coeffs) for j, coeffs in enumerate(raw, start=1)]
    data = make_blowup_input(ambient, sub, imap, chern)
    ring = build_blowup(data)
    checks = tuple(cfg.get("checks", ALL_CHECKS))
    bad = set(checks) - set(ALL_CHECKS)
    if bad:
        raise UsageError(f"unknown checks {sorted(bad)}")

    def triples(key, r):
        out = []
        for tri in cfg.get(key, []):
            if len(tri) != 3:
                raise UsageError(f"'{key}' entries need three classes")
            out.append(tuple(element_from_text(r, t) for t in tri))
        return out

    return Scenario(ambient, omega, sub, imap, sigma, data, ring,
                    triples("massey", ambient), triples("sub_massey", sub), checks)


def run_checks(sc: Scenario, checks=None, eps_report=False) -> dict:
    checks = tuple(checks or sc.checks)
    out = {"k": sc.data.k, "thom": sc.data.thom.label(), "euler": sc.data.euler.label()}
    ok = True
    if "betti" in checks:
        expected = [sc.ambient.betti_at(m) + sum(sc.sub.betti_at(m - 2 * j)
                                                 for j in range(1, sc.data.k))
                    for m in sc.ring.degrees()]
        out["betti"] = {"ambient": list(sc.ambient.betti), "sub": list(sc.sub.betti),
                        "blowup": list(sc.ring.betti), "additive": list(sc.ring.betti) == expected}
        ok &= out["betti"]["additive"]
    generic = None
    if "lefschetz" in checks or "predictions" in checks:
        generic = lefschetz_report_generic(sc.ring, sc.omega)
        ambient_report = full_report(sc.ambient, sc.omega)
        lj = generic.to_json() if eps_report else generic.report.to_json()
        lj["ambient"] = ambient_report.to_json()
        if not eps_report:
            lj["admissible_eps"] = str(generic.admissible_eps)
        out["lefschetz"] = lj
    if "predictions" in checks:
        preds = []
        for name, fn in (("general", lambda: predict_general(sc.ambient, sc.omega, sc.sub,
                                                              sc.sigma, sc.imap)),
                         ("surface", lambda: predict_surface_blowup(sc.ambient, sc.omega, sc.sub,
                                                                    sc.imap, sc.data.thom))):
            try:
                res = check_predictions(fn(), generic)
            except HypothesisError as exc:
                preds.append({"predictor": name, "refused": exc.as_dict()})
                continue
            for p, observed, good in res:
                entry = p.to_json()
                entry.update(predictor=name, observed=observed, consistent=good)
                preds.append(entry)
                ok &= good
        out["predictions"] = preds
    if "massey" in checks:
        rows = []
        for x, y, z in sc.massey:
            coset, _ = triple_product(sc.ambient, x, y, z)
            nontrivial = not is_trivial(coset)
            survives = survives_blowup_ambient(sc.ring, coset)
            if nontrivial and not survives:
                raise InternalCheckError("nontrivial ambient Massey product died in the blow-up")
            rows.append({"source": "ambient", "inputs": [v.label() for v in (x, y, z)],
                         "representative": coset.representative.label(),
                         "nontrivial": nontrivial, "survives": survives})
        for x, y, z in sc.sub_massey:
            coset, _ = triple_product(sc.sub, x, y, z)
            entry = {"source": "sub", "inputs": [v.label() for v in (x, y, z)],
                     "representative": coset.representative.label(),
                     "nontrivial": not is_trivial(coset)}
            try:
                entry["survives"] = survives_blowup_submanifold(sc.ring, coset, sc.data.k)
            except HypothesisError as exc:
                entry["refused"] = exc.as_dict()
            rows.append(entry)
        out["massey"] = rows
    out["ok"] = bool(ok)
    return out
