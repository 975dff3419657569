"""Command-line front end.

    qduality catalog-list
    qduality presentation-check FILE
    qduality quadruple-build --algebra A --seed S [--flavor F] --hbar-order N --degree D
    qduality qdp-run         (same flags)
    qduality verify --suite {quadruple,hopf,coisotropy} (same flags)
    qduality roundtrip       (same flags)

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 insufficient
truncation, 3 input error.  Reports are deterministic JSON (or text).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from typing import Optional

from . import catalog
from .algebra import PresentationError, check_confluence, check_hopf_axioms, load_presentation
from .dual import DegreeOverflow
from .linalg import PreconditionError
from .quadruple import (complete_from_one, orthogonality_transport, qdp_roundtrip_check,
                        qdp_transform, verify_quadruple)
from .semiclassics import SemiclassicalError, coisotropy_check

SCHEMA = "qduality-report/1"
EXIT_OK, EXIT_FAIL, EXIT_TRUNC, EXIT_INPUT = 0, 1, 2, 3
MAX_N, MAX_D = 6, 8
FLAVORS = {"I": "I", "C": "C", "frakI": "fI", "frakC": "fC"}


class InputError(ValueError):
    pass


class TruncationError(ValueError):
    pass


@dataclass
class RunConfig:
    algebra: str = "sl2_standard"
    seed: str = "cartan"
    flavor: Optional[str] = None
    hbar_order: int = 3
    degree: int = 4
    out: Optional[str] = None
    format: str = "json"
    allow_large: bool = False

    def validate(self):
        if self.hbar_order < 1 or self.degree < 0:
            raise InputError("hbar-order must be >= 1 and degree >= 0")
        if self.flavor is not None and self.flavor not in FLAVORS:
            raise InputError(f"flavor must be one of {sorted(FLAVORS)}")
        if self.format not in ("json", "text"):
            raise InputError("format must be json or text")
        if self.hbar_order > MAX_N or self.degree > MAX_D:
            if not self.allow_large:
                raise InputError(f"(N, D) = ({self.hbar_order}, {self.degree}) exceeds the desk-scale bounds "
                                 f"N <= {MAX_N}, D <= {MAX_D}; pass --allow-large to override")
            warnings.warn("truncation above the desk-scale bounds; expect long run times")
        return self

    def to_json(self):
        return {"algebra": self.algebra, "seed": self.seed, "flavor": self.flavor,
                "hbar_order": self.hbar_order, "degree": self.degree}


# ---------------------------------------------------------------- reports

def _report(command, cfg, rows=(), bundle=None, certificates=None, extra=None):
    doc = {
        "schema": SCHEMA,
        "command": command,
        "config": cfg.to_json() if cfg else None,
        "catalog_version": catalog.load_manifest().get("version"),
        "certificates": certificates or {},
        "conditions": [{"condition": n, "passed": ok, "detail": d} for n, ok, d in rows],
        "passed": all(ok for _, ok, _ in rows),
    }
    if bundle is not None:
        doc["bundle"] = bundle
    if extra:
        doc.update(extra)
    return doc


def render(doc, fmt="json") -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    lines = [f"{doc['command']}: {'PASS' if doc['passed'] else 'FAIL'}"]
    for c in doc["conditions"]:
        lines.append(f"  {'PASS' if c['passed'] else 'FAIL'}  {c['condition']}" +
                     (f"  ({c['detail']})" if c["detail"] else ""))
    return "\n".join(lines) + "\n"


def _exit_code(doc):
    if doc.get("insufficient_truncation"):
        return EXIT_TRUNC
    return EXIT_OK if doc["passed"] else EXIT_FAIL


# ---------------------------------------------------------------- building blocks

def _entry(cfg):
    if os.path.isfile(cfg.algebra):
        pres = load_presentation(cfg.algebra)
        k = len(pres.generators)
        seeds = {"trivial": catalog.Seed("trivial", [], "fC", []),
                 "whole": catalog.Seed("whole", [[int(i == j) for j in range(k)] for i in range(k)], "fC",
                                       list(pres.generators))}
        return catalog.CatalogEntry(pres.name, pres, seeds, "loaded from file")
    try:
        return catalog.builtin(cfg.algebra)
    except catalog.CatalogError as e:
        raise InputError(str(e)) from None


def _quadruple(cfg, N=None):
    entry = _entry(cfg)
    try:
        q = entry.quadruple(cfg.seed, N or cfg.hbar_order, cfg.degree)
    except catalog.CatalogError as e:
        raise InputError(str(e)) from None
    if cfg.flavor:
        role = FLAVORS[cfg.flavor]
        q2 = complete_from_one(q.member(role), role, q.shadow)
        q = q2
    return entry, q


def _rows(rep, prefix=""):
    return [(prefix + n, ok, d) for n, ok, d in rep.rows]


# ---------------------------------------------------------------- commands

def cmd_catalog_list(cfg=None):
    entries = {}
    for name in catalog.names():
        e = catalog.builtin(name)
        entries[name] = {"generators": e.presentation.generators, "seeds": sorted(e.seeds), "notes": e.notes}
    entries["sl2_standard"]["seeds"].append("twisted_primitive(<rational>)")
    return _report("catalog-list", None, extra={"entries": entries, "mutations": catalog.mutations()})


def cmd_presentation_check(path):
    try:
        pres = load_presentation(path)
    except PresentationError as e:
        raise InputError(str(e)) from None
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    rep = check_hopf_axioms(pres)
    bad = check_confluence(pres)
    rows = _rows(rep) + [("confluence", not bad, ", ".join("".join(t) for t in bad))]
    return _report("presentation-check", None, rows, extra={"presentation": pres.name})


def cmd_quadruple_build(cfg: RunConfig):
    entry, q = _quadruple(cfg)
    rep = verify_quadruple(q)
    return _report("quadruple-build", cfg, _rows(rep), q.to_bundle(), entry_certs(entry))


def entry_certs(entry):
    return {"entry": entry.certificates(), "lie_bialgebra": entry.lie.certificate}


def cmd_qdp_run(cfg: RunConfig):
    if cfg.hbar_order < 2:
        raise TruncationError("qdp-run needs hbar-order >= 2 (h^-1 costs one order)")
    entry, q = _quadruple(cfg)
    base = verify_quadruple(q)
    rows = _rows(base, "base ")
    if not base.ok:
        return _report("qdp-run", cfg, rows, {"base": q.to_bundle()}, entry_certs(entry))
    dq = qdp_transform(q)
    doc_extra = {}
    if dq.partial:
        doc_extra["insufficient_truncation"] = True
    rows += _rows(verify_quadruple(dq), "dual ")
    rows += _rows(orthogonality_transport(q, dq), "transport ")
    return _report("qdp-run", cfg, rows, {"base": q.to_bundle(), "dual": dq.to_bundle()}, entry_certs(entry),
                   doc_extra)


def cmd_verify(suite, cfg: RunConfig):
    entry = _entry(cfg)
    if suite == "hopf":
        rows = _rows(check_hopf_axioms(entry.presentation))
        bad = check_confluence(entry.presentation)
        rows.append(("confluence", not bad, ""))
        rows += [(f"lie_bialgebra {k}", v, "") for k, v in sorted(entry.lie.certificate.items())]
        return _report("verify", cfg, rows, extra={"suite": suite})
    if suite == "coisotropy":
        seed = entry.seed(cfg.seed)
        chk = coisotropy_check(entry.subalgebra_datum(seed), entry.lie)
        rows = [(f"coisotropy {k}", v, "") for k, v in sorted(chk.items())]
        return _report("verify", cfg, rows, extra={"suite": suite})
    if suite == "quadruple":
        _, q = _quadruple(cfg)
        return _report("verify", cfg, _rows(verify_quadruple(q)), q.to_bundle(), entry_certs(entry),
                       {"suite": suite})
    raise InputError(f"unknown suite {suite!r}")


def cmd_roundtrip(cfg: RunConfig):
    """Round trips compared at precision N: the quadruple is built at N + 1."""
    entry, q = _quadruple(cfg, cfg.hbar_order + 1)
    dq = qdp_transform(q)
    rows = _rows(qdp_roundtrip_check(q, dq)) + _rows(orthogonality_transport(q, dq), "transport ")
    extra = {"insufficient_truncation": True} if dq.partial else {}
    return _report("roundtrip", cfg, rows, certificates=entry_certs(entry), extra=extra)


# ---------------------------------------------------------------- argparse

def _add_config_flags(p):
    p.add_argument("--algebra", default="sl2_standard", help="catalog name or presentation file")
    p.add_argument("--seed", default="cartan")
    p.add_argument("--flavor", choices=sorted(FLAVORS), default=None,
                   help="member to rebuild the quadruple from")
    p.add_argument("--hbar-order", type=int, default=3, dest="hbar_order")
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--allow-large", action="store_true", dest="allow_large")


def build_parser():
    ap = argparse.ArgumentParser(prog="qduality", description="Drinfeld functors on truncated QUEAs")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog-list", parents=[common])
    pc = sub.add_parser("presentation-check", parents=[common])
    pc.add_argument("file")
    for name in ("quadruple-build", "qdp-run", "roundtrip"):
        _add_config_flags(sub.add_parser(name, parents=[common]))
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--suite", choices=("quadruple", "hopf", "coisotropy"), default="quadruple")
    _add_config_flags(v)
    return ap


def run(argv=None):
    """Parse, execute, write the report; returns (exit code, report text)."""
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = None
    try:
        if args.command not in ("catalog-list", "presentation-check"):
            cfg = RunConfig(args.algebra, args.seed, args.flavor, args.hbar_order, args.degree, args.out,
                            args.format, args.allow_large).validate()
        if args.command == "catalog-list":
            doc = cmd_catalog_list()
        elif args.command == "presentation-check":
            doc = cmd_presentation_check(args.file)
        elif args.command == "quadruple-build":
            doc = cmd_quadruple_build(cfg)
        elif args.command == "qdp-run":
            doc = cmd_qdp_run(cfg)
        elif args.command == "verify":
            doc = cmd_verify(args.suite, cfg)
        else:
            doc = cmd_roundtrip(cfg)
        code = _exit_code(doc)
    except (InputError, PresentationError, SemiclassicalError, catalog.CatalogError) as e:
        doc, code = _error_doc(args.command, cfg, "input error", e), EXIT_INPUT
    except (TruncationError, DegreeOverflow) as e:
        doc, code = _error_doc(args.command, cfg, "insufficient truncation", e), EXIT_TRUNC
    except PreconditionError as e:
        doc, code = _error_doc(args.command, cfg, "precondition failed", e), EXIT_FAIL
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code:
        sys.stderr.write(f"qduality: {doc['conditions'][0]['condition'] if doc['conditions'] else 'failed'}"
                         f" (exit {code})\n" if code != EXIT_FAIL else _fail_line(doc))
    return code, text


def _fail_line(doc):
    bad = [c["condition"] for c in doc["conditions"] if not c["passed"]]
    return f"qduality: failed: {'; '.join(bad)}\n"


def _error_doc(command, cfg, kind, e):
    return _report(command, cfg, [(f"{kind}: {e}", False, type(e).__name__)])


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
