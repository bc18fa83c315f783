"""Command-line front end.

One run reads a region-list JSON file, performs one operation, and writes
its artifacts into --out-dir.  All outputs are deterministic: the same
invocation on the same input produces byte-identical files and stdout.

Operations:

  analyze    combinatorial survey: counts, admissibility, spin-c classes,
             candidate differential pairs (positive index-1 domains)
  makenice   finger-move the diagram until every unpointed region is a
             bigon or a square; emits the new list plus a move log
  homology   hat homology ranks per spin-c class (nice diagrams only)
  contact    is the distinguished cycle a boundary? (nice diagrams only)
  order      spectral order with certificate (nice diagrams only)
  plot       DOT graph of the complex in one or all spin-c classes
  all        analyze, then makenice if needed, then homology/contact/order

Exit codes: 0 success, 2 unreadable or invalid input, 3 refused
precondition (non-nice input to a nice-only command, inadmissible
diagram, contact-convention violation, move cap exhausted), 4 internal
error.  Set OBFLOER_LOG=debug|info|warning|error to adjust diagnostics
on stderr.
"""

import argparse
import json
import logging
import os
import re
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .diagram import (
    ContactConventionError,
    DiagramError,
    build_diagram,
    diagram_from_json,
    region_list_to_json,
)
from .domains import AdmissibilityError, DomainCalculator, DomainError
from .floer import FloerError, NiceComplex, NotNiceError, plot_complex
from .nicefy import NicefyError, StuckError, is_nice, make_nice

log = logging.getLogger("obfloer")

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_REFUSED = 3
EXIT_INTERNAL = 4

COMMANDS = ("analyze", "makenice", "homology", "contact", "order", "plot", "all")


class CliError(Exception):
    """Usage-level failure carrying its exit code."""

    def __init__(self, msg, code=EXIT_BAD_INPUT):
        super().__init__(msg)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path
    out_dir: Path
    spinc: int | None
    move_cap: int
    fmt: str
    dot: bool


class _Out:
    """Write-through collector; remembers what the run produced."""

    def __init__(self, root):
        self.root = Path(root)
        self.files = []

    def write(self, fname, text):
        # directory is created lazily so a failed run leaves nothing behind
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.root / fname
        p.write_text(text)
        self.files.append(p)
        log.info("wrote %s", p)
        return p


def _dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _safe_name(name):
    s = re.sub(r"[^A-Za-z0-9_.-]", "_", name)
    return s or "diagram"


def _check_spinc(k, table):
    if not 0 <= k < len(table.classes):
        raise CliError(
            "spinc index %d out of range (%d classes)" % (k, len(table.classes)))
    return k


def _size_hist(dg):
    c = Counter(sum(len(circ) for circ in reg) for reg in dg.regions)
    return [[s, c[s]] for s in sorted(c)]


def _plot_source(dg):
    # nice diagrams always plot through the counting engine
    return NiceComplex(dg) if is_nice(dg) else DomainCalculator(dg)


def _diff_lines(calc, diffs):
    lines = []
    for (i, j) in sorted(diffs):
        doms = diffs[(i, j)]
        j0 = sum(1 for d in doms if calc.j_plus(d) == 0)
        j2 = sum(1 for d in doms if calc.j_plus(d) == 2)
        lines.append(
            "x%d -> x%d : count=%d J0=%d J2=%d" % (i, j, len(doms), j0, j2))
    return "\n".join(lines) + ("\n" if lines else "")


def _entry_lines(entries):
    lines = [
        "x%d -> x%d : count=%d J0=%d J2=%d" % (i, j, e.count, e.j0, e.j2)
        for (i, j), e in sorted(entries.items())
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def _emit_dots(dg, ks, base, out):
    src = _plot_source(dg)
    for k in ks:
        out.write(base + "_spinc_%d.dot" % k, plot_complex(src, k))


# ---------------------------------------------------------------------------
# operations


def cmd_analyze(cfg, dg, out):
    calc = DomainCalculator(dg)
    table = calc.spinc_partition()
    diffs = calc.index1_differentials()
    doc = {
        "name": dg.name,
        "points": dg.num_points,
        "regions": dg.num_regions,
        "pointed": dg.num_pointed,
        "curves": dg.num_curves,
        "b1": dg.b1_diagram,
        "generators": len(dg.generators()),
        "spinc_classes": len(table.classes),
        "nice": is_nice(dg),
        "weakly_admissible": calc.check_weak_admissibility(),
        "candidate_pairs": len(diffs),
    }
    base = _safe_name(dg.name)
    all_lines = _diff_lines(calc, diffs)
    if cfg.spinc is not None:
        k = _check_spinc(cfg.spinc, table)
        sub = {p: d for p, d in diffs.items() if table.class_of[p[0]] == k}
        sub_lines = _diff_lines(calc, sub)
    out.write(base + "_analysis.json", _dumps(doc))
    out.write(base + "_possible_differentials.txt", all_lines)
    if cfg.spinc is not None:
        out.write(base + "_differentials_in_spinc_%d.txt" % k, sub_lines)
    if cfg.dot:
        _emit_dots(dg, range(len(table.classes)), base, out)
    return doc


def _makenice_core(cfg, dg, out):
    before = _size_hist(dg)
    res = make_nice(dg, move_cap=cfg.move_cap)
    fin = build_diagram(res.region_list)
    base = _safe_name(dg.name)
    move_lines = "".join(
        "move %d: region=%d entry_arc=(%d,%d) crossings=%d points_after=%d\n"
        % (n, m.region, m.entry_arc[0], m.entry_arc[1], m.crossings,
           m.points_after)
        for n, m in enumerate(res.moves)
    )
    out.write(base + "_nice.json", region_list_to_json(res.region_list) + "\n")
    out.write(base + "_makenice_log.txt", move_lines)
    doc = {
        "name": dg.name,
        "moves": len(res.moves),
        "points": fin.num_points,
        "regions": fin.num_regions,
        "region_sizes_before": before,
        "region_sizes_after": _size_hist(fin),
    }
    return doc, fin


def cmd_makenice(cfg, dg, out):
    doc, _ = _makenice_core(cfg, dg, out)
    return doc


def cmd_homology(cfg, dg, out):
    nc = NiceComplex(dg)
    if cfg.spinc is not None:
        ks = [_check_spinc(cfg.spinc, nc.table)]
    else:
        ks = list(range(len(nc.table.classes)))
    classes = []
    total = 0
    for k in ks:
        hr = nc.compute_homology(k)
        members = nc.table.classes[k]
        classes.append({
            "spinc": k,
            "div": hr.div,
            "chern": list(nc.table.chern[members[0]]),
            "generators": len(members),
            "ranks": [[g, r] for g, r in hr.ranks],
            "total": hr.total,
        })
        total += hr.total
    doc = {"name": dg.name, "classes": classes, "total_rank": total}
    base = _safe_name(dg.name)
    out.write(base + "_homology.json", _dumps(doc))
    if cfg.spinc is not None:
        sd = nc.build_boundary(ks[0])
        out.write(base + "_differentials_in_spinc_%d.txt" % ks[0],
                  _entry_lines(sd.entries))
    if cfg.dot:
        _emit_dots(dg, ks, base, out)
    return doc


def cmd_contact(cfg, dg, out):
    nc = NiceComplex(dg)
    val = nc.check_contact_class()
    xc = dg.contact_generator()
    doc = {
        "name": dg.name,
        "contact_class": val,
        "generator": xc.index,
        "spinc": nc.table.class_of[xc.index],
    }
    out.write(_safe_name(dg.name) + "_contact.json", _dumps(doc))
    return doc


def cmd_order(cfg, dg, out):
    nc = NiceComplex(dg)
    val = nc.check_contact_class()
    res = nc.compute_order()
    doc = {"name": dg.name, "contact_class": val}
    doc.update(res.as_jsonable())
    out.write(_safe_name(dg.name) + "_order.json", _dumps(doc))
    return doc


def cmd_plot(cfg, dg, out):
    src = _plot_source(dg)
    table = src.table if isinstance(src, NiceComplex) else src.spinc_partition()
    if cfg.spinc is not None:
        ks = [_check_spinc(cfg.spinc, table)]
    else:
        ks = list(range(len(table.classes)))
    base = _safe_name(dg.name)
    for k in ks:
        out.write(base + "_spinc_%d.dot" % k, plot_complex(src, k))
    return {"name": dg.name, "classes": ks}


def cmd_all(cfg, dg, out):
    parts = {"analyze": cmd_analyze(cfg, dg, out)}
    fin = dg
    if not is_nice(dg):
        parts["makenice"], fin = _makenice_core(cfg, dg, out)
    parts["homology"] = cmd_homology(cfg, fin, out)
    parts["contact"] = cmd_contact(cfg, fin, out)
    parts["order"] = cmd_order(cfg, fin, out)
    return parts


_DISPATCH = {
    "analyze": cmd_analyze,
    "makenice": cmd_makenice,
    "homology": cmd_homology,
    "contact": cmd_contact,
    "order": cmd_order,
    "plot": cmd_plot,
    "all": cmd_all,
}


# ---------------------------------------------------------------------------
# rendering


def _hist_str(pairs):
    return " ".join("%d:%d" % (s, c) for s, c in pairs)


def _render_text(command, doc):
    if command == "analyze":
        return "\n".join([
            "%s: %d points, %d regions (%d pointed), %d curves, b1=%d"
            % (doc["name"], doc["points"], doc["regions"], doc["pointed"],
               doc["curves"], doc["b1"]),
            "generators=%d spinc_classes=%d candidate_pairs=%d"
            % (doc["generators"], doc["spinc_classes"], doc["candidate_pairs"]),
            "nice=%s weakly_admissible=%s"
            % (str(doc["nice"]).lower(), str(doc["weakly_admissible"]).lower()),
        ])
    if command == "makenice":
        return "\n".join([
            "region sizes before: %s" % _hist_str(doc["region_sizes_before"]),
            "region sizes after:  %s" % _hist_str(doc["region_sizes_after"]),
            "moves: %d  (now %d points, %d regions)"
            % (doc["moves"], doc["points"], doc["regions"]),
        ])
    if command == "homology":
        lines = [
            "spinc %d: div=%d total=%d ranks=%s"
            % (c["spinc"], c["div"], c["total"],
               " ".join("%d:%d" % (g, r) for g, r in c["ranks"]))
            for c in doc["classes"]
        ]
        lines.append("total rank: %d" % doc["total_rank"])
        return "\n".join(lines)
    if command == "contact":
        return "contact class: %s (generator x%d, spinc %d)" % (
            doc["contact_class"], doc["generator"], doc["spinc"])
    if command == "order":
        lines = ["contact class: %s" % doc["contact_class"],
                 "order: %s" % doc["order"]]
        if "graded_mod" in doc:
            lines.append("graded mod: %d" % doc["graded_mod"])
        lines.append("certificate: %s" % json.dumps(doc["certificate"]))
        return "\n".join(lines)
    if command == "plot":
        return "plotted spinc classes: %s" % " ".join(
            str(k) for k in doc["classes"])
    # all: stitch the parts in pipeline order
    order = [k for k in
             ("analyze", "makenice", "homology", "contact", "order")
             if k in doc]
    return "\n".join(
        "[%s]\n%s" % (k, _render_text(k, doc[k])) for k in order)


# ---------------------------------------------------------------------------
# entry


def _parse_args(argv):
    ap = argparse.ArgumentParser(
        prog="obfloer",
        description="Heegaard Floer calculations on region-list diagrams.",
        epilog="exit codes: 0 ok, 2 bad input, 3 refused precondition, "
               "4 internal error",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, type=Path,
                    help="region-list JSON file")
    ap.add_argument("--out-dir", type=Path, default=Path("."),
                    help="directory for output artifacts (default: .)")
    ap.add_argument("--spinc", type=int, default=None, metavar="K",
                    help="restrict to one spin-c class")
    ap.add_argument("--move-cap", type=int, default=10 ** 6, metavar="N",
                    help="refuse after N finger moves")
    ap.add_argument("--format", choices=("json", "text"), default="text",
                    dest="fmt", help="stdout format (files are unaffected)")
    ap.add_argument("--dot", action="store_true",
                    help="also write DOT plots where applicable")
    ns = ap.parse_args(argv)
    return RunConfig(ns.command, ns.input, ns.out_dir, ns.spinc,
                     ns.move_cap, ns.fmt, ns.dot)


def _setup_logging():
    name = os.environ.get("OBFLOER_LOG", "warning").upper()
    level = getattr(logging, name, logging.WARNING)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    cfg = _parse_args(argv)
    _setup_logging()
    try:
        text = cfg.input.read_text()
    except OSError as e:
        print("error: cannot read %s: %s" % (cfg.input, e), file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        dg = diagram_from_json(text, name=cfg.input.stem)
    except DiagramError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_BAD_INPUT
    out = _Out(cfg.out_dir)
    try:
        doc = _DISPATCH[cfg.command](cfg, dg, out)
    except CliError as e:
        print("error: %s" % e, file=sys.stderr)
        return e.code
    except StuckError as e:
        if e.region_list is not None:
            p = out.write(_safe_name(dg.name) + "_stuck.json",
                          region_list_to_json(e.region_list) + "\n")
            print("refused: %s (state dumped to %s)" % (e, p), file=sys.stderr)
        else:
            print("refused: %s" % e, file=sys.stderr)
        return EXIT_REFUSED
    except NotNiceError as e:
        print("refused: %s" % e, file=sys.stderr)
        print("hint: run `obfloer makenice` and feed its output here",
              file=sys.stderr)
        return EXIT_REFUSED
    except (NicefyError, AdmissibilityError, ContactConventionError) as e:
        print("refused: %s" % e, file=sys.stderr)
        return EXIT_REFUSED
    except (FloerError, DomainError, DiagramError, AssertionError) as e:
        print("internal error: %s" % e, file=sys.stderr)
        return EXIT_INTERNAL
    if cfg.fmt == "json":
        sys.stdout.write(_dumps(doc))
    else:
        print(_render_text(cfg.command, doc))
        for p in out.files:
            print("wrote %s" % p)
    return EXIT_OK
