"""The ``qlab`` command-line driver.

Every command loads its inputs (``builtin:<name>``, a bare catalog name,
``path`` for the last structure in a file, or ``path:<name>``), runs one
query or verifier and prints a report.  Exit codes: 0 pass, 1 property or
theorem failure, 2 usage or parse error, 3 search bound exceeded.

Queries such as ``primitive`` always pass; their answer is the report's
``result`` field.  Reports are deterministic apart from the final
``timing`` line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import catalog, oracles
from . import primitivity as pr
from . import quantale as qt
from . import qmodule as qm
from . import rings
from .errors import (HypothesisUnmet, NoBasis, QlabError, SearchBoundExceeded,
                     StructureSyntaxError, TheoremViolation, UnknownReference, ValidationError)
from .fileformat import digest, load_structure_file, structure_key
from .lattice import FiniteLattice, enumerate_join_endomorphisms, is_atomic_frame
from .reports import BOUND, FAIL, PASS, VACUOUS, Law, TheoremReport, _plain

EXIT = {PASS: 0, VACUOUS: 0, FAIL: 1, BOUND: 3}


@dataclass
class Report:
    command: str
    inputs: list = field(default_factory=list)  # (name, sha256)
    verdict: str = PASS
    result: str = ""
    witnesses: list = field(default_factory=list)  # (name, value)
    laws: list = field(default_factory=list)
    timing: float = 0.0
    fmt: str = "text"

    def check(self, law, ok, witness=None):
        self.laws.append(Law(law, PASS if ok else FAIL, witness))
        if not ok:
            self.verdict = FAIL
        return ok

    def absorb(self, rep: TheoremReport):
        self.laws.extend(rep.laws)
        self.witnesses.extend(rep.witnesses)
        if rep.verdict == FAIL:
            self.verdict = FAIL
        elif rep.verdict == VACUOUS and self.verdict == PASS:
            self.verdict = VACUOUS

    def as_dict(self):
        return {
            "command": self.command,
            "inputs": [{"name": n, "sha256": d} for n, d in self.inputs],
            "verdict": self.verdict,
            "result": self.result,
            "witnesses": [[n, _plain(v)] for n, v in self.witnesses],
            "laws": [law.as_dict() for law in self.laws],
        }

    def render(self):
        if self.fmt == "json":
            body = json.dumps(self.as_dict(), indent=2, ensure_ascii=False)
            return body[:-2] + f',\n  "timing": {self.timing:.3f}\n}}'
        lines = [f"command: {self.command}"]
        lines += [f"input: {n} sha256:{d}" for n, d in self.inputs]
        lines += [f"verdict: {self.verdict}", f"result: {self.result}"]
        lines += [f"witness: {n} = {json.dumps(_plain(v), ensure_ascii=False)}"
                  for n, v in self.witnesses]
        for law in self.laws:
            w = "" if law.witness is None else " " + json.dumps(_plain(law.witness),
                                                                ensure_ascii=False)
            lines.append(f"law: {law.law} [{law.status}]{w}")
        lines.append(f"timing: {self.timing:.3f}s")
        return "\n".join(lines)


# -- references ------------------------------------------------------------------

class Loader:
    def __init__(self):
        self.registry = {}
        self.files = {}

    def _file(self, path):
        if path not in self.files:
            self.files[path] = load_structure_file(path, self.registry)
        return self.files[path]

    def load(self, ref):
        """Resolve ``ref`` to (name, kind, value)."""
        if ref.startswith("builtin:"):
            name = ref[len("builtin:"):]
            value = catalog.get(name)
            return name, catalog.kind(name), value
        if os.path.isfile(ref):
            entries = self._file(ref)
            if not entries:
                raise UnknownReference(f"{ref} defines no structures")
            last = entries[-1]
            return last.name, last.kind, last.value
        path, sep, name = ref.rpartition(":")
        if sep and os.path.isfile(path):
            for e in self._file(path):
                if e.name == name:
                    return e.name, e.kind, e.value
            raise UnknownReference(f"{path} defines no structure named {name!r}")
        if ref in self.registry:
            kind, value = self.registry[ref]
            return ref, kind, value
        if ref in catalog.ENTRIES:
            return ref, catalog.kind(ref), catalog.get(ref)
        raise UnknownReference(f"no structure or file named {ref!r}")


def _expect(ref, kind, value, *wanted):
    if kind not in wanted:
        raise UnknownReference(f"{ref} is a {kind}; this command needs a {' or '.join(wanted)}")


def _as_quantale(ref, kind, value):
    _expect(ref, kind, value, "quantale", "operator-set")
    return value.quantale() if kind == "operator-set" else value


def _as_module(ref, kind, value):
    """Modules as given; a lattice becomes a module over the truth values."""
    _expect(ref, kind, value, "module", "lattice")
    return qm.truth_value_module(value) if kind == "lattice" else value


def _as_operators(ref, kind, value):
    """Operator sets as given; a module stands for its full End_Q."""
    _expect(ref, kind, value, "operator-set", "module", "lattice")
    if kind == "operator-set":
        return value
    return pr.full_operator_quantale(_as_module(ref, kind, value))


def _as_lattice(ref, kind, value):
    _expect(ref, kind, value, "lattice", "module", "quantale")
    if kind == "lattice":
        return value
    return value.carrier if kind == "module" else value.lattice


def _labels_of(sets, labels):
    return [sorted((labels[x] for x in s), key=str) for s in sets]


# -- commands ----------------------------------------------------------------------

def cmd_check(rep, args, items):
    for name, kind, value in items:
        rep.check(f"{kind} {name} validates", True)
        if isinstance(value, qt.Quantale):
            rep.witnesses.append(("commutative", qt.is_commutative(value)))
            if args.oracle:
                L = value.lattice
                rows_ok = all(oracles.preserves_all_subset_joins(value.product[a], L, L)
                              and oracles.preserves_all_subset_joins(value.product[:, a], L, L)
                              for a in value.elements)
                rep.check("oracle: product preserves all subset joins", rows_ok)
        if isinstance(value, qm.QModule) and args.oracle:
            N = value.carrier
            rep.check("oracle: action preserves all subset joins",
                      all(oracles.preserves_all_subset_joins(value.action[a], N, N)
                          for a in value.quantale.elements))
        if isinstance(value, FiniteLattice):
            frame, cert = is_atomic_frame(value)
            rep.witnesses.append(("atomic-frame", frame if frame else cert))
    rep.result = "valid " + ", ".join(f"{k} {n} ({len(v)} elements)" for n, k, v in items)


def cmd_end(rep, args, items):
    (ref, kind, value), = items
    L = _as_lattice(ref, kind, value)
    maps = enumerate_join_endomorphisms(L)
    rep.result = f"|End({L.name or ref})| = {len(maps)}"
    rep.witnesses.append(("count", len(maps)))
    if len(maps) <= 64:
        rep.witnesses.append(("maps", [[L.labels[v] for v in f.values] for f in maps]))
    if args.oracle:
        brute = oracles.join_maps_by_filter(L, L)
        rep.check("enumerator matches full-filter oracle",
                  sorted(f.values for f in maps) == sorted(brute), len(brute))


def cmd_endq(rep, args, items):
    (ref, kind, value), = items
    M = _as_module(ref, kind, value)
    E = qm.end_q_quantale(M)
    rep.result = f"|End_Q({M.name})| = {len(E)}"
    rep.witnesses.append(("count", len(E)))
    rep.check("End_Q(M) validates as a quantale", True)
    if args.oracle:
        brute = [f for f in oracles.join_maps_by_filter(M.carrier, M.carrier)
                 if qm.is_equivariant(M, f)]
        rep.check("matches filtered oracle", len(brute) == len(E), len(brute))


def cmd_submodules(rep, args, items):
    (ref, kind, value), = items
    if kind == "rmodule":
        sets = rings.rsubmodule_sets(value)
        labels = value.labels
        if args.oracle:
            rep.check("closure matches subset oracle", sets == oracles.rsubmodules_by_filter(value))
    else:
        M = _as_module(ref, kind, value)
        sets = qm.submodule_sets(M)
        labels = M.labels
        if args.oracle:
            rep.check("closure matches subset oracle", sets == oracles.submodules_by_filter(M))
    rep.result = f"{len(sets)} submodules"
    rep.witnesses.append(("submodules", _labels_of(sets, labels)))


def cmd_leftideals(rep, args, items):
    (ref, kind, value), = items
    Q = _as_quantale(ref, kind, value)
    ideals = qt.left_ideals(Q)
    sets = [i.members for i in ideals]
    rep.result = f"{len(sets)} left ideals"
    rep.witnesses.append(("left-ideals", _labels_of(sets, Q.labels)))
    rep.witnesses.append(("minimal", [i.labelled() for i in qt.minimal_left_ideals(Q)]))
    if args.oracle:
        rep.check("closure matches subset oracle", sets == oracles.left_ideals_by_filter(Q))


def _query(rep, flag, yes, no, witness_name=None, witness=None):
    rep.result = yes if flag else no
    if witness is not None:
        rep.witnesses.append((witness_name, witness))


def cmd_prime(rep, args, items):
    (ref, kind, value), = items
    Q = _as_quantale(ref, kind, value)
    ok, pair = qt.is_prime(Q)
    _query(rep, ok, "prime", "not prime", "zero-product-pair",
           None if ok else [Q.labels[x] for x in pair])


def cmd_division(rep, args, items):
    (ref, kind, value), = items
    Q = _as_quantale(ref, kind, value)
    inv = qt.inverse_table(Q)
    _query(rep, inv is not None, "division", "not division", "inverse-table",
           inv and {Q.labels[a]: Q.labels[b] for a, b in sorted(inv.items())})
    if inv is None:
        bad = next(a for a in Q.elements if a != Q.bottom
                   and not any(Q.mul(a, b) == Q.unit == Q.mul(b, a) for b in Q.elements))
        rep.witnesses.append(("no-inverse", Q.labels[bad]))


def cmd_field(rep, args, items):
    (ref, kind, value), = items
    Q = _as_quantale(ref, kind, value)
    comm = qt.is_commutative(Q)
    inv = qt.inverse_table(Q)
    _query(rep, qt.is_field(Q), "field", "not field")
    rep.witnesses.append(("commutative", comm))
    if inv is not None:
        rep.witnesses.append(("inverse-table",
                              {Q.labels[a]: Q.labels[b] for a, b in sorted(inv.items())}))


def _simple_summary(Q, bound, oracle, rep):
    found = pr.enumerate_simple_modules(Q, bound)
    rep.witnesses.append(("simple-modules",
                          [{"carrier": list(w.module.labels), "kind": w.kind} for w in found]))
    if oracle:
        if len(Q) > 4:
            rep.laws.append(Law("oracle: brute-force simple modules", VACUOUS, "|Q| > 4"))
        else:
            brute = oracles.simple_modules_by_brute_force(Q, len(Q))
            same = (len(brute) == len(found) and all(
                any(qm.are_isomorphic_modules(b, w.module) for w in found) for b in brute))
            rep.check("oracle: closure route matches brute force", same, len(brute))
    return found


def cmd_primitive(rep, args, items):
    (ref, kind, value), = items
    Q = _as_quantale(ref, kind, value)
    _simple_summary(Q, args.bound or pr.CLOSURE_BOUND, args.oracle, rep)
    ok, w = pr.is_primitive(Q, args.bound or pr.CLOSURE_BOUND)
    _query(rep, ok, "primitive", "not primitive", "witness-module", w and list(w.module.labels))


def cmd_strongly_primitive(rep, args, items):
    (ref, kind, value), = items
    Q = _as_quantale(ref, kind, value)
    _simple_summary(Q, args.bound or pr.CLOSURE_BOUND, args.oracle, rep)
    ok, w = pr.is_strongly_primitive(Q, args.bound or pr.CLOSURE_BOUND)
    _query(rep, ok, "strongly primitive", "not strongly primitive", "witness-module",
           w and list(w.module.labels))


def cmd_weakbasis(rep, args, items):
    (ref, kind, value), = items
    M = _as_module(ref, kind, value)
    B = pr.find_weak_basis(M, args.bound or pr.BASIS_BOUND)
    _query(rep, B is not None, "weak basis found", "no weak basis", "basis",
           B and list(B.labelled()))
    if B is not None:
        rep.check("every element has exactly one representation",
                  bool((pr.representation_counts(M, B.members) == 1).all()))


def cmd_dense(rep, args, items):
    (ref, kind, value), = items
    D = _as_operators(ref, kind, value)
    ok, wit = pr.is_dense(D, args.bound or pr.BASIS_BOUND)
    labels = D.module.labels
    _query(rep, ok, "dense", "not dense", "unreachable",
           wit and {"set": [labels[x] for x in wit[0]], "targets": [labels[x] for x in wit[1]]})


def cmd_weaklydense(rep, args, items):
    (ref, kind, value), = items
    D = _as_operators(ref, kind, value)
    ok, wit = pr.is_weakly_dense(D)
    labels = D.module.labels
    _query(rep, ok, "weakly dense", "not weakly dense", "unreachable",
           wit and {"from": labels[wit[0]], "target": labels[wit[1]]})


def cmd_density1(rep, args, items):
    (ref, kind, value), = items
    rep.absorb(pr.density_theorem_part1(_as_operators(ref, kind, value)))
    rep.result = "evaluation module is strongly faithful and simple"


def cmd_density2(rep, args, items):
    (ref, kind, value), = items
    rep.absorb(pr.density_theorem_part2(_as_quantale(ref, kind, value),
                                        bound=args.bound or pr.CLOSURE_BOUND))
    rep.result = "Q is isomorphic to a weakly dense operator quantale"


def cmd_idl(rep, args, items):
    (ref, kind, value), = items
    _expect(ref, kind, value, "ring")
    Q = rings.idl_quantale(value)
    rep.check("Idl(R) validates as a quantale", True)
    rep.result = f"|Idl({value.name})| = {len(Q)}"
    rep.witnesses.append(("ideals", list(Q.labels)))
    rep.witnesses.append(("product", [[Q.labels[v] for v in row] for row in Q.product]))
    if args.oracle:
        rep.check("ideal closure matches subset oracle",
                  rings.ideal_sets(value) == oracles.ideals_by_filter(value))


def cmd_subq(rep, args, items):
    (ref, kind, value), = items
    _expect(ref, kind, value, "rmodule")
    S = rings.sub_module_over_idl(value)
    rep.check("Sub(M) validates as an Idl(R)-module", True)
    faithful, simple = rings.is_faithful_rmodule(value), rings.is_simple_rmodule(value)
    rep.check("faithful transfers", not faithful or qm.is_faithful(S)[0])
    rep.check("simple transfers", not simple or qm.is_simple(S)[0])
    rep.result = f"Sub({value.name}) has {len(S)} elements"
    rep.witnesses.append(("Sub(M)", list(S.labels)))
    rep.witnesses.append(("action", [[S.labels[v] for v in row] for row in S.action]))


def cmd_corollary(rep, args, items):
    (rref, rkind, R), (mref, mkind, M) = items
    _expect(rref, rkind, R, "ring")
    _expect(mref, mkind, M, "rmodule")
    if structure_key(M.ring) != structure_key(R):
        raise UnknownReference(f"{mref} is not a module over {rref}")
    rep.absorb(rings.corollary_primitive_ring(R, M, args.bound))
    rep.result = f"Idl({R.name}) is primitive, witnessed by Sub({M.name})"


# -- verify --all --------------------------------------------------------------------

def _run_theorem(rep, theorem, subject, fn):
    """Record one verifier run as a law; returns the TheoremReport or None."""
    name = f"{theorem} @ {subject}"
    try:
        r = fn()
    except HypothesisUnmet as exc:
        rep.laws.append(Law(name, VACUOUS, str(exc)))
        return None
    except TheoremViolation as exc:
        rep.check(name, False, [law.as_dict() for law in exc.report.laws if law.status == FAIL])
        return None
    detail = [law.law for law in r.laws if law.status == VACUOUS] or len(r.laws)
    rep.laws.append(Law(name, r.verdict, detail))
    return r


def _verify_items(rep, args, items):
    bound = args.bound or pr.CLOSURE_BOUND
    basis_bound = args.bound or pr.BASIS_BOUND
    for name, kind, value in items:
        if kind == "quantale":
            Q = value
            _run_theorem(rep, "primitive-implies-prime", name,
                         lambda: pr.verify_primitive_implies_prime(Q, bound))
            _run_theorem(rep, "minimal-left-ideal", name,
                         lambda: pr.verify_minimal_ideal_theorem(Q, bound))
            _run_theorem(rep, "commutative-strongly-primitive-field", name,
                         lambda: pr.verify_comm_strongly_primitive_field(Q, bound))
            if pr.is_strongly_primitive(Q, bound)[0]:
                _run_theorem(rep, "density-part-2", name,
                             lambda: pr.density_theorem_part2(Q, bound=bound))
            if args.oracle and len(Q) <= 4:
                found = pr.enumerate_simple_modules(Q, bound)
                brute = oracles.simple_modules_by_brute_force(Q, len(Q))
                rep.check(f"simple-modules-oracle @ {name}", len(brute) == len(found) and all(
                    any(qm.are_isomorphic_modules(b, w.module) for w in found) for b in brute),
                    len(brute))
        elif kind == "operator-set":
            D = value
            if pr.is_weakly_dense(D)[0]:
                _run_theorem(rep, "density-part-1", name, lambda: pr.density_theorem_part1(D))
            _run_theorem(rep, "dense-implies-weakly-dense", name,
                         lambda: pr.verify_dense_implies_weakly_dense(D, basis_bound))
        elif kind == "module":
            M = value
            B = pr.find_weak_basis(M, basis_bound)
            rep.laws.append(Law(f"weak-basis @ {name}", PASS, list(B.labelled()) if B else "none"))
            if name == "p3":
                _run_theorem(rep, "independent-not-completable", name,
                             lambda: pr.counterexample_independent_not_completable(M))
        elif kind == "rmodule":
            M = value
            _run_theorem(rep, "primitive-ring-corollary", name,
                         lambda: rings.corollary_primitive_ring(M.ring, M, args.bound))


def cmd_verify(rep, args, items):
    _verify_items(rep, args, items)
    failed = sum(law.status == FAIL for law in rep.laws)
    ran = sum(law.status == PASS for law in rep.laws)
    vac = sum(law.status == VACUOUS for law in rep.laws)
    rep.result = f"{ran} passed, {vac} vacuous, {failed} failed"
    rep.verdict = FAIL if failed else PASS


COMMANDS = {
    "check": (cmd_check, "validate structures against their defining laws", "+"),
    "end": (cmd_end, "enumerate the join-endomorphisms of a lattice", 1),
    "endq": (cmd_endq, "build End_Q(M) for a module", 1),
    "submodules": (cmd_submodules, "list the submodules of a module", 1),
    "leftideals": (cmd_leftideals, "list the left ideals of a quantale", 1),
    "prime": (cmd_prime, "is the quantale prime?", 1),
    "division": (cmd_division, "is the quantale a division quantale?", 1),
    "field": (cmd_field, "is the quantale a field?", 1),
    "primitive": (cmd_primitive, "does the quantale have a faithful simple module?", 1),
    "strongly-primitive": (cmd_strongly_primitive,
                           "does the quantale have a strongly faithful simple module?", 1),
    "weakbasis": (cmd_weakbasis, "find a weak basis of a module", 1),
    "dense": (cmd_dense, "is the operator set dense?", 1),
    "weaklydense": (cmd_weaklydense, "is the operator set weakly dense?", 1),
    "density1": (cmd_density1, "weakly dense operators act strongly faithfully and simply", 1),
    "density2": (cmd_density2, "embed a strongly primitive quantale as dense operators", 1),
    "idl": (cmd_idl, "build the ideal quantale of a ring", 1),
    "subq": (cmd_subq, "build Sub(M) over Idl(R) for a ring module", 1),
    "corollary": (cmd_corollary, "faithful simple R-module makes Idl(R) primitive", 2),
    "verify": (cmd_verify, "run every theorem verifier over the given structures", "*"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle", action="store_true", default=argparse.SUPPRESS,
                        help="cross-check against brute-force enumeration")
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS,
                        help="size bound for exhaustive searches")
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="qlab", description=__doc__.splitlines()[0])
    parser.add_argument("--oracle", action="store_true")
    parser.add_argument("--bound", type=int, default=None)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text, nargs) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "verify":
            p.add_argument("--all", action="store_true",
                           help="every catalog structure (same as builtin:*)")
        p.add_argument("refs", nargs=nargs, metavar="REF")
    return parser


def _expand(loader, refs, verify_all):
    items = []
    if verify_all:
        refs = ["builtin:*"] + [r for r in refs if r != "builtin:*"]
    for ref in refs:
        if ref == "builtin:*":
            items += [(n, catalog.kind(n), catalog.get(n)) for n in catalog.names()]
        elif os.path.isfile(ref):
            items += [(e.name, e.kind, e.value) for e in loader._file(ref)]
        else:
            items.append(loader.load(ref))
    return items


def run_command(argv):
    """Parse ``argv``, run the command and return ``(report, exit_code)``.

    On usage and parse errors the report is None and the message has been
    written to stderr.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, int(exc.code or 0)
    fn = COMMANDS[args.command][0]
    rep = Report(args.command, fmt=args.format)
    start = time.perf_counter()
    loader = Loader()
    try:
        if args.command == "verify":
            if not args.all and not args.refs:
                parser.error("verify needs --all or at least one REF")
            items = _expand(loader, args.refs, args.all)
        else:
            items = [loader.load(r) for r in args.refs]
        rep.inputs = [(n, digest(v, n)) for n, _, v in items]
        fn(rep, args, items)
    except SystemExit as exc:
        return None, int(exc.code or 0)
    except (StructureSyntaxError, UnknownReference) as exc:
        print(f"qlab: {exc}", file=sys.stderr)
        return None, 2
    except ValidationError as exc:
        rep.check(exc.law, False, list(exc.witness))
        rep.result = str(exc)
    except SearchBoundExceeded as exc:
        rep.verdict = BOUND
        rep.result = str(exc)
    except NoBasis as exc:
        rep.verdict = VACUOUS
        rep.result = str(exc)
    except HypothesisUnmet as exc:
        rep.verdict = VACUOUS
        rep.result = f"hypothesis unmet: {exc}"
    except TheoremViolation as exc:
        if exc.report is not None:
            rep.absorb(exc.report)
        rep.verdict = FAIL
        rep.result = str(exc)
    except QlabError as exc:
        rep.verdict = FAIL
        rep.result = str(exc)
    rep.timing = time.perf_counter() - start
    return rep, EXIT[rep.verdict]


def main(argv=None):
    rep, code = run_command(sys.argv[1:] if argv is None else argv)
    if rep is not None:
        print(rep.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
