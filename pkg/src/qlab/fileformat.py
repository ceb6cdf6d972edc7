"""Line-oriented structure files.

A file is a sequence of sections, each opened by a ``<kind> <name>`` header
at column 1.  Section bodies are ``key: value`` lines at column 1; a key with
an empty value may be followed by indented table rows.  ``#`` starts a
comment.  Example::

    # the truth-value quantale
    quantale two
    lattice: inline
    elements: bot top
    covers: bot<top
    unit: top
    product:
      bot bot
      bot top

Kinds and their keys:

``lattice``       ``elements``, and ``covers`` (``a<b b<c``) or ``leq`` (``a<=b``)
``quantale``      ``lattice`` (a name, or ``inline`` plus lattice keys), ``unit``, ``product``
``module``        ``quantale``, ``carrier`` (name or ``inline``), ``action``
                  (one row per quantale element, one column per module element)
``ring``          ``elements``, ``zero``, ``one``, ``add``, ``mul``
``rmodule``       ``ring``, ``elements``, ``zero``, ``add``, ``smul``
``operator-set``  ``module``, ``maps`` (rows ``name: v1 v2 ...``)

Tables list rows and columns in ``elements`` order.  References name an
earlier section or a catalog entry as ``builtin:<name>``.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from . import catalog
from .errors import StructureSyntaxError, UnknownReference, ValidationError
from .lattice import FiniteLattice, build_lattice
from .qmodule import QModule, check_module
from .quantale import Quantale, check_quantale
from .rings import FiniteRing, FiniteRModule, check_ring, check_rmodule

KINDS = ("lattice", "quantale", "module", "ring", "rmodule", "operator-set")

_LATTICE_KEYS = {"elements", "covers", "leq"}
_KEYS = {
    "lattice": (_LATTICE_KEYS, {"elements"}),
    "quantale": (_LATTICE_KEYS | {"lattice", "unit", "product"}, {"lattice", "unit", "product"}),
    "module": (_LATTICE_KEYS | {"quantale", "carrier", "action"},
               {"quantale", "carrier", "action"}),
    "ring": ({"elements", "zero", "one", "add", "mul"}, {"elements", "zero", "one", "add", "mul"}),
    "rmodule": ({"ring", "elements", "zero", "add", "smul"},
                {"ring", "elements", "zero", "add", "smul"}),
    "operator-set": ({"module", "maps"}, {"module", "maps"}),
}
_TYPES = {
    "lattice": FiniteLattice,
    "quantale": Quantale,
    "module": QModule,
    "ring": FiniteRing,
    "rmodule": FiniteRModule,
}
_KEY_LINE = re.compile(r"([A-Za-z][A-Za-z-]*):(.*)$")
_BAD_LABEL = re.compile(r"[\s<#:]")


@dataclass(frozen=True)
class StructureFile:
    """One parsed section: its kind, name, validated structure and header line."""

    kind: str
    name: str
    value: object
    line: int


@dataclass
class _Entry:
    line: int
    col: int
    tokens: list  # (col, token)
    rows: list  # (line, [(col, token)])


@dataclass
class _Section:
    kind: str
    name: str
    line: int
    keys: dict


def _tokens(text, offset=0):
    return [(m.start() + offset + 1, m.group()) for m in re.finditer(r"\S+", text)]


def _split_sections(text):
    sections, current, table = [], None, None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0] in " \t":
            if table is None:
                raise StructureSyntaxError("indented row outside a table", lineno,
                                           len(line) - len(line.lstrip()) + 1)
            table.rows.append((lineno, _tokens(line)))
            continue
        table = None
        m = _KEY_LINE.match(line)
        if m is None:
            toks = _tokens(line)
            if toks[0][1] not in KINDS:
                raise StructureSyntaxError(f"expected a section header or 'key:', got {toks[0][1]!r}",
                                           lineno, 1)
            if len(toks) != 2:
                raise StructureSyntaxError("section header must be '<kind> <name>'", lineno,
                                           toks[-1][0])
            current = _Section(toks[0][1], toks[1][1], lineno, {})
            sections.append(current)
            continue
        if current is None:
            raise StructureSyntaxError("key outside any section", lineno, 1)
        key = m.group(1)
        allowed, _ = _KEYS[current.kind]
        if key not in allowed:
            raise StructureSyntaxError(f"unknown key {key!r} in {current.kind} section", lineno, 1)
        if key in current.keys:
            raise StructureSyntaxError(f"duplicate key {key!r}", lineno, 1)
        entry = _Entry(lineno, 1, _tokens(m.group(2), m.start(2)), [])
        current.keys[key] = entry
        if not entry.tokens:
            table = entry
    return sections


class _Builder:
    def __init__(self, registry):
        self.registry = registry

    # -- helpers -------------------------------------------------------------

    def need(self, sec, key):
        if key not in sec.keys:
            raise StructureSyntaxError(f"{sec.kind} {sec.name}: missing key {key!r}", sec.line, 1)
        return sec.keys[key]

    def word(self, sec, key):
        e = self.need(sec, key)
        if len(e.tokens) != 1:
            raise StructureSyntaxError(f"{key!r} takes exactly one value", e.line, 1)
        return e.tokens[0]

    def resolve(self, sec, key, kind):
        col, ref = self.word(sec, key)
        line = sec.keys[key].line
        if ref.startswith("builtin:"):
            name = ref[len("builtin:"):]
            value = catalog.get(name)
            got = catalog.kind(name)
        elif ref in self.registry:
            got, value = self.registry[ref]
        else:
            raise UnknownReference(f"line {line}, col {col}: undeclared {kind} {ref!r}")
        if got != kind:
            raise StructureSyntaxError(f"{ref!r} is a {got}, expected a {kind}", line, col)
        return value

    def lookup(self, labels, line, col, tok):
        try:
            return labels.index(tok)
        except ValueError:
            raise StructureSyntaxError(f"undeclared element {tok!r}", line, col) from None

    def table(self, sec, key, rows, labels, ncols=None):
        e = self.need(sec, key)
        if e.tokens:
            raise StructureSyntaxError(f"{key!r} expects indented table rows", e.line, e.tokens[0][0])
        ncols = len(labels) if ncols is None else ncols
        if len(e.rows) != rows:
            raise StructureSyntaxError(f"{key!r} needs {rows} rows, found {len(e.rows)}", e.line, 1)
        out = []
        for line, toks in e.rows:
            if len(toks) != ncols:
                raise StructureSyntaxError(f"row needs {ncols} entries, found {len(toks)}", line,
                                           toks[0][0])
            out.append([self.lookup(labels, line, c, t) for c, t in toks])
        return out

    def labels(self, sec):
        e = self.need(sec, "elements")
        seen = set()
        for col, tok in e.tokens:
            if tok in seen:
                raise StructureSyntaxError(f"duplicate element {tok!r}", e.line, col)
            seen.add(tok)
        return [t for _, t in e.tokens]

    def inline_lattice(self, sec):
        labels = self.labels(sec)
        if ("covers" in sec.keys) == ("leq" in sec.keys):
            raise StructureSyntaxError("give exactly one of 'covers' or 'leq'", sec.line, 1)
        mode = "covers" if "covers" in sec.keys else "leq"
        e = sec.keys[mode]
        sep = "<" if mode == "covers" else "<="
        pairs = []
        for col, tok in e.tokens:
            parts = tok.split(sep)
            if len(parts) < 2 or (mode == "leq" and len(parts) != 2) or not all(parts):
                raise StructureSyntaxError(f"malformed relation {tok!r}", e.line, col)
            for p in parts:
                self.lookup(labels, e.line, col, p)
            pairs += list(zip(parts, parts[1:]))
        return build_lattice(labels, pairs, mode, sec.name)

    def no_inline(self, sec, what):
        for key in _LATTICE_KEYS:
            if key in sec.keys:
                raise StructureSyntaxError(f"{key!r} is only allowed with '{what}: inline'",
                                           sec.keys[key].line, 1)

    def lattice_ref(self, sec, key):
        if self.word(sec, key)[1] == "inline":
            return self.inline_lattice(sec)
        self.no_inline(sec, key)
        return self.resolve(sec, key, "lattice")

    # -- kinds ---------------------------------------------------------------

    def build(self, sec):
        _, required = _KEYS[sec.kind]
        for key in sorted(required):
            self.need(sec, key)
        return getattr(self, "build_" + sec.kind.replace("-", "_"))(sec)

    def build_lattice(self, sec):
        return self.inline_lattice(sec)

    def build_quantale(self, sec):
        L = self.lattice_ref(sec, "lattice")
        labels = list(L.labels)
        col, unit = self.word(sec, "unit")
        u = self.lookup(labels, sec.keys["unit"].line, col, unit)
        P = self.table(sec, "product", len(labels), labels)
        return check_quantale(L, P, u, sec.name)

    def build_module(self, sec):
        Q = self.resolve(sec, "quantale", "quantale")
        N = self.lattice_ref(sec, "carrier")
        A = self.table(sec, "action", len(Q), list(N.labels))
        return check_module(Q, N, A, sec.name)

    def build_ring(self, sec):
        labels = self.labels(sec)
        z = self.lookup(labels, sec.keys["zero"].line, *self.word(sec, "zero"))
        o = self.lookup(labels, sec.keys["one"].line, *self.word(sec, "one"))
        add = self.table(sec, "add", len(labels), labels)
        mul = self.table(sec, "mul", len(labels), labels)
        return check_ring(labels, add, mul, z, o, sec.name)

    def build_rmodule(self, sec):
        R = self.resolve(sec, "ring", "ring")
        labels = self.labels(sec)
        z = self.lookup(labels, sec.keys["zero"].line, *self.word(sec, "zero"))
        add = self.table(sec, "add", len(labels), labels)
        smul = self.table(sec, "smul", len(R), labels)
        return check_rmodule(R, labels, add, smul, z, sec.name)

    def build_operator_set(self, sec):
        from .primitivity import OperatorQuantale

        M = self.resolve(sec, "module", "module")
        e = self.need(sec, "maps")
        if e.tokens:
            raise StructureSyntaxError("'maps' expects indented rows", e.line, e.tokens[0][0])
        labels = list(M.carrier.labels)
        maps, names = [], set()
        for line, toks in e.rows:
            col, head = toks[0]
            if not head.endswith(":") or len(head) < 2:
                raise StructureSyntaxError("map rows read 'name: v1 v2 ...'", line, col)
            if head in names:
                raise StructureSyntaxError(f"duplicate map name {head[:-1]!r}", line, col)
            names.add(head)
            if len(toks) - 1 != len(labels):
                raise StructureSyntaxError(f"map needs {len(labels)} values", line, col)
            maps.append([self.lookup(labels, line, c, t) for c, t in toks[1:]])
        return OperatorQuantale(M, maps, sec.name)


def _identify(value):
    from .primitivity import OperatorQuantale

    if isinstance(value, OperatorQuantale):
        return "operator-set"
    for kind, cls in _TYPES.items():
        if isinstance(value, cls):
            return kind
    raise TypeError(f"cannot store {type(value).__name__} in a structure file")


def parse_structure_file(text, registry=None):
    """Parse and validate every section of ``text``.

    ``registry`` (name -> (kind, value)) supplies and collects named
    structures across files.  Validation errors keep their class and witness,
    with the section named in the message.
    """
    registry = {} if registry is None else registry
    builder = _Builder(registry)
    out = []
    for sec in _split_sections(text):
        if sec.name in registry or sec.name.startswith("builtin:"):
            raise StructureSyntaxError(f"structure {sec.name!r} is already defined", sec.line, 1)
        try:
            value = builder.build(sec)
        except ValidationError as err:
            raise type(err)(f"{sec.kind} {sec.name} (line {sec.line}): {err}", err.witness) from err
        registry[sec.name] = (sec.kind, value)
        out.append(StructureFile(sec.kind, sec.name, value, sec.line))
    return out


def load_structure_file(path, registry=None):
    with open(path, encoding="utf-8") as fh:
        return parse_structure_file(fh.read(), registry)


# -- emitting -------------------------------------------------------------------

def _check_labels(labels):
    for lab in labels:
        if not lab or _BAD_LABEL.search(lab) or lab == "inline":
            raise ValueError(f"label {lab!r} cannot be written to a structure file")
    return labels


def _safe_name(name, fallback):
    name = re.sub(r"[\s<#:]", "_", name or "") or fallback
    return name


def _rows(labels, table):
    return ["  " + " ".join(labels[int(v)] for v in row) for row in table]


def _lattice_lines(L):
    labels = _check_labels(L.labels)
    covers = " ".join(f"{labels[a]}<{labels[b]}" for a, b in L.covers())
    return [f"elements: {' '.join(labels)}", f"covers: {covers}".rstrip()]


class _Emitter:
    def __init__(self):
        self.sections = []
        self.names = {}  # name -> structural key

    def claim(self, value, name, fallback):
        name = _safe_name(name, fallback)
        key = structure_key(value)
        base, k = name, 2
        while name in self.names and self.names[name] != key:
            name, k = f"{base}_{k}", k + 1
        if name in self.names:
            return name, False
        self.names[name] = key
        return name, True

    def emit(self, value, name=None):
        kind = _identify(value)
        default = getattr(value, "name", "") or kind
        name, fresh = self.claim(value, name or default, kind)
        if not fresh:
            return name
        lines = getattr(self, "emit_" + kind.replace("-", "_"))(value)
        self.sections.append("\n".join([f"{kind} {name}"] + lines))
        return name

    def emit_lattice(self, L):
        return _lattice_lines(L)

    def emit_quantale(self, Q):
        return (["lattice: inline"] + _lattice_lines(Q.lattice)
                + [f"unit: {Q.labels[Q.unit]}", "product:"] + _rows(Q.labels, Q.product))

    def emit_module(self, M):
        q = self.emit(M.quantale)
        return ([f"quantale: {q}", "carrier: inline"] + _lattice_lines(M.carrier)
                + ["action:"] + _rows(M.carrier.labels, M.action))

    def emit_ring(self, R):
        labels = _check_labels(R.labels)
        return ([f"elements: {' '.join(labels)}", f"zero: {labels[R.zero]}",
                 f"one: {labels[R.one]}", "add:"] + _rows(labels, R.add)
                + ["mul:"] + _rows(labels, R.mul))

    def emit_rmodule(self, M):
        r = self.emit(M.ring)
        labels = _check_labels(M.labels)
        return ([f"ring: {r}", f"elements: {' '.join(labels)}", f"zero: {labels[M.zero]}",
                 "add:"] + _rows(labels, M.add) + ["smul:"] + _rows(labels, M.smul))

    def emit_operator_set(self, D):
        m = self.emit(D.module)
        labels = D.module.carrier.labels
        width = len(str(len(D.maps) - 1))
        return [f"module: {m}", "maps:"] + [
            f"  f{i:0{width}d}: " + " ".join(labels[v] for v in f) for i, f in enumerate(D.maps)]


def emit_structure(value, name=None):
    """Self-contained text for ``value``: dependencies first, ``value`` last."""
    em = _Emitter()
    em.emit(value, name)
    return "\n\n".join(em.sections) + "\n"


def structure_key(value):
    """A hashable key equal for structurally identical values (names ignored)."""
    from .primitivity import OperatorQuantale

    if isinstance(value, (FiniteLattice, Quantale, QModule)):
        return value._key
    if isinstance(value, FiniteRing):
        return ("ring", value.labels, value.add.tobytes(), value.mul.tobytes(), value.zero,
                value.one)
    if isinstance(value, FiniteRModule):
        return ("rmodule", structure_key(value.ring), value.labels, value.add.tobytes(),
                value.smul.tobytes(), value.zero)
    if isinstance(value, OperatorQuantale):
        return ("operator-set", value.module._key, value.maps)
    raise TypeError(f"no structural key for {type(value).__name__}")


def digest(value, name=None):
    """sha256 of the emitted text, identifying an input in reports."""
    return hashlib.sha256(emit_structure(value, name).encode()).hexdigest()
