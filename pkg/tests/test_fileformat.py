from pathlib import Path

import pytest

from qlab import catalog
from qlab.errors import AssocFail, NotALattice, StructureSyntaxError, UnknownReference
from qlab.fileformat import (digest, emit_structure, load_structure_file, parse_structure_file,
                             structure_key)
from qlab.lattice import build_lattice

STRUCTURES = Path(__file__).resolve().parent.parent / "structures"

TWO = """\
# truth values
quantale two
lattice: inline
elements: bot top
covers: bot<top
unit: top
product:
  bot bot
  bot top
"""


def test_two_definition(two):
    (entry,) = parse_structure_file(TWO)
    assert (entry.kind, entry.name, entry.line) == ("quantale", "two", 2)
    assert entry.value == two


def test_shipped_files_load(two, idl_z4):
    (entry,) = load_structure_file(STRUCTURES / "two.q")
    assert entry.value == two
    entries = load_structure_file(STRUCTURES / "idl_z4.q")
    assert [e.kind for e in entries] == ["lattice", "quantale", "module"]
    assert entries[1].value == idl_z4


def test_undeclared_lattice():
    with pytest.raises(UnknownReference):
        parse_structure_file("quantale q\nlattice: nowhere\nunit: a\nproduct:\n  a\n")


def test_non_associative_table_is_a_validation_error():
    text = """quantale bad
lattice: inline
elements: 0 a 1
covers: 0<a a<1
unit: 1
product:
  0 0 0
  0 1 0
  0 0 1
"""
    with pytest.raises(AssocFail) as exc:
        parse_structure_file(text)
    assert exc.value.witness == ("a", "a", "1")
    assert "quantale bad" in str(exc.value)


def test_lattice_errors_keep_their_class():
    with pytest.raises(NotALattice):
        parse_structure_file("lattice v\nelements: b x y\ncovers: b<x b<y\n")


@pytest.mark.parametrize("text,line,col", [
    ("lattic x\n", 1, 1),
    ("elements: a\n", 1, 1),
    ("lattice x\nelements: a b\ncovers: a<c\n", 3, 9),
    ("lattice x\nelements: a a\ncovers:\n", 2, 13),
    ("lattice x\nelements: a b\ncovers: a<b\nunit: a\n", 4, 1),
    ("lattice x\nelements: a\n  a\n", 3, 3),
    ("lattice x\nelements: a\ncovers:\nquantale q\nlattice: x\nunit: a\nproduct:\n  a a\n", 8, 3),
    ("lattice x y\n", 1, 11),
    ("lattice x\nelements: a\ncovers:\nlattice x\nelements: a\ncovers:\n", 4, 1),
])
def test_syntax_errors_carry_positions(text, line, col):
    with pytest.raises(StructureSyntaxError) as exc:
        parse_structure_file(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_wrong_reference_kind():
    with pytest.raises(StructureSyntaxError):
        parse_structure_file("module m\nquantale: builtin:chain3\ncarrier: builtin:chain2\n"
                             "action:\n  bot bot\n")


def test_builtin_references(two):
    text = """module m
quantale: builtin:two
carrier: builtin:chain2
action:
  bot bot
  bot top
"""
    (entry,) = parse_structure_file(text)
    assert entry.value.quantale == two and len(entry.value) == 2


def test_registry_spans_files():
    registry = {}
    parse_structure_file(TWO, registry)
    text = "module m\nquantale: two\ncarrier: inline\nelements: 0 1\ncovers: 0<1\n" \
           "action:\n  0 0\n  0 1\n"
    (entry,) = parse_structure_file(text, registry)
    assert set(registry) == {"two", "m"}
    assert entry.value.quantale is registry["two"][1]


def test_leq_form():
    (entry,) = parse_structure_file("lattice c\nelements: a b c\nleq: a<=b b<=c a<=c\n")
    assert entry.value == build_lattice(["a", "b", "c"], [("a", "b"), ("b", "c")], name="c")


def test_operator_set_rows():
    text = """operator-set scal
module: builtin:p1
maps:
  zero: {} {}
  id: {} {1}
"""
    (entry,) = parse_structure_file(text)
    assert entry.value.maps == ((0, 0), (0, 1))


@pytest.mark.parametrize("name", catalog.names())
def test_round_trip(name):
    value = catalog.get(name)
    text = emit_structure(value, name)
    entries = parse_structure_file(text)
    assert entries[-1].name == name
    assert structure_key(entries[-1].value) == structure_key(value)
    assert emit_structure(entries[-1].value, name) == text


def test_emit_rejects_unwritable_labels():
    L = build_lattice(["a b", "c"], [("a b", "c")])
    with pytest.raises(ValueError):
        emit_structure(L, "bad")


def test_digest_is_stable(two):
    assert digest(two, "two") == digest(parse_structure_file(TWO)[0].value, "two")
    assert digest(two, "two") != digest(two, "other")
