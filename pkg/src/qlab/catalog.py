"""Built-in structures, addressable on the command line as ``builtin:<name>``."""

from __future__ import annotations

from functools import lru_cache

from .errors import UnknownReference
from .lattice import build_lattice, chain, powerset_lattice
from .qmodule import truth_value_module
from .quantale import end_quantale, meet_quantale, truth_values

# name -> (kind, description)
ENTRIES = {
    "two": ("quantale", "truth values {bot, top}, product = meet"),
    "chain2": ("lattice", "2-element chain"),
    "chain3": ("lattice", "3-element chain"),
    "chain4": ("lattice", "4-element chain"),
    "chain5": ("lattice", "5-element chain"),
    "m3": ("lattice", "diamond with three atoms"),
    "n5": ("lattice", "pentagon"),
    "p1": ("module", "P({1}) over the truth values"),
    "p2": ("module", "P({1,2}) over the truth values"),
    "p3": ("module", "P({1,2,3}) over the truth values"),
    "idl_z4": ("quantale", "ideals of Z_4"),
    "idl_z12": ("quantale", "ideals of Z_12"),
    "idl_m2f2": ("quantale", "ideals of M_2(F_2)"),
    "end_chain3": ("quantale", "join-endomorphisms of the 3-chain"),
    "end_p2": ("quantale", "join-endomorphisms of P({1,2})"),
    "meet_chain3": ("quantale", "3-chain with product = meet"),
    "z2": ("ring", "Z_2"),
    "z4": ("ring", "Z_4"),
    "z12": ("ring", "Z_12"),
    "m2f2": ("ring", "2x2 matrices over F_2"),
    "f2sq": ("rmodule", "F_2^2 as column vectors over M_2(F_2)"),
    "z2mod": ("rmodule", "Z_2 over itself"),
    "z4mod": ("rmodule", "Z_4 over itself"),
    "z12mod": ("rmodule", "Z_12 over itself"),
    "endq_chain2": ("operator-set", "End_Q of the 2-chain over the truth values"),
    "endq_chain3": ("operator-set", "End_Q of the 3-chain over the truth values"),
    "endq_m3": ("operator-set", "End_Q of M3 over the truth values"),
    "endq_p2": ("operator-set", "End_Q of P({1,2}) over the truth values"),
    "endq_p3": ("operator-set", "End_Q of P({1,2,3}) over the truth values"),
    "scalars_p3": ("operator-set", "{zero, identity} acting on P({1,2,3})"),
}

LATTICE_NAMES = ("chain2", "chain3", "chain4", "chain5", "m3", "n5")


def _m3():
    return build_lattice(["bot", "a", "b", "c", "top"],
                         [("bot", "a"), ("bot", "b"), ("bot", "c"),
                          ("a", "top"), ("b", "top"), ("c", "top")], name="m3")


def _n5():
    return build_lattice(["bot", "a", "b", "c", "top"],
                         [("bot", "a"), ("a", "b"), ("b", "top"), ("bot", "c"), ("c", "top")],
                         name="n5")


@lru_cache(maxsize=None)
def get(name):
    """Build (once) and return the catalog entry ``name``."""
    from . import primitivity as pr
    from . import rings

    if name not in ENTRIES:
        raise UnknownReference(f"no built-in structure named {name!r}")
    if name == "two":
        return truth_values()
    if name.startswith("chain"):
        return chain(int(name[5:]), name)
    if name == "m3":
        return _m3()
    if name == "n5":
        return _n5()
    if name in ("p1", "p2", "p3"):
        k = int(name[1])
        return truth_value_module(powerset_lattice(range(1, k + 1), name=name), get("two"))
    if name == "idl_z4":
        return rings.idl_quantale(get("z4"), "idl_z4")
    if name == "idl_z12":
        return rings.idl_quantale(get("z12"), "idl_z12")
    if name == "idl_m2f2":
        return rings.idl_quantale(get("m2f2"), "idl_m2f2")
    if name == "end_chain3":
        return _renamed(end_quantale(get("chain3")), name)
    if name == "end_p2":
        return _renamed(end_quantale(get("p2").carrier), name)
    if name == "meet_chain3":
        return meet_quantale(get("chain3"), name)
    if name in ("z2", "z4", "z12"):
        return rings.ring_zn(int(name[1:]))
    if name == "m2f2":
        return rings.matrix_ring(2, 2)
    if name == "f2sq":
        return rings.column_module(2, 2, get("m2f2"))
    if name.endswith("mod"):
        return rings.regular_module(get(name[:-3]))
    if name.startswith("endq_"):
        M = tv_module(name[5:])
        return pr.OperatorQuantale(M, pr.end_q_quantale(M).operators, name)
    if name == "scalars_p3":
        M = get("p3")
        zero, ident = tuple([M.bottom] * len(M)), tuple(M.elements)
        return pr.OperatorQuantale(M, [zero, ident], name)
    raise AssertionError(name)


def _renamed(Q, name):
    from .quantale import Quantale

    return Quantale(Q.lattice, Q.product, Q.unit, name, Q.operators, Q.carrier)


def tv_module(name):
    """A catalog lattice (or power-set module) as a module over the truth values."""
    obj = get(name)
    if kind(name) == "module":
        return obj
    return truth_value_module(obj, get("two"))


def kind(name):
    return ENTRIES[name][0]


def names(of_kind=None):
    return [n for n, (k, _) in ENTRIES.items() if of_kind is None or k == of_kind]


def quantales():
    return [get(n) for n in names("quantale")]


def catalog_modules():
    """Every catalog module: the power-set modules, the truth-value modules on the
    catalog lattices, and the self-module of each catalog quantale."""
    from .qmodule import self_module

    mods = [get(n) for n in names("module")]
    mods += [tv_module(n) for n in LATTICE_NAMES]
    mods += [self_module(Q) for Q in quantales()]
    return mods
