"""The bundled model catalog: small De Morgan lattices, their product bilattices and
the heterogeneous bilattices built from them."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .algebra import (
    FiniteBilattice, FiniteDeMorgan, FiniteHBL, FiniteLattice, b_plus, chain,
    product_cbilattice,
)

DEFAULT_PATH = Path(__file__).with_name("data") / "catalog.json"
ENV_VAR = "BILAT_CATALOG"


@dataclass
class Catalog:
    bilattices: dict[str, FiniteBilattice] = field(default_factory=dict)
    hbls: dict[str, FiniteHBL] = field(default_factory=dict)

    def conflation_bilattices(self) -> dict[str, FiniteBilattice]:
        return {k: b for k, b in self.bilattices.items() if b.confl is not None}

    def hcbls(self) -> dict[str, FiniteHBL]:
        return {k: h for k, h in self.hbls.items() if h.cbl}

    def to_json(self) -> dict:
        return {
            "bilattices": {k: b.to_json() for k, b in self.bilattices.items()},
            "hbls": {k: h.to_json() for k, h in self.hbls.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Catalog":
        bils = {k: FiniteBilattice.from_json(v, k).validate() for k, v in obj.get("bilattices", {}).items()}
        hbls = {k: FiniteHBL.from_json(v, k).validate() for k, v in obj.get("hbls", {}).items()}
        return cls(bils, hbls)


def two_chain() -> FiniteDeMorgan:
    return FiniteDeMorgan.from_lattice(chain(["0", "1"]), [1, 0], "2-chain")


def three_chain() -> FiniteDeMorgan:
    return FiniteDeMorgan.from_lattice(chain(["0", "m", "1"]), [2, 1, 0], "3-chain")


def four_chain() -> FiniteDeMorgan:
    return FiniteDeMorgan.from_lattice(chain(["0", "a", "b", "1"]), [3, 2, 1, 0], "4-chain")


def diamond() -> FiniteDeMorgan:
    names = ["0", "a", "b", "1"]
    up = {(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 3), (2, 2), (2, 3), (3, 3)}
    leq = [[(x, y) in up for y in range(4)] for x in range(4)]
    return FiniteDeMorgan(names, leq, [3, 1, 2, 0], "DM4")


def fork() -> FiniteLattice:
    """0 < b < x, y < 1: distributive but not self-dual, so it admits no De Morgan negation."""
    names = ["0", "b", "x", "y", "1"]
    below = {0: {0}, 1: {0, 1}, 2: {0, 1, 2}, 3: {0, 1, 3}, 4: {0, 1, 2, 3, 4}}
    leq = [[a in below[c] for c in range(5)] for a in range(5)]
    return FiniteLattice(names, leq, "fork5")


def four() -> FiniteBilattice:
    """Belnap's FOUR, listed as f, t, bot, top."""
    B = product_cbilattice(two_chain(), "four")
    order = [B.index("<0,1>"), B.index("<1,0>"), B.index("<0,0>"), B.index("<1,1>")]
    return B.relabel(order, ["f", "t", "bot", "top"])


def _relabel_lattice(L: FiniteDeMorgan, names: list[str], name: str) -> FiniteDeMorgan:
    return FiniteDeMorgan(names, L.leq, L.sim, name)


def default_catalog() -> Catalog:
    bils = {
        "four": four(),
        "nine": product_cbilattice(three_chain(), "nine"),
        "sixteen_chain": product_cbilattice(four_chain(), "sixteen_chain"),
        "sixteen_dm4": product_cbilattice(diamond(), "sixteen_dm4"),
    }
    for b in bils.values():
        b.validate()
    hbls = {f"{k}+": b_plus(b, name=f"{k}+") for k, b in bils.items()}
    dm = diamond()
    swap = [0, 2, 1, 3]
    hbls["dm4_swap"] = FiniteHBL(dm, dm, swap, swap, "dm4_swap").validate()
    c3 = three_chain()
    hbls["chain3_hetero"] = FiniteHBL(c3, _relabel_lattice(c3, ["x", "y", "z"], "3-chain'"),
                                      [0, 1, 2], [0, 1, 2], "chain3_hetero").validate()
    fk = fork()
    hbls["fork5_swap"] = FiniteHBL(fk, fk, [0, 1, 3, 2, 4], [0, 1, 3, 2, 4], "fork5_swap").validate()
    return Catalog(bils, hbls)


def load_catalog(path: str | os.PathLike | None = None) -> Catalog:
    """Load a catalog file; defaults to ``$BILAT_CATALOG`` or the bundled file."""
    if path is None:
        path = os.environ.get(ENV_VAR) or DEFAULT_PATH
    with open(path, encoding="utf-8") as fh:
        return Catalog.from_json(json.load(fh))


@lru_cache(maxsize=None)
def bundled() -> Catalog:
    return load_catalog(DEFAULT_PATH)


def write_default(path: str | os.PathLike = DEFAULT_PATH) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(default_catalog().to_json(), fh, indent=1)
        fh.write("\n")


def lattice_named(name: str) -> FiniteLattice:
    return {"2-chain": two_chain, "3-chain": three_chain, "4-chain": four_chain, "dm4": diamond}[name]()
