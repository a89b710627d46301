from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Outcome of a check.

    ``kind`` is one of ``accepted``, ``rejected``, ``valid`` or ``countermodel``.
    Rejections carry a ``locus`` (a step index or a tree path) and a ``code``
    naming the failure class.
    """

    ok: bool
    kind: str
    locus: Any = None
    rule: str | None = None
    code: str | None = None
    message: str = ""
    model: str | None = None
    valuation: dict | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict[str, Any] = {"ok": self.ok, "kind": self.kind}
        for key in ("locus", "rule", "code", "model", "valuation"):
            val = getattr(self, key)
            if val is not None:
                out[key] = list(val) if isinstance(val, tuple) else val
        if self.message:
            out["message"] = self.message
        if self.details:
            out["details"] = self.details
        return out


def accepted(**kw) -> Verdict:
    return Verdict(True, "accepted", **kw)


def rejected(locus, code: str, message: str, rule: str | None = None, **kw) -> Verdict:
    return Verdict(False, "rejected", locus=locus, rule=rule, code=code, message=message, **kw)


def valid(**kw) -> Verdict:
    return Verdict(True, "valid", **kw)


def countermodel(model: str | None, valuation: dict, message: str = "", **kw) -> Verdict:
    return Verdict(False, "countermodel", model=model, valuation=valuation, message=message, **kw)
