"""Abstract domains and the registry used to select one by name."""

from __future__ import annotations

from .base import Domain, DomainMismatch, NotDescending, VarEnv
from .interval import IntervalDomain, IntervalElem
from .octagon import OctagonDomain, OctagonElem
from .sign import SignDomain, SignElem

REGISTRY = {
    "interval": IntervalDomain,
    "octagon": OctagonDomain,
    "sign": SignDomain,
}


def get_domain(name: str) -> Domain:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise ValueError(f"unknown domain {name!r}; choose one of {', '.join(REGISTRY)}") from None


__all__ = [
    "Domain", "DomainMismatch", "NotDescending", "VarEnv", "REGISTRY", "get_domain",
    "IntervalDomain", "IntervalElem", "OctagonDomain", "OctagonElem", "SignDomain", "SignElem",
]
