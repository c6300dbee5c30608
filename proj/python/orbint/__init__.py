"""Exact p-adic orbital integrals and fundamental-lemma checks."""

import json

from . import _orbint
from ._orbint import OrbintError

__all__ = [
    "OrbintError",
    "algebra_table",
    "germ",
    "j_orbital_unit",
    "j_unit_closed",
    "kloosterman",
    "transfer",
    "verify_fl",
]


def kloosterman(p, r, u=1):
    """Integral of psi((x + 1/x) / (p^r u)) over the units, as {order, coefficients, decimal}."""
    return json.loads(_orbint.kloosterman(p, r, u))


def j_unit_closed(p, r, u=1):
    return json.loads(_orbint.j_unit_closed(p, r, u))


def j_orbital_unit(p, r, u=1):
    return json.loads(_orbint.j_orbital_unit(p, r, u))


def algebra_table(model):
    return json.loads(_orbint.algebra_table(model))


def verify_fl(primes, models, r_max=1, units="all"):
    """Returns (exit_code, report dict, csv text)."""
    config = {"schema": "orbint.config/1", "primes": list(primes), "models": list(models),
              "r_max": r_max, "units": units}
    code, report, csv = _orbint.verify_fl(json.dumps(config))
    return code, json.loads(report), csv


def germ(phi, phiprime=None, model=0, r_probe=4):
    phi_text = phi if isinstance(phi, str) else json.dumps(phi)
    pp = None if phiprime is None else (phiprime if isinstance(phiprime, str) else json.dumps(phiprime))
    code, report = _orbint.germ(phi_text, pp, model, r_probe)
    return code, json.loads(report)


def transfer(target, model=1, kuznetsov=False):
    text = target if isinstance(target, str) else json.dumps(target)
    code, report = _orbint.transfer(text, model, kuznetsov)
    return code, json.loads(report)
