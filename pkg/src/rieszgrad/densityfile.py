"""Reading and writing density files.

A density file is a YAML (or JSON) document::

    n: 3
    components:
      - {tau: 2.0, sigma: 1.0}
      - {tau: 5.0, sigma: 4.0, weight: 0.5, reflect: true}

``n`` and each component's ``tau`` and ``sigma`` are required; ``weight``
defaults to 1 and ``reflect`` (mirror the ball to x1 < 0) to false.  Unknown
keys are rejected.  Every error carries the 1-based line it refers to.
"""
import json

import yaml

from .errors import AdmissibilityError, DensityFileError
from .potentials import BallSpec, Component, Density

__all__ = ["parse_density", "load_density", "dump_density", "density_from_witness"]

_INT = "tag:yaml.org,2002:int"
_FLOAT = "tag:yaml.org,2002:float"
_BOOL = "tag:yaml.org,2002:bool"
_STR = "tag:yaml.org,2002:str"
_COMPONENT_KEYS = {"tau", "sigma", "weight", "reflect"}


def _line(node):
    return node.start_mark.line + 1


def _fail(node, msg):
    raise DensityFileError(msg, line=_line(node))


def _mapping(node, what, allowed, required):
    if not isinstance(node, yaml.MappingNode):
        _fail(node, f"{what} must be a mapping")
    out = {}
    for key_node, value_node in node.value:
        key = key_node.value
        if key not in allowed:
            _fail(key_node, f"unknown key {key!r} in {what}")
        if key in out:
            _fail(key_node, f"duplicate key {key!r} in {what}")
        out[key] = value_node
    for key in required:
        if key not in out:
            _fail(node, f"{what} is missing required key {key!r}")
    return out


def _number(node, what):
    if isinstance(node, yaml.ScalarNode):
        plain = node.style is None
        if node.tag in (_INT, _FLOAT) or (node.tag == _STR and plain):
            try:
                return float(node.value)
            except ValueError:
                pass
    _fail(node, f"{what} must be a number")


def _integer(node, what):
    if isinstance(node, yaml.ScalarNode) and node.tag == _INT:
        return int(node.value)
    _fail(node, f"{what} must be an integer")


def _boolean(node, what):
    if isinstance(node, yaml.ScalarNode) and node.tag == _BOOL:
        return node.value.lower() in ("true", "yes", "on")
    _fail(node, f"{what} must be true or false")


def parse_density(text):
    """Parse density-file text into a validated :class:`Density`."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise DensityFileError(f"syntax error: {exc.problem}", line=mark.line + 1 if mark else None)
    if root is None:
        raise DensityFileError("empty document", line=1)
    top = _mapping(root, "document", {"n", "components"}, ("n", "components"))
    n = _integer(top["n"], "n")
    if n < 1:
        _fail(top["n"], "n must be at least 1")
    seq = top["components"]
    if not isinstance(seq, yaml.SequenceNode):
        _fail(seq, "components must be a list")
    comps = []
    for i, node in enumerate(seq.value):
        fields = _mapping(node, f"component {i}", _COMPONENT_KEYS, ("tau", "sigma"))
        tau = _number(fields["tau"], "tau")
        sigma = _number(fields["sigma"], "sigma")
        weight = _number(fields["weight"], "weight") if "weight" in fields else 1.0
        reflect = _boolean(fields["reflect"], "reflect") if "reflect" in fields else False
        try:
            comps.append(Component(BallSpec(tau, sigma, n), weight, reflect))
            # validate incrementally so an overlap points at the later ball
            Density(n, comps)
        except AdmissibilityError as exc:
            _fail(node, f"component {i}: {exc}")
    return Density(n, comps)


def load_density(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DensityFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_density(text)


def dump_density(rho):
    """Serialize a density as JSON, which is also valid YAML."""
    comps = [
        {"tau": c.ball.tau, "sigma": c.ball.sigma, "weight": c.weight, "reflect": c.reflect}
        for c in rho.components
    ]
    return json.dumps({"n": rho.n, "components": comps}, indent=2) + "\n"


def density_from_witness(result):
    """Single-ball density attaining a :class:`~rieszgrad.bounds.BoundResult`."""
    if result.witness is None:
        return Density(result.n, ())
    return Density.single(result.witness)
