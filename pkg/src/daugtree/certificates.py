"""Certificate files: building them from results and re-checking them.

``verify`` recomputes every claimed equality and inequality from the data in
the file and raises ``VerificationError`` naming the first one that fails.
"""
from __future__ import annotations

from .construct import ConvexDecomposition, DaugavetifyResult
from .errors import FormatError, VerificationError
from .fileio import (fparse, fstr, functional_from_json, functional_to_json, point_from_json,
                     point_to_json, vector_from_json, vector_to_json)
from .geometry import (LASQ_LEVEL, LASQ_X, OCTA_LEVEL, OCTA_X, DiameterReport, ProbeReport, pm_norms,
                       weak_nbhd_diameter_DB)
from .minimal_sets import RefutationCertificate, delta_refutation
from .points import (DaugavetCertificate, DeltaWitness, Refutation, branch_sums,
                     daugavet_check, geometric)
from .spaces import TreeVector, as_sequence, backend_norm, norm, parse_backend, remove
from .tree import TreeKind, format_node, is_unit_antichain, parse_node, rank_key


def _need(cond, claim):
    if not cond:
        raise VerificationError(claim)


def _nodes(nodes):
    return [format_node(t) for t in sorted(nodes, key=rank_key)]


def _space_of(x, backend=None):
    if isinstance(x, TreeVector):
        return f"tree:{x.kind.name}"
    if backend is None:
        raise ValueError("sequence points need a backend")
    return backend


# -- builders --------------------------------------------------------------

def daugavet_json(x: TreeVector, result) -> dict:
    if isinstance(result, DaugavetCertificate):
        return {"type": "daugavet", "vector": vector_to_json(x), "method": result.method,
                "depth": result.depth}
    if isinstance(result, Refutation):
        return {"type": "refutation", "vector": vector_to_json(x), "E": _nodes(result.E),
                "value": fstr(result.value), "depth": result.depth, "method": result.method}
    raise TypeError(f"not a Daugavet verdict: {result!r}")


def not_applicable_json(x: TreeVector, reason: str) -> dict:
    return {"type": "not-applicable", "vector": vector_to_json(x), "reason": reason}


def delta_refutation_json(x, cert: RefutationCertificate, backend: str) -> dict:
    space = _space_of(x, backend)
    witness = cert.witness
    if isinstance(x, TreeVector):
        if not isinstance(witness, TreeVector):
            witness = TreeVector(x.kind, witness)
    else:
        x = as_sequence(x)
    return {"type": "delta-refutation", "space": space,
            "vector": point_to_json(x, space),
            "slice_functional": functional_to_json(cert.slice_functional, space),
            "slice_delta": fstr(cert.slice_delta),
            "functional": functional_to_json(cert.functional, space),
            "threshold": fstr(cert.threshold), "eta": fstr(cert.eta), "n": cert.n,
            "gamma": fstr(cert.gamma), "bound": fstr(cert.bound),
            "verified_max": fstr(cert.verified_max),
            "witness": point_to_json(witness, space),
            "F": [sorted(_keyed(A, space)) for A in cert.F]}


def _keyed(A, space):
    return [format_node(t) for t in A] if space.startswith("tree") else [str(i) for i in A]


def decomposition_json(dec: ConvexDecomposition, kind: str) -> dict:
    return {"type": "decomposition", "family": kind, "target": vector_to_json(dec.target),
            "terms": [[fstr(lam), vector_to_json(z)] for lam, z in dec.terms]}


def daugavetify_json(y, functionals, eps, res: DaugavetifyResult) -> dict:
    return {"type": "daugavetify", "y": vector_to_json(y), "eps": fstr(eps),
            "functionals": [functional_to_json(phi, "tree:M") for phi in functionals],
            "x": vector_to_json(res.x),
            "anchors": {format_node(t): format_node(b) for t, b in sorted(res.anchors.items())},
            "certificate": daugavet_json(res.x, res.certificate)}


def delta_witness_json(phi, delta, res: DeltaWitness) -> dict:
    return {"type": "delta-witness", "x": vector_to_json(geometric(TreeKind.B)),
            "functional": functional_to_json(phi, "tree:B"), "delta": fstr(delta),
            "y": vector_to_json(res.y), "distance": fstr(res.distance), "value": fstr(res.value)}


def probe_json(rep: ProbeReport) -> dict:
    return {"type": "probe", "statement": rep.statement, "samples": rep.samples,
            "seed": rep.seed, "depth": rep.depth, "worst": fstr(rep.worst),
            "verdict": rep.verdict,
            "witness": None if rep.witness is None else vector_to_json(rep.witness),
            "exact": None if rep.exact is None else fstr(rep.exact),
            "exact_witness": None if rep.exact_witness is None else vector_to_json(rep.exact_witness)}


def diameter_json(x: TreeVector, rep: DiameterReport) -> dict:
    return {"type": "weak-norm", "vector": vector_to_json(x), "eps": fstr(rep.eps), "n": rep.n,
            "tail_norm": fstr(rep.tail_norm), "depth": rep.depth, "bound": fstr(rep.bound),
            "worst_set": _nodes(rep.worst_set), "programs": rep.programs}


# -- verification ------------------------------------------------------------

def verify(cert: dict) -> str:
    """Re-check a certificate; return a one-line summary or raise."""
    if not isinstance(cert, dict) or "type" not in cert:
        raise FormatError("certificate must be a JSON object with a 'type'")
    check = _CHECKS.get(cert["type"])
    if check is None:
        raise FormatError(f"unknown certificate type {cert['type']!r}")
    try:
        return check(cert)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"incomplete certificate: missing {exc}") from None


def _verify_daugavet(c):
    x = vector_from_json(c["vector"])
    _need(norm(x) == 1, "vector is not a unit vector")
    if c["method"] == "AllBranchesNorm":
        sums, _ = branch_sums(x, int(c["depth"]))
        _need(all(s == 1 for _, s in sums), "some branch does not carry norm one")
    else:
        _need(isinstance(daugavet_check(x), DaugavetCertificate),
              "a unit antichain separates the vector")
    return f"daugavet ({c['method']}) verified"


def _verify_refutation(c):
    x = vector_from_json(c["vector"])
    E = frozenset(parse_node(t) for t in c["E"])
    value = fparse(c["value"])
    _need(norm(x) == 1, "vector is not a unit vector")
    _need(E and is_unit_antichain(E, x.kind), "E is not a unit antichain")
    actual = norm(remove(x, E))
    _need(actual == value, f"||x - P_E x|| is {fstr(actual)}, not {c['value']}")
    _need(value < 1, "||x - P_E x|| is not below one")
    return f"refutation verified: ||x - P_E x|| = {fstr(value)}"


def _verify_not_applicable(c):
    vector_from_json(c["vector"])
    return f"not applicable: {c.get('reason', '')}"


def _verify_delta_refutation(c):
    space = c["space"]
    backend = parse_backend(space)
    x = point_from_json(c["vector"], space)
    z = functional_from_json(c["functional"])
    phi = functional_from_json(c["slice_functional"])
    eta, gamma, bound = fparse(c["eta"]), fparse(c["gamma"]), fparse(c["bound"])
    threshold, vmax = fparse(c["threshold"]), fparse(c["verified_max"])
    delta = fparse(c["slice_delta"])
    _need(bound == 2 - eta * gamma, "bound differs from 2 - eta * gamma")
    _need(0 < eta and 0 < gamma, "eta and gamma must be positive")
    _need(threshold == 1 - delta / (len(c["F"]) + 1), "threshold differs from 1 - delta/(m + 1)")
    z.check(backend)
    phi.check(backend)
    _need(z(x) > threshold, "x is not in the slice")
    witness = point_from_json(c["witness"], space)
    _need(backend_norm(witness, backend) <= 1, "witness lies outside the ball")
    _need(z(witness) >= threshold, "witness is not in the closed slice")
    diff = x - witness if isinstance(x, TreeVector) else {
        i: x.get(i, 0) - witness.get(i, 0) for i in set(x) | set(witness)}
    _need(backend_norm(diff, backend) == vmax, "witness distance differs from verified_max")
    _need(vmax <= bound < 2, "verified_max exceeds the bound")
    again = delta_refutation(x, backend, phi, delta, eta, int(c["n"]))
    _need(again.verified_max == vmax, f"recomputed maximum is {fstr(again.verified_max)}")
    _need(again.gamma == gamma, f"recomputed gamma is {fstr(again.gamma)}")
    return f"delta refutation verified: sup {fstr(vmax)} <= {fstr(bound)} < 2"


def _verify_decomposition(c):
    target = vector_from_json(c["target"])
    terms = [(fparse(lam), vector_from_json(z)) for lam, z in c["terms"]]
    dec = ConvexDecomposition(terms, target)
    dec.check()
    for _, z in terms:
        if c["family"] == "F":
            _need(not z.tails and all(abs(v) == 1 for v in z.coeffs.values()),
                  "term is not a sign vector")
            _need(not z.coeffs or is_unit_antichain(z.coeffs, z.kind),
                  "term support is not a unit antichain")
        else:
            _need(norm(z) == 1, "term is not a unit vector")
            _need(all(s == 1 for _, s in branch_sums(z)[0]), "term misses a branch")
    return f"decomposition into {len(terms)} terms verified"


def _verify_daugavetify(c):
    y, x = vector_from_json(c["y"]), vector_from_json(c["x"])
    eps = fparse(c["eps"])
    for k, data in enumerate(c["functionals"]):
        phi = functional_from_json(data)
        phi.check(parse_backend(data["space"]))
        _need(abs(phi(y - x)) < eps, f"functional {k} separates x from y by eps or more")
    _need(c["certificate"]["vector"] == c["x"], "nested certificate is for another vector")
    _verify_daugavet(c["certificate"])
    return "x lies in the weak neighbourhood and is a Daugavet-point"


def _verify_delta_witness(c):
    x, y = vector_from_json(c["x"]), vector_from_json(c["y"])
    phi = functional_from_json(c["functional"])
    phi.check(parse_backend("tree:B"))
    _need(norm(y) <= 1, "y lies outside the ball")
    _need(norm(x - y) == fparse(c["distance"]) == 2, "||x - y|| is not 2")
    _need(phi(y) == fparse(c["value"]), "phi(y) differs from the recorded value")
    _need(phi(y) > phi.claimed_norm - fparse(c["delta"]), "y is not in the slice")
    return "delta witness verified: ||x - y|| = 2"


def _verify_probe(c):
    worst = fparse(c["worst"])
    statement = c["statement"]
    if c.get("witness") is not None:
        y = vector_from_json(c["witness"])
        _need(norm(y) == 1, "witness is not a unit vector")
        if statement == "lasq":
            _need(max(pm_norms(LASQ_X, y)) == worst, "witness value differs from worst")
        elif statement == "octahedral":
            _need(min(pm_norms(OCTA_X, y)) == worst, "witness value differs from worst")
    if statement == "lasq":
        expected = "consistent" if worst >= LASQ_LEVEL else "counterexample"
    elif statement == "octahedral":
        expected = "consistent" if worst <= OCTA_LEVEL else "counterexample"
    else:
        raise FormatError(f"unknown probe statement {statement!r}")
    _need(c["verdict"] == expected, f"verdict should be {expected}")
    return f"{statement} probe verified: worst {fstr(worst)}, {expected}"


def _verify_weak_norm(c):
    x = vector_from_json(c["vector"])
    rep = weak_nbhd_diameter_DB(x, fparse(c["eps"]), int(c["depth"]))
    _need(rep.n == int(c["n"]), f"recomputed n is {rep.n}")
    _need(rep.bound == fparse(c["bound"]), f"recomputed bound is {fstr(rep.bound)}")
    _need(rep.bound < rep.eps, "diameter bound is not below eps")
    return f"weak neighbourhood diameter <= {fstr(rep.bound)} < {fstr(rep.eps)}"


_CHECKS = {
    "daugavet": _verify_daugavet,
    "refutation": _verify_refutation,
    "not-applicable": _verify_not_applicable,
    "delta-refutation": _verify_delta_refutation,
    "decomposition": _verify_decomposition,
    "daugavetify": _verify_daugavetify,
    "delta-witness": _verify_delta_witness,
    "probe": _verify_probe,
    "weak-norm": _verify_weak_norm,
}
