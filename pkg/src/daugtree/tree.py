"""Nodes of the binary trees and their order structure.

A node is a string over ``{"0", "1"}``; the empty string is the root.  The
rooted tree ``B`` contains the root, the rootless tree ``M`` does not and
additionally admits lambda-segments ``[s, t] + t^+`` as admissible sets.

Nodes are numbered in shortlex (level) order: the root is 0 and the children
of the node numbered ``n`` are ``2n + 1`` and ``2n + 2``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .errors import InvalidNode

ROOT = ""
ROOT_TEXT = "ε"


class TreeKind(enum.Enum):
    B = "B"  # rooted binary tree, admissible sets are subsets of branches
    M = "M"  # root removed, branches and lambda-segments

    @property
    def has_root(self) -> bool:
        return self is TreeKind.B

    @property
    def min_depth(self) -> int:
        return 0 if self is TreeKind.B else 1

    @classmethod
    def parse(cls, text) -> "TreeKind":
        if isinstance(text, TreeKind):
            return text
        try:
            return cls(str(text).strip().upper())
        except ValueError:
            raise InvalidNode(f"unknown tree kind {text!r}") from None


class Relation(enum.Enum):
    EQUAL = "equal"
    ANCESTOR = "ancestor"
    DESCENDANT = "descendant"
    INCOMPARABLE = "incomparable"


class SetKind(enum.Enum):
    BRANCH = "branch"
    LAMBDA = "lambda"


@dataclass(frozen=True)
class AdmissibleSet:
    kind: SetKind
    nodes: frozenset
    # last node of the branch prefix, or the node t of [s, t] + t^+ ("" for {0, 1})
    end: str

    def __iter__(self):
        return iter(sorted(self.nodes, key=rank))

    def __len__(self):
        return len(self.nodes)


def parse_node(text: str) -> str:
    text = text.strip()
    if text in (ROOT_TEXT, "e", "()", "root"):
        return ROOT
    if any(c not in "01" for c in text):
        raise InvalidNode(f"not a node: {text!r}")
    return text


def format_node(t: str) -> str:
    return t if t else ROOT_TEXT


def check_node(t: str, kind: TreeKind) -> str:
    if not isinstance(t, str) or any(c not in "01" for c in t):
        raise InvalidNode(f"not a node: {t!r}")
    if t == ROOT and not kind.has_root:
        raise InvalidNode("the root is not a node of the rootless tree")
    return t


def compare(s: str, t: str) -> Relation:
    if s == t:
        return Relation.EQUAL
    if t.startswith(s):
        return Relation.ANCESTOR
    if s.startswith(t):
        return Relation.DESCENDANT
    return Relation.INCOMPARABLE


def precedes(s: str, t: str) -> bool:
    """``s`` is an ancestor of ``t`` or equal to it."""
    return t.startswith(s)


def comparable(s: str, t: str) -> bool:
    return t.startswith(s) or s.startswith(t)


def rank(t: str, kind: TreeKind | None = None) -> int:
    if kind is not None:
        check_node(t, kind)
    return (1 << len(t)) - 1 + (int(t, 2) if t else 0)


def unrank(n: int, kind: TreeKind | None = None) -> str:
    if n < 0 or (n == 0 and kind is TreeKind.M):
        raise InvalidNode(f"no node has rank {n} in this tree")
    depth = (n + 1).bit_length() - 1
    offset = n + 1 - (1 << depth)
    return format(offset, f"0{depth}b") if depth else ROOT


def rank_key(t: str):
    return (len(t), t)


def parent(t: str) -> str:
    if not t:
        raise InvalidNode("the root has no parent")
    return t[:-1]


def children(t: str) -> tuple[str, str]:
    return t + "0", t + "1"


def sibling(t: str) -> str:
    if not t:
        raise InvalidNode("the root has no sibling")
    return t[:-1] + ("1" if t[-1] == "0" else "0")


def path(t: str, kind: TreeKind) -> list[str]:
    """Ancestors of ``t`` and ``t`` itself, top down."""
    return [t[:k] for k in range(kind.min_depth, len(t) + 1)]


def nodes_at_depth(k: int) -> list[str]:
    if k == 0:
        return [ROOT]
    return [format(i, f"0{k}b") for i in range(1 << k)]


def nodes_upto(kind: TreeKind, d: int) -> list[str]:
    out = []
    for k in range(kind.min_depth, d + 1):
        out.extend(nodes_at_depth(k))
    return out


def sort_nodes(nodes: Iterable[str]) -> list[str]:
    return sorted(nodes, key=rank_key)


def branches(kind: TreeKind, d: int) -> list[AdmissibleSet]:
    return [AdmissibleSet(SetKind.BRANCH, frozenset(path(v, kind)), v)
            for v in nodes_at_depth(d)]


def lambda_segments(d: int) -> list[AdmissibleSet]:
    """Maximal lambda-segments whose nodes lie within depth ``d``."""
    out = [AdmissibleSet(SetKind.LAMBDA, frozenset(("0", "1")), ROOT)]
    for k in range(1, d):
        for t in nodes_at_depth(k):
            nodes = frozenset(path(t, TreeKind.M)) | frozenset(children(t))
            out.append(AdmissibleSet(SetKind.LAMBDA, nodes, t))
    return out


def enumerate_admissible_sets(kind: TreeKind, d: int) -> list[AdmissibleSet]:
    """Truncated branches and (for ``M``) maximal lambda-segments to depth ``d``.

    Every admissible set whose nodes have depth at most ``d`` is a subset of
    one of the returned sets.
    """
    kind = TreeKind.parse(kind)
    if d < 1:
        raise ValueError("depth must be at least 1")
    out = branches(kind, d)
    if kind is TreeKind.M:
        out.extend(lambda_segments(d))
    return out


def is_chain(nodes: Iterable[str]) -> bool:
    ordered = sorted(set(nodes), key=len)
    return all(ordered[i + 1].startswith(ordered[i]) for i in range(len(ordered) - 1))


def is_antichain(nodes: Iterable[str]) -> bool:
    items = list(set(nodes))
    return all(not comparable(a, b) for a, b in combinations(items, 2))


def is_admissible(nodes: Iterable[str], kind: TreeKind) -> bool:
    """Membership in the adequate family: subset of a branch or a lambda-segment."""
    nodes = set(nodes)
    if is_chain(nodes):
        return True
    if kind is not TreeKind.M:
        return False
    deepest = max(len(t) for t in nodes)
    leaves = [t for t in nodes if len(t) == deepest]
    if len(leaves) != 2 or parent(leaves[0]) != parent(leaves[1]):
        return False
    t = parent(leaves[0])
    return all(precedes(s, t) for s in nodes if s not in leaves)


def has_sibling_pair(nodes: Iterable[str]) -> bool:
    nodes = set(nodes)
    return any(t and sibling(t) in nodes for t in nodes)


def is_unit_antichain(nodes: Iterable[str], kind: TreeKind) -> bool:
    """Non-empty antichain whose indicator vector has norm one."""
    nodes = set(nodes)
    if not nodes or not is_antichain(nodes):
        return False
    return kind is TreeKind.B or not has_sibling_pair(nodes)


def iter_unit_antichains(kind: TreeKind, d: int, within=None) -> Iterator[frozenset]:
    """All unit antichains of nodes to depth ``d`` (optionally inside ``within``).

    Generated by backtracking in rank order; the order is deterministic.
    """
    kind = TreeKind.parse(kind)
    pool = nodes_upto(kind, d) if within is None else sort_nodes(within)
    forbid_siblings = kind is TreeKind.M

    def extend(start, chosen):
        for i in range(start, len(pool)):
            t = pool[i]
            if any(comparable(t, s) for s in chosen):
                continue
            if forbid_siblings and t and sibling(t) in chosen:
                continue
            chosen.append(t)
            yield frozenset(chosen)
            yield from extend(i + 1, chosen)
            chosen.pop()

    yield from extend(0, [])


def enumerate_unit_antichains(kind: TreeKind, d: int) -> list[frozenset]:
    """Unit antichains to depth ``d``, ordered by size and then by ranks."""
    found = list(iter_unit_antichains(kind, d))
    found.sort(key=lambda e: (len(e), sorted(rank(t) for t in e)))
    return found
