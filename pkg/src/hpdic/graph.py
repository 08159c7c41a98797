"""The HPDIC hypergraph: every statement and inference of a saturated problem.

Statements and inferences are two kinds of node; an inference points from
its premises to its result. Nothing is ever removed. Statements that feed no
derivation of the conclusion stay in the graph with ``useful=False`` so a
tutor can recognise a valid step that leads nowhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterator

import networkx as nx

from .engine import SaturationResult
from .geometry import Statement
from .referential import Referential

__all__ = [
    "StatementNode",
    "InferenceNode",
    "HpdicGraph",
    "Proof",
    "ReachabilityError",
    "construct_graph",
    "mark_useful",
    "detect_cycles",
    "enumerate_proofs",
    "export_json",
    "import_json",
    "export_dot",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
HYPOTHESIS_KINDS = ("implicit", "explicit", "auxiliary")
KINDS = HYPOTHESIS_KINDS + ("intermediate", "conclusion")


class ReachabilityError(RuntimeError):
    pass


@dataclass(frozen=True)
class StatementNode:
    id: str
    text: str
    predicate: str
    kind: str
    useful: bool = False

    @property
    def is_hypothesis(self) -> bool:
        return self.kind in HYPOTHESIS_KINDS


@dataclass(frozen=True)
class InferenceNode:
    id: str
    rule: str
    justification: str
    granularity: str
    premises: tuple[str, ...]
    result: str
    useful: bool = False


@dataclass(frozen=True)
class HpdicGraph:
    statements: tuple[StatementNode, ...] = ()
    inferences: tuple[InferenceNode, ...] = ()
    conclusion: str | None = None

    def statement(self, node_id: str) -> StatementNode:
        return self._by_id()[node_id]

    def _by_id(self) -> dict[str, StatementNode]:
        return {s.id: s for s in self.statements}

    def find(self, text: str) -> StatementNode | None:
        for s in self.statements:
            if s.text == text:
                return s
        return None

    def derivations(self) -> dict[str, list[InferenceNode]]:
        out: dict[str, list[InferenceNode]] = {s.id: [] for s in self.statements}
        for inf in self.inferences:
            out[inf.result].append(inf)
        return out

    def useful_subgraph(self) -> "HpdicGraph":
        return HpdicGraph(
            tuple(s for s in self.statements if s.useful),
            tuple(i for i in self.inferences if i.useful),
            self.conclusion,
        )


@dataclass(frozen=True)
class Proof:
    """One acyclic derivation: a chosen inference per derived statement."""

    conclusion: str
    inferences: tuple[InferenceNode, ...]

    @property
    def statements(self) -> set[str]:
        out = {self.conclusion}
        for inf in self.inferences:
            out.update(inf.premises)
            out.add(inf.result)
        return out

    @property
    def rules(self) -> set[str]:
        return {inf.rule for inf in self.inferences}


def _node_ids(prefix: str, n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def construct_graph(res: SaturationResult, conclusion: Statement | None = None, referential: Referential | None = None) -> HpdicGraph:
    """Build and mark the graph; raise :class:`ReachabilityError` when the
    conclusion was not derived."""
    conclusion = conclusion if conclusion is not None else res.conclusion
    kb = res.kb
    if conclusion not in kb.statements:
        raise ReachabilityError(f"conclusion {conclusion} was not derived from the hypotheses")

    texts = {s: s.text for s in kb.statements}
    ordered = sorted(kb.statements, key=lambda s: texts[s])
    sid = dict(zip(ordered, _node_ids("s", len(ordered))))
    snodes = []
    for s in ordered:
        origin = kb.statements[s]
        kind = origin if origin in HYPOTHESIS_KINDS else "intermediate"
        if s == conclusion and kind == "intermediate":
            kind = "conclusion"
        snodes.append(StatementNode(sid[s], texts[s], s.predicate, kind))

    def inf_key(inf):
        return (inf.rule_id, texts[inf.result], tuple(texts[p] for p in inf.premises))

    infs = sorted(kb.inferences, key=inf_key)
    inodes = []
    for node_id, inf in zip(_node_ids("i", len(infs)), infs):
        rule = _lookup_rule(referential, inf.rule_id)
        inodes.append(InferenceNode(
            node_id,
            inf.rule_id,
            rule.justification if rule else "",
            rule.granularity if rule else "low",
            tuple(sid[p] for p in inf.premises),
            sid[inf.result],
        ))
    return mark_useful(HpdicGraph(tuple(snodes), tuple(inodes), sid[conclusion]))


def _lookup_rule(r: Referential | None, rule_id: str):
    if r is None:
        from .referential import builtin_referential

        r = builtin_referential()
    try:
        return r.rule(rule_id)
    except KeyError:
        return None


def mark_useful(g: HpdicGraph, conclusion: str | None = None) -> HpdicGraph:
    """Premise closure from the conclusion.

    A statement is useful if it is the conclusion or a premise of a useful
    inference; an inference is useful if its result is useful.
    """
    conclusion = conclusion if conclusion is not None else g.conclusion
    if conclusion is None:
        return g
    if conclusion not in g._by_id():
        raise KeyError(f"no statement node {conclusion!r}")
    derivations = g.derivations()
    useful = {conclusion}
    stack = [conclusion]
    while stack:
        for inf in derivations[stack.pop()]:
            for p in inf.premises:
                if p not in useful:
                    useful.add(p)
                    stack.append(p)
    return HpdicGraph(
        tuple(replace(s, useful=s.id in useful) for s in g.statements),
        tuple(replace(i, useful=i.result in useful) for i in g.inferences),
        conclusion,
    )


def statement_digraph(g: HpdicGraph) -> nx.DiGraph:
    """Premise -> result edges between statements, one per inference pair."""
    d = nx.DiGraph()
    d.add_nodes_from(s.id for s in g.statements)
    for inf in g.inferences:
        for p in inf.premises:
            d.add_edge(p, inf.result)
    return d


def detect_cycles(g: HpdicGraph, max_length: int | None = 8) -> list[tuple[str, ...]]:
    """Elementary cycles of the statement graph, each rotated to start at its
    smallest id, sorted by length then ids."""
    d = statement_digraph(g)
    out = []
    for cycle in nx.simple_cycles(d, length_bound=max_length):
        i = cycle.index(min(cycle))
        out.append(tuple(cycle[i:] + cycle[:i]))
    return sorted(out, key=lambda c: (len(c), c))


def enumerate_proofs(g: HpdicGraph, limit: int = 1000) -> list[Proof]:
    """Up to ``limit`` distinct acyclic proofs of the conclusion."""
    if limit <= 0:
        raise ValueError("limit must be positive")
    if g.conclusion is None:
        return []
    by_id = g._by_id()
    derivations = {k: [i for i in v if i.useful] for k, v in g.derivations().items()}
    proofs: list[Proof] = []
    for chosen in _choices(g.conclusion, by_id, derivations):
        proofs.append(Proof(g.conclusion, tuple(sorted(chosen.values(), key=lambda i: i.id))))
        if len(proofs) >= limit:
            break
    return proofs


def _choices(conclusion, by_id, derivations) -> Iterator[dict]:
    """Depth-first choice of one inference per open statement.

    ``chosen`` maps statement id to its inference; a statement may not depend
    on itself, which keeps every proof acyclic.
    """

    def depends_on(start, target, chosen):
        # does ``start`` (already chosen) transitively use ``target``?
        seen, stack = set(), [start]
        while stack:
            s = stack.pop()
            if s == target:
                return True
            if s in seen or s not in chosen:
                continue
            seen.add(s)
            stack.extend(chosen[s].premises)
        return False

    def expand(open_ids, chosen):
        while open_ids and (open_ids[0] in chosen or by_id[open_ids[0]].is_hypothesis):
            open_ids = open_ids[1:]
        if not open_ids:
            yield dict(chosen)
            return
        s, rest = open_ids[0], open_ids[1:]
        for inf in derivations[s]:
            if any(p == s or depends_on(p, s, chosen) for p in inf.premises):
                continue
            chosen[s] = inf
            yield from expand(list(inf.premises) + rest, chosen)
            del chosen[s]

    if by_id[conclusion].is_hypothesis:
        yield {}
        return
    yield from expand([conclusion], {})


def export_json(g: HpdicGraph) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "statements": [
            {"id": s.id, "text": s.text, "predicate": s.predicate, "kind": s.kind, "useful": s.useful}
            for s in g.statements
        ],
        "inferences": [
            {
                "id": i.id,
                "rule": i.rule,
                "justification": i.justification,
                "granularity": i.granularity,
                "premises": list(i.premises),
                "result": i.result,
                "useful": i.useful,
            }
            for i in g.inferences
        ],
        "conclusion": g.conclusion,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def import_json(text: str) -> HpdicGraph:
    """Inverse of :func:`export_json`; raises ``ValueError`` on malformed input."""
    try:
        doc = json.loads(text)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
        statements = tuple(
            StatementNode(s["id"], s["text"], s["predicate"], s["kind"], bool(s["useful"]))
            for s in doc["statements"]
        )
        inferences = tuple(
            InferenceNode(
                i["id"], i["rule"], i["justification"], i["granularity"],
                tuple(i["premises"]), i["result"], bool(i["useful"]),
            )
            for i in doc["inferences"]
        )
        g = HpdicGraph(statements, inferences, doc["conclusion"])
    except (KeyError, TypeError, AttributeError, json.JSONDecodeError) as exc:
        raise ValueError(f"malformed graph JSON: {exc}") from exc
    ids = g._by_id()
    for s in statements:
        if s.kind not in KINDS:
            raise ValueError(f"statement {s.id}: unknown kind {s.kind!r}")
    for i in inferences:
        for ref in (*i.premises, i.result):
            if ref not in ids:
                raise ValueError(f"inference {i.id} references unknown statement {ref!r}")
    if g.conclusion is not None and g.conclusion not in ids:
        raise ValueError(f"unknown conclusion id {g.conclusion!r}")
    return g


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: HpdicGraph) -> str:
    """Statements as boxes, inferences as ellipses labelled by justification.
    Useless nodes are dashed and grey."""
    lines = ["digraph hpdic {", "  rankdir=BT;", "  node [fontsize=10];"]
    for s in g.statements:
        attrs = ["shape=box", f"label={_dot_quote(s.text)}"]
        if s.kind in HYPOTHESIS_KINDS:
            attrs.append("style=bold" if s.useful else "style=\"bold,dashed\"")
        elif s.id == g.conclusion:
            attrs.append("peripheries=2")
        if not s.useful:
            attrs += ["color=gray", "fontcolor=gray"]
            if s.kind not in HYPOTHESIS_KINDS:
                attrs.append("style=dashed")
        lines.append(f"  {s.id} [{', '.join(attrs)}];")
    for i in g.inferences:
        label = i.justification or i.rule
        attrs = ["shape=ellipse", f"label={_dot_quote(label)}", f"tooltip={_dot_quote(i.rule)}"]
        if not i.useful:
            attrs += ["color=gray", "fontcolor=gray", "style=dashed"]
        lines.append(f"  {i.id} [{', '.join(attrs)}];")
        edge = " [color=gray]" if not i.useful else ""
        for p in dict.fromkeys(i.premises):
            lines.append(f"  {p} -> {i.id}{edge};")
        lines.append(f"  {i.id} -> {i.result}{edge};")
    lines.append("}")
    return "\n".join(lines) + "\n"
