""" Text renderings: line-oriented reports, indented argument trees and DOT graphs.
    Every list is sorted so identical inputs give byte-identical output.
"""
from goal_arbiter.arguments import InstrumentalArgument, Leaf
from goal_arbiter.attacks import AttackKind


def _quote(text):
    return '"' + str(text).replace('"', '\\"') + '"'


def _two_lines(first, second):
    return f"{first}\\n{second}"


def _join(items):
    return ", ".join(items) if items else "-"


def format_amounts(atoms):
    return _join([f"{atom.resource}={atom.amount}" for atom in sorted(atoms)])


def node_name(fw, node):
    """ Argument id with its claim, or the goal itself. """
    claims = getattr(fw, "claims", None)
    if claims and node in claims:
        return f"{node} {claims[node]}"
    return str(node)


def arguments_report(store):
    lines = [f"arguments: {len(store)}"]
    for arg in store:
        lines.append(f"argument {arg.id}")
        lines.append(f"  claim: {arg.claim}")
        lines.append(f"  rule: {arg.rule.key}")
        lines.append(f"  resources: {format_amounts([atom for _, atom in arg.rec()])}")
        lines.append(f"  subarguments: {_join(sorted(sub.id for sub in arg.descendants()))}")
        lines.append(f"  size: {arg.size()}")
    return "\n".join(lines) + "\n"


def argument_tree(arg: InstrumentalArgument):
    """ One line per partial plan, children indented under their parent. """
    lines = []

    def walk(node, depth):
        pad = "  " * depth
        if isinstance(node, Leaf):
            lines.append(f"{pad}{node.conclusion} [{node.kind.value}]")
            return
        lines.append(f"{pad}{node.claim} [{node.id}]")
        for child in node.children:
            walk(child, depth + 1)

    walk(arg, 0)
    return "\n".join(lines) + "\n"


def arguments_tree(store):
    return "".join(argument_tree(arg) + "\n" for arg in store).rstrip("\n") + "\n"


def argument_dot(arg: InstrumentalArgument):
    """ A node per partial plan and an edge from each parent to its children. """
    lines = [f"digraph {_quote(arg.id)} {{", "  node [shape=box, fontsize=10];"]
    counter = 0

    def walk(node):
        nonlocal counter
        counter += 1
        name = f"n{counter}"
        if isinstance(node, Leaf):
            lines.append(f"  {name} [label={_quote(node.conclusion)}, style=rounded];")
        else:
            lines.append(f"  {name} [label={_quote(_two_lines(node.claim, node.id))}];")
            for child in node.children:
                lines.append(f"  {name} -> {walk(child)};")
        return name

    walk(arg)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _witness_text(witnesses):
    return "; ".join(f"{w.kind.value} {w}" for w in witnesses)


def relation_report(relation, store=None):
    lines = [f"kind: {relation.kind.value}", f"edges: {len(relation)}"]
    claims = {arg.id: arg.claim for arg in store} if store is not None else {}
    for a, b in relation.pairs():
        names = f"{a} -> {b}"
        if claims:
            names += f" ({claims[a]} -> {claims[b]})"
        lines.append(f"  {names}: {_witness_text(relation.witnesses(a, b))}")
    return "\n".join(lines) + "\n"


def relation_dot(relation, store):
    lines = [f"digraph {_quote(relation.kind.value)} {{", "  node [shape=ellipse, fontsize=10];"]
    for arg in store:
        lines.append(f"  {_quote(arg.id)} [label={_quote(_two_lines(arg.claim, arg.id))}];")
    for a, b in relation.pairs():
        label = relation.kind.code + ": " + _witness_text(relation.witnesses(a, b))
        lines.append(f"  {_quote(a)} -> {_quote(b)} [label={_quote(label)}, fontsize=8];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _edge_kinds(fw, edge):
    kinds = getattr(fw, "kinds", {}).get(edge, ())
    return "".join(sorted(k.code for k in kinds if k is not AttackKind.GENERAL))


def framework_report(fw):
    lines = [
        f"level: {fw.level.value}",
        f"filtered: {str(fw.filtered).lower()}",
        f"nodes: {len(fw.nodes)}",
    ]
    lines.extend(f"  {node_name(fw, n)}" for n in sorted(fw.nodes, key=str))
    lines.append(f"edges: {len(fw.edges)}")
    for edge in sorted(fw.edges, key=lambda e: (str(e[0]), str(e[1]))):
        text = f"  {edge[0]} -> {edge[1]}"
        kinds = _edge_kinds(fw, edge)
        if kinds:
            text += f" [{kinds}]"
        lines.append(text)
    return "\n".join(lines) + "\n"


def framework_dot(fw):
    """ Solid edges for mutual attacks, dashed for one-directional ones. """
    lines = ["digraph framework {", "  node [shape=ellipse, fontsize=10];"]
    for node in sorted(fw.nodes, key=str):
        lines.append(f"  {_quote(node)} [label={_quote(node_name(fw, node))}];")
    for a, b in sorted(fw.edges, key=lambda e: (str(e[0]), str(e[1]))):
        style = "solid" if (b, a) in fw.edges else "dashed"
        attrs = [f"style={style}"]
        kinds = _edge_kinds(fw, (a, b))
        if kinds:
            attrs.append(f"label={_quote(kinds)}")
        lines.append(f"  {_quote(a)} -> {_quote(b)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def extensions_report(name, extensions):
    lines = [f"semantics: {name}", f"extensions: {len(extensions)}"]
    lines.extend(f"  {e}" for e in extensions)
    return "\n".join(lines) + "\n"


def _goals(goals):
    return "{" + ", ".join(sorted(str(g) for g in goals)) + "}"


def selection_report(result, notes=None):
    lines = [
        f"level: {result.level.value}",
        f"policy: {result.policy.first_criterion.value}",
        f"conflict-free: {len(result.metrics)}",
    ]
    for m in result.metrics:
        lines.append(f"  {m.extension} goals={m.goal_count} utility={m.utility}")
    lines.append("trace:")
    for stage in result.trace:
        lines.append(f"  {stage.name}: kept {len(stage.survivors)}, eliminated {len(stage.eliminated)}")
        lines.extend(f"    - {e}" for e in stage.eliminated)
    lines.append(f"selected: {len(result.proper_extensions)}")
    for extension, goals in zip(result.proper_extensions, result.compatible_goal_sets):
        m = result.metrics_for(extension)
        lines.append(f"  {extension} goals={m.goal_count} utility={m.utility}")
        lines.append(f"    compatible goals: {_goals(goals)}")
    if notes is not None:
        lines.append(f"reference: {len(notes)} note(s)")
        lines.extend(f"  note: {note}" for note in notes)
    return "\n".join(lines) + "\n"


def postulate_report(report):
    lines = [f"checks: {len(report.checks)}", f"failed: {len(report.failures())}"]
    for check in report.checks:
        verdict = "pass" if check.passed else "FAIL"
        lines.append(f"  {check.postulate} {check.subject}: {verdict}")
        lines.extend(f"    {w}" for w in check.witnesses)
    return "\n".join(lines) + "\n"
