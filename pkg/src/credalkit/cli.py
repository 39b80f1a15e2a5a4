"""Command-line front end.

Every command reads a scenario (a file path or a built-in name), runs one
operation, prints a text report to stdout (or the JSON payload with
``--format json``), and optionally writes the JSON payload to ``--out``.
JSON output is byte-stable: rerunning the same command on the same inputs
produces identical bytes.

Exit codes: 0 success; 2 invalid input (bad scenario, bad flags, undefined
conditioning); 3 a solver could not certify its result; 4 a documented size
limit was exceeded.
"""

import argparse
import json
import sys

import numpy as np

from .core import DecisionRule, Event
from .credal import (
    build_hull,
    credal_equal,
    credal_condition,
    credal_marginal_y,
    credal_subset,
    detect_dilation,
)
from .decision import (
    apriori_minimax,
    aposteriori_minimax,
    check_conditioning_optimal,
    check_ignoring_optimal,
    walley_compare,
)
from .errors import (
    CertificateError,
    CredalkitError,
    NumericalError,
    SizeLimitError,
    ValidationError,
)
from .games import (
    solve_commitment_game,
    solve_observation_game,
    time_inconsistency_report,
)
from .numerics import backend_name
from .scenario import builtin_names, load_builtin, load_update_table, resolve_scenario
from .updating import (
    Partition,
    c_conditioning,
    check_calibration,
    rule_from_update,
    sharp_search,
    vacuous_table,
)

SCHEMA_VERSION = 1


def _fmt(x):
    if x is None:
        return "-"
    return f"{x:.6g}"


def _dist(labels, vec):
    return ", ".join(f"{lab}: {_fmt(v)}" for lab, v in zip(labels, vec))


def _rule_lines(space, table, indent="  "):
    return [
        f"{indent}{x} -> {_dist(space.a_labels, table[i])}"
        for i, x in enumerate(space.x_labels)
    ]


def parse_event(space, text):
    """Event grammar: 'X=lab1,lab2', 'Y=lab1,lab2', or 'cells=x:y,x:y'."""
    if "=" not in text:
        raise ValidationError(
            f"cannot parse event {text!r}; use 'X=labels', 'Y=labels', or 'cells=x:y,...'"
        )
    head, _, body = text.partition("=")
    head = head.strip()
    labels = [tok.strip() for tok in body.split(",") if tok.strip()]
    if not labels:
        raise ValidationError(f"event {text!r} names no labels")
    if head == "X":
        return Event.x_in(space, labels)
    if head == "Y":
        return Event.y_in(space, labels)
    if head == "cells":
        pairs = []
        for tok in labels:
            x, sep, y = tok.partition(":")
            if not sep:
                raise ValidationError(f"cell {tok!r} must look like x:y")
            pairs.append((x.strip(), y.strip()))
        return Event.from_pairs(space, pairs)
    raise ValidationError(f"unknown event variable {head!r}; use X, Y, or cells")


def parse_rule(space, text):
    """A rule is a JSON file path or inline 'x:action;x:action' pairs."""
    import os

    if os.path.exists(text):
        with open(text, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        table = np.zeros((space.nx, space.na))
        for x, spec in data.items():
            ix = space.x_index(x)
            if isinstance(spec, str):
                table[ix, space.a_index(spec)] = 1.0
            else:
                for a, w in spec.items():
                    table[ix, space.a_index(a)] = float(w)
        return DecisionRule(space, table)
    mapping = {}
    for tok in text.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        x, sep, a = tok.partition(":")
        if not sep:
            raise ValidationError(f"rule chunk {tok!r} must look like x:action")
        mapping[x.strip()] = a.strip()
    return DecisionRule.deterministic(space, mapping)


def _load(args):
    if not getattr(args, "scenario", None):
        raise ValidationError("this command needs --scenario NAME_OR_PATH")
    return resolve_scenario(args.scenario)


def _payload(args, scenario, result):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "scenario": scenario.name if scenario else None,
        "tolerance": getattr(args, "tolerance", None),
        "backend": backend_name(),
        "result": result,
    }


def cmd_solve_apriori(args):
    sc = _load(args)
    res = apriori_minimax(sc.credal_set, sc.loss)
    lines = [
        f"scenario: {sc.name}",
        f"worst-case optimal rule (committed before observing), value {_fmt(res.value)}:",
        *_rule_lines(sc.space, res.rule.table),
        f"worst-case vertices: {list(res.worst_case_vertices)}",
        f"adversary mixture over vertices: {np.round(res.vertex_duals, 6).tolist()}",
    ]
    return _payload(args, sc, res.as_dict(sc.space)), lines


def cmd_solve_aposteriori(args):
    sc = _load(args)
    res = aposteriori_minimax(sc.credal_set, sc.loss)
    lines = [
        f"scenario: {sc.name}",
        "per-observation worst-case optimal rule:",
        *_rule_lines(sc.space, res.rule.table),
        "per-observation values: "
        + ", ".join(f"{x}: {_fmt(v)}" for x, v in res.per_x_values.items()),
        f"worst case of this rule over the whole set: {_fmt(res.value)}",
    ]
    if res.unconstrained_x:
        lines.append(f"uniform rows at unreachable observations: {list(res.unconstrained_x)}")
    return _payload(args, sc, res.as_dict(sc.space)), lines


def cmd_solve_game(args):
    sc = _load(args)
    if args.observe is not None:
        eq, cert = solve_observation_game(sc.credal_set, sc.loss, args.observe, tol=args.tolerance)
        ix = sc.space.x_index(args.observe)
        head = [
            f"scenario: {sc.name}",
            f"one-shot game after observing {args.observe!r}: value {_fmt(eq.value)}",
            f"agent action distribution: {_dist(sc.space.a_labels, eq.agent.table[ix])}",
        ]
    else:
        eq, cert = solve_commitment_game(sc.credal_set, sc.loss, tol=args.tolerance)
        head = [
            f"scenario: {sc.name}",
            f"commitment game: value {_fmt(eq.value)}",
            "agent rule:",
            *_rule_lines(sc.space, eq.agent.table),
        ]
    lines = head + [
        "bookie mixture: "
        + ", ".join(
            f"vertex {j}: {_fmt(w)}"
            for j, w in zip(eq.bookie.vertex_indices, eq.bookie.weights)
        ),
        f"aggregate joint: {np.round(eq.aggregate.weights, 6).tolist()}",
        f"equality chain: {[round(q, 9) for q in cert.chain_values]}",
        f"certificate: max residual {cert.max_residual:.3g} "
        f"(tolerance {args.tolerance:.3g}) -> PASS",
    ]
    result = {
        "equilibrium": eq.as_dict(),
        "certificate": cert.as_dict(),
        "certificate_passes": True,
    }
    return _payload(args, sc, result), lines


def cmd_condition(args):
    sc = _load(args)
    event = parse_event(sc.space, args.on)
    cond = credal_condition(sc.credal_set, event)
    my = credal_marginal_y(cond)
    lines = [
        f"scenario: {sc.name}",
        f"conditioned on {args.on}: {cond.n_vertices} extreme joints",
        *(f"  {np.round(v.weights, 6).tolist()}" for v in cond.vertices),
        f"conditional outcome marginal set ({my.n_vertices} vertices):",
        *(f"  {_dist(sc.space.y_labels, v)}" for v in my.vertices),
    ]
    for note in cond.notes:
        lines.append(f"note: {note}")
    result = {
        "event": args.on,
        "vertices": cond.flat.tolist(),
        "outcome_marginal_vertices": my.vertices.tolist(),
        "notes": list(cond.notes),
    }
    return _payload(args, sc, result), lines


def cmd_hull(args):
    sc = _load(args)
    p = sc.credal_set
    hull = build_hull(p)
    equal = credal_equal(p, hull)
    lines = [
        f"scenario: {sc.name}",
        f"set vertices: {p.n_vertices}; recombination hull vertices: {hull.n_vertices}",
        f"set equals its hull: {equal}",
        "(the hull always contains the set; equality means marginal plus "
        "per-observation conditional information pins the set down)",
    ]
    result = {
        "set_vertices": p.flat.tolist(),
        "hull_vertices": hull.flat.tolist(),
        "equal": equal,
        "subset": credal_subset(p, hull),
    }
    return _payload(args, sc, result), lines


def cmd_check_conditioning(args):
    sc = _load(args)
    rep = check_conditioning_optimal(sc.credal_set, sc.loss, tol=args.tolerance)
    lines = [
        f"scenario: {sc.name}",
        f"verdict: {rep.verdict}",
        f"set equals recombination hull: {rep.hull_equal}",
        f"every member reaches every observation: {rep.full_support}",
        f"commitment value {_fmt(rep.apriori.value)}; per-observation worst "
        f"case of that rule vs per-observation optimum, largest gap {_fmt(rep.max_gap)}",
    ]
    return _payload(args, sc, rep.as_dict(sc.space)), lines


def cmd_check_ignoring(args):
    sc = _load(args)
    rep = check_ignoring_optimal(
        sc.credal_set, sc.loss, tol=args.tolerance, seed=args.seed
    )
    lines = [
        f"scenario: {sc.name}",
        f"product-extension condition: {rep.verdict}"
        + (f" (witness: outcome vertex {rep.witness_vertex})" if rep.witness_vertex is not None else ""),
        f"best observation-ignoring rule: {_dist(sc.space.a_labels, rep.ignoring_rule.table[0])}",
        f"its worst case {_fmt(rep.ignoring_value)} vs commitment value {_fmt(rep.apriori_value)}"
        f" -> ignoring optimal: {rep.is_optimal}",
        f"one-shot value against the outcome marginal set: {_fmt(rep.marginal_value)} "
        f"(identity residual {rep.identity_residual:.3g})",
    ]
    return _payload(args, sc, rep.as_dict(sc.space)), lines


def cmd_detect_dilation(args):
    sc = _load(args)
    rep = detect_dilation(sc.credal_set)
    lines = [f"scenario: {sc.name}", f"any dilation: {rep.any_dilation}"]
    for cell in rep.cells:
        if not cell.defined:
            lines.append(f"  x={cell.x}: conditional undefined")
            continue
        lines.append(
            f"  x={cell.x}: dilates={cell.dilates} "
            f"(superset={cell.is_superset}, escape residual {_fmt(cell.escape_residual)})"
        )
    return _payload(args, sc, rep.as_dict()), lines


def cmd_c_condition(args):
    sc = _load(args)
    part = Partition.parse(sc.space, args.partition)
    table = c_conditioning(sc.credal_set, part)
    rule = rule_from_update(table, sc.loss)
    lines = [
        f"scenario: {sc.name}",
        f"partition: {part}",
        "entries (per observation):",
    ]
    entries_out = {}
    for x in sc.space.x_labels:
        entry = table.entries[x]
        if entry is None:
            lines.append(f"  {x}: undefined (cell has no mass under any member)")
            entries_out[x] = None
            continue
        my = credal_marginal_y(entry)
        lines.append(
            f"  {x}: {entry.n_vertices} extreme joints; outcome marginal vertices: "
            + "; ".join(_dist(sc.space.y_labels, v) for v in my.vertices)
        )
        entries_out[x] = {
            "vertices": entry.flat.tolist(),
            "outcome_marginal_vertices": my.vertices.tolist(),
        }
    lines.append("worst-case optimal rule against these entries:")
    lines.extend(_rule_lines(sc.space, rule.table))
    result = {
        "partition": str(part),
        "provenance": table.provenance,
        "entries": entries_out,
        "rule": {x: rule.table[i].tolist() for i, x in enumerate(sc.space.x_labels)},
    }
    return _payload(args, sc, result), lines


def _table_for_calibration(args, sc):
    if args.vacuous:
        return vacuous_table(sc.credal_set), "vacuous"
    if args.table:
        return load_update_table(args.table, sc.space), f"external:{args.table}"
    part = Partition.parse(sc.space, args.partition) if args.partition else Partition.singletons(sc.space)
    return c_conditioning(sc.credal_set, part), f"cell-conditioning:{part}"


def cmd_check_calibration(args):
    sc = _load(args)
    table, desc = _table_for_calibration(args, sc)
    rep = check_calibration(sc.credal_set, table, tol=args.tolerance)
    lines = [
        f"scenario: {sc.name}",
        f"table: {desc}",
        f"calibrated: {rep.calibrated}",
        f"classes: {[list(c.xs) for c in rep.classes]}",
    ]
    for v in rep.violations:
        lines.append(
            f"  violation: member {v.vertex_index} conditioned on class "
            f"{list(rep.classes[v.class_index].xs)} leaves the class set by {v.residual:.3g}"
        )
    if rep.skipped:
        lines.append(f"skipped zero-mass (member, class) pairs: {list(rep.skipped)}")
    if rep.undefined_x:
        lines.append(f"undefined at: {list(rep.undefined_x)}")
    result = dict(rep.as_dict(), table=desc)
    return _payload(args, sc, result), lines


def cmd_sharp_search(args):
    sc = _load(args)
    res = sharp_search(sc.credal_set)
    lines = [
        f"scenario: {sc.name}",
        f"candidates (all partitions): {[str(p) for p, _ in res.candidates]}",
        f"sharpest (no strictly narrower candidate): "
        f"{[str(res.candidates[i][0]) for i in res.minimal_indices]}",
        "pairwise relations:",
    ]
    for i, row in enumerate(res.relation_matrix):
        lines.append(f"  {str(res.candidates[i][0])}: {list(row)}")
    calibrated = {}
    for i in res.minimal_indices:
        part, table = res.candidates[i]
        calibrated[str(part)] = check_calibration(sc.credal_set, table, tol=args.tolerance).calibrated
    lines.append(f"calibration of the sharpest tables: {calibrated}")
    result = dict(res.as_dict(), minimal_calibrated=calibrated)
    return _payload(args, sc, result), lines


def cmd_time_inconsistency(args):
    sc = _load(args)
    rep = time_inconsistency_report(sc.credal_set, sc.loss, tol=args.tolerance)
    lines = [
        f"scenario: {sc.name}",
        f"inconsistent: {rep.inconsistent}",
        f"commitment value {_fmt(rep.apriori.value)}; "
        f"per-observation rule's worst case {_fmt(rep.aposteriori.value)} "
        f"(gap {_fmt(rep.global_gap)})",
        f"largest rule disagreement (total variation): {_fmt(rep.max_tv)}",
        f"largest conditional optimality gap of the commitment rule: {_fmt(rep.max_gap)}",
    ]
    for cell in rep.per_x:
        if cell.defined:
            lines.append(
                f"  x={cell.x}: tv={_fmt(cell.tv_distance)}, commitment row worst "
                f"{_fmt(cell.commitment_row_worst)}, per-observation value "
                f"{_fmt(cell.observation_value)}"
            )
        else:
            lines.append(f"  x={cell.x}: unreachable")
    for note in rep.notes:
        lines.append(f"note: {note}")
    return _payload(args, sc, rep.as_dict(sc.space)), lines


def cmd_compare_rules(args):
    sc = _load(args)
    r1 = parse_rule(sc.space, args.rule1)
    r2 = parse_rule(sc.space, args.rule2)
    cmp = walley_compare(r1, r2, sc.credal_set, sc.loss)
    from .core import expected_loss

    worst1 = max(expected_loss(v, r1, sc.loss) for v in sc.credal_set.vertices)
    worst2 = max(expected_loss(v, r2, sc.loss) for v in sc.credal_set.vertices)
    lines = [
        f"scenario: {sc.name}",
        "rule 1:",
        *_rule_lines(sc.space, r1.table),
        "rule 2:",
        *_rule_lines(sc.space, r2.table),
        f"relation: {cmp.relation} "
        f"(max E[L1-L2] = {_fmt(cmp.s12)}, max E[L2-L1] = {_fmt(cmp.s21)})",
        f"worst cases: rule 1 {_fmt(worst1)}, rule 2 {_fmt(worst2)}",
    ]
    result = {
        "comparison": cmp.as_dict(),
        "rule1": {x: r1.table[i].tolist() for i, x in enumerate(sc.space.x_labels)},
        "rule2": {x: r2.table[i].tolist() for i, x in enumerate(sc.space.x_labels)},
        "worst_case_rule1": worst1,
        "worst_case_rule2": worst2,
    }
    return _payload(args, sc, result), lines


def cmd_examples(args):
    if args.name:
        sc = load_builtin(args.name)
        payload = _payload(args, sc, sc.to_dict())
        return payload, [json.dumps(sc.to_dict(), indent=2, sort_keys=True)]
    lines = ["built-in scenarios:"]
    listing = {}
    for name in builtin_names():
        sc = load_builtin(name)
        lines.append(f"  {name}: {sc.description}")
        listing[name] = sc.description
    return _payload(args, None, listing), lines


COMMANDS = {
    "solve-apriori": cmd_solve_apriori,
    "solve-aposteriori": cmd_solve_aposteriori,
    "solve-game": cmd_solve_game,
    "condition": cmd_condition,
    "hull": cmd_hull,
    "check-conditioning": cmd_check_conditioning,
    "check-ignoring": cmd_check_ignoring,
    "detect-dilation": cmd_detect_dilation,
    "c-condition": cmd_c_condition,
    "check-calibration": cmd_check_calibration,
    "sharp-search": cmd_sharp_search,
    "time-inconsistency": cmd_time_inconsistency,
    "compare-rules": cmd_compare_rules,
    "examples": cmd_examples,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="credalkit",
        description="Worst-case decisions, games, and updating over credal sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, scenario=True):
        p = sub.add_parser(name, help=help_text)
        if scenario:
            p.add_argument("--scenario", required=True, help="scenario file path or built-in name")
        p.add_argument("--out", help="write the JSON payload to this file")
        p.add_argument("--tolerance", type=float, default=1e-6,
                       help="tolerance for certificates and verdicts (default 1e-6)")
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="stdout format (default text)")
        return p

    add("solve-apriori", "best single rule committed before observing")
    add("solve-aposteriori", "condition on each observation, then act")
    g = add("solve-game", "equilibrium of the bookie-vs-agent game, with certificate")
    g.add_argument("--observe", help="solve the one-shot game after this observation")
    c = add("condition", "condition the credal set on an event")
    c.add_argument("--on", required=True, help="event, e.g. 'X=h' or 'Y=1,2' or 'cells=h:t'")
    add("hull", "recombine marginal and conditional information; compare with the set")
    add("check-conditioning", "does conditioning reproduce the commitment answer?")
    i = add("check-ignoring", "can a rule that ignores the observation be optimal?")
    i.add_argument("--seed", type=int, default=0, help="seed for interior-point sampling")
    add("detect-dilation", "find observations that strictly widen the outcome set")
    cc = add("c-condition", "condition on the cells of a partition")
    cc.add_argument("--partition", required=True, help="partition, e.g. 'a,b;c'")
    cal = add("check-calibration", "verify an update table against its level sets")
    cal.add_argument("--partition", help="build the table by conditioning on this partition")
    cal.add_argument("--vacuous", action="store_true", help="check the vacuous table")
    cal.add_argument("--table", help="external table JSON file")
    add("sharp-search", "enumerate all partitions, keep the sharpest tables")
    add("time-inconsistency", "compare commitment and per-observation answers")
    cr = add("compare-rules", "robust pairwise preference between two rules")
    cr.add_argument("--rule1", required=True, help="rule file or inline 'x:a;x:a'")
    cr.add_argument("--rule2", required=True, help="rule file or inline 'x:a;x:a'")
    e = add("examples", "list built-in scenarios or print one", scenario=False)
    e.add_argument("name", nargs="?", help="print this built-in scenario as JSON")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, lines = COMMANDS[args.command](args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (CertificateError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CredalkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    blob = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.format == "json":
        sys.stdout.write(blob)
    else:
        for line in lines:
            print(line)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(blob)
    return 0


if __name__ == "__main__":
    sys.exit(main())
