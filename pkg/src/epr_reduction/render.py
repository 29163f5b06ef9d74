"""Plain-text tables for the CLI's ``--output table`` mode."""
from __future__ import annotations


def _num(x) -> str:
    return "-" if x is None else f"{x:.12g}"


def _fixed(x) -> str:
    return "-" if x is None else f"{x:.12f}"


def _violations(validation: dict) -> list[str]:
    if validation["ok"]:
        lines = ["validation: ok"]
        for pair in validation.get("boundary_cases", []):
            lines.append(f"  boundary case (lightlike): {pair[0]} -> {pair[1]}")
        return lines
    lines = [f"validation: INVALID ({len(validation['violations'])} violation(s))"]
    for v in validation["violations"]:
        lines.append(f"  {v['kind']}: {v['detail']}")
    return lines


def validation_table(validation: dict) -> str:
    return "\n".join(_violations(validation)) + "\n"


def orderings_table(orderings: list, truncated: bool) -> str:
    lines = [f"{len(orderings)} causally consistent ordering(s){' (truncated)' if truncated else ''}"]
    lines += ["  " + " -> ".join(order) for order in orderings]
    return "\n".join(lines) + "\n"


def frame_table(frame: dict) -> str:
    vx, vy, vz = frame["velocity"]
    lines = [f"frame velocity ({vx:.6g}, {vy:.6g}, {vz:.6g})  gamma {frame['gamma']:.6g}"]
    lines.append(f"  {'event':<8}{'t':>14}{'x':>14}{'y':>14}{'z':>14}")
    for e in frame["events"]:
        lines.append(f"  {e['label']:<8}{e['t']:>14.6g}{e['x']:>14.6g}{e['y']:>14.6g}{e['z']:>14.6g}")
    lines.append("  lab order:   " + " -> ".join(frame["lab_order"]))
    lines.append("  frame order: " + " -> ".join(frame["test_order"]))
    for a, b in frame["flipped_pairs"]:
        lines.append(f"  order flipped: {a} before {b} in the lab, not in this frame")
    for r in frame["reversing_frames"]:
        a, b = r["pair"]
        v = ", ".join(f"{c:.6g}" for c in r["velocity"])
        lines.append(f"  spacelike pair {a},{b}: reversed in frame v = ({v})")
    return "\n".join(lines) + "\n"


def sweep_table(sweep: dict) -> str:
    lines = [f"correlation sweep, axis {sweep['axis']}, rotation towards {sweep['plane_axis']}"]
    for w in sweep["warnings"]:
        lines.append(f"  warning: {w} (initial state is not the singlet; reference omitted)")
    lines.append(f"  {'theta':>10}{'E(a,b)':>18}{'-cos(theta)':>18}")
    for row in sweep["rows"]:
        lines.append(f"  {row['theta']:>10.6f}{row['correlation']:>18.12f}{_fixed(row.get('reference')):>18}")
    return "\n".join(lines) + "\n"


def report_table(report: dict) -> str:
    lines = _violations(report["validation"])
    if not report["validation"]["ok"]:
        return "\n".join(lines) + "\n"
    lines.append(f"mode: {report['mode']}")
    for o in report["orderings"]:
        lines.append("ordering " + " -> ".join(o["order"]))
        for row in o["distribution"]:
            lines.append(f"  {' '.join(row['outcomes'])}  {row['probability']:.12f}")
    if report["truncated"]:
        lines.append("orderings truncated")
    sampler = report.get("sampler")
    if sampler:
        lines.append(
            f"sampler: {sampler['samples']} samples, seed {sampler['seed']}, order {' -> '.join(sampler['order'])}"
        )
        lines.append(f"  generator: {sampler['generator']}")
        lines.append(f"  {'outcomes':<12}{'freq':>12}{'exact':>12}{'std err':>12}")
        for row in sampler["rows"]:
            lines.append(
                f"  {' '.join(row['outcomes']):<12}{row['frequency']:>12.6f}{row['exact']:>12.6f}"
                f"{row['standard_error']:>12.6f}"
            )
        lines.append(f"  max |freq - exact| = {sampler['max_abs_deviation']:.6g}")
    for q in report["queries"]:
        line = f"{q['query']} = {_num(q['probability'])}"
        if q["error"]:
            line += f"  [{q['error']}]"
        lines.append(line)
        for w in q["warnings"]:
            lines.append(f"  warning: {w['detail']}")
    text = "\n".join(lines) + "\n"
    if report.get("frame"):
        text += frame_table(report["frame"])
    return text
