"""Command-line entry point.

Exit codes: 0 success, 2 bad arguments, 3 derived table differs from the
published one (``tables --check-paper``) or a session failed to decode.
"""
from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from pathlib import Path
from typing import Sequence

from . import metrics, protocol, security, states
from .protocol import Party, Protocol

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISMATCH = 3


class UsageError(Exception):
    pass


def _message(text: str) -> protocol.Message2:
    try:
        return protocol.Message2.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _party(text: str) -> Party:
    try:
        party = Party.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if party not in protocol.CONTROLLERS:
        raise argparse.ArgumentTypeError(f"{text!r} is not a controller (C1, C2, C3)")
    return party


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# tables


def _row_dict(key, msg) -> dict:
    if isinstance(key, protocol.ClusterKey):
        return {"alice": key.alice, "bob": key.bob, "charlie": key.charlie, "message": str(msg)}
    return {"alice": key.alice.symbol, "controllers": key.controllers, "message": str(msg)}


def _row_text(key, msg) -> str:
    if isinstance(key, protocol.ClusterKey):
        return f"{key.alice:<6}{key.bob:<5}{key.charlie:<9}{msg}"
    return f"{key.alice.symbol:<7}{key.controllers:<6}{msg}"


def cmd_tables(args) -> int:
    proto = Protocol.parse(args.protocol)
    derived = protocol.derive_decode_table(proto)
    rows = derived.rows()
    header = "alice bob  charlie  message" if proto is Protocol.CLUSTER else "alice  abc   message"
    lines = [f"{proto.value} decode table (derived, {len(rows)} rows)", header]
    lines += [_row_text(k, m) for k, m in rows]
    payload = {"protocol": proto.value, "rows": [_row_dict(k, m) for k, m in rows]}
    code = EXIT_OK
    if args.check_paper:
        published = protocol.published_table(proto)
        diff = protocol.diff_tables(derived, published)
        matched = len(rows) - len(diff)
        payload["check"] = {
            "matched": matched,
            "total": len(rows),
            "diff": [
                {
                    "key": str(d.key),
                    "derived": str(d.derived) if d.derived else None,
                    "published": str(d.published) if d.published else None,
                }
                for d in diff
            ],
        }
        lines.append("")
        lines.append(f"{matched}/{len(rows)} rows match the published table")
        if diff:
            lines.append(f"{len(diff)} rows differ (key: derived vs published):")
            lines += [f"  {d.key}: {d.derived} vs {d.published}" for d in diff]
            code = EXIT_MISMATCH
    _emit(args, payload, "\n".join(lines))
    return code


# ---------------------------------------------------------------------------
# run


def _transcript_text(t: protocol.Transcript, seed: int) -> str:
    lines = [f"{t.protocol.value} session, secret {t.secret}, seed {seed}"]
    if t.protocol is Protocol.BROWN:
        lines.append(f"recipient {t.recipient.value}, permitter {t.permitter.value}")
    lines.append("measurements:")
    for r in t.records:
        lines.append(f"  {r.party.value:<9} {','.join(r.qubits):<6} {r.basis:<14} {r.outcome:<5} p={r.probability:g}")
    lines.append("classical channel:")
    for m in t.classical:
        lines.append(
            f"  {m.sender.value:>9} -> {m.receiver.value:<9} {m.purpose.value:<15} {m.payload}"
            f"  ({m.bit_cost} bit{'s' if m.bit_cost != 1 else ''})"
        )
    lines.append(f"transmitted classical bits: {t.transmitted_bits}")
    lines.append(f"decoded: {t.decoded}  ({'ok' if t.decoded == t.secret else 'MISMATCH'})")
    return "\n".join(lines)


def cmd_run(args) -> int:
    proto = Protocol.parse(args.protocol)
    seed = getattr(args, "seed", None)
    if seed is None:
        if args.format == "json":
            raise UsageError("--seed is required with --format json")
        seed = random.SystemRandom().randrange(2**32)
    rng = random.Random(seed)
    if proto is Protocol.CLUSTER:
        t = protocol.run_cluster(args.message, rng)
    else:
        if args.recipient is args.permitter:
            raise UsageError("recipient and permitter must be different controllers")
        t = protocol.run_brown(args.message, args.recipient, args.permitter, rng, broadcast=args.broadcast)
    payload = t.to_dict()
    payload["seed"] = seed
    _emit(args, payload, _transcript_text(t, seed))
    return EXIT_OK if t.decoded == t.secret else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# audit


def _report_text(r: security.SecurityReport) -> str:
    lines = [
        f"view {r.view.name}: {r.view.description}",
        f"visible: {', '.join(r.view.fields)}",
        f"I = {r.mutual_information_bits:.3f} bit, max guess {float(r.max_guess_probability):g}, "
        f"determined: {r.determined_bit.value}",
        "P(message | visible):",
    ]
    for visible, dist in sorted(r.conditionals.items()):
        probs = "  ".join(f"{m}:{p}" for m, p in sorted(dist.items()))
        lines.append(f"  {' '.join(visible):<10} {probs}")
    return "\n".join(lines)


def _resolve_views(name: str) -> list[security.AdversaryView]:
    if name == "all":
        return security.published_views()
    try:
        return [security.view_by_name(name)]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_audit(args) -> int:
    reports = [security.audit(v) for v in _resolve_views(args.view)]
    if len(reports) == 1:
        payload = reports[0].to_dict()
    else:
        payload = {"reports": [r.to_dict() for r in reports]}
    _emit(args, payload, "\n\n".join(_report_text(r) for r in reports))
    return EXIT_OK


# ---------------------------------------------------------------------------
# efficiency / state


def cmd_efficiency(args) -> int:
    rows = metrics.comparison_table()
    lines = [f"{'protocol':<22}{'eta1':>8}{'eta2':>8}  {'published':>11}  source"]
    for r in rows:
        lines.append(
            f"{r.name:<22}{r.eta1:>8.4f}{r.eta2:>8.4f}  {r.published_eta1:>5.3g}/{r.published_eta2:<5.3g}  {r.source}"
        )
    _emit(args, {"rows": [r.to_dict() for r in rows]}, "\n".join(lines))
    return EXIT_OK


def cmd_state(args) -> int:
    try:
        named = states.by_label(args.label)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = states.amplitude_table(named, include_zero=args.all)
    lines = [
        f"{named.label}: {named.num_qubits} qubits "
        + " ".join(f"{n}={named.qubit_roles[i]}" for i, n in enumerate(named.qubit_names)),
        f"{'index':>5}  {'ket':<{named.num_qubits + 2}}  {'re':>9}  {'im':>9}",
    ]
    for r in rows:
        lines.append(f"{r['index']:>5}  |{r['bitstring']}>  {r['re']:>9.6f}  {r['im']:>9.6f}")
    payload = {
        "label": named.label,
        "num_qubits": named.num_qubits,
        "qubits": [
            {"position": i, "name": n, "party": named.qubit_roles[i]} for i, n in enumerate(named.qubit_names)
        ],
        "amplitudes": rows,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# report: delimited files plus figures


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def cmd_report(args) -> int:
    from . import plotting

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    rows = metrics.comparison_table()
    written.append(_write_csv(
        out / "efficiency.csv",
        ["protocol", "eta1", "eta2", "published_eta1", "published_eta2", "source"],
        [[r.name, f"{r.eta1:.6f}", f"{r.eta2:.6f}", r.published_eta1, r.published_eta2, r.source] for r in rows],
    ))
    written.append(plotting.efficiency_figure(rows, out / "efficiency.png"))

    mismatches = 0
    for proto in Protocol:
        derived = protocol.derive_decode_table(proto)
        published = protocol.published_table(proto)
        mismatches += len(protocol.diff_tables(derived, published))
        written.append(_write_csv(
            out / f"table_{proto.value}.csv",
            ["key", "derived", "published"],
            [[str(k), str(m), str(published.entries.get(k))] for k, m in derived.rows()],
        ))
        written.append(plotting.table_figure(derived, published, out / f"table_{proto.value}.png"))

    audit_rows = []
    for view in security.published_views():
        r = security.audit(view)
        audit_rows.append([
            view.name, "+".join(view.fields), f"{r.mutual_information_bits:.6f}",
            f"{float(r.max_guess_probability):.6f}", r.determined_bit.value,
        ])
        fname = view.name.replace(":", "")
        written.append(plotting.conditional_figure(r, out / f"audit_{fname}.png"))
    written.append(_write_csv(
        out / "audits.csv",
        ["view", "visible", "mutual_information_bits", "max_guess_probability", "determined_bit"],
        audit_rows,
    ))

    names = sorted(p.name for p in written)
    _emit(args, {"out": str(out), "files": names, "table_mismatches": mismatches},
          "\n".join([f"wrote {len(names)} files to {out}"] + [f"  {n}" for n in names]))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # Shared by the top-level parser and every subcommand, so the flags
    # work on either side of the subcommand name.
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json"), default=default if suppress else "text")
    p.add_argument("--seed", type=int, default=default, help="RNG seed (required for run with --format json)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqsdc",
        description="Simulate, verify and audit the cluster-state and (2,3) Brown-state CQSDC protocols.",
        parents=[_global_options(suppress=False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_options(suppress=True)]

    p = sub.add_parser("tables", parents=common, help="derive a decode table")
    p.add_argument("protocol", choices=[x.value for x in Protocol])
    p.add_argument("--check-paper", action="store_true", help="diff against the published table")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("run", parents=common, help="execute one protocol session")
    p.add_argument("protocol", choices=[x.value for x in Protocol])
    p.add_argument("message", type=_message, help="two-bit secret, e.g. 01")
    p.add_argument("--recipient", type=_party, default=Party.CHARLIE1)
    p.add_argument("--permitter", type=_party, default=Party.CHARLIE2)
    p.add_argument("--broadcast", action="store_true", help="Alice's report goes to every controller")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("audit", parents=common, help="information audit of an adversary view")
    p.add_argument(
        "view",
        help="cluster-bob, cluster-eve, brown-controller:N, brown-eve[:R,P], cluster-full, brown-full, or all",
    )
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("efficiency", parents=common, help="efficiency comparison table")
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("state", parents=common, help="inspect resource states")
    p.add_argument("action", choices=["dump"])
    p.add_argument("label", help="cluster, brown, phi+, phi-, psi+, psi-")
    p.add_argument("--all", action="store_true", help="include zero amplitudes")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("report", parents=common, help="write CSV tables and PNG figures")
    p.add_argument("--out", default="report")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, protocol.SamePartyError) as exc:
        print(f"cqsdc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
