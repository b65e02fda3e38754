"""Machine-readable reports (CSV, JSON) and static SVG figures."""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .errors import EmptyReport, ParseError
from .pipeline import PointRecord, RunReport

CSV_HEADER = "param,K,K_cl,K_q1,K_q2,negativity,lgi_violated,mrps_violated"
QPD_HEADER = "param,delta,weight,kind"


def _fmt(x: float) -> str:
    # 17 significant digits: lossless round trip for doubles
    return format(float(x), ".17g")


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def qpd_sibling_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + "_qpd" + (p.suffix or ".csv"))


def emit_csv(report: RunReport, path) -> Path:
    """Write the per-point table plus a sibling `<stem>_qpd` file."""
    if not report.records:
        raise EmptyReport("cannot emit an empty report")
    path = Path(path)
    lines = [CSV_HEADER]
    for r in report.records:
        lines.append(
            ",".join(
                [
                    _fmt(r.param),
                    _fmt(r.k),
                    _fmt(r.k_cl),
                    _fmt(r.k_q1),
                    _fmt(r.k_q2),
                    _fmt(r.negativity),
                    _fmt_bool(r.lgi_violated),
                    _fmt_bool(r.mrps_violated),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    qpd_lines = [QPD_HEADER]
    for r in report.records:
        for delta, weight, kind in r.qpd:
            qpd_lines.append(
                ",".join([_fmt(r.param), _fmt(delta), _fmt(weight), kind])
            )
    qpd_sibling_path(path).write_text("\n".join(qpd_lines) + "\n", encoding="utf-8")
    return path


def emit_json(report: RunReport, path) -> Path:
    """JSON mirror of the CSV content, one object per point."""
    if not report.records:
        raise EmptyReport("cannot emit an empty report")
    path = Path(path)
    doc = {
        "config_digest": report.config_digest,
        "version": report.version,
        "records": [
            {
                "param": r.param,
                "K": r.k,
                "K_cl": r.k_cl,
                "K_q1": r.k_q1,
                "K_q2": r.k_q2,
                "negativity": r.negativity,
                "lgi_violated": r.lgi_violated,
                "mrps_violated": r.mrps_violated,
                "qpd": [
                    {"delta": d, "weight": w, "kind": kind} for d, w, kind in r.qpd
                ],
            }
            for r in report.records
        ],
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_report(path) -> RunReport:
    """Read back a report written by emit_csv or emit_json."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        records = tuple(
            PointRecord(
                param=r["param"],
                k=r["K"],
                k_cl=r["K_cl"],
                k_q1=r["K_q1"],
                k_q2=r["K_q2"],
                negativity=r["negativity"],
                lgi_violated=r["lgi_violated"],
                mrps_violated=r["mrps_violated"],
                qpd=tuple((q["delta"], q["weight"], q["kind"]) for q in r["qpd"]),
            )
            for r in doc["records"]
        )
        return RunReport(
            records=records,
            config_digest=doc.get("config_digest", ""),
            version=doc.get("version", ""),
            wall_time=0.0,
        )
    return _load_csv(path)


def _load_csv(path: Path) -> RunReport:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ParseError(f"{path}: unexpected CSV header")
    qpd_by_param: dict = {}
    sibling = qpd_sibling_path(path)
    if sibling.exists():
        qlines = sibling.read_text(encoding="utf-8").splitlines()
        if not qlines or qlines[0] != QPD_HEADER:
            raise ParseError(f"{sibling}: unexpected CSV header")
        for line in qlines[1:]:
            param, delta, weight, kind = line.split(",")
            qpd_by_param.setdefault(float(param), []).append(
                (float(delta), float(weight), kind)
            )
    records = []
    for line in lines[1:]:
        cols = line.split(",")
        if len(cols) != 8:
            raise ParseError(f"{path}: malformed row {line!r}")
        param = float(cols[0])
        records.append(
            PointRecord(
                param=param,
                k=float(cols[1]),
                k_cl=float(cols[2]),
                k_q1=float(cols[3]),
                k_q2=float(cols[4]),
                negativity=float(cols[5]),
                lgi_violated=cols[6] == "true",
                mrps_violated=cols[7] == "true",
                qpd=tuple(qpd_by_param.get(param, ())),
            )
        )
    return RunReport(
        records=tuple(records), config_digest="", version="", wall_time=0.0
    )


def _total_qpd(record: PointRecord):
    """Collapse the classical/quantum rows into total weight per delta."""
    totals: dict = {}
    for delta, weight, _ in record.qpd:
        totals[delta] = totals.get(delta, 0.0) + weight
    deltas = sorted(totals)
    return deltas, [totals[d] for d in deltas]


def _qpd_panel(ax, record: PointRecord, title: str):
    deltas, weights = _total_qpd(record)
    colors = ["#b2182b" if w < 0 else "#2166ac" for w in weights]
    ax.bar(deltas, weights, width=0.6, color=colors)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel(r"$\Delta$")
    ax.set_ylabel("weight")
    ax.set_title(title)


def emit_figure(report: RunReport, path, highlight_params=None) -> Path:
    """Static vector figure: K curve with violation bands plus QPD bars.

    For sweep reports the first panel shows K with the regions K > 1 and
    K < -3 shaded; bar panels show the distribution at ``highlight_params``
    (nearest grid values).  Single-point reports get one bar panel.
    """
    if not report.records:
        raise EmptyReport("cannot plot an empty report")
    path = Path(path)
    records = report.records
    if len(records) == 1:
        fig, ax = plt.subplots(figsize=(5, 4))
        _qpd_panel(ax, records[0], f"param = {records[0].param:.4g}")
    else:
        params = np.array([r.param for r in records])
        kvals = np.array([r.k for r in records])
        if highlight_params is None:
            span = params[-1] - params[0]
            highlight_params = [
                params[0] + span * f for f in (0.125, 0.375, 0.625)
            ]
        picks = [records[int(np.argmin(np.abs(params - h)))] for h in highlight_params]
        fig, axes = plt.subplots(2, 2, figsize=(10, 7))
        ax = axes[0, 0]
        ax.plot(params, kvals, color="#2166ac")
        ax.axhline(1.0, color="gray", linestyle="--", linewidth=0.8)
        ax.axhline(-3.0, color="gray", linestyle="--", linewidth=0.8)
        ax.fill_between(params, kvals, 1.0, where=kvals > 1.0, color="#fddbc7")
        ax.fill_between(params, kvals, -3.0, where=kvals < -3.0, color="#fddbc7")
        ax.set_xlabel("parameter")
        ax.set_ylabel("K")
        ax.set_title("LG parameter and violation bands")
        for axp, rec in zip(axes.flat[1:], picks):
            _qpd_panel(axp, rec, f"param = {rec.param:.4g}")
    fig.tight_layout()
    fig.savefig(path, format=path.suffix.lstrip(".") or "svg")
    plt.close(fig)
    return path
