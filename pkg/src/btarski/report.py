"""Trace reports: a delimited summary plus rendered figures.

Takes a JSON-lines game trace (as emitted by ``play`` or a session trace
export) and writes, into an output directory:

    summary.csv        one row per event
    state_growth.png   learned atoms over the course of the game
    play_depth.png     play length over the course of the game,
                       backtracks marked
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["load_trace", "write_report"]


def load_trace(path) -> list:
    events = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(json.loads(line))
    if events and "events" in events[0] and "ev" not in events[0]:
        # A session trace export: one JSON object wrapping the event list.
        return list(events[0]["events"])
    return events


def _state_size(literal: str) -> int:
    # Count atoms in a canonical state literal without a registry.
    inner = literal.strip()[len("(state ("):-2]
    depth = 0
    count = 0
    for ch in inner:
        if ch == "(":
            if depth == 0:
                count += 1
            depth += 1
        elif ch == ")":
            depth -= 1
    return count


def summarize(events) -> list:
    rows = []
    depth = 1
    atoms = 0
    for idx, ev in enumerate(events):
        kind = ev.get("ev")
        if kind == "extend":
            depth += 1
        elif kind == "backtrack":
            depth = ev["to"]
            atoms = _state_size(ev["state"])
        rows.append({
            "idx": idx,
            "ev": kind,
            "by": ev.get("by", ""),
            "choice": ev.get("choice", ""),
            "to": ev.get("to", ""),
            "clause": ev.get("clause", ""),
            "winner": ev.get("winner", ""),
            "pos": ev.get("pos", ""),
            "play_depth": depth,
            "state_atoms": atoms,
        })
    return rows


def write_report(trace_path, out_dir) -> list:
    """Render the summary and figures; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    events = load_trace(trace_path)
    rows = summarize(events)
    written = []

    csv_path = out / "summary.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()) if rows
                                else ["idx", "ev"])
        writer.writeheader()
        writer.writerows(rows)
    written.append(csv_path)

    idxs = [r["idx"] for r in rows]
    backtracks = [r["idx"] for r in rows if r["ev"] == "backtrack"]

    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.step(idxs, [r["state_atoms"] for r in rows], where="post")
    for b in backtracks:
        ax.axvline(b, color="tab:red", alpha=0.3, linewidth=1)
    ax.set_xlabel("event")
    ax.set_ylabel("learned atoms")
    ax.set_title("knowledge state growth")
    fig.tight_layout()
    growth_path = out / "state_growth.png"
    fig.savefig(growth_path, dpi=120)
    plt.close(fig)
    written.append(growth_path)

    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.step(idxs, [r["play_depth"] for r in rows], where="post")
    for b in backtracks:
        ax.axvline(b, color="tab:red", alpha=0.3, linewidth=1)
    ax.set_xlabel("event")
    ax.set_ylabel("play length")
    ax.set_title("play depth and backtracks")
    fig.tight_layout()
    depth_path = out / "play_depth.png"
    fig.savefig(depth_path, dpi=120)
    plt.close(fig)
    written.append(depth_path)

    return written
