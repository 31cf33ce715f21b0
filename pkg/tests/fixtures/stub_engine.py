#!/usr/bin/env python3
"""Stand-in engine: replays a fixture listing under the deck's file ID.

Reads INFILE.DAT in the current directory for the input and output
names. STUB_MODE selects a failure: exit, sleep, norun, stale, nooutput.
STUB_MODE=model instead synthesizes a smooth response from the deck's
GW geometry, so optimizer runs see a non-constant landscape.
"""

import math
import os
import re
import sys
import time
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

from nec_listing import render_listing  # noqa: E402


def _card_numbers(deck, kind):
    rows = []
    for ln in deck.splitlines():
        if ln.startswith(kind):
            body = ln[len(kind):].lstrip()
            rows.append([float(v) for v in body.split(",") if v.strip()])
    return rows


def model_listing(deck, file_id):
    """Listing whose impedance and gains are smooth functions of the geometry."""
    gw = _card_numbers(deck, "GW")
    fr = _card_numbers(deck, "FR")[0]
    rp = _card_numbers(deck, "RP")[0]
    loads = _card_numbers(deck, "LD")
    size = sum(math.hypot(w[5] - w[2], w[6] - w[3], w[7] - w[4]) for w in gw)
    span = max(w[2] for w in gw) - min(w[2] for w in gw)
    r_load = loads[0][4] if loads else 0.0
    n_th, n_ph = int(rp[1]), int(rp[2])
    th0, ph0, dth, dph = rp[4], rp[5], rp[6], rp[7]
    angles = [(th0 + i * dth, ph0 + k * dph) for i in range(n_th) for k in range(n_ph)]
    z0 = float(re.search(r"Zo\s*=\s*([0-9.]+)", deck).group(1))
    samples = []
    for k in range(int(fr[1])):
        f = fr[4] + k * fr[5]
        u = size * f / 299.8
        rin = 20.0 + 0.5 * z0 + 40.0 * math.sin(u) + 0.05 * r_load
        xin = 120.0 * math.cos(1.3 * u) - 30.0
        gain = 2.0 + 3.0 * span + math.sin(0.7 * u)
        samples.append((f, 95.0 - 0.01 * r_load, gain + 1.0, gain - 6.0, gain, rin, xin))
    return render_listing(file_id, samples, angles=angles)


def main():
    mode = os.environ.get("STUB_MODE", "")
    fixture = Path(os.environ.get("STUB_FIXTURE", HERE / "bowtie_synthetic.out"))
    if mode == "exit":
        print("stub: forced failure", file=sys.stderr)
        return 7
    if mode == "sleep":
        time.sleep(float(os.environ.get("STUB_SLEEP", "30")))
    deck_name, out_name = Path("INFILE.DAT").read_text().split()[:2]
    deck = Path(deck_name).read_text()
    m = re.search(r"^CM File ID (\S+)", deck, re.M)
    file_id = m.group(1) if m else ""
    if mode == "stale":
        file_id = "0" * 18
    if mode == "nooutput":
        return 0
    if mode == "model":
        Path(out_name).write_text(model_listing(deck, file_id))
        return 0
    text = fixture.read_text()
    text = re.sub(r"^ CM File ID \S+", f" CM File ID {file_id}", text, count=1, flags=re.M)
    if mode == "norun":
        text = text.replace("RUN TIME", "")
    Path(out_name).write_text(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
