"""NEC card decks for the bowtie and Yagi, output parsing and the engine client."""

from __future__ import annotations

import fcntl
import itertools
import math
import os
import re
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .antenna import FrequencySample, SweepTable
from .errors import (
    EngineExitError,
    EngineFailure,
    EngineSpawnError,
    EngineTimeoutError,
    ParseError,
    StaleOutputError,
    ValidationError,
)

DEFAULT_TIMEOUT_S = 300.0
DECK_NAME = "VZOPT.NEC"
OUTPUT_NAME = "VZOPT.OUT"
POINTER_NAME = "INFILE.DAT"


# -- number formatting ------------------------------------------------------

def basic_str(x):
    """Decimal text of a real in the old BASIC style: no leading zero, no exponent."""
    x = float(x)
    if x == 0:
        return "0"
    s = np.format_float_positional(x, trim="-")
    if s.startswith("0."):
        s = s[1:]
    elif s.startswith("-0."):
        s = "-" + s[2:]
    return s


def fp2string(x):
    """Card-field form of a real: like :func:`basic_str` with a trailing '.' when integral."""
    s = basic_str(x)
    if "." not in s:
        s += "."
    return s


def int2string(n):
    return str(int(n))


def make_run_id(now=None):
    """Run label in the MMDDYYYY_HHMMSS form used in deck comments."""
    t = time.localtime(now)
    return time.strftime("%m%d%Y_%H%M%S", t)


_file_id_counter = itertools.count(1)


def make_file_id(now=None):
    """Digits of date and time plus a process-wide counter.

    The counter keeps two decks written within the same second distinct.
    """
    t = time.localtime(now)
    return time.strftime("%m%d%Y%H%M%S", t) + f"{next(_file_id_counter):04d}"


def normalize_file_id(text):
    """Strip letters and spaces, as the file-ID comparison does."""
    return re.sub(r"[A-Za-z\s]", "", text)


# -- designs and decks -------------------------------------------------------

def _check_range(name, v, lo, hi):
    if not (math.isfinite(v) and lo <= v <= hi):
        raise ValidationError(f"{name} must be in [{lo}, {hi}], got {v}")


@dataclass(frozen=True)
class BowtieDesign:
    """Resistively loaded bowtie in the Y-Z plane, fed by a short center wire.

    ``r_load_ohm = 0`` means unloaded; no LD cards are written then.
    """

    arm_len_m: float
    half_angle_deg: float
    load_seg: int
    r_load_ohm: float
    z0_ohm: float
    feed_len_m: float = 0.02
    wire_radius_m: float = 0.0005
    n_segs_arm: int = 9
    n_segs_feed: int = 3

    def __post_init__(self):
        _check_range("arm_len_m", self.arm_len_m, 0.01, 0.08)
        _check_range("half_angle_deg", self.half_angle_deg, 10.0, 80.0)
        if int(self.load_seg) != self.load_seg or not 1 <= self.load_seg <= self.n_segs_arm:
            raise ValidationError(f"load_seg must be an integer in 1..{self.n_segs_arm}, got {self.load_seg}")
        if self.r_load_ohm != 0:
            _check_range("r_load_ohm", self.r_load_ohm, 1.0, 1000.0)
        _check_range("z0_ohm", self.z0_ohm, 50.0, 1000.0)

    @property
    def load_len_m(self):
        return self.load_seg * self.arm_len_m / self.n_segs_arm


@dataclass(frozen=True)
class YagiDesign:
    """Yagi along +X with elements parallel to Y; lengths and spacings in wavelengths.

    ``spacings_wl[0]`` is the reflector's fixed zero spacing.
    """

    lengths_wl: tuple
    spacings_wl: tuple
    z0_ohm: float
    radius_wl: float = 0.00635
    fc_mhz: float = 299.8
    n_segs: int = 9

    def __post_init__(self):
        object.__setattr__(self, "lengths_wl", tuple(float(v) for v in self.lengths_wl))
        object.__setattr__(self, "spacings_wl", tuple(float(v) for v in self.spacings_wl))
        if len(self.lengths_wl) < 2 or len(self.lengths_wl) != len(self.spacings_wl):
            raise ValidationError("need at least 2 elements and one spacing per element")
        for i, v in enumerate(self.lengths_wl):
            _check_range(f"lengths_wl[{i}]", v, 0.2, 0.6)
        if self.spacings_wl[0] != 0:
            raise ValidationError("spacings_wl[0] (reflector) must be 0")
        for i, v in enumerate(self.spacings_wl[1:], 1):
            _check_range(f"spacings_wl[{i}]", v, 0.1, 0.5)
        _check_range("z0_ohm", self.z0_ohm, 5.0, 600.0)

    @classmethod
    def from_boom_positions(cls, lengths_wl, boom_wl, z0_ohm, **kw):
        boom = [float(b) for b in boom_wl]
        spacings = [0.0] + [round(b - a, 12) for a, b in zip(boom, boom[1:])]
        return cls(tuple(lengths_wl), tuple(spacings), z0_ohm, **kw)

    @property
    def n_elements(self):
        return len(self.lengths_wl)

    @property
    def wavelength_m(self):
        # the listing models 299.8 MHz as exactly one meter
        return 299.8 / self.fc_mhz


YAGI_DESIGN1 = YagiDesign.from_boom_positions(
    (0.468, 0.456, 0.380, 0.372, 0.368, 0.378), (0, 0.343, 0.540, 0.827, 1.137, 1.410), 65.75
)
YAGI_DESIGN2 = YagiDesign.from_boom_positions(
    (0.564, 0.500, 0.370, 0.360, 0.364, 0.344), (0, 0.305, 0.434, 0.715, 0.921, 1.238), 89.88
)
BOWTIE_BEST = BowtieDesign(0.051, 39.4, 6, 166.93, 715.0)


@dataclass(frozen=True)
class NecDeck:
    lines: tuple
    file_id: str
    freqs_mhz: tuple = field(default=())
    n_pattern_rows: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        kinds = [ln.split(",")[0].split()[0][:2] if ln.strip() else "" for ln in self.lines]
        for k in ("CE", "GE", "EN"):
            if kinds.count(k) != 1:
                raise ValidationError(f"deck must contain exactly one {k} card")
        tags = [int(ln[2:].split(",")[0]) for ln in self.lines if ln.startswith("GW")]
        if len(tags) != len(set(tags)):
            raise ValidationError("GW tags must be unique")
        order = [kinds.index(k) for k in ("FR", "EX", "RP") if k in kinds]
        if order != sorted(order):
            raise ValidationError("FR, EX and RP cards out of order")

    def cards(self, kind):
        return [ln for ln in self.lines if ln.startswith(kind)]

    def text(self):
        return "\n".join(self.lines) + "\n"


def _fr_card(freq):
    start, step, count = freq
    if count < 1 or step <= 0 or start <= 0:
        raise ValidationError(f"bad frequency spec {freq}")
    return f"FR 0,{int2string(count)},0,0,{fp2string(start)},{fp2string(step)}"


def _freq_list(freq):
    start, step, count = freq
    return tuple(start + k * step for k in range(int(count)))


def _gw(tag, segs, p1, p2, radius):
    nums = ",".join(fp2string(v) for v in (*p1, *p2, radius))
    return f"GW{tag},{segs},{nums}"


def gen_bowtie_deck(design, freq=(200.0, 15.0, 1001), n_angles=19, file_id=None,
                    run_id=None, context=None, filename="BOWTIE.NEC"):
    """Card deck for a loaded bowtie; ``context`` is an optional (Nd, p, j) comment."""
    d = design
    file_id = file_id or make_file_id()
    run_id = run_id or make_run_id()
    half = d.feed_len_m / 2.0
    ang = round(math.radians(d.half_angle_deg), 3)
    y2 = round(half + d.arm_len_m * math.cos(ang), 3)
    z2 = round(d.arm_len_m * math.sin(ang), 3)
    r = d.wire_radius_m
    n = d.n_segs_arm
    rl = round(d.r_load_ohm, 2)

    lines = [
        f"CM File: {filename}",
        "CM R-LOADED BOWTIE IN FREE SPACE WITH",
        "CM Zo AS AN OPTIMIZATION PARAMETER.",
        "CM Antenna in Y-Z plane.",
        f"CM Run ID: {run_id}",
        "CM Fitness function:",
        "CM [Min(Eff)+5*Min(Gmax)]/[|Zo-MaxRin|*(MaxVSWR-MinVSWR)*(MaxXin-MinXin)]",
        f"CM Arm Length = {basic_str(round(d.arm_len_m, 3))} meters",
        f"CM Bowtie HALF Angle = {basic_str(d.half_angle_deg)} degrees",
        f"CM Zo = {basic_str(round(d.z0_ohm, 2))} ohms",
        f"CM Rload = {basic_str(rl)} ohms",
        f"CM Loaded Seg # = {d.load_seg}/{n}",
        f"CM File ID {file_id}",
    ]
    if context is not None:
        nd, p, j = context
        lines.append(f"CM Nd = {nd}, p = {p}, j = {j}")
    lines += [
        "CE",
        _gw(1, d.n_segs_feed, (0, -half, 0), (0, half, 0), r),
        _gw(2, n, (0, half, 0), (0, y2, z2), r),
        _gw(3, n, (0, half, 0), (0, y2, -z2), r),
        _gw(4, n, (0, y2, z2), (0, y2, -z2), r),
        _gw(5, n, (0, -half, 0), (0, -y2, z2), r),
        _gw(6, n, (0, -half, 0), (0, -y2, -z2), r),
        _gw(7, n, (0, -y2, z2), (0, -y2, -z2), r),
        "GE",
    ]
    if rl != 0:
        seg = int2string(d.load_seg)
        for w in (2, 3, 5, 6):
            lines.append(f"LD0,{w},{seg},{seg},{fp2string(rl)},0.,0.")
    dtheta = fp2string(round(90.0 / (n_angles - 1), 2))
    lines += [
        _fr_card(freq),
        f"EX 0,1,{int2string((d.n_segs_feed + 1) // 2)},1,1,0.",
        f"RP 0,{int2string(n_angles)},1,1001,0.,0.,{dtheta},0.,100000.",
        "EN",
    ]
    return NecDeck(lines, file_id, _freq_list(freq), n_angles)


def gen_yagi_deck(design, freq=(200.0, 0.1, 1501), coeffs=None, file_id=None,
                  run_id=None, context=None, filename="YAGI.NEC"):
    """Card deck for a Yagi; the RP card requests a 19 x 19 pattern."""
    d = design
    file_id = file_id or make_file_id()
    run_id = run_id or make_run_id()
    lam = d.wavelength_m
    fit = "Gfwd(L)-VSWR(L)+Gfwd(M)-VSWR(M)+Gfwd(U)-VSWR(U)"
    if coeffs is not None:
        c = [basic_str(v) for v in coeffs.as_tuple()]
        fit = (f"{c[0]}*Gfwd(L)-{c[1]}*VSWR(L)+{c[2]}*Gfwd(M)-{c[3]}*VSWR(M)"
               f"+{c[4]}*Gfwd(U)-{c[5]}*VSWR(U)")
    lines = [
        f"CM File: {filename}",
        "CM YAGI ARRAY IN FREE SPACE",
        f"CM Band center frequency, Fc = {basic_str(d.fc_mhz)} MHz",
        f"CM Run ID: {run_id}",
        "CM Fitness function:",
        f"CM {fit}",
        "CM where L,M,U are lower/mid/upper frequencies",
        f"CM Zo={basic_str(round(d.z0_ohm, 2))} ohms",
        f"CM File ID {file_id}",
    ]
    if context is not None:
        nd, p, j = context
        lines.append(f"CM Nd= {nd}, p= {p}, j= {j}")
    lines.append("CE")
    x = 0.0
    for k, (length, space) in enumerate(zip(d.lengths_wl, d.spacings_wl), 1):
        x += space * lam
        xr = round(x, 3)
        h = round(length * lam / 2.0, 3)
        lines.append(_gw(k, d.n_segs, (xr, -h, 0), (xr, h, 0), d.radius_wl * lam))
    lines += [
        "GE",
        _fr_card(freq),
        f"EX 0,2,{int2string((d.n_segs + 1) // 2)},1,1,0.",
        "RP 0,19,19,1001,0.,0.,5.,10.,100000.",
        "EN",
    ]
    return NecDeck(lines, file_id, _freq_list(freq), 19 * 19)


# -- output parsing ----------------------------------------------------------

@dataclass
class NecParseResult:
    """Parsed listing. ``table`` is None when the run did not complete."""

    table: SweepTable | None
    run_ok: bool
    file_id: str | None
    file_id_ok: bool | None


_NUM = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[EeDd][-+]?\d+)?")


def _fixed_float(line, start, width, lineno):
    """Float from 1-based columns ``start .. start+width-1``."""
    field_ = line[start - 1:start - 1 + width].strip()
    try:
        return float(field_.replace("D", "E"))
    except ValueError:
        raise ParseError(f"bad numeric field {field_!r} at columns {start}-{start + width - 1}", lineno) from None


def _first_number(text, lineno):
    m = _NUM.search(text)
    if not m:
        raise ParseError(f"no number in {text.strip()!r}", lineno)
    return float(m.group(0).replace("D", "E").replace("d", "e"))


def parse_nec_output(text, z0, expected_file_id=None, n_angles=None, forward=None):
    """Parse a NEC listing into a SweepTable of one row per frequency block.

    ``forward`` is an optional (theta, phi) in degrees naming the pattern
    row used for forward gain; the first pattern row is used otherwise.
    ``n_angles`` bounds the pattern rows read per block; by default rows
    are read until the first line that is not a pattern row.
    """
    lines = text.splitlines()
    if not any("RUN TIME" in ln for ln in lines):
        return NecParseResult(None, False, None, None)

    found_id = None
    blocks = []
    cur = None
    i = 0
    while i < len(lines):
        ln = lines[i]
        lineno = i + 1
        if "File ID" in ln and found_id is None:
            found_id = normalize_file_id(ln)
        if "FREQUENCY=" in ln:
            cur = {"f": _first_number(ln.replace("MHZ", "").replace("FREQUENCY=", ""), lineno)}
            blocks.append(cur)
        elif "INPUT PARAMETERS" in ln:
            if cur is None:
                raise ParseError("impedance block before any FREQUENCY= line", lineno)
            i += 3
            if i >= len(lines):
                raise ParseError("truncated impedance block", lineno)
            imp = lines[i]
            cur["rin"] = _fixed_float(imp, 61, 12, i + 1)
            cur["xin"] = _fixed_float(imp, 73, 12, i + 1)
        elif "EFFICIENCY" in ln and cur is not None:
            cur["eff"] = _first_number(ln.split("EFFICIENCY", 1)[1], lineno)
        elif "E(THETA)" in ln and cur is not None:
            i += 3
            gains, fwd = [], None
            while i < len(lines) and (n_angles is None or len(gains) < n_angles):
                row = lines[i]
                parts = row.split()
                try:
                    theta, phi = float(parts[0]), float(parts[1])
                except (IndexError, ValueError):
                    if n_angles is not None:
                        raise ParseError(f"expected {n_angles} pattern rows, got {len(gains)}", i + 1) from None
                    break
                g = _fixed_float(row, 37, 8, i + 1)
                if fwd is None and (forward is None or (theta == forward[0] and phi == forward[1])):
                    fwd = g
                gains.append(g)
                i += 1
            if not gains:
                raise ParseError("empty radiation pattern", i + 1)
            if fwd is None:
                raise ParseError(f"no pattern row at theta, phi = {forward}", i)
            cur["gmax"], cur["gmin"], cur["gfwd"] = max(gains), min(gains), fwd
            continue
        i += 1

    file_ok = None
    if expected_file_id is not None:
        file_ok = found_id == normalize_file_id(expected_file_id)
        if not file_ok:
            raise StaleOutputError(f"output file ID {found_id!r} does not match deck ID {expected_file_id!r}")

    rows = []
    for b in blocks:
        missing = {"rin", "xin", "eff", "gmax"} - b.keys()
        if missing:
            raise ParseError(f"frequency block {b['f']} MHz lacks {sorted(missing)}")
        rows.append(FrequencySample(b["f"], b["eff"], b["gmax"], b["gmin"], b["gfwd"], b["rin"], b["xin"]))
    return NecParseResult(SweepTable(rows, z0), True, found_id, file_ok)


def agt_validate(avg_power_gain, lo=0.8, hi=1.2):
    """True where the average power gain lies in ``[lo, hi]``."""
    g = np.asarray(avg_power_gain, dtype=float)
    return (g >= lo) & (g <= hi)


# -- engine client -----------------------------------------------------------

@dataclass
class NecRunOutput:
    table: SweepTable
    file_id: str
    workdir: Path
    output_text: str


def run_engine(deck, engine_path, workdir, z0, timeout=DEFAULT_TIMEOUT_S, forward=None):
    """Write ``deck`` into ``workdir``, run the engine there and parse its output.

    The engine is started with ``workdir`` as its current directory and
    finds its input and output names in the pointer file. Runs in the
    same workdir are serialized with a lock file.
    """
    wd = Path(workdir)
    wd.mkdir(parents=True, exist_ok=True)
    with open(wd / ".vzopt.lock", "w") as lock:
        fcntl.flock(lock, fcntl.LOCK_EX)
        try:
            return _run_locked(deck, _resolve_engine(engine_path), wd, z0, timeout, forward)
        finally:
            fcntl.flock(lock, fcntl.LOCK_UN)


def _resolve_engine(engine_path):
    # relative paths refer to the caller's directory, not the workdir
    p = str(engine_path)
    if os.sep in p:
        return str(Path(p).resolve())
    return p


def _run_locked(deck, engine_path, wd, z0, timeout, forward):
    out_path = wd / OUTPUT_NAME
    if out_path.exists():
        out_path.unlink()
    (wd / DECK_NAME).write_text(deck.text(), encoding="ascii")
    (wd / POINTER_NAME).write_text(f"{DECK_NAME}\n{OUTPUT_NAME}\n", encoding="ascii")
    try:
        proc = subprocess.run(
            [engine_path], cwd=wd, stdin=subprocess.DEVNULL, capture_output=True,
            text=True, timeout=timeout,
        )
    except subprocess.TimeoutExpired:
        raise EngineTimeoutError(f"engine {engine_path} exceeded {timeout} s") from None
    except OSError as exc:
        raise EngineSpawnError(f"cannot start engine {engine_path}: {exc}") from None
    if proc.returncode != 0:
        raise EngineExitError(proc.returncode, proc.stderr)
    if not out_path.exists():
        raise EngineFailure(f"engine produced no {OUTPUT_NAME} in {wd}")
    text = out_path.read_text(encoding="ascii", errors="replace")
    res = parse_nec_output(text, z0, expected_file_id=deck.file_id,
                           n_angles=deck.n_pattern_rows or None, forward=forward)
    if not res.run_ok:
        raise EngineFailure(f"no RUN TIME marker in {out_path}")
    return NecRunOutput(res.table, res.file_id, wd, text)


def engine_from_env(var="VZOPT_NEC_ENGINE"):
    """Engine path from the environment, or None."""
    return os.environ.get(var) or None
