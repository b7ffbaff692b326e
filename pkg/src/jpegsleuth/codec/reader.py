"""Baseline JPEG parsing: markers, headers, and entropy-coded scans.

Supports sequential Huffman JPEGs (SOF0/SOF1) with 8-bit samples, 1 to 4
components, sampling factors up to 4, restart markers, and both
interleaved and single-component scans.  Progressive, arithmetic,
hierarchical, and lossless modes raise UnsupportedCoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CorruptStream, MissingTable, UnsupportedCoding
from . import huffman
from .tables import ZIGZAG
from .types import CoeffGrid, JpegModel, QuantTable

# Marker bytes (second byte after 0xFF).
M_SOI = 0xD8
M_EOI = 0xD9
M_SOS = 0xDA
M_DQT = 0xDB
M_DRI = 0xDD
M_DHT = 0xC4
M_DNL = 0xDC
M_COM = 0xFE
M_TEM = 0x01

SOF_BASELINE = {0xC0, 0xC1}
SOF_UNSUPPORTED = {
    0xC2: "progressive",
    0xC3: "lossless",
    0xC5: "differential sequential",
    0xC6: "differential progressive",
    0xC7: "differential lossless",
    0xC9: "arithmetic sequential",
    0xCA: "arithmetic progressive",
    0xCB: "arithmetic lossless",
    0xCD: "differential arithmetic sequential",
    0xCE: "differential arithmetic progressive",
    0xCF: "differential arithmetic lossless",
}


@dataclass
class _Component:
    cid: int
    h: int
    v: int
    tq: int
    dc_sel: int = 0
    ac_sel: int = 0
    blocks_h: int = 0   # full interleaved-padded block grid
    blocks_w: int = 0
    coeffs: np.ndarray | None = None  # (blocks_h * blocks_w, 64) zig-zag


@dataclass
class _ParseState:
    width: int = 0
    height: int = 0
    components: list[_Component] = field(default_factory=list)
    qtables: dict[int, np.ndarray] = field(default_factory=dict)  # id -> 64 zig-zag steps
    htables: dict[tuple[int, int], tuple] = field(default_factory=dict)  # (class, id) -> dec table
    restart_interval: int = 0
    h_max: int = 1
    v_max: int = 1
    mcus_x: int = 0
    mcus_y: int = 0
    got_frame: bool = False
    scans_done: int = 0


def _u16(data: bytes, pos: int) -> int:
    if pos + 2 > len(data):
        raise CorruptStream("truncated segment length")
    return (data[pos] << 8) | data[pos + 1]


def _parse_dqt(seg: bytes, st: _ParseState) -> None:
    pos = 0
    while pos < len(seg):
        pq = seg[pos] >> 4
        tq = seg[pos] & 0x0F
        pos += 1
        if pq == 0:
            if pos + 64 > len(seg):
                raise CorruptStream("truncated DQT")
            steps = np.frombuffer(seg[pos:pos + 64], dtype=np.uint8).astype(np.int64)
            pos += 64
        elif pq == 1:
            if pos + 128 > len(seg):
                raise CorruptStream("truncated DQT")
            steps = np.frombuffer(seg[pos:pos + 128], dtype=">u2").astype(np.int64)
            pos += 128
            if (steps > 255).any():
                raise UnsupportedCoding("16-bit quantization steps exceed baseline range")
        else:
            raise CorruptStream(f"bad DQT precision {pq}")
        st.qtables[tq] = steps


def _parse_dht(seg: bytes, st: _ParseState) -> None:
    pos = 0
    while pos < len(seg):
        tc = seg[pos] >> 4
        th = seg[pos] & 0x0F
        pos += 1
        if tc > 1:
            raise CorruptStream(f"bad DHT class {tc}")
        if pos + 16 > len(seg):
            raise CorruptStream("truncated DHT")
        bits = list(seg[pos:pos + 16])
        pos += 16
        count = sum(bits)
        if pos + count > len(seg):
            raise CorruptStream("truncated DHT values")
        values = list(seg[pos:pos + count])
        pos += count
        st.htables[(tc, th)] = huffman.derive_decode_table(bits, values)


def _parse_sof(seg: bytes, st: _ParseState) -> None:
    if st.got_frame:
        raise CorruptStream("multiple frame headers")
    if len(seg) < 6:
        raise CorruptStream("truncated SOF")
    precision = seg[0]
    if precision != 8:
        raise UnsupportedCoding(f"{precision}-bit samples (baseline requires 8)")
    st.height = (seg[1] << 8) | seg[2]
    st.width = (seg[3] << 8) | seg[4]
    if st.height == 0 or st.width == 0:
        raise UnsupportedCoding("deferred image height (DNL) is not supported")
    nf = seg[5]
    if not 1 <= nf <= 4:
        raise CorruptStream(f"bad component count {nf}")
    if len(seg) < 6 + 3 * nf:
        raise CorruptStream("truncated SOF component specs")
    for i in range(nf):
        cid, hv, tq = seg[6 + 3 * i: 9 + 3 * i]
        h, v = hv >> 4, hv & 0x0F
        if not (1 <= h <= 4 and 1 <= v <= 4):
            raise CorruptStream(f"bad sampling factors {h}x{v}")
        st.components.append(_Component(cid=cid, h=h, v=v, tq=tq))
    st.h_max = max(c.h for c in st.components)
    st.v_max = max(c.v for c in st.components)
    st.mcus_x = -(-st.width // (8 * st.h_max))
    st.mcus_y = -(-st.height // (8 * st.v_max))
    for c in st.components:
        c.blocks_w = st.mcus_x * c.h
        c.blocks_h = st.mcus_y * c.v
        c.coeffs = np.zeros((c.blocks_h * c.blocks_w, 64), dtype=np.int32)
    st.got_frame = True


def _split_scan_segments(data: bytes, pos: int) -> tuple[list[np.ndarray], int]:
    """Split entropy-coded data into unstuffed restart segments.

    Returns (segments, position of the next marker's 0xFF byte).
    """
    arr = np.frombuffer(data, dtype=np.uint8)
    segments = []
    seg_start = pos
    stuffed: list[int] = []
    i = pos
    n = len(data)
    while True:
        j = data.find(b"\xff", i)
        if j < 0 or j + 1 >= n:
            raise CorruptStream("scan data ran past end of file")
        nxt = data[j + 1]
        if nxt == 0x00:
            stuffed.append(j + 1)
            i = j + 2
            continue
        if 0xD0 <= nxt <= 0xD7:  # restart marker
            seg = np.delete(arr[seg_start:j], [s - seg_start for s in stuffed])
            segments.append(seg)
            stuffed = []
            seg_start = j + 2
            i = j + 2
            continue
        if nxt == 0xFF:  # fill byte before a marker
            i = j + 1
            continue
        seg = np.delete(arr[seg_start:j], [s - seg_start for s in stuffed])
        segments.append(seg)
        return segments, j


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _scan_block_plan(st: _ParseState, scan_comps: list[_Component]):
    """Per-block component index and destination rows for one scan."""
    if len(scan_comps) == 1:
        c = scan_comps[0]
        # Non-interleaved: raster over the component's own block grid
        # (no MCU padding), one block per "MCU".
        bw = _ceil_div(_ceil_div(st.width * c.h, st.h_max), 8)
        bh = _ceil_div(_ceil_div(st.height * c.v, st.v_max), 8)
        rows = np.repeat(np.arange(bh), bw) * c.blocks_w + np.tile(np.arange(bw), bh)
        comp_idx = np.full(bh * bw, st.components.index(c), dtype=np.int64)
        blocks_per_mcu = 1
    else:
        per_mcu_comp = []
        per_mcu_off = []  # (comp block row offset, col offset) within an MCU
        for c in scan_comps:
            ci = st.components.index(c)
            for v in range(c.v):
                for h in range(c.h):
                    per_mcu_comp.append(ci)
                    per_mcu_off.append((v, h))
        blocks_per_mcu = len(per_mcu_comp)
        mcus = st.mcus_x * st.mcus_y
        comp_idx = np.empty(mcus * blocks_per_mcu, dtype=np.int64)
        rows = np.empty(mcus * blocks_per_mcu, dtype=np.int64)
        k = 0
        for my in range(st.mcus_y):
            for mx in range(st.mcus_x):
                for (ci, (v, h)) in zip(per_mcu_comp, per_mcu_off):
                    c = st.components[ci]
                    br = my * c.v + v
                    bc = mx * c.h + h
                    comp_idx[k] = ci
                    rows[k] = br * c.blocks_w + bc
                    k += 1
    return comp_idx, rows, blocks_per_mcu


def _decode_scan(data: bytes, pos: int, seg: bytes, st: _ParseState) -> int:
    if not st.got_frame:
        raise CorruptStream("SOS before SOF")
    ns = seg[0]
    if len(seg) < 1 + 2 * ns + 3:
        raise CorruptStream("truncated SOS header")
    scan_comps = []
    for i in range(ns):
        cs, tt = seg[1 + 2 * i: 3 + 2 * i]
        match = [c for c in st.components if c.cid == cs]
        if not match:
            raise CorruptStream(f"SOS references unknown component {cs}")
        c = match[0]
        c.dc_sel, c.ac_sel = tt >> 4, tt & 0x0F
        scan_comps.append(c)
    ss, se, a = seg[1 + 2 * ns: 4 + 2 * ns]
    if (ss, se, a) != (0, 63, 0):
        raise UnsupportedCoding("spectral selection / successive approximation")

    comp_idx, rows, mcus, blocks_per_mcu = _scan_block_plan(st, scan_comps)
    n_blocks = comp_idx.size

    # Table slots: pack referenced decode tables into stacked arrays.
    slot_of = {}
    mincodes, maxcodes, valptrs, huffvals = [], [], [], []
    for c in scan_comps:
        for key in ((0, c.dc_sel), (1, c.ac_sel)):
            if key not in slot_of:
                if key not in st.htables:
                    raise MissingTable(f"Huffman table class {key[0]} id {key[1]} undefined")
                slot_of[key] = len(mincodes)
                mn, mx, vp, hv = st.htables[key]
                mincodes.append(mn)
                maxcodes.append(mx)
                valptrs.append(vp)
                huffvals.append(hv)
    mincode = np.stack(mincodes)
    maxcode = np.stack(maxcodes)
    valptr = np.stack(valptrs)
    huffval = np.stack(huffvals)
    dc_slot = np.array([slot_of[(0, st.components[ci].dc_sel)] for ci in comp_idx],
                       dtype=np.int64)
    ac_slot = np.array([slot_of[(1, st.components[ci].ac_sel)] for ci in comp_idx],
                       dtype=np.int64)

    out = np.zeros((n_blocks, 64), dtype=np.int32)
    segments, next_marker = _split_scan_segments(data, pos)

    ri = st.restart_interval
    blocks_per_segment = ri * blocks_per_mcu if ri else n_blocks
    expected_segments = -(-n_blocks // blocks_per_segment)
    if len(segments) != expected_segments:
        raise CorruptStream(
            f"expected {expected_segments} restart segments, found {len(segments)}")

    start = 0
    for seg_bytes in segments:
        count = min(blocks_per_segment, n_blocks - start)
        dc_pred = np.zeros(len(st.components), dtype=np.int64)
        status = huffman.decode_scan_segment(
            seg_bytes, start, count, comp_idx, dc_slot, ac_slot, rows,
            mincode, maxcode, valptr, huffval, out, dc_pred)
        if status == huffman.ERR_UNDERRUN:
            raise CorruptStream("Huffman underrun inside scan")
        if status != huffman.OK:
            raise CorruptStream("invalid Huffman code or coefficient index")
        start += count

    # Scatter decoded rows into the per-component storage.
    for ci in np.unique(comp_idx):
        sel = comp_idx == ci
        st.components[ci].coeffs[rows[sel]] = out[sel]
    st.scans_done += 1
    return next_marker


def _component_grid(c: _Component) -> np.ndarray:
    """Zig-zag block rows -> natural-order coefficient grid."""
    natural = c.coeffs[:, ZIGZAG.argsort()]  # inverse zig-zag
    blocks = natural.reshape(c.blocks_h, c.blocks_w, 8, 8)
    return blocks.swapaxes(1, 2).reshape(c.blocks_h * 8, c.blocks_w * 8)


def decode_jpeg(data: bytes) -> JpegModel:
    """Parse a baseline JPEG into quantized coefficients plus tables."""
    if len(data) < 4 or data[0] != 0xFF or data[1] != M_SOI:
        raise CorruptStream("missing SOI marker")
    st = _ParseState()
    pos = 2
    n = len(data)
    while True:
        if pos + 2 > n:
            raise CorruptStream("ran past end of file before EOI")
        if data[pos] != 0xFF:
            raise CorruptStream(f"expected marker at offset {pos}")
        while pos < n and data[pos] == 0xFF and pos + 1 < n and data[pos + 1] == 0xFF:
            pos += 1  # fill bytes
        marker = data[pos + 1]
        pos += 2
        if marker == M_EOI:
            break
        if marker == M_TEM:
            continue
        if marker in SOF_UNSUPPORTED:
            raise UnsupportedCoding(f"{SOF_UNSUPPORTED[marker]} JPEG")
        if 0xD0 <= marker <= 0xD7:
            raise CorruptStream("restart marker outside a scan")
        length = _u16(data, pos)
        if length < 2 or pos + length > n:
            raise CorruptStream("bad segment length")
        seg = data[pos + 2: pos + length]
        if marker == M_DQT:
            _parse_dqt(seg, st)
        elif marker == M_DHT:
            _parse_dht(seg, st)
        elif marker in SOF_BASELINE:
            _parse_sof(seg, st)
        elif marker == M_DRI:
            if length != 4:
                raise CorruptStream("bad DRI length")
            st.restart_interval = (seg[0] << 8) | seg[1]
        elif marker == M_SOS:
            pos = _decode_scan(data, pos + length, seg, st)
            continue
        elif 0xE0 <= marker <= 0xEF or marker == M_COM or marker == M_DNL:
            pass  # APPn / COM / DNL: skip payload
        else:
            raise CorruptStream(f"unexpected marker 0xFF{marker:02X}")
        pos += length

    if not st.got_frame or st.scans_done == 0:
        raise CorruptStream("no image data before EOI")

    def qtable_for(c: _Component) -> QuantTable:
        if c.tq not in st.qtables:
            raise MissingTable(f"quantization table {c.tq} undefined")
        steps = np.zeros(64, dtype=np.int64)
        steps[ZIGZAG] = st.qtables[c.tq]
        return QuantTable(steps.reshape(8, 8))

    luma = st.components[0]
    grid = _component_grid(luma)
    want_h = -(-st.height // 8) * 8
    want_w = -(-st.width // 8) * 8
    grid = grid[:want_h, :want_w]
    chroma = []
    for c in st.components[1:]:
        chroma.append((CoeffGrid(_component_grid(c).astype(np.int16)), qtable_for(c)))
    return JpegModel(
        luma=CoeffGrid(grid.astype(np.int16)),
        luma_qtable=qtable_for(luma),
        pixel_width=st.width,
        pixel_height=st.height,
        chroma=chroma,
    )
