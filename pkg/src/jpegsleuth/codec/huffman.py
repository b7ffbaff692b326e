"""Huffman entropy coding of DCT blocks (T.81 Annex C/F procedures).

Tables are derived from (bits, values) specs into flat arrays so the
scan kernels can stay free of Python objects.  The kernels are the hot
path of the codec and run under numba on the accelerated path.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import CorruptStream


def derive_code_table(bits, values) -> tuple[np.ndarray, np.ndarray]:
    """Encoder-side table: (code, size) arrays indexed by symbol value."""
    sizes = []
    for length, count in enumerate(bits, start=1):
        sizes.extend([length] * count)
    if len(sizes) != len(values):
        raise CorruptStream("Huffman spec: counts do not match value list")
    ehufco = np.zeros(256, dtype=np.int64)
    ehufsi = np.zeros(256, dtype=np.int64)
    code = 0
    prev_size = sizes[0] if sizes else 0
    for sym, size in zip(values, sizes):
        code <<= size - prev_size
        prev_size = size
        if code >= (1 << size):
            raise CorruptStream("Huffman spec overflows the code space")
        ehufco[sym] = code
        ehufsi[sym] = size
        code += 1
    return ehufco, ehufsi


def derive_decode_table(bits, values) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Decoder-side table: (mincode, maxcode, valptr, huffval), indexed by code length."""
    mincode = np.zeros(17, dtype=np.int64)
    maxcode = np.full(17, -1, dtype=np.int64)
    valptr = np.zeros(17, dtype=np.int64)
    huffval = np.zeros(256, dtype=np.int64)
    huffval[: len(values)] = values
    code = 0
    k = 0
    for length in range(1, 17):
        count = bits[length - 1]
        if count:
            valptr[length] = k
            mincode[length] = code
            code += count
            k += count
            maxcode[length] = code - 1
        code <<= 1
    if k != len(values):
        raise CorruptStream("Huffman spec: counts do not match value list")
    return mincode, maxcode, valptr, huffval


# Kernel status codes.
OK = 0
ERR_UNDERRUN = 1
ERR_BAD_CODE = 2
ERR_RANGE = 3


def _decode_scan_segment(data, start_block, n_blocks,
                         comp_of_block, dc_sel, ac_sel, dest,
                         mincode, maxcode, valptr, huffval,
                         out, dc_pred):
    """Decode ``n_blocks`` consecutive blocks from one unstuffed entropy segment.

    data:          uint8 bytes with stuffing removed, no restart markers
    comp_of_block: component index per block (for the DC predictor)
    dc_sel/ac_sel: Huffman table slot per block (rows of the table arrays)
    dest:          row in ``out`` per block
    out:           (total_blocks, 64) int32, zig-zag order
    dc_pred:       per-component DC predictors, updated in place
    Returns a status code.
    """
    pos = 0
    bit = 0
    nbytes = data.shape[0]
    for bi in range(n_blocks):
        b = start_block + bi
        row = dest[b]
        # DC: category code then that many magnitude bits.
        t = dc_sel[b]
        code = 0
        length = 0
        while True:
            if pos >= nbytes:
                return ERR_UNDERRUN
            code = (code << 1) | ((data[pos] >> (7 - bit)) & 1)
            bit += 1
            if bit == 8:
                bit = 0
                pos += 1
            length += 1
            if length > 16:
                return ERR_BAD_CODE
            if code <= maxcode[t, length]:
                break
        sym = huffval[t, valptr[t, length] + code - mincode[t, length]]
        size = sym
        if size > 11:
            return ERR_RANGE
        diff = 0
        for _ in range(size):
            if pos >= nbytes:
                return ERR_UNDERRUN
            diff = (diff << 1) | ((data[pos] >> (7 - bit)) & 1)
            bit += 1
            if bit == 8:
                bit = 0
                pos += 1
        if size > 0 and diff < (1 << (size - 1)):
            diff -= (1 << size) - 1
        comp = comp_of_block[b]
        dc_pred[comp] += diff
        out[row, 0] = dc_pred[comp]
        # AC: run/size symbols until EOB or coefficient 63.
        t = ac_sel[b]
        k = 1
        while k <= 63:
            code = 0
            length = 0
            while True:
                if pos >= nbytes:
                    return ERR_UNDERRUN
                code = (code << 1) | ((data[pos] >> (7 - bit)) & 1)
                bit += 1
                if bit == 8:
                    bit = 0
                    pos += 1
                length += 1
                if length > 16:
                    return ERR_BAD_CODE
                if code <= maxcode[t, length]:
                    break
            sym = huffval[t, valptr[t, length] + code - mincode[t, length]]
            run = sym >> 4
            size = sym & 0x0F
            if size == 0:
                if run == 15:
                    k += 16
                    continue
                break  # EOB
            k += run
            if k > 63:
                return ERR_RANGE
            val = 0
            for _ in range(size):
                if pos >= nbytes:
                    return ERR_UNDERRUN
                val = (val << 1) | ((data[pos] >> (7 - bit)) & 1)
                bit += 1
                if bit == 8:
                    bit = 0
                    pos += 1
            if val < (1 << (size - 1)):
                val -= (1 << size) - 1
            out[row, k] = val
            k += 1
    return OK


def _encode_scan_segment(zz, start_block, n_blocks, comp_of_block,
                         dc_code, dc_size, ac_code, ac_size,
                         out, dc_pred):
    """Encode blocks (zig-zag int32 rows of ``zz``) into stuffed bytes.

    Returns (status, nbytes).  The bit stream is padded with 1-bits to a
    byte boundary, as required before a marker.
    """
    acc = 0
    nbits = 0
    pos = 0
    cap = out.shape[0]
    for bi in range(n_blocks):
        b = start_block + bi
        comp = comp_of_block[b]
        diff = zz[b, 0] - dc_pred[comp]
        dc_pred[comp] = zz[b, 0]
        mag = diff if diff >= 0 else -diff
        size = 0
        while mag > 0:
            mag >>= 1
            size += 1
        if size > 11:
            return ERR_RANGE, 0
        acc = (acc << dc_size[size]) | dc_code[size]
        nbits += dc_size[size]
        if size > 0:
            v = diff if diff >= 0 else diff + (1 << size) - 1
            acc = (acc << size) | (v & ((1 << size) - 1))
            nbits += size
        while nbits >= 8:
            nbits -= 8
            byte = (acc >> nbits) & 0xFF
            if pos + 2 > cap:
                return ERR_RANGE, 0
            out[pos] = byte
            pos += 1
            if byte == 0xFF:
                out[pos] = 0x00
                pos += 1
        run = 0
        for k in range(1, 64):
            val = zz[b, k]
            if val == 0:
                run += 1
                continue
            while run > 15:
                acc = (acc << ac_size[0xF0]) | ac_code[0xF0]  # ZRL
                nbits += ac_size[0xF0]
                run -= 16
                while nbits >= 8:
                    nbits -= 8
                    byte = (acc >> nbits) & 0xFF
                    if pos + 2 > cap:
                        return ERR_RANGE, 0
                    out[pos] = byte
                    pos += 1
                    if byte == 0xFF:
                        out[pos] = 0x00
                        pos += 1
            mag = val if val >= 0 else -val
            size = 0
            while mag > 0:
                mag >>= 1
                size += 1
            if size > 10:
                return ERR_RANGE, 0
            sym = (run << 4) | size
            acc = (acc << ac_size[sym]) | ac_code[sym]
            nbits += ac_size[sym]
            v = val if val >= 0 else val + (1 << size) - 1
            acc = (acc << size) | (v & ((1 << size) - 1))
            nbits += size
            run = 0
            while nbits >= 8:
                nbits -= 8
                byte = (acc >> nbits) & 0xFF
                if pos + 2 > cap:
                    return ERR_RANGE, 0
                out[pos] = byte
                pos += 1
                if byte == 0xFF:
                    out[pos] = 0x00
                    pos += 1
        if run > 0:
            acc = (acc << ac_size[0x00]) | ac_code[0x00]  # EOB
            nbits += ac_size[0x00]
            while nbits >= 8:
                nbits -= 8
                byte = (acc >> nbits) & 0xFF
                if pos + 2 > cap:
                    return ERR_RANGE, 0
                out[pos] = byte
                pos += 1
                if byte == 0xFF:
                    out[pos] = 0x00
                    pos += 1
    if nbits > 0:
        pad = 8 - nbits
        acc = (acc << pad) | ((1 << pad) - 1)
        byte = acc & 0xFF
        if pos + 2 > cap:
            return ERR_RANGE, 0
        out[pos] = byte
        pos += 1
        if byte == 0xFF:
            out[pos] = 0x00
            pos += 1
    return OK, pos


decode_scan_segment = kernels.accelerate(_decode_scan_segment)
encode_scan_segment = kernels.accelerate(_encode_scan_segment)
