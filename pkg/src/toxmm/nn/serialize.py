"""TOXMM1 parameter container.

Layout: a UTF-8 text header (version tag, model kind, config echo, manifest
of name/shape/dtype/byte-offset entries, payload CRC), a blank line, then
the raw little-endian float32 payload. Buffers (batchnorm statistics) ride
along with a ``buffer:`` manifest prefix.
"""

import zlib
from pathlib import Path

import numpy as np

from ..errors import CorruptPayload, VersionMismatch

MAGIC = "TOXMM1"


def save_payload(path, kind: str, config: dict, params: dict, buffers: dict):
    chunks = []
    manifest = []
    offset = 0
    for prefix, table in (("param", params), ("buffer", buffers)):
        for name, array in table.items():
            data = np.ascontiguousarray(array, dtype="<f4")
            raw = data.tobytes()
            shape = "x".join(str(s) for s in array.shape) or "scalar"
            manifest.append(f"{prefix}:{name}:{shape}:float32:{offset}")
            chunks.append(raw)
            offset += len(raw)
    payload = b"".join(chunks)
    lines = [MAGIC, f"kind={kind}"]
    lines += [f"config:{k}={v}" for k, v in config.items()]
    lines += manifest
    lines.append(f"crc32={zlib.crc32(payload):08x}")
    Path(path).write_bytes("\n".join(lines).encode() + b"\n\n" + payload)


def load_payload(path):
    """Returns (kind, config, params, buffers); validates tag and checksum."""
    blob = Path(path).read_bytes()
    head, sep, _ = blob.partition(b"\n")
    if not sep or head.decode(errors="replace") != MAGIC:
        raise VersionMismatch(f"{path} does not start with the {MAGIC} tag")
    header_end = blob.find(b"\n\n")
    if header_end < 0:
        raise CorruptPayload("missing header terminator")
    header = blob[:header_end].decode()
    payload = blob[header_end + 2:]

    kind = None
    config = {}
    manifest = []
    crc = None
    for line in header.splitlines()[1:]:
        if line.startswith("kind="):
            kind = line[5:]
        elif line.startswith("config:"):
            key, _, value = line[7:].partition("=")
            config[key] = value
        elif line.startswith(("param:", "buffer:")):
            prefix, name, shape, dtype, offset = line.split(":")
            dims = () if shape == "scalar" else tuple(int(s) for s in shape.split("x"))
            manifest.append((prefix, name, dims, dtype, int(offset)))
        elif line.startswith("crc32="):
            crc = int(line[6:], 16)
    if kind is None or crc is None:
        raise CorruptPayload("incomplete header")
    if zlib.crc32(payload) != crc:
        raise CorruptPayload("payload checksum mismatch")

    params, buffers = {}, {}
    for prefix, name, dims, _, offset in manifest:
        count = int(np.prod(dims)) if dims else 1
        end = offset + 4 * count
        if end > len(payload):
            raise CorruptPayload(f"manifest entry {name} overruns payload")
        array = np.frombuffer(payload[offset:end], dtype="<f4").reshape(dims).copy()
        (params if prefix == "param" else buffers)[name] = array
    return kind, config, params, buffers
