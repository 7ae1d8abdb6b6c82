"""
Model checkpoints: a text manifest followed by a raw float32 payload.

    GAZBY-CHECKPOINT 1
    config <key> <value>          one line per config echo entry
    param <name> <shape> <offset> shape as comma-separated extents, offset in bytes
    END
    <payload>                     little-endian float32, row-major, manifest order

Loading refuses a checkpoint whose config echo disagrees with the target
model, and names the first parameter the payload cannot fill.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from numerics import Parameter
from utils.errors import CheckpointError, NumericalError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["Checkpointable", "ManifestEntry", "CheckpointManifest", "save_checkpoint", "read_manifest", "load_checkpoint"]

MAGIC = "GAZBY-CHECKPOINT 1"
END = "END"
PAYLOAD_DTYPE = np.dtype("<f4")


class Checkpointable(Protocol):
    def named_parameters(self) -> list[tuple[str, Parameter]]: ...

    def config_echo(self) -> dict[str, str]: ...


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    shape: tuple[int, ...]
    offset: int

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))

    @property
    def nbytes(self) -> int:
        return self.size * PAYLOAD_DTYPE.itemsize


@dataclass
class CheckpointManifest:
    echo: dict[str, str] = field(default_factory=dict)
    entries: list[ManifestEntry] = field(default_factory=list)
    payload_start: int = 0


def _format_shape(shape: tuple[int, ...]) -> str:
    return ",".join(str(s) for s in shape) if shape else "-"


def _parse_shape(text: str) -> tuple[int, ...]:
    return () if text == "-" else tuple(int(s) for s in text.split(","))


def save_checkpoint(model: Checkpointable, path: str | Path) -> Path:
    """Write every named parameter of model, in order, with its config echo."""
    path = Path(path)
    named = model.named_parameters()
    lines = [MAGIC]
    for key, value in model.config_echo().items():
        if any(c.isspace() for c in key + value) or not value:
            raise CheckpointError(f"config echo entry {key}={value!r} cannot be written")
        lines.append(f"config {key} {value}")

    chunks = []
    offset = 0
    for name, param in named:
        if not np.isfinite(param.data).all():
            raise NumericalError(f"parameter {name} holds non-finite values; refusing to checkpoint")
        lines.append(f"param {name} {_format_shape(param.shape)} {offset}")
        chunk = np.ascontiguousarray(param.data, dtype=PAYLOAD_DTYPE).tobytes()
        chunks.append(chunk)
        offset += len(chunk)
    lines.append(END)

    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as handle:
        handle.write(("\n".join(lines) + "\n").encode("utf-8"))
        for chunk in chunks:
            handle.write(chunk)
    logger.info(f"Saved checkpoint {path.name}: {len(named)} tensors, {offset:,} payload bytes")
    return path


def _parse_manifest(raw: bytes, path: Path) -> CheckpointManifest:
    marker = f"\n{END}\n".encode()
    end = raw.find(marker)
    if not raw.startswith(MAGIC.encode()) or end < 0:
        raise CheckpointError(f"{path}: not a checkpoint (missing header or END marker)")

    manifest = CheckpointManifest(payload_start=end + len(marker))
    for line_no, line in enumerate(raw[:end].decode("utf-8").split("\n")[1:], start=2):
        fields = line.split(" ")
        try:
            if fields[0] == "config" and len(fields) == 3:
                manifest.echo[fields[1]] = fields[2]
            elif fields[0] == "param" and len(fields) == 4:
                manifest.entries.append(ManifestEntry(fields[1], _parse_shape(fields[2]), int(fields[3])))
            else:
                raise ValueError(f"unrecognised manifest line {line!r}")
        except ValueError as e:
            raise CheckpointError(f"{path}:{line_no}: {e}") from e
    return manifest


def read_manifest(path: str | Path) -> CheckpointManifest:
    path = Path(path)
    return _parse_manifest(path.read_bytes(), path)


def load_checkpoint(model: Checkpointable, path: str | Path) -> CheckpointManifest:
    """
    Copy checkpointed values into model's parameters.

    Raises:
        CheckpointError: config echo mismatch, unknown or missing parameters,
                         shape drift, inconsistent offsets or a short payload
    """
    path = Path(path)
    raw = path.read_bytes()
    manifest = _parse_manifest(raw, path)
    payload = memoryview(raw)[manifest.payload_start :]

    current = model.config_echo()
    drift = [
        f"{key}: checkpoint {manifest.echo.get(key)} vs model {current.get(key)}"
        for key in sorted(set(current) | set(manifest.echo))
        if current.get(key) != manifest.echo.get(key)
    ]
    if drift:
        raise CheckpointError(f"{path.name} was saved with a different configuration: " + "; ".join(drift))

    params = dict(model.named_parameters())
    names = [entry.name for entry in manifest.entries]
    if set(names) != set(params):
        missing = sorted(set(params) - set(names))
        unknown = sorted(set(names) - set(params))
        raise CheckpointError(f"{path.name} parameter mismatch: missing {missing}, unknown {unknown}")

    expected_offset = 0
    for entry in manifest.entries:
        param = params[entry.name]
        if entry.shape != param.shape:
            raise CheckpointError(f"{entry.name}: checkpoint shape {entry.shape} vs model shape {param.shape}")
        if entry.offset != expected_offset:
            raise CheckpointError(f"{entry.name}: offset {entry.offset}, expected {expected_offset}")
        if entry.offset + entry.nbytes > len(payload):
            raise CheckpointError(
                f"{path.name} is truncated: {entry.name} needs bytes {entry.offset}..{entry.offset + entry.nbytes}, "
                f"payload has {len(payload)}"
            )
        values = np.frombuffer(payload, dtype=PAYLOAD_DTYPE, count=entry.size, offset=entry.offset)
        param.data[...] = values.reshape(entry.shape).astype(param.dtype)
        expected_offset += entry.nbytes

    logger.info(f"Loaded checkpoint {path.name}: {len(manifest.entries)} tensors")
    return manifest
