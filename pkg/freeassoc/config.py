"""
Run configuration and output metadata.

Config files are flat key-value text:

    # comment
    key = value

One assignment per line, blank lines and lines starting with # are
ignored, keys come from a fixed set.  Values given on the command line
override the file.

Every output carries a metadata block {tool, version, seed, parameters,
created}: inside JSON outputs under "metadata", next to CSV/TSV outputs as
a <file>.meta.json sidecar.

"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from datetime import datetime, timezone
from typing import Any, Callable, Dict, Optional, Union

from freeassoc import FreeAssocException, __version__
from freeassoc.activation.spreading import ActivationException, ActivationParams
from freeassoc.stats import Normalization

TOOL_NAME = "freeassoc"
AUTO = "auto"
SIDECAR_SUFFIX = ".meta.json"


class ConfigException(FreeAssocException):
    pass


def parse_bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _optional(convert: Callable[[str], Any]) -> Callable[[str], Any]:
    def parse(value: str):
        return None if value.strip().lower() == AUTO else convert(value)
    return parse


def read_kv_file(path: str, allowed: Dict[str, Callable[[str], Any]]) -> Dict[str, Any]:
    """
    Parse a key-value config file, converting each value with allowed[key].

    Raises:
        ConfigException:
            malformed line, unknown or repeated key, or a bad value; the
            message names the file and line
    """
    values: Dict[str, Any] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigException(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in stripped.split("=", 1))
            if key not in allowed:
                raise ConfigException(f"{path}:{lineno}: unknown key {key!r}")
            if key in values:
                raise ConfigException(f"{path}:{lineno}: key {key!r} given twice")
            try:
                values[key] = allowed[key](value)
            except (ValueError, TypeError) as e:
                raise ConfigException(f"{path}:{lineno}: bad value for {key}: {e}")
    return values


@dataclass(frozen=True)
class RunConfig:
    """
    Settings shared by every subcommand.

    Arguments:
        lexicon_dir:Optional[str]
            directory holding words.txt, lemmas.tsv, spelling.tsv, compounds.tsv
        seed:int
            seed for the balancing step
            Default: 0
        retention, decay, suppress, initial_activation, iterations, weighted
            spreading activation settings; None means auto
        normalization:str
            l1, max or zscore
            Default: l1
        output_dir:str
            Default: "."
        verbosity:int
            0 warnings, 1 info, 2 debug
        threads:Optional[int]
            worker cap for activation batches and generation
    """
    lexicon_dir: Optional[str] = None
    seed: int = 0
    retention: float = 0.5
    decay: float = 0.0
    suppress: float = 0.0
    initial_activation: Optional[float] = None
    iterations: Optional[int] = None
    weighted: bool = True
    normalization: str = Normalization.L1.value
    output_dir: str = "."
    verbosity: int = 0
    threads: Optional[int] = None

    def __post_init__(self):
        try:
            Normalization(self.normalization)
        except ValueError:
            raise ConfigException(f"Unknown normalization {self.normalization!r}")
        if self.verbosity < 0:
            raise ConfigException("verbosity must be non-negative")
        if self.threads is not None and self.threads < 1:
            raise ConfigException("threads must be at least 1")

    @classmethod
    def from_file(cls, path: str, base: Optional["RunConfig"] = None) -> "RunConfig":
        """Values from the file on top of `base` (default: the defaults)"""
        values = read_kv_file(path, RUN_KEYS)
        return replace(base, **values) if base is not None else cls(**values)

    def with_overrides(self, **overrides) -> "RunConfig":
        """Replace fields whose override is not None"""
        known = {f.name for f in fields(self)}
        changes = {k: v for k, v in overrides.items() if v is not None and k in known}
        return replace(self, **changes)

    def activation_params(self) -> ActivationParams:
        try:
            return ActivationParams(retention=self.retention, decay=self.decay, suppress=self.suppress,
                                    initial_activation=self.initial_activation, iterations=self.iterations,
                                    weighted=self.weighted)
        except ActivationException as e:
            raise ConfigException(str(e))

    def to_dict(self) -> dict:
        return asdict(self)


RUN_KEYS: Dict[str, Callable[[str], Any]] = {
    "lexicon_dir": str,
    "seed": int,
    "retention": float,
    "decay": float,
    "suppress": float,
    "initial_activation": _optional(float),
    "iterations": _optional(int),
    "weighted": parse_bool,
    "normalization": str,
    "output_dir": str,
    "verbosity": int,
    "threads": _optional(int),
}


def build_metadata(seed: Optional[int], parameters: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "seed": seed,
        "parameters": parameters,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def write_json(path: str, payload: Dict[str, Any], metadata: Optional[Dict[str, Any]] = None) -> None:
    """Write payload as sorted, indented JSON, with metadata embedded under "metadata" """
    doc = dict(payload)
    if metadata is not None:
        doc["metadata"] = metadata
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(doc, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")


def write_sidecar(path: Union[str, os.PathLike], metadata: Dict[str, Any]) -> str:
    """Metadata for a CSV/TSV output; returns the sidecar path"""
    sidecar = f"{os.fspath(path)}{SIDECAR_SUFFIX}"
    with open(sidecar, "w", encoding="utf-8", newline="\n") as f:
        json.dump(metadata, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    return sidecar
