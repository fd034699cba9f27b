"""Run configuration: a plain key=value file, overridden by command-line flags."""

from dataclasses import dataclass, fields, replace

from ..errors import InvalidArgument


@dataclass(frozen=True)
class CensusConfig:
    max_disc: int = 100000
    max_regulator: float = 6.0
    coeff_bound: int = 8
    set_S: tuple = (2, 3)
    class_bound_ceiling: float = 200.0
    cache_dir: str = None
    threads: int = 1

    def override(self, **kw):
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **{k: _convert(k, v) for k, v in kw.items()})


def _parse_S(v):
    if isinstance(v, (tuple, list)):
        return tuple(int(p) for p in v)
    parts = [p for p in str(v).replace(" ", "").split(",") if p]
    return tuple(int(p) for p in parts)


_CONVERTERS = {
    "max_disc": int,
    "max_regulator": float,
    "coeff_bound": int,
    "set_S": _parse_S,
    "class_bound_ceiling": float,
    "cache_dir": str,
    "threads": int,
}


def _convert(key, value):
    if key not in _CONVERTERS:
        raise InvalidArgument(f"unknown configuration key {key!r}")
    try:
        out = _CONVERTERS[key](value)
    except (TypeError, ValueError):
        raise InvalidArgument(f"bad value {value!r} for {key}") from None
    if key == "threads" and out < 1:
        raise InvalidArgument("threads must be at least 1")
    return out


def parse_config(text) -> CensusConfig:
    vals = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"config line {lineno}: expected key=value")
        k, v = (t.strip() for t in line.split("=", 1))
        vals[k] = _convert(k, v)
    return CensusConfig(**vals)


def load_config(path=None) -> CensusConfig:
    if path is None:
        return CensusConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise InvalidArgument(f"cannot read config {path}: {exc}") from None


CONFIG_KEYS = tuple(f.name for f in fields(CensusConfig))
