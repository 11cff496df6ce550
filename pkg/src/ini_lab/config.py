"""Plain-text run configuration (``key = value`` per line, ``#`` comments)."""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

from .channel import IDENTITY, ChannelModel, parse_channel
from .errors import ConfigError
from .numerology import CpMode, MultiplexPair, db_to_linear

MODULATIONS = ("bpsk", "qpsk")


def _number(text: str) -> float:
    # Accept fractions such as 1/16 as well as decimals.
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {text!r}") from None


def _integer(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None


@dataclass
class RunConfig:
    n_fft: int = 128
    q: int = 2
    eta_nsn: float = 0.5
    eta_wsn: float | None = None
    cp_ratio: float = 1 / 16
    power_nsn_db: float = 0.0
    power_wsn_db: float = 0.0
    cp_mode: CpMode = CpMode.INDIVIDUAL
    trials: int = 10_000
    seed: int = 1
    modulation: str = "bpsk"
    channel: ChannelModel = field(default=IDENTITY)

    def pair(self) -> MultiplexPair:
        eta_wsn = 1.0 - self.eta_nsn if self.eta_wsn is None else self.eta_wsn
        return MultiplexPair(
            n_fft=self.n_fft, q=self.q, eta_nsn=self.eta_nsn, eta_wsn=eta_wsn,
            cp_ratio=self.cp_ratio, power_nsn=db_to_linear(self.power_nsn_db),
            power_wsn=db_to_linear(self.power_wsn_db), cp_mode=self.cp_mode,
        )

    def check(self) -> "RunConfig":
        if self.modulation not in MODULATIONS:
            raise ConfigError(f"modulation must be one of {MODULATIONS}, got {self.modulation!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        self.pair()
        return self

    def updated(self, **overrides) -> "RunConfig":
        known = {f.name for f in fields(self)}
        return replace(self, **{k: v for k, v in overrides.items() if k in known and v is not None})


_PARSERS = {
    "n_fft": _integer, "q": _integer, "trials": _integer, "seed": _integer,
    "eta_nsn": _number, "eta_wsn": _number, "cp_ratio": _number,
    "power_nsn_db": _number, "power_wsn_db": _number,
    "cp_mode": lambda s: _enum(CpMode, s), "modulation": lambda s: s.strip().lower(),
    "channel": parse_channel,
}


def _enum(cls, text):
    try:
        return cls(text.strip().lower())
    except ValueError:
        raise ConfigError(f"bad value {text!r} for {cls.__name__}") from None


def parse_config(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _PARSERS[key](value)
    return values


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    return RunConfig().updated(**parse_config(text))
