"""Flat key=value config files -> a validated LinkConfig.

Format: one ``section.key = value`` per line, ``#`` comments, blank lines
ignored. Unknown keys, malformed values, duplicates, and out-of-range
settings are all rejected with the offending line number and key. An empty
file yields the full default configuration.
"""
from __future__ import annotations

from typing import Any, Callable

from .fiber import AmplifierParams, FiberParams, SsfmOptions
from .link import SCHEMES, LinkConfig, SimSettings
from .receiver import RxConfig
from .signals import ALLOWED_SAMPLES_PER_BIT
from .transmitter import PRBS_TAPS, TxConfig

__all__ = ["ConfigError", "parse_config", "parse_config_file", "KNOWN_KEYS"]


class ConfigError(ValueError):
    """A config file failed to parse or validate."""


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"expected a number, got {text!r}") from None


def _parse_choice(choices: tuple[str, ...]) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in choices:
            raise ValueError(f"expected one of {choices}, got {text!r}")
        return text

    return parse


def _parse_amp_mode(text: str) -> tuple[str, float | None]:
    if text == "restore":
        return ("restore", None)
    if text.startswith("fixed:"):
        return ("fixed", _parse_float(text[len("fixed:") :]))
    raise ValueError(f"expected 'restore' or 'fixed:<dB>', got {text!r}")


def _positive(name: str, parse: Callable[[str], Any]) -> Callable[[str], Any]:
    def check(text: str) -> Any:
        value = parse(text)
        if not value > 0:
            raise ValueError(f"must be > 0, got {value}")
        return value

    return check


def _non_negative(name: str, parse: Callable[[str], Any]) -> Callable[[str], Any]:
    def check(text: str) -> Any:
        value = parse(text)
        if value < 0:
            raise ValueError(f"must be >= 0, got {value}")
        return value

    return check


def _in_set(allowed: tuple[int, ...]) -> Callable[[str], int]:
    def check(text: str) -> int:
        value = _parse_int(text)
        if value not in allowed:
            raise ValueError(f"must be one of {allowed}, got {value}")
        return value

    return check


# key -> value parser. Every key here maps one-to-one onto a dataclass field;
# range checks the dataclasses enforce are repeated here only where the raw
# value needs them before unit conversion.
_SCHEMA: dict[str, Callable[[str], Any]] = {
    "link.scheme": _parse_choice(SCHEMES),
    "link.n_smf_spans": _positive("link.n_smf_spans", _parse_int),
    "smf.length_km": _non_negative("smf.length_km", _parse_float),
    "smf.dispersion_ps_nm_km": _parse_float,
    "smf.loss_db_km": _non_negative("smf.loss_db_km", _parse_float),
    "smf.gamma_per_w_km": _non_negative("smf.gamma_per_w_km", _parse_float),
    "dcf.length_km": _non_negative("dcf.length_km", _parse_float),
    "dcf.pre_length_km": _non_negative("dcf.pre_length_km", _parse_float),
    "dcf.post_length_km": _non_negative("dcf.post_length_km", _parse_float),
    "dcf.dispersion_ps_nm_km": _parse_float,
    "dcf.loss_db_km": _non_negative("dcf.loss_db_km", _parse_float),
    "dcf.gamma_per_w_km": _non_negative("dcf.gamma_per_w_km", _parse_float),
    "tx.bit_rate_gbps": _positive("tx.bit_rate_gbps", _parse_float),
    "tx.wavelength_nm": _positive("tx.wavelength_nm", _parse_float),
    "tx.power_dbm": _parse_float,
    "tx.linewidth_mhz": _non_negative("tx.linewidth_mhz", _parse_float),
    "tx.prbs_order": _in_set(tuple(sorted(PRBS_TAPS))),
    "tx.rise_time_ui": _parse_float,
    "tx.extinction_db": _positive("tx.extinction_db", _parse_float),
    "rx.responsivity_a_w": _positive("rx.responsivity_a_w", _parse_float),
    "rx.thermal_psd": _non_negative("rx.thermal_psd", _parse_float),
    "rx.shot_noise": _parse_bool,
    "rx.bessel_order": _parse_int,
    "rx.bessel_bw_ghz": _positive("rx.bessel_bw_ghz", _parse_float),
    "amp.mode": _parse_amp_mode,
    "amp.ase": _parse_bool,
    "amp.noise_figure_db": _parse_float,
    "sim.n_bits": _positive("sim.n_bits", _parse_int),
    "sim.samples_per_bit": _in_set(ALLOWED_SAMPLES_PER_BIT),
    "sim.step_km": _positive("sim.step_km", _parse_float),
    "sim.max_nl_phase_rad": _positive("sim.max_nl_phase_rad", _parse_float),
    "sim.seed": _non_negative("sim.seed", _parse_int),
    "sim.skip_bits": _non_negative("sim.skip_bits", _parse_int),
}

KNOWN_KEYS = tuple(sorted(_SCHEMA))


def parse_config(text: str) -> LinkConfig:
    """Parse config text into a fully defaulted, validated LinkConfig."""
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value_text = line.partition("=")
        key = key.strip()
        value_text = value_text.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(
                f"line {lineno}: duplicate key {key!r} (first set on line {lines[key]})"
            )
        if not value_text:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        try:
            values[key] = _SCHEMA[key](value_text)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: key {key!r}: {exc}") from None
        lines[key] = lineno

    if "sim.step_km" in values and "sim.max_nl_phase_rad" in values:
        lineno = max(lines["sim.step_km"], lines["sim.max_nl_phase_rad"])
        raise ConfigError(
            f"line {lineno}: sim.step_km and sim.max_nl_phase_rad are mutually exclusive"
        )

    try:
        smf = FiberParams(
            length_km=values.get("smf.length_km", 120.0),
            dispersion_ps_nm_km=values.get("smf.dispersion_ps_nm_km", 16.0),
            loss_db_km=values.get("smf.loss_db_km", 0.2),
            gamma_per_w_km=values.get("smf.gamma_per_w_km", 1.26677),
            label="SMF",
        )
        dcf_base = values.get("dcf.length_km", 24.0)
        dcf = FiberParams(
            length_km=dcf_base,
            dispersion_ps_nm_km=values.get("dcf.dispersion_ps_nm_km", -80.0),
            loss_db_km=values.get("dcf.loss_db_km", 0.6),
            gamma_per_w_km=values.get("dcf.gamma_per_w_km", 1.8),
            label="DCF",
        )
        tx = TxConfig(
            bit_rate=values.get("tx.bit_rate_gbps", 10.0) * 1e9,
            wavelength=values.get("tx.wavelength_nm", 1550.0) * 1e-9,
            launch_power_dbm=values.get("tx.power_dbm", 0.0),
            linewidth_hz=values.get("tx.linewidth_mhz", 10.0) * 1e6,
            prbs_order=values.get("tx.prbs_order", 7),
            rise_time=values.get("tx.rise_time_ui", 0.25),
            extinction_db=values.get("tx.extinction_db", 30.0),
        )
        rx = RxConfig(
            responsivity=values.get("rx.responsivity_a_w", 1.0),
            thermal_noise_psd=values.get("rx.thermal_psd", 1e-11),
            shot_noise=values.get("rx.shot_noise", True),
            bessel_order=values.get("rx.bessel_order", 4),
            bessel_bandwidth=values.get("rx.bessel_bw_ghz", 8.0) * 1e9,
        )
        amp_mode, amp_gain = values.get("amp.mode", ("restore", None))
        amp = AmplifierParams(
            mode=amp_mode,
            target_dbm=None,
            gain_db=amp_gain,
            ase_enabled=values.get("amp.ase", False),
            noise_figure_db=values.get("amp.noise_figure_db", 5.0),
        )
        if "sim.max_nl_phase_rad" in values:
            ssfm = SsfmOptions(mode="adaptive", max_nl_phase_rad=values["sim.max_nl_phase_rad"])
        else:
            ssfm = SsfmOptions(mode="fixed", step_km=values.get("sim.step_km", 0.1))
        sim = SimSettings(
            n_bits=values.get("sim.n_bits", 1024),
            samples_per_bit=values.get("sim.samples_per_bit", 32),
            seed=values.get("sim.seed", 42),
            skip_bits=values.get("sim.skip_bits", 8),
            ssfm=ssfm,
        )
        scheme = values.get("link.scheme", "symmetric")
        # The side a scheme does not use defaults to zero length.
        pre_default = dcf_base if scheme in ("pre", "symmetric") else 0.0
        post_default = dcf_base if scheme in ("post", "symmetric") else 0.0
        config = LinkConfig(
            scheme=scheme,
            n_smf_spans=values.get("link.n_smf_spans", 2),
            smf=smf,
            dcf=dcf,
            pre_length_km=values.get("dcf.pre_length_km", pre_default),
            post_length_km=values.get("dcf.post_length_km", post_default),
            tx=tx,
            rx=rx,
            amp=amp,
            sim=sim,
        )
        config.validate()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return config


def parse_config_file(path: str) -> LinkConfig:
    """Read and parse a config file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
