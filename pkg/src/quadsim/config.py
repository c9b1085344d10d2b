"""Flat ``key = value`` config files with gain-record sections.

Recognised sections::

    [run]               scenario, controller, ts, duration, noise, seed, ekf_mode
    [params]            QuadParams fields
    [ekf]               q_scalar, r_scalar, p0
    [attitude]          AttitudeGains fields
    [position]          eps_b_scale
    [controller.NAME]   gains for ahsmc | ihsmc | chsmc | pid | sosmc

Keys before the first header belong to [run].  Unknown sections or keys
are errors, so a typo never silently falls back to a default.
"""
import configparser
from dataclasses import fields, replace
from pathlib import Path

from .errors import InvalidParameter
from .params import (AhsmcGains, AttitudeGains, ChsmcGains, IhsmcGains, NoiseConfig,
                     PidGains, QuadParams, SoSmcGains)

DEFAULT_CONFIG = Path(__file__).with_name("default.cfg")

RUN_KEYS = {
    "scenario": int,
    "controller": str,
    "ts": float,
    "duration": float,
    "noise": "onoff",
    "seed": int,
    "ekf_mode": str,
}

GAIN_SECTIONS = {
    "attitude": AttitudeGains,
    "controller.ahsmc": AhsmcGains,
    "controller.ihsmc": IhsmcGains,
    "controller.chsmc": ChsmcGains,
    "controller.pid": PidGains,
    "controller.sosmc": SoSmcGains,
}


def _parse_bool(text, key):
    v = text.strip().lower()
    if v in ("on", "true", "yes", "1"):
        return True
    if v in ("off", "false", "no", "0"):
        return False
    raise InvalidParameter(f"{key}: expected on/off, got {text!r}")


def _convert(text, kind, key):
    if kind == "onoff" or kind is bool:
        return _parse_bool(text, key)
    try:
        return kind(text.strip())
    except ValueError:
        raise InvalidParameter(f"{key}: cannot parse {text!r} as {kind.__name__}") from None


def _apply(record, section, items):
    types = {f.name: f.type for f in fields(record)}
    changes = {}
    for key, text in items:
        if key not in types:
            raise InvalidParameter(f"[{section}] unknown key {key!r}")
        kind = types[key]
        kind = {"float": float, "int": int, "bool": bool}.get(kind, kind)
        changes[key] = _convert(text, kind, f"[{section}] {key}")
    try:
        return replace(record, **changes)
    except ValueError as exc:
        raise InvalidParameter(f"[{section}] {exc}") from None


def read_config(path):
    """Parse a config file into (run_settings, params, noise, p0, gains dict)."""
    text = Path(path).read_text(encoding="utf-8")
    cp = configparser.ConfigParser(comment_prefixes=("#",), inline_comment_prefixes=("#",),
                                   interpolation=None, delimiters=("=",), strict=False)
    cp.optionxform = str
    try:
        cp.read_string("[run]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise InvalidParameter(f"{path}: {exc}") from None

    run = {}
    params = QuadParams()
    noise = NoiseConfig()
    p0 = None
    gains = {}
    for section in cp.sections():
        items = list(cp.items(section))
        if section == "run":
            for key, text in items:
                if key not in RUN_KEYS:
                    raise InvalidParameter(f"[run] unknown key {key!r}")
                run[key] = _convert(text, RUN_KEYS[key], f"[run] {key}")
        elif section == "params":
            params = _apply(params, section, items)
        elif section == "ekf":
            rest = []
            for key, text in items:
                if key == "p0":
                    p0 = _convert(text, float, "[ekf] p0")
                else:
                    rest.append((key, text))
            noise = _apply(noise, section, rest)
        elif section == "position":
            for key, text in items:
                if key != "eps_b_scale":
                    raise InvalidParameter(f"[position] unknown key {key!r}")
                gains["eps_b_scale"] = _convert(text, float, "[position] eps_b_scale")
        elif section in GAIN_SECTIONS:
            name = section.split(".")[-1]
            gains[name] = _apply(GAIN_SECTIONS[section](), section, items)
        else:
            raise InvalidParameter(f"unknown section [{section}]")
    return run, params, noise, p0, gains
