"""Line-oriented text format for series.

    #modulus <0|p|p^r>      0 means exact coefficients
    #order <N>
    #name <string>          optional
    #domain rational        optional; forces ExactRational for modulus 0
    c_0
    ...
    c_N                     decimal integers, rationals as num/den
"""
import os
from fractions import Fraction

from .domain import QQ, RATIONAL, ZZ, from_modulus
from .errors import DAlgebraError, FormatError
from .series import PowerSeries


def format_modulus(domain):
    if not domain.is_modular:
        return "0"
    if domain.r == 1:
        return str(domain.p)
    return "%d^%d" % (domain.p, domain.r)


def parse_modulus(text):
    text = text.strip()
    if "^" in text:
        p, r = text.split("^", 1)
        return int(p) ** int(r)
    return int(text)


def write_series(series, path, name=None):
    lines = ["#modulus " + format_modulus(series.domain), "#order %d" % series.order]
    if name:
        lines.append("#name " + name)
    if series.domain.kind == RATIONAL:
        lines.append("#domain rational")
    lines.extend(str(c) for c in series.coeffs)
    tmp = str(path) + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_series_with_name(path):
    header = {}
    values = []
    linenos = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if values:
                    raise FormatError("header after coefficients", path, lineno)
                key, _, val = line[1:].partition(" ")
                header[key.strip()] = (val.strip(), lineno)
                continue
            try:
                if "/" in line:
                    num, den = line.split("/")
                    values.append(Fraction(int(num), int(den)))
                else:
                    values.append(int(line))
                linenos.append(lineno)
            except (ValueError, ZeroDivisionError):
                raise FormatError("bad coefficient %r" % line, path, lineno)
    for key in ("modulus", "order"):
        if key not in header:
            raise FormatError("missing #%s header" % key, path, 1)
    try:
        modulus = parse_modulus(header["modulus"][0])
    except ValueError:
        raise FormatError("bad modulus", path, header["modulus"][1])
    try:
        order = int(header["order"][0])
    except ValueError:
        raise FormatError("bad order", path, header["order"][1])
    if len(values) != order + 1:
        raise FormatError("expected %d coefficients, found %d" % (order + 1, len(values)), path)
    try:
        domain = from_modulus(modulus)
    except DAlgebraError as exc:
        raise FormatError(str(exc), path, header["modulus"][1])
    rational = any(isinstance(v, Fraction) for v in values)
    if domain.is_modular:
        if rational:
            raise FormatError("rational entry in a modular file", path)
        for i, v in enumerate(values):
            if not 0 <= v < modulus:
                raise FormatError("residue %d out of range" % v, path, linenos[i])
    elif rational or header.get("domain", ("",))[0] == "rational":
        domain = QQ
    else:
        domain = ZZ
    name = header.get("name", (None,))[0]
    return PowerSeries(domain, values, order), name


def read_series(path):
    return read_series_with_name(path)[0]
