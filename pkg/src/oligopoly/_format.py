from __future__ import annotations


def fixed(value: float) -> str:
    """Six fractional digits, with negative zero folded to zero."""
    text = f"{value:.6f}"
    return text[1:] if text == "-0.000000" else text


def compact(value: float) -> str:
    """At most six fractional digits, trailing zeros dropped."""
    text = fixed(value).rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text
