"""Thin wrappers around scipy.fft honouring the DGSIM_THREADS cap."""

import os

import scipy.fft as _sfft


def workers() -> int:
    value = os.environ.get("DGSIM_THREADS", "").strip()
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def fft(a, axis=-1):
    return _sfft.fft(a, axis=axis, workers=workers())


def ifft(a, axis=-1):
    return _sfft.ifft(a, axis=axis, workers=workers())
